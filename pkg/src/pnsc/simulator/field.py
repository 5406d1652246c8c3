"""Poisson interference field: configuration, synthesis, empirical estimates.

Each occupied carrier sees an independent Poisson field of emitters on a
disc of radius r_t.  An emitter at radius r contributes
r^(-sigma/2) * A * c * e^{j Phi} with independent fading amplitude A, real
channel coefficient c, and uniform phase Phi.  Because the phase is uniform
and independent, only |c| affects the law of the sum; the synthesis kernels
exploit that, while draw_field exposes the signed marks.

Non-homogeneous intensities are simulated through the measure-preserving
map to a homogeneous process: a power-law radial intensity lambda0 *
r^(beta_s - 2) becomes homogeneous with rate lambda0 * 2 pi / beta_s in the
coordinate w = r^beta_s.
"""

from __future__ import annotations

import math
import operator
import os
import threading
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import stats

from ..controls import DomainError, NonConvergenceError, ValidationFailure
from ..mixtures import BandwidthKind, BandwidthLaw, CarrierLaw

__all__ = [
    "SINGLE_CARRIER",
    "ChannelKind",
    "ChannelSpec",
    "EmpiricalCf",
    "EmpiricalStats",
    "FadingKind",
    "FadingSpec",
    "FieldConfig",
    "FieldDraw",
    "IQBatch",
    "IntensityKind",
    "IntensityModel",
    "carrier_law_of",
    "draw_field",
    "empirical_cf",
    "empirical_stats",
    "estimate_tail_index",
    "expected_count",
    "map_intensity",
    "moment_ac",
    "synthesize",
]

_U64_MASK = (1 << 64) - 1
#: stream tags appended to the seed so the sub-draws never share a stream
_STREAM_K = 1
_STREAM_COUNTS = 2
_STREAM_BOOT = 17


class IntensityKind(Enum):
    HOMOGENEOUS = "homogeneous"
    TIME_PROFILE = "time-profile"
    SPATIAL_POWER_LAW = "spatial-power-law"
    SECTOR = "sector"


@dataclass(frozen=True, slots=True)
class IntensityModel:
    """Emitter intensity; parameters beyond the kind live here.

    TIME_PROFILE tabulates an arrival rate over the averaging window; its
    integral is the effective area intensity.  SPATIAL_POWER_LAW is the
    radial density lambda0 * r^(beta_s - 2).  SECTOR restricts emitters to
    angle [0, phi).
    """

    kind: IntensityKind = IntensityKind.HOMOGENEOUS
    times: tuple[float, ...] | None = None
    rates: tuple[float, ...] | None = None
    lambda0: float | None = None
    beta_s: float | None = None
    phi: float | None = None

    def __post_init__(self) -> None:
        if self.kind is IntensityKind.TIME_PROFILE:
            if self.times is None or self.rates is None or len(self.times) == 0:
                raise DomainError("time profile needs tabulated times and rates")
            if len(self.times) != len(self.rates) or len(self.times) < 2:
                raise DomainError("time profile needs >= 2 (time, rate) pairs")
            t = np.asarray(self.times, dtype=float)
            r = np.asarray(self.rates, dtype=float)
            if not (np.all(np.diff(t) > 0.0) and np.all(np.isfinite(t))):
                raise DomainError("profile times must be finite and strictly increasing")
            if not (np.all(r >= 0.0) and np.all(np.isfinite(r))):
                raise DomainError("profile rates must be finite and nonnegative")
        elif self.kind is IntensityKind.SPATIAL_POWER_LAW:
            if self.lambda0 is None or not (0.0 < self.lambda0 < math.inf):
                raise DomainError("power-law intensity needs lambda0 > 0")
            if self.beta_s is None or not (0.0 < self.beta_s < math.inf):
                raise DomainError("power-law intensity needs beta_s > 0")
        elif self.kind is IntensityKind.SECTOR:
            if self.phi is None or not (0.0 < self.phi <= 2.0 * math.pi):
                raise DomainError("sector angle must lie in (0, 2*pi]")

    @staticmethod
    def homogeneous() -> "IntensityModel":
        return IntensityModel(IntensityKind.HOMOGENEOUS)

    @staticmethod
    def time_profile(times, rates) -> "IntensityModel":
        return IntensityModel(
            IntensityKind.TIME_PROFILE, times=tuple(times), rates=tuple(rates)
        )

    @staticmethod
    def spatial_power_law(lambda0: float, beta_s: float) -> "IntensityModel":
        return IntensityModel(
            IntensityKind.SPATIAL_POWER_LAW, lambda0=lambda0, beta_s=beta_s
        )

    @staticmethod
    def sector(phi: float) -> "IntensityModel":
        return IntensityModel(IntensityKind.SECTOR, phi=phi)


class FadingKind(Enum):
    CONSTANT = "constant"
    RAYLEIGH = "rayleigh"


@dataclass(frozen=True, slots=True)
class FadingSpec:
    """Law of the nonnegative fading amplitude A."""

    kind: FadingKind = FadingKind.CONSTANT
    value: float = 1.0

    def __post_init__(self) -> None:
        if not (self.value > 0.0 and math.isfinite(self.value)):
            raise DomainError("fading parameter must be positive and finite")

    @staticmethod
    def constant(amplitude: float = 1.0) -> "FadingSpec":
        return FadingSpec(FadingKind.CONSTANT, amplitude)

    @staticmethod
    def rayleigh(scale: float) -> "FadingSpec":
        return FadingSpec(FadingKind.RAYLEIGH, scale)

    def moment(self, q: float) -> float:
        """E[A^q]."""
        if self.kind is FadingKind.CONSTANT:
            return self.value**q
        # Rayleigh(s): E[A^q] = (2 s^2)^(q/2) Gamma(1 + q/2)
        return (2.0 * self.value**2) ** (q / 2.0) * math.gamma(1.0 + q / 2.0)


class ChannelKind(Enum):
    RADEMACHER = "rademacher"
    GAUSSIAN = "gaussian"
    CONSTANT = "constant"


@dataclass(frozen=True, slots=True)
class ChannelSpec:
    """Law of the real channel coefficient c."""

    kind: ChannelKind = ChannelKind.RADEMACHER
    value: float = 1.0

    def __post_init__(self) -> None:
        if self.kind is ChannelKind.GAUSSIAN and not (
            self.value > 0.0 and math.isfinite(self.value)
        ):
            raise DomainError("gaussian channel needs a positive scale")
        if self.kind is ChannelKind.CONSTANT and not (
            self.value != 0.0 and math.isfinite(self.value)
        ):
            raise DomainError("constant channel coefficient must be nonzero")

    @staticmethod
    def rademacher() -> "ChannelSpec":
        return ChannelSpec(ChannelKind.RADEMACHER)

    @staticmethod
    def gaussian(scale: float) -> "ChannelSpec":
        return ChannelSpec(ChannelKind.GAUSSIAN, scale)

    @staticmethod
    def constant(value: float) -> "ChannelSpec":
        return ChannelSpec(ChannelKind.CONSTANT, value)

    def abs_moment(self, q: float) -> float:
        """E[|c|^q]."""
        if self.kind is ChannelKind.RADEMACHER:
            return 1.0
        if self.kind is ChannelKind.CONSTANT:
            return abs(self.value) ** q
        # |N(0, s^2)|: E = s^q 2^(q/2) Gamma((q+1)/2) / sqrt(pi)
        return (
            self.value**q
            * 2.0 ** (q / 2.0)
            * math.gamma((q + 1.0) / 2.0)
            / math.sqrt(math.pi)
        )


#: bandwidth law pinning K = 1 occupied carrier
SINGLE_CARRIER = BandwidthLaw.poisson(1.0, 1)


@dataclass(frozen=True, slots=True)
class FieldConfig:
    """Full description of one synthesis experiment.

    lam is the area intensity used by the homogeneous and sector kinds;
    the time-profile and power-law kinds carry their own rate parameters.
    """

    lam: float
    r_t: float
    sigma: float
    fading: FadingSpec = FadingSpec.constant()
    channel: ChannelSpec = ChannelSpec.rademacher()
    bandwidth: BandwidthLaw = SINGLE_CARRIER
    intensity: IntensityModel = IntensityModel.homogeneous()

    def __post_init__(self) -> None:
        if not (self.lam > 0.0 and math.isfinite(self.lam)):
            raise DomainError("area intensity lam must be positive and finite")
        if not (self.r_t > 0.0 and math.isfinite(self.r_t)):
            raise DomainError("observation radius r_t must be positive and finite")
        if not (self.sigma > 2.0 and math.isfinite(self.sigma)):
            raise DomainError(
                "path-loss sigma must exceed 2 for the aggregate to converge"
            )


def map_intensity(cfg: FieldConfig) -> float:
    """Effective homogeneous rate after the measure-preserving map.

    Homogeneous and sector kinds return an area intensity; the time profile
    integrates to an area intensity; the spatial power law returns the rate
    per unit of the mapped coordinate w = r^beta_s.
    """
    m = cfg.intensity
    if m.kind is IntensityKind.HOMOGENEOUS:
        return cfg.lam
    if m.kind is IntensityKind.TIME_PROFILE:
        return float(np.trapezoid(np.asarray(m.rates, float), np.asarray(m.times, float)))
    if m.kind is IntensityKind.SPATIAL_POWER_LAW:
        return m.lambda0 * 2.0 * math.pi / m.beta_s
    return cfg.lam * m.phi / (2.0 * math.pi)


def expected_count(cfg: FieldConfig) -> float:
    """Mean number of emitters in one field."""
    lam_eff = map_intensity(cfg)
    if cfg.intensity.kind is IntensityKind.SPATIAL_POWER_LAW:
        return lam_eff * cfg.r_t**cfg.intensity.beta_s
    return lam_eff * math.pi * cfg.r_t**2


def moment_ac(cfg: FieldConfig, q: float) -> float:
    """Cross moment E[A^q] E[|c|^q] of the emitter marks."""
    return cfg.fading.moment(q) * cfg.channel.abs_moment(q)


def carrier_law_of(cfg: FieldConfig) -> CarrierLaw:
    """Analytic per-carrier field law matching this configuration.

    Only geometries equivalent to a uniform disc qualify; a power-law
    intensity with beta_s != 2 changes the aggregate's tail index.
    """
    m = cfg.intensity
    if m.kind is IntensityKind.SPATIAL_POWER_LAW:
        if not math.isclose(m.beta_s, 2.0, rel_tol=1e-12):
            raise DomainError(
                "power-law intensity with beta_s != 2 is not a uniform-disc field"
            )
        lam_eff = map_intensity(cfg) / math.pi
    else:
        lam_eff = map_intensity(cfg)
    if lam_eff <= 0.0:
        raise DomainError("effective intensity must be positive for the analytic law")
    return CarrierLaw(cfg.sigma, lam_eff, moment_ac(cfg, 4.0 / cfg.sigma))


def _geometry(cfg: FieldConfig) -> tuple[float, float]:
    """(w_scale, exponent): amplitude of one emitter is (w_scale*u)^(-exponent)."""
    m = cfg.intensity
    beta = m.beta_s if m.kind is IntensityKind.SPATIAL_POWER_LAW else 2.0
    return cfg.r_t**beta, cfg.sigma / (2.0 * beta)


@dataclass(frozen=True, slots=True)
class FieldDraw:
    """One realized field with its signed per-emitter marks."""

    r: np.ndarray
    phi: np.ndarray
    amplitude: np.ndarray
    channel: np.ndarray
    phase: np.ndarray

    def __post_init__(self) -> None:
        n = self.r.shape[0]
        for arr in (self.phi, self.amplitude, self.channel, self.phase):
            if arr.shape != (n,):
                raise DomainError("field mark arrays must share one length")

    @property
    def count(self) -> int:
        return int(self.r.shape[0])


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(rng))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(rng)))


def draw_field(cfg: FieldConfig, rng) -> FieldDraw:
    """Sample one field: positions and signed marks for a single carrier."""
    g = _as_generator(rng)
    n = int(g.poisson(expected_count(cfg)))
    m = cfg.intensity
    if m.kind is IntensityKind.SPATIAL_POWER_LAW:
        w = g.uniform(0.0, cfg.r_t**m.beta_s, n)
        r = w ** (1.0 / m.beta_s)
    else:
        r = cfg.r_t * np.sqrt(g.random(n))
    top = m.phi if m.kind is IntensityKind.SECTOR else 2.0 * math.pi
    phi = g.uniform(0.0, top, n)
    if cfg.fading.kind is FadingKind.CONSTANT:
        amplitude = np.full(n, cfg.fading.value)
    else:
        amplitude = g.rayleigh(cfg.fading.value, n)
    if cfg.channel.kind is ChannelKind.RADEMACHER:
        channel = g.integers(0, 2, n) * 2.0 - 1.0
    elif cfg.channel.kind is ChannelKind.GAUSSIAN:
        channel = cfg.channel.value * g.standard_normal(n)
    else:
        channel = np.full(n, cfg.channel.value)
    phase = g.uniform(0.0, 2.0 * math.pi, n)
    return FieldDraw(r, phi, amplitude, channel, phase)


@dataclass(frozen=True)
class IQBatch:
    """Synthesized per-carrier complex sums, (replicate, carrier) layout.

    Column k-1 holds carrier k; columns beyond k_used[i] are zero.  seed is
    the reproducibility token: identical (config, seed, kernel) gives a
    bit-identical batch.
    """

    samples: np.ndarray
    k_used: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        if self.samples.ndim != 2 or self.samples.dtype != np.complex128:
            raise DomainError("samples must be a 2-d complex128 array")
        n, k_max = self.samples.shape
        if self.k_used.shape != (n,):
            raise DomainError("k_used must have one entry per replicate")
        if n > 0 and not (
            int(self.k_used.min()) >= 1 and int(self.k_used.max()) <= k_max
        ):
            raise DomainError("k_used entries must lie in 1..k_max")
        if not np.isfinite(self.samples).all():
            raise ValidationFailure("synthesized samples must be finite")
        self.samples.setflags(write=False)
        self.k_used.setflags(write=False)

    @property
    def n_replicates(self) -> int:
        return int(self.samples.shape[0])

    @property
    def k_max(self) -> int:
        return int(self.samples.shape[1])

    def totals(self) -> np.ndarray:
        """Wideband totals, summed across occupied carriers."""
        return self.samples.sum(axis=1)

    def carrier(self, k: int) -> np.ndarray:
        """Samples of carrier k (1-based), restricted to replicates using it."""
        if not 1 <= k <= self.k_max:
            raise DomainError(f"carrier index must lie in 1..{self.k_max}")
        out = self.samples[self.k_used >= k, k - 1]
        if out.size == 0:
            raise DomainError(f"no replicate occupies carrier {k}")
        return out


def _k_distribution(law: BandwidthLaw):
    if law.kind is BandwidthKind.POISSON:
        return stats.poisson(law.lambda_k)
    return stats.nbinom(law.a, law.b / (1.0 + law.b))


def _draw_k(law: BandwidthLaw, rng: np.random.Generator, n: int) -> np.ndarray:
    """K truncated to 1..k_max by rejection, independent of the pmf formulas."""
    dist = _k_distribution(law)
    p_acc = float(dist.cdf(law.k_max) - dist.cdf(0))
    if p_acc < 1e-12:
        raise DomainError("bandwidth law puts essentially no mass on 1..k_max")

    def fresh(size: int) -> np.ndarray:
        if law.kind is BandwidthKind.POISSON:
            return rng.poisson(law.lambda_k, size)
        return rng.negative_binomial(law.a, law.b / (1.0 + law.b), size)

    k = fresh(n)
    bad = (k < 1) | (k > law.k_max)
    rounds = 0
    while bad.any():
        rounds += 1
        if rounds > 10_000:
            raise NonConvergenceError("carrier-count rejection sampling stalled")
        k[bad] = fresh(int(bad.sum()))
        bad = (k < 1) | (k > law.k_max)
    return k


_AMP_CODES = ((1, 1.0), (2, 0.5), (3, 2.0 / 3.0), (4, 0.75), (5, 1.5))


def _amp_code(exponent: float) -> int:
    for code, target in _AMP_CODES:
        if abs(exponent - target) <= 4.0 * np.finfo(float).eps * target:
            return code
    return 0


def _mark_codes(cfg: FieldConfig) -> tuple[int, float, int, float]:
    if cfg.fading.kind is FadingKind.CONSTANT:
        f_code, f_par = 0, cfg.fading.value
    else:
        f_code, f_par = 1, cfg.fading.value
    if cfg.channel.kind is ChannelKind.RADEMACHER:
        c_code, c_par = 0, 1.0
    elif cfg.channel.kind is ChannelKind.GAUSSIAN:
        c_code, c_par = 1, cfg.channel.value
    else:
        c_code, c_par = 2, cfg.channel.value
    return f_code, f_par, c_code, c_par


def _thread_count(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("PNSC_THREADS", "1"))
    if threads < 1:
        raise DomainError("thread count must be >= 1")
    return threads


#: point budget per pure-kernel block; fixed so blocking stays deterministic
_PURE_BLOCK_POINTS = 2_000_000


def _pure_blocks(counts: np.ndarray) -> list[tuple[int, int]]:
    blocks = []
    start = 0
    acc = 0
    for i, c in enumerate(counts):
        acc += int(c)
        if acc >= _PURE_BLOCK_POINTS:
            blocks.append((start, i + 1))
            start = i + 1
            acc = 0
    if start < counts.shape[0]:
        blocks.append((start, counts.shape[0]))
    return blocks


def synthesize(
    cfg: FieldConfig,
    replicates: int,
    seed: int,
    kernel: str | None = None,
    threads: int | None = None,
) -> IQBatch:
    """Monte Carlo synthesis of per-carrier interference sums.

    Per replicate: one carrier count K from the bandwidth law (truncated to
    1..k_max), then an independent field per occupied carrier.  All
    randomness derives from the integer seed; the compiled kernel seeds each
    field separately, so the result does not depend on threads.
    """
    from . import get_kernel  # local import: registry lives in the package root

    if replicates < 1:
        raise DomainError("replicates must be >= 1")
    try:
        seed = operator.index(seed)
    except TypeError as exc:
        raise DomainError("seed must be an integer reproducibility token") from exc
    if not 0 <= seed <= _U64_MASK:
        raise DomainError("seed must fit in an unsigned 64-bit integer")
    mod = get_kernel(kernel)
    threads = _thread_count(threads)

    rng_k = _as_generator((seed, _STREAM_K))
    k = _draw_k(cfg.bandwidth, rng_k, replicates)
    total_fields = int(k.sum())
    mu = expected_count(cfg)
    rng_n = _as_generator((seed, _STREAM_COUNTS))
    counts = rng_n.poisson(mu, total_fields).astype(np.int64)

    w_scale, exponent = _geometry(cfg)
    f_code, f_par, c_code, c_par = _mark_codes(cfg)
    amp_code = _amp_code(exponent)
    out_re = np.empty(total_fields)
    out_im = np.empty(total_fields)

    def run(lo: int, hi: int) -> None:
        mod.synth_fields(
            counts[lo:hi], w_scale, exponent, amp_code, f_code, f_par,
            c_code, c_par, seed, lo, out_re[lo:hi], out_im[lo:hi],
        )

    if mod.kernel_id() == "pure":
        for lo, hi in _pure_blocks(counts):
            run(lo, hi)
    elif threads == 1 or total_fields < 2 * threads:
        run(0, total_fields)
    else:
        bounds = np.linspace(0, total_fields, threads + 1).astype(int)
        workers = [
            threading.Thread(target=run, args=(int(a), int(b)))
            for a, b in zip(bounds[:-1], bounds[1:])
        ]
        for w in workers:
            w.start()
        for w in workers:
            w.join()

    samples = np.zeros((replicates, cfg.bandwidth.k_max), dtype=np.complex128)
    rep_starts = np.concatenate(([0], np.cumsum(k[:-1])))
    row = np.repeat(np.arange(replicates), k)
    col = np.arange(total_fields) - np.repeat(rep_starts, k)
    samples[row, col] = out_re + 1j * out_im
    return IQBatch(samples, k.astype(np.uint32), seed)


@dataclass(frozen=True)
class EmpiricalCf:
    """Radial empirical characteristic function with block-bootstrap errors."""

    omega_grid: np.ndarray
    estimates: np.ndarray
    std_errors: np.ndarray
    n: int

    def __post_init__(self) -> None:
        if not (
            self.omega_grid.shape == self.estimates.shape == self.std_errors.shape
        ):
            raise DomainError("characteristic-function arrays must share a shape")
        if np.any(self.omega_grid < 0.0):
            raise DomainError("radial frequencies must be nonnegative")
        at_zero = self.omega_grid == 0.0
        if np.any(self.estimates[at_zero] != 1.0) or np.any(
            self.std_errors[at_zero] != 0.0
        ):
            raise ValidationFailure("empirical CF at omega 0 must be exactly 1")
        if np.any(np.abs(self.estimates) > 1.0 + 3.0 * self.std_errors + 1e-12):
            raise ValidationFailure("empirical CF modulus exceeds 1 beyond noise")


def _block_starts(n: int, blocks: int) -> np.ndarray:
    blocks = max(2, min(blocks, n))
    return np.linspace(0, n, blocks + 1).astype(np.intp)


def _block_means(values: np.ndarray, blocks: int) -> np.ndarray:
    edges = _block_starts(values.shape[0], blocks)
    sums = np.add.reduceat(values, edges[:-1])
    return sums / np.diff(edges)


def empirical_cf(
    batch: IQBatch,
    carrier: int | None = None,
    omega_grid=(0.0, 0.5, 1.0, 2.0),
    blocks: int = 64,
) -> EmpiricalCf:
    """Estimate the radial CF of one carrier (or of the wideband totals).

    Isotropy is assumed, so the radial CF at omega is E[exp(j omega Y_I)],
    estimated by the raw sample mean.  Standard errors come from a bootstrap
    over block means (256 resamples, seeded from the batch token).
    """
    y = batch.totals() if carrier is None else batch.carrier(carrier)
    v = np.ascontiguousarray(y.real)
    n = v.shape[0]
    omega = np.atleast_1d(np.asarray(omega_grid, dtype=float))
    if omega.ndim != 1 or omega.size == 0:
        raise DomainError("omega_grid must be a nonempty 1-d grid")
    if np.any(~np.isfinite(omega)) or np.any(omega < 0.0):
        raise DomainError("radial frequencies must be finite and nonnegative")
    est = np.empty(omega.size, dtype=np.complex128)
    se = np.empty(omega.size)
    rng = _as_generator((batch.seed, _STREAM_BOOT))
    for j, w in enumerate(omega):
        if w == 0.0:
            est[j] = 1.0
            se[j] = 0.0
            continue
        z = np.exp(1j * w * v)
        est[j] = z.mean()
        m_b = _block_means(z, blocks)
        idx = rng.integers(0, m_b.shape[0], size=(256, m_b.shape[0]))
        boot = m_b[idx].mean(axis=1)
        se[j] = math.hypot(float(boot.real.std()), float(boot.imag.std()))
    return EmpiricalCf(omega, est, se, n)


def _mom_estimate(values: np.ndarray, blocks: int) -> tuple[float, float]:
    """Medians-of-means point estimate and its standard error."""
    m_b = _block_means(values, blocks)
    b = m_b.shape[0]
    med = float(np.median(m_b))
    mad = float(np.median(np.abs(m_b - med)))
    # 1.4826 MAD -> sd of block means; 1.2533 sd/sqrt(B) -> se of their median
    return med, 1.2533 * 1.4826 * mad / math.sqrt(b)


@dataclass(frozen=True)
class EmpiricalStats:
    """Summaries of one projected sample with Monte Carlo error bars."""

    bin_edges: np.ndarray
    density: np.ndarray
    density_se: np.ndarray
    sorted_values: np.ndarray
    tail_grid: np.ndarray
    tail_survival: np.ndarray
    tail_se: np.ndarray
    log_moment: float
    log_moment_se: float
    flom: dict[float, tuple[float, float]]
    n: int

    def ecdf(self, y) -> np.ndarray:
        """Empirical cdf of the projected samples."""
        pos = np.searchsorted(self.sorted_values, np.asarray(y, float), side="right")
        return pos / self.n


def empirical_stats(
    batch: IQBatch,
    projection=(1.0, 0.0),
    bins: int = 200,
    hist_range: tuple[float, float] | None = None,
    tail_grid=None,
    flom_powers=(0.5,),
    blocks: int = 64,
) -> EmpiricalStats:
    """Histogram, ecdf, tail survival, log moment, and fractional moments.

    projection is a unit vector (u_I, u_Q); the statistics describe
    u_I Y_I + u_Q Y_Q of the wideband totals.  Bounded statistics use raw
    means with binomial errors; the unbounded moments use medians of means.
    """
    u = np.asarray(projection, dtype=float)
    if u.shape != (2,) or abs(float(np.hypot(u[0], u[1])) - 1.0) > 1e-9:
        raise DomainError("projection must be a unit 2-vector")
    t = batch.totals()
    y = u[0] * t.real + u[1] * t.imag
    n = y.shape[0]
    if n < 2:
        raise DomainError("need at least two replicates for empirical statistics")

    if hist_range is None:
        lo, hi = np.quantile(y, [0.005, 0.995])
        hist_range = (float(lo), float(hi))
    density, edges = np.histogram(y, bins=bins, range=hist_range, density=True)
    widths = np.diff(edges)
    p_hat = density * widths
    density_se = np.sqrt(np.clip(p_hat * (1.0 - p_hat), 0.0, None) / n) / widths

    a = np.abs(y)
    a_sorted = np.sort(a)
    if tail_grid is None:
        tail_grid = np.quantile(a, [0.9, 0.99, 0.999])
    tail_grid = np.atleast_1d(np.asarray(tail_grid, dtype=float))
    survival = 1.0 - np.searchsorted(a_sorted, tail_grid, side="right") / n
    tail_se = np.sqrt(survival * (1.0 - survival) / n)

    pos = a[a > 0.0]
    if pos.size == 0:
        raise DomainError("all projected samples are zero; no tail statistics")
    log_moment, log_se = _mom_estimate(np.log(pos), blocks)
    flom = {}
    for p in flom_powers:
        if not p > 0.0:
            raise DomainError("fractional moment orders must be positive")
        flom[float(p)] = _mom_estimate(pos**p, blocks)
    return EmpiricalStats(
        edges,
        density,
        density_se,
        np.sort(y),
        tail_grid,
        survival,
        tail_se,
        log_moment,
        log_se,
        flom,
        n,
    )


def estimate_tail_index(
    values,
    survival_hi: float = 1e-2,
    survival_lo: float = 1e-4,
    points: int = 40,
) -> float:
    """Tail index from the log-log slope of the empirical survival function.

    Regresses log survival on log magnitude over the order statistics whose
    empirical survival lies in [survival_lo, survival_hi].
    """
    if not 0.0 < survival_lo < survival_hi < 1.0:
        raise DomainError("need 0 < survival_lo < survival_hi < 1")
    a = np.asarray(values, dtype=float)
    a = np.sort(a[a > 0.0])
    n = a.shape[0]
    rank_lo = max(int(math.ceil(n * survival_lo)), 10)
    rank_hi = int(math.floor(n * survival_hi))
    if rank_hi < 2 * rank_lo:
        raise DomainError("too few samples to resolve the requested survival range")
    ranks = np.unique(
        np.round(np.geomspace(rank_lo, rank_hi, points)).astype(np.intp)
    )
    x = np.log(a[n - ranks])
    s = np.log(ranks / n)
    slope = np.polyfit(x, s, 1)[0]
    return float(-slope)
