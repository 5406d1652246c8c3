"""Stable-mixture models of aggregate wideband interference.

A Poisson field of emitters with path-loss exponent sigma > 2 produces, per
occupied carrier, an isotropic alpha-stable total with alpha = 4/sigma.  When
each emitter occupies a random number K of carriers (truncated to 1..K_max),
the projection of the total interference is a finite mixture of symmetric
alpha-stable laws whose k-th component has dispersion k * gamma^alpha.  This
module builds those mixtures for Poisson and Poisson-Gamma (negative
binomial) bandwidth laws and evaluates their densities, tails, fractional
moments, geometric power and GSNR.

Everything here is pure; the mixture objects are immutable and safe to share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import stats

from .controls import (
    DEFAULT_QUAD,
    DEFAULT_SERIES,
    DomainError,
    QuadControl,
    SeriesControl,
    ValidationFailure,
)
from .specfun import dispersion_integral
from . import stable
from .stable import Param, PdfMethod, StableParams

__all__ = [
    "EULER_GAMMA_EXP",
    "CarrierLaw",
    "BandwidthKind",
    "BandwidthLaw",
    "MixtureComponent",
    "PnscMixture",
    "GsnrReport",
    "GsnrCell",
    "carrier_alpha_gamma",
    "mixture_weights",
    "build_mixture",
    "mixture_from_scale",
    "mixture_pdf",
    "mixture_cdf",
    "conditional_pdf",
    "conditional_cdf",
    "holtsmark_mixture_pdf",
    "whittaker_mixture_pdf",
    "mixture_tail",
    "mixture_flom",
    "geometric_power",
    "gsnr",
    "gsnr_surface",
]

# exp(Euler-Mascheroni constant), the geometric-power normalizer C_g
EULER_GAMMA_EXP = 1.7810724179901979852

_ALPHA_MATCH_RTOL = 1e-12


@dataclass(frozen=True, slots=True)
class CarrierLaw:
    """Per-carrier field model: path loss, spatial density, fading moment.

    moment_ac is the cross moment E[(A c)^{4/sigma}] of the fading amplitude
    and channel coefficient of a single emitter.
    """

    sigma: float
    lambda_spatial: float
    moment_ac: float

    def __post_init__(self) -> None:
        if not (self.sigma > 2.0 and math.isfinite(self.sigma)):
            raise DomainError(
                f"sigma must exceed 2 for the far-field aggregate to converge, got {self.sigma}"
            )
        if not (self.lambda_spatial > 0.0 and math.isfinite(self.lambda_spatial)):
            raise DomainError("lambda_spatial must be a positive density")
        if not (self.moment_ac > 0.0 and math.isfinite(self.moment_ac)):
            raise DomainError("moment_ac must be positive")


class BandwidthKind(Enum):
    POISSON = "poisson"
    POISSON_GAMMA = "poisson-gamma"


@dataclass(frozen=True, slots=True)
class BandwidthLaw:
    """Law of the number of occupied carriers K, truncated to 1..k_max.

    Poisson: K ~ Pois(lambda_k).  PoissonGamma: K ~ Pois(L) with
    L ~ Gamma(a, rate=b), i.e. marginally negative binomial.
    """

    kind: BandwidthKind
    k_max: int
    lambda_k: float | None = None
    a: float | None = None
    b: float | None = None

    def __post_init__(self) -> None:
        if self.k_max < 1:
            raise DomainError("k_max must be at least 1")
        if self.kind is BandwidthKind.POISSON:
            if self.lambda_k is None or not (
                self.lambda_k > 0.0 and math.isfinite(self.lambda_k)
            ):
                raise DomainError("Poisson bandwidth law needs lambda_k > 0")
        elif self.kind is BandwidthKind.POISSON_GAMMA:
            ok = (
                self.a is not None
                and self.b is not None
                and self.a > 0.0
                and self.b > 0.0
                and math.isfinite(self.a)
                and math.isfinite(self.b)
            )
            if not ok:
                raise DomainError("Poisson-Gamma bandwidth law needs a > 0 and b > 0")
        else:  # pragma: no cover - enum is closed
            raise DomainError(f"unknown bandwidth kind {self.kind}")

    @staticmethod
    def poisson(lambda_k: float, k_max: int) -> "BandwidthLaw":
        return BandwidthLaw(BandwidthKind.POISSON, k_max, lambda_k=lambda_k)

    @staticmethod
    def poisson_gamma(a: float, b: float, k_max: int) -> "BandwidthLaw":
        return BandwidthLaw(BandwidthKind.POISSON_GAMMA, k_max, a=a, b=b)


@dataclass(frozen=True, slots=True)
class MixtureComponent:
    weight: float
    params: StableParams


@dataclass(frozen=True, slots=True)
class PnscMixture:
    """Finite symmetric-stable mixture with component dispersions k * gamma^alpha.

    components are ordered k = 1..K_max; normalizer is the truncated pmf mass
    the raw weights were divided by; zero_atom is P(K = 0) under the
    untruncated bandwidth law, reported separately so the continuous density
    stays proper.
    """

    components: tuple[MixtureComponent, ...]
    normalizer: float
    alpha: float
    base_gamma: float
    zero_atom: float = 0.0

    def __post_init__(self) -> None:
        if not self.components:
            raise DomainError("mixture needs at least one component")
        if not (self.normalizer > 0.0 and math.isfinite(self.normalizer)):
            raise DomainError("normalizer must be positive")
        if not (0.0 <= self.zero_atom < 1.0):
            raise DomainError("zero_atom must lie in [0, 1)")
        if not (self.base_gamma > 0.0 and math.isfinite(self.base_gamma)):
            raise DomainError("base_gamma must be a positive scale")
        total = math.fsum(c.weight for c in self.components)
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"weights must sum to 1, got {total!r}")
        for k, comp in enumerate(self.components, start=1):
            p = comp.params
            if not (0.0 < comp.weight <= 1.0):
                raise DomainError(f"component {k} weight out of (0, 1]")
            if p.alpha != self.alpha or p.beta != 0.0 or p.delta != 0.0 or p.param is not Param.S0:
                raise DomainError(
                    f"component {k} must be S0 symmetric centered with alpha={self.alpha}"
                )
            want = float(k) ** (1.0 / self.alpha) * self.base_gamma
            if abs(p.gamma - want) > 1e-12 * want:
                raise DomainError(
                    f"component {k} scale {p.gamma!r} breaks the k^(1/alpha) ladder"
                )

    @property
    def dispersion(self) -> float:
        """gamma^alpha of the k = 1 component; adds across convolutions."""
        return self.base_gamma ** self.alpha

    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.components])

    def to_dict(self) -> dict:
        """JSON-ready form.

        Schema: {"schema_version": 1, "alpha", "base_gamma", "normalizer",
        "zero_atom", "components": [{"weight", "gamma"}, ...]} with components
        in k order.  Floats survive round-trip exactly (repr serialization).
        """
        return {
            "schema_version": 1,
            "alpha": self.alpha,
            "base_gamma": self.base_gamma,
            "normalizer": self.normalizer,
            "zero_atom": self.zero_atom,
            "components": [
                {"weight": c.weight, "gamma": c.params.gamma} for c in self.components
            ],
        }

    @staticmethod
    def from_dict(d: dict) -> "PnscMixture":
        if d.get("schema_version") != 1:
            raise DomainError("unsupported mixture schema version")
        alpha = float(d["alpha"])
        comps = tuple(
            MixtureComponent(
                float(c["weight"]),
                StableParams(alpha, 0.0, float(c["gamma"]), 0.0),
            )
            for c in d["components"]
        )
        return PnscMixture(
            comps,
            float(d["normalizer"]),
            alpha,
            float(d["base_gamma"]),
            float(d.get("zero_atom", 0.0)),
        )


@dataclass(frozen=True, slots=True)
class GsnrReport:
    """Geometric noise power and geometric SNR of a mixture.

    flom_bound is E|Y| (an upper bound on s0 by Jensen) when alpha > 1 and
    +inf otherwise.
    """

    s0: float
    gsnr: float
    c_g: float
    amplitude: float
    flom_bound: float

    def __post_init__(self) -> None:
        if not (self.s0 > 0.0 and math.isfinite(self.s0)):
            raise DomainError("s0 must be positive")
        if not (self.amplitude > 0.0 and math.isfinite(self.amplitude)):
            raise DomainError("amplitude must be positive")
        want = (self.amplitude / self.s0) ** 2 / (2.0 * self.c_g)
        if abs(self.gsnr - want) > 1e-12 * want:
            raise DomainError("gsnr does not match (1/(2 c_g)) (A/s0)^2")

    def to_dict(self) -> dict:
        """JSON-ready form; an infinite flom_bound is encoded as null."""
        return {
            "schema_version": 1,
            "s0": self.s0,
            "gsnr": self.gsnr,
            "c_g": self.c_g,
            "amplitude": self.amplitude,
            "flom_bound": None if math.isinf(self.flom_bound) else self.flom_bound,
        }

    @staticmethod
    def from_dict(d: dict) -> "GsnrReport":
        if d.get("schema_version") != 1:
            raise DomainError("unsupported report schema version")
        fb = d.get("flom_bound")
        return GsnrReport(
            float(d["s0"]),
            float(d["gsnr"]),
            float(d["c_g"]),
            float(d["amplitude"]),
            math.inf if fb is None else float(fb),
        )


@dataclass(frozen=True, slots=True)
class GsnrCell:
    alpha: float
    gamma: float
    s0: float
    gsnr: float


# ------------------------------------------------------------- construction

def carrier_alpha_gamma(c: CarrierLaw) -> tuple[float, float]:
    """(alpha, gamma_scale) of the per-carrier isotropic stable total.

    alpha = 4/sigma; the dispersion is lambda * pi * moment_ac * I(alpha)
    with I the Bessel-J1 tail integral, and the returned scale is its
    1/alpha-th root.
    """
    alpha = 4.0 / c.sigma
    disp = c.lambda_spatial * math.pi * c.moment_ac * dispersion_integral(alpha)
    if not (disp > 0.0 and math.isfinite(disp)):
        raise DomainError(f"dispersion evaluated to {disp!r}")
    return alpha, disp ** (1.0 / alpha)


def _zero_atom(law: BandwidthLaw) -> float:
    if law.kind is BandwidthKind.POISSON:
        return math.exp(-law.lambda_k)
    return (law.b / (1.0 + law.b)) ** law.a


def mixture_weights(law: BandwidthLaw) -> tuple[np.ndarray, float]:
    """Normalized weights for k = 1..k_max and the truncated-mass normalizer.

    The raw weights are the bandwidth-law pmf values; dividing by their sum
    (c_Kmax) makes the truncated mixture proper for either law.
    """
    k = np.arange(1, law.k_max + 1)
    if law.kind is BandwidthKind.POISSON:
        raw = stats.poisson.pmf(k, law.lambda_k)
    else:
        raw = stats.nbinom.pmf(k, law.a, law.b / (1.0 + law.b))
    normalizer = math.fsum(raw)
    if not (normalizer > 0.0 and math.isfinite(normalizer)):
        raise DomainError(
            "bandwidth pmf mass on 1..k_max underflowed; raise k_max or shrink the rate"
        )
    return raw / normalizer, normalizer


def mixture_from_scale(alpha: float, gamma_scale: float, law: BandwidthLaw) -> PnscMixture:
    """Mixture with component scales k^(1/alpha) * gamma_scale directly."""
    weights, normalizer = mixture_weights(law)
    comps = tuple(
        MixtureComponent(
            float(w),
            StableParams(alpha, 0.0, float(k) ** (1.0 / alpha) * gamma_scale, 0.0),
        )
        for k, w in enumerate(weights, start=1)
    )
    return PnscMixture(comps, normalizer, alpha, gamma_scale, _zero_atom(law))


def build_mixture(c: CarrierLaw, law: BandwidthLaw) -> PnscMixture:
    alpha, scale = carrier_alpha_gamma(c)
    return mixture_from_scale(alpha, scale, law)


# ------------------------------------------------------------- evaluation

def mixture_pdf(
    m: PnscMixture,
    y: float,
    method: PdfMethod = PdfMethod.AUTO,
    ctl: SeriesControl = DEFAULT_SERIES,
    qctl: QuadControl = DEFAULT_QUAD,
) -> float:
    return math.fsum(
        c.weight * stable.pdf(c.params, y, method, ctl, qctl) for c in m.components
    )


def mixture_cdf(m: PnscMixture, y: float, qctl: QuadControl = DEFAULT_QUAD) -> float:
    v = math.fsum(c.weight * stable.cdf(c.params, y, qctl) for c in m.components)
    return min(1.0, max(0.0, v))


def _mixing_variances(m: PnscMixture, aux: float) -> np.ndarray:
    if not (0.0 < m.alpha < 2.0):
        raise DomainError("the normal variance-mixture form needs alpha in (0, 2)")
    if not (aux > 0.0 and math.isfinite(aux)):
        raise DomainError("aux must be a positive mixing variate")
    scale = np.array([c.params.gamma for c in m.components])
    v = 2.0 * scale * scale * math.cos(math.pi * m.alpha / 4.0) ** (2.0 / m.alpha)
    return v * aux


def conditional_pdf(m: PnscMixture, y: float, aux: float) -> float:
    """Density given the positive (alpha/2)-stable mixing variate aux.

    Conditionally each component is Gaussian with variance
    2 gamma_k^2 cos(pi alpha/4)^(2/alpha) * aux; averaging this over aux drawn
    from the standard totally skewed S1 (alpha/2)-stable law recovers
    mixture_pdf.
    """
    var = _mixing_variances(m, aux)
    w = m.weights()
    dens = np.exp(-0.5 * y * y / var) / np.sqrt(2.0 * math.pi * var)
    return float(w @ dens)


def conditional_cdf(m: PnscMixture, y: float, aux: float) -> float:
    var = _mixing_variances(m, aux)
    w = m.weights()
    z = y / np.sqrt(2.0 * var)
    return float(w @ (0.5 * (1.0 + np.array([math.erf(t) for t in z]))))


def _require_alpha(m: PnscMixture, alpha: float, name: str) -> None:
    if abs(m.alpha - alpha) > _ALPHA_MATCH_RTOL * alpha:
        raise DomainError(f"{name} closed form needs alpha = {alpha}, mixture has {m.alpha}")


def holtsmark_mixture_pdf(m: PnscMixture, z: float, ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """alpha = 3/2 mixture density via the hypergeometric closed form.

    Each component standardizes by its own scale k^(2/3) gamma and is mapped
    back with the same Jacobian.
    """
    _require_alpha(m, 1.5, "Holtsmark")
    return math.fsum(
        c.weight * stable.holtsmark_pdf_std(z / c.params.gamma, ctl) / c.params.gamma
        for c in m.components
    )


def whittaker_mixture_pdf(m: PnscMixture, z: float, ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """alpha = 2/3 mixture density via the confluent-hypergeometric closed form."""
    _require_alpha(m, 2.0 / 3.0, "Whittaker")
    return math.fsum(
        c.weight * stable.whittaker_pdf_std(z / c.params.gamma, ctl) / c.params.gamma
        for c in m.components
    )


def mixture_tail(m: PnscMixture, y: float) -> tuple[float, float]:
    """(survival, pdf) leading-order power-law asymptotes at y > 0.

    Aggregation happens in dispersion units: component k contributes
    k * gamma^alpha, so the survival asymptote is
    c_alpha y^(-alpha) gamma^alpha sum_k w_k k.
    """
    if m.alpha >= 2.0:
        raise DomainError("the Gaussian mixture has no power-law tail")
    if y <= 0.0:
        raise DomainError("y must be positive")
    c_a = stable.tail_constant(m.alpha)
    disp = m.base_gamma ** m.alpha
    kbar = math.fsum(k * c.weight for k, c in enumerate(m.components, start=1))
    surv = c_a * disp * kbar * y ** (-m.alpha)
    return surv, m.alpha * surv / y


def mixture_flom(m: PnscMixture, p: float) -> float:
    """E|Y|^p; +inf when p >= alpha."""
    if not (0.0 < p < 2.0):
        raise DomainError("p must lie in (0, 2)")
    if m.alpha < 2.0 and p >= m.alpha:
        return math.inf
    disp = m.base_gamma ** m.alpha
    c = stable.flom_constant(p, m.alpha)
    return c * math.fsum(
        comp.weight * (k * disp) ** (p / m.alpha)
        for k, comp in enumerate(m.components, start=1)
    )


def geometric_power(m: PnscMixture) -> float:
    """S0 = C_g^(1/alpha - 1) * gamma * sum_k w_k sqrt(k).

    The sqrt(k) per-component contribution follows the printed lemma; it is
    exact for a single component, where S0 = gamma C_g^(1/alpha - 1) is the
    textbook geometric power of a symmetric stable law.
    """
    kroot = math.fsum(math.sqrt(k) * c.weight for k, c in enumerate(m.components, start=1))
    return EULER_GAMMA_EXP ** (1.0 / m.alpha - 1.0) * m.base_gamma * kroot


def gsnr(m: PnscMixture, amplitude: float) -> GsnrReport:
    """Geometric SNR report for a modulated amplitude against this mixture."""
    if not (amplitude > 0.0 and math.isfinite(amplitude)):
        raise DomainError("amplitude must be positive")
    s0 = geometric_power(m)
    g = (amplitude / s0) ** 2 / (2.0 * EULER_GAMMA_EXP)
    bound = mixture_flom(m, 1.0) if m.alpha > 1.0 else math.inf
    return GsnrReport(s0=s0, gsnr=g, c_g=EULER_GAMMA_EXP, amplitude=amplitude, flom_bound=bound)


def gsnr_surface(alphas, gammas, amplitude: float, law: BandwidthLaw) -> list[GsnrCell]:
    """GSNR on an (alpha, gamma) grid, one cell per pair, row-major in alpha.

    Sanity-asserts that GSNR decreases along increasing gamma at fixed alpha,
    which the (A/S0)^2 form guarantees.
    """
    alphas = [float(a) for a in alphas]
    gammas = [float(g) for g in gammas]
    if not alphas or not gammas:
        raise DomainError("alpha and gamma grids must be nonempty")
    cells: list[GsnrCell] = []
    for a in alphas:
        row = []
        for g_ in gammas:
            rep = gsnr(mixture_from_scale(a, g_, law), amplitude)
            row.append(GsnrCell(a, g_, rep.s0, rep.gsnr))
        order = np.argsort(gammas)
        for i, j in zip(order, order[1:]):
            if gammas[j] > gammas[i] and row[j].gsnr >= row[i].gsnr:
                raise ValidationFailure("GSNR failed to decrease along the gamma grid")
        cells.extend(row)
    return cells
