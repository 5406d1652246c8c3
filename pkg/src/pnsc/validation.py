"""Cross-module consistency checks: simulated fields against analytic laws.

Each check pits an independent Monte Carlo route (the field simulator or
stable sampler) against the analytic stack (characteristic functions,
mixture CDFs, LRT regimes) and reports a statistic with its threshold.
The JSON report and the human-readable rendering come from one structure,
so they cannot drift apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sstats

from . import stable
from .controls import DomainError
from .mixtures import BandwidthLaw, mixture_weights
from .receiver import LrtSpec, Regime, lrt_curve
from .simulator import (
    FieldConfig,
    IntensityModel,
    carrier_law_of,
    empirical_cf,
    synthesize,
)
from .mixtures import carrier_alpha_gamma

__all__ = [
    "CheckResult",
    "ValidationReport",
    "ValidateSettings",
    "run_suite",
    "render_report",
]

SCHEMA_VERSION = 1


@dataclass(frozen=True, slots=True)
class CheckResult:
    """One named check: statistic op threshold, with a short context line."""

    name: str
    statistic: float
    threshold: float
    op: str  # "<=" or ">="
    passed: bool
    detail: str

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "op": self.op,
            "passed": self.passed,
            "detail": self.detail,
        }


@dataclass(frozen=True, slots=True)
class ValidationReport:
    seed: int
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": "validate",
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def render_report(report_dict: dict) -> str:
    """Human-readable view generated from the JSON dict, line per check."""
    lines = [
        f"validation suite (schema {report_dict['schema_version']}, "
        f"seed {report_dict['seed']})"
    ]
    for c in report_dict["checks"]:
        flag = "PASS" if c["passed"] else "FAIL"
        lines.append(
            f"  [{flag}] {c['name']}: statistic {c['statistic']:.6g} "
            f"{c['op']} {c['threshold']:.6g}  ({c['detail']})"
        )
    lines.append("overall: " + ("PASS" if report_dict["passed"] else "FAIL"))
    return "\n".join(lines)


@dataclass(frozen=True, slots=True)
class ValidateSettings:
    """Suite sizes tuned so the default run stays under ~10 s compiled."""

    seed: int = 0
    cf_replicates: int = 100_000
    cf_mean_count: float = 1000.0
    ks_replicates: int = 5000
    ks_mean_count: float = 10_000.0
    map_replicates: int = 50_000
    gamma_corruption: float = 1.0
    kernel: str | None = None
    threads: int | None = None

    def __post_init__(self) -> None:
        if self.cf_replicates < 1000 or self.ks_replicates < 100 or self.map_replicates < 1000:
            raise DomainError("validation sizes are too small to be meaningful")
        if not (self.gamma_corruption > 0.0 and math.isfinite(self.gamma_corruption)):
            raise DomainError("gamma_corruption must be a positive factor")


# ------------------------------------------------------------- checks

def _cf_match(s: ValidateSettings) -> CheckResult:
    """Single-carrier empirical CF against exp(-(gamma w)^alpha)."""
    cfg = FieldConfig(
        lam=1.0 / math.pi,
        r_t=math.sqrt(s.cf_mean_count),
        sigma=4.0,
    )
    alpha, gamma = carrier_alpha_gamma(carrier_law_of(cfg))
    gamma *= s.gamma_corruption
    batch = synthesize(
        cfg, s.cf_replicates, seed=s.seed + 11, kernel=s.kernel, threads=s.threads
    )
    est = empirical_cf(batch, omega_grid=(0.5, 1.0, 2.0))
    model = np.exp(-((gamma * est.omega_grid) ** alpha))
    dev = np.abs(est.estimates - model) / est.std_errors
    worst = float(dev.max())
    return CheckResult(
        name="cf-match",
        statistic=worst,
        threshold=3.0,
        op="<=",
        passed=worst <= 3.0,
        detail=(
            f"max |cf_hat - cf|/se over omega grid; alpha={alpha:g}, "
            f"gamma={gamma:g}, n={s.cf_replicates}"
        ),
    )


def _grid_cdf(alpha: float):
    """Interpolated standard symmetric CDF, accurate far past KS resolution."""
    a = np.geomspace(1e-4, 1e6, 1200)
    f = np.array([stable.cdf(stable.StableParams(alpha, 0.0, 1.0, 0.0), float(v))
                  for v in a])
    c_a = stable.tail_constant(alpha)

    def cdf(y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=np.float64)
        ay = np.abs(y)
        up = np.interp(ay, a, f, left=0.5)
        far = ay > a[-1]
        if far.any():
            up[far] = 1.0 - c_a * ay[far] ** (-alpha)
        return np.where(y >= 0.0, up, 1.0 - up)

    return cdf


def _mixture_ks(s: ValidateSettings) -> CheckResult:
    """Composite-bandwidth field against the analytic stable mixture CDF."""
    law = BandwidthLaw.poisson(3.0, 8)
    cfg = FieldConfig(
        lam=1.0 / math.pi,
        r_t=math.sqrt(s.ks_mean_count),
        sigma=8.0 / 3.0,
        bandwidth=law,
    )
    alpha, gamma = carrier_alpha_gamma(carrier_law_of(cfg))
    weights, _ = mixture_weights(law)
    scales = gamma * (np.arange(1, law.k_max + 1) ** (1.0 / alpha))
    base = _grid_cdf(alpha)

    def mix_cdf(y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=np.float64)[:, None]
        return (weights[None, :] * base(y / scales[None, :])).sum(axis=1)

    batch = synthesize(
        cfg, s.ks_replicates, seed=s.seed + 23, kernel=s.kernel, threads=s.threads
    )
    values = batch.totals().real
    res = sstats.ks_1samp(values, mix_cdf)
    p = float(res.pvalue)
    return CheckResult(
        name="mixture-ks",
        statistic=p,
        threshold=0.01,
        op=">=",
        passed=p >= 0.01,
        detail=(
            f"one-sample KS p-value, alpha={alpha:g}, lambda_K=3, K_max=8, "
            f"n={s.ks_replicates}"
        ),
    )


def _mapping_equivalence(s: ValidateSettings) -> CheckResult:
    """Power-law radial intensity against its homogeneous mapped twin."""
    spl = FieldConfig(
        lam=1.0,
        r_t=2.0,
        sigma=4.0,
        intensity=IntensityModel.spatial_power_law(lambda0=1.0, beta_s=2.0),
    )
    hom = FieldConfig(lam=1.0, r_t=2.0, sigma=4.0)
    a = synthesize(spl, s.map_replicates, seed=s.seed + 37,
                   kernel=s.kernel, threads=s.threads).totals().real
    b = synthesize(hom, s.map_replicates, seed=s.seed + 41,
                   kernel=s.kernel, threads=s.threads).totals().real
    p = float(sstats.ks_2samp(a, b).pvalue)
    return CheckResult(
        name="mapping-equivalence",
        statistic=p,
        threshold=0.01,
        op=">=",
        passed=p >= 0.01,
        detail=(
            f"two-sample KS p-value, power-law (lambda0=1, beta_s=2) vs "
            f"homogeneous area rate 1, n={s.map_replicates} each"
        ),
    )


def _lrt_agreement(s: ValidateSettings) -> CheckResult:
    """Analytic LRT regimes against the CF-inversion fallback on their windows."""
    cases = [
        (LrtSpec(1.0, 1.0, Regime.CAUCHY), np.linspace(-3.0, 3.0, 25), None),
        (LrtSpec(1.5, 1.0, Regime.HOLTSMARK), np.linspace(-3.0, 3.0, 25), None),
        (
            LrtSpec(2.0 / 3.0, 1.0, Regime.WHITTAKER),
            np.linspace(-3.0, 3.0, 25),
            lambda g: (np.abs(g - 1.0) >= 0.05) & (np.abs(g + 1.0) >= 0.05),
        ),
        (LrtSpec(1.4, 1.0, Regime.GENERAL_SERIES), np.linspace(-1.0, 1.0, 21), None),
    ]
    bad = 0
    total = 0
    names = []
    for spec, grid, expect in cases:
        res = lrt_curve(spec, grid)
        want = np.ones(grid.size, dtype=bool) if expect is None else expect(grid)
        total += grid.size
        miss = int((res.valid != want).sum())
        bad += miss
        if miss:
            names.append(spec.regime.value)
    return CheckResult(
        name="lrt-agreement",
        statistic=float(bad),
        threshold=0.0,
        op="<=",
        passed=bad == 0,
        detail=(
            f"grid points whose validity mask deviates from the regime's "
            f"expected window, over {total} points"
            + (f"; mismatches in {', '.join(names)}" if names else "")
        ),
    )


def run_suite(settings: ValidateSettings | None = None) -> ValidationReport:
    """Run all four checks and collect the report (never raises on failure)."""
    s = settings or ValidateSettings()
    checks = (
        _cf_match(s),
        _mixture_ks(s),
        _mapping_equivalence(s),
        _lrt_agreement(s),
    )
    return ValidationReport(seed=s.seed, checks=checks)
