"""Univariate alpha-stable laws.

Parameterizations S(0)/S(1), characteristic function, Chambers-Mallows-Stuck
sampler, pdf by Zolotarev-type series and characteristic-function inversion,
cdf/survival by the Zolotarev integral with the duality identity, normal
variance-mixture sampling for the symmetric sub-family, tail asymptotics and
fractional lower-order moments.

Scale conventions: StableParams.gamma is always the *scale*; the additive
quantity under convolution (scale^alpha) is called dispersion and carried by
DispersionScale where the distinction matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .controls import (
    DEFAULT_QUAD,
    DEFAULT_SERIES,
    DomainError,
    NonConvergenceError,
    QuadControl,
    SeriesControl,
)
from .specfun import gamma_fn

__all__ = [
    "Param",
    "PdfMethod",
    "StableParams",
    "DispersionScale",
    "SminDraw",
    "char_fn",
    "sample",
    "pdf",
    "cdf",
    "survival",
    "quantile",
    "affine",
    "convolve",
    "smin_sample",
    "smin_sample_detailed",
    "tail_survival_asymptotic",
    "tail_pdf_asymptotic",
    "tail_constant",
    "flom",
    "mean",
]


class Param(Enum):
    S0 = "S0"
    S1 = "S1"


class PdfMethod(Enum):
    AUTO = "auto"
    SERIES_ZOLOTAREV = "series_zolotarev"
    CF_INVERSION = "cf_inversion"
    CLOSED_FORM = "closed_form"


class ScaleKind(Enum):
    SCALE = "scale"
    DISPERSION = "dispersion"


@dataclass(frozen=True, slots=True)
class StableParams:
    alpha: float
    beta: float
    gamma: float
    delta: float
    param: Param = Param.S0

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha <= 2.0):
            raise DomainError(f"alpha must be in (0, 2], got {self.alpha}")
        if not (-1.0 <= self.beta <= 1.0):
            raise DomainError(f"beta must be in [-1, 1], got {self.beta}")
        if not (self.gamma > 0.0 and math.isfinite(self.gamma)):
            raise DomainError(f"gamma must be a positive scale, got {self.gamma}")
        if not math.isfinite(self.delta):
            raise DomainError("delta must be finite")


@dataclass(frozen=True, slots=True)
class DispersionScale:
    """Scale/dispersion pair with exact round-tripping.

    dispersion = scale^alpha is the quantity that adds under convolution.
    The originating value is kept so converting back returns it bit-exactly
    instead of re-rounding through pow.
    """

    value: float
    kind: ScaleKind
    origin: float | None = None

    def __post_init__(self) -> None:
        if not (self.value > 0.0 and math.isfinite(self.value)):
            raise DomainError("value must be positive and finite")

    @staticmethod
    def from_scale(scale: float) -> "DispersionScale":
        return DispersionScale(scale, ScaleKind.SCALE)

    @staticmethod
    def from_dispersion(dispersion: float) -> "DispersionScale":
        return DispersionScale(dispersion, ScaleKind.DISPERSION)

    def as_scale(self, alpha: float) -> float:
        if self.kind is ScaleKind.SCALE:
            return self.value
        if self.origin is not None:
            return self.origin
        return self.value ** (1.0 / alpha)

    def as_dispersion(self, alpha: float) -> float:
        if self.kind is ScaleKind.DISPERSION:
            return self.value
        if self.origin is not None:
            return self.origin
        return self.value ** alpha


def dispersion_of(scale: float, alpha: float) -> DispersionScale:
    return DispersionScale(scale ** alpha, ScaleKind.DISPERSION, origin=scale)


def scale_of(d: DispersionScale, alpha: float) -> float:
    return d.as_scale(alpha)


@dataclass(frozen=True, slots=True)
class SminDraw:
    lambda_aux: float
    conditional_mean: float
    conditional_scale: float


# ------------------------------------------------------------------ basics

def _tan_half(alpha: float) -> float:
    # tan(pi alpha / 2) through the complement; exact zero at alpha = 2
    if alpha == 2.0:
        return 0.0
    return 1.0 / math.tan(math.pi * (1.0 - alpha) / 2.0)


def _delta0(p: StableParams) -> float:
    """Location of p re-expressed in the S(0) parameterization."""
    if p.param is Param.S0:
        return p.delta
    if p.alpha == 1.0:
        return p.delta + p.beta * (2.0 / math.pi) * p.gamma * math.log(p.gamma)
    return p.delta + p.beta * p.gamma * _tan_half(p.alpha)


def char_fn(p: StableParams, theta: float) -> complex:
    """Characteristic function E[exp(i theta X)]."""
    theta = float(theta)
    if theta == 0.0:
        return complex(1.0, 0.0)
    a, b, g = p.alpha, p.beta, p.gamma
    s = math.copysign(1.0, theta)
    at = abs(theta)
    if a == 1.0:
        if p.param is Param.S0:
            logpart = math.log(g * at)
        else:
            logpart = math.log(at)
        expo = -g * at * complex(1.0, b * (2.0 / math.pi) * s * logpart)
    else:
        tphi = _tan_half(a)
        if p.param is Param.S0:
            # expm1 keeps the (|g t|^{1-a} - 1) factor accurate through a ~ 1
            frac = math.expm1((1.0 - a) * math.log(g * at))
            expo = -(g * at) ** a * complex(1.0, b * s * tphi * frac)
        else:
            expo = -(g * at) ** a * complex(1.0, -b * s * tphi)
    expo += complex(0.0, p.delta * theta)
    return complex(math.exp(expo.real) * math.cos(expo.imag),
                   math.exp(expo.real) * math.sin(expo.imag))


def affine(p: StableParams, a: float, b: float) -> StableParams:
    """Parameters of a*X + b (closure under affine maps)."""
    if a == 0.0:
        raise DomainError("affine requires a != 0")
    if p.param is not Param.S0:
        raise DomainError("affine map is defined on the S0 parameterization")
    return StableParams(
        p.alpha,
        math.copysign(1.0, a) * p.beta,
        abs(a) * p.gamma,
        a * p.delta + b,
        Param.S0,
    )


def convolve(components) -> StableParams:
    """Parameters of the sum of independent components sharing alpha (S0)."""
    comps = list(components)
    if not comps:
        raise DomainError("convolve requires at least one component")
    alpha = comps[0].alpha
    for c in comps:
        if c.alpha != alpha:
            raise DomainError("convolve requires all components to share alpha")
        if c.param is not Param.S0:
            raise DomainError("convolve is defined on the S0 parameterization")
    disp = sum(c.gamma ** alpha for c in comps)
    g = disp ** (1.0 / alpha)
    beta = sum(c.beta * c.gamma ** alpha for c in comps) / disp
    d_sum = sum(c.delta for c in comps)
    if alpha == 1.0:
        corr = (2.0 / math.pi) * (
            beta * g * math.log(g)
            - sum(c.beta * c.gamma * math.log(c.gamma) for c in comps)
        )
    else:
        corr = _tan_half(alpha) * (beta * g - sum(c.beta * c.gamma for c in comps))
    return StableParams(alpha, beta, g, d_sum + corr, Param.S0)


# ------------------------------------------------------------------ sampling

def _cms_standard(alpha: float, beta: float, rng: np.random.Generator, n: int) -> np.ndarray:
    """Standard S(1) draws (gamma=1, delta=0), Chambers-Mallows-Stuck."""
    v = rng.uniform(-math.pi / 2.0, math.pi / 2.0, n)
    w = rng.exponential(1.0, n)
    if alpha == 1.0:
        half = math.pi / 2.0
        pb = half + beta * v
        return (pb * np.tan(v) - beta * np.log(half * w * np.cos(v) / pb)) / half
    tphi = _tan_half(alpha)
    theta0 = math.atan(beta * tphi) / alpha
    s = (1.0 + (beta * tphi) ** 2) ** (1.0 / (2.0 * alpha))
    av = alpha * (v + theta0)
    return (
        s
        * np.sin(av)
        / np.cos(v) ** (1.0 / alpha)
        * (np.cos(v - av) / w) ** ((1.0 - alpha) / alpha)
    )


def sample(p: StableParams, rng_seed, n: int) -> np.ndarray:
    """n i.i.d. draws, deterministic given the seed."""
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(rng_seed)))
    z = _cms_standard(p.alpha, p.beta, rng, int(n))
    if p.alpha == 1.0:
        if p.param is Param.S0:
            return p.gamma * z + p.delta
        return p.gamma * z + p.delta + p.beta * (2.0 / math.pi) * p.gamma * math.log(p.gamma)
    if p.param is Param.S0:
        return p.gamma * (z - p.beta * _tan_half(p.alpha)) + p.delta
    return p.gamma * z + p.delta


def smin_sample(alpha: float, gamma: float, delta: float, rng_seed, n: int) -> np.ndarray:
    """Symmetric stable draws via the normal variance-mixture construction.

    X = delta + sqrt(v * kappa) * Z with Z standard normal and kappa a
    totally skewed positive (alpha/2)-stable variate;
    v = 2 gamma^2 cos(pi alpha / 4)^{2/alpha} makes X ~ S_alpha(0, gamma, delta).
    """
    if not (0.0 < alpha < 2.0):
        raise DomainError("smin_sample requires alpha in (0, 2); use a Gaussian at alpha = 2")
    if gamma <= 0.0:
        raise DomainError("gamma must be positive")
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(rng_seed)))
    kappa = _cms_standard(alpha / 2.0, 1.0, rng, int(n))
    z = rng.standard_normal(int(n))
    v = 2.0 * gamma * gamma * math.cos(math.pi * alpha / 4.0) ** (2.0 / alpha)
    return delta + np.sqrt(v * kappa) * z


def smin_sample_detailed(alpha: float, gamma: float, delta: float, rng_seed, n: int):
    """Like smin_sample but also exposes the auxiliary mixing variables."""
    if not (0.0 < alpha < 2.0):
        raise DomainError("smin_sample requires alpha in (0, 2)")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(rng_seed)))
    kappa = _cms_standard(alpha / 2.0, 1.0, rng, int(n))
    z = rng.standard_normal(int(n))
    v = 2.0 * gamma * gamma * math.cos(math.pi * alpha / 4.0) ** (2.0 / alpha)
    cond_scale = np.sqrt(v * kappa)
    draws = delta + cond_scale * z
    detail = [
        SminDraw(float(k), float(delta), float(cs))
        for k, cs in zip(kappa, cond_scale)
    ]
    return draws, detail


# ------------------------------------------------------------------ pdf

# Zolotarev B-form bridge. The series expansions below are stated in the
# B parameterization; map a standardized S0 argument into it and scale back.

def _bform_map(alpha: float, beta: float):
    """(sigma_B, rho) plus the S0->B argument shift for alpha != 1."""
    tphi = _tan_half(alpha)
    bt = beta * tphi
    sigma_b = (1.0 + bt * bt) ** (1.0 / (2.0 * alpha))
    # theta = beta_B K(alpha) / alpha with tan((pi/2) beta_B K) = beta tan(pi alpha/2)
    theta = 0.0 if beta == 0.0 else (2.0 / math.pi) * math.atan(bt) / alpha
    rho = 0.5 * (1.0 + theta)
    return sigma_b, rho


def _series_pdf_std(alpha: float, beta: float, x: float, ctl: SeriesControl) -> float:
    """Standard S0 pdf via the Zolotarev series branches."""
    if alpha == 1.0:
        return _series_pdf_alpha1(beta, x, ctl)
    # into B coordinates: f_S0(x) = f_B((x + beta tan(pi a/2)) / sigma_B) / sigma_B
    sigma_b, rho = _bform_map(alpha, beta)
    xb = (x + beta * _tan_half(alpha)) / sigma_b
    if alpha > 1.0:
        val = _series_taylor_b(alpha, rho, xb, ctl)
    else:
        if xb > 0.0:
            val = _series_tail_b(alpha, rho, xb, ctl)
        elif xb < 0.0:
            val = _series_tail_b(alpha, 1.0 - rho, -xb, ctl)
        else:
            raise NonConvergenceError("alpha<1 series is not usable at the origin")
    return max(val / sigma_b, 0.0)


def _series_taylor_b(alpha: float, rho: float, x: float, ctl: SeriesControl) -> float:
    # (1/pi) sum (-1)^{n-1} Gamma(n/alpha + 1)/n! sin(n pi rho) x^{n-1}, entire
    if x < 0.0:
        return _series_taylor_b(alpha, 1.0 - rho, -x, ctl)
    acc = 0.0
    xpow = 1.0
    sign = 1.0
    lgfac = 0.0
    small = 0
    for n in range(1, ctl.max_terms + 1):
        env = math.exp(math.lgamma(n / alpha + 1.0) - lgfac) * xpow
        acc += sign * env * math.sin(n * math.pi * rho)
        # envelope-based stop: sin zeros must not fake convergence
        if env < ctl.abs_tol * max(1.0, abs(acc)):
            small += 1
            if small >= 2:
                return acc / math.pi
        else:
            small = 0
        sign = -sign
        xpow *= x
        lgfac += math.log(n + 1.0)
    raise NonConvergenceError(
        f"Taylor stable series exhausted {ctl.max_terms} terms at x={x:.4g}"
    )


def _series_tail_b(alpha: float, rho: float, x: float, ctl: SeriesControl) -> float:
    # (1/pi) sum (-1)^{n-1} Gamma(n alpha + 1)/n! sin(n pi rho alpha) x^{-n alpha - 1},
    # convergent for alpha < 1, x > 0
    acc = 0.0
    sign = 1.0
    lgfac = 0.0
    lx = math.log(x)
    small = 0
    for n in range(1, ctl.max_terms + 1):
        env = math.exp(math.lgamma(n * alpha + 1.0) - lgfac - (n * alpha + 1.0) * lx)
        acc += sign * env * math.sin(n * math.pi * rho * alpha)
        if env < ctl.abs_tol * max(1.0, abs(acc)):
            small += 1
            if small >= 2:
                return acc / math.pi
        else:
            small = 0
        sign = -sign
        lgfac += math.log(n + 1.0)
    raise NonConvergenceError(
        f"tail stable series exhausted {ctl.max_terms} terms at x={x:.4g}"
    )


@lru_cache(maxsize=4096)
def _bn_coefficient(n: int, beta: float) -> float:
    """b_n = (1/n!) int_0^inf exp(-beta u ln u) u^{n-1} sin((1+beta) u pi/2) du."""
    freq = (1.0 + beta) * math.pi / 2.0
    period = 2.0 * math.pi / freq

    def f(u):
        return math.exp(-beta * u * math.log(u) + (n - 1) * math.log(u)) * math.sin(freq * u)

    acc = 0.0
    lo = 0.0
    peak_passed = False
    for j in range(1, 4000):
        hi = j * 0.5 * period
        v, _ = quad(f, lo, hi, limit=100)
        acc += v
        # envelope decays once beta*(ln u + 1) > (n-1)/u
        u_mid = 0.5 * (lo + hi)
        if u_mid > 1.0 and beta * (math.log(u_mid) + 1.0) > (n - 1) / u_mid:
            peak_passed = True
        if peak_passed and abs(v) < 1e-16 * max(1.0, abs(acc)):
            break
        lo = hi
    else:
        raise NonConvergenceError("b_n coefficient quadrature did not settle")
    return acc * math.exp(-math.lgamma(n + 1.0))


def _series_pdf_alpha1(beta: float, x: float, ctl: SeriesControl) -> float:
    # alpha = 1: f_S0(x) = (pi/2) f_B((pi/2) x + beta ln(pi/2)) with
    # f_B(y) = (1/pi) sum (-1)^{n-1} n b_n y^{n-1}, beta in (0, 1].
    # The expansion is asymptotic in y, so truncate at the envelope minimum
    # and refuse when the attainable floor is too coarse.
    if beta == 0.0:
        return 1.0 / (math.pi * (1.0 + x * x))
    if beta < 0.0:
        return _series_pdf_alpha1(-beta, -x, ctl)
    y = (math.pi / 2.0) * x + beta * math.log(math.pi / 2.0)
    acc = 0.0
    ypow = 1.0
    sign = 1.0
    small = 0
    best_env = math.inf
    best_acc = 0.0
    for n in range(1, ctl.max_terms + 1):
        bn = _bn_coefficient(n, beta)
        acc += sign * n * bn * ypow
        env = n * abs(bn) * abs(ypow)
        if env <= best_env:
            best_env = env
            best_acc = acc
        elif env > 1e3 * best_env:
            # past the optimal-truncation point and clearly diverging
            break
        if env < ctl.abs_tol * max(1.0, abs(acc)):
            small += 1
            if small >= 2:
                return max((acc / 2.0), 0.0)
        else:
            small = 0
        sign = -sign
        ypow *= y
    if best_env < 1e-9 * max(1.0, abs(best_acc)):
        return max(best_acc / 2.0, 0.0)
    raise NonConvergenceError(
        f"alpha=1 series floor {best_env:.2g} too coarse at x={x:.4g}"
    )


def _cf_inversion_pdf_std(alpha: float, beta: float, x: float, qctl: QuadControl) -> float:
    """Standard S0 pdf by inversion of the characteristic function.

    f(x) = (1/pi) int_0^inf e^{-t^alpha} cos(t x' - b t^alpha) dt  (alpha != 1)
    f(x) = (1/pi) int_0^inf e^{-t} cos(t x + (2 beta/pi) t ln t) dt (alpha = 1)
    with x' the S1-standard argument and b = beta tan(pi alpha/2).
    QUADPACK's oscillatory cos/sin weights carry the e^{-i t x'} factor.
    """
    tcut = 42.0 ** (1.0 / alpha)
    if alpha == 1.0:
        # phase is t x + b t ln t, so the odd factor enters with a minus sign
        b = beta * 2.0 / math.pi

        def even(t):
            return math.exp(-t) * math.cos(b * t * math.log(t)) if t > 0 else 1.0

        def odd(t):
            return -math.exp(-t) * math.sin(b * t * math.log(t)) if t > 0 else 0.0

        w = x
    elif abs(beta * _tan_half(alpha)) > 50.0:
        # near alpha = 1 the S1 shift and the t^alpha phase almost cancel;
        # phase = t x + b (t - t^alpha) stays well conditioned via expm1
        b = beta * _tan_half(alpha)

        def even(t):
            if t <= 0.0:
                return 1.0
            g = -b * t * math.expm1((alpha - 1.0) * math.log(t))
            return math.exp(-t ** alpha) * math.cos(g)

        def odd(t):
            if t <= 0.0:
                return 0.0
            g = -b * t * math.expm1((alpha - 1.0) * math.log(t))
            return -math.exp(-t ** alpha) * math.sin(g)

        w = x
    else:
        b = beta * _tan_half(alpha)

        def even(t):
            return math.exp(-t ** alpha) * math.cos(b * t ** alpha)

        def odd(t):
            return math.exp(-t ** alpha) * math.sin(b * t ** alpha)

        w = x + b
    lim = max(qctl.max_subdivisions, 100)
    if abs(w) < 1e-12:
        v, _ = quad(even, 0.0, tcut, epsabs=qctl.abs_tol, epsrel=qctl.rel_tol, limit=lim)
        return max(v / math.pi, 0.0)
    vc, _ = quad(even, 0.0, tcut, weight="cos", wvar=w,
                 epsabs=qctl.abs_tol, epsrel=qctl.rel_tol, limit=lim)
    if beta == 0.0:
        return max(vc / math.pi, 0.0)
    vs, _ = quad(odd, 0.0, tcut, weight="sin", wvar=w,
                 epsabs=qctl.abs_tol, epsrel=qctl.rel_tol, limit=lim)
    return max((vc + vs) / math.pi, 0.0)


_CLOSED_FORM_PAIRS = {(2.0, 0.0), (1.0, 0.0), (1.5, 0.0), (2.0 / 3.0, 0.0)}
_HOLTSMARK_SERIES_EDGE = 4.2
_WHITTAKER_INNER = 0.05


def holtsmark_pdf_std(x: float, ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """Standard (gamma=1, S0) symmetric alpha=3/2 density.

    Hypergeometric closed form near the center; the convergent pFq sums lose
    digits past |x| ~ 4, where the tail expansion takes over.
    """
    from .specfun import p_f_q

    ax = abs(x)
    if ax <= _HOLTSMARK_SERIES_EDGE:
        z = -(4.0 / 729.0) * ax ** 6
        t1 = gamma_fn(5.0 / 3.0) / math.pi * p_f_q(
            (5 / 12, 11 / 12), (1 / 3, 1 / 2, 5 / 6), z, ctl)
        t2 = ax * ax / (3.0 * math.pi) * p_f_q(
            (3 / 4, 1.0, 5 / 4), (2 / 3, 5 / 6, 7 / 6, 4 / 3), z, ctl)
        t3 = 7.0 * ax ** 4 / (81.0 * math.pi) * gamma_fn(4.0 / 3.0) * p_f_q(
            (13 / 12, 19 / 12), (7 / 6, 3 / 2, 5 / 3), z, ctl)
        return max(t1 - t2 + t3, 0.0)
    # asymptotic tail series truncated where its envelope bottoms out;
    # the sin factor vanishes every 4th term so the stop rule tracks the
    # coefficient envelope, not the signed term
    acc = 0.0
    sign = 1.0
    lgfac = 0.0
    lx = math.log(ax)
    best_env = math.inf
    for n in range(1, 80):
        env = math.exp(math.lgamma(1.5 * n + 1.0) - lgfac - (1.5 * n + 1.0) * lx)
        if env > best_env:
            break
        best_env = env
        acc += sign * env * math.sin(n * math.pi * 0.75)
        sign = -sign
        lgfac += math.log(n + 1.0)
    return max(acc / math.pi, 0.0)


def whittaker_pdf_std(x: float, ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """Standard (gamma=1, S0) symmetric alpha=2/3 density.

    (1/(2 sqrt(3 pi))) |x|^{-1} e^{(2/27) x^{-2}} W_{-1/2,1/6}((4/27) x^{-2});
    the exponential prefactor cancels W's e^{-z/2} analytically, leaving
    |x|^{-1} z^{2/3} U(7/6, 4/3, z) which stays finite for all x != 0.
    Inside |x| < 0.05 the confluent argument is extreme and the
    CF-inversion value is used instead.
    """
    from .specfun import conf_hypergeom_u

    ax = abs(x)
    if ax < _WHITTAKER_INNER:
        return _cf_inversion_pdf_std(2.0 / 3.0, 0.0, x, DEFAULT_QUAD)
    z = (4.0 / 27.0) / (ax * ax)
    u = conf_hypergeom_u(7.0 / 6.0, 4.0 / 3.0, z, ctl)
    return max(z ** (2.0 / 3.0) * u / (2.0 * math.sqrt(3.0 * math.pi) * ax), 0.0)


def _closed_form_pdf_std(alpha: float, x: float, ctl: SeriesControl) -> float:
    if alpha == 2.0:
        # N(0, 2)
        return math.exp(-0.25 * x * x) / (2.0 * math.sqrt(math.pi))
    if alpha == 1.0:
        return 1.0 / (math.pi * (1.0 + x * x))
    if alpha == 1.5:
        return holtsmark_pdf_std(x, ctl)
    if alpha == 2.0 / 3.0:
        return whittaker_pdf_std(x, ctl)
    raise DomainError(f"no closed form at alpha={alpha}")


_SERIES_SWITCH = 3.0
_ALPHA1_SERIES_MIN_BETA = 0.05
_ALPHA1_SERIES_WINDOW = 1.5


def _taylor_window(alpha: float) -> float:
    # the center expansion needs ~|x|^{alpha/(alpha-1)} terms, so the usable
    # window collapses as alpha -> 1+
    return min(_SERIES_SWITCH, 0.7 * 250.0 ** ((alpha - 1.0) / alpha))


def pdf(
    p: StableParams,
    x: float,
    method: PdfMethod = PdfMethod.AUTO,
    ctl: SeriesControl = DEFAULT_SERIES,
    qctl: QuadControl = DEFAULT_QUAD,
) -> float:
    """Density at x. Standardizes to (gamma=1, delta=0, S0) and rescales."""
    d0 = _delta0(p)
    xs = (float(x) - d0) / p.gamma
    a, b = p.alpha, p.beta
    if a == 2.0:
        b = 0.0
    if method is PdfMethod.CLOSED_FORM:
        if (a, b) not in _CLOSED_FORM_PAIRS:
            raise DomainError(f"no closed form for (alpha, beta)=({a}, {b})")
        return _closed_form_pdf_std(a, xs, ctl) / p.gamma
    if method is PdfMethod.SERIES_ZOLOTAREV:
        return _series_pdf_std(a, b, xs, ctl) / p.gamma
    if method is PdfMethod.CF_INVERSION:
        return _cf_inversion_pdf_std(a, b, xs, qctl) / p.gamma
    # Auto
    if (a, b) in _CLOSED_FORM_PAIRS:
        return _closed_form_pdf_std(a, xs, ctl) / p.gamma
    if a == 1.0:
        xr = xs if b > 0 else -xs
        y = (math.pi / 2.0) * xr + abs(b) * math.log(math.pi / 2.0)
        if abs(b) >= _ALPHA1_SERIES_MIN_BETA and abs(y) <= _ALPHA1_SERIES_WINDOW:
            return _series_pdf_std(a, b, xs, ctl) / p.gamma
        return _cf_inversion_pdf_std(a, b, xs, qctl) / p.gamma
    sigma_b, _ = _bform_map(a, b)
    xb = (xs + b * _tan_half(a)) / sigma_b
    if a > 1.0:
        if abs(xb) <= _taylor_window(a):
            return _series_pdf_std(a, b, xs, ctl) / p.gamma
    else:
        if abs(xb) >= _SERIES_SWITCH:
            return _series_pdf_std(a, b, xs, ctl) / p.gamma
    return _cf_inversion_pdf_std(a, b, xs, qctl) / p.gamma


# ------------------------------------------------------------------ cdf

def _theta0(alpha: float, beta: float) -> float:
    return math.atan(beta * _tan_half(alpha)) / alpha


def _log_v(theta: float, alpha: float, theta0: float) -> float:
    # log of the Zolotarev/Nolan integrand kernel V on (-theta0, pi/2)
    a1 = alpha * theta0
    ct = math.cos(theta)
    s = math.sin(alpha * (theta0 + theta))
    c2 = math.cos(a1 + (alpha - 1.0) * theta)
    if ct <= 0.0 or s <= 0.0 or c2 <= 0.0:
        # endpoint spillover from rounding: push to the matching limit
        return math.inf if alpha < 1.0 else -math.inf
    return (
        math.log(math.cos(a1)) / (alpha - 1.0)
        + (alpha / (alpha - 1.0)) * (math.log(ct) - math.log(s))
        + math.log(c2)
        - math.log(ct)
    )


def _log_v1(theta: float, beta: float) -> float:
    # alpha = 1 kernel, beta > 0, theta in (-pi/2, pi/2)
    pb = math.pi / 2.0 + beta * theta
    ct = math.cos(theta)
    if pb <= 0.0 or ct <= 0.0:
        return -math.inf
    return (
        math.log(2.0 / math.pi)
        + math.log(pb)
        - math.log(ct)
        + pb * math.tan(theta) / beta
    )


def _crossing(logg, lo: float, hi: float, target: float):
    """Bisect for log g = target on [lo, hi]; None when not bracketed."""
    f_lo = logg(lo) - target
    f_hi = logg(hi) - target
    if not (math.isfinite(f_lo) or math.isfinite(f_hi)):
        return None
    if (f_lo > 0) == (f_hi > 0):
        return None
    a_, b_ = lo, hi
    for _ in range(80):
        mid = 0.5 * (a_ + b_)
        fm = logg(mid) - target
        if fm == 0.0:
            return mid
        if (fm > 0) == (f_lo > 0):
            a_ = mid
        else:
            b_ = mid
    return 0.5 * (a_ + b_)


# the exp(-g) transition layer can be arbitrarily narrow in the far tail, so
# bracket it at g = 40 (negligible), 1 (midpoint) and 1e-4 (saturated)
_LAYER_TARGETS = (math.log(40.0), 0.0, math.log(1e-4))


def _layered_quad(integrand, logg, lo: float, hi: float, qctl: QuadControl) -> float:
    pts = [lo, hi]
    for tgt in _LAYER_TARGETS:
        c = _crossing(logg, lo, hi, tgt)
        if c is not None and lo < c < hi:
            pts.append(c)
    pts.sort()
    total = 0.0
    for a_, b_ in zip(pts, pts[1:]):
        v, _ = quad(integrand, a_, b_, epsabs=qctl.abs_tol, epsrel=qctl.rel_tol,
                    limit=qctl.max_subdivisions)
        total += v
    return total


def _survival_std_right(alpha: float, beta: float, xs: float, qctl: QuadControl) -> float:
    """P(X > xs) for standard S0 X, valid on the right branch (xs >= zeta)."""
    if alpha == 1.0:
        if beta == 0.0:
            return math.atan2(1.0, xs) / math.pi if xs > 0 else 1.0 - math.atan2(1.0, -xs) / math.pi
        c = -math.pi * xs / (2.0 * beta)

        def logg(t):
            return c + _log_v1(t, beta)

        lo, hi = -math.pi / 2.0 + 1e-12, math.pi / 2.0 - 1e-12

        def integrand(t):
            lg = logg(t)
            if lg > 700.0:
                return 1.0
            return -math.expm1(-math.exp(lg))

        return _layered_quad(integrand, logg, lo, hi, qctl) / math.pi
    zeta = -beta * _tan_half(alpha)
    xp = xs - zeta
    t0 = _theta0(alpha, beta)
    if xp < 1e-10:
        return 0.5 + t0 / math.pi
    lxp = math.log(xp) * alpha / (alpha - 1.0)

    def logg(t):
        return lxp + _log_v(t, alpha, t0)

    lo, hi = -t0 + 1e-12, math.pi / 2.0 - 1e-12
    if lo >= hi:
        return 0.0
    if alpha > 1.0:
        def integrand(t):
            lg = logg(t)
            if lg > 700.0:
                return 0.0
            return math.exp(-math.exp(lg))
    else:
        def integrand(t):
            lg = logg(t)
            if lg > 700.0:
                return 1.0
            return -math.expm1(-math.exp(lg))
    return _layered_quad(integrand, logg, lo, hi, qctl) / math.pi


def survival(p: StableParams, x: float, qctl: QuadControl = DEFAULT_QUAD) -> float:
    """P(X > x), computed directly (not as 1 - cdf) on the deep right tail."""
    d0 = _delta0(p)
    xs = (float(x) - d0) / p.gamma
    a, b = p.alpha, p.beta
    if a == 2.0:
        return 0.5 * math.erfc(0.5 * xs)
    if a == 1.0 and b == 0.0:
        return _survival_std_right(a, 0.0, xs, qctl)
    if a == 1.0:
        bb = b
        if bb < 0.0:
            return 1.0 - _survival_std_right(a, -bb, -xs, qctl)
        return _survival_std_right(a, bb, xs, qctl)
    zeta = -b * _tan_half(a)
    if xs >= zeta:
        return _survival_std_right(a, b, xs, qctl)
    return 1.0 - _survival_std_right(a, -b, -xs, qctl)


def _exp_form_integral(logg, lo: float, hi: float, qctl: QuadControl) -> float:
    """(1/pi) int exp(-exp(logg)) over [lo, hi], split across the layer."""
    if lo >= hi:
        return 0.0

    def integrand(t):
        lg = logg(t)
        if lg > 700.0:
            return 0.0
        return math.exp(-math.exp(lg))

    return _layered_quad(integrand, logg, lo, hi, qctl) / math.pi


def _cdf_std(alpha: float, beta: float, xs: float, qctl: QuadControl) -> float:
    """P(X <= xs) for standard S0 X, each region computed on its small side."""
    if alpha == 1.0:
        if beta == 0.0:
            return math.atan2(1.0, -xs) / math.pi if xs < 0 else 1.0 - math.atan2(1.0, xs) / math.pi
        if beta < 0.0:
            return _survival_std_right(1.0, -beta, -xs, qctl)
        c = -math.pi * xs / (2.0 * beta)
        return _exp_form_integral(lambda t: c + _log_v1(t, beta),
                                  -math.pi / 2.0 + 1e-12, math.pi / 2.0 - 1e-12, qctl)
    zeta = -beta * _tan_half(alpha)
    if xs < zeta:
        return _survival_std_right(alpha, -beta, -xs, qctl)
    t0 = _theta0(alpha, beta)
    xp = xs - zeta
    if xp < 1e-10:
        return 0.5 - t0 / math.pi
    if alpha > 1.0:
        return 1.0 - _survival_std_right(alpha, beta, xs, qctl)
    lxp = math.log(xp) * alpha / (alpha - 1.0)
    return (0.5 - t0 / math.pi) + _exp_form_integral(
        lambda t: lxp + _log_v(t, alpha, t0), -t0 + 1e-12, math.pi / 2.0 - 1e-12, qctl)


def cdf(p: StableParams, x: float, qctl: QuadControl = DEFAULT_QUAD) -> float:
    """P(X <= x) via the integral representation plus the duality identity."""
    d0 = _delta0(p)
    xs = (float(x) - d0) / p.gamma
    if p.alpha == 2.0:
        return 0.5 * math.erfc(-0.5 * xs)
    return min(max(_cdf_std(p.alpha, p.beta, xs, qctl), 0.0), 1.0)


def quantile(p: StableParams, q: float, qctl: QuadControl = DEFAULT_QUAD) -> float:
    """Inverse cdf by bracketing bisection (brentq)."""
    from scipy.optimize import brentq

    if not (0.0 < q < 1.0):
        raise DomainError("q must be in (0, 1)")
    d0 = _delta0(p)
    lo, hi = d0 - 4.0 * p.gamma, d0 + 4.0 * p.gamma
    for _ in range(200):
        if cdf(p, lo, qctl) < q:
            break
        lo = d0 - 4.0 * (d0 - lo)
    for _ in range(200):
        if cdf(p, hi, qctl) > q:
            break
        hi = d0 + 4.0 * (hi - d0)
    return float(brentq(lambda t: cdf(p, t, qctl) - q, lo, hi, xtol=1e-12, rtol=1e-12))


# ------------------------------------------------------------------ tails and moments

def tail_constant(alpha: float) -> float:
    """c_alpha = sin(pi alpha / 2) Gamma(alpha) / pi."""
    if not (0.0 < alpha < 2.0):
        raise DomainError("tail constant defined for alpha in (0, 2)")
    return math.sin(math.pi * alpha / 2.0) * gamma_fn(alpha) / math.pi


def tail_survival_asymptotic(p: StableParams, x: float) -> float:
    """Leading-order P(X > x) ~ gamma^alpha c_alpha (1 + beta) x^{-alpha}."""
    if p.alpha >= 2.0:
        raise DomainError("Gaussian tail is not covered by the power-law asymptote")
    if x <= 0.0:
        raise DomainError("x must be positive")
    return p.gamma ** p.alpha * tail_constant(p.alpha) * (1.0 + p.beta) * x ** (-p.alpha)


def tail_pdf_asymptotic(p: StableParams, x: float) -> float:
    """Leading-order pdf ~ alpha gamma^alpha c_alpha (1 + beta) x^{-alpha-1}."""
    if p.alpha >= 2.0:
        raise DomainError("Gaussian tail is not covered by the power-law asymptote")
    if x <= 0.0:
        raise DomainError("x must be positive")
    return (
        p.alpha * p.gamma ** p.alpha * tail_constant(p.alpha)
        * (1.0 + p.beta) * x ** (-p.alpha - 1.0)
    )


def flom_constant(power: float, alpha: float) -> float:
    """C(p, alpha) with E|Y|^p = C(p, alpha) * dispersion^{p/alpha}, beta = 0."""
    p_ = power
    if p_ == 0.0:
        return 1.0
    if alpha == 2.0:
        return 2.0 ** p_ * gamma_fn((p_ + 1.0) / 2.0) / math.sqrt(math.pi)
    return (
        2.0 ** (p_ + 1.0)
        * gamma_fn((p_ + 1.0) / 2.0)
        * gamma_fn(-p_ / alpha)
        / (alpha * math.sqrt(math.pi) * gamma_fn(-p_ / 2.0))
    )


def _sin2_moment(power: float) -> float:
    # int_0^inf u^{-p-1} sin^2 u du for 0 < p < 2
    if power == 1.0:
        return math.pi / 2.0
    return -(2.0 ** (power - 1.0)) * gamma_fn(-power) * math.cos(math.pi * power / 2.0)


def flom(p: StableParams, power: float) -> float:
    """Fractional absolute moment E|X|^p (center at zero for the formulas)."""
    if not (-1.0 < power < 2.0):
        raise DomainError("power must be in (-1, 2)")
    a = p.alpha
    if a < 2.0 and power >= a:
        return math.inf
    if power == 0.0:
        return 1.0
    if p.beta == 0.0 or a == 2.0:
        disp = p.gamma ** a
        return flom_constant(power, a) * disp ** (power / a)
    if p.param is not Param.S1:
        raise DomainError("skewed fractional moments use the S1 parameterization")
    if power <= 0.0:
        raise DomainError("skewed branch requires 0 < p < alpha")
    if a == 1.0:
        raise DomainError("skewed fractional moments need alpha != 1")
    bt = p.beta * _tan_half(a)
    c = (
        2.0 ** (power - 1.0) * gamma_fn(1.0 - power / a)
        / (power * _sin2_moment(power))
        * (1.0 + bt * bt) ** (power / (2.0 * a))
        * math.cos((power / a) * math.atan(bt))
    )
    return c * p.gamma ** power


def mean(p: StableParams) -> float:
    """E[X]; finite only for alpha > 1."""
    if p.alpha <= 1.0:
        raise DomainError("mean is undefined for alpha <= 1")
    if p.alpha == 2.0:
        return p.delta
    if p.param is Param.S0:
        return p.delta - p.beta * p.gamma * _tan_half(p.alpha)
    return p.delta
