"""PNSC(alpha) interference models.

Stable-law primitives, compound Poisson / Poisson-Gamma interference
mixtures, tail and moment analytics, an LRT receiver, and a Poisson-field
Monte Carlo simulator that cross-validates the analytic formulas.
"""

from . import mixtures, receiver, simulator, specfun, stable
from .controls import (
    ConfigError,
    DomainError,
    FormatError,
    NonConvergenceError,
    PnscError,
    QuadControl,
    SeriesControl,
    ValidationFailure,
)
from .mixtures import (
    BandwidthKind,
    BandwidthLaw,
    CarrierLaw,
    PnscMixture,
    build_mixture,
    carrier_alpha_gamma,
    gsnr,
    mixture_cdf,
    mixture_flom,
    mixture_from_scale,
    mixture_pdf,
    mixture_tail,
)
from .receiver import LrtResult, LrtSpec, Regime, biso_capacity, lrt, lrt_curve
from .simulator import FieldConfig, IQBatch, IntensityModel, synthesize
from .stable import Param, StableParams

__version__ = "0.1.0"

__all__ = [
    "BandwidthKind",
    "BandwidthLaw",
    "CarrierLaw",
    "ConfigError",
    "DomainError",
    "FieldConfig",
    "FormatError",
    "IQBatch",
    "IntensityModel",
    "LrtResult",
    "LrtSpec",
    "NonConvergenceError",
    "Param",
    "PnscError",
    "PnscMixture",
    "QuadControl",
    "Regime",
    "SeriesControl",
    "StableParams",
    "ValidationFailure",
    "__version__",
    "biso_capacity",
    "build_mixture",
    "carrier_alpha_gamma",
    "gsnr",
    "lrt",
    "lrt_curve",
    "mixture_cdf",
    "mixture_flom",
    "mixture_from_scale",
    "mixture_pdf",
    "mixture_tail",
    "mixtures",
    "receiver",
    "simulator",
    "specfun",
    "stable",
]
