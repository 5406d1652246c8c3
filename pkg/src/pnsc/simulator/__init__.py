"""Monte Carlo synthesis of the Poisson interference field.

Two interchangeable synthesis kernels: a compiled extension (preferred) and
a pure-numpy fallback, selected at import.  They share one sampling law but
not one bit stream; benchmarks/bench_synthesize.py compares them.
"""

from ..controls import DomainError
from . import _pure

try:
    from .. import _core as _compiled
except ImportError:  # pragma: no cover - build without the extension
    _compiled = None

_KERNELS = {"pure": _pure}
if _compiled is not None:
    _KERNELS["compiled"] = _compiled


def available_kernels() -> list[str]:
    return sorted(_KERNELS)


def active_kernel() -> str:
    """Kernel used when synthesize is not given an explicit one."""
    return "compiled" if "compiled" in _KERNELS else "pure"


def get_kernel(name: str | None = None):
    if name is None:
        name = active_kernel()
    try:
        return _KERNELS[name]
    except KeyError:
        raise DomainError(
            f"unknown kernel {name!r}; available: {available_kernels()}"
        ) from None


from .field import (  # noqa: E402
    SINGLE_CARRIER,
    ChannelKind,
    ChannelSpec,
    EmpiricalCf,
    EmpiricalStats,
    FadingKind,
    FadingSpec,
    FieldConfig,
    FieldDraw,
    IQBatch,
    IntensityKind,
    IntensityModel,
    carrier_law_of,
    draw_field,
    empirical_cf,
    empirical_stats,
    estimate_tail_index,
    expected_count,
    map_intensity,
    moment_ac,
    synthesize,
)
from .io import read_iq, write_csv, write_iq  # noqa: E402

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
    "active_kernel",
    "available_kernels",
    "carrier_law_of",
    "draw_field",
    "empirical_cf",
    "empirical_stats",
    "estimate_tail_index",
    "expected_count",
    "get_kernel",
    "map_intensity",
    "moment_ac",
    "read_iq",
    "synthesize",
    "write_csv",
    "write_iq",
]
