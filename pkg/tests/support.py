"""Shared test oracles.

Array-callable stable/mixture cdfs built on a dense cached grid, so KS
tests against tens of thousands of samples stay fast while keeping the
quadrature cdf as the analytic reference.
"""

from __future__ import annotations

import numpy as np

from pnsc import stable

_GRID_CACHE: dict[float, object] = {}


def stable_cdf_fn(alpha: float):
    """Vectorized cdf of the standard symmetric stable law (unit S0 scale)."""
    fn = _GRID_CACHE.get(alpha)
    if fn is not None:
        return fn
    p = stable.StableParams(alpha, 0.0, 1.0, 0.0)
    xs = np.geomspace(1e-4, 1e6, 1400)
    Fs = np.array([stable.cdf(p, float(x)) for x in xs])
    xs = np.concatenate(([0.0], xs))
    Fs = np.concatenate(([0.5], Fs))
    c_tail = stable.tail_constant(alpha)

    def fn(y):
        y = np.asarray(y, dtype=float)
        a = np.abs(y)
        F = np.interp(a, xs, Fs)
        far = a > xs[-1]
        if far.any():
            F = np.where(far, 1.0 - c_tail * a ** (-alpha), F)
        return np.where(y >= 0.0, F, 1.0 - F)

    _GRID_CACHE[alpha] = fn
    return fn


def mixture_cdf_fn(m):
    """Vectorized cdf of a PnscMixture (conditional on K >= 1)."""
    base = stable_cdf_fn(m.alpha)
    ws = m.weights()
    gs = np.array([c.params.gamma for c in m.components])

    def F(y):
        y = np.asarray(y, dtype=float)
        out = np.zeros(y.shape)
        for w, g in zip(ws, gs):
            out += w * base(y / g)
        return out

    return F
