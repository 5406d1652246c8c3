"""Pure-numpy synthesis kernel, the fallback when the compiled core is absent.

Same call signature as pnsc._core.synth_fields and the same sampling law,
but a different RNG stream (PCG64 seeded from (seed, stream tag, field
offset)), so the two kernels agree in distribution, not bit for bit.
"""

from __future__ import annotations

import numpy as np

_STREAM_TAG = 3


def kernel_id() -> str:
    return "pure"


def synth_fields(counts, w_scale, exponent, amp_code, fading_code, fading_param,
                 chan_code, chan_param, seed, field_offset, out_re, out_im):
    # amp_code is a compiled-path dispatch hint; the generic power suffices here
    del amp_code
    counts = np.asarray(counts, dtype=np.int64)
    out_re[:] = 0.0
    out_im[:] = 0.0
    total = int(counts.sum())
    if total == 0:
        return
    rng = np.random.Generator(
        np.random.PCG64(np.random.SeedSequence((int(seed), _STREAM_TAG, int(field_offset))))
    )
    u = 1.0 - rng.random(total)  # (0, 1]
    amp = (w_scale * u) ** (-exponent)
    if fading_code == 1:
        amp *= fading_param * np.sqrt(-2.0 * np.log(1.0 - rng.random(total)))
    else:
        amp *= fading_param
    if chan_code == 1:
        amp *= chan_param * np.abs(rng.standard_normal(total))
    elif chan_code == 2:
        amp *= abs(chan_param)
    theta = (2.0 * np.pi) * rng.random(total)
    re_t = amp * np.cos(theta)
    im_t = amp * np.sin(theta)
    starts = np.concatenate(([0], np.cumsum(counts[:-1])))
    nz = counts > 0
    if nz.any():
        # reduceat keeps each heavy-tailed segment's sum exact to its own scale,
        # unlike a global cumsum-and-diff
        s_nz = starts[nz].astype(np.intp)
        out_re[nz] = np.add.reduceat(re_t, s_nz)
        out_im[nz] = np.add.reduceat(im_t, s_nz)
