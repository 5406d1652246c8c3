# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled synthesis kernel for the Poisson interference field.

Accumulates, per field, sum_i (w_scale*u_i)^(-exponent) * A_i * |c_i| * e^{j Phi_i}
with u_i uniform on (0, 1], Phi_i uniform on [0, 2pi).  The uniform phase makes
any real sign on c_i distributionally irrelevant, so only |c_i| is drawn.

Each field gets its own xoshiro256++ stream seeded by splitmix64 from
(seed, global field index); results are therefore independent of how the
field range is chunked across calls or threads.
"""

from libc.math cimport cbrt, fabs, log, pow, sqrt
from libc.stdint cimport int64_t, uint64_t

cdef extern from *:
    """
    #define PNSC_GOLDEN 0x9e3779b97f4a7c15ULL
    static inline uint64_t pnsc_rotl(const uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    """
    uint64_t PNSC_GOLDEN
    uint64_t pnsc_rotl(uint64_t x, int k) nogil

cdef struct Xo256:
    uint64_t s0, s1, s2, s3

cdef inline uint64_t _splitmix(uint64_t* st) noexcept nogil:
    cdef uint64_t z
    st[0] += PNSC_GOLDEN
    z = st[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xbf58476d1ce4e5b9
    z = (z ^ (z >> 27)) * <uint64_t>0x94d049bb133111eb
    return z ^ (z >> 31)

cdef inline void _xo_seed(Xo256* g, uint64_t seed, uint64_t index) noexcept nogil:
    cdef uint64_t sd = seed ^ (PNSC_GOLDEN * (index + 1))
    g.s0 = _splitmix(&sd)
    g.s1 = _splitmix(&sd)
    g.s2 = _splitmix(&sd)
    g.s3 = _splitmix(&sd)
    if g.s0 == 0 and g.s1 == 0 and g.s2 == 0 and g.s3 == 0:
        g.s0 = 1

cdef inline uint64_t _xo_next(Xo256* g) noexcept nogil:
    cdef uint64_t result = pnsc_rotl(g.s0 + g.s3, 23) + g.s0
    cdef uint64_t t = g.s1 << 17
    g.s2 ^= g.s0
    g.s3 ^= g.s1
    g.s1 ^= g.s2
    g.s0 ^= g.s3
    g.s2 ^= t
    g.s3 = pnsc_rotl(g.s3, 45)
    return result

DEF TWO_NEG53 = 1.1102230246251565e-16  # 2^-53, exact

cdef inline double _xo_unit(Xo256* g) noexcept nogil:
    # (0, 1]: keeps log() and the reciprocal amplitude finite
    return ((_xo_next(g) >> 11) + 1) * TWO_NEG53

cdef inline double _amp(double x, double exponent, int amp_code) noexcept nogil:
    cdef double t
    if amp_code == 1:      # exponent 1 (sigma = 4)
        return 1.0 / x
    elif amp_code == 2:    # exponent 1/2
        return 1.0 / sqrt(x)
    elif amp_code == 3:    # exponent 2/3 (sigma = 8/3)
        t = cbrt(x)
        return 1.0 / (t * t)
    elif amp_code == 4:    # exponent 3/4 (sigma = 3)
        t = sqrt(x)
        return 1.0 / (t * sqrt(t))
    elif amp_code == 5:    # exponent 3/2 (sigma = 6)
        return 1.0 / (x * sqrt(x))
    return pow(x, -exponent)

cdef inline double _half_normal(Xo256* g) noexcept nogil:
    # |N(0,1)| by the polar method, one coordinate
    cdef double v1, v2, s
    while True:
        v1 = 2.0 * _xo_unit(g) - 1.0
        v2 = 2.0 * _xo_unit(g) - 1.0
        s = v1 * v1 + v2 * v2
        if s <= 1.0 and s != 0.0:
            break
    return fabs(v1) * sqrt(-2.0 * log(s) / s)


def kernel_id():
    return "compiled"


def synth_fields(int64_t[::1] counts,
                 double w_scale,
                 double exponent,
                 int amp_code,
                 int fading_code,
                 double fading_param,
                 int chan_code,
                 double chan_param,
                 uint64_t seed,
                 uint64_t field_offset,
                 double[::1] out_re,
                 double[::1] out_im):
    """Fill out_re/out_im[f] with the complex field sum for each count.

    fading_code: 0 constant amplitude, 1 Rayleigh scale fading_param.
    chan_code: 0 unit modulus, 1 half-normal scale chan_param, 2 constant
    modulus |chan_param|.
    """
    cdef Py_ssize_t n = counts.shape[0]
    if out_re.shape[0] != n or out_im.shape[0] != n:
        raise ValueError("output buffers must match counts length")
    cdef Py_ssize_t f
    cdef int64_t i, cnt
    cdef Xo256 g
    cdef double yI, yQ, u, x, a, m, v1, v2, s, t
    cdef double mark_const = 1.0
    if fading_code == 0:
        mark_const *= fading_param
    if chan_code == 2:
        mark_const *= fabs(chan_param)
    with nogil:
        for f in range(n):
            _xo_seed(&g, seed, field_offset + <uint64_t>f)
            yI = 0.0
            yQ = 0.0
            cnt = counts[f]
            for i in range(cnt):
                u = _xo_unit(&g)
                x = w_scale * u
                a = _amp(x, exponent, amp_code) * mark_const
                if fading_code == 1:
                    a *= fading_param * sqrt(-2.0 * log(_xo_unit(&g)))
                if chan_code == 1:
                    a *= chan_param * _half_normal(&g)
                while True:
                    v1 = 2.0 * _xo_unit(&g) - 1.0
                    v2 = 2.0 * _xo_unit(&g) - 1.0
                    s = v1 * v1 + v2 * v2
                    if s <= 1.0 and s != 0.0:
                        break
                t = a / s
                yI += t * (v1 * v1 - v2 * v2)
                yQ += t * (2.0 * v1 * v2)
            out_re[f] = yI
            out_im[f] = yQ
    return None
