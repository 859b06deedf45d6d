# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-replication loops for the moving-maxima samplers.

Mirrors ``maxfield._pykernels`` draw for draw: same counter-based
SplitMix64 stream, same inverse-CDF transforms, same arithmetic order in
the overlay, so both backends give the same fields and counts.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log1p, fabs
from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, realloc, free
from scipy.special.cython_special cimport ndtri

cnp.import_array()

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef double TWO_M53 = 1.0 / 9007199254740992.0

DEF SHAPE_GAUSSIAN = 0
DEF SHAPE_INDICATOR = 1
DEF SAMPLER_GSTAR = 0
DEF SAMPLER_BOX = 1
DEF SAMPLER_BALL = 2
DEF WINDOW_NONE = 0
DEF WINDOW_CUBE = 1
DEF WINDOW_BALL = 2

cdef struct Stream:
    uint64_t key
    uint64_t counter


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double uniform(Stream* s) noexcept nogil:
    s.counter += 1
    return <double>(mix64(s.key + s.counter * GAMMA) >> 11) * TWO_M53


cdef inline double halfnormal(Stream* s, double sigma) noexcept nogil:
    return -sigma * ndtri(0.5 * (1.0 - uniform(s)))


cdef inline int pick_region(const double* cdf, int n, double u) noexcept nogil:
    cdef int k = 0
    while k < n - 1 and u >= cdf[k]:
        k += 1
    return k


cdef void sample_gstar(Stream* s, int dim, double R, double sigma,
                       const double* cdf, int ncdf, double* x) noexcept nogil:
    cdef int k = pick_region(cdf, ncdf, uniform(s))
    cdef double u1, u2, s1, s2
    u1 = uniform(s)
    if dim == 1:
        if k == 0:
            x[0] = -R + 2 * R * u1
        else:
            s1 = 1.0 if k == 1 else -1.0
            x[0] = s1 * (R + (-sigma * ndtri(0.5 * (1.0 - u1))))
        return
    u2 = uniform(s)
    if k == 0:
        x[0] = -R + 2 * R * u1
        x[1] = -R + 2 * R * u2
    elif k <= 2:
        s1 = 1.0 if k == 1 else -1.0
        x[0] = s1 * (R + (-sigma * ndtri(0.5 * (1.0 - u1))))
        x[1] = -R + 2 * R * u2
    elif k <= 4:
        s2 = 1.0 if k == 3 else -1.0
        x[0] = -R + 2 * R * u1
        x[1] = s2 * (R + (-sigma * ndtri(0.5 * (1.0 - u2))))
    else:
        s1 = 1.0 if (k == 5 or k == 6) else -1.0
        s2 = 1.0 if (k == 5 or k == 7) else -1.0
        x[0] = s1 * (R + (-sigma * ndtri(0.5 * (1.0 - u1))))
        x[1] = s2 * (R + (-sigma * ndtri(0.5 * (1.0 - u2))))


cdef void sample_box(Stream* s, int dim, double w, double* x) noexcept nogil:
    cdef int j
    for j in range(dim):
        x[j] = -w + 2 * w * uniform(s)


cdef void sample_ball_dilation(Stream* s, int dim, double R, double a,
                               double* x) noexcept nogil:
    cdef double w = R + a
    cdef double a2 = a * a
    cdef double x1, x2, g1, g2, d2
    if dim == 1:
        x[0] = -w + 2 * w * uniform(s)
        return
    while True:
        x1 = -w + 2 * w * uniform(s)
        x2 = -w + 2 * w * uniform(s)
        g1 = fabs(x1) - R
        g2 = fabs(x2) - R
        d2 = 0.0
        if g1 > 0.0:
            d2 += g1 * g1
        if g2 > 0.0:
            d2 += g2 * g2
        if d2 <= a2:
            x[0] = x1
            x[1] = x2
            return


cdef inline double dist2_to_K(const double* x, int dim, double R) noexcept nogil:
    cdef double d2 = 0.0, g
    cdef int j
    for j in range(dim):
        g = fabs(x[j]) - R
        if g > 0.0:
            d2 += g * g
    return d2


def simulate_one(const double[:, ::1] grid, double[::1] field,
                 uint64_t key, uint64_t counter, dict p):
    """Run one replication; fills ``field`` in place.

    Returns ``(m, exponentials, counter, status)`` where ``status`` is 0 on
    a regular stop and 1 when the budget ran out.
    """
    cdef int dim = grid.shape[1]
    cdef Py_ssize_t n = grid.shape[0]
    cdef int shape_kind = p["shape_kind"]
    cdef double inv2s2 = p["inv2s2"]
    cdef double r2 = p["r2"]
    cdef double sigma = p["sigma"]
    cdef double R = p["R"]
    cdef double scale = p["scale"]
    cdef double bound = p["bound"]
    cdef bint normalized = p["normalized"]
    cdef int sampler = p["sampler"]
    cdef double sampler_a = p["sampler_a"]
    cdef int window = p["window"]
    cdef double wa = p["window_a"]
    cdef double wa2 = wa * wa
    cdef bint weak = p["weak"]
    cdef long long budget = p["budget"]
    cdef double[::1] cdf_view = np.ascontiguousarray(p["region_cdf"], dtype=np.float64)
    cdef const double* cdf = &cdf_view[0]
    cdef int ncdf = cdf_view.shape[0]

    cdef Stream s
    s.key = key
    s.counter = counter
    cdef double x[2]
    cdef double S = 0.0, t, st, e, dk2, d2, dx, v, zmin, zsup = 0.0, ratio
    cdef long long m = 0
    cdef Py_ssize_t i, cap = 64, ne = 0
    cdef int status = 0
    cdef bint inside
    cdef double* exps = <double*> malloc(cap * sizeof(double))
    if exps == NULL:
        raise MemoryError()

    with nogil:
        for i in range(n):
            field[i] = 0.0
        zmin = 0.0
        while True:
            e = -log1p(-uniform(&s))
            if ne == cap:
                cap *= 2
                exps = <double*> realloc(exps, cap * sizeof(double))
            exps[ne] = e
            ne += 1
            S += e
            t = 1.0 / S
            if m > 0:
                if weak:
                    if bound * t <= zsup:
                        break
                elif bound * t <= zmin:
                    break
                if m >= budget:
                    status = 1
                    break
            if sampler == SAMPLER_GSTAR:
                sample_gstar(&s, dim, R, sigma, cdf, ncdf, x)
            elif sampler == SAMPLER_BOX:
                sample_box(&s, dim, sampler_a, x)
            else:
                sample_ball_dilation(&s, dim, R, sampler_a, x)
            m += 1
            st = scale * t
            if st > zsup:
                zsup = st
            dk2 = dist2_to_K(x, dim, R) if normalized else 0.0
            zmin = 1e308
            for i in range(n):
                dx = grid[i, 0] - x[0]
                d2 = dx * dx
                inside = True
                if window == WINDOW_CUBE:
                    inside = fabs(dx) <= wa
                if dim == 2:
                    dx = grid[i, 1] - x[1]
                    if window == WINDOW_CUBE:
                        inside = inside and fabs(dx) <= wa
                    d2 = d2 + dx * dx
                if window == WINDOW_BALL:
                    inside = d2 <= wa2
                if shape_kind == SHAPE_GAUSSIAN:
                    ratio = exp((dk2 - d2) * inv2s2)
                else:
                    ratio = 1.0 if d2 <= r2 else 0.0
                if not inside:
                    ratio = 0.0
                v = st * ratio
                if v > field[i]:
                    field[i] = v
                if field[i] < zmin:
                    zmin = field[i]

    out = np.empty(ne, dtype=np.float64)
    cdef double[::1] ov = out
    for i in range(ne):
        ov[i] = exps[i]
    free(exps)
    return m, out, s.counter, status


def uniforms(uint64_t key, uint64_t counter, Py_ssize_t n):
    """First ``n`` uniforms after ``counter`` (for cross-backend checks)."""
    cdef Stream s
    s.key = key
    s.counter = counter
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i
    for i in range(n):
        ov[i] = uniform(&s)
    return out
