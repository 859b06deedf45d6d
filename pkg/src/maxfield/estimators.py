"""Monte Carlo reductions over lists of :class:`Realization`.

Means use :func:`math.fsum`, which is exactly rounded and therefore
independent of summation order; reductions folded in any order agree bit
for bit.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate, stats

from .errors import EmptyInput, QuadratureFailure
from .shapes import SpectralModel


def _mean_se(values) -> tuple[float, float]:
    x = np.asarray(values, dtype=float)
    n = x.size
    if n < 2:
        raise EmptyInput(f"need at least 2 values, got {n}")
    mean = math.fsum(x) / n
    var = math.fsum((x - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var / n)


def estimate_counts(realizations) -> tuple[float, float]:
    """Sample mean and standard error of the spectral-function counts."""
    return _mean_se([r.n_spectral for r in realizations])


def formula_estimate_Q(realizations, c: float) -> tuple[float, float]:
    """Mean of ``c / inf Z`` (expected count of the normalized sampler)."""
    return _mean_se([c / r.inf_field for r in realizations])


def formula_estimate_M(realizations, vol: float, C: float) -> tuple[float, float]:
    """Mean of ``|K + J| C / inf Z_J`` (expected count of Schlather's sampler)."""
    return _mean_se([vol * C / r.inf_field for r in realizations])


def A_factor(R: float, sigma: float, k: float, dim: int) -> float:
    """Domain-size factor of ``Q / E M_k`` for the Smith model on ``[-R, R]^dim``."""
    if min(R, sigma, k) <= 0:
        raise ValueError("R, sigma and k must be positive")
    if dim == 1:
        return (R + math.sqrt(math.pi / 2) * sigma) / (R + k * sigma)
    if dim == 2:
        num = R * R + math.sqrt(2 * math.pi) * sigma * R + math.pi / 2 * sigma ** 2
        return num / (R + k * sigma) ** 2
    raise ValueError("dim must be 1 or 2")


def ratio_of_means(a, b) -> tuple[float, float]:
    """``mean(a) / mean(b)`` for independent samples, with delta-method SE."""
    ma, sa = _mean_se(a)
    mb, sb = _mean_se(b)
    ratio = ma / mb
    return ratio, abs(ratio) * math.sqrt((sa / ma) ** 2 + (sb / mb) ** 2)


def P_factor(norm_realizations, schlather_realizations) -> float:
    """Ratio of mean ``1 / inf Z`` (normalized) to mean ``1 / inf Z_J`` (cut-off)."""
    return P_factor_with_se(norm_realizations, schlather_realizations)[0]


def P_factor_with_se(norm_realizations, schlather_realizations):
    if not norm_realizations or not schlather_realizations:
        raise EmptyInput("P factor needs both realization sets")
    return ratio_of_means([1.0 / r.inf_field for r in norm_realizations],
                          [1.0 / r.inf_field for r in schlather_realizations])


def factorization_gap(norm_realizations, schlather_realizations, c, vol, C):
    """``Q/M - A P`` and its delta-method SE.

    Since ``A P = mean(c / inf Z) / mean(vol C / inf Z_J)``, the gap
    compares counted and formula means within each sampler; the SE uses the
    per-replication differences ``m - c / inf Z`` and ``M - vol C / inf Z_J``.
    """
    m = np.array([r.n_spectral for r in norm_realizations], dtype=float)
    qf = np.array([c / r.inf_field for r in norm_realizations])
    M = np.array([r.n_spectral for r in schlather_realizations], dtype=float)
    mf = np.array([vol * C / r.inf_field for r in schlather_realizations])
    Q, Qf = math.fsum(m) / m.size, math.fsum(qf) / qf.size
    Mm, Mf = math.fsum(M) / M.size, math.fsum(mf) / mf.size
    gap = Q / Mm - Qf / Mf
    _, se_dq = _mean_se(m - qf)
    _, se_dm = _mean_se(M - mf)
    se = math.sqrt((se_dq / Mm) ** 2 + (Q * se_dm / Mm ** 2) ** 2)
    return gap, se


def ks_margin_test(realizations, grid_index: int, scale: float = 1.0):
    """Two-sided KS test of ``Z(y)`` against ``P(Z <= z) = exp(-scale / z)``."""
    if len(realizations) < 100:
        raise EmptyInput("KS margin test needs at least 100 realizations")
    z = np.array([r.field[grid_index] for r in realizations])
    res = stats.kstest(z, lambda x: np.exp(-scale / np.maximum(x, 1e-300)))
    return float(res.statistic), float(res.pvalue)


def empirical_joint_cdf(realizations, grid_indices, thresholds):
    """``P(Z(y_i) <= z_i for all i)`` estimate and its binomial SE."""
    n = len(realizations)
    if n == 0:
        raise EmptyInput("no realizations")
    idx = np.asarray(grid_indices)
    z = np.asarray(thresholds, dtype=float)
    hits = sum(bool(np.all(r.field[idx] <= z)) for r in realizations)
    p = hits / n
    return p, math.sqrt(max(p * (1 - p), 1e-300) / n)


def sup_cdf(realizations, z: float = 1.0):
    """``P(max_grid Z <= z)`` estimate and its binomial SE."""
    n = len(realizations)
    if n == 0:
        raise EmptyInput("no realizations")
    p = sum(r.sup_field <= z for r in realizations) / n
    return p, math.sqrt(max(p * (1 - p), 1e-300) / n)


def recount_from_field(realization) -> int:
    """Count recomputed from the final field and the recorded exponentials.

    Returns ``min{k : bound * t_{k+1} < inf Z}``. The strict inequality
    settles the grid tie where the minimum of the field is attained by a
    spectral function at its own peak value ``bound * t_j``; then ``j``
    itself had to be overlaid. Off ties this equals the non-strict form.
    """
    t = realization.arrivals()
    L = realization.inf_field
    b = realization.bound
    for k in range(1, len(t)):
        if b * t[k] < L:
            return k
    return len(t)


def recount_nonstrict(realization) -> int:
    """``min{k : bound / inf Z <= E_1 + ... + E_{k+1}}`` (tie-blind form)."""
    s = np.cumsum(realization.exponentials)
    target = realization.bound / realization.inf_field
    hit = np.nonzero(s[1:] >= target)[0]
    return int(hit[0]) + 1 if hit.size else len(s)


def _quad(f, a, b, rtol, points=None, args=()):
    pts = None
    if points is not None:
        pts = sorted(p for p in set(points) if a < p < b) or None
    out = integrate.quad(f, a, b, args=args, epsabs=0.0, epsrel=rtol, points=pts,
                         limit=500, full_output=1)
    val, err = out[0], out[1]
    if len(out) > 3 and err > max(10 * rtol * abs(val), 1e-13):
        raise QuadratureFailure(out[3])
    return val


def exponent_oracle(model: SpectralModel, points, thresholds, rtol: float = 1e-8) -> float:
    """``-log P(Z(y_i) <= z_i for all i) = integral max_i f0(|y_i - x|) / z_i dx``.

    Integrated over the bounding box of the points dilated by ``10 sigma``
    (Gaussian) or ``r`` (indicator), outside which the integrand is
    negligible or zero.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != model.dim:
        pts = pts.reshape(-1, model.dim)
    z = np.asarray(thresholds, dtype=float)
    if not 1 <= len(pts) <= 4 or len(z) != len(pts):
        raise ValueError("need 1 to 4 points with matching thresholds")
    sh = model.shape
    if sh.kind == "gaussian":
        pad = 10.0 * sh.sigma
    elif sh.kind == "indicator":
        pad = sh.r
    else:
        raise ValueError("oracle supports Gaussian and indicator shapes")
    lo, hi = pts.min(axis=0) - pad, pts.max(axis=0) + pad
    inv_z = 1.0 / z

    if model.dim == 1:
        y = pts[:, 0]

        def f1(x):
            return float(np.max(sh.f0_sq((y - x) ** 2) * inv_z))

        brk = list(y)
        if sh.kind == "indicator":
            brk += list(y - sh.r) + list(y + sh.r)
        return _quad(f1, lo[0], hi[0], rtol, brk)

    y1, y2 = pts[:, 0], pts[:, 1]

    def f2(x2, x1):
        return float(np.max(sh.f0_sq((y1 - x1) ** 2 + (y2 - x2) ** 2) * inv_z))

    def inner(x1):
        brk = list(y2)
        if sh.kind == "indicator":
            r2 = sh.r ** 2 - (y1 - x1) ** 2
            ok = r2 > 0
            half = np.sqrt(np.where(ok, r2, 0.0))
            brk += list((y2 - half)[ok]) + list((y2 + half)[ok])
        return _quad(f2, lo[1], hi[1], rtol * 0.1, brk, args=(x1,))

    brk = list(y1)
    if sh.kind == "indicator":
        brk += list(y1 - sh.r) + list(y1 + sh.r)
        # x1 where pairs of circles intersect
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                brk += _circle_intersections_x(pts[i], pts[j], sh.r)
    return _quad(inner, lo[0], hi[0], rtol, brk)


def _circle_intersections_x(p, q, r):
    d = float(np.hypot(*(q - p)))
    if d == 0 or d >= 2 * r:
        return []
    mid = (p + q) / 2
    h = math.sqrt(r * r - (d / 2) ** 2)
    ux, uy = (q - p) / d
    return [mid[0] - h * uy, mid[0] + h * uy]
