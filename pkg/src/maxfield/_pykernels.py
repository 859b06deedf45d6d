"""Pure-Python fallback for the compiled replication loop.

Same contract as ``_kernels.simulate_one``; the overlay is vectorized over
the grid with NumPy and the random draws go through :class:`RngStream`.
Also accepts shapes the compiled loop does not know (``shape_kind='profile'``).
"""
from __future__ import annotations

import numpy as np

from .geometry import dist2_to_K
from .rng import RngStream
from .shapes import sample_shift_gstar, sample_uniform_dilation


def simulate_one(grid, field, key, counter, p):
    stream = RngStream(0, 0, key=key, counter=counter)
    dim = grid.shape[1]
    R = p["R"]
    scale, bound = p["scale"], p["bound"]
    sampler, sampler_a = p["sampler"], p["sampler_a"]
    window, wa = p["window"], p["window_a"]
    weak, budget = p["weak"], p["budget"]
    shape_kind = p["shape_kind"]
    model = p.get("model")

    field[:] = 0.0
    exps = []
    S = 0.0
    m = 0
    zmin = 0.0
    zsup = 0.0
    status = 0
    while True:
        e = stream.exponential()
        exps.append(e)
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
        if sampler == 0:
            x = sample_shift_gstar(model, stream)
        elif sampler == 1:
            x = np.array([-sampler_a + 2 * sampler_a * stream.uniform() for _ in range(dim)])
        else:
            x = sample_uniform_dilation(R, sampler_a, dim, "ball", stream)
        m += 1
        st = scale * t
        if st > zsup:
            zsup = st
        diff = grid - x
        d2 = diff[:, 0] ** 2
        if dim == 2:
            d2 = d2 + diff[:, 1] ** 2
        if shape_kind == 0:
            dk2 = dist2_to_K(R, x) if p["normalized"] else 0.0
            ratio = np.exp((dk2 - d2) * p["inv2s2"])
        elif shape_kind == 1:
            ratio = (d2 <= p["r2"]).astype(float)
        else:
            sh = model.shape
            if p["normalized"]:
                ratio = sh.f0_sq(d2) / sh.f0_sq(dist2_to_K(R, x))
            else:
                ratio = sh.f0_sq(d2)
        if window == 1:
            ratio = np.where(np.all(np.abs(diff) <= wa, axis=1), ratio, 0.0)
        elif window == 2:
            ratio = np.where(d2 <= wa * wa, ratio, 0.0)
        np.maximum(field, st * ratio, out=field)
        zmin = field.min()
    return m, np.array(exps), stream.counter, status


def uniforms(key, counter, n):
    s = RngStream(0, 0, key=key, counter=counter)
    return np.array([s.uniform() for _ in range(n)])
