"""Exact field samplers.

All three samplers build ``Z^(m)(y) = max_{i <= m} t_i * phi_i(y)`` from
descending arrivals ``t_i = 1 / (E_1 + ... + E_i)`` and stop once the next
arrival times the bound on every spectral function can no longer beat the
current field:

* normalized  -- ``phi = c f0(|y - X|) / f0(d(X, K))``, ``X ~ f0(d(x, K)) / c``;
  bound ``c``.
* schlather   -- ``phi = |K + J| f0(|y - U|) 1_J(y - U)``, ``U`` uniform on the
  dilation; bound ``|K + J| sup f0``.
* transformed -- ``phi = f0(|y - X|) / w(X)``, ``X ~ w``; bound ``B_w``.

For each replication the terminating exponential ``E_{m+1}`` is drawn and
recorded; its spectral function is never sampled.
"""
from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import BudgetExhausted, ConfigError
from .geometry import dilated_volume
from .rng import RngStream, derive_stream
from .shapes import SpectralModel
from .weights import Custom, GStar, ShiftDensitySpec, UniformWindow, esssup_bound

DEFAULT_BUDGET = 10 ** 7


class StoppingVariant(str, enum.Enum):
    """Stopping conditions for the normalized sampler.

    ``EXACT`` and ``STRONG`` are the same test here: for moving maxima with
    shifts over all of R^d the pointwise ratio reaches ``c`` at every grid
    point, so the exact rule collapses to ``c t_{m+1} <= inf Z^(m)``.
    ``WEAK`` compares with the supremum of ``Z^(m)`` over the rectangle,
    which is ``c t_1`` for every ``m``.
    """

    EXACT = "exact"
    STRONG = "strong"
    WEAK = "weak"


@dataclass
class Realization:
    """One simulated field on the grid of ``domain`` (flat, row-major)."""

    field: np.ndarray
    n_spectral: int
    exponentials: np.ndarray
    method: str
    variant: str
    bound: float
    shape: tuple
    stream_index: int = 0
    master_seed: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def inf_field(self) -> float:
        return float(self.field.min())

    @property
    def sup_field(self) -> float:
        return float(self.field.max())

    @property
    def first_arrival(self) -> float:
        return 1.0 / float(self.exponentials[0])

    @property
    def arrivals_consumed(self) -> int:
        return len(self.exponentials)

    @property
    def grid_field(self) -> np.ndarray:
        return self.field.reshape(self.shape)

    def arrivals(self) -> np.ndarray:
        """``t_1 > t_2 > ...`` computed exactly as the sampler did."""
        out = np.empty(len(self.exponentials))
        s = 0.0
        for i, e in enumerate(self.exponentials):
            s += float(e)
            out[i] = 1.0 / s
        return out


def _base_params(model: SpectralModel) -> dict:
    sh = model.shape
    p = {
        "R": float(model.domain.R),
        "inv2s2": 0.0, "r2": 0.0, "sigma": 1.0,
        "region_cdf": np.ones(1),
        "window": 0, "window_a": 0.0,
        "weak": False, "normalized": False,
        "sampler": 0, "sampler_a": 0.0,
        "model": model,
    }
    if sh.kind == "gaussian":
        p.update(shape_kind=0, inv2s2=sh.inv2s2, sigma=sh.sigma)
    elif sh.kind == "indicator":
        p.update(shape_kind=1, r2=sh.r * sh.r)
    else:
        p.update(shape_kind=2)
    return p


def _kernels_for(p, backend):
    if p["shape_kind"] == 2:
        return _backend.get_kernels("python")
    return _backend.get_kernels(backend)


def _run(model, stream, p, method, variant, backend):
    k = _kernels_for(p, backend)
    grid = model.domain.points
    fld = np.empty(grid.shape[0])
    m, exps, counter, status = k.simulate_one(grid, fld, stream.key, stream.counter, p)
    stream.counter = counter
    if status:
        raise BudgetExhausted(f"{method}: no stop after {m} spectral functions")
    return Realization(field=fld, n_spectral=int(m), exponentials=exps, method=method,
                       variant=variant, bound=p["bound"], shape=model.domain.shape,
                       stream_index=stream.stream_index, master_seed=stream.master_seed)


def normalized_params(model: SpectralModel, variant=StoppingVariant.EXACT,
                      budget=DEFAULT_BUDGET) -> dict:
    variant = StoppingVariant(variant)
    c = model.c
    p = _base_params(model)
    p.update(scale=c, bound=c, normalized=True, weak=variant is StoppingVariant.WEAK,
             budget=int(budget))
    if model.dilation_sampler:
        p.update(sampler=2, sampler_a=model.shape.r)
    else:
        p.update(sampler=0, region_cdf=np.ascontiguousarray(model.region_cdf))
    return p


def simulate_normalized(model: SpectralModel, stream: RngStream,
                        variant=StoppingVariant.EXACT, budget=DEFAULT_BUDGET,
                        backend=None) -> Realization:
    """Exact sample of the field through the normalized spectral representation."""
    p = normalized_params(model, variant, budget)
    return _run(model, stream, p, "normalized", StoppingVariant(variant).value, backend)


def schlather_window(model: SpectralModel, cutoff_k: float, window: str | None = None):
    """Cut-off window ``J`` as ``(kind, halfwidth)``.

    Gaussian shapes default to the cube ``[-k sigma, k sigma]^dim``; indicator
    shapes to the ball ``b(0, k r)``, which must contain the support.
    """
    sh = model.shape
    if not cutoff_k > 0:
        raise ConfigError("cutoff_k", "must be positive")
    if sh.kind == "gaussian":
        return (window or "cube"), cutoff_k * sh.sigma
    if sh.kind == "indicator":
        kind = window or "ball"
        a = cutoff_k * sh.r
        if a < sh.r:
            raise ConfigError("cutoff_k", "window must contain the indicator support")
        return kind, a
    raise ConfigError("shape", "Schlather sampler needs a Gaussian or indicator shape")


def schlather_params(model: SpectralModel, cutoff_k: float, window=None,
                     budget=DEFAULT_BUDGET) -> dict:
    kind, a = schlather_window(model, cutoff_k, window)
    vol = dilated_volume(model.domain, a, kind)
    p = _base_params(model)
    p.update(scale=vol * model.C, bound=vol * model.C, budget=int(budget),
             window=1 if kind == "cube" else 2, window_a=a,
             sampler=1 if (kind == "cube" or model.dim == 1) else 2,
             sampler_a=(model.domain.R + a) if kind == "cube" or model.dim == 1 else a)
    p["volume"] = vol
    return p


def simulate_schlather(model: SpectralModel, cutoff_k: float, stream: RngStream,
                       window: str | None = None, budget=DEFAULT_BUDGET,
                       backend=None) -> Realization:
    """Schlather's cut-off algorithm with window ``J`` (see :func:`schlather_window`)."""
    p = schlather_params(model, cutoff_k, window, budget)
    r = _run(model, stream, p, "schlather", "strong", backend)
    r.extra["volume"] = p["volume"]
    r.extra["cutoff_k"] = cutoff_k
    return r


def simulate_transformed(model: SpectralModel, weight: ShiftDensitySpec,
                         stream: RngStream, budget=DEFAULT_BUDGET,
                         backend=None) -> Realization:
    """Sampler for the representation reweighted by the shift density ``weight``.

    Uses the strong rule ``B_w t_{m+1} <= inf Z^(m)``, valid for any density.
    """
    if isinstance(weight, GStar):
        r = simulate_normalized(model, stream, StoppingVariant.STRONG, budget, backend)
        r.method = "transformed"
        return r
    bound = esssup_bound(model, weight)
    if isinstance(weight, UniformWindow):
        a = weight.halfwidth
        p = _base_params(model)
        p.update(scale=model.C * (2 * a) ** model.dim, bound=bound, sampler=1,
                 sampler_a=a, budget=int(budget))
        return _run(model, stream, p, "transformed", "strong", backend)
    return _simulate_transformed_generic(model, weight, stream, bound, budget)


def _simulate_transformed_generic(model, weight, stream, bound, budget):
    grid = model.domain.points
    sh = model.shape
    fld = np.zeros(grid.shape[0])
    exps = []
    S, m, zmin = 0.0, 0, 0.0
    while True:
        e = stream.exponential()
        exps.append(e)
        S += e
        t = 1.0 / S
        if m > 0:
            if bound * t <= zmin:
                break
            if m >= budget:
                raise BudgetExhausted(f"transformed: no stop after {m} spectral functions")
        x = weight.sample(model, stream)
        m += 1
        w = weight.density(model, x)
        d2 = ((grid - x) ** 2).sum(axis=1)
        np.maximum(fld, (t / w) * sh.f0_sq(d2), out=fld)
        zmin = fld.min()
    return Realization(field=fld, n_spectral=m, exponentials=np.array(exps),
                       method="transformed", variant="strong", bound=bound,
                       shape=model.domain.shape, stream_index=stream.stream_index,
                       master_seed=stream.master_seed)


def default_threads() -> int:
    env = os.environ.get("MAXFIELD_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError("MAXFIELD_THREADS", "must be an integer")
    return 1


def run_replications(sim, n: int, master_seed: int, threads: int | None = None,
                     start: int = 0) -> list:
    """Run ``sim(stream)`` for stream indices ``start .. start+n-1``.

    Results come back in index order whatever the thread count; each
    replication owns its stream, so output does not depend on scheduling.
    """
    threads = default_threads() if threads is None else max(1, int(threads))
    indices = range(start, start + n)
    if threads == 1 or n < 2:
        return [sim(derive_stream(master_seed, i)) for i in indices]
    chunk = max(1, math.ceil(n / (threads * 4)))
    blocks = [indices[i:i + chunk] for i in range(0, n, chunk)]

    def work(block):
        return [sim(derive_stream(master_seed, i)) for i in block]

    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(work, blocks))
    return [r for part in parts for r in part]
