"""Shift densities for the density-transformed representation.

Reweighting the shift measure by a probability density ``w`` gives the
spectral functions ``f0(|y - x|) / w(x)`` with ``x ~ w``. The stopping rule
needs ``B_w = ess sup_x f0(d(x, K)) / w(x)``, which is at least ``c`` and
equals ``c`` exactly for the envelope density (``GStar``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, RegularityViolation
from .rng import RngStream
from .shapes import SpectralModel, sample_shift_gstar


class ShiftDensitySpec:
    name = "abstract"

    def density(self, model: SpectralModel, x) -> float:
        raise NotImplementedError

    def sample(self, model: SpectralModel, stream: RngStream) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        return {"name": self.name}


@dataclass(frozen=True)
class GStar(ShiftDensitySpec):
    """The envelope density ``f0(d(x, K)) / c``."""

    name = "gstar"

    def density(self, model, x):
        return model.envelope(x) / model.c

    def sample(self, model, stream):
        return sample_shift_gstar(model, stream)


@dataclass(frozen=True)
class UniformWindow(ShiftDensitySpec):
    """Uniform density on ``[-halfwidth, halfwidth]^dim``."""

    halfwidth: float
    name = "uniform"

    def __post_init__(self):
        if not self.halfwidth > 0:
            raise ConfigError("weight", "uniform halfwidth must be positive")

    def density(self, model, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if np.all(np.abs(x) <= self.halfwidth):
            return (2 * self.halfwidth) ** (-model.dim)
        return 0.0

    def sample(self, model, stream):
        a = self.halfwidth
        return np.array([-a + 2 * a * stream.uniform() for _ in range(model.dim)])

    def to_dict(self):
        return {"name": self.name, "halfwidth": self.halfwidth}


class Custom(ShiftDensitySpec):
    """Piecewise-constant density on a rectilinear grid of cells.

    ``edges`` holds one increasing array of cell edges per axis and
    ``values`` the density on each cell (shape ``(n1,)`` or ``(n1, n2)``).
    """

    name = "custom"

    def __init__(self, edges, values):
        self.edges = [np.asarray(e, dtype=float) for e in edges]
        self.values = np.asarray(values, dtype=float)
        if self.values.ndim != len(self.edges):
            raise ConfigError("weight", "values must have one axis per edge array")
        for e, n in zip(self.edges, self.values.shape):
            if len(e) != n + 1 or np.any(np.diff(e) <= 0):
                raise ConfigError("weight", "edges must be increasing with n+1 entries")
        if np.any(self.values < 0):
            raise ConfigError("weight", "density must be nonnegative")
        mass = self.cell_volumes * self.values
        if abs(mass.sum() - 1.0) > 1e-9:
            raise ConfigError("weight", f"density integrates to {mass.sum():.12g}, not 1")
        self._cdf = np.cumsum(mass.ravel())
        self._cdf /= self._cdf[-1]

    @property
    def cell_volumes(self):
        widths = [np.diff(e) for e in self.edges]
        if len(widths) == 1:
            return widths[0]
        return np.multiply.outer(widths[0], widths[1])

    def density(self, model, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        idx = []
        for e, xj in zip(self.edges, x):
            if xj < e[0] or xj > e[-1]:
                return 0.0
            idx.append(min(int(np.searchsorted(e, xj, side="right")) - 1, len(e) - 2))
        return float(self.values[tuple(idx)])

    def sample(self, model, stream):
        u = stream.uniform()
        flat = min(int(np.searchsorted(self._cdf, u, side="right")), self._cdf.size - 1)
        idx = np.unravel_index(flat, self.values.shape)
        return np.array([e[i] + (e[i + 1] - e[i]) * stream.uniform()
                         for e, i in zip(self.edges, idx)])

    def to_dict(self):
        return {"name": self.name, "edges": [e.tolist() for e in self.edges],
                "values": self.values.tolist()}


def _box_gap2(R, lo, hi):
    """Squared distance between the box ``prod [lo_j, hi_j]`` and ``[-R, R]^d``."""
    s = 0.0
    for a, b in zip(lo, hi):
        g = max(0.0, a - R, -R - b)
        s += g * g
    return s


def _envelope_positive_beyond(model, lo, hi) -> bool:
    """Whether the envelope is positive on a positive-measure set outside the box."""
    rho = model.shape.support_radius
    if not math.isfinite(rho):
        return True
    reach = model.domain.R + rho
    return any(a > -reach or b < reach for a, b in zip(lo, hi))


def esssup_bound(model: SpectralModel, weight: ShiftDensitySpec) -> float:
    """``B_w = ess sup_x f0(d(x, K)) / w(x)`` in closed form."""
    sh, R, d = model.shape, model.domain.R, model.dim
    if isinstance(weight, GStar):
        return model.c
    if isinstance(weight, UniformWindow):
        a = weight.halfwidth
        if _envelope_positive_beyond(model, [-a] * d, [a] * d):
            raise RegularityViolation("uniform window does not cover the envelope support")
        return sh.peak * (2 * a) ** d
    if isinstance(weight, Custom):
        lo = [e[0] for e in weight.edges]
        hi = [e[-1] for e in weight.edges]
        if _envelope_positive_beyond(model, lo, hi):
            raise RegularityViolation("custom density does not cover the envelope support")
        best = 0.0
        rho2 = sh.support_radius ** 2
        for idx in np.ndindex(weight.values.shape):
            clo = [weight.edges[j][i] for j, i in enumerate(idx)]
            chi = [weight.edges[j][i + 1] for j, i in enumerate(idx)]
            gap2 = _box_gap2(R, clo, chi)
            # the envelope's sup over the cell is at the point nearest K
            if gap2 >= rho2:
                continue
            env = float(sh.f0_sq(gap2))
            w = weight.values[idx]
            if w <= 0:
                if env > 0:
                    raise RegularityViolation(f"density vanishes on cell {idx} where envelope > 0")
                continue
            best = max(best, env / w)
        return best
    raise ConfigError("weight", f"unsupported weight {weight!r}")
