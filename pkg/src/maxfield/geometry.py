"""Rectangular index sets ``K = [-R, R]^dim`` and their evaluation grids."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class RectDomain:
    """The rectangle ``[-R, R]^dim`` together with the lattice of step ``h``.

    ``R = 0`` is allowed and gives the singleton ``{0}``.
    """

    dim: int
    R: float
    h: float

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ConfigError("dim", "must be 1 or 2")
        if not (self.R >= 0 and math.isfinite(self.R)):
            raise ConfigError("R", "must be a finite nonnegative number")
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ConfigError("grid_step", "must be positive")
        ratio = 2 * self.R / self.h
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ConfigError("grid_step", "grid_step must divide 2R")

    @property
    def n_per_axis(self) -> int:
        return int(round(2 * self.R / self.h)) + 1

    @property
    def shape(self) -> tuple:
        return (self.n_per_axis,) * self.dim

    @property
    def size(self) -> int:
        return self.n_per_axis ** self.dim

    @cached_property
    def axis(self) -> np.ndarray:
        if self.R == 0:
            return np.zeros(1)
        return np.linspace(-self.R, self.R, self.n_per_axis)

    @cached_property
    def points(self) -> np.ndarray:
        """Grid points as a C-contiguous ``(size, dim)`` array, row-major order."""
        if self.dim == 1:
            pts = self.axis[:, None]
        else:
            a, b = np.meshgrid(self.axis, self.axis, indexing="ij")
            pts = np.column_stack([a.ravel(), b.ravel()])
        pts = np.ascontiguousarray(pts, dtype=np.float64)
        pts.setflags(write=False)
        return pts

    def index_of(self, point) -> int:
        """Flat index of the grid point closest to ``point``."""
        p = np.atleast_1d(np.asarray(point, dtype=float))
        d2 = ((self.points - p) ** 2).sum(axis=1)
        return int(np.argmin(d2))

    @property
    def volume(self) -> float:
        return (2 * self.R) ** self.dim


def dist_to_K(domain: RectDomain, x) -> float:
    """Euclidean distance from ``x`` to the continuum rectangle."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    gap = np.maximum(np.abs(x) - domain.R, 0.0)
    return float(math.sqrt(float(gap @ gap)))


def dist2_to_K(R: float, x) -> float:
    s = 0.0
    for xj in x:
        g = abs(xj) - R
        if g > 0.0:
            s += g * g
    return s


def dilated_volume(domain: RectDomain, a: float, kind: str = "cube") -> float:
    """Volume of ``K + b(0, a)`` (``kind='ball'``) or ``K + [-a, a]^dim``."""
    if a < 0:
        raise ConfigError("dilation", "must be nonnegative")
    R, d = domain.R, domain.dim
    if kind == "cube":
        return (2.0 * (R + a)) ** d
    if kind == "ball":
        if d == 1:
            return 2.0 * (R + a)
        # Steiner formula for the square: area + perimeter * a + pi a^2
        return 4.0 * R * R + 8.0 * R * a + math.pi * a * a
    raise ConfigError("window", f"unknown dilation kind {kind!r}")
