"""Monotone radial shape functions and the normalized moving-maxima model.

A moving-maxima process on ``K = [-R, R]^dim`` with radial shape ``f0``
has spectral functions ``y -> f0(|y - x|)`` with shifts ``x`` under
Lebesgue measure. Its envelope over ``K`` is ``f0(d(x, K))`` and the
normalizing constant is ``c = integral of f0(d(x, K)) dx``.

Outside the rectangle the plane splits into regions on which ``d(x, K)``
has a simple form::

    d=1:  center |x| <= R, two tails
    d=2:  center square, four edge bands (distance to an edge),
          four corner quadrants (distance to a corner)

The envelope density ``f0(d(x, K)) / c`` is sampled by picking a region
with probability proportional to its mass and then sampling inside it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import integrate

from .errors import ConfigError, NonFiniteConstant
from .geometry import RectDomain, dilated_volume, dist2_to_K
from .rng import RngStream, halfnormal_from_uniform

N_QUANTILE_KNOTS = 4096


def unit_ball_volume(dim: int) -> float:
    return math.pi ** (dim / 2) / math.gamma(dim / 2 + 1)


class RadialShape:
    """Nonincreasing ``f0: [0, inf) -> [0, inf)`` used as ``f0(|x|)`` on R^dim."""

    kind = "generic"
    dim: int

    @property
    def peak(self) -> float:
        return float(self.f0(0.0))

    def f0(self, r):
        raise NotImplementedError

    def f0_sq(self, d2):
        """``f0`` evaluated from a squared distance."""
        return self.f0(np.sqrt(d2))

    @property
    def support_radius(self) -> float:
        return math.inf

    def tail_mass(self) -> float:
        """``integral_0^inf f0(u) du``: mass of one edge band per unit edge length."""
        return _radial_integral(self.f0, 0, self.support_radius)

    def corner_moment(self) -> float:
        """``integral_0^inf rho f0(rho) drho``."""
        return _radial_integral(self.f0, 1, self.support_radius)

    @property
    def integral(self) -> float:
        if self.dim == 1:
            return 2.0 * self.tail_mass()
        return 2.0 * math.pi * self.corner_moment()


@dataclass(frozen=True)
class GaussianShape(RadialShape):
    """Density of ``N(0, sigma^2 Id)`` on R^dim (the Smith model)."""

    sigma: float
    dim: int = 1
    kind = "gaussian"

    def __post_init__(self):
        if not self.sigma > 0:
            raise ConfigError("sigma", "must be positive")
        if self.dim not in (1, 2):
            raise ConfigError("dim", "must be 1 or 2")

    @property
    def peak(self) -> float:
        return (2.0 * math.pi * self.sigma ** 2) ** (-self.dim / 2)

    @property
    def inv2s2(self) -> float:
        return 0.5 / (self.sigma * self.sigma)

    def f0(self, r):
        r = np.asarray(r, dtype=float)
        return self.peak * np.exp(-r * r * self.inv2s2)

    def f0_sq(self, d2):
        return self.peak * np.exp(-np.asarray(d2, dtype=float) * self.inv2s2)

    def tail_mass(self):
        return self.peak * self.sigma * math.sqrt(math.pi / 2)

    def corner_moment(self):
        return self.peak * self.sigma ** 2

    @property
    def integral(self):
        return 1.0


@dataclass(frozen=True)
class IndicatorShape(RadialShape):
    """``height * 1{rho <= r}``; ``scaling='unit'`` makes the integral one."""

    r: float
    dim: int = 1
    scaling: str = "unit"
    kind = "indicator"

    def __post_init__(self):
        if not self.r > 0:
            raise ConfigError("r", "must be positive")
        if self.dim not in (1, 2):
            raise ConfigError("dim", "must be 1 or 2")
        if self.scaling not in ("unit", "raw"):
            raise ConfigError("scaling", "must be 'unit' or 'raw'")

    @property
    def height(self) -> float:
        if self.scaling == "raw":
            return 1.0
        return 1.0 / (unit_ball_volume(self.dim) * self.r ** self.dim)

    @property
    def peak(self):
        return self.height

    @property
    def support_radius(self):
        return self.r

    def f0(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= self.r, self.height, 0.0)

    def f0_sq(self, d2):
        return np.where(np.asarray(d2) <= self.r * self.r, self.height, 0.0)

    def tail_mass(self):
        return self.height * self.r

    def corner_moment(self):
        return self.height * self.r * self.r / 2

    @property
    def integral(self):
        return self.height * unit_ball_volume(self.dim) * self.r ** self.dim


@dataclass(frozen=True, eq=False)
class ProfileShape(RadialShape):
    """Arbitrary nonincreasing profile given as a vectorized callable.

    Only the pure-Python simulation path supports it; the tails are
    sampled by inverse CDF tabulated on 4096 quantile knots.
    """

    func: object
    dim: int = 1
    name: str = "profile"
    support: float = math.inf

    def f0(self, r):
        return np.asarray(self.func(np.asarray(r, dtype=float)), dtype=float)

    @property
    def support_radius(self):
        return self.support


def _radial_integral(f, power, upper):
    """``integral_0^upper u^power f(u) du`` with a divergence check."""
    g = (lambda u: float(f(u))) if power == 0 else (lambda u: u ** power * float(f(u)))
    if math.isfinite(upper):
        val, _ = integrate.quad(g, 0.0, upper, epsabs=0.0, epsrel=1e-12, limit=200)
        return val
    # integrate over doubling shells until the increments die out
    total, lo, hi = 0.0, 0.0, 1.0
    for _ in range(80):
        piece, _ = integrate.quad(g, lo, hi, epsabs=0.0, epsrel=1e-12, limit=200)
        total += piece
        if not math.isfinite(total):
            break
        if piece <= 1e-14 * total and hi > 64:
            return total
        lo, hi = hi, 2 * hi
    raise NonFiniteConstant("integral of the shape envelope does not converge")


def eval_shape(shape: RadialShape, r: float) -> float:
    if r < 0:
        raise ValueError("radius must be nonnegative")
    return float(shape.f0(r))


# region codes used by samplers and kernels
CENTER = 0


@dataclass(frozen=True, eq=False)
class SpectralModel:
    """Moving maxima with radial shape ``shape`` restricted to ``domain``."""

    shape: RadialShape
    domain: RectDomain

    def __post_init__(self):
        if self.shape.dim != self.domain.dim:
            raise ConfigError("dim", "shape and domain dimensions differ")

    @property
    def dim(self):
        return self.domain.dim

    @property
    def C(self) -> float:
        """Peak bound ``sup f0``."""
        return self.shape.peak

    @cached_property
    def region_masses(self) -> np.ndarray:
        """Unnormalized masses of center, edge bands and corners (see module doc)."""
        R, sh = self.domain.R, self.shape
        if self.dim == 1:
            t = sh.tail_mass()
            return np.array([2 * R * sh.peak, t, t])
        e = 2 * R * sh.tail_mass()
        k = math.pi / 2 * sh.corner_moment()
        return np.array([4 * R * R * sh.peak, e, e, e, e, k, k, k, k])

    @cached_property
    def c(self) -> float:
        return normalizing_constant(self)

    @cached_property
    def region_probs(self) -> np.ndarray:
        return self.region_masses / self.region_masses.sum()

    @cached_property
    def region_cdf(self) -> np.ndarray:
        cdf = np.cumsum(self.region_probs)
        cdf[-1] = 1.0
        return cdf

    @property
    def dilation_sampler(self) -> bool:
        """Indicator envelopes are uniform on ``K + b(0, r)``; sampled directly."""
        return self.shape.kind == "indicator"

    def envelope(self, x) -> float:
        return sup_shifted(self, x)

    @cached_property
    def _tail_quantiles(self):
        return _tabulate_quantiles(self.shape.f0, 0, self.shape.support_radius)

    @cached_property
    def _corner_quantiles(self):
        return _tabulate_quantiles(self.shape.f0, 1, self.shape.support_radius)

    def tail_draw(self, u: float) -> float:
        """Distance beyond an edge, density proportional to ``f0``."""
        sh = self.shape
        if sh.kind == "gaussian":
            return halfnormal_from_uniform(u, sh.sigma)
        if sh.kind == "indicator":
            return sh.r * u
        return _interp_quantile(self._tail_quantiles, u)

    def corner_radius_draw(self, u: float) -> float:
        sh = self.shape
        if sh.kind == "indicator":
            return sh.r * math.sqrt(u)
        return _interp_quantile(self._corner_quantiles, u)


def _tabulate_quantiles(f, power, upper, n=N_QUANTILE_KNOTS):
    if not math.isfinite(upper):
        total = _radial_integral(f, power, upper)
        upper = 1.0
        while _radial_integral(f, power, upper) < total * (1 - 1e-13) and upper < 1e12:
            upper *= 2
    u = np.linspace(0.0, upper, 1 << 16)
    dens = u ** power * f(u)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(u))])
    cum /= cum[-1]
    probs = np.linspace(0.0, 1.0, n)
    return np.interp(probs, cum, u)


def _interp_quantile(knots, u):
    pos = u * (len(knots) - 1)
    i = min(int(pos), len(knots) - 2)
    w = pos - i
    return float(knots[i] * (1 - w) + knots[i + 1] * w)


def sup_shifted(model: SpectralModel, x) -> float:
    """Envelope ``sup_{y in K} f0(|y - x|) = f0(d(x, K))``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return float(model.shape.f0_sq(dist2_to_K(model.domain.R, x)))


def normalizing_constant(model: SpectralModel) -> float:
    """``c`` in closed form where known, else by region-wise quadrature."""
    sh, R, d = model.shape, model.domain.R, model.dim
    if sh.kind == "gaussian":
        a = R / sh.sigma
        if d == 1:
            return math.sqrt(2 / math.pi) * a + 1.0
        return 2 / math.pi * a * a + 2 * math.sqrt(2 / math.pi) * a + 1.0
    if sh.kind == "indicator":
        return sh.height * dilated_volume(model.domain, sh.r, "ball")
    c = float(model.region_masses.sum())
    if not math.isfinite(c):
        raise NonFiniteConstant("normalizing constant is infinite")
    return c


def normalizing_constant_quadrature(model: SpectralModel, rtol=1e-10) -> float:
    """Direct adaptive quadrature of ``integral f0(d(x, K)) dx`` (independent route)."""
    sh, R = model.shape, model.domain.R
    rho = sh.support_radius
    if model.dim == 1:
        # symmetric: 2 * integral over [0, inf) of f0(max(x - R, 0))
        val = 2 * R * sh.peak if R > 0 else 0.0
        if math.isfinite(rho):
            tail, _ = integrate.quad(lambda x: float(sh.f0(x - R)), R, R + rho,
                                     epsabs=0.0, epsrel=rtol)
        else:
            tail, _ = integrate.quad(lambda x: float(sh.f0(x - R)), R, math.inf,
                                     epsabs=0.0, epsrel=rtol)
        return val + 2 * tail

    def env(x2, x1):
        g1 = max(x1 - R, 0.0)
        g2 = max(x2 - R, 0.0)
        return float(sh.f0_sq(g1 * g1 + g2 * g2))

    upper = R + rho if math.isfinite(rho) else R + 40.0 * getattr(sh, "sigma", 1.0)

    def inner(x1):
        pts = [R] if R > 0 else None
        if math.isfinite(rho):
            g1 = max(x1 - R, 0.0)
            if g1 > rho:
                return 0.0
            top = R + math.sqrt(rho * rho - g1 * g1)
            v, _ = integrate.quad(env, 0.0, top, args=(x1,), epsabs=0.0, epsrel=rtol,
                                  points=pts if pts and R < top else None, limit=200)
            return v
        v, _ = integrate.quad(env, 0.0, upper, args=(x1,), epsabs=0.0, epsrel=rtol,
                              points=pts, limit=200)
        return v

    outer, _ = integrate.quad(inner, 0.0, upper, epsabs=0.0, epsrel=rtol,
                              points=[R] if R > 0 else None, limit=200)
    return 4 * outer


def sample_uniform_dilation(R: float, a: float, dim: int, kind: str,
                            stream: RngStream) -> np.ndarray:
    """Uniform point on ``K + [-a, a]^dim`` (cube) or ``K + b(0, a)`` (ball)."""
    w = R + a
    if dim == 1 or kind == "cube":
        return np.array([-w + 2 * w * stream.uniform() for _ in range(dim)])
    a2 = a * a
    while True:
        x1 = -w + 2 * w * stream.uniform()
        x2 = -w + 2 * w * stream.uniform()
        g1 = abs(x1) - R
        g2 = abs(x2) - R
        s = 0.0
        if g1 > 0.0:
            s += g1 * g1
        if g2 > 0.0:
            s += g2 * g2
        if s <= a2:
            return np.array([x1, x2])


def _pick_region(cdf, u):
    k = 0
    n = len(cdf) - 1
    while k < n and u >= cdf[k]:
        k += 1
    return k


def sample_shift_gstar(model: SpectralModel, stream: RngStream) -> np.ndarray:
    """Shift with density ``f0(d(x, K)) / c``.

    Draw order is fixed: region uniform, then one uniform per coordinate
    (indicators: uniforms of the dilation sampler only).
    """
    R, d = model.domain.R, model.dim
    if model.dilation_sampler:
        return sample_uniform_dilation(R, model.shape.r, d, "ball", stream)
    k = _pick_region(model.region_cdf, stream.uniform())
    u1 = stream.uniform()
    if d == 1:
        if k == CENTER:
            return np.array([-R + 2 * R * u1])
        sign = 1.0 if k == 1 else -1.0
        return np.array([sign * (R + model.tail_draw(u1))])
    u2 = stream.uniform()
    if k == CENTER:
        return np.array([-R + 2 * R * u1, -R + 2 * R * u2])
    if k <= 2:
        s = 1.0 if k == 1 else -1.0
        return np.array([s * (R + model.tail_draw(u1)), -R + 2 * R * u2])
    if k <= 4:
        s = 1.0 if k == 3 else -1.0
        return np.array([-R + 2 * R * u1, s * (R + model.tail_draw(u2))])
    s1 = 1.0 if k in (5, 6) else -1.0
    s2 = 1.0 if k in (5, 7) else -1.0
    if model.shape.kind == "gaussian":
        g1, g2 = model.tail_draw(u1), model.tail_draw(u2)
    else:
        rho = model.corner_radius_draw(u1)
        theta = 0.5 * math.pi * u2
        g1, g2 = rho * math.cos(theta), rho * math.sin(theta)
    return np.array([s1 * (R + g1), s2 * (R + g2)])
