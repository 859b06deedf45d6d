"""Statistical and exactness checks of the samplers.

Each check returns a :class:`CheckResult`; :func:`run_suite` runs the
default battery used by ``maxfield validate``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats

from .estimators import (empirical_joint_cdf, estimate_counts, exponent_oracle,
                         ks_margin_test, recount_from_field, sup_cdf)
from .geometry import RectDomain
from .rng import derive_seed
from .shapes import GaussianShape, IndicatorShape, SpectralModel
from .simulators import (StoppingVariant, run_replications, simulate_normalized,
                         simulate_schlather, simulate_transformed)
from .weights import UniformWindow

SCHEMA = "maxfield.validate/1"
KS_ALPHA = 1e-3
N_SIGMA = 3.0


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}  {self.details}"


def smith_model(dim=1, R=1.0, h=0.1, sigma=1.0):
    return SpectralModel(GaussianShape(sigma, dim), RectDomain(dim, R, h))


def _sims(model, n, seed, threads, variant=StoppingVariant.EXACT):
    return run_replications(lambda s: simulate_normalized(model, s, variant), n, seed, threads)


def check_margins(reals, model, points, scale=1.0):
    out = {}
    ok = True
    for y in points:
        idx = model.domain.index_of(y)
        stat, p = ks_margin_test(reals, idx, scale)
        out[str(y)] = {"ks": stat, "p": p}
        ok &= p > KS_ALPHA
    return CheckResult("frechet_margins", bool(ok), out)


def check_sup_distribution(reals, model, z=1.0):
    """``P(sup_K Z <= z) = exp(-c / z)``; compared on the grid supremum."""
    p_hat, se = sup_cdf(reals, z)
    p_th = math.exp(-model.c / z)
    se_th = math.sqrt(p_th * (1 - p_th) / len(reals))
    est_c = -z * math.log(p_hat) if p_hat > 0 else math.inf
    ok = abs(p_hat - p_th) <= N_SIGMA * se_th
    return CheckResult("sup_distribution", bool(ok),
                       {"p_hat": p_hat, "p_theory": p_th, "binomial_se": se_th,
                        "c_hat": est_c, "c": model.c})


def check_oracle(reals, model, points, thresholds, name="joint_exceedance"):
    idx = [model.domain.index_of(y) for y in points]
    grid_pts = [model.domain.points[i].tolist() for i in idx]
    V = exponent_oracle(model, grid_pts, thresholds)
    p_th = math.exp(-V)
    p_hat, _ = empirical_joint_cdf(reals, idx, thresholds)
    se = math.sqrt(p_th * (1 - p_th) / len(reals))
    ok = abs(p_hat - p_th) <= N_SIGMA * se
    return CheckResult(name, bool(ok), {"points": grid_pts, "z": list(thresholds),
                                        "exponent": V, "p_theory": p_th, "p_hat": p_hat,
                                        "binomial_se": se})


def check_identity(reals):
    bad = [i for i, r in enumerate(reals) if recount_from_field(r) != r.n_spectral]
    return CheckResult("per_replication_identity", not bad,
                       {"n": len(reals), "mismatches": len(bad), "first": bad[:5]})


def check_weak_is_one(model, n, seed, threads=1):
    reals = _sims(model, n, seed, threads, StoppingVariant.WEAK)
    counts = np.array([r.n_spectral for r in reals])
    return CheckResult("weak_variant_count_one", bool(np.all(counts == 1)),
                       {"n": n, "max_count": int(counts.max())})


def check_singleton(n, seed, threads=1, shape=None):
    shape = shape or GaussianShape(1.0, 1)
    model = SpectralModel(shape, RectDomain(shape.dim, 0.0, 0.1))
    reals = _sims(model, n, seed, threads)
    counts = np.array([r.n_spectral for r in reals])
    z_ok = all(r.field[0] == r.first_arrival for r in reals)
    return CheckResult("singleton_count_one", bool(np.all(counts == 1) and z_ok),
                       {"n": n, "max_count": int(counts.max()), "field_equals_t1": z_ok})


def check_indicator_coincidence(n, seed, dim=1, R=1.0, h=None, r=1.0):
    """Normalized vs Schlather with ``J = b(0, r)`` on identical streams."""
    h = h or (0.1 if dim == 1 else 0.25)
    model = SpectralModel(IndicatorShape(r, dim, "raw"), RectDomain(dim, R, h))
    norm = run_replications(lambda s: simulate_normalized(model, s), n, seed)
    schl = run_replications(lambda s: simulate_schlather(model, 1, s, window="ball"), n, seed)
    fields = sum(not np.array_equal(a.field, b.field) for a, b in zip(norm, schl))
    counts = sum(a.n_spectral != b.n_spectral for a, b in zip(norm, schl))
    return CheckResult(f"indicator_coincidence_d{dim}", fields == 0 and counts == 0,
                       {"n": n, "field_mismatches": fields, "count_mismatches": counts})


def check_transformed_invariance(n, seed, threads=1, halfwidth=3.0):
    """Raw indicator model: envelope density vs a wider uniform shift density."""
    model = SpectralModel(IndicatorShape(1.0, 1, "raw"), RectDomain(1, 1.0, 0.1))
    weight = UniformWindow(halfwidth)
    a = _sims(model, n, derive_seed(seed, 1), threads)
    b = run_replications(lambda s: simulate_transformed(model, weight, s), n,
                         derive_seed(seed, 2), threads)
    i0 = model.domain.index_of(0.0)
    p = float(stats.ks_2samp([r.field[i0] for r in a], [r.field[i0] for r in b]).pvalue)
    ma, sa = estimate_counts(a)
    mb, sb = estimate_counts(b)
    ordered = mb - ma > N_SIGMA * math.hypot(sa, sb)
    return CheckResult("transformed_invariance", bool(p > KS_ALPHA and ordered),
                       {"ks_p": p, "mean_count_gstar": ma, "mean_count_uniform": mb,
                        "se_gstar": sa, "se_uniform": sb})


def run_suite(seed: int, n: int = 5000, threads: int = 1, n_counts: int = 10_000,
              n_coincide: int = 1000):
    model = smith_model()
    reals = _sims(model, n, derive_seed(seed, 100), threads)
    results = [
        check_margins(reals, model, [-1.0, 0.0, 0.5]),
        check_sup_distribution(reals, model),
        check_oracle(reals, model, [0.0, 0.5], [1.0, 1.0], "joint_exceedance_2pt"),
        check_oracle(reals, model, [-1.0, 0.0, 1.0], [2.0, 1.0, 1.5], "joint_exceedance_3pt"),
        check_identity(_sims(model, n_counts, derive_seed(seed, 101), threads)),
        check_weak_is_one(model, n_counts, derive_seed(seed, 102), threads),
        check_singleton(n_counts, derive_seed(seed, 103), threads),
        check_indicator_coincidence(n_coincide, derive_seed(seed, 104), dim=1),
        check_indicator_coincidence(n_coincide, derive_seed(seed, 105), dim=2),
        check_transformed_invariance(n_counts, derive_seed(seed, 106), threads),
    ]
    return results


def suite_report(results, config):
    return {"schema": SCHEMA, "config": config, "passed": all(r.passed for r in results),
            "checks": [asdict(r) for r in results]}
