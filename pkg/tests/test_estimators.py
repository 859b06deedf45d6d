import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from maxfield import (EmptyInput, GaussianShape, IndicatorShape, RectDomain, SpectralModel,
                      derive_stream, run_replications, simulate_normalized)
from maxfield.estimators import (A_factor, P_factor, estimate_counts, exponent_oracle,
                                 factorization_gap, formula_estimate_Q, ks_margin_test,
                                 ratio_of_means, recount_from_field, recount_nonstrict, sup_cdf)
from maxfield.simulators import Realization


def _fake(counts, infs):
    return [Realization(field=np.array([z, z + 1.0]), n_spectral=m,
                        exponentials=np.ones(m + 1), method="normalized", variant="exact",
                        bound=1.0, shape=(2,)) for m, z in zip(counts, infs)]


def test_mean_and_se():
    m, se = estimate_counts(_fake([1, 2, 3, 4], [1, 1, 1, 1]))
    assert m == 2.5 and se == pytest.approx(math.sqrt(5 / 3 / 4))
    with pytest.raises(EmptyInput):
        estimate_counts(_fake([1], [1]))
    with pytest.raises(EmptyInput):
        estimate_counts([])


def test_formula_and_ratio():
    reals = _fake([1, 1, 1], [0.5, 1.0, 2.0])
    q, _ = formula_estimate_Q(reals, 2.0)
    assert q == pytest.approx((4 + 2 + 1) / 3)
    r, se = ratio_of_means([2, 4], [1, 3])
    assert r == pytest.approx(1.5) and se > 0
    assert P_factor(reals, _fake([1, 1], [1.0, 1.0])) == pytest.approx((2 + 1 + 0.5) / 3)


@pytest.mark.parametrize("dim,R,k,printed", [
    (1, 1, 2, 0.75), (1, 1, 3, 0.56), (1, 100, 2, 0.99),
    (2, 1, 3, 0.32), (2, 10, 2, 0.88),
])
def test_A_factor_printed_values(dim, R, k, printed):
    assert abs(A_factor(R, 1.0, k, dim) - printed) <= 0.005


@given(st.floats(0.01, 1e3), st.floats(0.05, 10), st.floats(0.05, 10), st.integers(1, 2))
def test_A_below_one_iff_k_large(R, sigma, k, dim):
    A = A_factor(R, sigma, k, dim)
    threshold = math.sqrt(math.pi / 2)
    if abs(k - threshold) > 1e-9:
        assert (A < 1) == (k > threshold)


def test_oracle_closed_forms():
    m = SpectralModel(GaussianShape(1.0, 1), RectDomain(1, 1.0, 0.5))
    assert exponent_oracle(m, [0.0], [2.0]) == pytest.approx(0.5, rel=1e-8)
    # two raw indicators of radius 1 at distance 0.5: union has length 2.5
    ind = SpectralModel(IndicatorShape(1.0, 1, "raw"), RectDomain(1, 1.0, 0.5))
    assert exponent_oracle(ind, [0.0, 0.5], [1.0, 1.0]) == pytest.approx(2.5, rel=1e-8)
    # two unit-scaled Gaussians far apart add up
    assert exponent_oracle(m, [-30.0, 30.0], [1.0, 1.0]) == pytest.approx(2.0, rel=1e-8)


def test_oracle_2d_indicator_lens():
    ind = SpectralModel(IndicatorShape(1.0, 2, "raw"), RectDomain(2, 1.0, 0.5))
    d = 1.0
    lens = 2 * math.acos(d / 2) - d / 2 * math.sqrt(4 - d * d)
    union = 2 * math.pi - lens
    assert exponent_oracle(ind, [[0, 0], [1, 0]], [1.0, 1.0]) == pytest.approx(union, rel=1e-7)


def test_recounts_and_ties(smith1):
    reals = run_replications(lambda s: simulate_normalized(smith1, s), 3000, 1)
    assert all(recount_from_field(r) == r.n_spectral for r in reals)
    # the tie-blind form can only undercount, and only on boundary ties
    diffs = [r.n_spectral - recount_nonstrict(r) for r in reals]
    assert min(diffs) >= 0


def test_factorization_gap_and_ks(smith1):
    reals = run_replications(lambda s: simulate_normalized(smith1, s), 500, 2)
    gap, se = factorization_gap(reals, reals, smith1.c, 1.0, smith1.c)
    assert gap == pytest.approx(0.0, abs=1e-12) and se > 0
    stat, p = ks_margin_test(reals, 10)
    assert 0 <= stat <= 1 and p > 1e-3
    with pytest.raises(EmptyInput):
        ks_margin_test(reals[:50], 10)
    p_hat, se = sup_cdf(reals, 1.0)
    assert abs(p_hat - math.exp(-smith1.c)) < 4 * se + 0.01
