import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from seggsa.resampling import (
    ResamplingError,
    bootstrap_ci,
    bootstrap_replicates,
    bootstrap_weight_sets,
    grouped_jackknife_ci,
    percentile_interval,
    rank_indices,
    recenter,
)


def test_percentile_interval():
    lo, hi = percentile_interval(np.arange(1001.0), 0.95)
    assert (lo, hi) == pytest.approx((25.0, 975.0))


def test_bootstrap_mean_interval_width():
    x = np.random.default_rng(0).standard_normal(2_000)
    lo, hi = bootstrap_ci(x, np.mean, 1_000, 0.95, seed=1)
    assert lo < x.mean() < hi
    se = x.std(ddof=1) / np.sqrt(x.size)
    assert hi - lo == pytest.approx(2 * 1.96 * se, rel=0.15)


def test_bootstrap_vector_statistic_and_pairs():
    rng = np.random.default_rng(2)
    x = rng.random(300)
    lo, hi = bootstrap_ci((x, 2 * x), lambda a, b: np.array([a.mean(), b.mean()]), 200, seed=3)
    np.testing.assert_allclose(hi, [hi[0], 2 * hi[0]])


def test_recentered_interval_brackets_biased_statistic():
    x = np.random.default_rng(4).random(500)
    # number of distinct values: every resample is biased low
    stat = lambda v: float(np.unique(v).size)
    lo, hi = bootstrap_ci(x, stat, 200, seed=5)
    assert hi < stat(x)
    lo, hi = bootstrap_ci(x, stat, 200, seed=5, recentered=True)
    assert lo <= stat(x) <= hi
    np.testing.assert_allclose(recenter([1.0, 3.0], 5.0), [4.0, 6.0])


def test_weight_sets_match_index_resamples():
    data = np.arange(50.0)
    sums = bootstrap_replicates(data, np.sum, 5, seed=6)
    weighted = [float(w @ data) for w in bootstrap_weight_sets(50, 5, seed=6)]
    np.testing.assert_allclose(sums, weighted)


def test_bootstrap_errors():
    with pytest.raises(ValueError):
        bootstrap_ci(np.arange(10.0), np.mean, 50)
    with pytest.raises(ValueError):
        bootstrap_replicates((np.arange(3.0), np.arange(4.0)), np.mean)

    def fails(v):
        raise FloatingPointError("boom")

    with pytest.raises(ResamplingError) as info:
        bootstrap_replicates(np.arange(10.0), fails, 3)
    assert info.value.index == 0


def test_grouped_jackknife_for_mean():
    rng = np.random.default_rng(7)
    x = rng.standard_normal(4_000)
    lo, hi = grouped_jackknife_ci(x, x, lambda a, b: float(a.mean()), groups=200)
    se = x.std(ddof=1) / np.sqrt(x.size)
    assert (lo + hi) / 2 == pytest.approx(x.mean())
    assert hi - lo == pytest.approx(2 * 1.959964 * se, rel=0.15)
    with pytest.raises(ValueError):
        grouped_jackknife_ci(x[:100], x[:100], groups=60)


def test_rank_ties_keep_declaration_order():
    assert rank_indices({"a": 0.1, "b": 0.5, "c": 0.1}) == {"b": 1, "a": 2, "c": 3}
    with pytest.raises(ValueError):
        rank_indices({})


@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=8),
       st.floats(0.01, 100), st.floats(-100, 100))
def test_rank_affine_invariance(values, scale, shift):
    d = {f"v{i}": v for i, v in enumerate(values)}
    moved = {k: scale * v + shift for k, v in d.items()}
    distinct = len({round(v, 6) for v in values}) == len(values)
    if distinct:
        assert rank_indices(moved) == rank_indices(d)
