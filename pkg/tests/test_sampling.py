import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from seggsa.models import fire_input_specs
from seggsa.sampling import (
    RandomVariableSpec,
    SampleSet,
    lhs_sample,
    random_sample,
    rng_stream,
    sobol_matrices,
    truncnorm_cdf,
    truncnorm_inverse_cdf,
    truncnorm_mean,
)

T_SPEC = RandomVariableSpec("T", 25.0, 4.0, 10.0, 40.0)

# quantiles from adaptive quadrature of the truncated density plus root finding
QUADRATURE_QUANTILES = [
    (T_SPEC, 0.25, 22.302597447645592),
    (RandomVariableSpec("RH", 20.0, 2.0, 14.0, 26.0), 0.9, 22.550844446935155),
    (RandomVariableSpec("U", 4.7, 0.5, 0.5, 9.5), 0.5, 4.7),
    (RandomVariableSpec("edge", 0.0, 0.1, 0.0, 1.0), 0.5, 0.06744897501960814),
]

# truncated means and standard deviations of the four fire inputs, by quadrature
QUADRATURE_MOMENTS = [(25.0, 3.9947066), (20.0, 1.9731568), (4.7, 0.5), (4.0, 0.7923947)]


@pytest.mark.parametrize("spec,p,expected", QUADRATURE_QUANTILES)
def test_inverse_cdf_matches_quadrature(spec, p, expected):
    assert truncnorm_inverse_cdf(p, spec) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("spec", [T_SPEC, RandomVariableSpec("right", 0.0, 0.1, 0.0, 1.0),
                                  RandomVariableSpec("left", 0.0, 0.1, -1.0, 0.0)])
def test_inverse_cdf_agrees_with_scipy(spec):
    p = np.linspace(0.001, 0.999, 201)
    ref = stats.truncnorm.ppf(p, spec.alpha, spec.beta, loc=spec.mean, scale=spec.std_dev)
    np.testing.assert_allclose(truncnorm_inverse_cdf(p, spec), ref, rtol=1e-7, atol=1e-7)


@given(st.floats(1e-6, 1 - 1e-6))
def test_cdf_inverts_quantile(p):
    x = truncnorm_inverse_cdf(p, T_SPEC)
    assert T_SPEC.lower <= x <= T_SPEC.upper
    assert truncnorm_cdf(x, T_SPEC) == pytest.approx(p, abs=1e-10)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, np.nan])
def test_inverse_cdf_rejects_closed_endpoints(p):
    with pytest.raises(ValueError):
        truncnorm_inverse_cdf(p, T_SPEC)


def test_truncated_mean_symmetric_and_shifted():
    assert truncnorm_mean(T_SPEC) == pytest.approx(25.0, abs=1e-12)
    u = RandomVariableSpec("U", 1.0, 0.5, 0.5, 9.5)
    ref = stats.truncnorm.mean(u.alpha, u.beta, loc=u.mean, scale=u.std_dev)
    assert truncnorm_mean(u) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize(
    "args",
    [("x", 0.0, 0.0, -1.0, 1.0), ("x", 0.0, 1.0, 1.0, 1.0), ("x", 5.0, 1.0, 0.0, 1.0), ("x", 0.0, -1.0, -1.0, 1.0)],
)
def test_spec_validation(args):
    with pytest.raises(ValueError):
        RandomVariableSpec(*args)


def test_uniform_spec_is_flat():
    spec = RandomVariableSpec.uniform("x", -np.pi, np.pi)
    p = np.linspace(0.01, 0.99, 99)
    np.testing.assert_allclose(truncnorm_inverse_cdf(p, spec), -np.pi + 2 * np.pi * p, atol=1e-5)


@given(n=st.integers(2, 400), seed=st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_lhs_one_point_per_stratum(n, seed):
    specs = fire_input_specs(4.7)
    s = lhs_sample(specs, n, seed)
    assert s.inputs.shape == (n, 4)
    for j, spec in enumerate(specs):
        u = truncnorm_cdf(s.inputs[:, j], spec)
        strata = np.floor(u * n).astype(int)
        assert sorted(strata) == list(range(n))


def test_lhs_means_within_three_standard_errors():
    n = 10_000
    s = lhs_sample(fire_input_specs(4.7), n, 11)
    for j, (mean, sd) in enumerate(QUADRATURE_MOMENTS):
        assert abs(s.inputs[:, j].mean() - mean) < 3 * sd / np.sqrt(n)


def test_quantile_monotone_and_inside_bounds():
    p = np.linspace(1e-12, 1 - 1e-12, 10_001)
    spec = RandomVariableSpec("FA", 4.0, 0.8, 1.5, 6.5)
    x = truncnorm_inverse_cdf(p, spec)
    assert np.all(np.diff(x) > 0)
    assert x[0] >= 1.5 and x[-1] <= 6.5
    assert truncnorm_inverse_cdf(0.5, spec) == pytest.approx(4.0, abs=1e-12)


def test_lhs_centered_hits_midpoints():
    n = 50
    s = lhs_sample(fire_input_specs(), n, 3, centered=True)
    u = np.sort(truncnorm_cdf(s.inputs[:, 0], fire_input_specs()[0]))
    np.testing.assert_allclose(u, (np.arange(n) + 0.5) / n, atol=1e-9)


def test_lhs_deterministic_and_stream_separated():
    specs = fire_input_specs()
    a = lhs_sample(specs, 100, 7).inputs
    b = lhs_sample(specs, 100, 7).inputs
    c = lhs_sample(specs, 100, 7, stream=(1,)).inputs
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_lhs_rejects_tiny_n():
    with pytest.raises(ValueError):
        lhs_sample(fire_input_specs(), 1, 0)


def test_rng_stream_keys_are_independent():
    x = rng_stream(0, 1).random(5)
    assert np.array_equal(x, rng_stream(0, 1).random(5))
    assert not np.array_equal(x, rng_stream(0, 2).random(5))
    assert not np.array_equal(x, rng_stream(1, 1).random(5))


def test_sobol_hybrids_mix_columns():
    a, b, hybrids = sobol_matrices(fire_input_specs(), 64, 1)
    assert len(hybrids) == 4
    for i, h in enumerate(hybrids):
        assert np.array_equal(h[:, i], a[:, i])
        others = [j for j in range(4) if j != i]
        assert np.array_equal(h[:, others], b[:, others])
    assert not np.array_equal(a, b)


def test_sample_set_shape_checks_and_evaluate():
    specs = fire_input_specs()
    with pytest.raises(ValueError):
        SampleSet(specs, np.zeros((3, 2)), 0)
    s = SampleSet(specs, np.tile([25.0, 20.0, 4.0, 4.0], (3, 1)), 0)

    class Const:
        @staticmethod
        def evaluate(X):
            return X[:, 0] * 2

    assert s.names == ["T", "RH", "U", "FA"]
    np.testing.assert_array_equal(s.evaluate(Const).outputs, [50.0, 50.0, 50.0])


def test_random_sample_bounds_and_moments():
    specs = fire_input_specs(4.7)
    s = random_sample(specs, 20_000, 2)
    for j, (spec, (mean, sd)) in enumerate(zip(specs, QUADRATURE_MOMENTS)):
        col = s.inputs[:, j]
        assert spec.lower <= col.min() and col.max() <= spec.upper
        assert abs(col.mean() - mean) < 4 * sd / np.sqrt(col.size)
    assert np.array_equal(s.inputs, random_sample(specs, 20_000, 2).inputs)
    with pytest.raises(ValueError):
        random_sample(specs, 1, 0)
