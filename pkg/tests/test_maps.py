import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import all_bitstrings

from simbias.core import InvalidArgument, ones_count
from simbias.maps import (
    BernoulliSpec,
    FstSpec,
    IngestionError,
    PolynomialSpec,
    TimeSeriesSpec,
    UnsupportedOperation,
    bernoulli_exact,
    bernoulli_map,
    fst_apply,
    fst_random,
    map_from_dict,
    mean_discretize,
    polynomial_map,
    timeseries_ingest,
    updown_discretize,
)
from simbias.sampling import enumerate_distribution, sample_distribution

IDENTITY = FstSpec(1, (((0, 0), (0, 1)),), input_length=4)
ZERO = FstSpec(1, (((0, 0), (0, 0)),), input_length=4)


# -- FST ---------------------------------------------------------------------

def test_fst_identity_and_constant():
    assert fst_apply(IDENTITY, "0110") == "0110"
    assert fst_apply(ZERO, "1011") == "0000"


def test_fst_length_mismatch():
    with pytest.raises(InvalidArgument):
        fst_apply(IDENTITY, "011")


def test_fst_random_is_deterministic():
    assert fst_random(5, 30, 42) == fst_random(5, 30, 42)
    assert fst_random(5, 30, 42) != fst_random(5, 30, 43)
    one = fst_random(1, 4, 123)
    assert one.num_states == 1 and one.start_state == 0


def test_fst_random_replays_distribution():
    a = sample_distribution(fst_random(5, 30, 42), 5000, 1)
    b = sample_distribution(fst_random(5, 30, 42), 5000, 1)
    assert a.counts == b.counts


def test_fst_enumeration_matches_scalar_runs():
    spec = fst_random(5, 12, 3)
    expected = {}
    for x in all_bitstrings(12):
        y = fst_apply(spec, x)
        expected[y] = expected.get(y, 0) + 1
    assert enumerate_distribution(spec).counts == expected


def test_fst_batch_equals_scalar():
    spec = fst_random(4, 10, 9)
    rows = np.array([[int(b) for b in x] for x in ["0101010101", "1111000011"]])
    got = ["".join(map(str, r)) for r in spec.run(rows)]
    assert got == [fst_apply(spec, "0101010101"), fst_apply(spec, "1111000011")]


def test_fst_validation():
    bad = FstSpec(2, (((0, 0), (5, 1)),), input_length=3)
    fields = {f for f, _ in bad.validate()}
    assert "transitions" in fields


def test_fst_dict_round_trip():
    spec = fst_random(3, 8, 1)
    assert map_from_dict(spec.to_dict()) == spec


# -- polynomial ----------------------------------------------------------------

@pytest.mark.parametrize(
    "values, bits", [([0.1, 0.5, 0.3], "10"), ([1, 2, 3, 4], "111"), ([2, 2], "0")]
)
def test_updown(values, bits):
    assert updown_discretize(values) == bits


def test_updown_too_short():
    with pytest.raises(InvalidArgument):
        updown_discretize([1.0])


def _seed_with_sign(spec, positive):
    for seed in range(100):
        if (spec.coefficients(np.uint64(seed))[0, 0] > 0) == positive:
            return seed
    raise AssertionError("no seed found")


def test_linear_polynomials_are_monotone():
    spec = PolynomialSpec(degree=1)
    assert polynomial_map(spec, _seed_with_sign(spec, True)) == "1" * 16
    assert polynomial_map(spec, _seed_with_sign(spec, False)) == "0" * 16


def test_polynomial_grid_inside_unit_interval():
    x = PolynomialSpec(grid_points=5).abscissae()
    assert np.allclose(x, [1 / 6, 2 / 6, 3 / 6, 4 / 6, 5 / 6])


def test_polynomial_batch_equals_scalar():
    spec = PolynomialSpec()
    seeds = np.arange(20, dtype=np.uint64)
    rows = spec.outputs(seeds)
    for s, row in zip(range(20), rows):
        assert polynomial_map(spec, s) == "".join(map(str, row))


def test_polynomial_not_enumerable():
    with pytest.raises(UnsupportedOperation):
        enumerate_distribution(PolynomialSpec())


@pytest.mark.parametrize(
    "spec, field",
    [
        (PolynomialSpec(degree=0), "degree"),
        (PolynomialSpec(coefficient_std=0), "coefficient_std"),
        (PolynomialSpec(grid_points=1), "grid_points"),
    ],
)
def test_polynomial_validation(spec, field):
    assert field in {f for f, _ in spec.validate()}


# -- Bernoulli -------------------------------------------------------------------

def test_bernoulli_exact_values():
    assert bernoulli_exact(BernoulliSpec(4, 0.3), "0101") == pytest.approx(0.0441, abs=1e-15)
    spec = BernoulliSpec(6, 0.5)
    assert all(bernoulli_exact(spec, x) == 2.0**-6 for x in all_bitstrings(6))


@given(st.integers(1, 10), st.floats(0.01, 0.99))
@settings(max_examples=30, deadline=None)
def test_bernoulli_exact_normalised(n, p):
    spec = BernoulliSpec(n, p)
    assert sum(bernoulli_exact(spec, x) for x in all_bitstrings(n)) == pytest.approx(1.0, abs=1e-12)


def test_bernoulli_exact_length_mismatch():
    with pytest.raises(InvalidArgument):
        bernoulli_exact(BernoulliSpec(4, 0.3), "010")


def test_bernoulli_map_deterministic():
    spec = BernoulliSpec(16, 0.3)
    assert bernoulli_map(spec, 11) == bernoulli_map(spec, 11)
    assert len(bernoulli_map(spec, 11)) == 16


def test_bernoulli_small_p_matches_closed_form():
    spec = BernoulliSpec(8, 0.01)
    dist = sample_distribution(spec, 100_000, 5)
    expected = bernoulli_exact(spec, "0" * 8)  # 0.99**8 ~ 0.923
    sigma = np.sqrt(expected * (1 - expected) / dist.total)
    assert abs(dist.prob("0" * 8) - expected) < 4 * sigma
    for x, c in dist.counts.items():
        p = bernoulli_exact(spec, x)
        assert abs(c / dist.total - p) < 4 * np.sqrt(p * (1 - p) / dist.total) + 5 / dist.total
        assert ones_count(x) <= 4


def test_bernoulli_validation():
    assert {f for f, _ in BernoulliSpec(8, 1.5).validate()} == {"p"}
    assert {f for f, _ in BernoulliSpec(0, 0.5).validate()} == {"n"}


# -- time series ----------------------------------------------------------------

@pytest.mark.parametrize(
    "series, bits", [([1, 2, 3, 4], "0011"), ([5, 5, 5, 5], "0000"), ([4, 3, 2, 1], "1100")]
)
def test_mean_discretize(series, bits):
    assert mean_discretize(series, 4) == bits


def test_mean_discretize_length_mismatch():
    with pytest.raises(InvalidArgument):
        mean_discretize([1, 2, 3], 4)


def test_ingest_single_row(tmp_path):
    f = tmp_path / "one.csv"
    f.write_text("GDP," + ",".join(str(v) for v in range(16)) + "\n")
    data = timeseries_ingest(f)
    assert len(data.series) == 1 and len(data.series[0]) == 16
    assert data.ids == ["GDP"]


def test_ingest_short_row_discarded(tmp_path):
    f = tmp_path / "short.csv"
    f.write_text("X,1,2,3\n")
    data = timeseries_ingest(f, window_length=16)
    assert data.series == [] and data.too_short == 1


def test_ingest_mixed_rows(tmp_path):
    f = tmp_path / "mixed.csv"
    good = ",".join(str(v) for v in range(20))
    f.write_text(f"id,{good}\nbad,1,two,3\nalso,{good},,\n")
    data = timeseries_ingest(f)
    assert len(data.series) == 2
    assert data.invalid_rows == [1]


def test_ingest_errors(tmp_path):
    with pytest.raises(IngestionError):
        timeseries_ingest(tmp_path / "missing.csv")
    f = tmp_path / "junk.csv"
    f.write_text("a,b,c\n")
    with pytest.raises(IngestionError) as info:
        timeseries_ingest(f)
    assert info.value.rows == [0]


def test_ingest_semicolon_delimiter(tmp_path):
    f = tmp_path / "semi.csv"
    f.write_text("id;" + ";".join(str(v) for v in range(16)) + "\n")
    assert len(timeseries_ingest(f, delimiter=";").series) == 1


def test_timeseries_map_windows(tmp_path):
    f = tmp_path / "s.csv"
    f.write_text("up," + ",".join(str(v) for v in range(18)) + "\n")
    spec = TimeSeriesSpec(str(f), window_length=16)
    dist = enumerate_distribution(spec)
    # three windows of a straight line, all below-then-above the mean
    assert dist.counts == {"0" * 8 + "1" * 8: 3}
    sampled = sample_distribution(spec, 50, 0)
    assert set(sampled.counts) == {"0" * 8 + "1" * 8}


# -- shared contract --------------------------------------------------------------

@pytest.mark.parametrize(
    "spec, length",
    [
        (fst_random(3, 12, 0), 12),
        (PolynomialSpec(grid_points=9), 8),
        (BernoulliSpec(7, 0.2), 7),
    ],
)
def test_output_lengths_and_replay(spec, length):
    seeds = np.arange(50, dtype=np.uint64)
    a, b = spec.outputs(seeds), spec.outputs(seeds)
    assert a.shape == (50, length)
    assert np.array_equal(a, b)


def test_unknown_map_type():
    with pytest.raises(InvalidArgument):
        map_from_dict({"type": "cellular"})
