
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import all_bitstrings
from scipy import stats

from simbias.core import InvalidArgument, ktilde
from simbias.predictor import extrapolate, guess_order, next_bit

bits = st.text("01", min_size=1, max_size=40)


def test_constant_history_continues():
    f = next_bit("0" * 15)
    assert f.p0 > f.p1 and f.best == "0"
    assert f.k0 < f.k1


@given(bits)
@settings(max_examples=200, deadline=None)
def test_forecast_normalised_and_argmin(h):
    f = next_bit(h)
    assert f.p0 + f.p1 == pytest.approx(1.0, abs=1e-12)
    assert 0 <= f.p0 <= 1
    if f.k0 != f.k1:
        assert f.best == ("0" if f.k0 < f.k1 else "1")
    else:
        assert f.p0 == f.p1 == 0.5


def test_forecast_matches_direct_ratio():
    h = "0110100110"
    f = next_bit(h)
    w0, w1 = 2 ** -ktilde(h + "0"), 2 ** -ktilde(h + "1")
    assert f.p0 == pytest.approx(w0 / (w0 + w1), rel=1e-12)


def test_extrapolate_constant():
    assert extrapolate("0" * 8, 4) == "0" * 12


@given(bits, st.integers(1, 5), st.integers(1, 5))
@settings(max_examples=50, deadline=None)
def test_extrapolate_composes(h, a, b):
    assert extrapolate(extrapolate(h, a), b) == extrapolate(h, a + b)


def test_extrapolate_errors():
    with pytest.raises(InvalidArgument):
        extrapolate("01", 0)
    with pytest.raises(InvalidArgument):
        next_bit("012")


def test_guess_order_is_permutation_sorted_by_k():
    cands = list(all_bitstrings(6))
    order = guess_order(cands)
    assert sorted(order) == sorted(cands)
    ks = [ktilde(x) for x in order]
    assert ks == sorted(ks)
    assert set(order[:2]) == {"000000", "111111"}


def test_guess_order_deduplicates_and_rejects_empty():
    assert guess_order(["01", "01", "00"]) == ["00", "01"]
    with pytest.raises(InvalidArgument):
        guess_order([])


def test_guess_order_tracks_true_probability(fst_dist):
    order = guess_order(fst_dist.outputs())
    position = {x: i for i, x in enumerate(order)}
    xs = fst_dist.outputs()
    tau = stats.kendalltau([-position[x] for x in xs], [fst_dist.prob(x) for x in xs]).statistic
    assert tau > 0
