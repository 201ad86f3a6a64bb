import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import all_bitstrings, lz76_history_oracle

from simbias.core import (
    InvalidArgument,
    changes_count,
    complement,
    encode_dotbracket,
    ktilde,
    lz76_phrase_count,
    ones_count,
)

bitstrings = st.text(alphabet="01", min_size=1, max_size=64)


@pytest.mark.parametrize(
    "s, expected",
    [
        ("0", 1),
        # frozen from the exhaustive-history oracle: 0 | 000
        ("0000", 2),
        # 0 | 001 | 10 | 100 | 1000 | 101
        ("0001101001000101", 6),
    ],
)
def test_lz76_examples(s, expected):
    assert len(lz76_history_oracle(s)) == expected
    assert lz76_phrase_count(s) == expected


def test_lz76_matches_oracle_up_to_length_10():
    for n in range(1, 11):
        for s in all_bitstrings(n):
            assert lz76_phrase_count(s) == len(lz76_history_oracle(s)), s


def test_lz76_generic_alphabet():
    s = "((..))..(())"
    assert lz76_phrase_count(s) == len(lz76_history_oracle(s))
    assert lz76_phrase_count(list(s)) == lz76_phrase_count(s)


def test_lz76_rejects_empty():
    with pytest.raises(InvalidArgument):
        lz76_phrase_count("")


def test_ktilde_uniform_branch():
    assert ktilde("0" * 16) == 4.0
    assert ktilde("1" * 16) == 4.0
    assert ktilde("0") == 0.0


def test_ktilde_alternating():
    # oracle histories: 0|1|01010101010101 and 1|0|10101010101010
    assert ktilde("0101010101010101") == 4.0 * (3 + 3) / 2


def test_ktilde_rejects_bad_input():
    with pytest.raises(InvalidArgument):
        ktilde("")
    with pytest.raises(InvalidArgument):
        ktilde("0120")


@given(bitstrings)
def test_ktilde_reverse_and_complement_symmetric(x):
    assert ktilde(x) == ktilde(x[::-1])
    assert ktilde(x) == ktilde(complement(x))


@given(bitstrings)
def test_uniform_strings_are_minimal(x):
    assert ktilde(x) >= ktilde("0" * len(x))
    if "0" in x and "1" in x and len(x) > 1:
        assert ktilde(x) > math.log2(len(x)) or len(x) == 1


@pytest.mark.parametrize("x, n", [("00111010", 4), ("0000", 0), ("01", 1)])
def test_changes_count(x, n):
    assert changes_count(x) == n


@given(bitstrings)
def test_changes_symmetries(x):
    assert changes_count(x) == changes_count(complement(x)) == changes_count(x[::-1])


@pytest.mark.parametrize("x, n", [("0000", 0), ("0101", 2), ("1111", 4)])
def test_ones_count(x, n):
    assert ones_count(x) == n


@given(bitstrings)
def test_ones_complement(x):
    assert ones_count(x) + ones_count(complement(x)) == len(x)


@pytest.mark.parametrize("s, bits", [(".", "00"), ("()", "0110"), ("(.)", "010010")])
def test_encode_dotbracket(s, bits):
    assert encode_dotbracket(s) == bits


def test_encode_dotbracket_rejects_foreign_symbol():
    with pytest.raises(InvalidArgument):
        encode_dotbracket("(x)")
