import numpy as np
import pytest
from hypothesis import given, strategies as st

from thetaforge import (
    Characteristic,
    InvalidCharacteristicError,
    Parity,
    parity,
    parse_characteristic,
    reduce_characteristic,
)

half_ints = st.integers(min_value=-6, max_value=6)


def char_of(top, bottom):
    return Characteristic.from_halves(top, bottom)


def test_reduction_shifted_top():
    can, sign = reduce_characteristic(char_of([1.5], [0.0]))
    assert can == char_of([0.5], [0.0])
    assert sign == 1


def test_reduction_shifted_bottom_flips_sign():
    can, sign = reduce_characteristic(char_of([0.5], [1.5]))
    assert can == char_of([0.5], [0.5])
    assert sign == -1


def test_reduction_canonical_is_identity():
    alpha = char_of([0.0, 0.0], [0.0, 0.0])
    can, sign = reduce_characteristic(alpha)
    assert can == alpha
    assert sign == 1


def test_non_half_integer_rejected():
    with pytest.raises(InvalidCharacteristicError):
        Characteristic.from_halves([0.3], [0.0])


def test_parity_examples():
    assert parity(char_of([0.0], [0.0])) is Parity.EVEN
    assert parity(char_of([0.5], [0.5])) is Parity.ODD
    assert parity(char_of([0.5, 0.0], [0.5, 0.0])) is Parity.ODD


@given(st.lists(half_ints, min_size=1, max_size=4))
def test_canonical_entries_in_unit_set(doubled):
    alpha = Characteristic(tuple(doubled), tuple(reversed(doubled)))
    can, sign = reduce_characteristic(alpha)
    assert can.is_canonical()
    assert sign in (1, -1)


@given(st.lists(st.tuples(half_ints, half_ints), min_size=1, max_size=4))
def test_parity_invariant_under_reduction(pairs):
    top = tuple(t for t, _ in pairs)
    bottom = tuple(b for _, b in pairs)
    alpha = Characteristic(top, bottom)
    can, _ = reduce_characteristic(alpha)
    assert parity(can) is parity(alpha)


@given(st.lists(st.tuples(half_ints, half_ints), min_size=1, max_size=3))
def test_reduction_sign_matches_series(pairs):
    # theta[alpha] = sign * theta[canonical] checked on a tiny box sum
    from oracles import brute_theta

    top = tuple(t for t, _ in pairs)
    bottom = tuple(b for _, b in pairs)
    alpha = Characteristic(top, bottom)
    can, sign = reduce_characteristic(alpha)
    g = alpha.g
    tau = 1j * np.eye(g) + 0.1 * (np.ones((g, g)) - np.eye(g))
    z = np.full(g, 0.17 + 0.05j)
    lhs = brute_theta(tau, alpha, z, box=8)
    rhs = sign * brute_theta(tau, can, z, box=8)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


def test_text_round_trip():
    alpha = char_of([0.5, 0.0], [0.0, 0.5])
    assert parse_characteristic(alpha.text()) == alpha
    assert parse_characteristic("3/2;-1/2") == char_of([1.5], [-0.5])


def test_parse_rejects_malformed():
    with pytest.raises(InvalidCharacteristicError):
        parse_characteristic("1/2,0")
    with pytest.raises(InvalidCharacteristicError):
        parse_characteristic("1/3;0")
