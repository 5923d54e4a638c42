from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qfano.arith import NotCoprimeError, Rational
from qfano.riemann_roch import (
    AnticanonicalData,
    Basket,
    FanoInput,
    IndexNotCoprimeError,
    NonIntegralChiError,
    SingularPoint,
    anticanonical_data,
    chi,
    chi_integer,
    dims,
    genus,
    kawamata_sum,
    local_index,
    point_contribution,
)


def test_singular_point_canonicalization():
    assert SingularPoint(5, 3) == SingularPoint(5, 2)
    assert SingularPoint(4, 3).a == 1
    assert SingularPoint(15, 8).a == 7
    assert str(SingularPoint(9, 5)) == "9:4"
    with pytest.raises(NotCoprimeError):
        SingularPoint(9, 6)


def test_basket_is_sorted_multiset():
    b = Basket.from_pairs([(5, 2), (2, 1), (5, 1), (2, 1)])
    assert b.indices == (2, 2, 5, 5)
    assert str(b) == "[2:1, 2:1, 5:1, 5:2]"
    assert b.index_lcm == 10
    assert b.indices_text == "(2,2,5,5)"
    assert Basket.from_text(str(b)) == b
    assert Basket.from_text("[]") == Basket()
    assert not Basket()
    assert Basket().index_lcm == 1


def test_kawamata_sum():
    assert kawamata_sum(Basket.from_pairs([(2, 1)])) == Rational(3, 2)
    assert kawamata_sum(Basket.from_pairs([(2, 1), (4, 1), (5, 2)])) == (
        Rational(3, 2) + Rational(15, 4) + Rational(24, 5)
    )
    assert kawamata_sum(Basket()) == 0


def test_fano_input_validation():
    with pytest.raises(IndexNotCoprimeError):
        FanoInput(q=6, basket=Basket.from_pairs([(2, 1)]), a3=Rational(1))
    with pytest.raises(ValueError):
        FanoInput(q=0, basket=Basket(), a3=Rational(1))
    with pytest.raises(ValueError):
        FanoInput(q=3, basket=Basket(), a3=Rational(0))


def test_local_index():
    p = SingularPoint(5, 2)
    assert local_index(0, 9, p) == 0
    # -K = qA has local index r - 1 at every basket point
    assert local_index(9, 9, p) == 4
    assert local_index(7, 7, SingularPoint(2, 1)) == 1
    # k = -1 is the polarization generator's mirror: index q^{-1} mod r
    assert local_index(-1, 9, p) == pow(9, -1, 5)
    with pytest.raises(IndexNotCoprimeError):
        local_index(1, 5, SingularPoint(5, 2))


def _raw_contribution(k: int, q: int, r: int, a: int) -> Fraction:
    # independent transcription of the local term, without orientation
    # canonicalization: the production code must agree for both a and r-a
    i = (-k * pow(q, -1, r)) % r
    total = Fraction(-i * (r * r - 1), 12 * r)
    for j in range(1, i):
        ja = (j * a) % r
        total += Fraction(ja * (r - ja), 2 * r)
    return total


@given(
    st.integers(-30, 30),
    st.sampled_from([3, 4, 5, 7, 8, 9, 11]),
    st.integers(2, 24),
)
@settings(max_examples=300)
def test_point_contribution_matches_raw_and_is_orientation_symmetric(k, q, r):
    import math

    if math.gcd(q, r) != 1:
        return
    for a in range(1, r):
        if math.gcd(a, r) != 1:
            continue
        point = SingularPoint(r, a)
        value = point_contribution(k, q, point)
        assert value == _raw_contribution(k, q, r, a)
        assert value == _raw_contribution(k, q, r, r - a)


@given(st.integers(-50, 50))
def test_point_contribution_periodic(k):
    point = SingularPoint(7, 2)
    assert point_contribution(k, 5, point) == point_contribution(k + 7, 5, point)
    assert point_contribution(0, 5, point) == 0


# Dimension tables frozen from the reference candidate lists; chi must
# reproduce them exactly (h^0(kA) = chi(k), dim |kA| = chi(k) - 1).
GOLDEN_DIMS = [
    (9, [(2, 1), (4, 1), (5, 2)], Rational(1, 20), (0, 1, 2, 4, 6, 8, 11, 15, 19)),
    (8, [(3, 1), (3, 1), (5, 1)], Rational(1, 15), (0, 1, 3, 4, 7, 10, 13, 18)),
    (7, [(2, 1), (3, 1)], Rational(1, 6), (1, 3, 6, 10, 15, 22, 30)),
    (6, [(7, 3)], Rational(2, 7), (1, 4, 8, 14, 22, 32)),
    (5, [(2, 1)], Rational(1, 2), (2, 6, 12, 21, 33)),
    (4, [(3, 1)], Rational(2, 3), (2, 6, 13, 23)),
    (3, [(2, 1)], Rational(3, 2), (3, 10, 22)),
]


@pytest.mark.parametrize("q,pairs,a3,expected", GOLDEN_DIMS)
def test_dims_golden(q, pairs, a3, expected):
    fano = FanoInput(q=q, basket=Basket.from_pairs(pairs), a3=a3)
    assert tuple(dims(fano, q)) == expected
    assert genus(fano) == expected[-1] - 1


def test_chi_golden_sequence():
    fano = FanoInput(
        q=9, basket=Basket.from_pairs([(2, 1), (4, 1), (5, 2)]), a3=Rational(1, 20)
    )
    got = [chi_integer(k, fano) for k in range(10)]
    assert got == [1, 1, 2, 3, 5, 7, 9, 12, 16, 20]


def test_chi_non_integral():
    fano = FanoInput(q=3, basket=Basket.from_pairs([(2, 1)]), a3=Rational(1, 2))
    assert chi(1, fano) == Rational(7, 3)
    with pytest.raises(NonIntegralChiError) as exc:
        chi_integer(1, fano)
    assert exc.value.k == 1
    assert exc.value.value == Rational(7, 3)
    with pytest.raises(NonIntegralChiError):
        dims(fano, 3)


def test_anticanonical_data():
    fano = FanoInput(q=5, basket=Basket.from_pairs([(2, 1)]), a3=Rational(1, 2))
    data = anticanonical_data(fano)
    assert data == AnticanonicalData(
        minus_k3=Rational(125, 2),
        minus_k_c2=Rational(45, 2),
        genus=32,
        dim_minus_k=33,
    )


@st.composite
def _fano_inputs(draw):
    import math

    q = draw(st.sampled_from([1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 13, 17, 19]))
    n_points = draw(st.integers(0, 4))
    pairs = []
    for _ in range(n_points):
        r = draw(st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11]))
        if math.gcd(r, q) != 1:
            continue
        a = draw(st.integers(1, r - 1))
        if math.gcd(a, r) != 1:
            continue
        pairs.append((r, a))
    a3 = Rational(draw(st.integers(1, 60)), draw(st.integers(1, 60)))
    return FanoInput(q=q, basket=Basket.from_pairs(pairs), a3=a3)


@given(_fano_inputs())
@settings(max_examples=200)
def test_chi_identities(fano):
    assert chi(0, fano) == 1
    for k in range(-fano.q - 6, 7):
        assert chi(k, fano) + chi(-fano.q - k, fano) == 0
