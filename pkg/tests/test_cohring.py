from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qqh.cohring import (CohClass, DimensionMismatch, QuadricSpace, basis, basis_class, c1_cup,
                         cup, from_coords, grading_mu, inverse_pairing, pairing, pairing_matrix)

X4 = QuadricSpace(4)


def test_spec_cup_examples():
    assert cup(basis_class(X4, "h1"), basis_class(X4, "h1"), X4) == basis_class(X4, "h2")
    assert cup(basis_class(X4, "p"), basis_class(X4, "p"), X4) == basis_class(X4, "h4")
    assert cup(basis_class(X4, "h1"), basis_class(X4, "p"), X4).is_zero()


def test_spec_pairing_examples():
    assert pairing(basis_class(X4, "h2"), basis_class(X4, "h2"), X4) == 2
    assert pairing(basis_class(X4, "p"), basis_class(X4, "p"), X4) == 2
    assert pairing(basis_class(X4, "h0"), basis_class(X4, "h1"), X4) == 0


def test_grading_and_c1():
    assert grading_mu(basis_class(X4, "h0"), X4) == basis_class(X4, "h0", -2)
    assert grading_mu(basis_class(X4, "p"), X4).is_zero()
    assert grading_mu(basis_class(X4, "h2"), X4).is_zero()
    assert c1_cup(basis_class(X4, "h0"), X4) == basis_class(X4, "h1", 4)
    assert c1_cup(basis_class(X4, "h4"), X4).is_zero()
    assert c1_cup(basis_class(X4, "p"), X4).is_zero()


@pytest.mark.parametrize("n", range(1, 9))
def test_pairing_inverse(n):
    X = QuadricSpace(n)
    G = pairing_matrix(X)
    ginv = inverse_pairing(X)
    m = X.basis_size
    for i in range(m):
        for j in range(m):
            s = sum(G[i][k] * ginv.get((k, j), 0) for k in range(m))
            assert s == (1 if i == j else 0)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_cup_associative_on_basis(n):
    X = QuadricSpace(n)
    B = basis(X)
    for a, b, c in itertools.product(B, repeat=3):
        assert cup(cup(a, b, X), c, X) == cup(a, cup(b, c, X), X)


coords6 = st.lists(st.fractions(max_denominator=9), min_size=6, max_size=6)


@given(coords6, coords6)
def test_pairing_symmetric(u, v):
    a, b = from_coords(X4, u), from_coords(X4, v)
    assert pairing(a, b, X4) == pairing(b, a, X4)


def test_bad_inputs():
    with pytest.raises(ValueError):
        QuadricSpace(0)
    with pytest.raises(ValueError):
        basis_class(QuadricSpace(3), "p")
    with pytest.raises(DimensionMismatch):
        from_coords(X4, [1, 2])
    with pytest.raises(ValueError):
        cup(basis_class(X4, "h1"), basis_class(QuadricSpace(6), "h1"), X4)


def test_json_roundtrip():
    c = CohClass((Fraction(1, 2), 0, 3, 0, -1), Fraction(2, 3))
    assert CohClass.from_json(c.to_json()) == c
