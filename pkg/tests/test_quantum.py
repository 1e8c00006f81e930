from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath
import pytest

from qqh.cohring import QuadricSpace, basis, basis_class, pairing
from qqh.numbers import GaussianRational
from qqh.quantum import (admissible_phases, basis_product, c1_quantum_matrix, default_phases,
                         exact_spectral_report, expected_char_poly, gamma2_hypothesis_check,
                         idempotent_basis, small_product, three_point, three_point_lemma,
                         v_pm_exact)

X4 = QuadricSpace(4)


def b(lab, X=X4, c=1):
    return basis_class(X, lab, c)


def test_spec_products():
    assert small_product(b("h1"), b("h3"), X4) == b("h4") + b("h0", c=2)
    assert small_product(b("h4"), b("h4"), X4) == b("h0", c=4)
    assert small_product(b("h4"), b("p"), X4) == b("p", c=-2)
    assert small_product(b("p"), b("p"), X4) == b("h4") - b("h0", c=2)


def test_spec_three_points():
    P = X4.n + 1
    assert three_point(b("p"), b("p"), b("h4"), X4) == -4
    assert three_point(b("h4"), b("h4"), b("h4"), X4) == 8
    assert three_point(b("p"), b("p"), b("p"), X4) == 0
    assert three_point_lemma(P, P, 0, X4) == 2


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7, 8])
def test_associative_commutative_frobenius(n):
    X = QuadricSpace(n)
    B = basis(X)
    for x, y in itertools.product(B, repeat=2):
        assert small_product(x, y, X) == small_product(y, x, X)
    for x, y, z in itertools.product(B, repeat=3):
        assert small_product(small_product(x, y, X), z, X) == small_product(x, small_product(y, z, X), X)
        assert pairing(small_product(x, y, X), z, X) == pairing(x, small_product(y, z, X), X)


def test_unit():
    X = QuadricSpace(6)
    for x in basis(X):
        assert small_product(basis_class(X, "h0"), x, X) == x


def test_char_poly_q4():
    cp = c1_quantum_matrix(X4).characteristic_polynomial()
    assert cp == expected_char_poly(X4)
    assert cp[2] == -1024
    M = c1_quantum_matrix(X4)
    assert M.trace() == 0
    assert M.size - M.rank() == 2


@pytest.mark.parametrize("N", [1, 2, 3])
def test_char_poly_numeric_oracle(N):
    # eigenvalues from mpmath agree with 0, 0 and T zeta^{-k}
    X = QuadricSpace(2 * N)
    M = mpmath.matrix([[float(x) for x in r] for r in c1_quantum_matrix(X).rows])
    ev = sorted(mpmath.eig(M)[0], key=lambda z: (float(abs(z)), float(mpmath.arg(z))))
    T = 2 * N * mpmath.root(4, 2 * N)
    assert all(abs(e) < 1e-6 for e in ev[:2])
    assert all(abs(abs(e) - T) < 1e-8 for e in ev[2:])


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_exact_spectral(n):
    rep = exact_spectral_report(QuadricSpace(n))
    assert rep["all"], rep


def test_idempotent_numeric():
    spectral = idempotent_basis(X4)
    c1 = basis_class(X4, "h1", 4)
    for i in range(len(spectral.labels)):
        v = spectral.idempotent(i, 30)
        u = spectral.eigenvalues[i].to_complex(30)
        lhs = small_product(c1, v, X4)
        assert all(abs(a - u * b) < 1e-20 for a, b in zip(lhs.coords(X4), v.coords(X4)))
        assert abs(pairing(v, v, X4) - 1) < 1e-20


def test_vpm_squares():
    vp = v_pm_exact(X4, 1)
    assert small_product(vp, vp, X4) == vp.scale(2 * GaussianRational(0, 1))


def test_admissible_phases():
    eig = idempotent_basis(X4).eigenvalues
    adm = admissible_phases(eig)
    assert adm.is_admissible(Fraction(1, 8))
    assert not adm.is_admissible(Fraction(0))
    assert admissible_phases(eig[:1]).is_admissible(Fraction(0))


def test_admissible_exhaustive_oracle():
    spectral = idempotent_basis(X4)
    pts = [u.to_complex(30) for u in spectral.eigenvalues]
    adm = admissible_phases(spectral.eigenvalues)
    for num in range(-24, 24):
        phi = Fraction(num, 24)
        d = mpmath.expjpi(phi)
        parallel = any(abs(a - b) > 1e-10 and abs(mpmath.im((a - b) / d)) < 1e-12
                       for a in pts for b in pts)
        assert adm.is_admissible(phi) == (not parallel)


def test_gamma2_reports():
    spectral = idempotent_basis(X4)
    good = gamma2_hypothesis_check(spectral, [Fraction(1, 10), Fraction(1, 16)] + [Fraction(-k, 2) for k in range(4)])
    assert good.ok
    dup = gamma2_hypothesis_check(spectral, [Fraction(1, 10), Fraction(1, 10)] + [Fraction(-k, 2) for k in range(4)])
    assert not dup.descending
    assert not dup.disjoint
    rising = gamma2_hypothesis_check(spectral, [Fraction(0), Fraction(1, 4)] + [Fraction(-k, 2) for k in range(4)])
    assert not rising.ok
    assert gamma2_hypothesis_check(spectral, default_phases(2, Fraction(1, 6), Fraction(1, 12))).ok


def test_odd_product_shape():
    X = QuadricSpace(3)
    assert basis_product(1, 2, X) == basis_class(X, "h3") + basis_class(X, "h0", 2)
    with pytest.raises(ValueError):
        idempotent_basis(X)
