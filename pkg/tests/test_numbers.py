from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from qqh.numbers import GaussianRational, I, RootElement, mpq

fracs = st.builds(Fraction, st.integers(-100, 100), st.integers(1, 50))
gauss = st.builds(GaussianRational, fracs, fracs)


def test_i_squared():
    assert I * I == -1
    assert I ** 4 == 1
    assert I ** -1 == -I


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        GaussianRational(1) / GaussianRational(0)


def test_rejects_floats():
    with pytest.raises(TypeError):
        GaussianRational(0.5)


@given(gauss, gauss, gauss)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    if b:
        assert (a / b) * b == a


@given(gauss)
def test_complex_conversion(a):
    assert abs(complex(a) - complex(float(a.re), float(a.im))) == 0
    assert abs(complex(mpq(a)) - complex(a)) < 1e-12


def test_root_ring_relation():
    w = RootElement.generator(4, 4)
    assert w ** 4 == w * 0 + 4
    assert w * w.inverse() == w * 0 + 1


@given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=5), fracs)
def test_root_ring_monomial_inverse(m, j, a):
    if not a:
        return
    x = RootElement([0] * (j % m) + [a], m, 4)
    assert x * x.inverse() == x * 0 + 1


def test_root_ring_inverse_monomials_only():
    with pytest.raises(NotImplementedError):
        RootElement([1, 1], 2, 4).inverse()


def test_root_ring_numeric_oracle():
    # w = 4^{1/4} realises Q(i)[w]/(w^4 - 4); compare a product numerically
    w = RootElement.generator(4, 4)
    x = (w + 3) * (w * w - I)
    r = mpmath.root(4, 4)
    val = sum(complex(c) * complex(r) ** k for k, c in enumerate(x.coeffs))
    assert abs(val - (complex(r) + 3) * (complex(r) ** 2 - 1j)) < 1e-12


def test_mpq_exact():
    assert mpq(Fraction(1, 3)) == mpmath.mpf(1) / 3
