from __future__ import annotations

import cmath
import math
from fractions import Fraction

from hypothesis import given, strategies as st

from qqh.halflines import HalfLine, Modulus, PlanePoint, half_lines_intersect, sin_pi_sign

ZERO = Modulus(Fraction(0), Fraction(1), 1)


def pt(scale, phase, base=1, root=1):
    return PlanePoint(Modulus(Fraction(scale), Fraction(base), root), Fraction(phase))


def test_sin_sign():
    assert sin_pi_sign(Fraction(1, 2)) == 1
    assert sin_pi_sign(Fraction(3, 2)) == -1
    assert sin_pi_sign(Fraction(1)) == 0


def test_identical_lines_meet():
    L = HalfLine(pt(1, 0), Fraction(1, 3))
    assert half_lines_intersect(L, L) is True


def test_shared_origin():
    O = PlanePoint(ZERO, Fraction(0))
    assert half_lines_intersect(HalfLine(O, Fraction(1, 4)), HalfLine(O, Fraction(1, 8))) == "shared_origin"


def test_modulus_equality_across_roots():
    assert Modulus(Fraction(1), Fraction(4), 2) == Modulus(Fraction(2), Fraction(1), 1)
    assert Modulus(Fraction(1), Fraction(4), 4) != Modulus(Fraction(2), Fraction(1), 1)


def _float_intersect(p, f1, q, f2):
    # brute-force oracle: solve p + s d1 = q + t d2, s, t >= 0
    d1, d2 = cmath.exp(1j * math.pi * f1), cmath.exp(1j * math.pi * f2)
    det = (d1 * d2.conjugate()).imag
    w = q - p
    if abs(det) < 1e-12:
        return None
    s = (w * d2.conjugate()).imag / det
    t = (w * d1.conjugate()).imag / det
    return s >= -1e-12 and t >= -1e-12, min(abs(s), abs(t))


phase = st.fractions(min_value=-2, max_value=2, max_denominator=12)
scale = st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=4)


@given(scale, phase, phase, scale, phase, phase)
def test_intersection_against_float_oracle(r1, a1, f1, r2, a2, f2):
    P, Q = pt(r1, a1), pt(r2, a2)
    res = half_lines_intersect(HalfLine(P, f1), HalfLine(Q, f2))
    p = float(r1) * cmath.exp(1j * math.pi * float(a1))
    q = float(r2) * cmath.exp(1j * math.pi * float(a2))
    oracle = _float_intersect(p, float(f1), q, float(f2))
    if oracle is None or abs(p - q) < 1e-9:
        return
    hit, margin = oracle
    if margin > 1e-6:
        assert res == hit


def test_radical_moduli_use_interval_fallback():
    # T = 4 * 4^{1/4} vs 6: sign questions need the fallback
    T = PlanePoint(Modulus(Fraction(4), Fraction(4), 4), Fraction(0))
    six = pt(6, Fraction(1, 3))
    assert half_lines_intersect(HalfLine(T, Fraction(1, 2)), HalfLine(six, Fraction(-1, 2))) in (True, False)
