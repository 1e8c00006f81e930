"""Exact predicates for half-lines u + R_{>=0} e^{i pi phi} in the plane.

Points are r e^{i pi a} with a rational and r = s * b^{1/k} a positive real
radical (or 0).  Signs of sin/cos at rational multiples of pi are decided
exactly.  Comparisons between two different nonzero moduli fall back to
interval arithmetic at increasing precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from qqh.numbers import mpq


@dataclass(frozen=True)
class Modulus:
    """The real number scale * base^{1/root} (scale >= 0, base > 0)."""

    scale: Fraction
    base: Fraction
    root: int

    def is_zero(self) -> bool:
        return self.scale == 0

    def _key(self):
        # r^root = scale^root * base, compared across roots via lcm
        return self.scale, self.base, self.root

    def __eq__(self, other):
        if not isinstance(other, Modulus):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        r, s = self.root, other.root
        return (self.scale ** (r * s) * self.base ** s
                == other.scale ** (r * s) * other.base ** r)

    def __hash__(self):
        return hash(self.is_zero())

    def to_mpf(self):
        if self.is_zero():
            return mpmath.mpf(0)
        return mpq(self.scale) * mpmath.root(mpq(self.base), self.root)

    def to_interval(self):
        iv = mpmath.iv
        if self.is_zero():
            return iv.mpf(0)
        return _ivq(self.scale) * iv.exp(iv.log(_ivq(self.base)) / self.root)

    def to_json(self) -> dict:
        return {"scale": str(self.scale), "base": str(self.base), "root": self.root}


@dataclass(frozen=True)
class PlanePoint:
    modulus: Modulus
    phase_over_pi: Fraction


@dataclass(frozen=True)
class HalfLine:
    base: PlanePoint
    phase_over_pi: Fraction


def _ivq(x: Fraction):
    x = Fraction(x)
    return mpmath.iv.mpf(x.numerator) / x.denominator


def sin_pi_sign(q: Fraction) -> int:
    q = Fraction(q) % 2
    if q == 0 or q == 1:
        return 0
    return 1 if q < 1 else -1


def cos_pi_sign(q: Fraction) -> int:
    return sin_pi_sign(Fraction(q) + Fraction(1, 2))


def same_point(p: PlanePoint, q: PlanePoint) -> bool:
    if p.modulus.is_zero() or q.modulus.is_zero():
        return p.modulus.is_zero() and q.modulus.is_zero()
    return p.modulus == q.modulus and (p.phase_over_pi - q.phase_over_pi) % 2 == 0


def _sign_sin_combo(r1: Modulus, a: Fraction, r2: Modulus, b: Fraction) -> int:
    """Sign of r1 sin(pi a) - r2 sin(pi b)."""
    s1 = 0 if r1.is_zero() else sin_pi_sign(a)
    s2 = 0 if r2.is_zero() else sin_pi_sign(b)
    if s2 == 0:
        return s1
    if s1 == 0:
        return -s2
    if s1 != s2:
        return s1
    if r1 == r2:
        # sin A - sin B = 2 cos((A+B)/2) sin((A-B)/2)
        return cos_pi_sign((a + b) / 2) * sin_pi_sign((a - b) / 2)
    return _interval_sign(lambda iv: r1.to_interval() * iv.sin(iv.pi * _ivq(a))
                          - r2.to_interval() * iv.sin(iv.pi * _ivq(b)))


def _interval_sign(fn) -> int:
    for prec in (64, 256, 1024, 4096):
        mpmath.iv.prec = prec
        val = fn(mpmath.iv)
        if val.a > 0:
            return 1
        if val.b < 0:
            return -1
    raise ArithmeticError("sign undecided at 4096 bits")


def _cross_w_d(p: PlanePoint, q: PlanePoint, phi: Fraction) -> int:
    """Sign of cross(q - p, e^{i pi phi}) = Im(conj(q - p) e^{i pi phi})."""
    return _sign_sin_combo(q.modulus, phi - q.phase_over_pi, p.modulus, phi - p.phase_over_pi)


def _dot_w_d(p: PlanePoint, q: PlanePoint, phi: Fraction) -> int:
    """Sign of Re(conj(q - p) e^{i pi phi})."""
    h = Fraction(1, 2)
    return _sign_sin_combo(q.modulus, phi - q.phase_over_pi + h, p.modulus, phi - p.phase_over_pi + h)


def half_lines_intersect(L1: HalfLine, L2: HalfLine):
    """True/False for closed half-lines; 'shared_origin' when the base points
    coincide and the directions differ (the lines then meet only there)."""
    p, q = L1.base, L2.base
    f1, f2 = Fraction(L1.phase_over_pi), Fraction(L2.phase_over_pi)
    c = sin_pi_sign(f2 - f1)  # cross(d1, d2)
    if same_point(p, q):
        return True if (f2 - f1) % 2 == 0 else "shared_origin"
    if c == 0:
        if _cross_w_d(p, q, f1) != 0:
            return False
        if (f2 - f1) % 2 == 0:
            return True
        # opposite rays on one line: meet iff q lies ahead of p along d1
        return _dot_w_d(p, q, f1) >= 0
    s = _cross_w_d(p, q, f2) * c
    t = _cross_w_d(p, q, f1) * c
    return s >= 0 and t >= 0
