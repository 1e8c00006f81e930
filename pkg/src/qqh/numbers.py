"""Small exact number systems used by the spectral checks.

``GaussianRational`` is Q(i).  ``RootElement`` lives in Q(i)[w]/(w^M - c),
which lets identities in a root w of w^M = c be checked for every root at
once.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _frac(self.re))
        object.__setattr__(self, "im", _frac(self.im))

    @staticmethod
    def coerce(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(_frac(x), Fraction(0))

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        nrm = o.norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        p = self * o.conjugate()
        return GaussianRational(p.re / nrm, p.im / nrm)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return (1 / self) ** (-k)
        out, base = GaussianRational(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"GaussianRational({self.re})"
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


I = GaussianRational(0, 1)


class RootElement:
    """Element of Q(i)[w]/(w^M - c) stored as a length-M coefficient tuple."""

    __slots__ = ("coeffs", "modulus", "const")

    def __init__(self, coeffs, modulus: int, const):
        coeffs = [GaussianRational.coerce(a) for a in coeffs]
        if len(coeffs) > modulus:
            coeffs = _reduce(coeffs, modulus, GaussianRational.coerce(const))
        coeffs += [GaussianRational(0)] * (modulus - len(coeffs))
        self.coeffs = tuple(coeffs)
        self.modulus = modulus
        self.const = GaussianRational.coerce(const)

    @classmethod
    def generator(cls, modulus: int, const) -> "RootElement":
        if modulus == 1:
            return cls([const], 1, const)
        return cls([0, 1], modulus, const)

    def _lift(self, other) -> "RootElement":
        if isinstance(other, RootElement):
            if other.modulus != self.modulus or other.const != self.const:
                raise ValueError("RootElement ring mismatch")
            return other
        return RootElement([GaussianRational.coerce(other)], self.modulus, self.const)

    def __add__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return RootElement([a + b for a, b in zip(self.coeffs, o.coeffs)],
                           self.modulus, self.const)

    __radd__ = __add__

    def __neg__(self):
        return RootElement([-a for a in self.coeffs], self.modulus, self.const)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        m = self.modulus
        prod = [GaussianRational(0)] * (2 * m - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                if b:
                    prod[i + j] = prod[i + j] + a * b
        return RootElement(prod, m, self.const)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self._lift(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "RootElement":
        # Only monomials are needed: (a w^j)^{-1} = a^{-1} w^{M-j} / c.
        nz = [(j, a) for j, a in enumerate(self.coeffs) if a]
        if len(nz) != 1:
            raise NotImplementedError("inverse implemented for monomials only")
        j, a = nz[0]
        if j == 0:
            return self._lift(1 / a)
        coeffs = [GaussianRational(0)] * self.modulus
        coeffs[self.modulus - j] = 1 / (a * self.const)
        return RootElement(coeffs, self.modulus, self.const)

    def __truediv__(self, other):
        if isinstance(other, RootElement):
            return self * other.inverse()
        return self * (1 / GaussianRational.coerce(other))

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.modulus))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        terms = [f"({a})*w^{j}" for j, a in enumerate(self.coeffs) if a]
        return " + ".join(terms) if terms else "0"


def _reduce(coeffs, modulus, const):
    coeffs = list(coeffs)
    for k in range(len(coeffs) - 1, modulus - 1, -1):
        a = coeffs[k]
        if a:
            coeffs[k - modulus] = coeffs[k - modulus] + a * const
        coeffs[k] = GaussianRational(0)
    return coeffs[:modulus]


def mpq(x):
    """mpmath number from an exact rational, Gaussian rational or float."""
    import mpmath

    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, GaussianRational):
        return mpmath.mpc(mpq(x.re), mpq(x.im))
    return mpmath.mpmathify(x)
