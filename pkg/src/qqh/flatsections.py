"""J- and P-functions, flat sections of the Dubrovin connection at t = 0
and the scalar quantum ODE.

Series in z are stored as ``ZSeries``: a finite map (a, j) -> c standing for
sum c z^a (log z)^j.  Exponents are Fractions so odd quadrics (half-integer
shifts) fit the same code.  The h-valued functions J and P live in
``LogSeries`` with the symbolic prefactor t^{eps h} kept separate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable

import mpmath

from qqh import series
from qqh.cohring import (CohClass, QuadricSpace, _same, basis_class, cup, grading_mu,
                         pairing, zero)
from qqh.numbers import mpq
from qqh.quantum import small_product

DEFAULT_DMAX = 8


def _nonzero(c) -> bool:
    if isinstance(c, CohClass):
        return not c.is_zero()
    return bool(c)


# ---------------------------------------------------------------- z-series

@dataclass(frozen=True)
class ZSeries:
    """sum c z^a (log z)^j over a finite support."""

    terms: tuple = ()

    @classmethod
    def from_dict(cls, d: dict) -> "ZSeries":
        return cls(tuple(sorted(((Fraction(a), j), c) for (a, j), c in d.items() if _nonzero(c))))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other: "ZSeries") -> "ZSeries":
        out = self.as_dict()
        for key, c in other.terms:
            out[key] = out[key] + c if key in out else c
        return ZSeries.from_dict(out)

    def __neg__(self) -> "ZSeries":
        return self.scale(-1)

    def __sub__(self, other: "ZSeries") -> "ZSeries":
        return self + (-other)

    def scale(self, c) -> "ZSeries":
        return ZSeries.from_dict({k: v * c for k, v in self.terms})

    def map(self, f: Callable) -> "ZSeries":
        return ZSeries.from_dict({k: f(v) for k, v in self.terms})

    def shift(self, k) -> "ZSeries":
        """Multiply by z^k."""
        return ZSeries.from_dict({(a + k, j): c for (a, j), c in self.terms})

    def zdz(self) -> "ZSeries":
        # z d/dz (z^a L^j) = a z^a L^j + j z^a L^{j-1}
        out: dict = {}
        for (a, j), c in self.terms:
            if a:
                out[(a, j)] = out[(a, j)] + c * a if (a, j) in out else c * a
            if j:
                key = (a, j - 1)
                out[key] = out[key] + c * j if key in out else c * j
        return ZSeries.from_dict(out)

    def zdz_power(self, p: int) -> "ZSeries":
        s = self
        for _ in range(p):
            s = s.zdz()
        return s

    def restrict(self, min_exponent) -> "ZSeries":
        return ZSeries.from_dict({(a, j): c for (a, j), c in self.terms if a >= min_exponent})

    def is_zero(self) -> bool:
        return not self.terms

    def exponents(self) -> list[Fraction]:
        return sorted({a for (a, _), _ in self.terms})

    def evaluate(self, z, log_z=None):
        """Numeric value; log z defaults to the principal branch."""
        z = mpmath.mpmathify(z)
        L = mpmath.log(z) if log_z is None else mpmath.mpmathify(log_z)
        acc = None
        for (a, j), c in self.terms:
            w = mpmath.exp(mpq(a) * L) * L ** j
            term = c.map(lambda x: mpq(x) * w) if isinstance(c, CohClass) else mpq(c) * w
            acc = term if acc is None else acc + term
        return 0 if acc is None else acc


# ---------------------------------------------------------------- J and P

@dataclass(frozen=True)
class LogSeries:
    """t^{eps h} sum_d terms[d] t^{n d}, terms exact classes in H*(Q)."""

    n: int
    prefactor: int
    terms: tuple
    cutoff: int

    def term(self, d: int) -> CohClass:
        return self.terms[d]

    def expanded(self) -> dict:
        """d -> [C_0, C_1, ...] with t^{eps h} A_d = sum_j (log t)^j C_j."""
        X = QuadricSpace(self.n)
        out = {}
        for d, A in enumerate(self.terms):
            cols = []
            hj = CohClass((1,) + (0,) * self.n, 0)
            for j in range(self.n + 1):
                c = cup(hj, A, X).scale(Fraction(self.prefactor ** j, factorial(j)))
                cols.append(c)
                hj = cup(hj, basis_class(X, "h1"), X)
            while cols and cols[-1].is_zero():
                cols.pop()
            out[d] = cols
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "prefactor": self.prefactor, "cutoff": self.cutoff,
                "terms": {str(d): {str(j): c.to_json() for j, c in enumerate(cols)}
                          for d, cols in self.expanded().items()}}


def _ratio_series(n: int, d: int, sign: int) -> list[Fraction]:
    """prod_{m<=2d}(2h + sign m) / prod_{m<=d}(h + sign m)^{n+2} in h mod h^{n+1}."""
    num = [Fraction(1)]
    for m in range(1, 2 * d + 1):
        num = series.mul(num, [Fraction(sign * m), Fraction(2)], n)
    den = [Fraction(1)]
    for m in range(1, d + 1):
        den = series.mul(den, series.power([Fraction(sign * m), Fraction(1)], n + 2, n), n)
    return series.div(num, den, n)


def _logseries(X: QuadricSpace, dmax: int, sign: int) -> LogSeries:
    if dmax < 0:
        raise ValueError("D_max must be non-negative")
    terms = tuple(CohClass(tuple(series.trunc(_ratio_series(X.n, d, sign), X.n)), 0)
                  for d in range(dmax + 1))
    return LogSeries(X.n, sign * X.n, terms, dmax)


def j_function(X: QuadricSpace, dmax: int = DEFAULT_DMAX) -> LogSeries:
    """Givental's J-function with prefactor t^{nh}."""
    return _logseries(X, dmax, +1)


def p_function(X: QuadricSpace, dmax: int = DEFAULT_DMAX) -> LogSeries:
    """The P-function pairing flat sections against the unit; prefactor t^{-nh}."""
    return _logseries(X, dmax, -1)


# ---------------------------------------------------------------- flat sections

def pairing_with_p(gamma: CohClass, X: QuadricSpace, dmax: int = DEFAULT_DMAX) -> ZSeries:
    """f_0(z) = 1/2 int gamma cup P(1/z) as a z-series.

    With t = 1/z the prefactor t^{-nh} becomes e^{n h log z}.
    """
    _same(gamma, gamma, X)
    P = p_function(X, dmax)
    out = {}
    for d, A in enumerate(P.terms):
        gA = cup(gamma, A, X)
        hj = CohClass((1,) + (0,) * X.n, 0)
        for j in range(X.n + 1):
            val = pairing(hj, gA, X) * Fraction(X.n ** j, 2 * factorial(j))
            if val:
                out[(Fraction(-X.n * d), j)] = val
            hj = cup(hj, basis_class(X, "h1"), X)
    return ZSeries.from_dict(out)


@dataclass(frozen=True)
class FlatSection:
    """Components of Z(gamma) = sum_i f_i z^{i - n/2} h^{n-i} + f_p p."""

    X: QuadricSpace
    f0: ZSeries
    f_prim: object
    components: tuple
    cutoff: int

    def assembled(self) -> ZSeries:
        X = self.X
        half = Fraction(X.n, 2)
        acc = ZSeries()
        for i, fi in enumerate(self.components):
            e = basis_class(X, f"h{X.n - i}")
            acc = acc + fi.shift(i - half).map(lambda c, e=e: e.scale(c))
        if X.even and self.f_prim:
            acc = acc + ZSeries.from_dict({(Fraction(0), 0): basis_class(X, "p", self.f_prim)})
        return acc

    def reliable_from(self) -> Fraction:
        """Exponents at or above this value are free of truncation effects."""
        return Fraction(self.X.n, 2) - self.X.n * self.cutoff


def flat_section_from_class(gamma: CohClass, X: QuadricSpace, dmax: int = DEFAULT_DMAX) -> FlatSection:
    n = X.n
    f0 = pairing_with_p(gamma, X, dmax)
    fp = pairing(gamma, basis_class(X, "p"), X) * Fraction(1, 2) if X.even else 0
    comps = []
    Df = f0
    for i in range(n):
        comps.append(Df.scale(Fraction(1, n ** i)))
        Df = Df.zdz()
    comps.append(Df.scale(Fraction(1, n ** n)) - f0.shift(-n).scale(2))
    return FlatSection(X, f0, fp, tuple(comps), dmax)


def quantum_ode_residual(f0: ZSeries, X: QuadricSpace, cutoff: int | None = None) -> ZSeries:
    """{(z d_z)^{n+1} - n^n z^{-n} [4 z d_z - 2n]} f0.

    With ``cutoff`` set, terms beyond z^{-n cutoff} (where the truncated input
    is incomplete) are dropped.
    """
    n = X.n
    lhs = f0.zdz_power(n + 1)
    rhs = (f0.zdz().scale(4) - f0.scale(2 * n)).shift(-n).scale(n ** n)
    res = lhs - rhs
    if cutoff is not None:
        res = res.restrict(Fraction(-n * cutoff))
    return res


def nabla_residual(section: FlatSection, product: Callable | None = None) -> ZSeries:
    """(z d_z - (c_1 o)/z + mu) applied to the assembled section.

    ``product`` overrides the quantum product (used to test the gate itself).
    """
    X = section.X
    F = section.assembled()
    c1 = basis_class(X, "h1", X.n)
    prod = product or small_product
    res = F.zdz() - F.map(lambda c: prod(c1, c, X)).shift(-1) + F.map(lambda c: grading_mu(c, X))
    return res.restrict(section.reliable_from())


@dataclass
class OddGateReport:
    n: int
    ode_ok: bool
    nabla_ok: bool
    failures: list = field(default_factory=list)

    @property
    def supported(self) -> bool:
        return self.ode_ok and self.nabla_ok

    def to_json(self) -> dict:
        return {"n": self.n, "ode_ok": self.ode_ok, "nabla_ok": self.nabla_ok,
                "status": "supported" if self.supported else "unsupported",
                "failures": self.failures}


def odd_case_gate(X: QuadricSpace, dmax: int = DEFAULT_DMAX,
                  product: Callable | None = None) -> OddGateReport:
    """Check the extended product law on an odd quadric against P.

    P comes from the J-function alone, so flatness of the sections built
    from its pairings is an independent test of the product.
    """
    if X.even:
        raise ValueError("the gate is meant for odd quadrics")
    rep = OddGateReport(X.n, True, True)
    for lab in X.labels():
        sec = flat_section_from_class(basis_class(X, lab), X, dmax)
        if not quantum_ode_residual(sec.f0, X, dmax).is_zero():
            rep.ode_ok = False
            rep.failures.append(f"ode:{lab}")
        if not nabla_residual(sec, product).is_zero():
            rep.nabla_ok = False
            rep.failures.append(f"nabla:{lab}")
    return rep


def k_framing_class(V, X: QuadricSpace, precision: int = 128, eps: int = 1) -> CohClass:
    """Gamma-hat cup Ch(V); its cohomology framing times (2 pi)^{-n/2} is Z^K(V)."""
    from qqh.charclasses import gamma_Ch

    return gamma_Ch(V, X, precision, eps).cls
