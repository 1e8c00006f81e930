"""Characteristic classes on quadrics.

Chern characters of line bundles and spinor bundles, the Todd and Gamma
classes, the modified Chern character Ch and Euler pairings by
Riemann-Roch.  Everything that should be rational (ch, Td, chi) is computed
over Fraction / GaussianRational; Gamma and Ch use mpmath at a chosen
precision.

Primitive-class convention: on Q_{2N} write e, e' for the two ruling
classes of middle degree.  Then (e - e')^2 = (-1)^N h^n, so with p^2 = h^n
we set e - e' = eps * p for N even and eps * i * p for N odd.  The sign eps
(default +1) decides which spinor bundle is called S'.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

import mpmath

from qqh import series
from qqh.cohring import CohClass, QuadricSpace, _same, cup, integrate
from qqh.numbers import GaussianRational, I, mpq


@dataclass(frozen=True)
class CharSeries:
    """A class in H*(Q) with either exact or floating coordinates."""

    X: QuadricSpace
    cls: CohClass
    precision: int | None = None  # bits, None when exact

    @property
    def exact(self) -> bool:
        return self.precision is None

    def degree_part(self, p: int) -> CohClass:
        """The H^{2p} component."""
        n = self.X.n
        amb = [0] * (n + 1)
        amb[p] = self.cls.ambient[p]
        prim = self.cls.primitive if (self.X.even and p == n // 2) else 0
        return CohClass(tuple(amb), prim)

    def to_json(self) -> dict:
        return {"n": self.X.n, "ch": self.cls.to_json(), "precision_bits": self.precision}


# ---------------------------------------------------------------- helpers

def _from_series(X: QuadricSpace, coeffs: Sequence, prim=0) -> CohClass:
    coeffs = series.trunc(coeffs, X.n)
    return CohClass(tuple(coeffs), prim)


def _half_plus_exp_inverse(order: int) -> list[Fraction]:
    """Coefficients of 1/(1 + e^x)."""
    one_plus = series.taylor_exp_coeffs(order)
    one_plus[0] += 1
    return series.inv(one_plus, order)


def _todd_factor(order: int) -> list[Fraction]:
    """x / (1 - e^{-x})."""
    # (1 - e^{-x})/x = sum (-1)^j x^j / (j+1)!
    q = [Fraction((-1) ** j, factorial(j + 1)) for j in range(order + 1)]
    return series.inv(q, order)


def _cup_power_exp(x: CohClass, X: QuadricSpace) -> CohClass:
    """exp of a class with vanishing h^0 part (nilpotent, so finite)."""
    if x.ambient[0]:
        raise ValueError("exp needs a nilpotent class")
    out = CohClass((1,) + (0,) * X.n, 0)
    term = out
    for j in range(1, X.n + 1):
        term = cup(term, x, X).scale(Fraction(1, j))
        if term.is_zero():
            break
        out = out + term
    return out


def cup_series(a: CharSeries, b: CharSeries) -> CharSeries:
    _same(a.cls, b.cls, a.X)
    prec = a.precision if b.precision is None else (
        b.precision if a.precision is None else min(a.precision, b.precision))
    if prec is None:
        return CharSeries(a.X, cup(a.cls, b.cls, a.X))
    with mpmath.workprec(prec):
        return CharSeries(a.X, cup(a.cls, b.cls, a.X), prec)


def exp_h(X: QuadricSpace, k) -> CohClass:
    """ch(O(k)) = e^{kh}."""
    return _from_series(X, series.exp_linear(Fraction(k), X.n))


# ---------------------------------------------------------------- spinors

def primitive_difference(X: QuadricSpace, eps: int = 1):
    """Coordinate of e - e' along p."""
    if not X.even:
        raise ValueError("only even quadrics carry two spinor bundles")
    if eps not in (1, -1):
        raise ValueError("convention flag must be +1 or -1")
    return Fraction(eps) if X.N % 2 == 0 else I * eps


def spinor_ch(X: QuadricSpace, eps: int = 1):
    """ch(S) for odd n, or the pair (ch S', ch S'') for even n."""
    n = X.n
    base = _half_plus_exp_inverse(n)
    if not X.even:
        k = (n - 1) // 2
        return CharSeries(X, _from_series(X, [c * 2 ** (k + 1) for c in base]))
    k = n // 2
    amb = [c * 2 ** k for c in base]
    half = primitive_difference(X, eps) * Fraction(1, 2)
    return (CharSeries(X, _from_series(X, amb, half)),
            CharSeries(X, _from_series(X, amb, -half)))


def spinor_rank(X: QuadricSpace) -> int:
    return 2 ** ((X.n - 1) // 2) if not X.even else 2 ** (X.n // 2 - 1)


def spinor_pm_ch(X: QuadricSpace, sign: int) -> CharSeries:
    """ch(S_+) or ch(S_-), normalised so that Ch has p-part +-(2 pi)^N / 2."""
    if not X.even:
        raise ValueError("S_+ and S_- live on even quadrics")
    N = X.N
    amb = [c * 2 ** N for c in _half_plus_exp_inverse(X.n)]
    # Ch_N = (2 pi i)^N ch_N, so ch's p-part is i^{-N}/2
    prim = GaussianRational(0, -1) ** N * Fraction(sign, 2)
    return CharSeries(X, _from_series(X, amb, prim))


# ---------------------------------------------------------------- descriptors

_DESC = re.compile(r"^(O|S''|S'|S\+|S-|S)(?:\((-?\d+)\))?(\^v)?(?:\((-?\d+)\))?$")


@dataclass(frozen=True)
class BundleDescriptor:
    """A line bundle or spinor bundle, optionally dualised and then twisted.

    Text form: ``O(3)``, ``S``, ``S'``, ``S''``, ``S+``, ``S-``, a trailing
    ``^v`` for the dual and ``(k)`` for a twist, e.g. ``S'^v(1)``.
    """

    kind: str
    twist: int = 0
    dual: bool = False

    @classmethod
    def parse(cls, text: str) -> "BundleDescriptor":
        m = _DESC.match(text.replace(" ", ""))
        if not m:
            raise ValueError(f"cannot parse bundle {text!r}")
        kind, t1, dual, t2 = m.groups()
        if kind == "O":
            # O(k)^v(j) is O(j - k)
            k = int(t1 or 0)
            return cls("O", (-k if dual else k) + int(t2 or 0))
        if t1 is not None and dual:
            raise ValueError("write twists of spinor bundles after the dual marker")
        return cls(kind, int(t1 or t2 or 0), bool(dual))

    def __str__(self) -> str:
        s = self.kind
        if self.kind == "O":
            return f"O({self.twist})" if self.twist else "O"
        if self.dual:
            s += "^v"
        if self.twist:
            s += f"({self.twist})"
        return s

    def rank(self, X: QuadricSpace) -> int:
        if self.kind == "O":
            return 1
        if self.kind in ("S+", "S-"):
            return 2 ** (X.N - 1) if X.N else 1
        return spinor_rank(X)

    def dualised(self) -> "BundleDescriptor":
        # (V(t))^v = V^v(-t)
        if self.kind == "O":
            return BundleDescriptor("O", -self.twist)
        return BundleDescriptor(self.kind, -self.twist, not self.dual)


def _as_descriptor(V) -> BundleDescriptor:
    return V if isinstance(V, BundleDescriptor) else BundleDescriptor.parse(V)


def dual_ch(c: CharSeries) -> CharSeries:
    """ch(V^v): degree-p part times (-1)^p."""
    X = c.X
    amb = tuple(a if p % 2 == 0 else -a for p, a in enumerate(c.cls.ambient))
    prim = c.cls.primitive if X.N % 2 == 0 else -c.cls.primitive
    return CharSeries(X, CohClass(amb, prim), c.precision)


def twist_ch(c: CharSeries, k: int) -> CharSeries:
    if not k:
        return c
    return CharSeries(c.X, cup(c.cls, exp_h(c.X, k), c.X), c.precision)


def _base_ch(kind: str, X: QuadricSpace, eps: int) -> CharSeries:
    if kind == "O":
        return CharSeries(X, exp_h(X, 0))
    if kind == "S":
        if X.even:
            raise ValueError("use S' / S'' (or S+ / S-) on even quadrics")
        return spinor_ch(X)
    if not X.even:
        raise ValueError(f"{kind} exists only on even quadrics")
    if kind in ("S'", "S''"):
        return spinor_ch(X, eps)[0 if kind == "S'" else 1]
    return spinor_pm_ch(X, 1 if kind == "S+" else -1)


def chern_character(V, X: QuadricSpace, eps: int = 1) -> CharSeries:
    """Exact ch of a descriptor."""
    V = _as_descriptor(V)
    c = _base_ch(V.kind, X, eps)
    if V.dual:
        c = dual_ch(c)
    return twist_ch(c, V.twist)


def duality_table(V, X: QuadricSpace, eps: int = 1) -> BundleDescriptor:
    """The spinor dual expressed as a twist of a spinor bundle."""
    V = _as_descriptor(V)
    if V.kind == "S":
        return BundleDescriptor("S", 1 - V.twist)
    if V.kind in ("S'", "S''"):
        if X.N % 2 == 0:
            return BundleDescriptor(V.kind, 1 - V.twist)
        return BundleDescriptor("S''" if V.kind == "S'" else "S'", 1 - V.twist)
    raise ValueError(f"no table entry for {V}")


# ---------------------------------------------------------------- Chern classes

def chern_classes_from_ch(ch: CharSeries, rank: int) -> list[CohClass]:
    """[c_0, c_1, ..., c_n] via c = exp(sum (-1)^{p-1} (p-1)! ch_p)."""
    X = ch.X
    if ch.cls.ambient[0] != rank:
        raise ValueError(f"ch has rank {ch.cls.ambient[0]}, expected {rank}")
    log_c = CohClass((0,) * (X.n + 1), 0)
    for p in range(1, X.n + 1):
        part = ch.degree_part(p)
        if not part.is_zero():
            log_c = log_c + part.scale((-1) ** (p - 1) * factorial(p - 1))
    total = _cup_power_exp(log_c, X)
    return [CharSeries(X, total).degree_part(p) for p in range(X.n + 1)]


def ck_difference_check(X: QuadricSpace, eps: int = 1) -> bool:
    """(-1)^{k-1}(c_k(S') - c_k(S''))/(k-1)! equals e - e' on Q_{2k}."""
    k = X.N
    chp, chpp = spinor_ch(X, eps)
    r = spinor_rank(X)
    diff = chern_classes_from_ch(chp, r)[k] - chern_classes_from_ch(chpp, r)[k]
    lhs = diff.scale(Fraction((-1) ** (k - 1), factorial(k - 1)))
    target = CohClass((0,) * (X.n + 1), primitive_difference(X, eps))
    return lhs == target


# ---------------------------------------------------------------- Todd, Gamma

def todd(X: QuadricSpace) -> CharSeries:
    n = X.n
    one_plus_emh = series.compose_neg(series.taylor_exp_coeffs(n))
    one_plus_emh[0] += 1
    front = series.scale(one_plus_emh, Fraction(1, 2))
    td = series.mul(front, series.power(_todd_factor(n), n + 1, n), n)
    return CharSeries(X, _from_series(X, td))


@lru_cache(maxsize=None)
def loggamma_coefficients(order: int, bits: int) -> tuple:
    """Taylor coefficients of log Gamma(1+x): -gamma x + sum (-1)^j zeta(j) x^j / j."""
    with mpmath.workprec(bits):
        out = [mpmath.mpf(0)] * (order + 1)
        if order >= 1:
            out[1] = -+mpmath.euler
        for j in range(2, order + 1):
            out[j] = (-1) ** j * mpmath.zeta(j) / j
    return tuple(out)


def gamma_class(X: QuadricSpace, precision: int = 128) -> CharSeries:
    """Gamma(1+h)^{n+2} / Gamma(1+2h)."""
    if precision < 64:
        raise ValueError("gamma_class wants at least 64 bits")
    n = X.n
    L = loggamma_coefficients(n, precision)
    with mpmath.workprec(precision):
        log_g = [(n + 2) * L[j] - (2 ** j) * L[j] for j in range(n + 1)]
        log_g[0] = mpmath.mpf(0)
        g = series.exp(log_g, n)
        g[0] = mpmath.mpf(1)
    return CharSeries(X, _from_series(X, g), precision)


def modified_Ch(V, X: QuadricSpace, precision: int = 128, eps: int = 1) -> CharSeries:
    """Ch(V) = sum (2 pi i)^p ch_p(V)."""
    c = chern_character(V, X, eps).cls
    with mpmath.workprec(precision):
        tpi = 2j * mpmath.pi
        amb = tuple(mpq(a) * tpi ** p for p, a in enumerate(c.ambient))
        prim = mpq(c.primitive) * tpi ** X.N if X.even else mpmath.mpf(0)
    return CharSeries(X, CohClass(amb, prim), precision)


def gamma_Ch(V, X: QuadricSpace, precision: int = 128, eps: int = 1) -> CharSeries:
    """Gamma-hat cup Ch(V), the input of the K-group framing."""
    return cup_series(gamma_class(X, precision), modified_Ch(V, X, precision, eps))


# ---------------------------------------------------------------- Riemann-Roch

def _ch_sum(Vs, X: QuadricSpace, eps: int, dual: bool) -> CohClass:
    if isinstance(Vs, (str, BundleDescriptor)):
        Vs = [Vs]
    acc = None
    for V in Vs:
        c = chern_character(V, X, eps)
        if dual:
            c = dual_ch(c)
        acc = c.cls if acc is None else acc + c.cls
    return acc


def euler_pairing(V, W, X: QuadricSpace, eps: int = 1):
    """chi(V, W) = int Td ch(V^v) ch(W); V and W may be lists (direct sums)."""
    a = _ch_sum(V, X, eps, dual=True)
    b = _ch_sum(W, X, eps, dual=False)
    val = integrate(cup(todd(X).cls, cup(a, b, X), X), X)
    if isinstance(val, GaussianRational) and val.im == 0:
        return val.re
    return val


def euler_characteristic(V, X: QuadricSpace, eps: int = 1):
    return euler_pairing("O", V, X, eps)


def residue_cross_check(n: int, bits: int = 128) -> float:
    """Solve Res_{x=0} f(x)/(1-e^{-x})^k = delta_{k,1} for the coefficients of
    A(x) = f(x) * 2/(1+e^{-x}) and return the max deviation from 2/(1+e^x).

    The linear system is triangular; we solve it with floating LU so that the
    closed form is reproduced independently of the exact series code.
    """
    K = n + 1
    with mpmath.workprec(bits):
        half_front = [mpmath.mpf((-1) ** j) / mpmath.factorial(j) / 2 for j in range(K)]
        half_front[0] += mpmath.mpf(1) / 2
        q = [mpmath.mpf((-1) ** j) / mpmath.factorial(j + 1) for j in range(K)]
        todd_factor = series.inv(q, K - 1)
        M = mpmath.zeros(K, K)
        rhs = mpmath.zeros(K, 1)
        for k in range(1, K + 1):
            w = series.mul(half_front, series.power(todd_factor, k, K - 1), K - 1)
            for j in range(k):
                M[k - 1, j] = w[k - 1 - j]
            rhs[k - 1] = 1 if k == 1 else 0
        sol = mpmath.lu_solve(M, rhs)
        ref = _half_plus_exp_inverse(K - 1)
        return float(max(abs(sol[j] - 2 * mpq(ref[j])) for j in range(K)))


def riemann_roch_suite(max_n: int = 12, eps: int = 1) -> dict:
    """Exact chi values used by the acceptance suite."""
    out: dict = {"spinor_vanishing": {}, "self": {}, "cross": {}, "structure_sheaf": {}}
    for n in range(1, max_n + 1):
        X = QuadricSpace(n)
        out["structure_sheaf"][n] = euler_pairing("O", "O", X, eps)
        names = ["S'", "S''"] if X.even else ["S"]
        out["spinor_vanishing"][n] = [euler_characteristic(s, X, eps) for s in names]
        if X.even:
            out["self"][n] = (euler_pairing("S'", "S'", X, eps), euler_pairing("S''", "S''", X, eps))
            out["cross"][n] = (euler_pairing("S'", "S''", X, eps), euler_pairing("S''", "S'", X, eps))
    return out
