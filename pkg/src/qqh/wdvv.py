"""Genus-zero primary Gromov-Witten invariants of quadrics by WDVV.

A key is (m, exps): m primitive insertions and a descending tuple of ambient
exponents.  Insertion lists elsewhere use basis indices 0..n for h^i and
n+1 for the primitive class p.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from qqh.cohring import QuadricSpace, basis_class
from qqh.quantum import basis_product, three_point_lemma
from qqh.cohring import pairing


# ---------------------------------------------------------------- keys

@dataclass(frozen=True, order=True)
class GWKey:
    m_prim: int
    ambient_exps: tuple

    def __post_init__(self):
        object.__setattr__(self, "ambient_exps", tuple(sorted(self.ambient_exps, reverse=True)))

    @property
    def npoints(self) -> int:
        return self.m_prim + len(self.ambient_exps)

    def total_degree(self, X: QuadricSpace) -> Fraction:
        return Fraction(self.m_prim * X.n, 2) + sum(self.ambient_exps)

    def encode(self, d) -> str:
        return f"{self.m_prim}|{','.join(map(str, self.ambient_exps))}|{d}"

    @staticmethod
    def decode(s: str) -> tuple["GWKey", int]:
        m, e, d = s.split("|")
        exps = tuple(int(x) for x in e.split(",")) if e else ()
        return GWKey(int(m), exps), int(d)

    @staticmethod
    def from_indices(indices: Iterable[int], X: QuadricSpace) -> "GWKey":
        m, exps = 0, []
        for i in indices:
            if i == X.n + 1:
                m += 1
            else:
                exps.append(i)
        return GWKey(m, tuple(exps))

    def indices(self, X: QuadricSpace) -> list[int]:
        return [X.n + 1] * self.m_prim + list(self.ambient_exps)

    def remove(self, exp: int) -> "GWKey":
        e = list(self.ambient_exps)
        e.remove(exp)
        return GWKey(self.m_prim, tuple(e))


def degree_from_dimension(key: GWKey, X: QuadricSpace):
    """Curve degree d >= 0 forced by the dimension constraint, or None."""
    if key.m_prim and not X.even:
        return None
    num = key.total_degree(X) - (X.n - 3 + key.npoints)
    if num < 0 or num.denominator != 1 or int(num) % X.n:
        return None
    return int(num) // X.n


def D_exponent(k, npts: int, X: QuadricSpace) -> Fraction:
    """D(k, npts) = (k - n + 3 - npts)/n."""
    return Fraction(k - X.n + 3 - npts, X.n)


# ---------------------------------------------------------------- table

PROVENANCE = ("seed", "vanishing", "divisor", "recursion")


@dataclass
class InvariantTable:
    n: int
    values: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    frozen: bool = False
    warnings: list = field(default_factory=list)

    def store(self, key: GWKey, value: Fraction, tag: str) -> None:
        if self.frozen:
            raise RuntimeError("table is frozen")
        self.values[key] = value
        self.provenance[key] = tag
        if value.denominator != 1:
            self.warnings.append(f"non-integer invariant {key}: {value}")

    def freeze(self) -> "InvariantTable":
        self.frozen = True
        return self

    def __contains__(self, key):
        return key in self.values

    def __len__(self):
        return len(self.values)

    def items(self):
        return self.values.items()


# ---------------------------------------------------------------- engine

class WDVVEngine:
    """Recursive evaluator writing into an ``InvariantTable``."""

    def __init__(self, X: QuadricSpace, table: InvariantTable | None = None):
        if X.n < 2:
            raise ValueError("WDVV engine needs n >= 2")
        self.X = X
        self.table = table if table is not None else InvariantTable(X.n)
        if self.table.n != X.n:
            raise ValueError("table dimension mismatch")
        self.P = X.n + 1
        self.ginv = [(a, X.n - a) for a in range(X.n + 1)]
        if X.even:
            self.ginv.append((self.P, self.P))

    # -- dispatch

    def invariant(self, key: GWKey) -> Fraction:
        X = self.X
        if key.npoints < 3:
            return Fraction(0)
        d = degree_from_dimension(key, X)
        if d is None:
            return Fraction(0)
        if key in self.table.values:
            return self.table.values[key]
        if key.m_prim % 2:
            val, tag = Fraction(0), "vanishing"
        elif key.npoints == 3:
            val, tag = self.three_point_value(key), "seed"
        elif 0 in key.ambient_exps:
            val, tag = Fraction(0), "vanishing"
        elif 1 in key.ambient_exps:
            val, tag = d * self.invariant(key.remove(1)), "divisor"
        elif d == 0:
            val, tag = Fraction(0), "vanishing"
        elif key.m_prim == 0:
            val, tag = self.ambient_reconstruct(key.ambient_exps), "recursion"
        elif not key.ambient_exps:
            val, tag = Fraction(0), "vanishing"
        else:
            l = key.ambient_exps[0]
            val, tag = self.primitive_recursion(key.m_prim // 2, key.remove(l).ambient_exps, l), "recursion"
        self.table.store(key, val, tag)
        return val

    def corr(self, indices: Sequence[int]) -> Fraction:
        return self.invariant(GWKey.from_indices(indices, self.X))

    def three_point_value(self, key: GWKey) -> Fraction:
        i, j, k = key.indices(self.X)
        if self.X.even:
            return three_point_lemma(i, j, k, self.X)
        return Fraction(pairing(basis_product(i, j, self.X), basis_class(self.X, k), self.X))

    # -- helpers

    def _insert_product(self, fixed: list[int], i: int, j: int) -> Fraction:
        """Correlator with the class h_i o h_j inserted (expanded in the basis)."""
        prod = basis_product(i, j, self.X).coords(self.X)
        total = Fraction(0)
        for idx, c in enumerate(prod):
            if c:
                total += c * self.corr(fixed + [idx])
        return total

    @staticmethod
    def _splits(R: Sequence[int]):
        """Labeled subsets A of R (with complement B) grouped by multiset,
        yielding (A, B, multiplicity)."""
        cnt = sorted(Counter(R).items())
        ranges = [range(c + 1) for _, c in cnt]
        for choice in itertools.product(*ranges):
            A, B, w = [], [], 1
            for (x, c), a in zip(cnt, choice):
                A += [x] * a
                B += [x] * (c - a)
                w *= math.comb(c, a)
            yield A, B, w

    def _glue(self, left: list[int], right: list[int]) -> Fraction:
        """sum_{a,b} <left, a> g^{ab} <b, right>."""
        total = Fraction(0)
        for a, b in self._glue_candidates(left):
            x = self.corr(left + [a])
            if x:
                y = self.corr([b] + right)
                if y:
                    total += x * y
        return total / 2

    def _glue_candidates(self, left: list[int]):
        """Dual pairs (a, b) for which <left, a> can be nonzero."""
        X, P = self.X, self.P
        nprim = sum(1 for x in left if x == P)
        if nprim % 2:
            return [(P, P)] if X.even else []
        s = sum(x for x in left if x != P) + nprim * (X.n // 2)
        base = X.n - 3 + len(left) + 1 - s  # a = base + n d
        out = []
        for a in range(X.n + 1):
            if (a - base) % X.n == 0 and a >= base:
                out.append((a, X.n - a))
        return out

    def wdvv_side(self, x1, x2, x3, x4, R, skip=()) -> Fraction:
        """sum over A + B = R of <x1,x2,A,e> g^{ef} <f,x3,x4,B>, omitting the
        splits whose |A| is listed in ``skip`` ('empty' or 'full')."""
        total = Fraction(0)
        for A, B, w in self._splits(R):
            if "empty" in skip and not A:
                continue
            if "full" in skip and not B:
                continue
            total += w * self._glue([x1, x2] + A, [x3, x4] + B)
        return total

    # -- recursions

    def ambient_reconstruct(self, exps: Sequence[int], slots: tuple[int, int, int] | None = None) -> Fraction:
        """Invariant with ambient insertions, all exponents >= 2, via WDVV with
        (h^{a-1}, h, h^b, h^c).  ``slots`` picks positions (a, b, c) in the
        exponent list; default is the largest exponent, then the next two."""
        exps = list(exps)
        if len(exps) < 4:
            return self.corr(exps)
        if any(e < 2 for e in exps):
            raise ValueError("ambient_reconstruct expects exponents >= 2")
        ia, ib, ic = slots if slots is not None else (0, 1, 2)
        if len({ia, ib, ic}) != 3:
            raise ValueError("slots must be distinct")
        a, b, c = exps[ia], exps[ib], exps[ic]
        R = [e for k, e in enumerate(exps) if k not in (ia, ib, ic)]
        n = self.X.n
        total = Fraction(0)
        # T(a,b,c) = T(a-1, b, c+1) + E(a,b,c), unrolled until a = 1 or c = n
        seen = set()
        while True:
            if (a, c) in seen:
                raise RuntimeError("reconstruction frontier cycle")
            seen.add((a, c))
            if a == 1:
                total += self.corr([1, b, c] + R)
                break
            rhs = self.wdvv_side(a - 1, b, 1, c, R, skip=("full",))
            lhs = self.wdvv_side(a - 1, 1, b, c, R, skip=("empty",))
            # (h^{a-1} o h) - h^a is 2h^0 when a = n, else 0
            extra = 2 * self.corr([0, b, c] + R) if a == n else Fraction(0)
            total += rhs - lhs - extra
            # moved term <h^{a-1}, h^b, R, h o h^c>
            if c <= n - 2:
                a, c = a - 1, c + 1
                continue
            if c == n - 1:
                total += 2 * self.corr([a - 1, b, 0] + R)
                a, c = a - 1, n
                continue
            total += 2 * self.corr([a - 1, b, 1] + R)
            break
        return total

    def primitive_recursion(self, m: int, ambient_exps: Sequence[int], l: int,
                            split: tuple[int, int] | None = None) -> Fraction:
        """<p^{2m}, h^{k_1..k_r}, h^l> by the primitive-class WDVV recursion."""
        X = self.X
        if not X.even:
            raise ValueError("primitive recursion needs an even quadric")
        n = X.n
        if not 2 <= l <= n:
            raise ValueError(f"l = {l} outside [2, {n}]")
        if m < 1:
            raise ValueError("need m >= 1")
        if split is None:
            i = min(l - 1, n - 1)
            j = l - i
        else:
            i, j = split
        if i + j != l or not (1 <= i <= n - 1 and 1 <= j <= n - 1):
            raise ValueError(f"bad split {split} for l = {l}")
        P = self.P
        I = [P] * (2 * m - 2) + list(ambient_exps)
        total = Fraction(0)
        for A, B, w in self._splits(I):
            if B:  # S a proper subset
                total -= w * self._glue([P, P] + A, B + [i, j])
            if A and B:
                total += w * self._glue([P] + A + [i], B + [P, j])
        return total

    # -- bulk

    def build(self, max_insertions: int, include_prim: bool = True) -> InvariantTable:
        for key in enumerate_keys(self.X, max_insertions, include_prim):
            self.invariant(key)
        return self.table


def enumerate_keys(X: QuadricSpace, max_insertions: int, include_prim: bool = True) -> list[GWKey]:
    """All canonical keys with 3..max_insertions insertions and a valid degree."""
    out = []
    mmax = max_insertions if (include_prim and X.even) else 0
    for total in range(3, max_insertions + 1):
        for m in range(0, min(mmax, total) + 1):
            for exps in itertools.combinations_with_replacement(range(X.n, -1, -1), total - m):
                key = GWKey(m, exps)
                if degree_from_dimension(key, X) is not None:
                    out.append(key)
    return out


def build_table(X: QuadricSpace, max_insertions: int, table: InvariantTable | None = None) -> InvariantTable:
    return WDVVEngine(X, table).build(max_insertions)


# ---------------------------------------------------------------- consistency

@dataclass
class ConsistencyReport:
    n: int
    max_insertions: int
    checks: Counter = field(default_factory=Counter)
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {"n": self.n, "max_insertions": self.max_insertions,
                "checks": dict(self.checks), "mismatches": self.mismatches, "ok": self.ok}


def _distinct_triples(exps: Sequence[int]):
    seen = set()
    for slots in itertools.permutations(range(len(exps)), 3):
        vals = tuple(exps[k] for k in slots)
        if vals not in seen:
            seen.add(vals)
            yield slots


def consistency_report(X: QuadricSpace, max_insertions: int, table: InvariantTable | None = None,
                       channel_quadruples: int = 2) -> ConsistencyReport:
    """Cross-check a table against independent WDVV routes.

    * every admissible (i, j) split of the primitive recursion;
    * every distinct slot triple of the ambient reconstruction;
    * divisor-derived values recomputed by the primitive recursion;
    * all three WDVV channels agreeing on up to ``channel_quadruples``
      distinct 4-point choices per key (odd primitive counts included,
      which tests that monodromy vanishing is compatible with WDVV).
    """
    eng = WDVVEngine(X, table)
    eng.build(max_insertions)
    rep = ConsistencyReport(X.n, max_insertions)
    P = eng.P

    def compare(kind, key, got):
        rep.checks[kind] += 1
        want = eng.invariant(key)
        if got != want:
            rep.mismatches.append({"check": kind, "key": str(key), "table": str(want), "route": str(got)})

    for key in enumerate_keys(X, max_insertions):
        if key.npoints < 4 or degree_from_dimension(key, X) in (None, 0):
            continue
        exps = list(key.ambient_exps)
        if key.m_prim == 0 and all(e >= 2 for e in exps):
            for slots in _distinct_triples(exps):
                compare("ambient_slots", key, eng.ambient_reconstruct(exps, slots))
        if X.even and key.m_prim and key.m_prim % 2 == 0:
            for l in sorted(set(e for e in exps if e >= 2)):
                rest = list(key.remove(l).ambient_exps)
                for i in range(1, X.n):
                    j = l - i
                    if 1 <= j <= X.n - 1:
                        kind = "divisor" if 1 in rest else "primitive_split"
                        compare(kind, key, eng.primitive_recursion(key.m_prim // 2, rest, l, (i, j)))
        ind = key.indices(X)
        seen = set()
        for quad in itertools.combinations(range(len(ind)), 4):
            vals = tuple(ind[k] for k in quad)
            if vals in seen:
                continue
            seen.add(vals)
            if len(seen) > channel_quadruples:
                break
            R = [x for k, x in enumerate(ind) if k not in quad]
            a, b, c, d = vals
            s12 = eng.wdvv_side(a, b, c, d, R)
            s13 = eng.wdvv_side(a, c, b, d, R)
            s14 = eng.wdvv_side(a, d, b, c, R)
            rep.checks["channels"] += 1
            if not s12 == s13 == s14:
                rep.mismatches.append({"check": "channels", "key": str(key), "quad": list(vals),
                                       "values": [str(s12), str(s13), str(s14)]})
    # odd primitive counts: table entries must vanish and WDVV must agree
    if X.even:
        for key in enumerate_keys(X, max_insertions):
            if key.m_prim % 2:
                rep.checks["monodromy"] += 1
                if eng.invariant(key) != 0:
                    rep.mismatches.append({"check": "monodromy", "key": str(key)})
    return rep


# ---------------------------------------------------------------- growth

def catalan_factor(n: int) -> Fraction:
    """a_n = binom(2n, n)/(4n - 2)."""
    if n < 1:
        raise ValueError("catalan_factor needs n >= 1")
    return Fraction(math.comb(2 * n, n), 4 * n - 2)


@dataclass
class GrowthReport:
    C: float
    worst_key: str
    passes: dict
    constants: dict
    violations: dict

    def to_json(self) -> dict:
        return {"C": self.C, "worst_key": self.worst_key, "pass": self.passes,
                "constants": self.constants, "violations": self.violations}


def _round_up(x, digits: int = 3) -> float:
    x = mpmath.mpf(x)
    if x <= 0:
        return 0.0
    e = int(mpmath.floor(mpmath.log10(x))) - digits + 1
    q = mpmath.ceil(x / mpmath.mpf(10) ** e)
    return float(q * mpmath.mpf(10) ** e)


def _log_abs(v: Fraction):
    return mpmath.log(abs(v.numerator)) - mpmath.log(v.denominator)


def growth_bound_check(table: InvariantTable, X: QuadricSpace) -> GrowthReport:
    with mpmath.workdps(40):
        return _growth_bound_check(table, X)


def _growth_bound_check(table: InvariantTable, X: QuadricSpace) -> GrowthReport:
    """Fit C in |<...>| <= n! C^{n+D} (all entries and ambient-only entries),
    and test the primitive-class refinement
    |<p^{2m}, ...>| <= a_r r! 9^{m-1} (2C')^{r+D}, r = npts - 3, with C' fitted
    from ambient entries in the form (npts-3)! C'^{npts-3+D}."""
    entries = [(k, v) for k, v in table.items() if v]
    if not table.values:
        raise ValueError("empty table")

    def fit(items, fact_shift, exp_shift):
        best, worst = mpmath.mpf(0), None
        for key, v in items:
            npts = key.npoints
            d = degree_from_dimension(key, X)
            e = npts - exp_shift + d
            if e <= 0:
                if abs(v) > math.factorial(npts - fact_shift):
                    return mpmath.inf, key
                continue
            c = mpmath.exp((_log_abs(v) - mpmath.log(math.factorial(npts - fact_shift))) / e)
            if c > best:
                best, worst = c, key
        return best, worst

    C_all, worst = fit(entries, 0, 0)
    C_amb, _ = fit([(k, v) for k, v in entries if k.m_prim == 0], 0, 0)
    C_amb3, _ = fit([(k, v) for k, v in entries if k.m_prim == 0 and k.npoints >= 4], 3, 3)
    C = _round_up(C_all)
    Camb = _round_up(C_amb)
    C3 = _round_up(C_amb3) if C_amb3 > 0 else 1.0

    def holds(key, v, Cval, kind):
        npts = key.npoints
        d = degree_from_dimension(key, X)
        if kind == "factorial":
            bound = mpmath.log(math.factorial(npts)) + (npts + d) * mpmath.log(Cval)
        else:
            r = npts - 3
            m = key.m_prim // 2
            bound = (mpmath.log(catalan_factor(r).numerator) - mpmath.log(catalan_factor(r).denominator)
                     + mpmath.log(math.factorial(r)) + (m - 1) * mpmath.log(9)
                     + (r + d) * mpmath.log(2 * Cval))
        return _log_abs(v) <= bound + mpmath.mpf(10) ** -30

    viol = {"all": [], "ambient": [], "two_primitive": [], "primitive": []}
    for key, v in entries:
        if not holds(key, v, C, "factorial"):
            viol["all"].append(key.encode(degree_from_dimension(key, X)))
        if key.m_prim == 0 and not holds(key, v, Camb, "factorial"):
            viol["ambient"].append(key.encode(degree_from_dimension(key, X)))
        if key.m_prim >= 2 and key.npoints >= 4:
            fam = "two_primitive" if key.m_prim == 2 else "primitive"
            if not holds(key, v, C3, "catalan"):
                viol[fam].append(key.encode(degree_from_dimension(key, X)))
                if fam == "two_primitive":
                    viol["primitive"].append(key.encode(degree_from_dimension(key, X)))
    passes = {k: not v for k, v in viol.items()}
    consts = {"C_all": C, "C_ambient": Camb, "C_prime_ambient": C3}
    wk = worst.encode(degree_from_dimension(worst, X)) if worst is not None else ""
    return GrowthReport(C, wk, passes, consts, viol)


# ---------------------------------------------------------------- potential

@dataclass
class PotentialResult:
    value: object
    tail_bound: object
    rho: object
    C: float
    converges: bool
    diagnostic: str = ""


class ConvergenceError(ValueError):
    pass


def smallness(t: Sequence, X: QuadricSpace, C: float):
    """rho = sum_{i >= 1} C^{1 + (deg_i - 1)/n} |t^i| (t^0 excluded)."""
    rho = mpmath.mpf(0)
    for idx, ti in enumerate(t):
        if idx == 0 or not ti:
            continue
        deg = X.degree(idx)
        rho += mpmath.mpf(C) ** (1 + (mpmath.mpf(deg.numerator) / deg.denominator - 1) / X.n) * abs(mpmath.mpmathify(ti))
    return rho


def potential_partial_sum(t: Sequence, cutoff: int, X: QuadricSpace, table: InvariantTable | None = None,
                          C: float | None = None, strict: bool = True) -> PotentialResult:
    """Truncated genus-zero potential sum_{keys} <key> prod t^c / c! over
    insertions in t^1..t^{n+1} with at most ``cutoff`` points, plus the
    classical cubic term.  The tail bound is C^{3/n-1} rho^{K+1}/(1-rho)."""
    t = [mpmath.mpmathify(x) if not isinstance(x, Fraction) else mpmath.mpf(x.numerator) / x.denominator
         for x in t]
    if len(t) != X.basis_size:
        raise ValueError("coordinate vector has wrong length")
    eng = WDVVEngine(X, table)
    if C is None:
        eng.build(max(cutoff, 4))
        C = growth_bound_check(eng.table, X).C
    rho = smallness(t, X, C)
    if rho >= 1:
        msg = f"smallness condition violated: rho = {mpmath.nstr(rho, 8)} >= 1 for C = {C}"
        if strict:
            raise ConvergenceError(msg)
        return PotentialResult(None, mpmath.inf, rho, C, False, msg)
    # classical cubic (1/6) int t^3
    from qqh.cohring import cup, integrate, from_coords
    tc = from_coords(X, t)
    value = integrate(cup(cup(tc, tc, X), tc, X), X) / 6
    for key in enumerate_keys(X, cutoff):
        d = degree_from_dimension(key, X)
        if d == 0 or 0 in key.ambient_exps:
            continue
        v = eng.invariant(key)
        if not v:
            continue
        term = mpmath.mpf(v.numerator) / v.denominator
        cnt = Counter(key.indices(X))
        for idx, c in cnt.items():
            term *= t[idx] ** c / math.factorial(c)
        value += term
    tail = mpmath.mpf(C) ** (mpmath.mpf(3) / X.n - 1) * rho ** (cutoff + 1) / (1 - rho)
    return PotentialResult(value, tail, rho, C, True)
