"""Small quantum product at t = 0, its spectral data and the geometric
hypotheses of the Gamma-II criterion.

For odd n the same product law (with no primitive class) is used as an
extension; it is validated by the quantum ODE in ``flatsections``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath

from qqh.cohring import CohClass, QuadricSpace, _same, basis_class, from_coords, pairing, zero
from qqh.halflines import HalfLine, Modulus, PlanePoint, half_lines_intersect, same_point, sin_pi_sign
from qqh.numbers import GaussianRational, I, RootElement, mpq


# ---------------------------------------------------------------- products

def _apply_h(v: list, n: int, even: bool) -> list:
    """Coordinates of h o x for x with coordinates v."""
    zero_ = 0 * v[0]
    out = [zero_] * len(v)
    for i in range(n - 1):
        out[i + 1] = out[i + 1] + v[i]
    out[n] = out[n] + v[n - 1]
    out[0] = out[0] + 2 * v[n - 1]
    out[1] = out[1] + 2 * v[n]
    return out


def _apply_p(v: list, n: int) -> list:
    out = [0 * v[0]] * len(v)
    out[n + 1] = v[0] - 2 * v[n]
    out[n] = v[n + 1]
    out[0] = -2 * v[n + 1]
    return out


def _apply_basis(idx: int, v: list, X: QuadricSpace) -> list:
    n = X.n
    if idx == n + 1:
        return _apply_p(v, n)
    w = list(v)
    for _ in range(idx):
        w = _apply_h(w, n, X.even)
    if idx == n:
        w = [a - 2 * b for a, b in zip(w, v)]
    return w


def small_product(a: CohClass, b: CohClass, X: QuadricSpace) -> CohClass:
    _same(a, b, X)
    coords_a = a.coords(X)
    v = b.coords(X)
    acc = [0 * v[0]] * len(v)
    for idx, c in enumerate(coords_a):
        if not c:
            continue
        w = _apply_basis(idx, v, X)
        acc = [x + c * y for x, y in zip(acc, w)]
    return from_coords(X, acc)


@lru_cache(maxsize=None)
def _basis_product_table(n: int) -> tuple:
    X = QuadricSpace(n)
    size = X.basis_size
    table = []
    for i in range(size):
        row = []
        for j in range(size):
            e = [Fraction(0)] * size
            e[j] = Fraction(1)
            row.append(tuple(_apply_basis(i, e, X)))
        table.append(tuple(row))
    return tuple(table)


def basis_product(i: int, j: int, X: QuadricSpace) -> CohClass:
    return from_coords(X, _basis_product_table(X.n)[i][j])


# ---------------------------------------------------------------- 3-point data

def three_point_lemma(i: int, j: int, k: int, X: QuadricSpace) -> Fraction:
    """Closed-form table of nonzero 3-point invariants on an even quadric.
    Basis indices as in ``cohring`` (n+1 is the primitive class)."""
    if not X.even:
        raise ValueError("closed 3-point table is stated for even quadrics")
    n = X.n
    P = n + 1
    idx = sorted((i, j, k))
    prim = sum(1 for x in idx if x == P)
    if prim == 2:
        other = idx[0]
        if other == 0:
            return Fraction(2)
        if other == n:
            return Fraction(-4)
        return Fraction(0)
    if prim:
        return Fraction(0)
    s = i + j + k
    if s == n:
        return Fraction(2)
    if s == 2 * n:
        if n in idx:
            rest = [x for x in idx]
            rest.remove(n)
            if 1 <= rest[0] <= n - 1 and rest[0] + rest[1] == n:
                return Fraction(4)
            return Fraction(0)
        return Fraction(8)
    if idx == [n, n, n]:
        return Fraction(8)
    return Fraction(0)


def three_point(g1: CohClass, g2: CohClass, g3: CohClass, X: QuadricSpace) -> Fraction:
    """Trilinear 3-point invariant <g1, g2, g3> (summed over degrees)."""
    return pairing(small_product(g1, g2, X), g3, X)


# ---------------------------------------------------------------- matrices

@dataclass(frozen=True)
class QuantumMatrix:
    """Matrix of (g o) in the basis; column j is g o e_j."""

    rows: tuple

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "QuantumMatrix") -> "QuantumMatrix":
        m = self.size
        return QuantumMatrix(tuple(tuple(sum(self.rows[i][k] * other.rows[k][j] for k in range(m))
                                         for j in range(m)) for i in range(m)))

    def trace(self):
        return sum(self.rows[i][i] for i in range(self.size))

    def rank(self) -> int:
        m = [list(r) for r in self.rows]
        rank, cols = 0, self.size
        for c in range(cols):
            piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
            if piv is None:
                continue
            m[rank], m[piv] = m[piv], m[rank]
            for r in range(len(m)):
                if r != rank and m[r][c]:
                    f = m[r][c] / m[rank][c]
                    m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
            rank += 1
        return rank

    def characteristic_polynomial(self) -> list[Fraction]:
        """Coefficients [c_0, ..., c_m] of det(x - A), lowest degree first
        (Faddeev-LeVerrier)."""
        m = self.size
        A = [[Fraction(x) for x in r] for r in self.rows]
        coeffs = [Fraction(0)] * (m + 1)
        coeffs[m] = Fraction(1)
        M = [[Fraction(0)] * m for _ in range(m)]
        for k in range(1, m + 1):
            # M_k = A M_{k-1} + c_{m-k+1} I
            for i in range(m):
                M[i][i] += coeffs[m - k + 1]
            AM = [[sum(A[i][l] * M[l][j] for l in range(m)) for j in range(m)] for i in range(m)]
            coeffs[m - k] = -sum(AM[i][i] for i in range(m)) / k
            M = AM
        return coeffs


def quantum_matrix(g: CohClass, X: QuadricSpace) -> QuantumMatrix:
    cols = [small_product(g, basis_class(X, j), X).coords(X) for j in range(X.basis_size)]
    return QuantumMatrix(tuple(tuple(Fraction(cols[j][i]) for j in range(X.basis_size))
                               for i in range(X.basis_size)))


def c1_quantum_matrix(X: QuadricSpace) -> QuantumMatrix:
    return quantum_matrix(basis_class(X, "h1", X.n), X)


def expected_char_poly(X: QuadricSpace) -> list[Fraction]:
    """x^{n+2} - 4 n^n x^2 for n even."""
    n = X.n
    out = [Fraction(0)] * (n + 3)
    out[n + 2] = Fraction(1)
    out[2] = Fraction(-4 * n ** n)
    return out


# ---------------------------------------------------------------- spectrum

@dataclass(frozen=True)
class ExactEigenvalue:
    modulus: Modulus
    phase_over_pi: Fraction

    def point(self) -> PlanePoint:
        return PlanePoint(self.modulus, self.phase_over_pi)

    def to_complex(self, dps: int = 30):
        with mpmath.workdps(dps):
            return self.modulus.to_mpf() * mpmath.expjpi(mpq(self.phase_over_pi))

    def to_json(self) -> dict:
        return {"modulus": self.modulus.to_json(), "phase_over_pi": str(self.phase_over_pi)}


def T_modulus(N: int) -> Modulus:
    """T = 2N * 4^{1/2N}."""
    return Modulus(Fraction(2 * N), Fraction(4), 2 * N)


@dataclass(frozen=True)
class SpectralData:
    N: int
    eigenvalues: tuple
    labels: tuple
    kinds: tuple  # ("pm", +1|-1) or ("k", k)

    def idempotent(self, i: int, dps: int = 30) -> CohClass:
        """Numerical coordinates (mpc) of the i-th normalized idempotent."""
        kind, val = self.kinds[i]
        n = 2 * self.N
        with mpmath.workdps(dps):
            if kind == "pm":
                amb = [mpmath.mpc(0)] * (n + 1)
                amb[0] = mpmath.mpc(0, 0.5)
                amb[n] = amb[n] + mpmath.mpc(0, -0.25)
                return CohClass(tuple(amb), mpmath.mpc(val) / 2)
            k = val
            w = self.eigenvalues[i].to_complex(dps) / (2 * self.N)
            pref = (-1) ** k / mpmath.sqrt(self.N)
            amb = [pref * mpmath.mpf(1) / 2] + [pref * w ** (-p) for p in range(1, n + 1)]
            return CohClass(tuple(amb), mpmath.mpc(0))

    def to_json(self, dps: int = 20) -> list:
        out = []
        for i, (u, lab) in enumerate(zip(self.eigenvalues, self.labels)):
            v = self.idempotent(i, dps)
            out.append({"label": lab, "eigenvalue": u.to_json(),
                        "idempotent": {"ambient": [_cstr(a) for a in v.ambient],
                                       "primitive": _cstr(v.primitive)}})
        return out


def _cstr(z) -> str:
    z = mpmath.mpc(z)
    return mpmath.nstr(z, 20)


def idempotent_basis(X: QuadricSpace) -> SpectralData:
    if not X.even:
        raise ValueError("idempotent basis is implemented for even quadrics")
    N = X.N
    zero_mod = Modulus(Fraction(0), Fraction(1), 1)
    T = T_modulus(N)
    eig = [ExactEigenvalue(zero_mod, Fraction(0)), ExactEigenvalue(zero_mod, Fraction(0))]
    labels = ["S+", "S-"]
    kinds = [("pm", 1), ("pm", -1)]
    for k in range(2 * N):
        eig.append(ExactEigenvalue(T, _reduce_phase(Fraction(-k, N))))
        labels.append(f"O({k})")
        kinds.append(("k", k))
    return SpectralData(N, tuple(eig), tuple(labels), tuple(kinds))


def _reduce_phase(q: Fraction) -> Fraction:
    """Representative in (-1, 1]."""
    q = q % 2
    return q - 2 if q > 1 else q


# ---------------------------------------------------------------- exact checks

def v_pm_exact(X: QuadricSpace, sign: int) -> CohClass:
    n = X.n
    amb = [GaussianRational(0)] * (n + 1)
    amb[0] = GaussianRational(0, Fraction(1, 2))
    amb[n] = amb[n] + GaussianRational(0, Fraction(-1, 4))
    return CohClass(tuple(amb), GaussianRational(Fraction(sign, 2)))


def root_ring(X: QuadricSpace):
    """Generator w of Q(i)[w]/(w^{2N} - 4); every root is w = T zeta^{-k}/2N."""
    return RootElement.generator(X.n, 4)


def v_k_unnormalized(X: QuadricSpace) -> CohClass:
    """u = h^0/2 + sum_p w^{-p} h^p, so that v_k = ((-1)^k/sqrt N) u."""
    w = root_ring(X)
    winv = w.inverse()
    amb = [w * 0 + Fraction(1, 2)]
    cur = w * 0 + 1
    for _ in range(1, X.n + 1):
        cur = cur * winv
        amb.append(cur)
    return CohClass(tuple(amb), w * 0)


def exact_spectral_report(X: QuadricSpace) -> dict:
    """Exact symbolic verification of the idempotent identities."""
    n, N = X.n, X.N
    vp, vm = v_pm_exact(X, 1), v_pm_exact(X, -1)
    c1 = basis_class(X, "h1", n)
    zero_g = zero(X).map(GaussianRational.coerce)
    out = {}
    out["vp_vp"] = small_product(vp, vp, X) == vp.scale(2 * I)
    out["vm_vm"] = small_product(vm, vm, X) == vm.scale(2 * I)
    out["vp_vm"] = small_product(vp, vm, X) == zero_g
    out["c1_vpm"] = (small_product(c1.map(GaussianRational.coerce), vp, X) == zero_g
                     and small_product(c1.map(GaussianRational.coerce), vm, X) == zero_g)
    out["norm_vpm"] = pairing(vp, vp, X) == 1 and pairing(vm, vm, X) == 1
    out["orth_vpm"] = pairing(vp, vm, X) == 0
    w = root_ring(X)
    u = v_k_unnormalized(X)
    c1r = c1.map(lambda a: w * 0 + a)
    lam = w * (2 * N)  # T zeta^{-k}
    out["c1_vk"] = small_product(c1r, u, X) == u.scale(lam)
    # <u,u> = N gives <v_k,v_k> = 1 since ((-1)^k)^2 = 1
    out["norm_vk"] = pairing(u, u, X) == w * 0 + N
    sign_k = w ** N / 2  # (-1)^k
    out["sign_k"] = sign_k * sign_k == w * 0 + 1
    uu = small_product(u, u, X)
    # u o u = mu u with mu = 2 (read off from h^0 coefficient ratio)
    mu = uu.ambient[0] / Fraction(1, 2)
    out["vk_idempotent"] = uu == u.scale(mu)
    out["vk_idempotent_scalar"] = str(mu)
    vpr = vp.map(lambda a: w * 0 + a)
    out["vpm_vk"] = small_product(vpr, u, X) == u.scale(w * 0)
    out["orth_vpm_vk"] = pairing(vpr, u, X) == w * 0
    cp = c1_quantum_matrix(X).characteristic_polynomial()
    out["char_poly"] = cp == expected_char_poly(X)
    out["unit_coefficient_vk"] = str(pairing(basis_class(X, "h0").map(lambda a: w * 0 + a), u, X))
    out["all"] = all(v for k, v in out.items() if isinstance(v, bool))
    return out


# ---------------------------------------------------------------- phases

def difference_phases(eigenvalues: Sequence[ExactEigenvalue]) -> list[Fraction]:
    """Phases (over pi, mod 1) of all nonzero differences u_i - u_j."""
    out = set()
    for a in eigenvalues:
        for b in eigenvalues:
            ph = _difference_phase(a, b)
            if ph is not None:
                out.add(ph % 1)
    return sorted(out)


def _difference_phase(a: ExactEigenvalue, b: ExactEigenvalue):
    """Phase over pi (mod 1, i.e. up to sign) of a - b, or None if a == b."""
    if same_point(a.point(), b.point()):
        return None
    if b.modulus.is_zero():
        return a.phase_over_pi % 1
    if a.modulus.is_zero():
        return b.phase_over_pi % 1
    if a.modulus == b.modulus:
        # e^{ia} - e^{ib} = 2i sin((a-b)/2) e^{i(a+b)/2}
        return ((a.phase_over_pi + b.phase_over_pi) / 2 + Fraction(1, 2)) % 1
    raise NotImplementedError("difference of eigenvalues with distinct nonzero moduli")


@dataclass(frozen=True)
class AdmissiblePhases:
    """The admissible phases are R minus pi * (excluded + Z)."""

    excluded_over_pi: tuple

    def is_admissible(self, phi) -> bool:
        """``phi`` is a Fraction (multiple of pi) or a float in radians."""
        if isinstance(phi, (Fraction, int)):
            return Fraction(phi) % 1 not in self.excluded_over_pi
        x = (float(phi) / mpmath.pi) % 1
        return all(min(abs(x - float(e)), 1 - abs(x - float(e))) > 1e-12
                   for e in self.excluded_over_pi)


def admissible_phases(eigenvalues: Sequence[ExactEigenvalue]) -> AdmissiblePhases:
    return AdmissiblePhases(tuple(difference_phases(eigenvalues)))


def excluded_for_index(eigenvalues: Sequence[ExactEigenvalue], i: int) -> list[Fraction]:
    """R minus A_i: phases (over pi, mod 2) pointing from u_i to another u_j."""
    out = set()
    a = eigenvalues[i]
    for b in eigenvalues:
        if same_point(a.point(), b.point()):
            continue
        out.add(_direction_phase(a, b) % 2)
    return sorted(out)


def _direction_phase(a: ExactEigenvalue, b: ExactEigenvalue) -> Fraction:
    """Phase over pi (mod 2) of b - a."""
    if a.modulus.is_zero():
        return b.phase_over_pi
    if b.modulus.is_zero():
        return a.phase_over_pi + 1
    if a.modulus == b.modulus:
        # b - a = 2i sin(pi (pb-pa)/2) e^{i pi (pa+pb)/2}
        half = (b.phase_over_pi - a.phase_over_pi) / 2
        base = (a.phase_over_pi + b.phase_over_pi) / 2 + Fraction(1, 2)
        return base if sin_pi_sign(half) > 0 else base + 1
    raise NotImplementedError("direction between distinct nonzero moduli")


# ---------------------------------------------------------------- Gamma-II geometry

@dataclass
class Gamma2Report:
    descending: bool
    spread_below_2pi: bool
    disjoint: bool
    intersecting_pairs: list = field(default_factory=list)
    shared_origin_pairs: list = field(default_factory=list)
    admissible: list = field(default_factory=list)
    in_A_i: list = field(default_factory=list)
    im_order: list = field(default_factory=list)
    im_values: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.descending and self.spread_below_2pi and self.disjoint

    def to_json(self) -> dict:
        return {"descending": self.descending, "spread_below_2pi": self.spread_below_2pi,
                "disjoint": self.disjoint, "intersecting_pairs": self.intersecting_pairs,
                "shared_origin_pairs": self.shared_origin_pairs,
                "phase_admissible": self.admissible, "phase_in_A_i": self.in_A_i,
                "im_order": self.im_order,
                "im_values": [mpmath.nstr(v, 15) for v in self.im_values], "pass": self.ok}


def gamma2_hypothesis_check(spectral: SpectralData, phases: Sequence,
                            ordering_phase=None) -> Gamma2Report:
    """Exact check of: strictly descending phases with spread < 2 pi, and
    pairwise disjoint half-lines L(u_i, phi_i).  Phases are Fractions
    (multiples of pi).

    Half-lines with a common base point (the double eigenvalue 0) meet at that
    point only; such pairs are reported in ``shared_origin_pairs`` and count
    as disjoint when their open parts are disjoint.
    """
    eig = spectral.eigenvalues
    if len(phases) != len(eig):
        raise ValueError(f"expected {len(eig)} phases, got {len(phases)}")
    ph = [Fraction(p) for p in phases]
    descending = all(ph[i] > ph[i + 1] for i in range(len(ph) - 1))
    spread = (max(ph) - min(ph)) < 2
    lines = [HalfLine(u.point(), p) for u, p in zip(eig, ph)]
    bad, shared = [], []
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            res = half_lines_intersect(lines[i], lines[j])
            if res == "shared_origin":
                shared.append([i, j])
            elif res:
                bad.append([i, j])
    adm = admissible_phases(eig)
    rep = Gamma2Report(descending, spread, not bad, bad, shared)
    rep.admissible = [adm.is_admissible(p) for p in ph]
    rep.in_A_i = [p % 2 not in excluded_for_index(eig, i) for i, p in enumerate(ph)]
    # ordering Im(e^{-i phi} u_i) for an admissible phase (default: phi_1)
    phi = Fraction(ordering_phase) if ordering_phase is not None else ph[0]
    with mpmath.workdps(30):
        vals = [mpmath.im(mpmath.expjpi(-mpq(phi)) * u.to_complex(30)) for u in eig]
    rep.im_values = vals
    rep.im_order = sorted(range(len(vals)), key=lambda i: -vals[i])
    return rep


def default_phases(N: int, phi_plus: Fraction, phi_minus: Fraction) -> list[Fraction]:
    return [Fraction(phi_plus), Fraction(phi_minus)] + [Fraction(-k, N) for k in range(2 * N)]
