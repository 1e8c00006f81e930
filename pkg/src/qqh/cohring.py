"""Cohomology ring of a smooth quadric Q_n.

The basis is h^0, ..., h^n, plus the primitive middle class p when n is even.
The primitive class is normalized by p.p = h^n and <p, p> = 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class QuadricSpace:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"quadric dimension must be an integer >= 1, got {self.n!r}")

    @property
    def even(self) -> bool:
        return self.n % 2 == 0

    @property
    def parity(self) -> str:
        return "even" if self.even else "odd"

    @property
    def N(self) -> int:
        """Half the dimension (only meaningful for even n)."""
        return self.n // 2

    @property
    def basis_size(self) -> int:
        return self.n + 2 if self.even else self.n + 1

    @property
    def fano_index(self) -> int:
        return self.n

    def labels(self) -> list[str]:
        out = [f"h{i}" for i in range(self.n + 1)]
        if self.even:
            out.append("p")
        return out

    def degree(self, index: int) -> Fraction:
        """Complex degree of the basis element with the given index."""
        if index <= self.n:
            return Fraction(index)
        return Fraction(self.n, 2)


@dataclass(frozen=True)
class CohClass:
    """Coordinates over the basis h^0..h^n (and p); coefficients may be any
    commutative ring elements that mix with ints."""

    ambient: tuple
    primitive: object = 0

    def __post_init__(self):
        object.__setattr__(self, "ambient", tuple(self.ambient))

    @property
    def n(self) -> int:
        return len(self.ambient) - 1

    def coords(self, X: QuadricSpace | None = None) -> list:
        out = list(self.ambient)
        if (X is None and self.n % 2 == 0) or (X is not None and X.even):
            out.append(self.primitive)
        return out

    def __add__(self, other: "CohClass") -> "CohClass":
        _same(self, other)
        return CohClass(tuple(a + b for a, b in zip(self.ambient, other.ambient)),
                        self.primitive + other.primitive)

    def __sub__(self, other: "CohClass") -> "CohClass":
        _same(self, other)
        return CohClass(tuple(a - b for a, b in zip(self.ambient, other.ambient)),
                        self.primitive - other.primitive)

    def __neg__(self) -> "CohClass":
        return CohClass(tuple(-a for a in self.ambient), -self.primitive)

    def scale(self, c) -> "CohClass":
        return CohClass(tuple(c * a for a in self.ambient), c * self.primitive)

    def __mul__(self, c) -> "CohClass":
        if isinstance(c, CohClass):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def map(self, f) -> "CohClass":
        return CohClass(tuple(f(a) for a in self.ambient), f(self.primitive))

    def is_zero(self) -> bool:
        return not any(self.ambient) and not self.primitive

    def __getitem__(self, label: str):
        if label == "p":
            return self.primitive
        return self.ambient[int(label[1:])]

    def to_json(self) -> dict:
        return {"ambient": [_num_str(a) for a in self.ambient],
                "primitive": _num_str(self.primitive)}

    @classmethod
    def from_json(cls, obj: dict) -> "CohClass":
        return cls(tuple(Fraction(a) for a in obj["ambient"]), Fraction(obj["primitive"]))


def _num_str(a) -> str:
    if isinstance(a, (int, Fraction)):
        return str(Fraction(a))
    return str(a)


def _same(a: CohClass, b: CohClass, X: QuadricSpace | None = None) -> None:
    if len(a.ambient) != len(b.ambient):
        raise DimensionMismatch(f"classes live on Q_{a.n} and Q_{b.n}")
    if X is not None and a.n != X.n:
        raise DimensionMismatch(f"class lives on Q_{a.n}, space is Q_{X.n}")


def zero(X: QuadricSpace) -> CohClass:
    return CohClass((0,) * (X.n + 1), 0)


def basis_class(X: QuadricSpace, label: str | int, coeff=1) -> CohClass:
    """Basis element by label ('h3', 'p') or by index (n+1 means p)."""
    if isinstance(label, int):
        label = "p" if label == X.n + 1 else f"h{label}"
    if label == "p":
        if not X.even:
            raise ValueError("odd quadrics have no primitive class")
        return CohClass((0,) * (X.n + 1), coeff)
    if not label.startswith("h") or not label[1:].isdigit():
        raise ValueError(f"bad basis label {label!r}")
    i = int(label[1:])
    if i > X.n:
        raise ValueError(f"h^{i} exceeds dimension {X.n}")
    amb = [0] * (X.n + 1)
    amb[i] = coeff
    return CohClass(tuple(amb), 0)


def basis(X: QuadricSpace) -> list[CohClass]:
    return [basis_class(X, lab) for lab in X.labels()]


def from_coords(X: QuadricSpace, coords: Sequence) -> CohClass:
    coords = list(coords)
    if len(coords) != X.basis_size:
        raise DimensionMismatch("coordinate vector has wrong length")
    return CohClass(tuple(coords[: X.n + 1]), coords[X.n + 1] if X.even else 0)


def cup(a: CohClass, b: CohClass, X: QuadricSpace) -> CohClass:
    _same(a, b, X)
    n = X.n
    amb = [0] * (n + 1)
    for i, x in enumerate(a.ambient):
        if not x:
            continue
        for j, y in enumerate(b.ambient):
            if y and i + j <= n:
                amb[i + j] = amb[i + j] + x * y
    prim = 0
    if X.even:
        # h^0 . p and p . p are the only surviving products involving p
        prim = a.ambient[0] * b.primitive + a.primitive * b.ambient[0]
        amb[n] = amb[n] + a.primitive * b.primitive
    return CohClass(tuple(amb), prim)


def integrate(a: CohClass, X: QuadricSpace) -> object:
    """The top coefficient times deg Q = 2."""
    return 2 * a.ambient[X.n]


def pairing(a: CohClass, b: CohClass, X: QuadricSpace):
    return integrate(cup(a, b, X), X)


def grading_mu(a: CohClass, X: QuadricSpace) -> CohClass:
    _same(a, a, X)
    return CohClass(tuple(Fraction(2 * i - X.n, 2) * x for i, x in enumerate(a.ambient)),
                    0 * a.primitive)


def c1_cup(a: CohClass, X: QuadricSpace) -> CohClass:
    return cup(basis_class(X, "h1", X.n), a, X)


def pairing_matrix(X: QuadricSpace) -> list[list[Fraction]]:
    B = basis(X)
    return [[Fraction(pairing(a, b, X)) for b in B] for a in B]


def inverse_pairing(X: QuadricSpace) -> dict[tuple[int, int], Fraction]:
    """Nonzero entries g^{ab} of the inverse pairing, keyed by basis indices."""
    n = X.n
    out = {(i, n - i): Fraction(1, 2) for i in range(n + 1)}
    if X.even:
        out[(n + 1, n + 1)] = Fraction(1, 2)
    return out


def dual_index(X: QuadricSpace, i: int) -> int:
    return i if i == X.n + 1 else X.n - i


def total(classes: Iterable[CohClass]) -> CohClass:
    it = iter(classes)
    acc = next(it)
    for c in it:
        acc = acc + c
    return acc
