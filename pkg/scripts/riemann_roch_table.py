"""Euler pairings of spinor and line bundles on Q_1..Q_n.

    python3 scripts/riemann_roch_table.py --max-n 12
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

from qqh.charclasses import euler_pairing, residue_cross_check, riemann_roch_suite
from qqh.cohring import QuadricSpace


@dataclass
class Config:
    max_n: int = 12
    eps: int = 1


def main(cfg: Config) -> None:
    rr = riemann_roch_suite(cfg.max_n, cfg.eps)
    print(" n | chi(O) | chi(S..) | chi(S',S') chi(S'',S'') | chi(S',S'') chi(S'',S') | residue check")
    for n in range(1, cfg.max_n + 1):
        fmt = lambda v: " ".join(map(str, v)) if isinstance(v, (list, tuple)) else str(v)
        self_ = fmt(rr["self"].get(n, "-"))
        cross = fmt(rr["cross"].get(n, "-"))
        print(f"{n:2d} | {rr['structure_sheaf'][n]} | {fmt(rr['spinor_vanishing'][n])} | {self_} | {cross} | "
              f"{residue_cross_check(n):.1e}")
    # in this order the Gram matrix of the full collection on Q_4 is unitriangular
    X = QuadricSpace(4)
    names = ["O", "O(1)", "O(2)", "S'(3)", "S''(3)", "O(3)"]
    gram = [[euler_pairing(a, b, X, cfg.eps) for b in names] for a in names]
    print("\nGram matrix chi(E_i, E_j) on Q_4 with", names)
    for row in gram:
        print(" ".join(f"{str(v):>5}" for v in row))
    uni = all(gram[i][i] == 1 and all(gram[i][j] == 0 for j in range(i)) for i in range(len(names)))
    print("unitriangular:", uni)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=12)
    ap.add_argument("--eps", type=int, choices=[1, -1], default=1)
    a = ap.parse_args()
    main(Config(a.max_n, a.eps))
