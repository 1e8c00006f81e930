"""Fitted growth constants C for |<...>| <= n! C^{n+D} and a convergence
scan of the truncated potential along the diagonal t = (0, s, ..., s).

    python3 scripts/growth_constants.py --dims 4 6 --max-insertions 7
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass
from fractions import Fraction

from qqh.cohring import QuadricSpace
from qqh.wdvv import build_table, growth_bound_check, potential_partial_sum


@dataclass
class Config:
    dims: tuple = (4, 6)
    max_insertions: int = 7
    scan: tuple = (Fraction(1, 50), Fraction(1, 20), Fraction(1, 10), Fraction(1, 4), Fraction(1))


def main(cfg: Config) -> None:
    for n in cfg.dims:
        X = QuadricSpace(n)
        table = build_table(X, cfg.max_insertions)
        rep = growth_bound_check(table, X)
        print(f"Q_{n}: {len(table)} invariants, C = {rep.C} (worst {rep.worst_key}), "
              f"constants {rep.constants}, all bounds {all(rep.passes.values())}")
        for s in cfg.scan:
            t = [0] + [s] * (X.basis_size - 1)
            res = potential_partial_sum(t, cfg.max_insertions, X, table, rep.C, strict=False)
            if res.converges:
                print(f"   s = {s}: rho = {float(res.rho):.3f}, F ~ {float(res.value):.6e}, tail <= {float(res.tail_bound):.1e}")
            else:
                print(f"   s = {s}: {res.diagnostic}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", type=int, nargs="+", default=[4, 6])
    ap.add_argument("--max-insertions", type=int, default=7)
    a = ap.parse_args()
    main(Config(tuple(a.dims), a.max_insertions))
