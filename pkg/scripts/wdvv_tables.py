"""Build invariant tables, cross-check them and write them to disk.

    python3 scripts/wdvv_tables.py --dims 4 6 --max-insertions 8 --out results
"""
from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass
from pathlib import Path

from qqh import tableio
from qqh.cohring import QuadricSpace
from qqh.wdvv import InvariantTable, consistency_report


@dataclass
class Config:
    dims: tuple = (4, 6)
    max_insertions: int = 8
    out: Path = Path("results")


def main(cfg: Config) -> None:
    cfg.out.mkdir(parents=True, exist_ok=True)
    for n in cfg.dims:
        t0 = time.perf_counter()
        X = QuadricSpace(n)
        table = InvariantTable(n)
        rep = consistency_report(X, cfg.max_insertions, table)
        tableio.save(table, cfg.out / f"invariants_q{n}.json")
        summary = rep.to_json() | {"entries": len(table), "seconds": round(time.perf_counter() - t0, 2)}
        (cfg.out / f"consistency_q{n}.json").write_text(json.dumps(summary, indent=1, sort_keys=True))
        print(f"Q_{n}: {len(table)} invariants, checks {dict(rep.checks)}, "
              f"{'consistent' if rep.ok else 'MISMATCH'} in {summary['seconds']}s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", type=int, nargs="+", default=[4, 6])
    ap.add_argument("--max-insertions", type=int, default=8)
    ap.add_argument("--out", type=Path, default=Path("results"))
    a = ap.parse_args()
    main(Config(tuple(a.dims), a.max_insertions, a.out))
