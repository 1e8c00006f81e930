"""Extrapolated z -> 0 limits of the K-framed flat sections against the
normalised idempotents, plus the exact half-line geometry at t = 0.

    python3 scripts/asymptotic_limits.py --N 2 --bits 512
"""
from __future__ import annotations

import argparse
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from qqh.cohring import QuadricSpace
from qqh.meijer import DEFAULT_RADII, PrecisionConfig, flat_section_limit_check
from qqh.quantum import default_phases, gamma2_hypothesis_check, idempotent_basis


@dataclass
class Config:
    N: int = 2
    bits: int = 512
    radii: tuple = DEFAULT_RADII
    out: Path | None = None


def main(cfg: Config) -> None:
    X = QuadricSpace(2 * cfg.N)
    spectral = idempotent_basis(X)
    reports = {}
    for lab in spectral.labels:
        rep = flat_section_limit_check(X, lab, cfg.radii, PrecisionConfig(bits=cfg.bits))
        reports[lab] = rep.to_json()
        print(f"{lab:5s} ray {rep.theta:+.4f}  max distance {max(rep.distances):.2e}  "
              f"max error {max(rep.errors):.2e}  {'pass' if rep.passes else 'FAIL'}")
    geo = gamma2_hypothesis_check(spectral, default_phases(cfg.N, Fraction(2, 6 * cfg.N), Fraction(1, 6 * cfg.N)))
    print("half-line hypotheses at t = 0:", "hold" if geo.ok else "fail", geo.to_json()["shared_origin_pairs"])
    if cfg.out:
        cfg.out.write_text(json.dumps({"limits": reports, "geometry": geo.to_json()}, indent=1, sort_keys=True))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=2)
    ap.add_argument("--bits", type=int, default=512)
    ap.add_argument("--radii", type=float, nargs="+", default=list(DEFAULT_RADII))
    ap.add_argument("--out", type=Path, default=None)
    a = ap.parse_args()
    main(Config(a.N, a.bits, tuple(a.radii), a.out))
