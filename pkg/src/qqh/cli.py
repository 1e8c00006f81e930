"""Command-line front end.

Every subcommand builds a JSON-able payload; ``--format`` chooses JSON
(sorted keys, the default), CSV or a plain listing.  Exit codes: 0 success,
1 domain error, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import mpmath

from qqh.cohring import CohClass, QuadricSpace, basis_class

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CommandConfig:
    n: int
    command: str
    fmt: str = "json"
    precision: int = 256
    cutoff: int = 8
    cache: Path | None = None

    def __post_init__(self):
        if self.n < 1:
            raise UsageError("--dim must be at least 1")
        if self.precision < 64:
            raise UsageError("--precision must be at least 64 bits")
        if self.cutoff < 0:
            raise UsageError("--cutoff must be non-negative")
        if self.fmt not in ("json", "csv", "pretty"):
            raise UsageError(f"unknown format {self.fmt!r}")


# ---------------------------------------------------------------- formatting

def num(x, bits: int | None = None):
    """Exact numbers as strings, floats as {"value", "precision_bits"}."""
    from qqh.numbers import GaussianRational

    if isinstance(x, bool):
        return x
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    if isinstance(x, GaussianRational):
        return {"re": str(x.re), "im": str(x.im)}
    x = mpmath.mpmathify(x)
    dps = max(15, int((bits or mpmath.mp.prec) * 0.30103) - 2)
    if isinstance(x, mpmath.mpc):
        return {"re": mpmath.nstr(x.real, dps), "im": mpmath.nstr(x.imag, dps), "precision_bits": bits}
    return {"value": mpmath.nstr(x, dps), "precision_bits": bits}


def coh_json(c: CohClass, X: QuadricSpace, bits: int | None = None) -> dict:
    return {lab: num(v, bits) for lab, v in zip(X.labels(), c.coords(X))}


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        rows = payload.get("rows")
        if rows:
            cols = sorted({k for r in rows for k in r})
            w.writerow(cols)
            for r in rows:
                w.writerow([_cell(r.get(c, "")) for c in cols])
        else:
            w.writerow(["key", "value"])
            for k, v in _flatten(payload):
                w.writerow([k, v])
        return buf.getvalue()
    return "".join(f"{k}: {v}\n" for k, v in _flatten(payload))


def _cell(v):
    if isinstance(v, dict):
        return ";".join(f"{k}={v[k]}" for k in sorted(v))
    return v


# ---------------------------------------------------------------- parsing helpers

def parse_bundle(text: str) -> str:
    """O3 / O(3) / S / S+ / S- / S' / S'' -> descriptor text."""
    m = re.fullmatch(r"O(-?\d+)", text)
    if m:
        return f"O({m.group(1)})"
    return text


def parse_ray(text: str) -> Fraction:
    t = text.replace(" ", "").replace("*", "").replace("pi", "")
    # "pi/2" and "-pi/4" leave an implicit numerator of one
    if t in ("", "-") or t.startswith(("/", "-/")):
        t = t.replace("/", "1/", 1) if "/" in t else t + "1"
    try:
        return Fraction(t)
    except ValueError as exc:
        raise UsageError(f"bad --ray {text!r}; give a rational multiple of pi such as 1/4") from exc


def _label(X: QuadricSpace, text: str) -> CohClass:
    return basis_class(X, text)


# ---------------------------------------------------------------- commands

def cmd_invariants(cfg: CommandConfig, args) -> dict:
    from qqh import tableio
    from qqh.wdvv import InvariantTable, WDVVEngine

    X = QuadricSpace(cfg.n)
    path = cfg.cache
    table = InvariantTable(cfg.n)
    if path is not None and Path(path).exists():
        table = tableio.load(path, cfg.n)
    before = len(table)
    WDVVEngine(X, table).build(args.max_insertions)
    if path is not None:
        tableio.save(table, path)
    body = tableio.table_to_json(table)
    rows = [{"key": k, "value": v["value"], "provenance": v["provenance"]} for k, v in body["entries"].items()]
    return {"n": cfg.n, "max_insertions": args.max_insertions, "computed": len(table) - before,
            "entries": body["entries"], "rows": rows}


def cmd_product(cfg: CommandConfig, args) -> dict:
    from qqh.quantum import small_product

    X = QuadricSpace(cfg.n)
    c = small_product(_label(X, args.left), _label(X, args.right), X)
    return {"n": cfg.n, "left": args.left, "right": args.right, "product": coh_json(c, X),
            "rows": [coh_json(c, X)]}


def cmd_idempotents(cfg: CommandConfig, args) -> dict:
    from qqh.quantum import c1_quantum_matrix, exact_spectral_report, expected_char_poly, idempotent_basis

    X = QuadricSpace(cfg.n)
    cp = c1_quantum_matrix(X).characteristic_polynomial()
    out = {"n": cfg.n, "char_poly_low_to_high": [num(a) for a in cp],
           "char_poly_matches": cp == expected_char_poly(X) if X.even else None}
    if X.even:
        spectral = idempotent_basis(X)
        out["idempotents"] = spectral.to_json()
        rep = exact_spectral_report(X)
        out["exact_identities"] = {k: bool(v) for k, v in rep.items() if isinstance(v, bool)}
    return out


def cmd_chern(cfg: CommandConfig, args) -> dict:
    from qqh import charclasses as cc

    X = QuadricSpace(cfg.n)
    kind = args.kind
    if kind == "td":
        s = cc.todd(X)
    elif kind == "gamma":
        s = cc.gamma_class(X, cfg.precision)
    elif kind == "Ch":
        s = cc.modified_Ch(parse_bundle(args.bundle), X, cfg.precision)
    else:
        s = cc.chern_character(parse_bundle(args.bundle), X)
    cls = coh_json(s.cls, X, s.precision)
    return {"bundle": args.bundle if kind in ("ch", "Ch") else None, "kind": kind,
            "ch": cls, "precision_bits": s.precision, "rows": [cls]}


def cmd_euler(cfg: CommandConfig, args) -> dict:
    from qqh.charclasses import euler_pairing

    X = QuadricSpace(cfg.n)
    v = euler_pairing(parse_bundle(args.left), parse_bundle(args.right), X)
    return {"n": cfg.n, "left": args.left, "right": args.right, "chi": num(v), "provenance": "exact"}


def _series_dump(cfg: CommandConfig, which: str) -> dict:
    from qqh.flatsections import j_function, p_function

    X = QuadricSpace(cfg.n)
    L = (j_function if which == "j" else p_function)(X, cfg.cutoff)
    terms = {str(d): {str(j): coh_json(c, X) for j, c in enumerate(cols)} for d, cols in L.expanded().items()}
    rows = [dict(d=d, log_degree=j, **coh_json(c, X)) for d, cols in L.expanded().items() for j, c in enumerate(cols)]
    return {"n": cfg.n, "prefactor": L.prefactor, "cutoff": L.cutoff, "terms": terms, "rows": rows}


def cmd_pfunction(cfg, args):
    return _series_dump(cfg, "p")


def cmd_jfunction(cfg, args):
    return _series_dump(cfg, "j")


def _zseries_json(zs) -> list:
    return [{"z_power": str(a), "log_power": j, "coeff": num(c)} for (a, j), c in zs.terms]


def cmd_flatsec(cfg: CommandConfig, args) -> dict:
    from qqh.flatsections import flat_section_from_class

    X = QuadricSpace(cfg.n)
    sec = flat_section_from_class(_label(X, args.cls), X, cfg.cutoff)
    return {"n": cfg.n, "class": args.cls, "cutoff": cfg.cutoff, "f0": _zseries_json(sec.f0),
            "f_p": num(sec.f_prim),
            "components": {f"f{i}": _zseries_json(f) for i, f in enumerate(sec.components)}}


def cmd_ode_check(cfg: CommandConfig, args) -> dict:
    from qqh.flatsections import flat_section_from_class, nabla_residual, odd_case_gate, quantum_ode_residual

    X = QuadricSpace(cfg.n)
    rows = []
    for lab in X.labels():
        sec = flat_section_from_class(_label(X, lab), X, cfg.cutoff)
        rows.append({"class": lab, "ode_zero": quantum_ode_residual(sec.f0, X, cfg.cutoff).is_zero(),
                     "nabla_zero": nabla_residual(sec).is_zero()})
    out = {"n": cfg.n, "cutoff": cfg.cutoff, "rows": rows, "pass": all(r["ode_zero"] and r["nabla_zero"] for r in rows)}
    if not X.even:
        out["odd_gate"] = odd_case_gate(X, cfg.cutoff).to_json()
    return out


def cmd_asymptotics(cfg: CommandConfig, args) -> dict:
    from qqh.meijer import PrecisionConfig, flat_section_limit_check

    X = QuadricSpace(cfg.n)
    if not X.even:
        raise ValueError("asymptotic limits are implemented for even quadrics")
    b = parse_bundle(args.bundle)
    if b in ("S+", "S-"):
        label = b
    elif b == "O" or b.startswith("O("):
        label = f"O({int(b[2:-1]) if b != 'O' else 0})"
    else:
        raise ValueError(f"asymptotics supports O<k>, S+ and S-, not {args.bundle}")
    theta = float(parse_ray(args.ray)) * math.pi if args.ray else None
    rep = flat_section_limit_check(X, label, cfg=PrecisionConfig(bits=cfg.precision), theta=theta)
    out = rep.to_json()
    N = X.N
    if label in ("S+", "S-"):
        out["scalar_target"] = {"re": "0", "im": "-1/2"}
    else:
        k = int(label[2:-1])
        out["scalar_target"] = {"value": mpmath.nstr((-1) ** k / (2 * mpmath.sqrt(N)), 20)}
    out["precision_bits"] = cfg.precision
    return out


def cmd_gamma2_check(cfg: CommandConfig, args) -> dict:
    from qqh.quantum import default_phases, gamma2_hypothesis_check, idempotent_basis

    X = QuadricSpace(cfg.n)
    if not X.even:
        raise ValueError("the geometric report is implemented for even quadrics")
    N = X.N
    pp = Fraction(args.phi_plus) if args.phi_plus else Fraction(2, 3 * 2 * N)
    pm = Fraction(args.phi_minus) if args.phi_minus else Fraction(1, 3 * 2 * N)
    rep = gamma2_hypothesis_check(idempotent_basis(X), default_phases(N, pp, pm))
    out = rep.to_json()
    out["phases_over_pi"] = [str(p) for p in default_phases(N, pp, pm)]
    return out


def cmd_growth_check(cfg: CommandConfig, args) -> dict:
    from qqh.wdvv import build_table, catalan_factor, growth_bound_check

    X = QuadricSpace(cfg.n)
    table = build_table(X, args.max_insertions)
    rep = growth_bound_check(table, X).to_json()
    cat = all(catalan_factor(n) == sum(catalan_factor(i) * catalan_factor(n - i) for i in range(1, n))
              for n in range(2, 31))
    rep["catalan_identity_n_le_30"] = cat
    return rep


def cmd_convergence(cfg: CommandConfig, args) -> dict:
    from qqh.wdvv import potential_partial_sum

    X = QuadricSpace(cfg.n)
    t = [Fraction(x) for x in args.t.split(",")] if args.t else [Fraction(0)] * X.basis_size
    res = potential_partial_sum(t, cfg.cutoff, X, strict=False)
    return {"n": cfg.n, "cutoff": cfg.cutoff, "C": res.C, "rho": num(res.rho, 128),
            "converges": res.converges, "value": num(res.value, 128) if res.value is not None else None,
            "tail_bound": num(res.tail_bound, 128), "diagnostic": res.diagnostic}


COMMANDS = {
    "invariants": cmd_invariants,
    "product": cmd_product,
    "idempotents": cmd_idempotents,
    "chern": cmd_chern,
    "euler": cmd_euler,
    "pfunction": cmd_pfunction,
    "jfunction": cmd_jfunction,
    "flatsec": cmd_flatsec,
    "ode-check": cmd_ode_check,
    "asymptotics": cmd_asymptotics,
    "gamma2-check": cmd_gamma2_check,
    "growth-check": cmd_growth_check,
    "convergence": cmd_convergence,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, required=True)
    common.add_argument("--format", choices=["json", "csv", "pretty"], default="json")
    common.add_argument("--precision", type=int, default=256)
    common.add_argument("--cutoff", type=int, default=8)
    common.add_argument("--cache", type=Path, default=None)
    p = argparse.ArgumentParser(prog="qqh", description="Quantum cohomology of quadrics")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("invariants", parents=[common])
    s.add_argument("--max-insertions", type=int, default=6)
    s = sub.add_parser("product", parents=[common])
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    sub.add_parser("idempotents", parents=[common])
    s = sub.add_parser("chern", parents=[common])
    s.add_argument("--bundle", default="O")
    s.add_argument("--kind", choices=["ch", "Ch", "td", "gamma"], default="ch")
    s = sub.add_parser("euler", parents=[common])
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    sub.add_parser("pfunction", parents=[common])
    sub.add_parser("jfunction", parents=[common])
    s = sub.add_parser("flatsec", parents=[common])
    s.add_argument("--class", dest="cls", required=True)
    sub.add_parser("ode-check", parents=[common])
    s = sub.add_parser("asymptotics", parents=[common])
    s.add_argument("--bundle", required=True)
    s.add_argument("--ray", type=str, default=None, help="ray phase as a multiple of pi (default: the ray of the limit formula)")
    s = sub.add_parser("gamma2-check", parents=[common])
    s.add_argument("--phi-plus", default=None)
    s.add_argument("--phi-minus", default=None)
    s = sub.add_parser("growth-check", parents=[common])
    s.add_argument("--max-insertions", type=int, default=6)
    s = sub.add_parser("convergence", parents=[common])
    s.add_argument("--t", default=None, help="comma-separated coordinates over the basis")
    return p


def run(argv, out=None, err=None) -> int:
    from qqh import tableio

    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cache = args.cache
        if cache is None and args.command == "invariants":
            cache = tableio.default_cache_path(args.dim)
        cfg = CommandConfig(args.dim, args.command, args.format, args.precision, args.cutoff, cache)
        payload = COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (ValueError, ArithmeticError, RuntimeError, NotImplementedError, KeyError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    if args.format != "csv":
        payload.pop("rows", None)
    out.write(render(payload, args.format))
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
