"""JSON persistence for invariant tables.

File layout::

    {"format": "qqh-invariants", "version": 1, "n": 4,
     "entries": {"2|4|1": {"value": "-4", "provenance": "seed"}, ...}}

Keys are emitted sorted so identical tables give byte-identical files.
"""
from __future__ import annotations

import json
import os
from fractions import Fraction
from pathlib import Path

from qqh.cohring import QuadricSpace
from qqh.wdvv import GWKey, InvariantTable, degree_from_dimension

FORMAT = "qqh-invariants"
VERSION = 1


class TableFormatError(ValueError):
    pass


class TableDimensionMismatch(ValueError):
    pass


def table_to_json(table: InvariantTable) -> dict:
    X = QuadricSpace(table.n)
    entries = {}
    for key, v in table.items():
        d = degree_from_dimension(key, X)
        entries[key.encode(d)] = {"value": str(v), "provenance": table.provenance.get(key, "unknown")}
    return {"format": FORMAT, "version": VERSION, "n": table.n,
            "entries": dict(sorted(entries.items()))}


def dumps(table: InvariantTable) -> str:
    return json.dumps(table_to_json(table), indent=1, sort_keys=True) + "\n"


def table_from_json(obj: dict, expect_n: int | None = None) -> InvariantTable:
    if not isinstance(obj, dict) or obj.get("format") != FORMAT:
        raise TableFormatError("missing or wrong format header")
    if obj.get("version") != VERSION:
        raise TableFormatError(f"unsupported version {obj.get('version')!r}")
    n = obj.get("n")
    if not isinstance(n, int) or n < 1:
        raise TableFormatError("bad dimension header")
    if expect_n is not None and n != expect_n:
        raise TableDimensionMismatch(f"table is for Q_{n}, requested Q_{expect_n}")
    X = QuadricSpace(n)
    table = InvariantTable(n)
    for code, rec in obj.get("entries", {}).items():
        try:
            key, d = GWKey.decode(code)
            val = Fraction(rec["value"])
        except (ValueError, KeyError, TypeError) as exc:
            raise TableFormatError(f"bad entry {code!r}: {exc}") from exc
        if degree_from_dimension(key, X) != d:
            raise TableFormatError(f"entry {code!r} has inconsistent degree")
        table.values[key] = val
        table.provenance[key] = rec.get("provenance", "unknown")
    return table


def loads(text: str, expect_n: int | None = None) -> InvariantTable:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableFormatError(f"corrupt table at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return table_from_json(obj, expect_n)


def save(table: InvariantTable, path: str | os.PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(dumps(table))
    tmp.replace(path)
    return path


def load(path: str | os.PathLike, expect_n: int | None = None) -> InvariantTable:
    return loads(Path(path).read_text(), expect_n)


def default_cache_path(n: int) -> Path | None:
    root = os.environ.get("QQH_CACHE_DIR")
    if not root:
        return None
    return Path(root) / f"invariants_q{n}.json"
