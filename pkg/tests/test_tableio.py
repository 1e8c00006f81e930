from __future__ import annotations

import pytest

from qqh import tableio
from qqh.cohring import QuadricSpace
from qqh.wdvv import build_table


@pytest.fixture(scope="module")
def table():
    return build_table(QuadricSpace(4), 6)


def test_roundtrip_bit_exact(table, tmp_path):
    p = tableio.save(table, tmp_path / "t.json")
    again = tableio.load(p, expect_n=4)
    assert again.values == table.values
    assert tableio.dumps(again) == p.read_text()


def test_spec_entry(table):
    obj = tableio.table_to_json(table)
    assert obj["entries"]["2|4|1"]["value"] == "-4"


def test_wrong_dimension(table, tmp_path):
    p = tableio.save(table, tmp_path / "t.json")
    with pytest.raises(tableio.TableDimensionMismatch):
        tableio.load(p, expect_n=6)


def test_corrupt_file_diagnostic(table):
    text = tableio.dumps(table)
    broken = text[: len(text) // 2]
    with pytest.raises(tableio.TableFormatError, match="line"):
        tableio.loads(broken)


def test_bad_header_and_degree():
    with pytest.raises(tableio.TableFormatError):
        tableio.table_from_json({"format": "other"})
    bad = {"format": tableio.FORMAT, "version": 1, "n": 4,
           "entries": {"2|4|2": {"value": "-4", "provenance": "seed"}}}
    with pytest.raises(tableio.TableFormatError, match="degree"):
        tableio.table_from_json(bad)


def test_cache_path(monkeypatch, tmp_path):
    monkeypatch.delenv("QQH_CACHE_DIR", raising=False)
    assert tableio.default_cache_path(4) is None
    monkeypatch.setenv("QQH_CACHE_DIR", str(tmp_path))
    assert tableio.default_cache_path(4) == tmp_path / "invariants_q4.json"
