from __future__ import annotations

import io
import json
from fractions import Fraction

import pytest

from qqh.cli import CommandConfig, UsageError, parse_bundle, parse_ray, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_invariants_and_cache(tmp_path):
    cache = tmp_path / "q4.json"
    code, text, _ = call("invariants", "--dim", "4", "--max-insertions", "6", "--cache", str(cache))
    assert code == 0
    body = json.loads(text)
    assert body["entries"]["2|4|1"]["value"] == "-4"
    assert body["computed"] > 0 and cache.exists()
    code, text2, _ = call("invariants", "--dim", "4", "--max-insertions", "6", "--cache", str(cache))
    assert json.loads(text2)["computed"] == 0
    # wrong dimension against an existing cache is a domain error
    assert call("invariants", "--dim", "6", "--cache", str(cache))[0] == 1


def test_determinism():
    a = call("invariants", "--dim", "4", "--max-insertions", "5")[1]
    b = call("invariants", "--dim", "4", "--max-insertions", "5")[1]
    assert a == b


def test_euler_and_product():
    code, text, _ = call("euler", "--dim", "8", "--left", "S+", "--right", "S+")
    assert code == 0 and json.loads(text)["chi"] == "1"
    code, text, _ = call("product", "--dim", "4", "--left", "h1", "--right", "h3")
    assert code == 0 and "h0" in text


def test_exit_codes():
    assert call("bogus")[0] == 2
    assert call("euler", "--dim", "3", "--left", "S'", "--right", "S")[0] == 1
    assert call("product", "--dim", "0", "--left", "h1", "--right", "h1")[0] == 2
    assert call("product", "--dim", "4", "--left", "h9", "--right", "h1")[0] == 1


def test_formats():
    code, text, _ = call("product", "--dim", "4", "--left", "p", "--right", "p", "--format", "csv")
    assert code == 0 and "," in text.splitlines()[0]
    code, text, _ = call("idempotents", "--dim", "4", "--format", "pretty")
    assert code == 0 and text.strip()


@pytest.mark.parametrize("argv", [
    ("chern", "--dim", "4", "--bundle", "S'", "--kind", "ch"),
    ("chern", "--dim", "4", "--kind", "gamma"),
    ("pfunction", "--dim", "4", "--cutoff", "3"),
    ("jfunction", "--dim", "5", "--cutoff", "3"),
    ("flatsec", "--dim", "4", "--class", "h0", "--cutoff", "3"),
    ("gamma2-check", "--dim", "4"),
    ("growth-check", "--dim", "4", "--max-insertions", "5"),
    ("convergence", "--dim", "4", "--cutoff", "5"),
])
def test_commands_run(argv):
    code, text, err = call(*argv)
    assert code == 0, err
    json.loads(text)


def test_ode_check_odd_gate():
    code, text, _ = call("ode-check", "--dim", "3")
    body = json.loads(text)
    assert code == 0 and body["pass"]


def test_asymptotics_o0():
    code, text, _ = call("asymptotics", "--dim", "4", "--bundle", "O0", "--precision", "128")
    assert code == 0 and json.loads(text)["pass"]


def test_parsers_and_config():
    assert parse_bundle("O3") == "O(3)"
    assert parse_ray("1/4") == Fraction(1, 4)
    assert parse_ray("pi/2") == parse_ray("1/2*pi") == Fraction(1, 2)
    with pytest.raises(UsageError):
        parse_ray("abc")
    with pytest.raises(UsageError):
        CommandConfig(4, "euler", "xml", 256, 8, None)
