from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qqh.cohring import QuadricSpace
from qqh.wdvv import (ConvergenceError, GWKey, InvariantTable, WDVVEngine, build_table,
                      catalan_factor, consistency_report, degree_from_dimension,
                      enumerate_keys, growth_bound_check, potential_partial_sum)

X3, X4 = QuadricSpace(3), QuadricSpace(4)


@pytest.fixture(scope="module")
def q4_table():
    return build_table(X4, 7)


def test_degree_from_dimension():
    assert degree_from_dimension(GWKey(2, (4,)), X4) == 1
    assert degree_from_dimension(GWKey(0, (1, 1, 1)), X4) is None
    assert degree_from_dimension(GWKey(0, (2, 1, 1)), X4) == 0
    assert degree_from_dimension(GWKey(0, (2, 2, 2)), X4) is None


def test_key_codec():
    key = GWKey(2, (4,))
    assert key.encode(1) == "2|4|1"
    assert GWKey.decode("2|4|1") == (key, 1)


def test_spec_invariants():
    eng = WDVVEngine(X4)
    P = 5
    assert eng.corr([P, P, P, 3]) == 0
    assert eng.corr([P, P, 1, 4]) == -4
    assert eng.corr([1, 4, 4, 4]) == 16
    # classical triples with i + j + k = n
    assert eng.corr([2, 1, 1]) == 2
    assert eng.corr([4, 0, 0]) == 2
    assert eng.corr([2, 2, 2]) == 0
    assert eng.corr([1, 1, 1]) == 0
    assert eng.table.provenance[GWKey(2, (4, 1))] == "divisor"


def test_primitive_paths_agree():
    eng = WDVVEngine(X4)
    assert eng.primitive_recursion(1, [1], 4) == -4
    a = eng.primitive_recursion(2, [3, 2], 4, (1, 3))
    assert a == eng.primitive_recursion(2, [3, 2], 4, (2, 2))
    assert a == eng.corr([5, 5, 5, 5, 3, 2, 4])
    with pytest.raises(ValueError):
        eng.primitive_recursion(1, [], 4, (1, 1))
    with pytest.raises(ValueError):
        eng.primitive_recursion(1, [], 1)


def test_q3_ambient_two_routes():
    # <h^2,h^2,h^2,h^2> has no valid degree on Q_3; <h^3,h^3,h^2,h^2> (d = 1) does
    assert degree_from_dimension(GWKey(0, (2, 2, 2, 2)), X3) is None
    eng = WDVVEngine(X3)
    exps = [3, 3, 2, 2]
    vals = {eng.ambient_reconstruct(exps, s) for s in [(0, 1, 2), (2, 0, 1), (0, 2, 3), (2, 3, 0)]}
    assert len(vals) == 1
    assert vals.pop() == eng.corr(exps)


def test_ambient_requires_exponent_two():
    with pytest.raises(ValueError):
        WDVVEngine(X4).ambient_reconstruct([1, 2, 2, 3])


def test_provenance_tags(q4_table):
    assert set(q4_table.provenance.values()) <= {"seed", "vanishing", "divisor", "recursion"}
    assert all(v.denominator == 1 for _, v in q4_table.items())


def test_consistency_catches_corruption():
    X = QuadricSpace(4)
    table = build_table(X, 6)
    victim = next(k for k, v in table.items() if v and k.npoints == 5 and k.m_prim == 0)
    table.values[victim] += 1
    rep = consistency_report(X, 6, table)
    assert not rep.ok


@pytest.mark.parametrize("n", [3, 4, 5])
def test_consistency_small(n):
    rep = consistency_report(QuadricSpace(n), 6)
    assert rep.ok, rep.mismatches[:3]


def test_catalan():
    assert [catalan_factor(n) for n in (1, 2, 3)] == [1, 1, 2]
    for n in range(2, 31):
        assert catalan_factor(n) == sum(catalan_factor(i) * catalan_factor(n - i) for i in range(1, n))
    with pytest.raises(ValueError):
        catalan_factor(0)


def test_growth_q4(q4_table):
    rep = growth_bound_check(q4_table, X4)
    assert all(rep.passes.values())
    assert rep.C > 0


def test_growth_single_entry():
    t = InvariantTable(4)
    t.store(GWKey(0, (4, 4, 4)), Fraction(8), "seed")
    rep = growth_bound_check(t, X4)
    D = 2  # degree of the entry
    assert rep.C ** (3 + D) * 6 >= 8
    assert rep.passes["all"]


def test_potential_zero_and_small(q4_table):
    zero = potential_partial_sum([0] * 6, 5, X4, q4_table)
    assert zero.value == 0 and zero.converges
    t = [0] + [Fraction(1, 20)] * 5
    a = potential_partial_sum(t, 5, X4, q4_table)
    b = potential_partial_sum(t, 6, X4, q4_table)
    assert abs(b.value - a.value) <= a.tail_bound


def test_potential_rejects_large(q4_table):
    with pytest.raises(ConvergenceError):
        potential_partial_sum([0] + [2] * 5, 5, X4, q4_table)
    res = potential_partial_sum([0] + [2] * 5, 5, X4, q4_table, strict=False)
    assert not res.converges and "smallness" in res.diagnostic


def test_frozen_table():
    t = InvariantTable(4).freeze()
    with pytest.raises(RuntimeError):
        t.store(GWKey(0, (2, 2, 2)), Fraction(2), "seed")


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=5), min_size=3, max_size=6))
def test_permutation_invariance(indices):
    eng = WDVVEngine(X4)
    assert eng.corr(indices) == eng.corr(list(reversed(indices))) == eng.corr(sorted(indices))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=2, max_value=5), min_size=3, max_size=5))
def test_divisor_axiom(indices):
    eng = WDVVEngine(X4)
    key = GWKey.from_indices(indices, X4)
    d = degree_from_dimension(GWKey.from_indices(indices + [1], X4), X4)
    if d is not None:
        assert eng.corr(indices + [1]) == d * eng.corr(indices)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=4), min_size=2, max_size=5))
def test_monodromy_vanishing(amb):
    eng = WDVVEngine(X4)
    assert eng.corr([5] + amb) == 0
    assert eng.corr([5, 5, 5] + amb) == 0


def test_enumerate_keys_have_degrees():
    keys = enumerate_keys(X4, 5)
    assert keys and all(degree_from_dimension(k, X4) is not None for k in keys)
