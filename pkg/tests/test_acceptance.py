"""Acceptance criteria 1-9, one test each.

Every test records a single PASS/FAIL line; the lines are printed in the
terminal summary (and directly when the file is run as a script).
"""
from __future__ import annotations

import itertools
import math
import time
from fractions import Fraction

import mpmath
import pytest

from qqh.charclasses import riemann_roch_suite
from qqh.cohring import QuadricSpace, basis_class
from qqh.flatsections import (flat_section_from_class, nabla_residual, odd_case_gate,
                              quantum_ode_residual)
from qqh.meijer import (MBIntegrand, PrecisionConfig, T_value, asymptotic_limit_fit,
                        flat_section_limit_check, g_k_eval, g_pm_eval, mellin_barnes_quadrature,
                        normalized_g_samples)
from qqh.quantum import (default_phases, exact_spectral_report, gamma2_hypothesis_check,
                         idempotent_basis, three_point, three_point_lemma)
from qqh.wdvv import (ConvergenceError, build_table, catalan_factor, consistency_report,
                      growth_bound_check, potential_partial_sum)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_LINES = []


def record(num: int, ok: bool, detail: str) -> None:
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture(scope="module")
def wdvv_tables():
    t0 = time.perf_counter()
    reports = {n: consistency_report(QuadricSpace(n), 8) for n in (4, 6)}
    return reports, time.perf_counter() - t0


def test_criterion_1_three_point_table():
    t0 = time.perf_counter()
    bad = []
    nonzero = set()
    for n in (4, 6, 8, 10, 12):
        X = QuadricSpace(n)
        B = X.labels()
        for i, j, k in itertools.combinations_with_replacement(range(len(B)), 3):
            got = three_point(basis_class(X, i), basis_class(X, j), basis_class(X, k), X)
            want = three_point_lemma(i, j, k, X)
            if got != want:
                bad.append((n, i, j, k, got, want))
            if want:
                nonzero.add(want)
    dt = time.perf_counter() - t0
    ok = not bad and nonzero == {2, -4, 4, 8} and dt < 1
    record(1, ok, f"{len(bad)} mismatches, values {sorted(int(v) for v in nonzero)}, {dt:.2f}s")
    assert ok, bad[:5]


def test_criterion_2_wdvv_consistency(wdvv_tables):
    reports, dt = wdvv_tables
    ok = all(r.ok for r in reports.values()) and dt < 60
    counts = "; ".join(f"Q{n}: " + ", ".join(f"{k}={v}" for k, v in sorted(r.checks.items()))
                       for n, r in reports.items())
    record(2, ok, f"{counts}; {dt:.1f}s")
    assert ok, [r.mismatches[:3] for r in reports.values()]


def test_criterion_3_spectral_data():
    failures = []
    for N in range(1, 7):
        rep = exact_spectral_report(QuadricSpace(2 * N))
        if not rep["all"]:
            failures.append((N, {k: v for k, v in rep.items() if v is False}))
    record(3, not failures, f"N = 1..6, failures {failures}")
    assert not failures


def test_criterion_4_riemann_roch():
    t0 = time.perf_counter()
    rr = riemann_roch_suite(12)
    dt = time.perf_counter() - t0
    ok = (all(v == [0] * len(v) for v in rr["spinor_vanishing"].values())
          and all(v == (1, 1) for v in rr["self"].values())
          and all(v == (0, 0) for v in rr["cross"].values())
          and all(v == 1 for v in rr["structure_sheaf"].values())
          and all(isinstance(v, Fraction) for v in rr["structure_sheaf"].values())
          and dt < 5)
    record(4, ok, f"n <= 12, even n checked {sorted(rr['self'])}, {dt:.2f}s")
    assert ok


def test_criterion_5_quantum_ode():
    t0 = time.perf_counter()
    bad = []
    for n in (4, 6, 8):
        X = QuadricSpace(n)
        for lab in X.labels():
            sec = flat_section_from_class(basis_class(X, lab), X, 8)
            if not quantum_ode_residual(sec.f0, X, 8).is_zero():
                bad.append((n, lab, "ode"))
            if not nabla_residual(sec).is_zero():
                bad.append((n, lab, "nabla"))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30
    record(5, ok, f"Q4, Q6, Q8 all basis classes, failures {bad}, {dt:.2f}s")
    assert ok


def test_criterion_6_odd_gate():
    reps = [odd_case_gate(QuadricSpace(n), 8) for n in (3, 5)]
    status = {r.n: ("supported" if r.supported else "unsupported") for r in reps}
    # either outcome is acceptable as long as it is reported; we expect support
    ok = all(r.supported for r in reps)
    record(6, ok, f"odd extension {status}")
    assert ok


def test_criterion_7_asymptotic_limits():
    t0 = time.perf_counter()
    cfg = PrecisionConfig(bits=512)
    X = QuadricSpace(4)
    N = X.N
    tol = 1e-3
    lines = []
    with mpmath.workprec(512):
        fit = asymptotic_limit_fit(normalized_g_samples(N, "pm", math.pi / 4, cfg=cfg))
        dist = abs(fit.limit - mpmath.mpc(0, -0.5))
        lines.append(("g_pm", float(dist), fit.error))
        for k in range(2 * N):
            theta = -k * math.pi / N
            u = T_value(N) * mpmath.expj(-k * mpmath.pi / N)
            fit = asymptotic_limit_fit(normalized_g_samples(N, k, theta, cfg=cfg), u)
            dist = abs(fit.limit - (-1) ** k / (2 * mpmath.sqrt(2)))
            lines.append((f"g_{k}", float(dist), fit.error))
    scalar_ok = all(d < tol and e < tol for _, d, e in lines)
    flat = {lab: flat_section_limit_check(X, lab, cfg=cfg, tol=tol)
            for lab in idempotent_basis(X).labels}
    flat_ok = all(r.passes for r in flat.values())
    spectral = idempotent_basis(X)
    geo = gamma2_hypothesis_check(spectral, default_phases(N, Fraction(2, 6 * N), Fraction(1, 6 * N)))
    dt = time.perf_counter() - t0
    worst = max([d for _, d, _ in lines] + [max(r.distances) for r in flat.values()])
    ok = scalar_ok and flat_ok and geo.ok and dt < 600
    record(7, ok, f"worst distance {worst:.2e}, geometric report {geo.ok}, {dt:.0f}s")
    assert ok, (lines, {k: r.failures() for k, r in flat.items()})


def test_criterion_8_growth():
    growth = {}
    for n in (4, 6):
        X = QuadricSpace(n)
        growth[n] = growth_bound_check(build_table(X, 8), X)
    bound_ok = all(all(r.passes.values()) for r in growth.values())
    catalan_ok = all(catalan_factor(n) == sum(catalan_factor(i) * catalan_factor(n - i)
                                              for i in range(1, n))
                     for n in range(2, 31))
    X = QuadricSpace(4)
    small = potential_partial_sum([0] + [Fraction(1, 20)] * 5, 6, X)
    try:
        potential_partial_sum([0] + [2] * 5, 6, X)
        rejected = False
    except ConvergenceError:
        rejected = True
    conv_ok = small.converges and small.rho < 1 and rejected
    ok = bound_ok and catalan_ok and conv_ok
    record(8, ok, f"C = {{4: {growth[4].C}, 6: {growth[6].C}}}, Catalan n <= 30 {catalan_ok}, "
                  f"diagnostic accept/reject {conv_ok}")
    assert ok


def test_criterion_9_backend_agreement():
    cfg = PrecisionConfig(bits=128)
    N = 2
    points = [mpmath.mpf(r) * mpmath.expjpi(mpmath.mpf(a))
              for r, a in ((0.5, 0.1), (0.8, -0.2), (1.0, 0.05), (1.5, 0.15), (2.0, -0.1))]
    worst = 0.0
    for z in points:
        pairs = [(g_k_eval(N, 0, z, cfg), MBIntegrand(N, "k", 0), -0.5),
                 (g_pm_eval(N, z, cfg), MBIntegrand(N, "pm"), -0.25)]
        for res, integrand, c in pairs:
            mb = mellin_barnes_quadrature(integrand, c, z, cfg)
            worst = max(worst, float(abs(res.value - mb.value)))
    ok = worst < 1e-8
    record(9, ok, f"max |residue - MB| = {worst:.2e} over 5 points")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
