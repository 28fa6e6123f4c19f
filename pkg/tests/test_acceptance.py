"""End-to-end acceptance checks, one test per criterion.

Each test records a one-line verdict in RESULTS; conftest prints them after the run.
Set G2Q_SLOW=1 to include the degree-5 S_q(V) dimension.
"""

import os
import time

import pytest

from g2q import algebra, diagrams, invariants, rep

RESULTS = {}


def judge(n, title, reports, limit_s, started):
    failures = [(r.suite, c.id, c.witness) for r in reports for c in r.failures()]
    checks = sum(len(r.checks) for r in reports)
    took = time.perf_counter() - started
    ok = not failures and took < limit_s
    verdict = "PASS" if ok else "FAIL"
    detail = "%d checks, %d failed, %.1fs (limit %ds)" % (checks, len(failures), took, limit_s)
    if failures:
        detail += "; first: %s/%s" % failures[0][:2]
    RESULTS[n] = "criterion %2d %s: %s [%s]" % (n, verdict, title, detail)
    if failures:
        pytest.fail("failed checks: " + ", ".join("%s/%s" % f[:2] for f in failures), pytrace=False)
    assert took < limit_s


def test_criterion_01_representation():
    t = time.perf_counter()
    judge(1, "representation", [rep.rep_suite()], 5, t)


def test_criterion_02_structure_maps():
    t = time.perf_counter()
    judge(2, "structure maps", [rep.gamma_p_suite()], 10, t)


def test_criterion_03_functor():
    t = time.perf_counter()
    judge(3, "diagram functor", [diagrams.relation_suite()], 30, t)


def test_criterion_04_cycle_reduction():
    t = time.perf_counter()
    R = diagrams.cycle_reduction_suite(200)
    assert sum(c.id.startswith("random-") for c in R.checks) == 200
    judge(4, "cycle reduction", [R], 120, t)


def test_criterion_05_sqv():
    t = time.perf_counter()
    assert [algebra.sqv_dim(n) for n in range(5)] == [1, 7, 28, 77, 182]
    judge(5, "S_q(V)", [algebra.verify_sqv(4)], 180, t)


@pytest.mark.skipif(not os.environ.get("G2Q_SLOW"), reason="degree 5 is opt-in (G2Q_SLOW=1)")
def test_criterion_05_sqv_degree_5():
    assert algebra.sqv_dim(5) == 378


def test_criterion_06_presentation():
    t = time.perf_counter()
    judge(6, "A_m presentation", [algebra.verify_prop_preAm()], 60, t)


def test_criterion_07_constructions():
    t = time.perf_counter()
    judge(7, "invariant constructions", [invariants.verify_constructions(4)], 300, t)


def test_criterion_08_commutation():
    t = time.perf_counter()
    reports = [invariants.verify_commutation(s) for s in invariants.SUITES]
    judge(8, "commutation suites", reports, 3600, t)


def test_criterion_09_fft():
    t = time.perf_counter()
    reports = [invariants.fft_span_check(m, 4) for m in (1, 2, 3)]
    reports.append(invariants.fft_span_check(
        4, 0, extra=[(1, 1, 1, 1)], space_dims=[(2, 1), (3, 1), (4, 4), (5, 10)],
    ))
    assert any(c.id == "invariant-space-5" for c in reports[-1].checks)
    judge(9, "FFT spanning", reports, 1800, t)


def test_criterion_10_classical():
    t = time.perf_counter()
    judge(10, "classical limit", [algebra.classical_limit_check(3)], 300, t)
