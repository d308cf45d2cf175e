"""End-to-end acceptance checks, one test per criterion."""

import time

import pytest

from qrr.builders import ct_fexp, ct_laurent
from qrr.partitions import PartitionClass, count_dp, count_enumerate
from qrr.qseries import ONE, Monomial, qs_add, qs_equal_to_order, qs_mul
from qrr.recursion import first_divergence, recursion_tables, series_coefficients
from qrr.registry import corrupted, lookup, registry
from qrr.verify import FAIL, PASS, SKIPPED, verify, verify_all

from oracles import count_gap2, count_parts
from test_properties import CASES, eq

D = 4
Q = Monomial.q


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail
    return emit


def test_criterion_1_full_registry(report):
    t0 = time.perf_counter()
    reps = verify_all(M=100 * D, D=D)
    secs = time.perf_counter() - t0
    ids = {r.id for r in reps}
    bad = [str(r) for r in reps if r.status not in (PASS, SKIPPED)]
    ok = len(registry()) >= 45 and ids == {s.id for s in registry()} and not bad and secs < 120
    report(1, ok, f"{len(ids)} entries, {len(reps)} checks, {len(bad)} failures, {secs:.1f}s")


def test_criterion_2_headline_depth(report):
    t0 = time.perf_counter()
    reps = verify(lookup("RR_MAIN_G"), 500 * D, D) + verify(lookup("RR_MAIN_H"), 500 * D, D)
    secs = time.perf_counter() - t0
    ok = all(r.status == PASS for r in reps) and secs < 60
    report(2, ok, f"G and H agree through q^500 in {secs:.1f}s")


def test_criterion_3_triple_route(report):
    N = 200
    t = recursion_tables(N)
    routes = [first_divergence(seq, series_coefficients(name, N))
              for name, seq in (("G", t.g), ("tildeG", t.g), ("H", t.h), ("tildeH", t.h))]
    enum_ok = (list(t.g[:41]) == [count_gap2(n) for n in range(41)]
               and list(t.h[:41]) == [count_parts(n, lambda p: p % 5 in (2, 3))
                                      for n in range(41)])
    spots = (t.g[4], t.g[6], t.h[6], t.f[5], t.h[1])
    ok = routes == [None] * 4 and enum_ok and spots == (2, 3, 2, 6, 0)
    report(3, ok, f"n<={N} routes agree, enumeration n<=40 {enum_ok}, spots {spots}")


def test_criterion_4_oracle_independence(report):
    N = 40
    bad = [c.name for c in PartitionClass
           if count_dp(c, N) != [count_enumerate(c, n) for n in range(N + 1)]]
    report(4, not bad, f"{len(PartitionClass)} classes through n={N}, mismatches {bad}")


def test_criterion_5_ct_routes(report):
    M = 100 * D
    bad = [(N, str(t)) for N in (1, 2) for t in (ONE, Q(1))
           if not qs_equal_to_order(ct_fexp(N, t, M, D), ct_laurent(N, t, M, D), M)]
    report(5, not bad, f"direct sum vs Laurent constant term at q-order 100, mismatches {bad}")


def test_criterion_6_operator_calculus(report):
    dxe = verify("DXE", 40 * D, D)
    dxh = verify("DXH", 100 * D, D)
    neg = verify("HK_NEG", 100 * D, D)
    reps = dxe + dxh + neg
    ok = len(dxe) >= 2 and all(r.status == PASS for r in reps)
    report(6, ok, f"DXE {len(dxe)}, DXH {len(dxh)}, HK_NEG {len(neg)} instantiations pass")


def test_criterion_7_property_suites(report):
    ring = len(CASES) >= 200 and all(
        eq(qs_mul(a, qs_add(b, c)), qs_add(qs_mul(a, b), qs_mul(a, c)))
        and eq(qs_mul(qs_mul(a, b), c), qs_mul(a, qs_mul(b, c)))
        for a, b, c in CASES)
    jtp = verify("JACOBI_TP", 100 * D, D)
    rest = verify("QUASIPERIODICITY", 100 * D, D) + verify("CT_SHIFT_INVARIANCE", 100 * D, D)
    ok = ring and len(jtp) >= 5 and all(r.status == PASS for r in jtp + rest)
    report(7, ok, f"{len(CASES)} ring cases, JTP at {len(jtp)} monomials, "
                  f"{len(rest)} invariance checks")


def test_criterion_8_negative_control(report):
    rep = verify(corrupted())[0]
    N = 50
    t = recursion_tables(N, override={("g", 1): 2})
    n = first_divergence(t.g, series_coefficients("tildeG", N))
    ok = rep.status == FAIL and rep.first_mismatch is not None and n is not None and n <= N
    where = rep.first_mismatch["exponent"] if rep.first_mismatch else None
    report(8, ok, f"corrupted fixture fails at q^{where}, perturbation diverges at n={n}")
