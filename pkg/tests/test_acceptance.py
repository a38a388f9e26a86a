"""Acceptance gate: one PASS/FAIL line per criterion, at the stated thresholds.

Run with pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""
import math
import random
import sys
import time
from pathlib import Path

import pytest
from gmpy2 import mpq

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_LINES  # noqa: E402
from pseudoenv.bench import merge_bound, run_bench, scaling_spread  # noqa: E402
from pseudoenv.fuzzing import FAMILIES, FuzzFailure, dynamic_case, merge_case  # noqa: E402
from pseudoenv.geometry import Line, Parabola, below_at_neg_inf, cross  # noqa: E402
from pseudoenv.oracle import brute_envelope  # noqa: E402

SEED = 20240601
DYN_CASES, MAX_OPS, MAX_N = 1000, 200, 128
MERGES, MAX_SIZE = 10_000, 512
DYN_BUDGET_S = MERGE_BUDGET_S = 60.0
BENCH_SIZES, BENCH_TRIALS, BENCH_BUDGET_S = (256, 1024, 4096, 16384), 1000, 120.0
KERNEL_SAMPLES = 10_000
BRUTE_CASES, BRUTE_MAX_N = 100, 24


def report(number, ok, text):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def _kind(failure: FuzzFailure) -> str:
    msg = failure.args[0]
    if "storage" in msg:
        return "storage"
    if "step bound" in msg or "classify calls" in msg:
        return "steps"
    if "invariant" in msg or "progress" in msg:
        return "invariant"
    return "oracle"


_cache = {}


def dynamic_run():
    if "dyn" not in _cache:
        failures, ops = [], 0
        t0 = time.perf_counter()
        for family in FAMILIES:
            for case in range(DYN_CASES):
                try:
                    ops += dynamic_case(SEED, family, case, MAX_N, MAX_OPS)
                except FuzzFailure as exc:
                    failures.append(exc)
        elapsed = time.perf_counter() - t0
        brute_fail = []
        for family in FAMILIES:
            for case in range(BRUTE_CASES):
                try:
                    dynamic_case(f"{SEED}-brute", family, case, BRUTE_MAX_N, MAX_OPS, oracle=brute_envelope)
                except FuzzFailure as exc:
                    brute_fail.append(exc)
        _cache["dyn"] = (failures, ops, elapsed, brute_fail)
    return _cache["dyn"]


def merge_run():
    if "merge" not in _cache:
        failures, outcomes = [], []
        t0 = time.perf_counter()
        per_family = MERGES // len(FAMILIES)
        for family in FAMILIES:
            for case in range(per_family):
                try:
                    outcomes.append(merge_case(SEED, family, case, MAX_SIZE))
                except FuzzFailure as exc:
                    failures.append(exc)
        _cache["merge"] = (failures, outcomes, time.perf_counter() - t0)
    return _cache["merge"]


def test_criterion_1_dynamic_oracle_equivalence():
    failures, ops, elapsed, brute_fail = dynamic_run()
    bad = [f for f in failures if _kind(f) == "oracle"]
    ok = not bad and not brute_fail and elapsed < DYN_BUDGET_S
    first = (bad or brute_fail or [None])[0]
    report(1, ok, f"{DYN_CASES} cases/family, {ops} ops, n <= {MAX_N}: {len(bad)} envelope mismatches "
                  f"in {elapsed:.1f}s (budget {DYN_BUDGET_S:.0f}s); brute_envelope on every state of "
                  f"{BRUTE_CASES} cases/family (n <= {BRUTE_MAX_N}): {len(brute_fail)} mismatches"
                  + (f"; first: {first.repro}" if first else ""))
    assert ok


def test_criterion_2_merge_oracle_equivalence():
    failures, outcomes, elapsed = merge_run()
    bad = [f for f in failures if _kind(f) == "oracle"]
    sizes = [s for o in outcomes for s in o.sizes]
    ok = not bad and elapsed < MERGE_BUDGET_S and len(outcomes) + len(failures) == MERGES
    report(2, ok, f"{MERGES} merges, sizes {min(sizes)}..{max(sizes)}: {len(bad)} mismatches "
                  f"in {elapsed:.1f}s (budget {MERGE_BUDGET_S:.0f}s)")
    assert ok


def test_criterion_3_step_bound():
    failures, outcomes, _ = merge_run()
    bad = [f for f in failures if _kind(f) == "steps"]
    worst_iter = max(o.iterations / o.budget for o in outcomes)
    worst_calls = max(o.classify_calls / o.iterations for o in outcomes)
    ok = not bad and worst_iter <= 1 and worst_calls <= 2
    report(3, ok, f"{len(bad)} violations over {len(outcomes)} merges; max iterations/budget "
                  f"{worst_iter:.3f}, max classify/iteration {worst_calls:.3f}")
    assert ok


def test_criterion_4_invariant_and_progress():
    failures, outcomes, _ = merge_run()
    bad = [f for f in failures if _kind(f) == "invariant"]
    total = sum(o.iterations for o in outcomes)
    ok = not bad and len(outcomes) >= 1000
    report(4, ok, f"{len(bad)} violations over {len(outcomes)} traced merges ({total} iterations)")
    assert ok


def test_criterion_5_scaling():
    t0 = time.perf_counter()
    rows = run_bench(BENCH_SIZES, BENCH_TRIALS, seed=SEED)
    elapsed = time.perf_counter() - t0
    upd = scaling_spread(rows, ("insert", "delete"), 2)
    qry = scaling_spread(rows, ("query",), 1)
    merges_ok = all(r.mean_classify <= merge_bound(r.n) for r in rows if r.op == "merge")
    ok = upd <= 2 and qry <= 2 and merges_ok and elapsed < BENCH_BUDGET_S
    detail = ", ".join(f"n={r.n}: {r.primitives / math.log2(r.n) ** 2:.2f}" for r in rows if r.op == "insert")
    report(5, ok, f"update primitives/(log2 n)^2 spread {upd:.2f}x, query steps/log2 n spread {qry:.2f}x "
                  f"(limit 2x), merge classify within bound: {merges_ok}; {elapsed:.1f}s "
                  f"(budget {BENCH_BUDGET_S:.0f}s); insert ratios {detail}")
    assert ok


def test_criterion_6_storage():
    failures, ops, _, _ = dynamic_run()
    bad = [f for f in failures if _kind(f) == "storage"]
    report(6, not bad, f"total hidden leaves == n after each of {ops} operations: {len(bad)} violations")
    assert not bad


def _kernel_family(family, rng):
    def rat():
        return mpq(rng.randint(-10**6, 10**6), rng.randint(1, 10**3))

    def fresh(ident, used):
        while True:
            pl = family(ident, rat(), rat())
            if pl.params()[0] not in used:
                used.add(pl.params()[0])
                return pl

    bad = 0
    for _ in range(KERNEL_SAMPLES):
        used = set()
        a, b, c = fresh("a", used), fresh("b", used), fresh("c", used)
        if below_at_neg_inf(a, b) == below_at_neg_inf(b, a):
            bad += 1
        for x, y, z in ((a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)):
            if below_at_neg_inf(x, y) and below_at_neg_inf(y, z) and not below_at_neg_inf(x, z):
                bad += 1
        q = cross(a, b)
        first = below_at_neg_inf(a, b)
        if a.at(q.x) != q.y or b.at(q.x) != q.y:
            bad += 1
        for _ in range(100):
            h = mpq(rng.randint(1, 10**6), rng.randint(1, 10**3))
            if (a.at(q.x - h) < b.at(q.x - h)) != first or (a.at(q.x + h) > b.at(q.x + h)) != first:
                bad += 1
    return bad


def test_criterion_7_kernel():
    rng = random.Random(SEED)
    bad = {fam.__name__: _kernel_family(fam, rng) for fam in (Line, Parabola)}
    ok = not any(bad.values())
    report(7, ok, f"{KERNEL_SAMPLES} random pairs/triples per family, 100 samples per side: "
                  f"violations {bad}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
