"""Randomised differential testing against the brute-force oracle.

A *dynamic* case is a random insert/delete sequence; after every operation the
root envelope must equal the oracle envelope exactly, the structure must hold
exactly one segment leaf per pseudo-line, and ray shooting must agree with the
brute-force argmin.  A *merge* case is one intersection search on a random
pair of order-separated envelopes, checked against the brute-force crossing
and against the search's step bound, invariant and progress conditions.

Every case is seeded from ``(seed, family, kind, index)`` alone, so any
failure can be replayed in isolation.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .dynamic_envelope import DynamicEnvelope
from .geometry import Line, Parabola, family_name, format_rational
from .metrics import COUNTS
from .oracle import brute_intersection, brute_ray_shoot, path_to as paths_to, stack_envelope
from .tentative_search import SearchTrace, check_invariant1, check_progress, find_intersection, step_budget
from .workloads import STYLES, LineSource, random_envelope_pair, random_ops, random_rational

FAMILIES = (Line, Parabola)


class FuzzFailure(AssertionError):
    def __init__(self, seed, family, kind, case, step, message, script=None):
        self.seed, self.family, self.kind, self.case, self.step = seed, family, kind, case, step
        self.script = script
        super().__init__(message)

    @property
    def case_key(self) -> str:
        return f"{family_name(self.family)}:{self.kind}:{self.case}"

    @property
    def repro(self) -> str:
        return (
            f"seed={self.seed} case={self.case_key} "
            f"step={self.step}: {self.args[0]}"
        )


@dataclass
class FuzzReport:
    dynamic_cases: int = 0
    operations: int = 0
    merges: int = 0
    max_n: int = 0
    merge_sizes: list = field(default_factory=list)


def case_rng(seed, family: type, kind: str, case: int) -> random.Random:
    return random.Random(f"{seed}:{family_name(family)}:{kind}:{case}")


def script_line(op: tuple) -> str:
    if op[0] == "delete":
        return f"delete {op[1]}"
    line = op[1]
    p1, p2 = line.params()
    return f"insert {line.id} {format_rational(p1)} {format_rational(p2)}"


def check_state(s: DynamicEnvelope, live: dict, rng: random.Random, probes: int = 1,
                oracle=stack_envelope) -> None:
    if not live:
        if s.root is not None or s.storage() != 0:
            raise AssertionError("structure should be empty")
        return
    expected = oracle(live.values())
    actual = [tuple(seg) for seg in s.envelope]
    if actual != expected:
        raise AssertionError("root envelope differs from the oracle envelope")
    if s.storage() != len(live):
        raise AssertionError(f"storage {s.storage()} != n {len(live)}")
    breaks = [seg[2].x for seg in expected[:-1]]
    span = max((abs(x) for x in breaks), default=1) + 1
    xs = [random_rational(rng, int(span) + 1, 7) for _ in range(probes)]
    if breaks:
        xs.append(rng.choice(breaks))
    lines = list(live.values())
    for x in xs:
        if s.ray_shoot(x) is not brute_ray_shoot(lines, x):
            raise AssertionError(f"ray_shoot disagrees with the oracle at x={format_rational(x)}")


def dynamic_case(seed, family: type, case: int, max_n: int = 128, max_ops: int = 200,
                 validate_every: int = 0, oracle=stack_envelope) -> int:
    """Run one dynamic case; returns the number of operations performed.

    ``oracle`` computes the expected envelope; the default O(n log n) scan is
    cross-checked against :func:`brute_envelope` by the test-suite.
    """
    rng = case_rng(seed, family, "dynamic", case)
    style = rng.choice(STYLES)
    cap = rng.randint(1, max_n)
    length = rng.randint(1, max_ops)
    source = LineSource(rng, family, style, cap)
    s = DynamicEnvelope(family=family)
    live: dict = {}
    done: list = []
    for step, op in enumerate(random_ops(rng, source, cap, length)):
        done.append(script_line(op))
        try:
            if op[0] == "insert":
                s.insert(op[1])
                live[op[1].id] = op[1]
            else:
                s.delete(op[1])
                del live[op[1]]
            check_state(s, live, rng, oracle=oracle)
            if validate_every and (step + 1) % validate_every == 0:
                s.validate(oracle=False)
        except Exception as exc:  # every failure becomes a repro
            script = [f"family {family_name(family)}"] + done
            raise FuzzFailure(seed, family, "dynamic", case, step, f"{type(exc).__name__}: {exc}", script) from exc
    return len(done)


@dataclass
class MergeOutcome:
    iterations: int
    classify_calls: int
    budget: int
    path_lengths: int
    sizes: tuple


def merge_case(seed, family: type, case: int, max_size: int = 512) -> MergeOutcome:
    rng = case_rng(seed, family, "merge", case)
    left, right = random_envelope_pair(rng, family, max_size)
    try:
        trace = SearchTrace()
        before = COUNTS.classify
        got = find_intersection(left, right, trace=trace, debug=True)
        calls = COUNTS.classify - before
        q, a, b = brute_intersection(list(left), list(right))
        if got.q != q or got.left_line != a or got.right_line != b:
            raise AssertionError(f"search found {got.q} on {got.left_line.id}/{got.right_line.id}, "
                                 f"oracle {q} on {a.id}/{b.id}")
        pi_l, pi_r = paths_to(left, a), paths_to(right, b)
        budget = step_budget(left, right)
        if trace.iterations > 2 * (len(pi_l) + len(pi_r)) or trace.iterations > budget:
            raise AssertionError(f"{trace.iterations} iterations exceed the step bound")
        if calls > 2 * trace.iterations or calls != trace.classify_calls:
            raise AssertionError(f"{calls} classify calls for {trace.iterations} iterations")
        if not check_invariant1(trace, (pi_l, pi_r)):
            raise AssertionError("search invariant violated")
        if not check_progress(trace, (pi_l, pi_r)):
            raise AssertionError("an iteration made no progress")
    except Exception as exc:
        raise FuzzFailure(seed, family, "merge", case, None, f"{type(exc).__name__}: {exc}") from exc
    return MergeOutcome(trace.iterations, calls, budget, len(pi_l) + len(pi_r), (len(left), len(right)))


def run_fuzz(seed=0, cases: int = 1000, max_n: int = 128, *, merges: int | None = None,
             max_size: int = 512, families=FAMILIES, max_ops: int = 200) -> FuzzReport:
    """``cases`` dynamic cases and ``merges`` merge cases per family; raises FuzzFailure."""
    report = FuzzReport(max_n=max_n)
    merges = cases if merges is None else merges
    for family in families:
        for case in range(cases):
            report.operations += dynamic_case(seed, family, case, max_n, max_ops)
            report.dynamic_cases += 1
        for case in range(merges):
            out = merge_case(seed, family, case, max_size)
            report.merges += 1
            report.merge_sizes.append(out.sizes)
    return report
