"""Primitive-count benchmark for updates, ray shooting and standalone merges.

The workload keeps every pseudo-line on the envelope (tangents of a concave
parabola), which is the worst case for the amount of envelope moved around
per update.  For each size ``n`` the structure is bulk-loaded with ``n``
pseudo-lines, then each trial deletes a random one and inserts a fresh
replacement, so ``n`` stays fixed.

Counts are the complexity evidence; wall time is reported but too noisy at
desk scale to assert on.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from typing import Iterable

from gmpy2 import mpq

from .dynamic_envelope import DynamicEnvelope
from .envelope_tree import EnvelopeTree
from .geometry import Line
from .metrics import COUNTS
from .tentative_search import find_intersection
from .workloads import as_family, convex_envelope

HEADER = "n,op,mean_classify,mean_split_join,mean_wall_ns"
OPS = ("insert", "delete", "query", "merge")
MERGE_PAIRS = 20


@dataclass
class Row:
    n: int
    op: str
    mean_classify: float
    mean_split_join: float
    mean_wall_ns: float

    @property
    def primitives(self) -> float:
        return self.mean_classify + self.mean_split_join

    def csv(self) -> str:
        return f"{self.n},{self.op},{self.mean_classify:.3f},{self.mean_split_join:.3f},{self.mean_wall_ns:.0f}"


class _Meter:
    def __init__(self):
        self.classify = self.split_join = self.wall = self.count = 0

    def __enter__(self):
        COUNTS.reset()
        self._t0 = time.perf_counter_ns()
        return self

    def __exit__(self, *exc):
        self.wall += time.perf_counter_ns() - self._t0
        # ray shooting does no classify calls; its descent steps are reported in that column
        self.classify += COUNTS.classify + COUNTS.locate_steps
        self.split_join += COUNTS.split + COUNTS.join
        self.count += 1
        return False

    def row(self, n: int, op: str) -> Row:
        k = max(self.count, 1)
        return Row(n, op, self.classify / k, self.split_join / k, self.wall / k)


def _tangent(family, ident, a):
    # tangent of the concave y = -x^2 at x = -a/2, so it is always on the envelope
    return as_family(family, ident, a, a * a / 4)


def bench_size(n: int, trials: int, rng: random.Random, family: type = Line) -> list[Row]:
    span = 64 * n
    slopes = set()
    while len(slopes) < n:
        slopes.add(rng.randint(-span, span))
    slope_of = {f"t{i}": a for i, a in enumerate(sorted(slopes))}
    s = DynamicEnvelope([_tangent(family, ident, mpq(a)) for ident, a in slope_of.items()], family=family)
    ids = list(slope_of)
    meters = {op: _Meter() for op in OPS}
    for trial in range(trials):
        k = rng.randrange(len(ids))
        victim = ids[k]
        with meters["delete"]:
            s.delete(victim)
        slopes.discard(slope_of.pop(victim))
        while True:
            a = rng.randint(-span, span)
            if a not in slopes:
                break
        slopes.add(a)
        ids[k] = f"f{trial}"
        slope_of[ids[k]] = a
        pl = _tangent(family, ids[k], mpq(a))
        with meters["insert"]:
            s.insert(pl)
        x0 = mpq(rng.randint(-span * 8, span * 8), 8)
        with meters["query"]:
            s.ray_shoot(x0)

    for _ in range(MERGE_PAIRS):
        left, right = _merge_pair(n, rng, family)
        with meters["merge"]:
            find_intersection(left, right)
    return [meters[op].row(n, op) for op in OPS]


def _merge_pair(n: int, rng: random.Random, family: type) -> tuple[EnvelopeTree, EnvelopeTree]:
    # two n-segment convex envelopes; every left slope exceeds every right slope
    slopes = sorted(rng.sample(range(-64 * n, 64 * n), 2 * n), reverse=True)
    trees = []
    for prefix, part in (("l", slopes[:n]), ("r", slopes[n:])):
        alpha = mpq(rng.randint(1, 9), rng.randint(1, 9))
        beta = mpq(rng.randint(-n * n, n * n))
        trees.append(EnvelopeTree.from_segments(convex_envelope(family, [mpq(a) for a in part], alpha, beta, prefix)))
    return trees[0], trees[1]


def run_bench(sizes: Iterable[int] = (256, 1024, 4096, 16384), trials: int = 1000, seed: int = 0,
              family: type = Line) -> list[Row]:
    rows = []
    for n in sizes:
        rows.extend(bench_size(n, trials, random.Random(f"{seed}:{n}"), family))
    return rows


def to_csv(rows: list[Row]) -> str:
    return "\n".join([HEADER] + [r.csv() for r in rows]) + "\n"


def scaling_spread(rows: list[Row], ops: tuple[str, ...], power: int) -> float:
    """max/min over sizes of mean primitives per op divided by (log2 n)**power."""
    ratios = []
    by_n: dict[int, list[Row]] = {}
    for r in rows:
        by_n.setdefault(r.n, []).append(r)
    for n, rs in by_n.items():
        total = sum(r.primitives for r in rs if r.op in ops) / len(ops)
        ratios.append(total / math.log2(n) ** power)
    return max(ratios) / min(ratios)


def merge_bound(n: int) -> int:
    return 4 * (2 * (math.ceil(math.log2(n)) + 1) + 2)
