"""Random inputs shared by the fuzzer, the benchmark and the test-suite.

All generators take an explicit ``random.Random`` so runs are reproducible.
Parabolas are produced from lines through the map
``(slope a, intercept b) -> (shift -a/2, offset b - a**2/4)``, which keeps
both the order at -inf and the envelope combinatorics unchanged.
"""
from __future__ import annotations

import random
from typing import Iterator

from gmpy2 import mpq

from .envelope_tree import EnvelopeSegment, EnvelopeTree
from .geometry import NEG_INF, POS_INF, Line, Parabola, Point, PseudoLine, sort_by_order

STYLES = ("small", "wide", "convex")


def as_family(family: type, ident, a, b) -> PseudoLine:
    """Pseudo-line of ``family`` equivalent to the line ``y = a x + b``."""
    if family is Line:
        return Line(ident, a, b)
    c = mpq(-a, 2) if isinstance(a, int) else -a / 2
    return Parabola(ident, c, b - c * c)


def random_rational(rng: random.Random, bound: int, max_den: int = 4) -> mpq:
    den = rng.randint(1, max_den)
    return mpq(rng.randint(-bound * den, bound * den), den)


class LineSource:
    """Draws fresh pseudo-lines with slopes distinct from all live ones.

    * ``small``: small integer coefficients, so concurrent triples and
      coinciding breakpoints are common
    * ``wide``: random rationals, generic position
    * ``convex``: tangents of a concave parabola, so every pseudo-line is on
      the envelope
    """

    def __init__(self, rng: random.Random, family: type, style: str, capacity: int):
        if style not in STYLES:
            raise ValueError(f"unknown style {style!r}")
        self.rng = rng
        self.family = family
        self.style = style
        self.bound = max(4, capacity)
        self.used: set = set()
        self._slope_of: dict = {}
        self.next_id = 0
        self.alpha = mpq(rng.randint(1, 4), rng.randint(1, 4))

    def _draw(self) -> tuple:
        rng, bound = self.rng, self.bound
        if self.style == "small":
            return mpq(rng.randint(-bound, bound)), mpq(rng.randint(-6, 6))
        if self.style == "wide":
            return random_rational(rng, 4 * bound, 8), random_rational(rng, 16 * bound, 8)
        a = random_rational(rng, 4 * bound, 3)
        return a, a * a / (4 * self.alpha)

    def fresh(self) -> PseudoLine:
        while True:
            a, b = self._draw()
            if a not in self.used:
                break
        self.used.add(a)
        ident = f"{self.style[0]}{self.next_id}"
        self.next_id += 1
        self._slope_of[ident] = a
        return as_family(self.family, ident, a, b)

    def release(self, line: PseudoLine) -> None:
        self.used.discard(self._slope_of.pop(line.id))


def random_ops(rng: random.Random, source: LineSource, max_n: int, length: int) -> Iterator[tuple]:
    """Insert/delete sequence keeping at most ``max_n`` live pseudo-lines."""
    live: dict = {}
    for _ in range(length):
        if not live or (len(live) < max_n and rng.random() < 0.6):
            line = source.fresh()
            live[line.id] = line
            yield ("insert", line)
        else:
            ident = rng.choice(sorted(live))
            source.release(live.pop(ident))
            yield ("delete", ident)


def convex_envelope(family: type, slopes: list, alpha, beta, prefix: str) -> list[EnvelopeSegment]:
    """Envelope of tangents ``y = a x + a**2/(4 alpha) + beta``; slopes sorted descending."""
    k = 1 / (4 * alpha)
    if family is Line:
        lines = [Line(f"{prefix}{i}", a, a * a * k + beta) for i, a in enumerate(slopes)]
    else:
        # shift c = -a/2 and offset b - c**2
        q = k - mpq(1, 4)
        lines = [Parabola(f"{prefix}{i}", -a / 2, a * a * q + beta) for i, a in enumerate(slopes)]
    # neighbouring tangents meet at x = -k (a1 + a2); a parabola is its line plus x**2
    segs = []
    left = NEG_INF
    for (a1, pl), a2 in zip(zip(slopes, lines), slopes[1:]):
        x = -k * (a1 + a2)
        y = a1 * x + a1 * a1 * k + beta
        p = Point(x, y if family is Line else y + x * x)
        segs.append(EnvelopeSegment(pl, left, p))
        left = p
    segs.append(EnvelopeSegment(lines[-1], left, POS_INF))
    return segs


def random_envelope_pair(rng: random.Random, family: type, max_size: int = 512) -> tuple[EnvelopeTree, EnvelopeTree]:
    """Two order-separated envelope trees for exercising the intersection search.

    Mostly large generic envelopes (each side 1..max_size segments), with a
    share of tiny integer inputs where the crossing often lands exactly on a
    breakpoint.
    """
    if rng.random() < 0.2:
        from .oracle import sweep_envelope

        k = rng.randint(2, 14)
        slopes = rng.sample(range(-8, 9), k)
        lines = sort_by_order(as_family(family, f"t{i}", mpq(a), mpq(rng.randint(-5, 5))) for i, a in enumerate(slopes))
        cut = rng.randint(1, k - 1)
        sides = []
        for part in (lines[:cut], lines[cut:]):
            sides.append([EnvelopeSegment(*s) for s in sweep_envelope(part)])
        return EnvelopeTree.from_segments(sides[0]), EnvelopeTree.from_segments(sides[1])

    n_left = rng.randint(1, max_size)
    n_right = rng.randint(1, max_size)
    spread = 8 * max_size
    den = rng.randint(1, 6)
    picks = rng.sample(range(-spread * den, spread * den + 1), n_left + n_right + 8)
    slopes = [mpq(k, den) for k in sorted(picks, reverse=True)]
    cut = rng.randint(0, len(slopes) - n_left - n_right) + n_left
    left_slopes = slopes[cut - n_left:cut]
    right_slopes = slopes[cut:cut + n_right]
    trees = []
    for prefix, part in (("l", left_slopes), ("r", right_slopes)):
        alpha = mpq(rng.randint(1, 9), rng.randint(1, 9))
        beta = random_rational(rng, spread * spread // 8, 5)
        trees.append(EnvelopeTree.from_segments(convex_envelope(family, part, alpha, beta, prefix)))
    return trees[0], trees[1]
