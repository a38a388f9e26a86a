"""Deterministic SVG rendering of envelopes and intersection-search traces.

Each envelope segment becomes one ``<path>``; marked points are ``<circle>``
elements.  The x-range covers every pairwise crossing of the drawn
pseudo-lines plus a margin of 1 (or [-1, 1] if there are none), and all
coordinates are printed with three decimals, so equal input gives
byte-identical output.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from gmpy2 import mpq

from .envelope_tree import EnvelopeSegment
from .errors import InadmissiblePair
from .geometry import Line, Point

WIDTH, HEIGHT, PAD = 640, 480, 20
SAMPLES = 24  # polyline vertices per curved segment
COLORS = ("#1f77b4", "#d62728")


def _x_range(lines: Sequence) -> tuple:
    xs = []
    for a, b in combinations(lines, 2):
        try:
            xs.append(a.crossing_x(b))
        except InadmissiblePair:
            pass
    if not xs:
        return mpq(-1), mpq(1)
    return min(xs) - 1, max(xs) + 1


def _clip(seg: EnvelopeSegment, lo, hi):
    a = seg.left.x if seg.left.finite else lo
    b = seg.right.x if seg.right.finite else hi
    return max(a, lo), min(b, hi)


def _polyline(seg: EnvelopeSegment, lo, hi) -> list:
    a, b = _clip(seg, lo, hi)
    if a > b:
        return []
    steps = 1 if isinstance(seg.line, Line) else SAMPLES
    return [(x, seg.line.at(x)) for x in (a + (b - a) * mpq(i, steps) for i in range(steps + 1))]


class _Canvas:
    def __init__(self, x_lo, x_hi, ys: Iterable):
        ys = list(ys) or [mpq(0)]
        self.x_lo, self.x_hi = float(x_lo), float(x_hi)
        self.y_lo, self.y_hi = float(min(ys)) - 1, float(max(ys)) + 1
        self.items: list[str] = []

    def _xy(self, x, y) -> str:
        sx = PAD + (float(x) - self.x_lo) / (self.x_hi - self.x_lo) * (WIDTH - 2 * PAD)
        sy = PAD + (self.y_hi - float(y)) / (self.y_hi - self.y_lo) * (HEIGHT - 2 * PAD)
        return f"{sx:.3f},{sy:.3f}"

    def path(self, pts, color: str, label) -> None:
        d = "M" + " L".join(self._xy(x, y) for x, y in pts)
        self.items.append(f'<path d="{d}" stroke="{color}" fill="none" stroke-width="2"><title>{label}</title></path>')

    def point(self, p: Point, cls: str, r: int = 4) -> None:
        sx, sy = self._xy(p.x, p.y).split(",")
        self.items.append(f'<circle class="{cls}" cx="{sx}" cy="{sy}" r="{r}"/>')

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
                f'viewBox="0 0 {WIDTH} {HEIGHT}">')
        return "\n".join([head, *self.items, "</svg>"]) + "\n"


def _draw(envelopes: Sequence[Sequence[EnvelopeSegment]], marks: Sequence[tuple[Point, str]] = ()) -> str:
    lines = [s.line for env in envelopes for s in env]
    lo, hi = _x_range(lines)
    polys = [[_polyline(s, lo, hi) for s in env] for env in envelopes]
    ys = [y for env in polys for pts in env for _, y in pts]
    ys += [p.y for p, _ in marks if p.finite and lo <= p.x <= hi]
    canvas = _Canvas(lo, hi, ys)
    for k, (env, env_polys) in enumerate(zip(envelopes, polys)):
        for seg, pts in zip(env, env_polys):
            if pts:
                canvas.path(pts, COLORS[k % len(COLORS)], seg.line.id)
    for p, cls in marks:
        if p.finite and lo <= p.x <= hi:
            canvas.point(p, cls, 5 if cls == "q" else 3)
    return canvas.render()


def envelope_svg(segments: Sequence[EnvelopeSegment]) -> str:
    return _draw([list(segments)])


def trace_svg(trace) -> str:
    """Both envelopes, the crossing q, and the points u.p / v.p of every step."""
    from .tentative_search import _left_p, _right_p

    marks = []
    for s in trace.steps:
        marks.append((_left_p(s.u), "u"))
        marks.append((_right_p(s.v), "v"))
    if trace.result is not None:
        marks.append((trace.result.q, "q"))
    return _draw([list(trace.left), list(trace.right)], marks)
