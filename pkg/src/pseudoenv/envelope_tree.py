"""Balanced leaf-oriented trees over the segments of a lower envelope.

Leaves hold :class:`EnvelopeSegment` values in x-order, both endpoints
included.  The breakpoint of an inner node is the shared endpoint of the last
segment on its left and the first segment on its right; it is read off the
cached ``first``/``last`` segments, so nothing has to be kept in sync by hand.

Nodes are immutable once built.  ``concat`` and ``split_where`` follow the
usual AVL join-based scheme and cost O(log n); every other update is a single
root-to-leaf path copy.
"""
from __future__ import annotations

import math
from typing import Callable, Iterator, NamedTuple, Sequence

from .errors import EmptyStructure, InvariantViolation, MismatchedBoundary, OrderViolation, OutOfSpan
from .geometry import (
    NEG_INF,
    POS_INF,
    Point,
    PseudoLine,
    below_at_neg_inf,
    format_x,
    point_x_less,
    x_greater,
    x_less,
)
from .metrics import COUNTS

HEIGHT_C = 2


class EnvelopeSegment(NamedTuple):
    line: PseudoLine
    left: Point
    right: Point


class _Node:
    __slots__ = ("left", "right", "seg", "height", "size", "first", "last")

    @property
    def is_leaf(self) -> bool:
        return self.seg is not None

    @property
    def breakpoint(self) -> Point:
        return self.left.last.right

    def __repr__(self):
        if self.seg is not None:
            return f"<leaf {self.seg.line.id!r}>"
        return f"<node {self.breakpoint} h={self.height} n={self.size}>"


def _leaf(seg: EnvelopeSegment) -> _Node:
    n = _Node()
    n.left = n.right = None
    n.seg = seg
    n.height = 0
    n.size = 1
    n.first = n.last = seg
    return n


def _mk(l: _Node, r: _Node) -> _Node:
    n = _Node()
    n.left = l
    n.right = r
    n.seg = None
    n.height = (l.height if l.height > r.height else r.height) + 1
    n.size = l.size + r.size
    n.first = l.first
    n.last = r.last
    return n


def _rebal(l: _Node, r: _Node) -> _Node:
    # heights may differ by at most 2 here
    hl, hr = l.height, r.height
    if hl > hr + 1:
        if l.left.height >= l.right.height:
            return _mk(l.left, _mk(l.right, r))
        lr = l.right
        return _mk(_mk(l.left, lr.left), _mk(lr.right, r))
    if hr > hl + 1:
        if r.right.height >= r.left.height:
            return _mk(_mk(l, r.left), r.right)
        rl = r.left
        return _mk(_mk(l, rl.left), _mk(rl.right, r.right))
    return _mk(l, r)


def _concat(a: _Node | None, b: _Node | None) -> _Node | None:
    if a is None:
        return b
    if b is None:
        return a
    if a.height > b.height + 1:
        return _rebal(a.left, _concat(a.right, b))
    if b.height > a.height + 1:
        return _rebal(_concat(a, b.left), b.right)
    return _mk(a, b)


def _split(t: _Node | None, goes_left) -> tuple[_Node | None, _Node | None]:
    # goes_left must hold on a (possibly empty) prefix of the leaves
    if t is None:
        return None, None
    if t.seg is not None:
        return (t, None) if goes_left(t.seg) else (None, t)
    if goes_left(t.right.first):
        a, b = _split(t.right, goes_left)
        return _concat(t.left, a), b
    a, b = _split(t.left, goes_left)
    return a, _concat(b, t.right)


def _with_first(t: _Node, seg: EnvelopeSegment) -> _Node:
    if t.seg is not None:
        return _leaf(seg)
    return _mk(_with_first(t.left, seg), t.right)


def _with_last(t: _Node, seg: EnvelopeSegment) -> _Node:
    if t.seg is not None:
        return _leaf(seg)
    return _mk(t.left, _with_last(t.right, seg))


def _drop_first(t: _Node) -> _Node | None:
    if t.seg is not None:
        return None
    l = _drop_first(t.left)
    return t.right if l is None else _rebal(l, t.right)


def _drop_last(t: _Node) -> _Node | None:
    if t.seg is not None:
        return None
    r = _drop_last(t.right)
    return t.left if r is None else _rebal(t.left, r)


def _build(leaves: list[_Node], lo: int, hi: int) -> _Node:
    if hi - lo <= 2:
        return leaves[lo] if hi - lo == 1 else _mk(leaves[lo], leaves[lo + 1])
    mid = (lo + hi) // 2
    return _mk(_build(leaves, lo, mid), _build(leaves, mid, hi))


class EnvelopeTree:
    """A contiguous run of lower-envelope segments, possibly empty."""

    __slots__ = ("root",)

    def __init__(self, root: _Node | None = None):
        self.root = root

    @classmethod
    def from_segments(cls, segments: Sequence[EnvelopeSegment]) -> EnvelopeTree:
        leaves = [_leaf(s if type(s) is EnvelopeSegment else EnvelopeSegment(*s)) for s in segments]
        if not leaves:
            return cls()
        return cls(_build(leaves, 0, len(leaves)))

    def __len__(self) -> int:
        return 0 if self.root is None else self.root.size

    def __bool__(self) -> bool:
        return self.root is not None

    def __iter__(self) -> Iterator[EnvelopeSegment]:
        stack = []
        n = self.root
        while stack or n is not None:
            while n is not None and n.seg is None:
                stack.append(n.right)
                n = n.left
            if n is not None:
                yield n.seg
            n = stack.pop() if stack else None

    def __repr__(self):
        return f"EnvelopeTree({dump(self)})"

    @property
    def height(self) -> int:
        return -1 if self.root is None else self.root.height

    @property
    def first(self) -> EnvelopeSegment:
        return self.root.first

    @property
    def last(self) -> EnvelopeSegment:
        return self.root.last

    def segments(self) -> list[EnvelopeSegment]:
        return list(self)

    def lines(self) -> list[PseudoLine]:
        return [s.line for s in self]


def singleton(pl: PseudoLine) -> EnvelopeTree:
    return EnvelopeTree(_leaf(EnvelopeSegment(pl, NEG_INF, POS_INF)))


def concat(t1: EnvelopeTree, t2: EnvelopeTree) -> EnvelopeTree:
    """Unchecked concatenation; the caller guarantees matching boundaries."""
    COUNTS.join += 1
    return EnvelopeTree(_concat(t1.root, t2.root))


def split_where(t: EnvelopeTree, goes_left: Callable[[EnvelopeSegment], bool]) -> tuple[EnvelopeTree, EnvelopeTree]:
    """Split off the maximal prefix of segments satisfying ``goes_left``.

    The predicate must be monotone over the leaf sequence (true, then false).
    """
    COUNTS.split += 1
    a, b = _split(t.root, goes_left)
    return EnvelopeTree(a), EnvelopeTree(b)


def with_last_right(t: EnvelopeTree, p: Point) -> EnvelopeTree:
    seg = t.root.last
    return EnvelopeTree(_with_last(t.root, EnvelopeSegment(seg.line, seg.left, p)))


def with_first_left(t: EnvelopeTree, p: Point) -> EnvelopeTree:
    seg = t.root.first
    return EnvelopeTree(_with_first(t.root, EnvelopeSegment(seg.line, p, seg.right)))


def split_at(t: EnvelopeTree, q: Point) -> tuple[EnvelopeTree, EnvelopeTree]:
    """Split into the parts left and right of ``q.x``.

    A segment whose interior contains ``q.x`` is cut in two; both pieces keep
    the same pseudo-line and share the cut point.
    """
    if not q.finite:
        raise OutOfSpan("split point must be finite")
    if t.root is None or x_greater(t.first.left, q.x) or x_less(t.last.right, q.x):
        raise OutOfSpan(f"x={format_x(q)} outside the tree's span")
    x = q.x
    COUNTS.split += 1
    a, b = _split(t.root, lambda s: x_less(s.left, x))
    if a is not None and x_greater(a.last.right, x):
        seg = a.last
        cut = Point(x, seg.line.at(x))
        a = _with_last(a, seg._replace(right=cut))
        b = _concat(_leaf(seg._replace(left=cut)), b)
    return EnvelopeTree(a), EnvelopeTree(b)


def join(t1: EnvelopeTree, t2: EnvelopeTree, q: Point) -> EnvelopeTree:
    """Concatenate two envelope runs meeting at ``q``.

    If both boundary segments lie on the same pseudo-line they are merged
    back into a single segment, undoing a cut made by :func:`split_at`.
    """
    if t1.root is None or t2.root is None:
        COUNTS.join += 1
        return EnvelopeTree(t1.root or t2.root)
    last, first = t1.last, t2.first
    if last.right != q or first.left != q:
        raise MismatchedBoundary(f"runs end at {last.right} and start at {first.left}, not at {q}")
    COUNTS.join += 1
    if last.line == first.line:
        merged = _leaf(EnvelopeSegment(last.line, last.left, first.right))
        return EnvelopeTree(_concat(_concat(_drop_last(t1.root), merged), _drop_first(t2.root)))
    if not below_at_neg_inf(last.line, first.line):
        raise OrderViolation(f"{last.line.id!r} does not precede {first.line.id!r}")
    return EnvelopeTree(_concat(t1.root, t2.root))


def locate_segment(t: EnvelopeTree, x0) -> EnvelopeSegment:
    n = t.root
    if n is None:
        raise EmptyStructure("locate on an empty envelope")
    steps = 1
    while n.seg is None:
        # ties at a breakpoint go to the left segment
        if x0 <= n.left.last.right.x:
            n = n.left
        else:
            n = n.right
        steps += 1
    COUNTS.locate_steps += steps
    return n.seg


def locate(t: EnvelopeTree, x0) -> PseudoLine:
    return locate_segment(t, x0).line


def dump(t: EnvelopeTree) -> str:
    return " ".join(f"{s.line.id}@[{format_x(s.left)},{format_x(s.right)}]" for s in t)


def height_bound(leaves: int) -> float:
    return HEIGHT_C * math.log2(max(leaves, 1)) + HEIGHT_C


def _check_node(n: _Node) -> None:
    if n.seg is not None:
        if n.height != 0 or n.size != 1 or n.first is not n.seg or n.last is not n.seg:
            raise InvariantViolation("leaf metadata")
        return
    _check_node(n.left)
    _check_node(n.right)
    if n.height != max(n.left.height, n.right.height) + 1 or n.size != n.left.size + n.right.size:
        raise InvariantViolation("height/size metadata")
    if abs(n.left.height - n.right.height) > 1:
        raise InvariantViolation("AVL balance")
    if n.first is not n.left.first or n.last is not n.right.last:
        raise InvariantViolation("first/last cache")
    p = n.left.last.right
    if not p.finite or p != n.right.first.left:
        raise InvariantViolation("breakpoint shared by neighbouring segments")
    a, b = n.left.last.line, n.right.first.line
    if a.at(p.x) != p.y or b.at(p.x) != p.y:
        raise InvariantViolation("breakpoint consistency")


def check_tree(t: EnvelopeTree, *, full_span: bool = False) -> None:
    """Raise InvariantViolation unless ``t`` is a well-formed envelope run."""
    if t.root is None:
        if full_span:
            raise InvariantViolation("empty tree cannot cover the full span")
        return
    _check_node(t.root)
    if t.root.height > height_bound(t.root.size):
        raise InvariantViolation("height bound")
    segs = t.segments()
    seen = set()
    for s in segs:
        if not point_x_less(s.left, s.right):
            raise InvariantViolation("segment x-order")
        for p in (s.left, s.right):
            if p.finite and s.line.at(p.x) != p.y:
                raise InvariantViolation("endpoint on its pseudo-line")
        if s.line.id in seen:
            raise InvariantViolation("one segment per pseudo-line")
        seen.add(s.line.id)
    for s, u in zip(segs, segs[1:]):
        if s.right != u.left:
            raise InvariantViolation("contiguity")
        if not below_at_neg_inf(s.line, u.line):
            raise InvariantViolation("segments in order at -inf")
    if full_span and (segs[0].left is not NEG_INF or segs[-1].right is not POS_INF):
        raise InvariantViolation("full span coverage")
