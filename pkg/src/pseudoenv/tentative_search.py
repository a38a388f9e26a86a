"""Intersection of two order-separated lower envelopes by tentative binary search.

Given envelope trees ``L_left`` and ``L_right`` such that every pseudo-line of
``L_left`` is below every pseudo-line of ``L_right`` at x = -inf, the two
envelopes cross exactly once.  :func:`find_intersection` descends both trees
simultaneously.  When a comparison is ambiguous it moves both pointers and
remembers the turn on a stack (``u_stack`` for right turns in ``L_left``,
``v_stack`` for left turns in ``L_right``) so that a wrong turn can be undone
later.  The loop runs at most ``2 * (h_left + h_right + 2)`` iterations.

Each node exposes a point ``p`` and a small envelope ``L(node)``:

* leaf of ``L_left``: its segment's left endpoint, and its pseudo-line
* leaf of ``L_right``: its segment's right endpoint, and its pseudo-line
* inner node: its breakpoint, and the envelope of the two incident pseudo-lines

Segments are half-open, owning their right endpoint in ``L_left`` and their
left endpoint in ``L_right``, so the leaves containing the crossing are unique.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

from .envelope_tree import EnvelopeTree, _Node
from .errors import PreconditionViolation, StepBudgetExceeded
from .geometry import Kind, Point, PseudoLine, below_at_neg_inf, cross, point_x_less
from .metrics import COUNTS


class CaseLabel(enum.IntEnum):
    CASE1 = 1  # u.p on or above L(v): the crossing is at or left of u.p
    CASE2 = 2  # v.p on or above L(u): the crossing is at or right of v.p
    CASE3 = 3  # both strictly below

    def __str__(self):
        return f"Case {int(self)}"


CASE1, CASE2, CASE3 = CaseLabel.CASE1, CaseLabel.CASE2, CaseLabel.CASE3
FINITE = Kind.FINITE


@dataclass(frozen=True)
class SearchNode:
    """The comparison data of one search node: its point and its local envelope."""

    p: Point
    lines: tuple[PseudoLine, ...]
    role: str = "left_env"

    @classmethod
    def of_left(cls, node: _Node) -> SearchNode:
        return cls(_left_p(node), _lines(node), "left_env")

    @classmethod
    def of_right(cls, node: _Node) -> SearchNode:
        return cls(_right_p(node), _lines(node), "right_env")


class Intersection(NamedTuple):
    q: Point
    left_line: PseudoLine
    right_line: PseudoLine


def _left_p(n: _Node) -> Point:
    return n.seg.left if n.seg is not None else n.left.last.right


def _right_p(n: _Node) -> Point:
    return n.seg.right if n.seg is not None else n.left.last.right


def _lines(n: _Node) -> tuple[PseudoLine, ...]:
    if n.seg is not None:
        return (n.seg.line,)
    return (n.left.last.line, n.right.first.line)


def _on_or_above(p: Point, lines) -> bool:
    # sentinels lie below everything
    if p.kind is not Kind.FINITE:
        return False
    x, y = p.x, p.y
    for line in lines:
        if y < line.at(x):
            return False
    return True


def _compare(up: Point, ulines, vp: Point, vlines) -> CaseLabel:
    COUNTS.classify += 1
    u_above = _on_or_above(up, vlines)
    v_above = _on_or_above(vp, ulines)
    if not u_above and not v_above:
        return CASE3
    return CASE1 if u_above else CASE2


def classify(u: SearchNode, v: SearchNode) -> CaseLabel:
    """Three-way comparison of a node ``u`` of L_left with a node ``v`` of L_right.

    Case 3 is tested first, then Case 1, then Case 2; points exactly on the
    other envelope count as "on or above".
    """
    return _compare(u.p, u.lines, v.p, v.lines)


def _cmp_nodes(u: _Node, v: _Node) -> CaseLabel:
    # _compare specialised to tree nodes; this is the search's inner loop
    COUNTS.classify += 1
    if u.seg is not None:
        up, ulines = u.seg.left, (u.seg.line,)
    else:
        seg = u.left.last
        up, ulines = seg.right, (seg.line, u.right.first.line)
    if v.seg is not None:
        vp, vlines = v.seg.right, (v.seg.line,)
    else:
        seg = v.left.last
        vp, vlines = seg.right, (seg.line, v.right.first.line)
    if up.kind is FINITE:
        x, y = up.x, up.y
        for line in vlines:
            if y < line.at(x):
                break
        else:
            return CASE1
    if vp.kind is FINITE:
        x, y = vp.x, vp.y
        for line in ulines:
            if y < line.at(x):
                break
        else:
            return CASE2
    return CASE3


@dataclass
class StepRecord:
    """State at the start of one iteration, plus what the iteration did."""

    u: _Node
    v: _Node
    u_stack: tuple[_Node, ...]
    v_stack: tuple[_Node, ...]
    cases: list[CaseLabel] = field(default_factory=list)
    pushed: int = 0
    popped: int = 0
    ended: bool = False


@dataclass
class SearchTrace:
    left: EnvelopeTree | None = None
    right: EnvelopeTree | None = None
    steps: list[StepRecord] = field(default_factory=list)
    result: Intersection | None = None

    @property
    def iterations(self) -> int:
        return len(self.steps)

    @property
    def classify_calls(self) -> int:
        return sum(len(s.cases) for s in self.steps)

    def table(self) -> list[tuple[str, ...]]:
        """Rows of (Step, u, v, uStack, vStack, Case) with readable node labels."""
        lab_l = node_labels(self.left)
        lab_r = node_labels(self.right)
        rows = []
        for i, s in enumerate(self.steps, 1):
            star = "*" if s.ended else ""
            cases = " -> ".join(str(c) for c in s.cases)
            if s.ended:
                cases += " -> End"
            rows.append((
                str(i),
                lab_l[id(s.u)] + star,
                lab_r[id(s.v)] + star,
                ",".join(lab_l[id(n)] for n in s.u_stack) or "-",
                ",".join(lab_r[id(n)] for n in s.v_stack) or "-",
                cases,
            ))
        return rows


def leaf_ranges(t: EnvelopeTree, only: set | None = None) -> dict[int, tuple[int, int]]:
    """Map id(node) to the half-open range of leaf indices below it.

    With ``only`` (a set of node ids closed under taking parents) the walk
    is restricted to those nodes and their children.
    """
    out: dict[int, tuple[int, int]] = {}
    stack = [(t.root, 0)] if t is not None and t.root is not None else []
    while stack:
        n, start = stack.pop()
        out[id(n)] = (start, start + n.size)
        if n.seg is None and (only is None or id(n) in only):
            stack.append((n.left, start))
            stack.append((n.right, start + n.left.size))
    return out


def node_labels(t: EnvelopeTree) -> dict[int, str]:
    """Leaves are ``s<k>`` (k-th segment), inner nodes ``b<k>`` (k-th breakpoint)."""
    labels = {}
    stack = [(t.root, 0)] if t is not None and t.root is not None else []
    while stack:
        n, start = stack.pop()
        if n.seg is not None:
            labels[id(n)] = f"s{start + 1}"
        else:
            labels[id(n)] = f"b{start + n.left.size}"
            stack.append((n.left, start))
            stack.append((n.right, start + n.left.size))
    return labels


def step_budget(left: EnvelopeTree, right: EnvelopeTree) -> int:
    return 2 * (left.height + right.height + 2)


def find_intersection(
    L_left: EnvelopeTree,
    L_right: EnvelopeTree,
    *,
    trace: SearchTrace | None = None,
    debug: bool = False,
) -> Intersection:
    """Crossing point of two order-separated envelopes and the two pseudo-lines through it."""
    if not L_left or not L_right:
        raise PreconditionViolation("both envelopes must be nonempty")
    if not below_at_neg_inf(L_left.last.line, L_right.first.line):
        raise PreconditionViolation(
            f"{L_left.last.line.id!r} does not precede {L_right.first.line.id!r} at -inf"
        )
    if trace is not None:
        trace.left, trace.right = L_left, L_right
        trace.steps = []
    u, v = L_left.root, L_right.root
    u_stack: list[_Node] = []
    v_stack: list[_Node] = []
    for _ in range(step_budget(L_left, L_right)):
        rec = None
        if trace is not None:
            rec = StepRecord(u, v, tuple(u_stack), tuple(v_stack))
            trace.steps.append(rec)
        c = _cmp_nodes(u, v)
        cases = [c]
        pushed = popped = 0

        if c is CASE3:
            if debug and not point_x_less(_left_p(u), _right_p(v)):
                raise AssertionError("Case 3 with u.p not strictly left of v.p")
            u_leaf = u.seg is not None
            v_leaf = v.seg is not None
            if u_leaf and v_leaf:
                result = Intersection(cross(u.seg.line, v.seg.line), u.seg.line, v.seg.line)
                if rec is not None:
                    rec.cases = cases
                    rec.ended = True
                    trace.result = result
                return result
            if not u_leaf:
                u_stack.append(u)
                u = u.right
                pushed += 1
            if not v_leaf:
                v_stack.append(v)
                v = v.left
                pushed += 1

        elif c is CASE1:
            if not u_stack:
                if u.seg is not None:
                    raise PreconditionViolation("Case 1 at a leaf with an empty uStack")
                u = u.left
            elif u.seg is not None:
                u = u_stack.pop().left
                popped += 1
            else:
                top = u_stack[-1]
                c2 = _cmp_nodes(top, v)
                cases.append(c2)
                if c2 is CASE1:
                    u_stack.pop()
                    popped += 1
                    u = top.left
                elif c2 is CASE2:
                    u = u.left
                    if v.seg is None:
                        v = v.right
                else:
                    u = u.left
                    if v.seg is None:
                        v_stack.append(v)
                        v = v.left
                        pushed += 1

        else:  # CASE2, mirror image of CASE1
            if not v_stack:
                if v.seg is not None:
                    raise PreconditionViolation("Case 2 at a leaf with an empty vStack")
                v = v.right
            elif v.seg is not None:
                v = v_stack.pop().right
                popped += 1
            else:
                top = v_stack[-1]
                c2 = _cmp_nodes(u, top)
                cases.append(c2)
                if c2 is CASE2:
                    v_stack.pop()
                    popped += 1
                    v = top.right
                elif c2 is CASE1:
                    v = v.right
                    if u.seg is None:
                        u = u.left
                else:
                    v = v.right
                    if u.seg is None:
                        u_stack.append(u)
                        u = u.right
                        pushed += 1

        if rec is not None:
            rec.cases = cases
            rec.pushed = pushed
            rec.popped = popped

    raise StepBudgetExceeded(
        f"no result after {step_budget(L_left, L_right)} iterations "
        f"(heights {L_left.height}, {L_right.height})"
    )


def _oracle_paths(trace: SearchTrace) -> tuple:
    from .oracle import true_paths

    return true_paths(trace.left, trace.right)


def check_invariant1(trace: SearchTrace, paths: tuple | None = None) -> bool:
    """True iff every recorded state covers u*/v* and has u or v on its true path.

    For each state: the left subtrees of ``u_stack`` nodes plus the leaves
    under ``u`` form a contiguous prefix of L_left containing u*; mirrored for
    ``v``; and u lies on the root-to-u* path or v on the root-to-v* path.
    ``paths`` may carry precomputed oracle paths.
    """
    pi_l, pi_r = paths or _oracle_paths(trace)
    on_l = {id(n) for n in pi_l}
    on_r = {id(n) for n in pi_r}
    seen_l = on_l | {id(n) for s in trace.steps for n in (s.u, *s.u_stack)}
    seen_r = on_r | {id(n) for s in trace.steps for n in (s.v, *s.v_stack)}
    rng_l = leaf_ranges(trace.left, seen_l)
    rng_r = leaf_ranges(trace.right, seen_r)
    u_star = rng_l[id(pi_l[-1])][0]
    v_star = rng_r[id(pi_r[-1])][0]
    n_right = len(trace.right)

    for s in trace.steps:
        if any(n.seg is not None for n in s.u_stack + s.v_stack):
            return False
        parts = sorted([rng_l[id(n.left)] for n in s.u_stack] + [rng_l[id(s.u)]])
        end = 0
        for a, b in parts:
            if a != end:
                return False
            end = b
        if not u_star < end:
            return False

        parts = sorted([rng_r[id(n.right)] for n in s.v_stack] + [rng_r[id(s.v)]])
        start = n_right
        for a, b in reversed(parts):
            if b != start:
                return False
            start = a
        if not start <= v_star:
            return False

        if id(s.u) not in on_l and id(s.v) not in on_r:
            return False
    return True


def check_progress(trace: SearchTrace, paths: tuple | None = None) -> bool:
    """True iff every non-final iteration pops a stack or reaches a new true-path node,
    and pushes happen only in iterations that reach a new true-path node."""
    pi_l, pi_r = paths or _oracle_paths(trace)
    on_l = {id(n) for n in pi_l}
    on_r = {id(n) for n in pi_r}
    seen = {id(trace.left.root), id(trace.right.root)}
    for cur, nxt in zip(trace.steps, trace.steps[1:]):
        new = False
        if id(nxt.u) in on_l and id(nxt.u) not in seen:
            new = True
            seen.add(id(nxt.u))
        if id(nxt.v) in on_r and id(nxt.v) not in seen:
            new = True
            seen.add(id(nxt.v))
        if not new and not cur.popped:
            return False
        if cur.pushed and not new:
            return False
    return bool(trace.steps) and trace.steps[-1].ended
