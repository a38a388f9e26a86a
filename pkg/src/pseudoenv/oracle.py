"""Brute-force references for lower envelopes and their intersections.

Everything here is deliberately naive and depends only on the geometry
kernel, so it can serve as ground truth for the tree-based code.  An envelope
description is a list of ``(line, left, right)`` tuples covering the whole
x-axis from left to right.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from itertools import combinations
from typing import Iterable, Sequence

from .errors import EmptyStructure, PreconditionViolation
from .geometry import NEG_INF, POS_INF, Point, PseudoLine, below_at_neg_inf, cross, sort_by_order

EnvelopeDescription = list[tuple[PseudoLine, Point, Point]]


def _check_envelope(env: EnvelopeDescription) -> None:
    ids = [line.id for line, _, _ in env]
    assert len(ids) == len(set(ids)), "a pseudo-line contributes two segments"
    for (a, _, ar), (b, bl, _) in zip(env, env[1:]):
        assert ar == bl, "envelope is not contiguous"
        assert below_at_neg_inf(a, b), "envelope segments out of order"
    assert env[0][1] is NEG_INF and env[-1][2] is POS_INF, "envelope does not cover the x-axis"


def _argmin(lines: Sequence[PseudoLine], x) -> PseudoLine:
    best = lines[0]
    best_y = best.at(x)
    for line in lines[1:]:
        y = line.at(x)
        if y < best_y or (y == best_y and below_at_neg_inf(line, best)):
            best, best_y = line, y
    return best


def brute_envelope(lines: Iterable[PseudoLine]) -> EnvelopeDescription:
    """Lower envelope by sampling the argmin between all consecutive crossing abscissae."""
    lines = list(lines)
    if not lines:
        raise EmptyStructure("empty set has no envelope")
    xs = sorted({cross(a, b).x for a, b in combinations(lines, 2)})
    if not xs:
        return [(lines[0], NEG_INF, POS_INF)]
    samples = [xs[0] - 1] + [(a + b) / 2 for a, b in zip(xs, xs[1:])] + [xs[-1] + 1]
    owners = [_argmin(lines, t) for t in samples]
    env: EnvelopeDescription = []
    left = NEG_INF
    for i, owner in enumerate(owners):
        if i + 1 < len(owners) and owners[i + 1] is owner:
            continue
        if i + 1 == len(owners):
            right = POS_INF
        else:
            right = Point(xs[i], owner.at(xs[i]))
        env.append((owner, left, right))
        left = right
    _check_envelope(env)
    return env


def sweep_envelope(lines: Iterable[PseudoLine]) -> EnvelopeDescription:
    """Lower envelope by walking left to right, O(n) work per output segment.

    Only pseudo-lines above the current one at -inf can take over; the next
    breakpoint is the nearest crossing with one of them, and on a tie the
    pseudo-line lowest just right of the tie (the later one in the order)
    wins.
    """
    order = sort_by_order(lines)
    if not order:
        raise EmptyStructure("empty set has no envelope")
    i = 0
    left = NEG_INF
    env: EnvelopeDescription = []
    while True:
        cur = order[i]
        best = None
        best_x = None
        lo = left.x if left.finite else None
        crossing_x = cur.crossing_x
        for j in range(i + 1, len(order)):
            x = crossing_x(order[j])
            if lo is not None and x <= lo:
                continue
            if best is None or x <= best_x:
                best, best_x = j, x
        if best is None:
            env.append((cur, left, POS_INF))
            break
        right = Point(best_x, cur.at(best_x))
        env.append((cur, left, right))
        i, left = best, right
    _check_envelope(env)
    return env


def stack_envelope(lines: Iterable[PseudoLine]) -> EnvelopeDescription:
    """Lower envelope by the classic stack scan, O(n log n).

    Pseudo-lines are taken in the order at -inf, so each new one is the lowest
    at +inf so far.  It hides the stack top whenever it crosses the top at or
    left of the point where the top took over.  Only crossing abscissae are
    compared, so the scan is valid for any pseudo-line family.
    """
    order = sort_by_order(lines)
    if not order:
        raise EmptyStructure("empty set has no envelope")
    stack = [order[0]]
    starts = [None]  # x where each stack entry takes over; None for -inf
    for pl in order[1:]:
        while True:
            x = stack[-1].crossing_x(pl)
            if starts[-1] is not None and x <= starts[-1]:
                stack.pop()
                starts.pop()
                continue
            break
        stack.append(pl)
        starts.append(x)
    env: EnvelopeDescription = []
    left = NEG_INF
    for k, pl in enumerate(stack):
        if k + 1 < len(stack):
            x = starts[k + 1]
            right = Point(x, pl.at(x))
        else:
            right = POS_INF
        env.append((pl, left, right))
        left = right
    _check_envelope(env)
    return env


def brute_ray_shoot(lines: Iterable[PseudoLine], x0) -> PseudoLine:
    """Pseudo-line attaining the minimum at x0; ties go to the one lowest at -inf."""
    lines = list(lines)
    if not lines:
        raise EmptyStructure("ray shooting into an empty set")
    return _argmin(lines, x0)


def _values_at(env: EnvelopeDescription, rights: list, xs: list) -> list:
    # xs ascending; a breakpoint belongs to the segment on its left (same value either way)
    out = []
    i, last = 0, len(rights)
    at = env[0][0].at
    for x in xs:
        if i < last and rights[i] < x:
            while i < last and rights[i] < x:
                i += 1
            at = env[i][0].at
        out.append(at(x))
    return out


def brute_intersection(left_env: Sequence, right_env: Sequence) -> tuple[Point, PseudoLine, PseudoLine]:
    """Crossing of two order-separated envelopes, by scanning the sign of their
    difference over every breakpoint of either envelope.

    Returns the crossing together with the pseudo-lines of the segments that
    contain it, where left-envelope segments own their right endpoint and
    right-envelope segments own their left endpoint.
    """
    left_env, right_env = list(left_env), list(right_env)
    if not left_env or not right_env:
        raise PreconditionViolation("both envelopes must be nonempty")
    for env in (left_env, right_env):
        lines = [s[0] for s in env]
        if not all(map(below_at_neg_inf, lines, lines[1:])):
            raise PreconditionViolation("envelope segments out of order")
    if not below_at_neg_inf(left_env[-1][0], right_env[0][0]):
        raise PreconditionViolation("envelopes are not order-separated")

    rights_l = [s[2].x for s in left_env[:-1]]
    rights_r = [s[2].x for s in right_env[:-1]]
    xs = sorted(set(rights_l).union(rights_r))
    diff = [a - b for a, b in zip(_values_at(left_env, rights_l, xs), _values_at(right_env, rights_r, xs))]
    k = next((i for i, d in enumerate(diff) if d >= 0), len(xs))
    if any(d >= 0 for d in diff[:k]) or any(d <= 0 for d in diff[k + 1:]):
        raise PreconditionViolation("envelopes cross more than once")

    if not xs:
        t = 0
    elif k == 0:
        t = xs[0] - 1
    elif k == len(xs):
        t = xs[-1] + 1
    else:
        t = (xs[k - 1] + xs[k]) / 2
    a = left_env[bisect_left(rights_l, t)][0]
    b = right_env[bisect_left(rights_r, t)][0]
    q = cross(a, b)
    if (k > 0 and q.x <= xs[k - 1]) or (k < len(xs) and q.x > xs[k]):
        raise PreconditionViolation("no crossing found")

    u_star = left_env[bisect_left(rights_l, q.x)][0]
    v_star = right_env[bisect_right(rights_r, q.x)][0]
    assert u_star.at(q.x) == q.y and v_star.at(q.x) == q.y, "crossing is off the envelopes"
    return q, u_star, v_star


def true_paths(L_left, L_right) -> tuple[list, list]:
    """Root-to-leaf node paths to the leaves of each tree that contain the crossing."""
    _, a, b = brute_intersection(list(L_left), list(L_right))
    return path_to(L_left, a), path_to(L_right, b)


def path_to(tree, line) -> list:
    """Root-to-leaf node path to the leaf of ``tree`` carrying ``line``."""
    node = tree.root
    path = [node]
    while node.seg is None:
        first = node.right.first.line
        node = node.left if line is not first and below_at_neg_inf(line, first) else node.right
        path.append(node)
    if node.seg.line != line:
        raise PreconditionViolation(f"{line.id!r} has no segment in the tree")
    return path
