import random

import pytest
from gmpy2 import mpq

from pseudoenv import envelope_tree as et
from pseudoenv.envelope_tree import EnvelopeSegment, EnvelopeTree, check_tree, join, locate, singleton, split_at
from pseudoenv.errors import EmptyStructure, InvariantViolation, MismatchedBoundary, OrderViolation, OutOfSpan
from pseudoenv.geometry import NEG_INF, POS_INF, Line, Parabola
from pseudoenv.oracle import sweep_envelope
from pseudoenv.workloads import LineSource

from conftest import P, env_tree

A, B = Line("a", 2, 0), Line("b", 1, 1)


def seq(t):
    return [tuple(s) for s in t]


def test_singleton():
    for pl in (Line("l", 1, 0), Parabola("p", 0, 0)):
        t = singleton(pl)
        assert len(t) == 1 and seq(t) == [(pl, NEG_INF, POS_INF)]
        for x in (-100, 0, mpq(7, 3)):
            assert locate(t, x) is pl
        check_tree(t, full_span=True)


def test_split_singleton():
    pl = Line("l", 1, 0)
    left, right = split_at(singleton(pl), P(0, 0))
    assert seq(left) == [(pl, NEG_INF, P(0, 0))]
    assert seq(right) == [(pl, P(0, 0), POS_INF)]


def test_split_at_breakpoint():
    left, right = split_at(env_tree(A, B), P(1, 2))
    assert seq(left) == [(A, NEG_INF, P(1, 2))]
    assert seq(right) == [(B, P(1, 2), POS_INF)]


def test_split_inside_segment():
    left, right = split_at(env_tree(A, B), P("1/2", 1))
    assert seq(left) == [(A, NEG_INF, P("1/2", 1))]
    assert seq(right) == [(A, P("1/2", 1), P(1, 2)), (B, P(1, 2), POS_INF)]
    for t in (left, right):
        check_tree(t)


def test_split_out_of_span():
    left, _ = split_at(env_tree(A, B), P(0, 0))
    with pytest.raises(OutOfSpan):
        split_at(left, P(5, 10))
    with pytest.raises(OutOfSpan):
        split_at(singleton(A), NEG_INF)


def test_join():
    d = Line("d", -2, 2)
    q = P("1/2", 1)
    t1 = EnvelopeTree.from_segments([EnvelopeSegment(A, NEG_INF, q)])
    t2 = EnvelopeTree.from_segments([EnvelopeSegment(d, q, POS_INF)])
    t = join(t1, t2, q)
    assert seq(t) == [(A, NEG_INF, q), (d, q, POS_INF)]
    check_tree(t, full_span=True)
    with pytest.raises(MismatchedBoundary):
        join(t1, t2, P(1, 2))
    with pytest.raises(OrderViolation):
        bad1 = EnvelopeTree.from_segments([EnvelopeSegment(d, NEG_INF, q)])
        bad2 = EnvelopeTree.from_segments([EnvelopeSegment(A, q, POS_INF)])
        join(bad1, bad2, q)


def test_join_merges_cut():
    t = env_tree(A, B)
    left, right = split_at(t, P("1/2", 1))
    rejoined = join(left, right, P("1/2", 1))
    assert seq(rejoined) == seq(t)
    assert len(rejoined) == 2


def test_locate():
    t = env_tree(A, B)
    assert locate(t, 0) is A
    assert locate(t, 5) is B
    assert locate(t, 1) is A
    with pytest.raises(EmptyStructure):
        locate(EnvelopeTree(), 0)


def test_dump():
    assert et.dump(env_tree(A, B)) == "a@[-inf,1] b@[1,+inf]"


def _random_tree(seed):
    rng = random.Random(seed)
    family = (Line, Parabola)[seed % 2]
    src = LineSource(rng, family, "convex" if seed % 3 else "wide", 80)
    lines = [src.fresh() for _ in range(rng.randint(1, 80))]
    return rng, lines, EnvelopeTree.from_segments(sweep_envelope(lines))


@pytest.mark.parametrize("seed", range(60))
def test_split_join_inverse(seed):
    rng, lines, t = _random_tree(seed)
    check_tree(t, full_span=True)
    segs = seq(t)
    for _ in range(10):
        seg = rng.choice(segs)
        lo = seg[1].x if seg[1].finite else (seg[2].x - 5 if seg[2].finite else mpq(-5))
        hi = seg[2].x if seg[2].finite else lo + 10
        x = lo + (hi - lo) * mpq(rng.randint(0, 8), 8)
        q = P(x, seg[0].at(x))
        left, right = split_at(t, q)
        check_tree(left)
        check_tree(right)
        assert left.last.right == right.first.left == q
        assert seq(join(left, right, q)) == segs


@pytest.mark.parametrize("seed", range(30))
def test_locate_is_argmin(seed):
    rng, lines, t = _random_tree(seed)
    for _ in range(100):
        x = mpq(rng.randint(-10**5, 10**5), rng.randint(1, 50))
        assert locate(t, x).at(x) == min(pl.at(x) for pl in lines)
    for s in list(t)[:-1]:
        assert locate(t, s.right.x) is s.line


def test_height_bound_after_concat():
    _, lines, t = _random_tree(4)
    parts = []
    rest = t
    while len(rest) > 1:
        s = rest.first
        left, rest = et.split_where(rest, lambda seg, s=s: seg is s)
        parts.append(left)
    acc = EnvelopeTree()
    for part in parts + [rest]:
        acc = et.concat(acc, part)
        check_tree(acc)
    assert seq(acc) == seq(t)


def test_check_tree_negative():
    t = env_tree(A, B)
    bad = EnvelopeTree.from_segments([EnvelopeSegment(A, NEG_INF, P(1, 2)), EnvelopeSegment(B, P(1, 3), POS_INF)])
    with pytest.raises(InvariantViolation):
        check_tree(bad)
    t.root.left.height = 5
    with pytest.raises(InvariantViolation):
        check_tree(t)
