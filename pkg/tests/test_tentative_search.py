import random

import pytest
from gmpy2 import mpq

from pseudoenv.envelope_tree import EnvelopeTree, singleton
from pseudoenv.errors import PreconditionViolation
from pseudoenv.fuzzing import merge_case
from pseudoenv.geometry import NEG_INF, POS_INF, Line, Parabola
from pseudoenv.oracle import brute_intersection, true_paths
from pseudoenv.tentative_search import (
    CASE1,
    CASE2,
    CASE3,
    SearchNode,
    SearchTrace,
    check_invariant1,
    check_progress,
    classify,
    find_intersection,
    step_budget,
)
from pseudoenv.workloads import random_envelope_pair

from conftest import P, env_tree


def test_classify_examples():
    u = SearchNode(NEG_INF, (Line("a", 1, 0),), "left_env")
    v = SearchNode(POS_INF, (Line("b", -1, 0),), "right_env")
    assert classify(u, v) is CASE3
    a, d = Line("a", 2, 0), Line("d", -2, 2)
    assert classify(SearchNode(P(1, 2), (a,)), SearchNode(POS_INF, (d,), "right_env")) is CASE1
    assert classify(SearchNode(NEG_INF, (a,)), SearchNode(P(-1, 4), (d,), "right_env")) is CASE2


def test_classify_precedence():
    # both points on the other envelope: Case 1 wins over Case 2
    a, d = Line("a", 2, 0), Line("d", -2, 2)
    q = P("1/2", 1)
    assert classify(SearchNode(q, (a,)), SearchNode(q, (d,), "right_env")) is CASE1


def test_singletons():
    trace = SearchTrace()
    res = find_intersection(singleton(Line("a", 1, 0)), singleton(Line("b", -1, 0)), trace=trace)
    assert res.q == P(0, 0)
    assert trace.iterations == 1 and trace.steps[0].cases == [CASE3]
    assert check_invariant1(trace) and check_progress(trace)


def test_four_lines():
    left = env_tree(Line("a", 2, 0), Line("b", 1, 1))
    right = env_tree(Line("c", -1, 4), Line("d", -2, 2))
    trace = SearchTrace()
    res = find_intersection(left, right, trace=trace, debug=True)
    assert res.q == P("1/2", 1)
    assert (res.left_line.id, res.right_line.id) == ("a", "d")
    assert trace.table() == [
        ("1", "b1", "b1", "-", "-", "Case 2"),
        ("2", "b1", "s2", "-", "-", "Case 1"),
        ("3", "s1*", "s2*", "-", "-", "Case 3 -> End"),
    ]
    assert check_invariant1(trace) and check_progress(trace)


def test_parabolas_golden():
    left = env_tree(Parabola("p0", 0, 0), Parabola("p1", 1, -1))
    right = env_tree(Parabola("p2", 2, -1), Parabola("p3", 3, 0))
    res = find_intersection(left, right)
    # frozen from brute_intersection
    assert res.q == P("3/2", "-3/4")
    assert (res.left_line.id, res.right_line.id) == ("p1", "p2")
    assert brute_intersection(list(left), list(right)) == tuple(res)


def test_precondition():
    with pytest.raises(PreconditionViolation):
        find_intersection(singleton(Line("a", -1, 0)), singleton(Line("b", 1, 0)))
    with pytest.raises(PreconditionViolation):
        find_intersection(EnvelopeTree(), singleton(Line("b", 1, 0)))


def _traced_pair(seed, family=Line, max_size=64):
    rng = random.Random(seed)
    left, right = random_envelope_pair(rng, family, max_size)
    trace = SearchTrace()
    find_intersection(left, right, trace=trace, debug=True)
    return left, right, trace


@pytest.mark.parametrize("seed", range(200))
def test_random_merges(seed):
    family = (Line, Parabola)[seed % 2]
    out = merge_case("unit", family, seed, max_size=64)
    assert out.iterations <= out.budget
    assert out.classify_calls <= 2 * out.iterations


def test_step_bound_matches_paths():
    for seed in range(50):
        left, right, trace = _traced_pair(seed)
        pi_l, pi_r = true_paths(left, right)
        assert trace.iterations <= 2 * (len(pi_l) + len(pi_r)) <= step_budget(left, right)


def _corrupt(trace):
    # swap a stack entry for a node that cannot be there
    for s in trace.steps:
        if s.u_stack:
            s.u_stack = (trace.left.root.left,) + s.u_stack[1:] if s.u_stack[0] is not trace.left.root.left \
                else (trace.left.root.right,) + s.u_stack[1:]
            return True
        if s.v_stack:
            s.v_stack = (trace.right.root.right,) + s.v_stack[1:] if s.v_stack[0] is not trace.right.root.right \
                else (trace.right.root.left,) + s.v_stack[1:]
            return True
    return False


def test_invariant1_negative_control():
    corrupted = 0
    for seed in range(100):
        _, _, trace = _traced_pair(seed)
        assert check_invariant1(trace)
        if _corrupt(trace):
            assert not check_invariant1(trace)
            corrupted += 1
    assert corrupted > 10


def test_progress_negative_control():
    _, _, trace = _traced_pair(3)
    assert check_progress(trace)
    trace.steps.insert(1, trace.steps[0])
    assert not check_progress(trace)
