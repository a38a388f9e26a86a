import random

import pytest
from gmpy2 import mpq

from pseudoenv.geometry import Line, Parabola
from pseudoenv.oracle import stack_envelope
from pseudoenv.workloads import convex_envelope, random_envelope_pair


@pytest.mark.parametrize("family", [Line, Parabola])
@pytest.mark.parametrize("seed", range(20))
def test_convex_envelope_matches_oracle(family, seed):
    rng = random.Random(seed)
    slopes = sorted((mpq(a, rng.randint(1, 5)) for a in rng.sample(range(-500, 500), rng.randint(1, 60))),
                    reverse=True)
    slopes = sorted(set(slopes), reverse=True)
    alpha = mpq(rng.randint(1, 9), rng.randint(1, 9))
    segs = convex_envelope(family, slopes, alpha, mpq(rng.randint(-50, 50), 3), "t")
    expected = stack_envelope([s.line for s in segs])
    assert [tuple(s) for s in segs] == expected


@pytest.mark.parametrize("family", [Line, Parabola])
def test_random_pairs_are_separated(family):
    rng = random.Random(7)
    for _ in range(30):
        left, right = random_envelope_pair(rng, family, 64)
        assert left.last.line.precedes(right.first.line)
