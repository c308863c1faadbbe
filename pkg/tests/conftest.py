import itertools
import random
from fractions import Fraction

import pytest

from acuta import PointSet


def naive_margin(points):
    """Reference margin: direct triple loop, written independently.

    Returns (margin, (apex, leg1, leg2)) with the same tie rule as the
    library — smallest value, lexicographically smallest indices.
    """
    best = None
    n = len(points)
    for i, j, k in itertools.combinations(range(n), 3):
        for (q, a, b) in ((i, j, k), (j, i, k), (k, i, j)):
            pq, pa, pb = points[q], points[a], points[b]
            dot = sum((x - z) * (y - z) for x, y, z in zip(pa, pb, pq))
            key = (dot, (q, a, b))
            if best is None or key < best:
                best = key
    return best


def random_rational_points(rng: random.Random, n: int, dim: int,
                           span: int = 4, den_pow: int = 3):
    """n distinct points with coordinates p/2^k, |p/2^k| <= span."""
    pts = set()
    while len(pts) < n:
        den = 2 ** rng.randint(0, den_pow)
        p = tuple(Fraction(rng.randint(-span * den, span * den), den)
                  for _ in range(dim))
        pts.add(p)
    return tuple(sorted(pts))


def random_rational_set(seed: int, n: int, dim: int) -> PointSet:
    rng = random.Random(seed)
    return PointSet(dim=dim, points=random_rational_points(rng, n, dim),
                    backend="rational")


@pytest.fixture
def rng():
    return random.Random(20240817)
