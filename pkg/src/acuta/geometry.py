"""Points, point sets, and acuteness margins.

Everything here is phrased in squared quantities: the margin of a triangle is
the smallest of its three apex inner products, so a configuration is acute
exactly when its margin is positive and right angles show up as margin zero.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from .scalars import FLOAT64, RATIONAL, Backend, RawScalar, ScalarError

Point = Tuple[RawScalar, ...]


class GeometryError(ValueError):
    """Raised for malformed points, duplicate entries, or degenerate input."""


def _coerce_point(raw: Sequence, backend: Backend) -> Point:
    if backend == RATIONAL:
        return tuple(Fraction(x) for x in raw)
    vals = tuple(float(x) for x in raw)
    for x in vals:
        if not math.isfinite(x):
            raise GeometryError(f"non-finite coordinate {x!r}")
    return vals


@dataclass(frozen=True)
class TripleWitness:
    """A specific angle: the one at ``apex_index`` spanned by the two legs.

    ``dot_value`` is the inner product of the two leg directions measured at
    the apex; it is negative for obtuse, zero for right, positive for acute.
    """

    apex_index: int
    leg_index_1: int
    leg_index_2: int
    dot_value: RawScalar

    def __post_init__(self) -> None:
        trio = (self.apex_index, self.leg_index_1, self.leg_index_2)
        if len(set(trio)) != 3:
            raise GeometryError(f"witness indices must be distinct: {trio}")

    def indices(self) -> Tuple[int, int, int]:
        return (self.apex_index, self.leg_index_1, self.leg_index_2)


@dataclass(frozen=True)
class PointSet:
    """An ordered, duplicate-free collection of points in one backend."""

    dim: int
    points: Tuple[Point, ...]
    backend: Backend
    provenance: Optional[dict] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise GeometryError(f"dim must be >= 1, got {self.dim}")
        coerced = tuple(_coerce_point(p, self.backend) for p in self.points)
        for p in coerced:
            if len(p) != self.dim:
                raise GeometryError(
                    f"point {p} has {len(p)} coordinates, expected {self.dim}")
        if len(set(coerced)) != len(coerced):
            raise GeometryError("duplicate points are not allowed")
        object.__setattr__(self, "points", coerced)

    def __len__(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        if self.backend != FLOAT64:
            raise GeometryError("as_array() requires the float64 backend")
        return np.asarray(self.points, dtype=np.float64)


def dot_at_apex(q: Point, p: Point, r: Point) -> RawScalar:
    """Inner product <p - q, r - q> of the two legs meeting at apex q."""
    total = None
    for qk, pk, rk in zip(q, p, r):
        term = (pk - qk) * (rk - qk)
        total = term if total is None else total + term
    if total is None:
        raise GeometryError("zero-dimensional points")
    return total


def triangle_margin(a: Point, b: Point, c: Point) -> RawScalar:
    """Smallest apex inner product over the three corners of a triangle.

    Coincident corners make every angle meaningless and raise; collinear
    corners are fine and simply yield a margin <= 0.
    """
    if a == b or a == c or b == c:
        raise GeometryError("coincident points have no triangle margin")
    return min(dot_at_apex(a, b, c), dot_at_apex(b, a, c), dot_at_apex(c, a, b))


def squared_diameter(ps: PointSet) -> RawScalar:
    """Largest squared distance between two points of the set."""
    pts = ps.points
    n = len(pts)
    if n < 2:
        zero = Fraction(0) if ps.backend == RATIONAL else 0.0
        return zero
    if ps.backend == FLOAT64:
        arr = ps.as_array()
        sq = ((arr[:, None, :] - arr[None, :, :]) ** 2).sum(axis=2)
        return float(sq.max())
    best = None
    for i in range(n):
        pi = pts[i]
        for j in range(i + 1, n):
            pj = pts[j]
            d2 = sum((x - y) * (x - y) for x, y in zip(pi, pj))
            if best is None or d2 > best:
                best = d2
    return best


def _thread_count(threads: Optional[int]) -> int:
    if threads is not None:
        n = int(threads)
    else:
        raw = os.environ.get("ACUTA_THREADS", "")
        try:
            n = int(raw) if raw else 1
        except ValueError:
            n = 1
    return max(1, n)


def _apex_scan_exact(pts: Tuple[Point, ...], q: int):
    """Min leg-pair inner product at apex q, with the lex-first argmin pair."""
    n = len(pts)
    pq = pts[q]
    others = [i for i in range(n) if i != q]
    diffs = {i: tuple(x - y for x, y in zip(pts[i], pq)) for i in others}
    best = None
    best_pair = None
    for a in range(len(others)):
        i = others[a]
        di = diffs[i]
        for b in range(a + 1, len(others)):
            j = others[b]
            dj = diffs[j]
            d = sum(x * y for x, y in zip(di, dj))
            if best is None or d < best:
                best, best_pair = d, (i, j)
    return best, best_pair


def _apex_scan_float(arr: np.ndarray, q: int):
    n = arr.shape[0]
    diffs = arr - arr[q]
    gram = diffs @ diffs.T
    others = np.array([i for i in range(n) if i != q])
    sub = gram[np.ix_(others, others)]
    iu, ju = np.triu_indices(len(others), k=1)
    vals = sub[iu, ju]
    k = int(np.argmin(vals))  # argmin returns the first minimum: lex order
    return float(vals[k]), (int(others[iu[k]]), int(others[ju[k]]))


def set_margin(ps: PointSet,
               threads: Optional[int] = None) -> Tuple[RawScalar, TripleWitness]:
    """Margin of a whole point set: the worst angle over all triples.

    Returns the minimum apex inner product together with a witness. The
    witness is deterministic regardless of how the scan is chunked: among all
    triples achieving the minimum, the lexicographically smallest
    ``(apex, leg1, leg2)`` with ``leg1 < leg2`` is reported.
    """
    n = len(ps)
    if n < 3:
        raise GeometryError(f"need at least 3 points, got {n}")
    nthreads = _thread_count(threads)
    arr = ps.as_array() if ps.backend == FLOAT64 else None

    def scan(q: int):
        if arr is not None:
            return _apex_scan_float(arr, q)
        return _apex_scan_exact(ps.points, q)

    # Partition apexes into contiguous chunks; each chunk reduces to its own
    # (margin, witness) and chunk results merge with the same deterministic
    # rule, so the outcome does not depend on the chunk count.
    apexes = list(range(n))
    chunks = [apexes[k::nthreads] for k in range(nthreads)]
    candidates = []
    for chunk in chunks:
        local = None
        for q in chunk:
            val, (i, j) = scan(q)
            key = (val, (q, i, j))
            if local is None or key < local:
                local = key
        if local is not None:
            candidates.append(local)
    margin, (q, i, j) = min(candidates)
    return margin, TripleWitness(q, i, j, margin)
