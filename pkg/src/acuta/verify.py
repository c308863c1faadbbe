"""Certification of point sets, independent of how they were built.

Everything in this module re-derives its predicates from scratch: the triple
enumeration, the inner products, the diameter scan. None of it calls the
construction-side margin code. That duplication is deliberate — a bug in a
shared predicate would otherwise hide itself by infecting both the builder
and its certificate.

Checks come in three strengths:

* ``verify_acute``: every angle strictly acute (the full certificate);
* ``verify_nonobtuse``: no obtuse angle (right angles tolerated);
* ``verify_antipodal_witness``: every pair of points spans a slab containing
  all other points strictly in its interior. In exact arithmetic this is
  equivalent to acuteness (the slab condition at pair (x, y) aggregates the
  angles at x and y over every third point), but it is organized per pair
  and produces pairwise witnesses.
"""
from __future__ import annotations

import itertools
import math
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .geometry import PointSet, TripleWitness
from .scalars import FLOAT64, RATIONAL, Backend, RawScalar, Tolerance

__all__ = [
    "VerificationReport",
    "CardinalityReport",
    "verify_acute",
    "verify_nonobtuse",
    "verify_antipodal_witness",
    "verify_cardinality_bounds",
    "fibonacci",
    "ef_bound",
    "legacy_bounds",
    "target_size",
    "hard_cap",
]


@dataclass(frozen=True)
class VerificationReport:
    check: str
    verdict: bool
    margin: Optional[RawScalar]
    witness: Optional[TripleWitness]
    triples_checked: int
    squared_diameter: RawScalar
    backend: Backend
    elapsed: float


def _threads(threads: Optional[int]) -> int:
    if threads is None:
        raw = os.environ.get("ACUTA_THREADS", "")
        try:
            threads = int(raw) if raw else 1
        except ValueError:
            threads = 1
    return max(1, int(threads))


def _sqdiam(ps: PointSet) -> RawScalar:
    pts = ps.points
    n = len(pts)
    if ps.backend == FLOAT64:
        arr = np.asarray(pts, dtype=np.float64)
        g = arr @ arr.T
        sq = np.diag(g)
        dist = sq[:, None] + sq[None, :] - 2.0 * g
        return float(dist.max()) if n > 1 else 0.0
    best = Fraction(0)
    for i in range(n):
        for j in range(i + 1, n):
            d2 = sum((a - b) * (a - b) for a, b in zip(pts[i], pts[j]))
            if d2 > best:
                best = d2
    return best


def _default_tolerance(ps: PointSet, sqdiam: RawScalar) -> Tolerance:
    if ps.backend == RATIONAL:
        return Tolerance.exact()
    return Tolerance.scaled(float(sqdiam))


def _margin_scan_exact(pts, apexes: List[int]):
    n = len(pts)
    best = None
    for q in apexes:
        pq = pts[q]
        rel = [None] * n
        for i in range(n):
            if i != q:
                rel[i] = tuple(a - b for a, b in zip(pts[i], pq))
        others = [i for i in range(n) if i != q]
        for ai in range(len(others)):
            i = others[ai]
            ri = rel[i]
            for aj in range(ai + 1, len(others)):
                j = others[aj]
                rj = rel[j]
                dot = sum(x * y for x, y in zip(ri, rj))
                key = (dot, (q, i, j))
                if best is None or key < best:
                    best = key
    return best


def _margin_scan_float(arr: np.ndarray,
                       apexes: List[int]) -> Optional[Tuple[float, Tuple[int, int, int]]]:
    n = arr.shape[0]
    g = arr @ arr.T
    best = None
    for q in apexes:
        # dot(q; i, j) = G[i,j] - G[i,q] - G[j,q] + G[q,q]
        d = g - g[:, q][:, None] - g[q, :][None, :] + g[q, q]
        others = np.array([i for i in range(n) if i != q])
        sub = d[np.ix_(others, others)]
        iu, ju = np.triu_indices(len(others), k=1)
        vals = sub[iu, ju]
        k = int(np.argmin(vals))
        key = (float(vals[k]), (q, int(others[iu[k]]), int(others[ju[k]])))
        if best is None or key < best:
            best = key
    return best


def _full_margin(ps: PointSet, threads: Optional[int]):
    """Minimum apex inner product over all angles, with lex-min witness.

    The apex list is split into chunks, each chunk reduced independently and
    the chunk results merged by the same (value, indices) order, so the
    result is identical for every thread count.
    """
    n = len(ps)
    nt = _threads(threads)
    chunks = [list(range(n))[k::nt] for k in range(nt)]
    if ps.backend == FLOAT64:
        arr = np.asarray(ps.points, dtype=np.float64)
        parts = [_margin_scan_float(arr, chunk) for chunk in chunks]
    else:
        parts = [_margin_scan_exact(ps.points, chunk) for chunk in chunks]
    margin, (q, i, j) = min(p for p in parts if p is not None)
    checked = n * (n - 1) * (n - 2) // 6
    return margin, (q, i, j), checked


def _verdict_scan(ps: PointSet, fails) -> Tuple[bool, Optional[TripleWitness], int]:
    """Single-threaded i<j<k sweep, stopping at the first failing angle."""
    pts = ps.points
    n = len(pts)
    checked = 0
    for i, j, k in itertools.combinations(range(n), 3):
        checked += 1
        for (q, a, b) in ((i, j, k), (j, i, k), (k, i, j)):
            pq, pa, pb = pts[q], pts[a], pts[b]
            dot = sum((x - z) * (y - z) for x, y, z in zip(pa, pb, pq))
            if fails(dot):
                return False, TripleWitness(q, a, b, dot), checked
    return True, None, checked


def _angle_check(ps: PointSet, check: str, tolerance: Optional[Tolerance],
                 mode: str, threads: Optional[int],
                 fail_rule) -> VerificationReport:
    if mode not in ("margin", "verdict"):
        raise ValueError(f"unknown mode: {mode!r}")
    if len(ps) < 3:
        raise ValueError("verification needs at least 3 points")
    start = time.perf_counter()
    sqd = _sqdiam(ps)
    tol = tolerance if tolerance is not None else _default_tolerance(ps, sqd)
    if tol.backend != ps.backend:
        raise ValueError(
            f"tolerance backend {tol.backend} does not match point set "
            f"backend {ps.backend}")
    fails = fail_rule(tol.strict_margin)

    if mode == "margin":
        margin, (q, i, j), checked = _full_margin(ps, threads)
        verdict = not fails(margin)
        witness = TripleWitness(q, i, j, margin)
        return VerificationReport(
            check=check, verdict=verdict, margin=margin, witness=witness,
            triples_checked=checked, squared_diameter=sqd,
            backend=ps.backend, elapsed=time.perf_counter() - start)

    verdict, witness, checked = _verdict_scan(ps, fails)
    return VerificationReport(
        check=check, verdict=verdict,
        margin=witness.dot_value if witness else None, witness=witness,
        triples_checked=checked, squared_diameter=sqd,
        backend=ps.backend, elapsed=time.perf_counter() - start)


def verify_acute(ps: PointSet, tolerance: Optional[Tolerance] = None,
                 mode: str = "margin",
                 threads: Optional[int] = None) -> VerificationReport:
    """Certify that every angle is strictly acute.

    In ``"margin"`` mode the full scan always runs and the report carries
    the exact minimum with a deterministic witness; ``"verdict"`` mode may
    stop at the first violation (a pass still scans everything).
    """
    return _angle_check(ps, "acute", tolerance, mode, threads,
                        lambda strict: (lambda dot: not dot > strict))


def verify_nonobtuse(ps: PointSet, tolerance: Optional[Tolerance] = None,
                     mode: str = "margin",
                     threads: Optional[int] = None) -> VerificationReport:
    """Certify that no angle is obtuse (right angles are allowed).

    Exact backend: every inner product must be >= 0. Float backend: must
    not drop below minus the strict margin.
    """
    return _angle_check(ps, "nonobtuse", tolerance, mode, threads,
                        lambda strict: (lambda dot: dot < -strict))


def verify_antipodal_witness(ps: PointSet,
                             tolerance: Optional[Tolerance] = None) -> VerificationReport:
    """Certify the pairwise slab condition, with per-pair witnesses.

    For every pair (x, y) and every third point z the projection value
    t = <z - x, y - x> must satisfy 0 < t < |y - x|^2 (strictly, with the
    float backend demanding clearance by the strict margin). The witness
    reports the extremal configuration: apex = x, first leg = y (the pair
    partner), second leg = z; its dot value is the smaller of t and
    |y - x|^2 - t. Passing this check is necessary for acuteness, and in
    exact arithmetic the two are equivalent.
    """
    if len(ps) < 3:
        raise ValueError("verification needs at least 3 points")
    start = time.perf_counter()
    sqd = _sqdiam(ps)
    tol = tolerance if tolerance is not None else _default_tolerance(ps, sqd)
    if tol.backend != ps.backend:
        raise ValueError("tolerance backend does not match point set")
    strict = tol.strict_margin

    pts = ps.points
    n = len(pts)
    best = None
    checked = 0
    if ps.backend == FLOAT64:
        arr = np.asarray(pts, dtype=np.float64)
        for x in range(n):
            for y in range(x + 1, n):
                axis = arr[y] - arr[x]
                length = float(axis @ axis)
                t = (arr - arr[x]) @ axis
                for z in range(n):
                    if z == x or z == y:
                        continue
                    val = min(float(t[z]), length - float(t[z]))
                    key = (val, (x, y, z))
                    if best is None or key < best:
                        best = key
                    checked += 1
    else:
        for x in range(n):
            px = pts[x]
            for y in range(x + 1, n):
                py = pts[y]
                axis = tuple(a - b for a, b in zip(py, px))
                length = sum(a * a for a in axis)
                for z in range(n):
                    if z == x or z == y:
                        continue
                    t = sum((a - b) * c for a, b, c in zip(pts[z], px, axis))
                    val = min(t, length - t)
                    key = (val, (x, y, z))
                    if best is None or key < best:
                        best = key
                    checked += 1
    margin, (x, y, z) = best
    verdict = bool(margin > strict)
    return VerificationReport(
        check="antipodal", verdict=verdict, margin=margin,
        witness=TripleWitness(x, y, z, margin), triples_checked=checked,
        squared_diameter=sqd, backend=ps.backend,
        elapsed=time.perf_counter() - start)


# ---------------------------------------------------------------------------
# cardinality bookkeeping


def target_size(d: int) -> int:
    """Cardinality achieved by the perturbed-cube-plus-apex family."""
    return 2 ** (d - 1) + 1


def hard_cap(d: int) -> int:
    """No acute set in R^d can have more than 2^d - 1 points."""
    return 2 ** d - 1


def fibonacci(k: int) -> int:
    if k < 1:
        raise ValueError("index must be >= 1")
    a, b = 1, 1
    for _ in range(k - 2):
        a, b = b, a + b
    return b if k > 1 else a


def ef_bound(d: int) -> int:
    """floor((2/sqrt(3))**d / 2), computed exactly as isqrt(4^(d-1) // 3^d)."""
    return math.isqrt(4 ** (d - 1) // 3 ** d)


def legacy_bounds(d: int) -> dict:
    """Earlier lower-bound families for acute sets in R^d."""
    half = d // 2
    return {
        "fibonacci": fibonacci(d + 2),
        "exponential_half": ef_bound(d),
        "linear": 2 * d - 1,
        "three_power": 3 ** (half - 1) - 1 if half >= 1 else 0,
    }


@dataclass(frozen=True)
class CardinalityReport:
    n: int
    dim: int
    target: int
    cap: int
    verdict: str
    note: str


def verify_cardinality_bounds(ps: PointSet) -> CardinalityReport:
    """Place a set's cardinality against the target and the hard cap.

    A count above ``2^d - 1`` is flagged impossible outright (no acute set
    that large exists, so such an input cannot be acute). A count below the
    target is annotated with which earlier record families it still beats.
    """
    n = len(ps)
    d = ps.dim
    tgt = target_size(d)
    cap = hard_cap(d)
    if n > cap:
        return CardinalityReport(
            n, d, tgt, cap, "impossible",
            f"{n} points exceed the hard cap {cap}; no acute set this large "
            "exists in this dimension")
    if n == tgt:
        return CardinalityReport(
            n, d, tgt, cap, "matches_target",
            f"matches the perturbed-cube target 2^{d - 1}+1")
    legacy = legacy_bounds(d)
    beaten = sorted(name for name, v in legacy.items() if n > v)
    if n < tgt:
        note = (f"below the target {tgt}; still beats: "
                + (", ".join(beaten) if beaten else "none of the earlier records"))
        return CardinalityReport(n, d, tgt, cap, "below_target", note)
    return CardinalityReport(
        n, d, tgt, cap, "above_target",
        f"between the target {tgt} and the hard cap {cap}")
