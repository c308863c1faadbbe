"""Building candidate acute configurations from perturbed hypercubes.

The target cardinality in dimension d is ``2**(d-1) + 1``: the ``2**(d-1)``
vertices of a unit (d-1)-cube embedded at height zero, each displaced a
little, plus one apex raised over the cube's center. Right angles are native
to the cube, so the whole game is displacing vertices without creating new
bad angles while destroying all the old ones.

Two schedules are offered:

* ``"geometric"`` sweeps the vertices in lexicographic order and displaces
  vertex i with the coupled step of scale ``s_1 * gamma**i``, halving ``s_1``
  and restarting (up to ``max_retries`` times) whenever the sweep fails to
  end acute. This is the transparent, schedule-driven path; for most
  dimensions it fails honestly (see the module notes below).
* ``"adaptive"`` returns a certified configuration chosen per dimension:
  frozen searched designs for d <= 4, an exact-rational scale ladder for
  d = 5, and an explicit ConstructionError beyond.

Why the split: the coupled one-vertex step repairs every right angle it
touches, but its Case-2 repairs are worth only ~(d-1)*a**2, fourth order in
the step scale. Each later vertex must therefore move *cubically* less than
the one before it, and with ``2**(d-2)`` antipodal classes to separate the
final scales shrink doubly exponentially in d. At d = 5 that is still
representable as exact rationals (smallest scale 2**-12028); in float64 it
already underflows, and at d >= 6 the digit counts leave any certifiable
arithmetic. Those limits are inherent to the schedule, not to this
implementation, and the errors raised say so.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import _designs
from .geometry import GeometryError, Point, PointSet, squared_diameter
from .scalars import FLOAT64, RATIONAL, Backend, RawScalar

__all__ = [
    "ConstructionError",
    "ConstructionConfig",
    "TraceStep",
    "ConstructionTrace",
    "hypercube_vertices",
    "perturb_vertex",
    "lemma_check",
    "LemmaReport",
    "safe_radius",
    "apex_point",
    "construct_acute_cube",
    "construct_full",
    "random_baseline",
]


class ConstructionError(RuntimeError):
    """A schedule could not produce (or certify) the requested set."""


def _coupled(mu: int, s: RawScalar) -> Tuple[RawScalar, RawScalar]:
    """The coupled step sizes (a, b) = ((d-1) s^2, (d-1) s).

    Producer and trace validator both call this, so the float backend gets
    bit-identical values on both sides.
    """
    return mu * s * s, mu * s


@dataclass(frozen=True)
class ConstructionConfig:
    """Parameters for one construction run.

    ``apex_height`` must satisfy c^2 > (d-1)/4 strictly (checked exactly in
    the rational backend); equality would put the apex on the sphere where
    the apex angle over an antipodal cube pair degenerates to right.
    """

    dim: int
    backend: Backend = RATIONAL
    schedule: str = "adaptive"
    s1: Optional[RawScalar] = None
    gamma: Optional[RawScalar] = None
    apex_height: Optional[RawScalar] = None
    seed: int = 0
    max_retries: int = 40

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise ValueError(f"dim must be >= 2, got {self.dim}")
        if self.backend not in (RATIONAL, FLOAT64):
            raise ValueError(f"unknown backend: {self.backend!r}")
        if self.schedule not in ("adaptive", "geometric"):
            raise ValueError(f"unknown schedule: {self.schedule!r}")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")

        if self.schedule == "geometric":
            s1 = Fraction(1, 10) if self.s1 is None else Fraction(self.s1)
            gamma = Fraction(1, 4) if self.gamma is None else Fraction(self.gamma)
            if not s1 > 0:
                raise ValueError("geometric schedule needs s1 > 0")
            if not (0 < gamma < 1):
                raise ValueError("geometric schedule needs 0 < gamma < 1")
            object.__setattr__(self, "s1", self._num(s1))
            object.__setattr__(self, "gamma", self._num(gamma))
        else:
            if self.s1 is not None or self.gamma is not None:
                raise ValueError("s1/gamma only apply to the geometric schedule")

        c = Fraction(self.dim, 2) if self.apex_height is None \
            else Fraction(self.apex_height)
        if not 4 * c * c > self.dim - 1:
            raise ValueError(
                f"apex_height {c} violates c^2 > (d-1)/4 (boundary included)")
        object.__setattr__(self, "apex_height", self._num(c))

    def _num(self, x: Fraction) -> RawScalar:
        return x if self.backend == RATIONAL else float(x)


@dataclass(frozen=True)
class TraceStep:
    """One displacement: vertex ``index`` moved by at most ``eps``.

    ``s`` is the coupled scale of the step, ``a`` and ``b`` its in-plane and
    lift components. For table-design steps the displacement is free-form and
    ``s`` is the nominal scale ``eps/(d-1)`` of a coupled step with the same
    displacement bound; for ladder and geometric steps ``s`` is the scale
    actually applied.
    """

    index: int
    eps: RawScalar
    s: RawScalar
    a: RawScalar
    b: RawScalar


@dataclass(frozen=True)
class ConstructionTrace:
    dim: int
    backend: Backend
    vertex_order: Tuple[int, ...]
    steps: Tuple[TraceStep, ...] = field(default=())

    def __post_init__(self) -> None:
        n = len(self.vertex_order)
        if len(self.steps) != n:
            raise ValueError("one step per vertex required")
        if sorted(self.vertex_order) != list(range(n)):
            raise ValueError("vertex_order must be a permutation of 0..n-1")
        mu = self.dim - 1
        prev = None
        for st in self.steps:
            if st.eps < 0:
                raise ValueError(f"negative eps in step {st.index}")
            if prev is not None and st.eps > prev:
                raise ValueError("eps must be non-increasing along the trace")
            prev = st.eps
            a, b = _coupled(mu, st.s)
            if st.a != a or st.b != b:
                raise ValueError(
                    f"step {st.index} breaks the coupling a=(d-1)s^2, b=(d-1)s")


def hypercube_vertices(d: int, backend: Backend = RATIONAL) -> PointSet:
    """Vertices of the unit (d-1)-cube embedded in R^d at last coordinate 0.

    Points are listed in lexicographic binary order of the first d-1
    coordinates.
    """
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    zero: RawScalar = Fraction(0) if backend == RATIONAL else 0.0
    one: RawScalar = Fraction(1) if backend == RATIONAL else 1.0
    pts = []
    for bits in itertools.product((0, 1), repeat=d - 1):
        coords = tuple(one if x else zero for x in bits) + (zero,)
        pts.append(coords)
    return PointSet(dim=d, points=tuple(pts), backend=backend)


def _is_cube_vertex(v: Point) -> bool:
    return all(x == 0 or x == 1 for x in v[:-1]) and v[-1] == 0


def perturb_vertex(v: Point, s: RawScalar) -> Point:
    """Displace one padded cube vertex by the coupled step of scale s.

    Every in-plane coordinate moves distance ``a = (d-1) s^2`` into the cube
    (0 -> a, 1 -> 1-a) and the vertex is lifted to height ``b = (d-1) s``.
    Requires 0 < s and (d-1) s^2 < 1 so the move stays inside the cell.
    """
    d = len(v)
    if d < 2:
        raise GeometryError("perturb_vertex needs points in R^d, d >= 2")
    if not _is_cube_vertex(v):
        raise GeometryError(f"not a padded cube vertex: {v}")
    mu = d - 1
    if not s > 0:
        raise GeometryError(f"step scale must be positive, got {s}")
    a, b = _coupled(mu, s)
    if not a < 1:
        raise GeometryError(f"step too large: (d-1)*s^2 = {a} >= 1")
    coords = tuple(a if v[j] == 0 else 1 - a for j in range(mu))
    return coords + (b,)


@dataclass(frozen=True)
class LemmaReport:
    """Result of the exhaustive right-angle repair check."""

    ok: bool
    d: int
    s: Fraction
    min_case1: Optional[Fraction]
    min_case2: Optional[Fraction]
    coupling_residual: Fraction
    checks: int


def _pad(v: Sequence[int]) -> Point:
    return tuple(Fraction(x) for x in v) + (Fraction(0),)


def _dot(q: Point, p: Point, r: Point) -> Fraction:
    return sum((pk - qk) * (rk - qk) for qk, pk, rk in zip(q, p, r))


def lemma_check(d: int, s) -> LemmaReport:
    """Exhaustively confirm the single-step displacement lemma.

    For every vertex x of the (d-1)-cube, displace it alone to x' with the
    coupled step of scale ``s`` and recompute, in exact arithmetic, every
    angle of every triangle containing x' (the third points y, z ranging
    over all other vertices):

    * case 1 - the angle sits at an unmoved vertex y. The lift component b
      is orthogonal to the cube plane, so the inner product moves by at
      most (d-1) a; originally-right angles gain exactly +a per coordinate
      the other leg flips, and originally-acute ones keep a surplus of at
      least 1 - (d-1)^2 s^2.
    * case 2 - the angle sits at x' itself. Here the first-order gains and
      losses cancel identically — the coupling makes b^2 - (d-1) a = 0 —
      and only the second-order surplus ~(d-1) a^2 keeps previously-right
      angles strictly acute.

    Returns the minima observed in both cases plus the coupling residual
    b^2 - (d-1) a, which the caller can assert to be exactly zero.
    """
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    s = Fraction(s)
    mu = d - 1
    a, b = _coupled(mu, s)
    if not (s > 0 and a < 1):
        raise ValueError(f"scale {s} out of range for d = {d}")
    residual = b * b - mu * a

    verts = [_pad(v) for v in itertools.product((0, 1), repeat=mu)]
    min1: Optional[Fraction] = None
    min2: Optional[Fraction] = None
    checks = 0
    ok = True
    for xi, px in enumerate(verts):
        moved = perturb_vertex(px, s)
        others = [p for i, p in enumerate(verts) if i != xi]
        for py, pz in itertools.combinations(others, 2):
            at_y = _dot(py, moved, pz)
            at_z = _dot(pz, moved, py)
            at_moved = _dot(moved, py, pz)
            checks += 3
            for val in (at_y, at_z):
                if min1 is None or val < min1:
                    min1 = val
            if min2 is None or at_moved < min2:
                min2 = at_moved
            if at_y <= 0 or at_z <= 0 or at_moved <= 0:
                ok = False
    return LemmaReport(ok=ok, d=d, s=s, min_case1=min1, min_case2=min2,
                       coupling_residual=residual, checks=checks)


def _ceil_sqrt_int(x: RawScalar) -> int:
    """Smallest integer D with D*D >= x."""
    if x < 0:
        raise ValueError("negative squared length")
    r = math.isqrt(int(x))
    while r * r < x:
        r += 1
    return r


def safe_radius(ps: PointSet, margin: RawScalar) -> RawScalar:
    """A displacement radius certified not to destroy a margin.

    If every angle of the set has inner-product margin at least ``margin``,
    then moving every point by at most the returned radius keeps all angles
    strictly acute. The bound is min(1, margin / (2 (2 Dhat + 1))) where
    Dhat is the smallest integer whose square dominates the squared diameter.
    """
    if not margin > 0:
        raise ValueError(f"safe_radius needs a positive margin, got {margin}")
    dhat = _ceil_sqrt_int(squared_diameter(ps))
    if ps.backend == RATIONAL:
        return min(Fraction(1), Fraction(margin) / (2 * (2 * dhat + 1)))
    return min(1.0, float(margin) / (2 * (2 * dhat + 1)))


def apex_point(d: int, c: Optional[RawScalar] = None,
               backend: Backend = RATIONAL) -> Point:
    """The apex (1/2, ..., 1/2, c) over the cube center; default c = d/2.

    Requires c^2 > (d-1)/4 strictly: on the boundary the apex angle over an
    antipodal pair of cube vertices is exactly right.
    """
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    cf = Fraction(d, 2) if c is None else Fraction(c)
    if not 4 * cf * cf > d - 1:
        raise ValueError(
            f"apex height {cf} violates c^2 > (d-1)/4 (boundary included)")
    half = Fraction(1, 2)
    pt = tuple([half] * (d - 1) + [cf])
    if backend == RATIONAL:
        return pt
    return tuple(float(x) for x in pt)


# ---------------------------------------------------------------------------
# displacement bookkeeping


def _sqrt_upper_common(values: List[Fraction]) -> List[Fraction]:
    """Dyadic upper bounds for the square roots of exact values.

    All bounds share one denominator 2**bits (bits grown until every nonzero
    bound carries at least 8 significant bits), which makes the map monotone:
    x <= y implies bound(x) <= bound(y).
    """

    def at_bits(x: Fraction, bits: int) -> int:
        scaled = x * (1 << (2 * bits))
        r = math.isqrt(scaled.numerator // scaled.denominator)
        if r * r < scaled:
            r += 1
        return r

    bits = 16
    while True:
        rs = [at_bits(x, bits) for x in values]
        if all(r >= 256 for r, x in zip(rs, values) if x > 0):
            return [Fraction(r, 1 << bits) for r in rs]
        bits *= 2


def _sqdist(p: Point, q: Point) -> RawScalar:
    return sum((x - y) * (x - y) for x, y in zip(p, q))


def _make_trace(dim: int, backend: Backend, order: List[int],
                eps_list: List[RawScalar],
                s_list: List[RawScalar]) -> ConstructionTrace:
    mu = dim - 1
    steps = []
    for idx, eps, s in zip(order, eps_list, s_list):
        a, b = _coupled(mu, s)
        steps.append(TraceStep(index=idx, eps=eps, s=s, a=a, b=b))
    return ConstructionTrace(dim=dim, backend=backend,
                             vertex_order=tuple(order), steps=tuple(steps))


def _nominal_trace(dim: int, backend: Backend,
                   originals: Sequence[Point],
                   moved: Sequence[Point]) -> ConstructionTrace:
    """Trace for free-form designs: steps ordered by decreasing displacement,
    eps an upper bound on the actual displacement, s the nominal eps/(d-1)."""
    mu = dim - 1
    n = len(originals)
    d2 = [_sqdist(originals[i], moved[i]) for i in range(n)]
    order = sorted(range(n), key=lambda i: (-d2[i], i))
    if backend == RATIONAL:
        eps_sorted = _sqrt_upper_common([d2[i] for i in order])
        s_sorted = [e / mu for e in eps_sorted]
    else:
        eps_sorted = [math.nextafter(math.sqrt(d2[i]), math.inf) if d2[i] else 0.0
                      for i in order]
        s_sorted = [e / mu for e in eps_sorted]
    return _make_trace(dim, backend, order, eps_sorted, s_sorted)


# ---------------------------------------------------------------------------
# schedules


def _adaptive(cfg: ConstructionConfig) -> Tuple[PointSet, ConstructionTrace]:
    d = cfg.dim
    if _designs.has_design(d):
        rows = _designs.design_cube_points(d)
        if cfg.backend == RATIONAL:
            pts: Tuple[Point, ...] = rows
        else:
            pts = tuple(tuple(float(x) for x in row) for row in rows)
        originals = hypercube_vertices(d, cfg.backend).points
        trace = _nominal_trace(d, cfg.backend, originals, pts)
        ps = PointSet(dim=d, points=pts, backend=cfg.backend,
                      provenance={"schedule": "adaptive", "design": f"d{d}"})
        return ps, trace

    if d == 5 and cfg.backend == RATIONAL:
        return _ladder_d5(cfg)

    if cfg.backend == FLOAT64:
        # Smallest required scale for d >= 5 is 2**-12028 and shrinks
        # triply-exponentially beyond; float64 bottoms out near 2**-1074.
        raise ConstructionError(
            f"adaptive construction at d = {d} needs displacement scales far "
            "below the float64 range (the deepest antipodal class at d = 5 "
            "already sits at 2**-12028); use the rational backend for d <= 5")
    levels = 2 ** (d - 2)
    digits = (math.log10(5) + (levels - 1) * math.log10(3))
    raise ConstructionError(
        f"adaptive construction at d = {d} would need {levels} separated "
        f"scale levels with final exponent around 10^{digits:.0f}; exact "
        "arithmetic on such values is out of reach (d <= 5 is supported)")


def _ladder_d5(cfg: ConstructionConfig) -> Tuple[PointSet, ConstructionTrace]:
    """Exact d = 5 construction: one dyadic scale per antipodal class.

    Vertices of the 4-cube come in 8 antipodal pairs. Pair number ell
    (pairs sorted by their lexicographically smaller member) is displaced
    with scale 2**-k_ell, where k_1 = 5 and k_{ell+1} = 3 k_ell + 1. A pair
    sharing one scale keeps its own slab condition exact, and the cubic
    growth makes every deeper level's fourth-order repair surplus dominate
    the damage all shallower levels can inflict on it.
    """
    d = cfg.dim
    mu = d - 1
    verts = list(itertools.product((0, 1), repeat=mu))
    reps = sorted({min(v, tuple(1 - x for x in v)) for v in verts})
    level = {}
    for ell, rep in enumerate(reps):
        level[rep] = ell
        level[tuple(1 - x for x in rep)] = ell
    ks = _designs.ladder_ks(levels=len(reps))

    originals = hypercube_vertices(d, RATIONAL).points
    moved: List[Point] = []
    s_by_vertex: List[Fraction] = []
    for i, v in enumerate(verts):
        s = Fraction(1, 2 ** ks[level[v]])
        s_by_vertex.append(s)
        moved.append(perturb_vertex(originals[i], s))

    n = len(verts)
    d2 = [_sqdist(originals[i], moved[i]) for i in range(n)]
    order = sorted(range(n), key=lambda i: (-d2[i], i))
    eps_sorted = _sqrt_upper_common([d2[i] for i in order])
    s_sorted = [s_by_vertex[i] for i in order]
    trace = _make_trace(d, RATIONAL, order, eps_sorted, s_sorted)
    ps = PointSet(dim=d, points=tuple(moved), backend=RATIONAL,
                  provenance={"schedule": "adaptive", "design": "ladder-d5",
                              "ks": list(ks)})
    return ps, trace


def _cube_all_acute(pts: List[Point]) -> bool:
    """Early-exit scan used only inside the geometric sweep."""
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if triangle_has_nonacute(pts[i], pts[j], pts[k]):
                    return False
    return True


def triangle_has_nonacute(a: Point, b: Point, c: Point) -> bool:
    return (_dot_g(a, b, c) <= 0 or _dot_g(b, a, c) <= 0
            or _dot_g(c, a, b) <= 0)


def _dot_g(q: Point, p: Point, r: Point) -> RawScalar:
    return sum((pk - qk) * (rk - qk) for qk, pk, rk in zip(q, p, r))


def _geometric(cfg: ConstructionConfig) -> Tuple[PointSet, ConstructionTrace]:
    d = cfg.dim
    mu = d - 1
    originals = hypercube_vertices(d, cfg.backend).points
    n = len(originals)
    two = Fraction(2) if cfg.backend == RATIONAL else 2.0

    s1 = cfg.s1
    for attempt in range(cfg.max_retries + 1):
        base = s1 / (two ** attempt) if attempt else s1
        moved: List[Point] = []
        s_list: List[RawScalar] = []
        feasible = True
        s = base
        for i in range(n):
            if not (s > 0 and mu * s * s < 1):
                feasible = False
                break
            moved.append(perturb_vertex(originals[i], s))
            s_list.append(s)
            s = s * cfg.gamma
        if feasible and len(set(moved)) == n and (n < 3 or _cube_all_acute(moved)):
            d2 = [_sqdist(originals[i], moved[i]) for i in range(n)]
            if cfg.backend == RATIONAL:
                eps = _sqrt_upper_common(d2)
            else:
                eps = [math.nextafter(math.sqrt(x), math.inf) for x in d2]
            trace = _make_trace(d, cfg.backend, list(range(n)), eps, s_list)
            ps = PointSet(dim=d, points=tuple(moved), backend=cfg.backend,
                          provenance={"schedule": "geometric",
                                      "attempt": attempt})
            return ps, trace
    raise ConstructionError(
        f"geometric schedule failed at d = {d} after {cfg.max_retries} "
        "halvings of s1: every sweep left a non-acute triple. The sweep's "
        "repairs are fourth order in the step scale while its damage is "
        "first order, so a single geometric decay rate cannot separate "
        "the antipodal classes; this failure is expected for d >= 3")


def construct_acute_cube(cfg: ConstructionConfig) -> Tuple[PointSet, ConstructionTrace]:
    """Displaced cube part only (no apex), with its construction trace."""
    if cfg.schedule == "adaptive":
        return _adaptive(cfg)
    return _geometric(cfg)


def construct_full(cfg: ConstructionConfig):
    """Cube part plus apex, guard-checked and independently re-verified.

    Returns ``(point_set, trace, report)``. Raises ConstructionError if the
    pairwise guard |x_i - x_j|^2 < 2 ((d-1)/4 + c^2) fails on the cube part
    or if the final certification does not come back acute.
    """
    from .verify import verify_acute  # deferred: verify must not need us

    cube, trace = construct_acute_cube(cfg)
    d = cfg.dim
    c = cfg.apex_height
    apex = apex_point(d, c=c, backend=cfg.backend)

    if cfg.backend == RATIONAL:
        lim: RawScalar = 2 * (Fraction(d - 1, 4) + Fraction(c) * Fraction(c))
    else:
        lim = 2.0 * ((d - 1) / 4.0 + float(c) * float(c))
    pts = cube.points
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d2 = _sqdist(pts[i], pts[j])
            if not d2 < lim:
                raise ConstructionError(
                    f"guard failed: |x_{i} - x_{j}|^2 = {d2} is not below "
                    f"2((d-1)/4 + c^2) = {lim}; the apex angle over this "
                    "pair could not be certified acute")

    full = PointSet(dim=d, points=pts + (apex,), backend=cfg.backend,
                    provenance={**(cube.provenance or {}),
                                "apex_height": str(c)})
    report = verify_acute(full, mode="margin")
    if not report.verdict:
        w = report.witness.indices() if report.witness else None
        raise ConstructionError(
            f"final certification failed: margin {report.margin} at {w}")
    return full, trace, report


def random_baseline(dim: int, trials: int = 200, seed: int = 0) -> PointSet:
    """Greedy random baseline: keep uniform points that stay acute.

    Draws ``trials`` uniform points from the unit cube and keeps each one
    that leaves every triple strictly acute. The stall size of this greedy
    filter is tiny compared to 2**(dim-1) + 1, which is the point.
    """
    if dim < 2:
        raise ValueError(f"need dim >= 2, got {dim}")
    rng = np.random.default_rng(seed)
    kept: List[Point] = []
    for _ in range(trials):
        cand = tuple(float(x) for x in rng.random(dim))
        good = True
        for i in range(len(kept)):
            if not good:
                break
            for j in range(i + 1, len(kept)):
                if triangle_has_nonacute(kept[i], kept[j], cand):
                    good = False
                    break
        if good and cand not in kept:
            kept.append(cand)
    return PointSet(dim=dim, points=tuple(kept), backend=FLOAT64,
                    provenance={"schedule": "random-baseline",
                                "trials": trials, "seed": seed})
