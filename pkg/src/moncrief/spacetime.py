"""Regular domains of Minkowski 3-space cut out by finitely many lightlike planes.

The domain is Omega = {x : <x, l_k> < c_k for every plane k}, the intersection
of the futures of the planes.  Its cosmological time at p is the largest
Lorentzian distance from a boundary point in the past of p.  On a face the
squared distance is affine along the null direction of the face, so it has no
critical point there and the supremum sits on an edge (the spacelike line
where two planes meet) or at a vertex where an edge ends.  Edges and their
feasible parameter intervals do not depend on p and are computed once per
domain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import (
    DegenerateFamily,
    DomainError,
    EmptyDomain,
    NoPastStratum,
    OutsideDomain,
)

CAUSAL_TOL = 1e-12
WITNESS_BUDGET = 1e8
J = np.diag([-1.0, 1.0, 1.0])


@dataclass(frozen=True)
class MinkowskiVector:
    x0: float
    x1: float
    x2: float

    @classmethod
    def of(cls, v) -> "MinkowskiVector":
        if isinstance(v, MinkowskiVector):
            return v
        x0, x1, x2 = (float(t) for t in v)
        return cls(x0, x1, x2)

    def array(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2])

    def q(self) -> float:
        return -self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2

    def dot(self, other) -> float:
        return minkowski_dot(self, other)

    def causal_type(self) -> str:
        scale = max(self.x0 * self.x0, self.x1 * self.x1 + self.x2 * self.x2, 1.0)
        q = self.q()
        if q < -CAUSAL_TOL * scale:
            return "timelike"
        if q > CAUSAL_TOL * scale:
            return "spacelike"
        return "lightlike"

    def __add__(self, other):
        return MinkowskiVector(self.x0 + other.x0, self.x1 + other.x1, self.x2 + other.x2)

    def __sub__(self, other):
        return MinkowskiVector(self.x0 - other.x0, self.x1 - other.x1, self.x2 - other.x2)

    def __mul__(self, s):
        return MinkowskiVector(s * self.x0, s * self.x1, s * self.x2)

    __rmul__ = __mul__

    def __iter__(self):
        return iter((self.x0, self.x1, self.x2))


def minkowski_dot(x, y) -> float:
    x0, x1, x2 = x
    y0, y1, y2 = y
    return -x0 * y0 + x1 * y1 + x2 * y2


@dataclass(frozen=True)
class LightlikePlane:
    """{x : <x, normal> = offset}; its future is {<x, normal> < offset}."""

    normal: MinkowskiVector
    offset: float

    def __post_init__(self):
        n = MinkowskiVector.of(self.normal)
        if not n.x0 > 0:
            raise ValueError("normal must be future pointing (l0 > 0)")
        if abs(n.q()) > CAUSAL_TOL * n.x0 * n.x0:
            raise ValueError("normal must be lightlike")
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def at_angle(cls, theta, offset=0.0) -> "LightlikePlane":
        """Normal (1, cos theta, sin theta)."""
        return cls(MinkowskiVector(1.0, math.cos(theta), math.sin(theta)), offset)

    def value(self, p) -> float:
        return minkowski_dot(p, self.normal)


@dataclass(frozen=True, eq=False)
class Edge:
    """Segment {base + s v : lo <= s <= hi} of the line where planes i < j meet.

    ``lo_plane``/``hi_plane`` is the plane cutting the edge at that end, or
    None when the edge is unbounded on that side.
    """

    planes: tuple
    base: tuple
    direction: tuple
    lo: float
    hi: float
    lo_plane: int | None
    hi_plane: int | None

    def point(self, s) -> MinkowskiVector:
        return MinkowskiVector(*(b + s * v for b, v in zip(self.base, self.direction)))


@dataclass(frozen=True, eq=False)
class RegularDomain:
    planes: tuple
    witness: MinkowskiVector
    edges: tuple = field(repr=False)

    @property
    def degenerate(self) -> bool:
        """Two-plane domains (wedges) have a whole line as singularity."""
        return len(self.planes) == 2

    def margin(self, p) -> float:
        """min_k (c_k - <p, l_k>); positive exactly on the open domain."""
        return min(pl.offset - pl.value(p) for pl in self.planes)

    def contains(self, p) -> bool:
        return self.margin(p) > 0


@dataclass(frozen=True)
class CosmologicalValue:
    time: float
    retraction_point: MinkowskiVector
    stratum: tuple


def _proportional(m: MinkowskiVector, n: MinkowskiVector) -> bool:
    a = np.array(tuple(m)) / m.x0
    b = np.array(tuple(n)) / n.x0
    return bool(np.max(np.abs(a - b)) < 1e-12)


def _edge(planes, i, j) -> Edge | None:
    li, lj = planes[i].normal.array(), planes[j].normal.array()
    v = np.cross(J @ li, J @ lj)
    qv = float(v @ J @ v)
    v = v / math.sqrt(qv)
    # deterministic orientation
    k = int(np.argmax(np.abs(v)))
    if v[k] < 0:
        v = -v
    mat = np.array([J @ li, J @ lj, J @ v])
    r = np.linalg.solve(mat, np.array([planes[i].offset, planes[j].offset, 0.0]))
    lo, hi, lo_plane, hi_plane = -math.inf, math.inf, None, None
    for k, pl in enumerate(planes):
        if k in (i, j):
            continue
        lk = pl.normal.array()
        rate = float(v @ J @ lk)
        slack = pl.offset - float(r @ J @ lk)
        tol = CAUSAL_TOL * max(1.0, abs(pl.offset), float(np.abs(r).max()))
        if abs(rate) <= CAUSAL_TOL:
            if slack < -tol:
                return None
            continue
        bound = slack / rate
        if rate > 0 and bound < hi:
            hi, hi_plane = bound, k
        elif rate < 0 and bound > lo:
            lo, lo_plane = bound, k
    if lo > hi + CAUSAL_TOL * max(1.0, abs(lo), abs(hi)):
        return None
    if lo > hi:
        hi = lo
    return Edge((i, j), tuple(float(x) for x in r), tuple(float(x) for x in v), lo, hi, lo_plane, hi_plane)


def build_domain(planes, budget: float = WITNESS_BUDGET) -> RegularDomain:
    """Intersection of the futures of the planes, with an interior witness.

    The witness is searched along the future time axis: (t, 0, 0) lies in
    every future once t exceeds max_k(-c_k / l0_k).  EmptyDomain is raised
    when that exceeds ``budget``.
    """
    planes = tuple(planes)
    if len(planes) < 2:
        raise DegenerateFamily("a regular domain needs at least two planes")
    for m, n in combinations(planes, 2):
        if _proportional(m.normal, n.normal):
            raise DegenerateFamily("plane normals are proportional")
    t = max(-pl.offset / pl.normal.x0 for pl in planes)
    t = max(t, 0.0) + 1.0
    if not t <= budget:
        raise EmptyDomain(f"no interior point with time coordinate below {budget:g}")
    witness = MinkowskiVector(t, 0.0, 0.0)
    edges = []
    for i, j in combinations(range(len(planes)), 2):
        e = _edge(planes, i, j)
        if e is not None:
            edges.append(e)
    d = RegularDomain(planes, witness, tuple(edges))
    if not d.contains(witness):
        raise EmptyDomain("witness search failed")
    return d


def _edge_candidate(e: Edge, p):
    w = [a - b for a, b in zip(p, e.base)]
    s = minkowski_dot(w, e.direction)
    if s < e.lo:
        s, cut = e.lo, e.lo_plane
    elif s > e.hi:
        s, cut = e.hi, e.hi_plane
    else:
        cut = None
    r = e.point(s)
    diff = MinkowskiVector(p[0] - r.x0, p[1] - r.x1, p[2] - r.x2)
    tau2 = -diff.q()
    if not (tau2 > 0 and diff.x0 > 0):
        return None
    stratum = ("edge", e.planes) if cut is None else ("vertex", tuple(sorted(e.planes + (cut,))))
    return tau2, r, stratum


def cosmological_time(d: RegularDomain, p) -> CosmologicalValue:
    p = MinkowskiVector.of(p)
    if not d.contains(p):
        raise OutsideDomain(f"{tuple(p)} is not in the open domain")
    best = None
    for e in d.edges:
        cand = _edge_candidate(e, tuple(p))
        if cand is not None and (best is None or cand[0] > best[0]):
            best = cand
    if best is None:
        raise NoPastStratum(f"no boundary stratum in the past of {tuple(p)}")
    tau2, r, stratum = best
    return CosmologicalValue(math.sqrt(tau2), r, stratum)


def cosmological_times(d: RegularDomain, points) -> np.ndarray:
    """Vectorised cosmological time for an (n, 3) array of interior points."""
    pts = np.asarray(points, dtype=float)
    normals = np.array([pl.normal.array() for pl in d.planes])
    offsets = np.array([pl.offset for pl in d.planes])
    if np.any(pts @ J @ normals.T >= offsets):
        raise OutsideDomain("some points are not in the open domain")
    best = np.full(pts.shape[0], -np.inf)
    for e in d.edges:
        base, v = np.array(e.base), np.array(e.direction)
        w = pts - base
        s = np.clip(w @ J @ v, e.lo, e.hi)
        diff = w - s[:, None] * v
        tau2 = diff[:, 0] ** 2 - diff[:, 1] ** 2 - diff[:, 2] ** 2
        ok = (tau2 > 0) & (diff[:, 0] > 0)
        best = np.where(ok & (tau2 > best), tau2, best)
    if np.any(~np.isfinite(best)):
        raise NoPastStratum("no boundary stratum in the past of some point")
    return np.sqrt(best)


# -- sampling ---------------------------------------------------------------


def sample_interior(d: RegularDomain, count: int, rng: np.random.Generator, scale: float = 2.0) -> np.ndarray:
    """Rejection sample of interior points in a box above the witness."""
    w = d.witness.array()
    normals = np.array([pl.normal.array() for pl in d.planes])
    offsets = np.array([pl.offset for pl in d.planes])
    out = []
    have = 0
    while have < count:
        n = 2 * (count - have) + 16
        pts = np.column_stack(
            [
                w[0] - scale + 2 * scale * rng.random(n),
                w[1] - scale + 2 * scale * rng.random(n),
                w[2] - scale + 2 * scale * rng.random(n),
            ]
        )
        inside = np.all(pts @ J @ normals.T < offsets, axis=1)
        pts = pts[inside][: count - have]
        out.append(pts)
        have += pts.shape[0]
    return np.concatenate(out)


@dataclass(frozen=True)
class ConcavityReport:
    samples: int
    violations: list
    min_slack: float

    @property
    def ok(self) -> bool:
        return not self.violations


def check_concavity(d: RegularDomain, samples: int, seed: int, tol: float = 1e-9) -> ConcavityReport:
    """T((p+q)/2) >= (T(p) + T(q))/2 - tol on random interior pairs."""
    rng = np.random.default_rng(seed)
    p = sample_interior(d, samples, rng)
    q = sample_interior(d, samples, rng)
    return concavity_on_pairs(d, p, q, tol)


def concavity_on_pairs(d: RegularDomain, p, q, tol: float = 1e-9) -> ConcavityReport:
    p, q = np.atleast_2d(p), np.atleast_2d(q)
    tp, tq = cosmological_times(d, p), cosmological_times(d, q)
    tm = cosmological_times(d, (p + q) / 2)
    slack = tm - (tp + tq) / 2
    bad = np.nonzero(slack < -tol)[0]
    violations = [(tuple(p[k]), tuple(q[k]), float(slack[k])) for k in bad]
    return ConcavityReport(int(p.shape[0]), violations, float(slack.min()))


def _future_unit(rng, max_rapidity=1.0):
    eta = max_rapidity * rng.random()
    phi = 2 * math.pi * rng.random()
    return np.array([math.cosh(eta), math.sinh(eta) * math.cos(phi), math.sinh(eta) * math.sin(phi)])


def level_set_sample(d: RegularDomain, a: float, count: int, seed: int = 0, tol: float = 1e-10) -> list:
    """Points with |T - a| < 1e-8 on rays q + t u from singular strata.

    T(q + t u) >= t along a future unit ray, so the crossing lies in (0, a];
    T is increasing along the ray, which makes bisection valid.
    """
    if not a > 0:
        raise DomainError("level must be positive")
    rng = np.random.default_rng(seed)
    out = []
    edges = d.edges
    while len(out) < count:
        e = edges[int(rng.integers(len(edges)))]
        lo = e.lo if math.isfinite(e.lo) else (e.hi - 4.0 if math.isfinite(e.hi) else -2.0)
        hi = e.hi if math.isfinite(e.hi) else lo + 4.0
        start = np.array(tuple(e.point(lo + (hi - lo) * rng.random())))
        u = _future_unit(rng)
        t_lo, t_hi = 0.0, float(a)
        pt = start + t_hi * u
        for _ in range(200):
            mid = 0.5 * (t_lo + t_hi)
            val = cosmological_time(d, start + mid * u).time
            if abs(val - a) < tol:
                pt = start + mid * u
                break
            if val < a:
                t_lo = mid
            else:
                t_hi = mid
            pt = start + mid * u
        v = MinkowskiVector.of(pt)
        if abs(cosmological_time(d, v).time - a) < 1e-8:
            out.append(v)
    return out


def level_segment_violations(d: RegularDomain, points, a: float, steps: int = 20, tol: float = 1e-6) -> int:
    """Count segment points between sampled level points with T < a - tol."""
    pts = np.array([tuple(p) for p in points])
    lam = np.linspace(0.0, 1.0, steps + 1)[1:-1]
    bad = 0
    for i, j in combinations(range(len(pts)), 2):
        seg = (1 - lam)[:, None] * pts[i] + lam[:, None] * pts[j]
        bad += int(np.sum(cosmological_times(d, seg) < a - tol))
    return bad


# -- time-function comparison constants --------------------------------------


def cmc_reparam(curvature_sign: str, b: float) -> float:
    """-1/b (flat, b < 0) or arcoth(-b) (de Sitter, b < -1)."""
    if curvature_sign == "flat":
        if not b < 0:
            raise DomainError("flat reparametrisation needs b < 0")
        return -1.0 / b
    if curvature_sign == "deSitter":
        if not b < -1:
            raise DomainError("de Sitter reparametrisation needs b < -1")
        return math.atanh(-1.0 / b)
    raise DomainError(f"unknown curvature sign {curvature_sign!r}")


@dataclass(frozen=True)
class ComparisonConstants:
    ratio_bound: float
    bilip_K: float
    bilip_power4: float
    teich_bound: float


def comparison_constants(case: str, a: float | None = None) -> ComparisonConstants:
    """CMC/cosmological ratio bound, bi-Lipschitz constant and Teichmueller bound.

    The flat bi-Lipschitz constant is 2, the sup/inf ratio of the two times.
    """
    if case == "flat":
        k = 2.0
    elif case == "deSitter":
        if a is None or not a > 0:
            raise DomainError("de Sitter constants need a > 0")
        k = 2.0 * math.cosh(a / 2)
    else:
        raise DomainError(f"unknown case {case!r}")
    return ComparisonConstants(2.0, k, k**4, 4.0 * math.log(3.0))


def k_level_for_cmc(a: float) -> float:
    """-2a^2 + 2a sqrt(a^2 - 1) + 1, the k-surface level for mean curvature a <= -1."""
    if not a <= -1:
        raise DomainError("needs a <= -1")
    return -2.0 * a * a + 2.0 * a * math.sqrt(a * a - 1.0) + 1.0
