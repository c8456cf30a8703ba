"""Upper half-plane kernel: Moebius maps, boundary points, oriented geodesics.

Arithmetic runs in a private mpmath context (``MP``) so that nearly parabolic
elements, which appear when curves are pinched to length ~1e-6, keep enough
significant digits for their traces, axes and projections.

The point at infinity is an explicit tagged value (``BoundaryPoint(None)``),
never a large float.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .errors import DegenerateTriple, NonHyperbolic, ProjectionUndefined

MP = mpmath.MPContext()
MP.dps = 80

# |trace| must exceed 2 by this much.  Scaled to the working precision: a curve
# of length 1e-7 still has a trace excess of ~2.5e-15.
TRACE_TOL = MP.mpf(10) ** (-(MP.dps // 2))


def mpf(x):
    return x if isinstance(x, MP.mpf) else MP.mpf(x)


@dataclass(frozen=True)
class BoundaryPoint:
    """A point of the extended real line; ``value=None`` is infinity."""

    value: object = None

    def __post_init__(self):
        if self.value is not None:
            object.__setattr__(self, "value", mpf(self.value))

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def homogeneous(self):
        return (MP.one, MP.zero) if self.value is None else (self.value, MP.one)

    @classmethod
    def from_homogeneous(cls, u, v) -> "BoundaryPoint":
        if v == 0:
            return INFINITY
        return cls(u / v)

    def close_to(self, other: "BoundaryPoint", tol=1e-9) -> bool:
        if self.is_infinite or other.is_infinite:
            if self.is_infinite and other.is_infinite:
                return True
            finite = other if self.is_infinite else self
            return abs(finite.value) > 1 / tol
        return abs(self.value - other.value) <= tol * max(1, abs(self.value))

    def __float__(self):
        return float("inf") if self.value is None else float(self.value)

    def __repr__(self):
        return "BoundaryPoint(inf)" if self.value is None else f"BoundaryPoint({MP.nstr(self.value, 15)})"


INFINITY = BoundaryPoint(None)


def point(x) -> BoundaryPoint:
    if isinstance(x, BoundaryPoint):
        return x
    if x is None or (isinstance(x, float) and x == float("inf")):
        return INFINITY
    return BoundaryPoint(x)


@dataclass(frozen=True)
class MoebiusMap:
    """Real 2x2 matrix acting by x -> (ax+b)/(cx+d), rescaled so |ad - bc| = 1.

    Maps with determinant -1 are orientation reversing; they act on the
    boundary by the same formula and are produced only by
    :func:`normalize_to_standard` and the reflection helpers of the surface
    builder.
    """

    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        a, b, c, d = (mpf(x) for x in (self.a, self.b, self.c, self.d))
        det = a * d - b * c
        if det == 0:
            raise ValueError("singular matrix")
        s = MP.sqrt(abs(det))
        if s != 1:
            a, b, c, d = a / s, b / s, c / s, d / s
        for name, val in zip("abcd", (a, b, c, d)):
            object.__setattr__(self, name, val)

    @classmethod
    def _raw(cls, a, b, c, d) -> "MoebiusMap":
        # products and inverses of unimodular maps stay unimodular; skip the
        # rescaling, whose determinant evaluation cancels catastrophically for
        # large entries
        m = object.__new__(cls)
        object.__setattr__(m, "a", a)
        object.__setattr__(m, "b", b)
        object.__setattr__(m, "c", c)
        object.__setattr__(m, "d", d)
        return m

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def diagonal(cls, t) -> "MoebiusMap":
        """Hyperbolic element translating (0, inf) by ``t`` towards infinity."""
        h = mpf(t) / 2
        return cls(MP.exp(h), 0, 0, MP.exp(-h))

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def orientation_preserving(self) -> bool:
        return self.det > 0

    @property
    def trace(self):
        return self.a + self.d

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap._raw(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap._raw(self.d, -self.b, -self.c, self.a)

    def conjugate_by(self, g: "MoebiusMap") -> "MoebiusMap":
        return g @ self @ g.inverse()

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def as_float(self):
        return [[float(self.a), float(self.b)], [float(self.c), float(self.d)]]

    def distance_to(self, other: "MoebiusMap") -> float:
        """Max-entry distance in PSL(2,R), i.e. minimised over the sign."""
        plus = max(abs(x - y) for x, y in zip(self.entries(), other.entries()))
        minus = max(abs(x + y) for x, y in zip(self.entries(), other.entries()))
        return float(min(plus, minus))

    @property
    def is_hyperbolic(self) -> bool:
        return self.orientation_preserving and abs(self.trace) > 2 + TRACE_TOL


@dataclass(frozen=True)
class OrientedGeodesic:
    start: BoundaryPoint
    end: BoundaryPoint

    def __post_init__(self):
        object.__setattr__(self, "start", point(self.start))
        object.__setattr__(self, "end", point(self.end))
        if self.start == self.end:
            raise ValueError("geodesic endpoints must be distinct")

    def reversed(self) -> "OrientedGeodesic":
        return OrientedGeodesic(self.end, self.start)

    def image(self, m: MoebiusMap) -> "OrientedGeodesic":
        return OrientedGeodesic(apply(m, self.start), apply(m, self.end))


def apply(m: MoebiusMap, p) -> BoundaryPoint:
    p = point(p)
    if p.is_infinite:
        return INFINITY if m.c == 0 else BoundaryPoint(m.a / m.c)
    den = m.c * p.value + m.d
    if den == 0:
        return INFINITY
    return BoundaryPoint((m.a * p.value + m.b) / den)


def _require_hyperbolic(m: MoebiusMap):
    if not m.is_hyperbolic:
        raise NonHyperbolic(f"|trace| = {MP.nstr(abs(m.trace), 20)} is not > 2")


def translation_length(m: MoebiusMap):
    """2 arcosh(|tr|/2) as an mpf."""
    _require_hyperbolic(m)
    return 2 * MP.acosh(abs(m.trace) / 2)


def axis(m: MoebiusMap) -> OrientedGeodesic:
    """Oriented axis of m, from repelling to attracting fixed point."""
    _require_hyperbolic(m)
    a, b, c, d = m.entries()
    if m.trace < 0:
        a, b, c, d = -a, -b, -c, -d
    if c == 0:
        # x -> (a x + b)/d: infinity attracts iff a > d
        finite = BoundaryPoint(b / (d - a))
        return OrientedGeodesic(finite, INFINITY) if a > d else OrientedGeodesic(INFINITY, finite)
    disc = MP.sqrt((a + d) ** 2 - 4)
    x1 = ((a - d) - disc) / (2 * c)
    x2 = ((a - d) + disc) / (2 * c)
    # derivative at a fixed point is 1/(c x + d)^2
    if abs(c * x1 + d) > 1:
        return OrientedGeodesic(BoundaryPoint(x2), BoundaryPoint(x1))
    return OrientedGeodesic(BoundaryPoint(x1), BoundaryPoint(x2))


def standard_chart(g: OrientedGeodesic) -> MoebiusMap:
    """Deterministic orientation preserving map sending g to (0, inf).

    Writing e, s for homogeneous vectors of g.end and g.start, the chart is the
    inverse of the unimodular matrix with columns (e, +-s).  It is the identity
    on (0, inf) and x -> x - s on (s, inf).
    """
    eu, ev = g.end.homogeneous()
    su, sv = g.start.homogeneous()
    det = eu * sv - ev * su
    if det < 0:
        su, sv, det = -su, -sv, -det
    return MoebiusMap(eu, su, ev, sv).inverse()


def project_to_axis(g: OrientedGeodesic, p):
    """Signed arclength coordinate of the orthogonal projection of p onto g."""
    p = point(p)
    if p == g.start or p == g.end:
        raise ProjectionUndefined("point is an endpoint of the geodesic")
    x = apply(standard_chart(g), p)
    if x.is_infinite or x.value == 0:
        raise ProjectionUndefined("point is an endpoint of the geodesic")
    return MP.log(abs(x.value))


def normalize_to_standard(g: OrientedGeodesic, right_point) -> MoebiusMap:
    """The unique Moebius map sending (g.start, g.end, right_point) to (0, inf, 1).

    The result has determinant -1 when right_point lies to the left of g.
    """
    r = point(right_point)
    if r == g.start or r == g.end:
        raise DegenerateTriple("third point coincides with an endpoint")
    eu, ev = g.end.homogeneous()
    su, sv = g.start.homogeneous()
    ru, rv = r.homogeneous()
    det = eu * sv - ev * su
    if det == 0:
        raise DegenerateTriple("geodesic endpoints coincide")
    # r = lam * e + mu * s
    lam = (ru * sv - rv * su) / det
    mu = (eu * rv - ev * ru) / det
    if lam == 0 or mu == 0:
        raise DegenerateTriple("degenerate triple")
    return MoebiusMap(lam * eu, mu * su, lam * ev, mu * sv).inverse()


def crosses(g: OrientedGeodesic, h: OrientedGeodesic) -> bool:
    """True when the two geodesics meet transversally in the interior."""
    chart = standard_chart(g)
    x, y = apply(chart, h.start), apply(chart, h.end)
    if x.is_infinite or y.is_infinite or x.value == 0 or y.value == 0:
        return False
    return (x.value > 0) != (y.value > 0)
