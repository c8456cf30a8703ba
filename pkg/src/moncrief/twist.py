"""Twisting numbers of a closed curve along an oriented pants curve.

For every intersection point of the geodesics gamma and beta we take the lift
of gamma crossing the normalised lift (0, inf) of beta, project its right and
left endpoints orthogonally onto the axis and record the signed displacement
pr(a_r) - pr(a_l).  Tw is the smallest modulus divided by l(beta).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NoIntersection
from .hyp2 import (
    MP,
    MoebiusMap,
    OrientedGeodesic,
    apply,
    point,
    project_to_axis,
    standard_chart,
    translation_length,
)
from .surface import (
    DEFAULT_MAX_LENGTH,
    CurveClass,
    Holonomy,
    crossing_lifts,
    reduce_word,
    reference_holonomy,
)


@dataclass(frozen=True)
class TwistResult:
    value: float
    witness_count: int
    per_class_displacements: list
    beta_length: float

    @property
    def product(self) -> float:
        """l(beta) * Tw, computed without the division round trip."""
        return min(abs(d) for d in self.per_class_displacements)


def side(g: OrientedGeodesic, p) -> int:
    """+1 if p lies to the right of the oriented geodesic g, -1 if to the left."""
    x = apply(standard_chart(g), point(p))
    if x.is_infinite or x.value == 0:
        raise ValueError("point is an endpoint of the geodesic")
    return 1 if x.value > 0 else -1


def crossing_displacement(beta_axis: OrientedGeodesic, p, q):
    """pr(a_r) - pr(a_l) for the geodesic (p, q) crossing beta_axis."""
    sp, sq = side(beta_axis, p), side(beta_axis, q)
    if sp == sq:
        raise NoIntersection("geodesic does not cross the axis")
    right, left = (p, q) if sp > 0 else (q, p)
    return project_to_axis(beta_axis, right) - project_to_axis(beta_axis, left)


def shear_left(beta_axis: OrientedGeodesic, length, p, q):
    """Move the endpoint on the left of beta_axis by translation of ``length``.

    This is the boundary action of one positive Dehn twist (an elementary
    earthquake) along the single lift beta_axis; the right endpoint is kept.
    """
    chart = standard_chart(beta_axis)
    shift = chart.inverse() @ MoebiusMap.diagonal(length) @ chart
    if side(beta_axis, p) < 0:
        return apply(shift, p), point(q)
    return point(p), apply(shift, q)


def twisting_number(
    rep: Holonomy,
    gamma: CurveClass,
    beta: CurveClass,
    max_length: int = DEFAULT_MAX_LENGTH,
) -> TwistResult:
    """Tw_h(gamma, beta) on the structure ``rep`` (beta's word fixes its orientation).

    Crossing conjugators are searched on the reference structure, where float
    arithmetic is reliable; which lifts cross is a property of the marked
    surface, so the same words serve at pinched points.  Every candidate is
    re-verified and measured on ``rep`` in extended precision.
    """
    if reduce_word(gamma.word) in (beta.word, reduce_word(tuple(x.swapcase() for x in reversed(beta.word)))):
        raise NoIntersection(f"{gamma.name} is {beta.name} up to orientation")
    lifts = crossing_lifts(rep, gamma, beta, max_length, search_rep=reference_holonomy())
    if not lifts:
        raise NoIntersection(f"{gamma.name} and {beta.name} are disjoint")
    ell = translation_length(rep.element(beta.word))
    disps = [float(lift.displacement) for lift in lifts]
    best = min(abs(lift.displacement) for lift in lifts)
    return TwistResult(float(best / ell), len(lifts), disps, float(ell))


def twist_product(rep: Holonomy, gamma: CurveClass, beta: CurveClass, **kw) -> float:
    """l_h(beta) * Tw_h(gamma, beta)."""
    return twisting_number(rep, gamma, beta, **kw).product


def lemma24_window(M: float, K: float) -> float:
    """Explicit bound M' with l'(beta) Tw' < M' whenever l(beta) Tw < M and d < K.

    The boundary extension of the extremal map is taken to be k-quasisymmetric
    with k = e^{2K}, normalised to fix 0, 1, inf.  Comparing the adjacent
    intervals [-2t, -t], [-t, 0] gives
    ln(-f(-2t)) - ln(-f(-t)) in [ln(1 + 1/k), ln(1 + k)], and |ln(-f(-1))| <= ln k,
    so after ceil(M / ln 2) doublings or halvings

        M' = ceil(M / ln 2) ln(1 + k) + ln k.

    K = 0 is the identity map and returns M itself.
    """
    if M <= 0 or K < 0:
        raise ValueError("need M > 0 and K >= 0")
    if K == 0:
        return float(M)
    k = math.exp(2 * K)
    steps = math.ceil(M / math.log(2))
    return max(float(M), steps * math.log1p(k) + math.log(k))
