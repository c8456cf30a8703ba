"""Length-level model of grafting rays along a simplicial lamination.

A lamination here is a weighted multicurve c1 g1 + c2 g2 + c3 g3 on the pants
curves.  The synthetic family pinches each grafted curve by exactly the upper
length bound pi l / (pi + c_i a) and keeps the twists at their base values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ZeroWeight
from .hyp2 import MP
from .surface import CurveClass, FNPoint, Holonomy, geodesic_length, pants_curve
from .twist import twist_product


@dataclass(frozen=True)
class SimplicialLamination:
    weights: tuple

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if len(w) != 3:
            raise ValueError("need one weight per pants curve")
        if min(w) < 0 or not all(math.isfinite(x) for x in w):
            raise ValueError("weights must be finite and non-negative")
        if max(w) <= 0:
            raise ValueError("at least one weight must be positive")
        object.__setattr__(self, "weights", w)

    @property
    def support(self) -> frozenset:
        """1-based indices of the curves with positive weight."""
        return frozenset(i + 1 for i, c in enumerate(self.weights) if c > 0)

    def scaled(self, factor: float) -> "SimplicialLamination":
        return SimplicialLamination(tuple(factor * c for c in self.weights))


@dataclass(frozen=True)
class RaySchedule:
    a_values: tuple
    base: FNPoint
    lamination: SimplicialLamination
    K: float = 0.0
    theta: float = 1.0

    def __post_init__(self):
        a = tuple(float(x) for x in self.a_values)
        if not a or min(a) <= 0:
            raise ValueError("a-values must be positive")
        if any(y <= x for x, y in zip(a, a[1:])):
            raise ValueError("a-values must be strictly increasing")
        if self.K < 0:
            raise ValueError("K must be non-negative")
        if not 0 < self.theta < math.pi / 2:
            raise ValueError("theta must lie in (0, pi/2)")
        object.__setattr__(self, "a_values", a)

    @classmethod
    def geometric(cls, a0, ratio, steps, base, lamination, K=0.0, theta=1.0) -> "RaySchedule":
        """a0, a0 r, ..., a0 r^(steps-1)."""
        a = tuple(a0 * ratio**k for k in range(steps))
        return cls(a, base, lamination, K, theta)

    @property
    def decades(self) -> float:
        return math.log10(self.a_values[-1] / self.a_values[0])


def prop5_bounds(base: FNPoint, lam: SimplicialLamination, K, theta, a, i) -> tuple[float, float]:
    """(lower, upper) for l_{h_a}(gamma_i) on a curve within distance K of the ray.

        lower = 2 e^{-2K} theta / (2 theta + c a) * l_h(gamma_i),  c = max c_j
        upper = e^{2K} pi / (pi + c_i a) * l_h(gamma_i)
    """
    ci = lam.weights[i - 1]
    if ci == 0:
        raise ZeroWeight(f"gamma{i} carries no weight")
    if a <= 0:
        raise ValueError("a must be positive")
    ell = base.lengths[i - 1]
    c = max(lam.weights)
    lower = 2 * math.exp(-2 * K) * theta / (2 * theta + c * a) * ell
    upper = math.exp(2 * K) * math.pi / (math.pi + ci * a) * ell
    return lower, upper


def synthetic_curve(s: RaySchedule, a) -> FNPoint:
    if a < 0:
        raise ValueError("a must be non-negative")
    lengths = tuple(
        math.pi * ell / (math.pi + c * a) if c > 0 else ell
        for ell, c in zip(s.base.lengths, s.lamination.weights)
    )
    return FNPoint(lengths, s.base.twists)


def asymptotic_length(s: RaySchedule, a, beta: CurveClass, rep_a: Holonomy) -> float:
    """sum_j i(beta, g_j) (2 ln(1/l_a(g_j)) + l_a(g_j) Tw_a(beta, g_j)), no O(1) term."""
    total = MP.zero
    for j, n in enumerate(beta.dt_intersections, start=1):
        if n == 0:
            continue
        g = pants_curve(j)
        ell = geodesic_length(rep_a, g)
        total += n * (2 * MP.log(1 / ell) + twist_product(rep_a, beta, g))
    return float(total)


def grafting_length_upper(base: FNPoint, lam: SimplicialLamination, a=None, K=0.0) -> float:
    """e^{2K} l_h(lambda), a bound for l_{h_a}(lambda) that is uniform in ``a``."""
    return math.exp(2 * K) * sum(c * ell for c, ell in zip(lam.weights, base.lengths))
