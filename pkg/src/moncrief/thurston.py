"""Projective convergence of length vectors towards intersection vectors.

Along the synthetic family of :mod:`moncrief.graft` the lengths of panel
curves grow like 2 ln(a) times their intersection with the support of the
lamination, so the max-normalised length vector should approach the
max-normalised vector i(sum gamma_i, .).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import GeometryError
from .graft import RaySchedule, grafting_length_upper, synthetic_curve
from .surface import CurveClass, Holonomy, build_holonomy, geodesic_length, pants_curve
from .twist import twist_product


@dataclass(frozen=True)
class PanelVector:
    entries: dict

    def __post_init__(self):
        entries = {k: float(v) for k, v in self.entries.items()}
        if any(v < 0 or not math.isfinite(v) for v in entries.values()):
            raise ValueError("entries must be finite and non-negative")
        object.__setattr__(self, "entries", entries)

    def __getitem__(self, name):
        return self.entries[name]

    def names(self) -> list:
        return list(self.entries)

    def values(self) -> list:
        return list(self.entries.values())

    def normalized(self) -> "PanelVector":
        top = max(self.entries.values(), default=0.0)
        if top <= 0:
            raise ValueError("panel vector has no positive entry")
        return PanelVector({k: v / top for k, v in self.entries.items()})


def length_vector(rep: Holonomy, panel) -> PanelVector:
    return PanelVector({c.name: float(geodesic_length(rep, c)) for c in panel})


def intersection_vector(lam_support, panel) -> PanelVector:
    """Entry for beta is sum over i in the support of i(beta, gamma_i)."""
    support = set(lam_support)
    if not support:
        raise ValueError("support must be non-empty")
    if not support <= {1, 2, 3}:
        raise ValueError("support indices must be in 1..3")
    return PanelVector(
        {c.name: sum(c.dt_intersections[i - 1] for i in sorted(support)) for c in panel}
    )


def projective_error(v: PanelVector, w: PanelVector) -> float:
    """l-infinity distance between the max-normalised vectors."""
    if v.names() != w.names():
        raise ValueError("panel vectors are indexed by different curves")
    nv, nw = v.normalized(), w.normalized()
    return max(abs(x - y) for x, y in zip(nv.values(), nw.values()))


@dataclass(frozen=True)
class SchedulePoint:
    a: float
    lengths: PanelVector
    normalized: PanelVector
    scaled: dict
    error: float
    twist_products: dict
    lamination_length: float


@dataclass(frozen=True)
class ConvergenceReport:
    a_values: tuple
    points: tuple
    target: PanelVector
    tol: float
    verdict: bool
    diagnostics: list = field(default_factory=list)

    @property
    def errors(self) -> list:
        return [p.error for p in self.points]

    @property
    def normalized_target(self) -> PanelVector:
        return self.target.normalized()


class ScheduleFailure(GeometryError):
    """A schedule point could not be evaluated; ``a`` identifies it."""

    def __init__(self, a, cause):
        super().__init__(f"a = {a!r}: {type(cause).__name__}: {cause}")
        self.a = a
        self.cause = cause


def evaluate_point(s: RaySchedule, panel, a, target: PanelVector) -> SchedulePoint:
    try:
        rep = build_holonomy(synthetic_curve(s, a))
        lengths = length_vector(rep, panel)
        scale = 2 * math.log(a)
        twists = {}
        for i in sorted(s.lamination.support):
            g = pants_curve(i)
            dual = _dual_in(panel, i)
            if dual is not None:
                twists[f"{g.name}:{dual.name}"] = twist_product(rep, dual, g)
        lam_len = sum(
            c * float(geodesic_length(rep, pants_curve(i)))
            for i, c in enumerate(s.lamination.weights, start=1)
            if c > 0
        )
    except GeometryError as exc:
        raise ScheduleFailure(a, exc) from exc
    return SchedulePoint(
        a=a,
        lengths=lengths,
        normalized=lengths.normalized(),
        scaled={k: v / scale for k, v in lengths.entries.items()},
        error=projective_error(lengths, target),
        twist_products=twists,
        lamination_length=lam_len,
    )


def _dual_in(panel, i) -> CurveClass | None:
    """The panel curve meeting gamma_i only, if any."""
    for c in panel:
        dt = c.dt_intersections
        if dt[i - 1] > 0 and sum(dt) == dt[i - 1]:
            return c
    return None


def run_convergence(s: RaySchedule, panel, tol: float = 0.05, threads: int = 1) -> ConvergenceReport:
    """Evaluate the schedule and decide projective convergence.

    The verdict requires a final error below ``tol`` and strictly decreasing
    errors over the schedule points in the last three decades.
    """
    panel = list(panel)
    target = intersection_vector(s.lamination.support, panel)
    diagnostics = []
    for i in sorted(s.lamination.support):
        if _dual_in(panel, i) is None:
            diagnostics.append(f"panel has no dual curve for gamma{i}")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            points = list(pool.map(lambda a: evaluate_point(s, panel, a, target), s.a_values))
    else:
        points = [evaluate_point(s, panel, a, target) for a in s.a_values]
    points.sort(key=lambda p: p.a)

    bound = grafting_length_upper(s.base, s.lamination, K=s.K)
    for p in points:
        if p.lamination_length > bound:
            diagnostics.append(f"a = {p.a:.6g}: l(lambda) = {p.lamination_length:.6g} exceeds {bound:.6g}")

    verdict = True
    if s.decades < 3:
        verdict = False
        diagnostics.append(f"schedule spans {s.decades:.3g} decades; at least 3 are needed")
    else:
        final = points[-1]
        if not final.error < tol:
            verdict = False
            diagnostics.append(f"final error {final.error:.6g} is not below {tol:g}")
        tail = [p.error for p in points if p.a >= final.a / 1000 * (1 - 1e-12)]
        if any(y >= x for x, y in zip(tail, tail[1:])):
            verdict = False
            diagnostics.append("errors are not strictly decreasing over the last three decades")
    return ConvergenceReport(s.a_values, tuple(points), target, tol, verdict, diagnostics)
