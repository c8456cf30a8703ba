"""Invariant checks run by ``moncrief selftest``.

Each check returns a :class:`Check`; the runner never raises, a crashing
check is reported as a failure with the exception text.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import graft, hyp2, spacetime, surface, thurston, twist


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


def _random_fn(rng) -> surface.FNPoint:
    return surface.FNPoint(tuple(rng.uniform(0.5, 4, 3)), tuple(rng.uniform(-2, 2, 3)))


def check_moebius(rng) -> Check:
    worst = 0.0
    for _ in range(20):
        t = rng.uniform(0.1, 5)
        a, b, c, d = rng.normal(size=4)
        if a * d - b * c < 0:
            a, c = -a, -c
        g = hyp2.MoebiusMap(a, b, c, d)
        m = hyp2.MoebiusMap.diagonal(t).conjugate_by(g)
        worst = max(worst, abs(float(hyp2.translation_length(m)) - t))
    return Check("hyp2.translation_length_conjugation", worst < 1e-12, f"max error {worst:.2e}")


def check_holonomy(rng, count=20) -> Check:
    worst_rel, worst_len = 0.0, 0.0
    for _ in range(count):
        fn = _random_fn(rng)
        rep = surface.build_holonomy(fn)
        worst_rel = max(worst_rel, rep.relator_residual)
        for i in (1, 2, 3):
            ell = float(surface.geodesic_length(rep, surface.pants_curve(i)))
            worst_len = max(worst_len, abs(ell - fn.lengths[i - 1]) / fn.lengths[i - 1])
    ok = worst_rel < 1e-9 and worst_len < 1e-6
    return Check("surface.holonomy_soundness", ok, f"residual {worst_rel:.1e}, length error {worst_len:.1e}")


def check_curve_table(rng, curves=None, points=2) -> Check:
    curves = surface.curve_table() if curves is None else curves
    reps = [surface.reference_holonomy()] + [surface.build_holonomy(_random_fn(rng)) for _ in range(points)]
    bad = []
    for rep in reps:
        for c in curves:
            try:
                meas = tuple(surface.geometric_intersection(rep, c, i) for i in (1, 2, 3))
            except Exception as exc:  # noqa: BLE001 - reported, not raised
                bad.append(f"{c.name}: {exc}")
                continue
            if meas != c.dt_intersections:
                bad.append(f"{c.name}: {meas} != {c.dt_intersections}")
    return Check("surface.curve_table_intersections", not bad, "; ".join(sorted(set(bad)))[:200])


def check_twist() -> Check:
    # single crossing normalised to (0, inf) with right endpoint 1
    g = hyp2.OrientedGeodesic(0, None)
    errs = []
    for al in (-0.3, -1.0, -math.e**3):
        d = twist.crossing_displacement(g, 1, al)
        errs.append(abs(abs(float(d)) - abs(math.log(-al))))
    ell = 1.7
    p, q = twist.shear_left(g, ell, 1, -2.0)
    shift = float(twist.crossing_displacement(g, p, q) - twist.crossing_displacement(g, 1, -2.0))
    errs.append(abs(abs(shift) - ell))
    worst = max(errs)
    return Check("twist.single_crossing_and_dehn_shift", worst < 1e-10, f"max error {worst:.1e}")


def check_graft(rng) -> Check:
    base = surface.FNPoint((2, 2, 2))
    lam = graft.SimplicialLamination((1, 2, 0))
    bad = 0
    for _ in range(1000):
        K, theta, a = rng.uniform(0, 2), rng.uniform(1e-3, math.pi / 2 - 1e-3), rng.uniform(1e-6, 1e6)
        lo, hi = graft.prop5_bounds(base, lam, K, theta, a, 1)
        bad += lo > hi
    s = graft.RaySchedule.geometric(100, 10, 5, base, lam)
    for a in s.a_values:
        fn = graft.synthetic_curve(s, a)
        for i in lam.support:
            lo, hi = graft.prop5_bounds(base, lam, 0, 1.0, a, i)
            bad += not (lo <= fn.lengths[i - 1] <= hi * (1 + 1e-15))
    return Check("graft.prop5_containment", bad == 0, f"{bad} violations")


def check_convergence() -> Check:
    base = surface.FNPoint((2, 2, 2))
    names = ("gamma1", "gamma2", "gamma3", "delta1", "delta2", "delta3", "delta1delta2", "delta1delta3")
    panel = [surface.curve(n) for n in names]
    s = graft.RaySchedule.geometric(100, 10**0.25, 17, base, graft.SimplicialLamination((1, 2, 0)))
    r = thurston.run_convergence(s, panel)
    return Check("thurston.convergence_gamma1_2gamma2", r.verdict, f"final error {r.errors[-1]:.4f}")


def check_projective_scale(rng) -> Check:
    worst = 0.0
    for _ in range(100):
        v = thurston.PanelVector({str(k): x for k, x in enumerate(rng.random(5))})
        w = thurston.PanelVector({str(k): x for k, x in enumerate(rng.random(5))})
        c = rng.uniform(0.01, 100)
        vc = thurston.PanelVector({k: c * x for k, x in v.entries.items()})
        worst = max(worst, abs(thurston.projective_error(vc, w) - thurston.projective_error(v, w)))
    return Check("thurston.scale_invariance", worst < 1e-12, f"max change {worst:.1e}")


def _reference_domains():
    wedge = spacetime.build_domain(
        [spacetime.LightlikePlane((1, 1, 0), 0), spacetime.LightlikePlane((1, -1, 0), 0)]
    )
    cone = spacetime.build_domain([spacetime.LightlikePlane.at_angle(k * math.pi / 2) for k in range(4)])
    return wedge, cone


def check_wedge() -> Check:
    wedge, _ = _reference_domains()
    t, z = np.meshgrid(np.linspace(0.01, 10, 40), np.linspace(-5, 5, 25))
    pts = np.column_stack([t.ravel(), np.zeros(t.size), z.ravel()])
    err = float(np.max(np.abs(spacetime.cosmological_times(wedge, pts) - pts[:, 0])))
    return Check("spacetime.wedge_closed_form", err < 1e-12, f"max error {err:.1e}")


def check_concavity(seed) -> Check:
    viol = []
    for name, d in zip(("wedge", "cone"), _reference_domains()):
        rep = spacetime.check_concavity(d, 10000, seed)
        viol.append(f"{name}: {len(rep.violations)}")
        if rep.violations:
            return Check("spacetime.concavity", False, ", ".join(viol))
    return Check("spacetime.concavity", True, ", ".join(viol))


def check_reverse_triangle(rng) -> Check:
    _, cone = _reference_domains()
    p = spacetime.sample_interior(cone, 1000, rng)
    eta = rng.uniform(0, 1.5, 1000)
    phi = rng.uniform(0, 2 * math.pi, 1000)
    u = np.column_stack([np.cosh(eta), np.sinh(eta) * np.cos(phi), np.sinh(eta) * np.sin(phi)])
    t = rng.uniform(0, 3, 1000)
    gain = spacetime.cosmological_times(cone, p + t[:, None] * u) - spacetime.cosmological_times(cone, p)
    worst = float(np.min(gain - t))
    return Check("spacetime.reverse_triangle", worst >= -1e-9, f"min slack {worst:.1e}")


def check_constants() -> Check:
    errs = [
        abs(spacetime.cmc_reparam("flat", -2) - 0.5),
        abs(spacetime.cmc_reparam("deSitter", -2) - 0.5 * math.log(3)),
        abs(spacetime.comparison_constants("deSitter", 2).bilip_K - 2 * math.cosh(1)),
        abs(spacetime.comparison_constants("flat").teich_bound - 4 * math.log(3)),
        abs(spacetime.k_level_for_cmc(-1) + 1),
        abs(spacetime.k_level_for_cmc(-2) - (-7 - 4 * math.sqrt(3))),
    ]
    worst = max(errs)
    return Check("spacetime.constants", worst < 1e-12, f"max error {worst:.1e}")


def run_selftest(seed: int = 0, curves=None) -> list:
    rng = np.random.default_rng(seed)
    checks = [
        ("hyp2.translation_length_conjugation", lambda: check_moebius(rng)),
        ("surface.holonomy_soundness", lambda: check_holonomy(rng)),
        ("surface.curve_table_intersections", lambda: check_curve_table(rng, curves)),
        ("twist.single_crossing_and_dehn_shift", check_twist),
        ("graft.prop5_containment", lambda: check_graft(rng)),
        ("thurston.convergence_gamma1_2gamma2", check_convergence),
        ("thurston.scale_invariance", lambda: check_projective_scale(rng)),
        ("spacetime.wedge_closed_form", check_wedge),
        ("spacetime.concavity", lambda: check_concavity(seed)),
        ("spacetime.reverse_triangle", lambda: check_reverse_triangle(rng)),
        ("spacetime.constants", check_constants),
    ]
    results = []
    for name, fn in checks:
        try:
            results.append(fn())
        except Exception as exc:  # noqa: BLE001 - a crash is a failed check
            results.append(Check(name, False, f"{type(exc).__name__}: {exc}"))
    return results
