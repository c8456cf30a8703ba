"""A genus-2 surface from Fenchel-Nielsen coordinates, and its curve panel.

Builds the holonomy at one point of Teichmueller space, checks the surface
relator, and lists the lengths and pants-curve intersections of the panel.
Run with ``python3 demos/01_holonomy_and_curves.py``.
"""
from moncrief.surface import (
    FNPoint,
    build_holonomy,
    curve,
    curve_table,
    geodesic_length,
    geometric_intersection,
    pants_curve,
)
from moncrief.twist import twist_product

fn = FNPoint((1.0, 2.0, 3.0), (0.3, -0.7, 0.1))
rep = build_holonomy(fn)
print(f"FN point: lengths {fn.lengths}, twists {fn.twists}")
print(f"relator residual: {rep.relator_residual:.1e}")
print()
print(f"{'curve':<14}{'length':>20}   intersections with gamma1..3")
for c in curve_table():
    meas = tuple(geometric_intersection(rep, c, i) for i in (1, 2, 3))
    print(f"{c.name:<14}{float(geodesic_length(rep, c)):>20.12f}   {meas}")

# the twist product is unsigned; it tracks |FN twist| up to a bounded error
print()
for i in (1, 2, 3):
    prod = twist_product(rep, curve(f"delta{i}"), pants_curve(i))
    print(f"l(gamma{i}) Tw(delta{i}, gamma{i}) = {prod:.6f}   (|FN twist| {abs(fn.twists[i - 1]):.1f})")
