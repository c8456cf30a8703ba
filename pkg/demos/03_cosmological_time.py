"""Cosmological time of regular domains cut out by lightlike planes.

The wedge has the x2-axis as initial singularity and T(t, 0, z) = t.  The
four-plane domain has a vertex at the origin and four edges; points near an
edge retract to it, points near the axis retract to the vertex.
"""
import math

from moncrief.spacetime import (
    LightlikePlane,
    build_domain,
    check_concavity,
    cosmological_time,
    level_segment_violations,
    level_set_sample,
)

wedge = build_domain([LightlikePlane((1, 1, 0), 0), LightlikePlane((1, -1, 0), 0)])
cone = build_domain([LightlikePlane.at_angle(k * math.pi / 2) for k in range(4)])

for p in ((2.0, 0.0, 5.0), (2.0, 1.0, 0.0)):
    v = cosmological_time(wedge, p)
    print(f"wedge  T{p} = {v.time:.12f}, retracts to {tuple(v.retraction_point)} on {v.stratum}")

for p in ((1.0, 0.0, 0.0), (1.0, 0.9, 0.9), (3.0, 2.5, 0.0)):
    v = cosmological_time(cone, p)
    r = tuple(round(x, 6) + 0.0 for x in v.retraction_point)
    print(f"cone   T{p} = {v.time:.12f}, retracts to {r} on {v.stratum}")

for name, d in (("wedge", wedge), ("cone", cone)):
    rep = check_concavity(d, 10_000, seed=0)
    print(f"{name}: {len(rep.violations)} concavity violations in 10^4 midpoint tests, min slack {rep.min_slack:.2e}")

pts = level_set_sample(cone, 1.0, 50, seed=0)
print(f"cone level T = 1: {len(pts)} points, {level_segment_violations(cone, pts, 1.0)} segment points below the level")
