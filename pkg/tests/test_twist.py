import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moncrief.errors import NoIntersection
from moncrief.hyp2 import OrientedGeodesic, axis, normalize_to_standard, apply
from moncrief.surface import (
    CurveClass,
    FNPoint,
    build_holonomy,
    crossing_lifts,
    curve,
    curve_table,
    geometric_intersection,
    pants_curve,
)
from moncrief.twist import (
    crossing_displacement,
    lemma24_window,
    shear_left,
    side,
    twist_product,
    twisting_number,
)

BASE = FNPoint((2, 2, 2))
STANDARD = OrientedGeodesic(0, None)
# b1 meets gamma1 exactly once
B1 = CurveClass("b1", "b1", (1, 0, 1))


def test_normalised_single_crossing():
    d = crossing_displacement(STANDARD, 1, -math.e**3)
    assert abs(abs(float(d)) - 3) < 1e-15
    # the endpoint order does not matter, right is decided by side
    assert crossing_displacement(STANDARD, -math.e**3, 1) == d


def test_side_convention():
    assert side(STANDARD, 2) == 1
    assert side(STANDARD, -2) == -1
    assert side(STANDARD.reversed(), 2) == -1


def test_not_crossing():
    with pytest.raises(NoIntersection):
        crossing_displacement(STANDARD, 1, 2)


def test_self_and_disjoint_rejected():
    rep = build_holonomy(BASE)
    g1 = pants_curve(1)
    with pytest.raises(NoIntersection):
        twisting_number(rep, g1, g1)
    with pytest.raises(NoIntersection):
        twisting_number(rep, g1.inverse(), g1)
    with pytest.raises(NoIntersection):
        twisting_number(rep, pants_curve(2), g1)
    with pytest.raises(NoIntersection):
        twisting_number(rep, curve("delta2"), g1)


def test_base_regression():
    # zero twists glue by reflection, so the crossing lifts are symmetric
    tw = twisting_number(build_holonomy(BASE), curve("delta1"), pants_curve(1))
    assert tw.witness_count == 2
    assert tw.value < 1e-40
    assert tw.beta_length == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("t, frozen", [(0.5, 0.5271307214481219), (1.0, 1.0509716748983933)])
def test_fn_twist_response(t, frozen):
    rep = build_holonomy(FNPoint((2, 2, 2), (t, 0, 0)))
    tw = twisting_number(rep, curve("delta1"), pants_curve(1))
    prod = tw.product
    assert prod == pytest.approx(frozen, abs=1e-9)
    # the shift is t plus a small positive correction from the other lifts of
    # gamma1 that the lift of delta1 crosses
    assert 0 < prod - t < 0.06 * t


def test_product_identity():
    rep = build_holonomy(FNPoint((1.3, 2.0, 0.8), (0.6, -0.4, 0.9)))
    for c in ("delta1", "delta1delta2", "delta1delta3"):
        tw = twisting_number(rep, curve(c), pants_curve(1))
        assert abs(tw.product - min(abs(d) for d in tw.per_class_displacements)) == 0
        assert abs(tw.value * tw.beta_length - tw.product) < 1e-10
        assert twist_product(rep, curve(c), pants_curve(1)) == tw.product


def test_orientation_and_cyclic_invariance():
    rep = build_holonomy(FNPoint((1.3, 2.0, 0.8), (0.6, -0.4, 0.9)))
    g = curve("delta1")
    beta = pants_curve(1)
    ref = twisting_number(rep, g, beta).value
    assert abs(twisting_number(rep, g, beta.inverse()).value - ref) < 1e-10
    w = g.word
    for k in range(1, len(w)):
        rot = CurveClass("rot", w[k:] + w[:k], g.dt_intersections)
        assert abs(twisting_number(rep, rot, beta).value - ref) < 1e-9
    assert abs(twisting_number(rep, g.inverse(), beta).value - ref) < 1e-9
    assert abs(twisting_number(rep, g, beta, max_length=7).value - ref) < 1e-9


def test_witness_count_matches_intersection():
    rep = build_holonomy(FNPoint((0.9, 1.7, 2.4), (-0.5, 1.1, 0.3)))
    for c in curve_table():
        for i in (1, 2, 3):
            n = c.dt_intersections[i - 1]
            if n == 0:
                continue
            tw = twisting_number(rep, c, pants_curve(i))
            assert tw.witness_count == n == geometric_intersection(rep, c, i)
            assert len(tw.per_class_displacements) == n


def _normalised_lift(rep, gamma, beta):
    """Endpoints of the single crossing lift after sending beta's axis to (0, inf) and a_r to 1."""
    (lift,) = crossing_lifts(rep, gamma, beta)
    b_axis = axis(rep.element(beta.word))
    g = rep.element(lift.conjugator)
    g_axis = axis(rep.element(gamma.word)).image(g)
    right = g_axis.start if side(b_axis, g_axis.start) > 0 else g_axis.end
    left = g_axis.end if right is g_axis.start else g_axis.start
    m = normalize_to_standard(b_axis, right)
    return lift, apply(m, right), apply(m, left)


def test_single_crossing_identity_on_surface():
    rep = build_holonomy(FNPoint((1.7, 2.2, 1.1), (0.8, -0.3, 0.5)))
    lift, ar, al = _normalised_lift(rep, B1, pants_curve(1))
    assert abs(float(ar.value) - 1) < 1e-40
    tw = twisting_number(rep, B1, pants_curve(1))
    assert abs(tw.product - abs(math.log(-float(al.value)))) < 1e-10


def test_shear_shifts_by_length():
    rep = build_holonomy(FNPoint((1.7, 2.2, 1.1), (0.8, -0.3, 0.5)))
    lift, ar, al = _normalised_lift(rep, B1, pants_curve(1))
    ell = 1.7
    before = crossing_displacement(STANDARD, ar, al)
    p, q = shear_left(STANDARD, ell, ar, al)
    after = crossing_displacement(STANDARD, p, q)
    assert abs(abs(float(after - before)) - ell) < 1e-8
    # shearing the other way undoes it
    p2, q2 = shear_left(STANDARD, -ell, p, q)
    assert abs(float(crossing_displacement(STANDARD, p2, q2) - before)) < 1e-30


@pytest.mark.parametrize("ell, max_excess", [(0.1, 1e-3), (0.5, 0.01), (2.0, 0.06)])
def test_dehn_twisted_word(ell, max_excess):
    """b1 -> b1 a1 shifts the displacement by l(gamma1) up to a bounded excess."""
    rep = build_holonomy(FNPoint((ell, 2, 2)))
    beta = pants_curve(1)
    (d0,) = twisting_number(rep, B1, beta).per_class_displacements
    (d1,) = twisting_number(rep, CurveClass("b1a1", "b1 a1", (1, 0, 1)), beta).per_class_displacements
    rel = abs(d1 - d0) / ell - 1
    assert 0 <= rel < max_excess


def test_pinched_twisting():
    a = 1e6
    rep = build_holonomy(FNPoint((2 * math.pi / (math.pi + a), 2 * math.pi / (math.pi + 2 * a), 2), (0.5, -0.5, 0.3)))
    tw = twisting_number(rep, curve("delta1"), pants_curve(1))
    assert tw.witness_count == 2
    assert tw.product == pytest.approx(0.5, abs=1e-5)


def test_lemma24_examples():
    assert lemma24_window(3, 0) == 3
    assert lemma24_window(3, 0.1) == pytest.approx(4.190694346907959, rel=1e-14)
    assert lemma24_window(3, 0.1) <= lemma24_window(3, 0.2)
    with pytest.raises(ValueError):
        lemma24_window(0, 1)
    with pytest.raises(ValueError):
        lemma24_window(1, -1)


@settings(max_examples=200, deadline=None)
@given(
    st.floats(0.01, 50), st.floats(0.0, 5), st.floats(0.0, 10), st.floats(0.0, 5),
)
def test_lemma24_monotone(M, K, dM, dK):
    w = lemma24_window(M, K)
    assert w >= M
    assert lemma24_window(M + dM, K) >= w
    assert lemma24_window(M, K + dK) >= w
