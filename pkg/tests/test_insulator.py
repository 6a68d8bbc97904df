"""Insulator families, circle arrangements, and the noncoalesceability verdict."""

import cmath
import math
import warnings

import numpy as np
import pytest

from conftest import random_circle_instance, random_isometry
from hyptube.bounds import LOG3_HALF
from hyptube.hcore import (
    CircleOnSphere,
    ComplexDistance,
    Geodesic,
    PointOnCircle,
    ideal,
    visual_angle,
)
from hyptube.insulator import (
    Arrangement,
    FamilyMember,
    GuardBandSwallowedPoint,
    InsulatorFamily,
    NearTangencyWarning,
    build_family,
    flood_fill_oracle,
    noncoalesceable,
    separates_union,
    triple_separates,
)
from hyptube.lifts import Word, lifts_of_geodesic

ACOSH2 = math.acosh(2.0)
ROOTS = [cmath.exp(2j * math.pi * k / 3) for k in range(3)]


def chain_family(radius: float) -> InsulatorFamily:
    """Synthetic family: circles of the given radius at the cube roots of
    unity, base endpoints 0 and infinity."""
    members = [
        FamilyMember(
            CircleOnSphere.circle(c, radius), ComplexDistance(0.5, 0.0), Word((1,)), k + 1
        )
        for k, c in enumerate(ROOTS)
    ]
    return InsulatorFamily(ideal(0), ideal("inf"), members)


# ---------------------------------------------------------------------------
# family construction


def test_build_family_twolift(twolift):
    L = lifts_of_geodesic(twolift, Word((1,)), 1)
    F = build_family(L, cutoff=4.0)
    assert len(F) == 1
    m = F.members[0]
    assert m.circle.center == pytest.approx(3.0, abs=1e-9)
    assert m.circle.radius == pytest.approx(math.sqrt(6), abs=1e-9)
    assert m.ortho.d == pytest.approx(ACOSH2, abs=1e-9)
    ends = {F.p_plus, F.p_minus}
    assert any(p.close_to(ideal(0)) for p in ends)
    assert any(p.is_infinity for p in ends)


def test_build_family_empty_for_cyclic():
    from hyptube.hcore import Isometry
    from hyptube.lifts import GroupPresentation

    G = GroupPresentation(
        ("a",), (Isometry.from_matrix(math.sqrt(3), 0, 0, 1 / math.sqrt(3)),)
    )
    L = lifts_of_geodesic(G, Word((1,)), 3)
    assert len(build_family(L, cutoff=4.0)) == 0


def test_build_family_sorted_and_separating(twolift):
    from hyptube.hcore import separates

    L = lifts_of_geodesic(twolift, Word((1,)), 3)
    F = build_family(L, cutoff=6.0)
    ds = [m.ortho.d for m in F.members]
    assert ds == sorted(ds)
    for m in F.members:
        lift = L.lifts[m.lift_index]
        for p in (F.p_plus, F.p_minus):
            for q in lift.geodesic.endpoints:
                assert separates(m.circle, p, q)


def test_build_family_equivariance(twolift, rng):
    L = lifts_of_geodesic(twolift, Word((1,)), 2)
    F = build_family(L, cutoff=4.0)
    h = random_isometry(rng)
    Fh = build_family(lifts_of_geodesic(twolift.conjugated(h), Word((1,)), 2), 4.0)
    assert len(Fh) == len(F)
    # equal ortholengths may permute under conjugation; match members by word
    by_word = {mh.word: mh for mh in Fh.members}
    for m in F.members:
        mh = by_word[m.word]
        assert m.ortho.d == pytest.approx(mh.ortho.d, abs=1e-9)
        for p in m.circle.sample_points(8):
            assert mh.circle.contains(h.apply(p), 1e-6)


# ---------------------------------------------------------------------------
# separation decision


def test_triple_same_unit_circle():
    u = CircleOnSphere.circle(0, 1)
    assert triple_separates(u, u, u, ideal(0), ideal("inf"))


def test_triple_chain_radius_09():
    c = [CircleOnSphere.circle(r, 0.9) for r in ROOTS]
    assert triple_separates(c[0], c[1], c[2], ideal(0), ideal("inf"))
    assert flood_fill_oracle(c, ideal(0), ideal("inf"))


def test_triple_chain_radius_08():
    c = [CircleOnSphere.circle(r, 0.8) for r in ROOTS]
    assert not triple_separates(c[0], c[1], c[2], ideal(0), ideal("inf"))
    assert not flood_fill_oracle(c, ideal(0), ideal("inf"))


def test_triple_point_on_circle():
    u = CircleOnSphere.circle(0, 1)
    with pytest.raises(PointOnCircle):
        triple_separates(u, u, u, ideal(1), ideal("inf"))


def test_separates_union_no_circles():
    assert not separates_union([], ideal(0), ideal(1)).separated


def test_near_tangency_flagged():
    a = CircleOnSphere.circle(0, 1)
    b = CircleOnSphere.circle(2, 1)  # externally tangent at z = 1
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        separates_union([a, b], ideal(3j), ideal(0.5), tol=1e-9)
    assert any(issubclass(w.category, NearTangencyWarning) for w in caught)


def test_euler_relation_random_instances(rng):
    for _ in range(100):
        circles, p, q = random_circle_instance(rng)
        res = separates_union(circles, p, q)
        for arr in res.arrangements:
            v = len(arr.vertices)
            e = len(arr.halfedges) // 2
            assert v - e + arr.n_faces == 2


def test_mobius_invariance(rng):
    for _ in range(50):
        circles, p, q = random_circle_instance(rng)
        ref = triple_separates(*circles, p, q)
        h = random_isometry(rng)
        moved = [c.transformed(h) for c in circles]
        assert triple_separates(*moved, h.apply(p), h.apply(q)) == ref


def test_submultiset_monotonicity(rng):
    for _ in range(50):
        circles, p, q = random_circle_instance(rng)
        full = triple_separates(*circles, p, q)
        if not full:
            # no sub-multiset may separate either
            for i in range(3):
                assert not separates_union([circles[i]], p, q).separated
            for i in range(3):
                for j in range(i + 1, 3):
                    assert not separates_union([circles[i], circles[j]], p, q).separated


def test_oracle_agreement_sample(rng):
    for k in range(100):
        circles, p, q = random_circle_instance(rng)
        exact = triple_separates(*circles, p, q)
        raster = flood_fill_oracle(circles, p, q, resolution=256, seed=k)
        assert exact == raster


# ---------------------------------------------------------------------------
# noncoalesceability


def test_shortcut_fires(twolift):
    L = lifts_of_geodesic(twolift, Word((1,)), 1)
    F = build_family(L, cutoff=4.0)
    assert all(m.ortho.d / 2 > LOG3_HALF for m in F.members)
    v = noncoalesceable(F)
    assert v.kind == "noncoalesceable" and v.basis == "tube-shortcut"


def test_shortcut_agrees_with_exhaustive(twolift):
    L = lifts_of_geodesic(twolift, Word((1,)), 2)
    F = build_family(L, cutoff=4.0)
    v = noncoalesceable(F, force_exhaustive=True)
    assert v.kind == "noncoalesceable" and v.basis == "exhaustive-triples"
    assert v.tested > 0


def test_coalescing_chain_family():
    v = noncoalesceable(chain_family(0.9))
    assert v.kind == "coalescing"
    assert v.triple is not None and len(v.triple) == 3
    # the reported triple really separates
    F = chain_family(0.9)
    cs = [F.members[i].circle for i in v.triple]
    assert triple_separates(*cs, F.p_plus, F.p_minus)


def test_no_coalescing_sparse_chain():
    v = noncoalesceable(chain_family(0.8))
    assert v.kind == "noncoalesceable" and v.basis == "exhaustive-triples"
    assert v.tested == 10  # C(3+2,3) multisets


def test_empty_family_noncoalesceable():
    F = InsulatorFamily(ideal(0), ideal("inf"), [])
    assert noncoalesceable(F).kind == "noncoalesceable"


def test_budget_exhaustion():
    v = noncoalesceable(chain_family(0.8), budget=2)
    assert v.kind == "inconclusive" and v.basis == "budget-exhausted"
    assert v.tested == 2


def test_single_separating_circle_reported_as_repeated_triple():
    members = [
        FamilyMember(
            CircleOnSphere.circle(0, 1), ComplexDistance(0.5, 0.0), Word((1,)), 1
        )
    ]
    F = InsulatorFamily(ideal(0), ideal("inf"), members)
    v = noncoalesceable(F)
    assert v.kind == "coalescing" and v.triple == (0, 0, 0)


def test_visual_angle_consistency(twolift):
    L = lifts_of_geodesic(twolift, Word((1,)), 2)
    F = build_family(L, cutoff=6.0)
    for m in F.members:
        if m.ortho.d / 2 > LOG3_HALF:
            assert visual_angle(m.ortho.d / 2) < 2 * math.pi / 3


# ---------------------------------------------------------------------------
# raster oracle behaviour


def test_flood_fill_unit_circle():
    assert flood_fill_oracle([CircleOnSphere.circle(0, 1)], ideal(0), ideal("inf"))


def test_flood_fill_no_circles():
    assert not flood_fill_oracle([], ideal(0), ideal(5))


def test_flood_fill_guard_band():
    with pytest.raises(GuardBandSwallowedPoint):
        flood_fill_oracle(
            [CircleOnSphere.circle(0, 1)], ideal(1.0001), ideal("inf"), resolution=64
        )


def test_flood_fill_resolution_floor():
    with pytest.raises(ValueError):
        flood_fill_oracle([CircleOnSphere.circle(0, 1)], ideal(0), ideal("inf"), 32)
