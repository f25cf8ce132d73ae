from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_collinear_triples, brute_six_on_conic, normalize, projective_points
from ratsurf.birational import LinearSystemSpec, cremona
from ratsurf.errors import InvalidInputError
from ratsurf.linsys import (
    DegenerateSystemWarning,
    PlaneSystem,
    PointConfig,
    build_plane_R_class,
    build_R_class,
    check_dagger,
    expected_dim,
    generality_report,
    genus,
)
from ratsurf.oracle import sample_general_points
from ratsurf.picard import SurfaceModel, canonical_class, intersect

SEVEN = [f"y{i}" for i in range(1, 8)]


# --- counts ------------------------------------------------------------------------


def test_degree_eleven_pencil_counts():
    s = PlaneSystem(11, 3, {y: 4 for y in SEVEN})
    assert expected_dim(s) == 1
    assert genus(s) == 0


def test_quartic_pencil_count():
    s = PlaneSystem(4, 0, {"a": 2, "b": 2, "c": 2, "d": 1, "e": 1, "f": 1, "g": 1})
    assert expected_dim(s) == 1
    assert genus(s) == 0


@pytest.mark.parametrize("d", range(1, 8))
def test_counts_without_points(d):
    s = PlaneSystem(d)
    assert expected_dim(s) == d * (d + 3) // 2
    assert genus(s) == (d - 1) * (d - 2) // 2


def test_counts_accept_plane_specs_and_reject_others():
    spec = LinearSystemSpec.plane(11, {"p0": 3, **{y: 4 for y in SEVEN}})
    assert expected_dim(spec) == 1 and genus(spec) == 0
    with pytest.raises(InvalidInputError):
        expected_dim(LinearSystemSpec.hirzebruch(1, 1, 1))


def test_plane_system_validation_and_round_trip():
    with pytest.raises(InvalidInputError):
        PlaneSystem(0)
    with pytest.raises(InvalidInputError):
        PlaneSystem(3, 0, {"a": -1})
    with pytest.raises(InvalidInputError):
        PlaneSystem(3, 0, {"p0": 1})
    s = PlaneSystem(5, 2, {"a": 1})
    assert PlaneSystem.from_dict(s.to_dict()) == s
    assert PlaneSystem.from_spec(s.to_spec()) == s


# --- builders ---------------------------------------------------------------------------


def test_build_plane_R_class():
    s = build_plane_R_class(SEVEN, 4, 11)
    assert s == PlaneSystem(11, 3, {y: 4 for y in SEVEN})
    with pytest.raises(InvalidInputError):
        build_plane_R_class(SEVEN, 4, 7)
    with pytest.warns(DegenerateSystemWarning):
        build_plane_R_class(SEVEN, 0, 3)


def test_build_R_class_multiplicities():
    S = SurfaceModel.hirzebruch(2)
    sys = build_R_class(S, 4, 31, X=["x1", "x2"], Y=["y1"])
    assert sys.anticanonical_form() == (4, 31)
    assert dict(sys.mults) == {"x1": 8, "x2": 8, "y1": 4}
    with pytest.raises(InvalidInputError):
        build_R_class(S, 4, 31, X=["x1"], Y=["x1"])


@pytest.mark.parametrize("e", range(0, 5))
@pytest.mark.parametrize("a", range(1, 5))
def test_anticanonical_class_meets_blown_up_points_in_a(e, a):
    S = SurfaceModel.blow_up(SurfaceModel.hirzebruch(e), SEVEN)
    sys = build_R_class(S, a, 3)
    c = sys.full_class()
    for y in SEVEN:
        E = type(c).basis_element(S, f"E({y})")
        assert intersect(c, E) == a
    K = canonical_class(S)
    assert intersect(K, K) == 1


# --- invariance under Cremona ---------------------------------------------------------------


@settings(max_examples=1000, deadline=None)
@given(st.integers(1, 30), st.lists(st.integers(0, 10), min_size=4, max_size=8), st.data())
def test_dimension_and_genus_are_cremona_invariant(d, ms, data):
    labels = [f"q{i}" for i in range(len(ms))]
    spec = LinearSystemSpec.plane(d, dict(zip(labels, ms)))
    centers = tuple(data.draw(st.permutations(["p0", *labels]))[:3])
    out = cremona(spec, centers)
    assert expected_dim(out) == expected_dim(spec)
    assert genus(out) == genus(spec)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 30), st.lists(st.integers(0, 6), max_size=6), st.integers(1, 6))
def test_adding_a_point_drops_dimension_and_genus(d, ms, m):
    base = PlaneSystem(d, 0, {f"q{i}": v for i, v in enumerate(ms)})
    more = PlaneSystem(d, 0, {**base.points, "new": m})
    assert expected_dim(base) - expected_dim(more) == m * (m + 1) // 2
    assert genus(base) - genus(more) == m * (m - 1) // 2


# --- position predicates -----------------------------------------------------------------------


def cfg(points, modulus=None):
    return PointConfig.from_points(points, modulus=modulus)


def test_dagger_examples():
    assert check_dagger(cfg([(0, 1, 0), (0, 0, 1)])) is True
    # (1,1,0) and (2,1,0) span a line through p0 = [1,0,0]
    assert check_dagger(cfg([(1, 1, 0), (2, 1, 0)])) is False
    with pytest.raises(InvalidInputError):
        check_dagger(cfg([(3, 0, 0)]))
    assert check_dagger(cfg([(1, 1, 0), (8, 1, 0)], modulus=7)) is False


def test_collinear_triple_is_flagged():
    r = generality_report(cfg([(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 2, 3)]))
    assert r.collinear == (("q1", "q2", "q3"),)
    assert not r.clear


def test_six_points_on_explicit_conic_are_flagged():
    # xz = y^2 through (t^2 : t : 1)
    pts = [(t * t, t, 1) for t in range(1, 7)] + [(1, 0, 5)]
    r = generality_report(cfg(pts))
    assert ("q1", "q2", "q3", "q4", "q5", "q6") in r.six_on_conic
    assert not r.collinear
    assert not r.clear


def test_coincident_points_are_flagged():
    r = generality_report(cfg([(1, 2, 3), (2, 4, 6), (0, 1, 5)]))
    assert r.coincident == (("q1", "q2"),)


def test_ten_points_on_a_cubic_are_dependent():
    # ten points on the smooth cubic x^3 + y^3 = z^3 over GF(p) are found by search
    p = 10007
    pts = []
    for x in range(1, p):
        rhs = (x**3 + 1) % p
        for y in range(1, 40):
            if (y**3 - rhs) % p == 0:
                pts.append((x, y, 1))
                break
        if len(pts) == 10:
            break
    if len(pts) < 10:
        pytest.skip("not enough points found in the search window")
    r = generality_report(cfg(pts, modulus=p))
    assert r.cubic_rank == 9 and r.cubics_independent is False
    assert not r.clear


@pytest.mark.parametrize("n", [7, 8])
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_random_configurations_are_general(n, seed):
    pts = sample_general_points(n, seed)
    assert check_dagger(pts)
    r = generality_report(pts)
    assert r.clear and r.cubic_rank == n


@pytest.mark.parametrize("seed", range(25))
def test_collinearity_matches_line_enumeration(seed):
    q = 7
    pts = random.Random(seed).sample(projective_points(q), 6)
    r = generality_report(cfg(pts, modulus=q))
    assert not r.coincident
    flagged = {frozenset(int(l[1:]) - 1 for l in t) for t in r.collinear}
    assert flagged == brute_collinear_triples(pts, q)


@pytest.mark.parametrize("seed", range(10))
def test_six_on_conic_matches_conic_enumeration(seed):
    q = 5
    rng = random.Random(100 + seed)
    plane = projective_points(q)
    # even seeds start from the six GF(5)-points of xz = y^2
    conic = [normalize((t * t, t, 1), q) for t in range(q)] + [(1, 0, 0)]
    pts = conic if seed % 2 == 0 else []
    pts += rng.sample([p for p in plane if p not in pts], 7 - len(pts))
    rng.shuffle(pts)
    r = generality_report(cfg(pts, modulus=q))
    assert not r.coincident
    flagged = {frozenset(int(l[1:]) - 1 for l in t) for t in r.six_on_conic}
    assert flagged == brute_six_on_conic(pts, q)
    if seed % 2 == 0:
        assert flagged


def test_point_config_helpers():
    c = cfg([(1, 2, 3), (0, 1, 0), (5, 5, 1)])
    assert len(c) == 3
    sub = c.restrict(["q3", "q1"])
    assert sub.labels == ("q3", "q1") and sub.point("q1") == (1, 2, 3)
    assert c.relabel(["a", "b", "c"]).point("b") == (0, 1, 0)
    with pytest.raises(InvalidInputError):
        PointConfig(("a", "a"))
    with pytest.raises(InvalidInputError):
        cfg([(0, 0, 0)])
    with pytest.raises(InvalidInputError):
        PointConfig(("a",), roles={"a": "bogus"})
