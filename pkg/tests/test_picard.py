from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratsurf.errors import InvalidInputError, ModelMismatchError, UnsupportedBasisError
from ratsurf.picard import (
    DivisorClass,
    SurfaceModel,
    ambient_frame,
    canonical_class,
    checked,
    fiber_class,
    intersect,
    pullback,
    standard_gram,
    to_blowup_basis,
)

PLANE = SurfaceModel.plane()


def F(e: int) -> SurfaceModel:
    return SurfaceModel.hirzebruch(e)


def anticanonical_plus_fibers(surface: SurfaceModel, a: int, d: int) -> DivisorClass:
    return -canonical_class(surface) * a + fiber_class(surface) * d


# --- examples -------------------------------------------------------------------


def test_hirzebruch_intersections():
    # (C0 + 2F)^2 on F_2 = -2 + 4 = 2
    c = DivisorClass(F(2), (1, 2))
    assert intersect(c, c) == 2
    c0 = DivisorClass.basis_element(F(3), "C0")
    assert intersect(c0, c0) == -3


@pytest.mark.parametrize("a", range(0, 7))
@pytest.mark.parametrize("d", [0, 1, 5, 31, 50])
@pytest.mark.parametrize("e", range(0, 6))
def test_anticanonical_family_pairings(a, d, e):
    s = F(e)
    D = anticanonical_plus_fibers(s, a, d)
    assert D.coords == (2 * a, a * (e + 2) + d)
    assert intersect(D, fiber_class(s)) == 2 * a
    assert intersect(D, DivisorClass.basis_element(s, "C0")) == d + 2 * a - a * e


def test_blown_up_anticanonical_meets_exceptionals_in_a():
    s = SurfaceModel.blow_up(F(3), [f"y{i}" for i in range(7)])
    D = anticanonical_plus_fibers(s, 4, 5)
    for y in s.exceptional_labels:
        assert intersect(D, DivisorClass.basis_element(s, f"E({y})")) == 4


@pytest.mark.parametrize(
    "surface, k2",
    [
        (PLANE, 9),
        (F(0), 8),
        (F(5), 8),
        (SurfaceModel.blow_up(PLANE, ["a", "b", "c"]), 6),
        (SurfaceModel.blow_up(F(2), [f"y{i}" for i in range(7)]), 1),
    ],
)
def test_canonical_self_intersection(surface, k2):
    K = canonical_class(surface)
    assert intersect(K, K) == k2


def test_to_blowup_basis_examples():
    s = F(1)
    C0 = DivisorClass.basis_element(s, "C0")
    Fb = fiber_class(s)
    assert to_blowup_basis(C0).coords == (0, 1)
    assert to_blowup_basis(Fb).coords == (1, -1)
    K = to_blowup_basis(canonical_class(s))
    assert K.coords == (-3, 1)
    assert K == canonical_class(K.surface)


def test_to_blowup_basis_rejects_other_surfaces():
    with pytest.raises(UnsupportedBasisError):
        to_blowup_basis(DivisorClass(F(2), (1, 0)))


def test_cross_surface_intersection_is_rejected():
    with pytest.raises(ModelMismatchError):
        intersect(DivisorClass(F(1), (1, 0)), DivisorClass(F(2), (1, 0)))
    with pytest.raises(ModelMismatchError):
        DivisorClass(PLANE, (1,)) + DivisorClass(F(0), (0, 1))


def test_coordinate_count_and_overflow_checks():
    with pytest.raises(InvalidInputError):
        DivisorClass(F(1), (1, 2, 3))
    with pytest.raises(OverflowError):
        checked(2**63)
    big = DivisorClass(PLANE, (2**40,))
    with pytest.raises(OverflowError):
        intersect(big, big)


def test_pullback_pads_exceptionals():
    s = SurfaceModel.blow_up(F(2), ["x", "y"])
    assert pullback(DivisorClass(F(2), (1, 3)), s).coords == (1, 3, 0, 0)
    with pytest.raises(ModelMismatchError):
        pullback(DivisorClass(F(1), (1, 3)), s)


def test_surface_round_trip():
    s = SurfaceModel.blow_up(F(4), ["b1", "b2"])
    assert SurfaceModel.from_dict(s.to_dict()) == s
    c = DivisorClass(s, (8, 40, -4, -4))
    assert DivisorClass.from_dict(s, c.to_dict()) == c


@pytest.mark.parametrize(
    "surface, marked",
    [(PLANE, ["p0", "q"]), (F(0), ["x"]), (F(1), []), (F(4), ["x", "y"]),
     (SurfaceModel.blow_up(F(3), ["b1", "b2"]), ["x1"])],
)
def test_ambient_frame_is_an_isometry(surface, marked):
    frame = ambient_frame(surface, marked)
    assert frame.gram() == standard_gram(surface, marked)


# --- properties ------------------------------------------------------------------

surfaces = st.one_of(
    st.just(PLANE),
    st.integers(0, 6).map(F),
    st.tuples(st.integers(0, 6), st.integers(0, 5)).map(
        lambda t: SurfaceModel.blow_up(F(t[0]), [f"y{i}" for i in range(t[1])])
    ),
)


def classes_on(s: SurfaceModel):
    return st.lists(st.integers(-50, 50), min_size=s.rank, max_size=s.rank).map(
        lambda v: DivisorClass(s, tuple(v))
    )


@settings(max_examples=1000, deadline=None)
@given(st.data())
def test_intersection_is_symmetric_and_bilinear(data):
    s = data.draw(surfaces)
    x, y, z = (data.draw(classes_on(s)) for _ in range(3))
    k = data.draw(st.integers(-20, 20))
    assert intersect(x, y) == intersect(y, x)
    assert intersect(x + y, z) == intersect(x, z) + intersect(y, z)
    assert intersect(x * k, z) == k * intersect(x, z)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 6), st.data())
def test_to_blowup_basis_is_an_isometry(n, data):
    s = SurfaceModel.blow_up(F(1), [f"y{i}" for i in range(n)]) if n else F(1)
    x, y = data.draw(classes_on(s)), data.draw(classes_on(s))
    assert intersect(to_blowup_basis(x), to_blowup_basis(y)) == intersect(x, y)
    K = canonical_class(s)
    assert intersect(to_blowup_basis(K), to_blowup_basis(x)) == intersect(K, x)
