"""Builders and numerical invariants for fat-point linear systems.

Plane systems are written ``(d; p0 -> m0, q -> m_q, ...)``: plane curves of
degree ``d`` with multiplicity at least ``m_q`` at each point.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import sympy

from .birational import LinearSystemSpec
from .errors import InvalidInputError
from .modp import is_singular_mod_p, rank_mod_p
from .picard import P0, SurfaceModel

P0_COORDS = (1, 0, 0)


class DegenerateSystemWarning(UserWarning):
    pass


@dataclass(frozen=True)
class PointConfig:
    """Labelled points of the plane, optionally with projective coordinates.

    Coordinates are integer triples; with ``modulus`` set they are read as
    elements of the prime field, otherwise as exact integers.
    """

    labels: tuple[str, ...]
    coords: Mapping[str, tuple[int, int, int]] | None = None
    roles: Mapping[str, str] = field(default_factory=dict)
    modulus: int | None = None

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        if len(set(labels)) != len(labels):
            raise InvalidInputError(f"repeated labels in {labels}")
        object.__setattr__(self, "labels", labels)
        if self.coords is not None:
            coords = {}
            for l in labels:
                if l not in self.coords:
                    raise InvalidInputError(f"no coordinates for {l!r}")
                c = tuple(int(x) for x in self.coords[l])
                if len(c) != 3:
                    raise InvalidInputError(f"{l!r}: need three homogeneous coordinates")
                if self.modulus is not None:
                    c = tuple(x % self.modulus for x in c)
                if not any(c):
                    raise InvalidInputError(f"{l!r}: the zero vector is not a point")
                coords[l] = c
            object.__setattr__(self, "coords", coords)
        for l, r in self.roles.items():
            if r not in ("X", "Y", "p0", "generic"):
                raise InvalidInputError(f"unknown role {r!r} for {l!r}")

    @classmethod
    def from_points(cls, points: Sequence[Sequence[int]], prefix: str = "q", modulus: int | None = None) -> PointConfig:
        labels = tuple(f"{prefix}{i + 1}" for i in range(len(points)))
        return cls(labels, dict(zip(labels, (tuple(p) for p in points))), modulus=modulus)

    def __len__(self) -> int:
        return len(self.labels)

    def point(self, label: str) -> tuple[int, int, int]:
        if self.coords is None:
            raise InvalidInputError("configuration has no coordinates")
        return self.coords[label]

    def points(self) -> list[tuple[int, int, int]]:
        return [self.point(l) for l in self.labels]

    def restrict(self, labels: Iterable[str]) -> PointConfig:
        labels = tuple(labels)
        coords = None if self.coords is None else {l: self.coords[l] for l in labels}
        roles = {l: r for l, r in self.roles.items() if l in labels}
        return PointConfig(labels, coords, roles, self.modulus)

    def relabel(self, labels: Sequence[str]) -> PointConfig:
        if len(labels) != len(self.labels):
            raise InvalidInputError("relabel needs one new label per point")
        coords = None if self.coords is None else dict(zip(labels, self.points()))
        return PointConfig(tuple(labels), coords, {}, self.modulus)


@dataclass(frozen=True)
class PlaneSystem:
    degree: int
    p0: int = 0
    points: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise InvalidInputError(f"plane systems need degree >= 1, got {self.degree}")
        pts = {str(k): int(v) for k, v in self.points.items()}
        if P0 in pts:
            raise InvalidInputError("p0 is given through the p0 field, not as a point")
        if self.p0 < 0 or any(v < 0 for v in pts.values()):
            raise InvalidInputError("multiplicities must be non-negative")
        object.__setattr__(self, "points", pts)

    @property
    def multiplicities(self) -> list[int]:
        return [self.p0, *self.points.values()]

    def to_spec(self) -> LinearSystemSpec:
        return LinearSystemSpec.plane(self.degree, {P0: self.p0, **self.points})

    @classmethod
    def from_spec(cls, spec: LinearSystemSpec) -> PlaneSystem:
        if not spec.surface.is_plane:
            raise InvalidInputError(f"expected a plane system, got {spec.surface.describe()}")
        pts = {k: v for k, v in spec.mults.items() if k != P0}
        return cls(spec.degree, spec.mult(P0), pts)

    def to_dict(self) -> dict:
        return {"degree": self.degree, "p0": self.p0, "points": dict(self.points)}

    @classmethod
    def from_dict(cls, data: Mapping) -> PlaneSystem:
        return cls(int(data["degree"]), int(data.get("p0", 0)), dict(data.get("points", {})))

    def __str__(self) -> str:
        ms = ", ".join(f"{k}:{v}" for k, v in self.points.items())
        return f"({self.degree}; p0:{self.p0}{', ' if ms else ''}{ms})"


def _degree_and_mults(sys) -> tuple[int, list[int]]:
    if isinstance(sys, PlaneSystem):
        return sys.degree, sys.multiplicities
    if isinstance(sys, LinearSystemSpec) and sys.surface.is_plane:
        return sys.degree, list(sys.mults.values())
    raise InvalidInputError(f"expected a plane system, got {type(sys).__name__}")


def build_R_class(
    surface: SurfaceModel,
    a: int,
    d: int,
    X: Sequence[str] = (),
    Y: Sequence[str] = (),
) -> LinearSystemSpec:
    """``|-aK + dF|`` with multiplicity ``2a`` along ``X`` and ``a`` along ``Y``."""
    if a < 0:
        raise InvalidInputError("a must be non-negative")
    overlap = set(X) & set(Y)
    if overlap:
        raise InvalidInputError(f"X and Y overlap in {sorted(overlap)}")
    mults = {x: 2 * a for x in X}
    mults.update({y: a for y in Y})
    return LinearSystemSpec.anticanonical(surface, a, d, mults)


def build_plane_R_class(A: Sequence[str], a: int, d: int) -> PlaneSystem:
    """Degree ``d`` curves with ``p0`` of multiplicity ``d - 2a`` and ``a`` along ``A``."""
    if a < 0:
        raise InvalidInputError("a must be non-negative")
    if d < 2 * a:
        raise InvalidInputError(f"need d >= 2a, got d={d}, a={a}")
    if a == 0:
        warnings.warn(
            f"a = 0 gives the degenerate system of degree {d} curves with a {d}-fold point at p0",
            DegenerateSystemWarning,
            stacklevel=2,
        )
    return PlaneSystem(d, d - 2 * a, {q: a for q in A})


def expected_dim(sys) -> int:
    """Virtual projective dimension ``d(d+3)/2 - sum m(m+1)/2``; may be negative."""
    d, ms = _degree_and_mults(sys)
    return d * (d + 3) // 2 - sum(m * (m + 1) // 2 for m in ms)


def genus(sys) -> int:
    """Arithmetic genus ``(d-1)(d-2)/2 - sum m(m-1)/2`` of a member."""
    d, ms = _degree_and_mults(sys)
    return (d - 1) * (d - 2) // 2 - sum(m * (m - 1) // 2 for m in ms)


# ---------------------------------------------------------------------------
# position predicates


def _det3(p, q, r) -> int:
    return (
        p[0] * (q[1] * r[2] - q[2] * r[1])
        - p[1] * (q[0] * r[2] - q[2] * r[0])
        + p[2] * (q[0] * r[1] - q[1] * r[0])
    )


def _is_zero(value: int, modulus: int | None) -> bool:
    return value % modulus == 0 if modulus else value == 0


def _rank(rows, modulus: int | None) -> int:
    if modulus:
        return rank_mod_p(rows, modulus)
    return sympy.Matrix(rows).rank()


def _singular(rows, modulus: int | None) -> bool:
    if modulus:
        return is_singular_mod_p(rows, modulus)
    return sympy.Matrix(rows).det(method="bareiss") == 0


def _same_point(p, q, modulus: int | None) -> bool:
    cross = (p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0])
    return all(_is_zero(c, modulus) for c in cross)


def check_dagger(points: PointConfig, p0: Sequence[int] = P0_COORDS) -> bool:
    """True iff no two of the points are collinear with ``p0``."""
    if points.coords is None:
        raise InvalidInputError("condition (dagger) needs coordinates")
    m = points.modulus
    pts = points.points()
    for l, p in zip(points.labels, pts):
        if _same_point(p, p0, m):
            raise InvalidInputError(f"point {l!r} coincides with p0")
    return all(not _is_zero(_det3(p, q, p0), m) for p, q in itertools.combinations(pts, 2))


def _conic_row(p) -> list[int]:
    x, y, z = p
    return [x * x, y * y, z * z, x * y, x * z, y * z]


def _cubic_row(p) -> list[int]:
    x, y, z = p
    return [x**i * y**j * z ** (3 - i - j) for i in range(4) for j in range(4 - i)]


@dataclass(frozen=True)
class GeneralityReport:
    n: int
    coincident: tuple[tuple[str, str], ...]
    collinear: tuple[tuple[str, str, str], ...]
    six_on_conic: tuple[tuple[str, ...], ...]
    cubic_rank: int | None

    @property
    def cubics_independent(self) -> bool | None:
        if self.cubic_rank is None:
            return None
        return self.cubic_rank == self.n

    @property
    def clear(self) -> bool:
        return (
            not self.coincident
            and not self.collinear
            and not self.six_on_conic
            and self.cubics_independent is not False
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "coincident": [list(t) for t in self.coincident],
            "collinear": [list(t) for t in self.collinear],
            "six_on_conic": [list(t) for t in self.six_on_conic],
            "cubic_rank": self.cubic_rank,
            "cubics_independent": self.cubics_independent,
            "clear": self.clear,
        }


def generality_report(points: PointConfig) -> GeneralityReport:
    """Flag coincidences, collinear triples, six points on a conic and dependence on cubics.

    The cubic test (rank of the evaluation matrix equals the number of
    points) is run for at most ten points.
    """
    if points.coords is None:
        raise InvalidInputError("generality checks need coordinates")
    m = points.modulus
    items = list(zip(points.labels, points.points()))
    coincident = tuple(
        (a, b) for (a, p), (b, q) in itertools.combinations(items, 2) if _same_point(p, q, m)
    )
    collinear = tuple(
        (a, b, c)
        for (a, p), (b, q), (c, r) in itertools.combinations(items, 3)
        if _is_zero(_det3(p, q, r), m)
    )
    conic = tuple(
        tuple(l for l, _ in six)
        for six in itertools.combinations(items, 6)
        if _singular([_conic_row(p) for _, p in six], m)
    )
    cubic_rank = None
    if len(items) <= 10:
        rows = [_cubic_row(p) for _, p in items]
        cubic_rank = _rank(rows, m) if rows else 0
    return GeneralityReport(len(items), coincident, collinear, conic, cubic_rank)
