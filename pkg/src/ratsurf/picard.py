"""Picard lattices of marked rational surfaces.

Three kinds of surface are modelled: the projective plane, a Hirzebruch
surface ``F_e`` and a blow-up of either at a list of labelled points.  A
:class:`DivisorClass` is an integer vector in the basis of its surface:

============  =====================================
plane         ``(H,)``
``F_e``       ``(C0, F)``
blow-up       base basis followed by ``E(label)`` per point
============  =====================================

with ``H^2 = 1``, ``C0^2 = -e``, ``F^2 = 0``, ``C0.F = 1``, ``E^2 = -1`` and
exceptional classes orthogonal to everything else.

The module also provides :class:`Frame`, an isometric embedding of any of
these lattices into the lattice of a blown-up plane.  Birational actions are
re-derived on frames and compared with their closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import sympy

from .errors import InvalidInputError, ModelMismatchError, UnsupportedBasisError

INT64_MAX = 2**63 - 1

P0 = "p0"


def checked(value: int) -> int:
    """Return ``value`` unchanged, or raise if it does not fit in a signed 64-bit word."""
    value = int(value)
    if not -INT64_MAX - 1 <= value <= INT64_MAX:
        raise OverflowError(f"integer {value} exceeds 64-bit range")
    return value


def exceptional_name(label: str) -> str:
    return f"E({label})"


@dataclass(frozen=True)
class SurfaceModel:
    kind: str  # "plane" | "hirzebruch" | "blowup"
    e: int = 0
    base: SurfaceModel | None = None
    points: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("plane", "hirzebruch", "blowup"):
            raise InvalidInputError(f"unknown surface kind {self.kind!r}")
        if self.kind == "hirzebruch" and self.e < 0:
            raise InvalidInputError(f"Hirzebruch index must be >= 0, got {self.e}")
        if self.kind == "blowup":
            if self.base is None:
                raise InvalidInputError("blow-up needs a base surface")
            labels = self.base.exceptional_labels + self.points
            if len(set(labels)) != len(labels):
                raise InvalidInputError(f"repeated blow-up labels in {labels}")
            for label in self.points:
                if not isinstance(label, str) or not label:
                    raise InvalidInputError(f"bad point label {label!r}")
        elif self.base is not None or self.points:
            raise InvalidInputError(f"{self.kind} takes no base or points")

    @classmethod
    def plane(cls) -> SurfaceModel:
        return cls("plane")

    @classmethod
    def hirzebruch(cls, e: int) -> SurfaceModel:
        return cls("hirzebruch", e=int(e))

    @classmethod
    def blow_up(cls, base: SurfaceModel, points: Sequence[str]) -> SurfaceModel:
        return cls("blowup", base=base, points=tuple(points))

    @property
    def root(self) -> SurfaceModel:
        """The minimal model (plane or ``F_e``) underneath any blow-ups."""
        s = self
        while s.base is not None:
            s = s.base
        return s

    @property
    def is_plane(self) -> bool:
        return self.kind == "plane"

    @property
    def is_hirzebruch(self) -> bool:
        return self.kind == "hirzebruch"

    @property
    def is_ruled(self) -> bool:
        """True for ``F_e`` and its blow-ups, which carry a fiber class ``F``."""
        return self.root.kind == "hirzebruch"

    @property
    def exceptional_labels(self) -> tuple[str, ...]:
        if self.kind != "blowup":
            return ()
        return self.base.exceptional_labels + self.points

    @property
    def basis(self) -> tuple[str, ...]:
        if self.kind == "plane":
            return ("H",)
        if self.kind == "hirzebruch":
            return ("C0", "F")
        return self.base.basis + tuple(exceptional_name(p) for p in self.points)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def gram(self) -> tuple[tuple[int, ...], ...]:
        root = self.root
        n = self.rank
        g = [[0] * n for _ in range(n)]
        if root.kind == "plane":
            g[0][0] = 1
            start = 1
        else:
            g[0][0], g[0][1], g[1][0], g[1][1] = -root.e, 1, 1, 0
            start = 2
        for i in range(start, n):
            g[i][i] = -1
        return tuple(tuple(row) for row in g)

    def describe(self) -> str:
        if self.kind == "plane":
            return "P2"
        if self.kind == "hirzebruch":
            return f"F_{self.e}"
        return f"Bl[{', '.join(self.points)}]({self.base.describe()})"

    def to_dict(self) -> dict:
        if self.kind == "plane":
            return {"kind": "plane"}
        if self.kind == "hirzebruch":
            return {"kind": "hirzebruch", "e": self.e}
        return {"kind": "blowup", "base": self.base.to_dict(), "points": list(self.points)}

    @classmethod
    def from_dict(cls, data: Mapping) -> SurfaceModel:
        kind = data.get("kind")
        if kind == "plane":
            return cls.plane()
        if kind == "hirzebruch":
            return cls.hirzebruch(data["e"])
        if kind == "blowup":
            return cls.blow_up(cls.from_dict(data["base"]), data["points"])
        raise InvalidInputError(f"unknown surface kind {kind!r}")


@dataclass(frozen=True)
class DivisorClass:
    surface: SurfaceModel
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        coords = tuple(checked(c) for c in self.coords)
        if len(coords) != self.surface.rank:
            raise InvalidInputError(
                f"{self.surface.describe()} has rank {self.surface.rank}, got {len(coords)} coordinates"
            )
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_dict(cls, surface: SurfaceModel, parts: Mapping[str, int]) -> DivisorClass:
        basis = surface.basis
        unknown = set(parts) - set(basis)
        if unknown:
            raise InvalidInputError(f"unknown basis elements {sorted(unknown)} for {surface.describe()}")
        return cls(surface, tuple(int(parts.get(b, 0)) for b in basis))

    @classmethod
    def zero(cls, surface: SurfaceModel) -> DivisorClass:
        return cls(surface, (0,) * surface.rank)

    @classmethod
    def basis_element(cls, surface: SurfaceModel, name: str) -> DivisorClass:
        return cls.from_dict(surface, {name: 1})

    def to_dict(self) -> dict[str, int]:
        return dict(zip(self.surface.basis, self.coords))

    def __getitem__(self, name: str) -> int:
        try:
            return self.coords[self.surface.basis.index(name)]
        except ValueError:
            raise KeyError(name) from None

    def _same(self, other: DivisorClass) -> None:
        if self.surface != other.surface:
            raise ModelMismatchError(
                f"classes on {self.surface.describe()} and {other.surface.describe()}"
            )

    def __add__(self, other: DivisorClass) -> DivisorClass:
        self._same(other)
        return DivisorClass(self.surface, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        self._same(other)
        return DivisorClass(self.surface, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> DivisorClass:
        return DivisorClass(self.surface, tuple(-a for a in self.coords))

    def __mul__(self, k: int) -> DivisorClass:
        return DivisorClass(self.surface, tuple(checked(k * a) for a in self.coords))

    __rmul__ = __mul__

    def dot(self, other: DivisorClass) -> int:
        return intersect(self, other)

    def __str__(self) -> str:
        terms = []
        for name, c in zip(self.surface.basis, self.coords):
            if c:
                terms.append(f"{c:+d}{name}")
        return " ".join(terms) if terms else "0"


def intersect(c1: DivisorClass, c2: DivisorClass) -> int:
    """Intersection number of two classes on the same surface."""
    if c1.surface != c2.surface:
        raise ModelMismatchError(
            f"cannot intersect classes on {c1.surface.describe()} and {c2.surface.describe()}"
        )
    g = c1.surface.gram()
    total = 0
    for i, a in enumerate(c1.coords):
        if not a:
            continue
        row = g[i]
        for j, b in enumerate(c2.coords):
            if b and row[j]:
                total = checked(total + checked(a * row[j] * b))
    return total


def canonical_class(s: SurfaceModel) -> DivisorClass:
    """``K_S``: ``-3H`` on the plane, ``-2C0-(e+2)F`` on ``F_e``, pullback plus exceptionals on blow-ups."""
    if s.kind == "plane":
        return DivisorClass(s, (-3,))
    if s.kind == "hirzebruch":
        return DivisorClass(s, (-2, -(s.e + 2)))
    base = canonical_class(s.base)
    return DivisorClass(s, base.coords + (1,) * len(s.points))


def fiber_class(s: SurfaceModel) -> DivisorClass:
    if not s.is_ruled:
        raise UnsupportedBasisError(f"{s.describe()} carries no fiber class")
    return DivisorClass.basis_element(s, "F")


def pullback(c: DivisorClass, blown_up: SurfaceModel) -> DivisorClass:
    """Total transform of ``c`` to a blow-up of its surface."""
    s = blown_up
    extra: list[int] = []
    while s != c.surface:
        if s.kind != "blowup":
            raise ModelMismatchError(f"{blown_up.describe()} is not a blow-up of {c.surface.describe()}")
        extra = [0] * len(s.points) + extra
        s = s.base
    return DivisorClass(blown_up, c.coords + tuple(extra))


def to_blowup_basis(c: DivisorClass) -> DivisorClass:
    """Rewrite a class on ``F_1`` (or a blow-up of it) on the plane blown up at ``p0``.

    Uses ``C0 -> E(p0)`` and ``F -> H - E(p0)``; the map is an isometry and
    sends the canonical class to the canonical class.
    """
    s = c.surface
    if s.root != SurfaceModel.hirzebruch(1):
        raise UnsupportedBasisError(
            f"unified basis needs F_1 or a blow-up of it, got {s.describe()}"
        )
    labels = s.exceptional_labels
    if P0 in labels:
        raise InvalidInputError(f"label {P0!r} is reserved for the contracted section")
    target = SurfaceModel.blow_up(SurfaceModel.plane(), (P0,) + labels)
    x, y = c.coords[0], c.coords[1]
    return DivisorClass(target, (y, x - y) + c.coords[2:])


# ---------------------------------------------------------------------------
# frames: isometric embeddings into a blown-up plane


@dataclass(frozen=True)
class Frame:
    """Basis vectors of a surface lattice written in an ambient blown-up plane.

    ``names`` lists the basis of the framed surface followed by ``E(label)``
    for each marked point; ``vectors`` holds the matching ambient coordinates.
    """

    ambient: SurfaceModel
    names: tuple[str, ...]
    vectors: tuple[tuple[int, ...], ...]

    def vector(self, name: str) -> tuple[int, ...]:
        return self.vectors[self.names.index(name)]

    def gram(self) -> tuple[tuple[int, ...], ...]:
        q = np.array(self.ambient.gram(), dtype=object)
        b = np.array(self.vectors, dtype=object).reshape(len(self.vectors), self.ambient.rank)
        g = b @ q @ b.T
        return tuple(tuple(int(x) for x in row) for row in g)

    def ambient_vector(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != len(self.names):
            raise InvalidInputError("coordinate count does not match frame")
        out = [0] * self.ambient.rank
        for c, v in zip(coords, self.vectors):
            for i, vi in enumerate(v):
                out[i] = checked(out[i] + checked(c * vi))
        return tuple(out)

    def solve(self, v: Sequence[int]) -> tuple[int, ...]:
        """Exact coordinates of ambient vector ``v`` in this frame.

        Raises :class:`InvalidInputError` if ``v`` is not an integer
        combination of the frame vectors.
        """
        target = tuple(int(x) for x in v)
        q = np.array(self.ambient.gram(), dtype=float)
        b = np.array(self.vectors, dtype=float).reshape(len(self.vectors), self.ambient.rank)
        g = b @ q @ b.T
        coords = np.linalg.solve(g, b @ q @ np.array(target, dtype=float))
        rounded = tuple(int(round(c)) for c in coords)
        if self.ambient_vector(rounded) == target:
            return rounded
        # floats lose precision for large entries; redo the solve over Q
        qs = sympy.Matrix(self.ambient.gram())
        bs = sympy.Matrix(self.vectors)
        exact = (bs * qs * bs.T).LUsolve(bs * qs * sympy.Matrix(target))
        if any(not x.is_integer for x in exact):
            raise InvalidInputError("vector is not in the integer span of the frame")
        rounded = tuple(int(x) for x in exact)
        if self.ambient_vector(rounded) != target:
            raise InvalidInputError("vector is not in the integer span of the frame")
        return rounded


def _root_frame_parts(root: SurfaceModel) -> tuple[list[str], dict[str, dict[str, int]]]:
    # Hidden ambient points are prefixed with "~" so they never collide with user labels.
    if root.kind == "plane":
        return [], {"H": {"H": 1}}
    e = root.e
    if e == 0:
        hidden = ["~0", "~1"]
        return hidden, {
            "C0": {"H": 1, exceptional_name("~1"): -1},
            "F": {"H": 1, exceptional_name("~0"): -1},
        }
    hidden = [f"~{i}" for i in range(e)]
    c0 = {exceptional_name("~0"): 1}
    for h in hidden[1:]:
        c0[exceptional_name(h)] = -1
    return hidden, {"C0": c0, "F": {"H": 1, exceptional_name("~0"): -1}}


def ambient_frame(surface: SurfaceModel, marked: Sequence[str] = ()) -> Frame:
    """Embed ``surface`` blown up at ``marked`` into a blown-up plane.

    On the plane the label ``p0`` is the actual point ``[1,0,0]``.  ``F_e`` is
    realised through hidden auxiliary points: for ``e >= 1`` as
    ``C0 = E0 - E1 - ... - E(e-1)``, ``F = H - E0``; for ``e = 0`` as the two
    rulings ``H - E0`` and ``H - E1``.
    """
    hidden, parts = _root_frame_parts(surface.root)
    points = list(surface.exceptional_labels) + [m for m in marked]
    if len(set(points)) != len(points):
        raise InvalidInputError(f"repeated point labels {points}")
    if any(p.startswith("~") for p in points):
        raise InvalidInputError("labels starting with '~' are reserved")
    ambient_points = hidden + points
    if surface.root.is_plane and P0 not in ambient_points:
        ambient_points = [P0] + ambient_points
    ambient = SurfaceModel.blow_up(SurfaceModel.plane(), ambient_points)
    index = {name: i for i, name in enumerate(ambient.basis)}

    def vec(d: Mapping[str, int]) -> tuple[int, ...]:
        out = [0] * ambient.rank
        for k, c in d.items():
            out[index[k]] = c
        return tuple(out)

    names = list(surface.root.basis)
    vectors = [vec(parts[n]) for n in names]
    for p in points:
        names.append(exceptional_name(p))
        vectors.append(vec({exceptional_name(p): 1}))
    return Frame(ambient, tuple(names), tuple(vectors))


def standard_gram(surface: SurfaceModel, marked: Sequence[str] = ()) -> tuple[tuple[int, ...], ...]:
    """Gram matrix of ``surface`` blown up at ``marked`` (the frame's target form)."""
    full = SurfaceModel.blow_up(surface, marked) if marked else surface
    return full.gram()
