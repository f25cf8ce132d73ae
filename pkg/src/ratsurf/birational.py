"""Birational maps acting on linear systems with assigned base multiplicities.

A :class:`LinearSystemSpec` is a divisor class on a surface plus a
multiplicity at each marked point.  On the plane the class is ``dH`` and the
point ``p0 = [1,0,0]`` is always marked (default multiplicity 0).  On ``F_e``
the class is ``x C0 + y F``; ``-aK + dF`` is ``2a C0 + (a(e+2)+d) F``.

Every action below is computed twice: once by its closed-form formula and
once by re-framing the common resolution (see :func:`lattice_action`).  The
two must agree exactly, otherwise :class:`OracleDisagreement` is raised.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    InvalidInputError,
    ModelMismatchError,
    OracleDisagreement,
    UnsupportedBasisError,
)
from .picard import (
    P0,
    DivisorClass,
    Frame,
    SurfaceModel,
    ambient_frame,
    canonical_class,
    checked,
    exceptional_name,
    standard_gram,
)

PLANE = SurfaceModel.plane()


def partner_label(label: str) -> str:
    """Label of the point created when the fiber through ``label`` is contracted.

    The rule is an involution, so two elementary transformations at the same
    point restore the original label.
    """
    return label[:-1] if label.endswith("'") else label + "'"


@dataclass(frozen=True)
class LinearSystemSpec:
    cls: DivisorClass
    mults: Mapping[str, int] = field(default_factory=dict)
    on_c0: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        surface = self.cls.surface
        mults = {str(k): checked(v) for k, v in self.mults.items()}
        if surface.is_plane:
            mults = {P0: mults.pop(P0, 0), **mults}
        clash = set(mults) & set(surface.exceptional_labels)
        if clash:
            raise InvalidInputError(f"labels {sorted(clash)} are both marked and blown up")
        if surface.is_ruled and P0 in mults:
            raise InvalidInputError(f"label {P0!r} is reserved for the plane")
        on_c0 = frozenset(self.on_c0)
        if on_c0 and not surface.is_hirzebruch:
            raise InvalidInputError("only points of F_e can be flagged as lying on C0")
        if not on_c0 <= set(mults):
            raise InvalidInputError(f"on-C0 flags for unmarked labels {sorted(on_c0 - set(mults))}")
        object.__setattr__(self, "mults", mults)
        object.__setattr__(self, "on_c0", on_c0)

    # -- constructors -------------------------------------------------------

    @classmethod
    def plane(cls, degree: int, mults: Mapping[str, int] | None = None) -> LinearSystemSpec:
        return cls(DivisorClass(PLANE, (degree,)), dict(mults or {}))

    @classmethod
    def hirzebruch(
        cls,
        e: int,
        x: int,
        y: int,
        mults: Mapping[str, int] | None = None,
        on_c0: Iterable[str] = (),
    ) -> LinearSystemSpec:
        """The system ``|x C0 + y F|`` on ``F_e`` with the given base multiplicities."""
        s = SurfaceModel.hirzebruch(e)
        return cls(DivisorClass(s, (x, y)), dict(mults or {}), frozenset(on_c0))

    @classmethod
    def anticanonical(
        cls,
        surface: SurfaceModel,
        a: int,
        d: int,
        mults: Mapping[str, int] | None = None,
        on_c0: Iterable[str] = (),
    ) -> LinearSystemSpec:
        """``|-aK_S + dF|`` on a ruled surface ``S`` (``F_e`` or a blow-up of it)."""
        if not surface.is_ruled:
            raise UnsupportedBasisError(f"-aK+dF needs a ruled surface, got {surface.describe()}")
        c = -a * canonical_class(surface) + d * DivisorClass.basis_element(surface, "F")
        return cls(c, dict(mults or {}), frozenset(on_c0))

    # -- views --------------------------------------------------------------

    @property
    def surface(self) -> SurfaceModel:
        return self.cls.surface

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.mults)

    @property
    def degree(self) -> int:
        if not self.surface.is_plane:
            raise UnsupportedBasisError("degree is defined on the plane only")
        return self.cls.coords[0]

    def mult(self, label: str) -> int:
        return self.mults.get(label, 0)

    def full_class(self) -> DivisorClass:
        """The class on the surface blown up at every marked point (``E`` coordinate ``-m``)."""
        if not self.mults:
            return self.cls
        s = SurfaceModel.blow_up(self.surface, self.labels)
        return DivisorClass(s, self.cls.coords + tuple(-m for m in self.mults.values()))

    def self_intersection(self) -> int:
        c = self.full_class()
        return c.dot(c)

    def k_pairing(self) -> int:
        c = self.full_class()
        return c.dot(canonical_class(c.surface))

    def fiber_degree(self) -> int:
        """Intersection with the pencil: ``class.F`` on ruled surfaces, ``d - mult(p0)`` on the plane."""
        if self.surface.is_plane:
            return self.degree - self.mult(P0)
        if self.surface.is_ruled:
            return self.cls.coords[0]
        raise UnsupportedBasisError(f"no pencil on {self.surface.describe()}")

    def anticanonical_form(self) -> tuple[int, int] | None:
        """``(a, d)`` if the class is ``-aK_S + dF``, else ``None``."""
        s = self.surface
        if not s.is_ruled:
            return None
        x, y = self.cls.coords[:2]
        if x % 2:
            return None
        a = x // 2
        if any(c != -a for c in self.cls.coords[2:]):
            return None
        return a, y - a * (s.root.e + 2)

    def negative_labels(self) -> tuple[str, ...]:
        return tuple(k for k, m in self.mults.items() if m < 0)

    def with_mults(self, mults: Mapping[str, int]) -> LinearSystemSpec:
        return LinearSystemSpec(self.cls, mults, self.on_c0 & set(mults))

    def __str__(self) -> str:
        ms = ", ".join(f"{k}:{v}" for k, v in self.mults.items())
        if self.surface.is_plane:
            return f"({self.degree}; {ms})"
        return f"[{self.cls}] on {self.surface.describe()} ({ms})"

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        out = {
            "surface": self.surface.to_dict(),
            "class": self.cls.to_dict(),
            "mults": dict(self.mults),
        }
        if self.on_c0:
            out["on_c0"] = sorted(self.on_c0)
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> LinearSystemSpec:
        surface = SurfaceModel.from_dict(data["surface"])
        parts = data["class"]
        if isinstance(parts, Mapping):
            c = DivisorClass.from_dict(surface, parts)
        else:
            c = DivisorClass(surface, tuple(parts))
        return cls(c, dict(data.get("mults", {})), frozenset(data.get("on_c0", ())))


# ---------------------------------------------------------------------------
# the lattice route


def _combine(frame: Frame, combo: Mapping[str, int]) -> tuple[int, ...]:
    out = [0] * frame.ambient.rank
    for name, c in combo.items():
        for i, x in enumerate(frame.vector(name)):
            out[i] += c * x
    return tuple(out)


def lattice_action(
    sys: LinearSystemSpec,
    target: SurfaceModel,
    target_labels: Sequence[str],
    rule: Mapping[str, Mapping[str, int]],
    target_on_c0: Iterable[str] = (),
) -> LinearSystemSpec:
    """Push ``sys`` through a re-framing of its resolution.

    ``rule`` maps every basis name of the target (surface basis then
    ``E(label)`` for ``target_labels``) to an integer combination of the
    source frame's basis names.  The new frame must be an isometric copy of
    the target lattice and must span the same vectors; coordinates are then
    found by exact solve.
    """
    src = ambient_frame(sys.surface, sys.labels)
    v = src.ambient_vector(sys.cls.coords + tuple(-m for m in sys.mults.values()))
    names = target.basis + tuple(exceptional_name(l) for l in target_labels)
    missing = [n for n in names if n not in rule]
    if missing:
        raise OracleDisagreement(f"frame rule does not define {missing}")
    dst = Frame(src.ambient, names, tuple(_combine(src, rule[n]) for n in names))
    if dst.gram() != standard_gram(target, target_labels):
        raise OracleDisagreement(f"re-framing is not an isometry onto {target.describe()}")
    try:
        coords = dst.solve(v)
    except InvalidInputError as exc:
        raise OracleDisagreement(str(exc)) from exc
    r = target.rank
    mults = {l: -c for l, c in zip(target_labels, coords[r:])}
    return LinearSystemSpec(DivisorClass(target, coords[:r]), mults, frozenset(target_on_c0))


def _identity_rule(names: Iterable[str]) -> dict[str, dict[str, int]]:
    return {n: {n: 1} for n in names}


def _agree(kind: str, formula: LinearSystemSpec, lattice: LinearSystemSpec) -> LinearSystemSpec:
    if formula != lattice:
        raise OracleDisagreement(f"{kind}: formula gives {formula}, lattice gives {lattice}")
    return formula


def _require_plane(sys: LinearSystemSpec, op: str) -> None:
    if not sys.surface.is_plane:
        raise ModelMismatchError(f"{op} acts on plane systems, got {sys.surface.describe()}")


def _require_marked(sys: LinearSystemSpec, labels: Iterable[str]) -> None:
    missing = [l for l in labels if l not in sys.mults]
    if missing:
        raise InvalidInputError(f"labels {missing} are not marked on {sys.surface.describe()}")


# ---------------------------------------------------------------------------
# plane maps


def cremona(sys: LinearSystemSpec, centers: Sequence[str]) -> LinearSystemSpec:
    """Quadratic transformation based at three marked points.

    ``d' = 2d - m1 - m2 - m3`` and ``mi' = d - mj - mk``; other points keep
    their multiplicity.  The exceptional points of the inverse inherit the
    labels of the centers, which makes the map an involution.
    """
    _require_plane(sys, "cremona")
    centers = tuple(centers)
    if len(centers) != 3 or len(set(centers)) != 3:
        raise InvalidInputError(f"Cremona needs three distinct centers, got {centers}")
    _require_marked(sys, centers)
    d = sys.degree
    m = [sys.mult(c) for c in centers]
    mults = dict(sys.mults)
    for i, c in enumerate(centers):
        mults[c] = d - sum(m) + m[i]
    formula = LinearSystemSpec.plane(2 * d - sum(m), mults)

    rule = _identity_rule(exceptional_name(l) for l in sys.labels)
    e1, e2, e3 = (exceptional_name(c) for c in centers)
    rule["H"] = {"H": 2, e1: -1, e2: -1, e3: -1}
    rule[e1] = {"H": 1, e2: -1, e3: -1}
    rule[e2] = {"H": 1, e1: -1, e3: -1}
    rule[e3] = {"H": 1, e1: -1, e2: -1}
    return _agree("cremona", formula, lattice_action(sys, PLANE, sys.labels, rule))


def dejonquieres(
    sys: LinearSystemSpec,
    g: int,
    simple_points: Sequence[str],
    points=None,
) -> LinearSystemSpec:
    """De Jonquieres map of degree ``g``: ``p0`` of multiplicity ``g-1`` and ``2g-2`` simple points.

    ``points`` is an optional :class:`~ratsurf.linsys.PointConfig`; when it
    carries coordinates for the simple points, condition (dagger) is checked.
    """
    _require_plane(sys, "dejonquieres")
    if g < 2:
        raise InvalidInputError(f"de Jonquieres degree must be >= 2, got {g}")
    simple = tuple(simple_points)
    if len(simple) != 2 * g - 2 or len(set(simple)) != len(simple):
        raise InvalidInputError(f"degree {g} needs {2 * g - 2} distinct simple points, got {simple}")
    if P0 in simple:
        raise InvalidInputError("p0 cannot be a simple base point")
    _require_marked(sys, simple)
    if points is not None:
        from .linsys import check_dagger

        if not check_dagger(points.restrict(simple)):
            raise InvalidInputError("simple base points violate condition (dagger)")

    d, m0 = sys.degree, sys.mult(P0)
    s = sum(sys.mult(q) for q in simple)
    mults = dict(sys.mults)
    mults[P0] = (g - 1) * d - (g - 2) * m0 - s
    for q in simple:
        mults[q] = d - m0 - sys.mult(q)
    formula = LinearSystemSpec.plane(g * d - (g - 1) * m0 - s, mults)

    rule = _identity_rule(exceptional_name(l) for l in sys.labels)
    e0 = exceptional_name(P0)
    es = [exceptional_name(q) for q in simple]
    rule["H"] = {"H": g, e0: -(g - 1), **{e: -1 for e in es}}
    rule[e0] = {"H": g - 1, e0: -(g - 2), **{e: -1 for e in es}}
    for e in es:
        rule[e] = {"H": 1, e0: -1, e: -1}
    return _agree("dejonquieres", formula, lattice_action(sys, PLANE, sys.labels, rule))


# ---------------------------------------------------------------------------
# ruled surfaces


def elementary_transform(
    sys: LinearSystemSpec,
    center: str,
    *,
    inverse: bool = False,
    on_c0: bool = False,
) -> LinearSystemSpec:
    """Blow up ``center`` on ``F_e`` and contract the strict transform of its fiber.

    A center off ``C0`` on ``F_e`` with ``e >= 1`` lands on ``F_(e-1)``; on
    ``F_0`` it lands on ``F_1``.  Either way the target is ``F_|e-1|``, the
    center's label is removed and the contracted fiber becomes a new point
    :func:`partner_label` of multiplicity ``class.F - m``.

    Centers on ``C0`` (which raise ``e`` by one) only arise when undoing a
    previous transformation and are accepted with ``inverse=True``; an
    inverse step may also introduce its center as a fresh point of
    multiplicity 0, placed on ``C0`` when ``on_c0`` is set.
    """
    s = sys.surface
    if not s.is_hirzebruch:
        raise ModelMismatchError(f"elementary transformation acts on F_e, got {s.describe()}")
    if center not in sys.mults:
        if not inverse:
            raise InvalidInputError(f"center {center!r} is not marked")
        flags = sys.on_c0 | ({center} if on_c0 and s.e > 0 else set())
        sys = LinearSystemSpec(sys.cls, {**sys.mults, center: 0}, frozenset(flags))
    center_on_c0 = center in sys.on_c0
    if center_on_c0 and not inverse:
        raise UnsupportedBasisError(f"center {center!r} lies on C0")
    new = partner_label(center)
    if new in sys.mults:
        raise InvalidInputError(f"derived label {new!r} already in use")

    e = s.e
    x, y = sys.cls.coords
    m = sys.mult(center)
    lowers = e >= 1 and not center_on_c0
    e_new = e - 1 if lowers else e + 1
    y_new = y - m if lowers else y + x - m

    mults = {k: v for k, v in sys.mults.items() if k != center}
    mults[new] = x - m
    flags = set(sys.on_c0) - {center}
    if lowers and e_new > 0:
        flags.add(new)
    target = SurfaceModel.hirzebruch(e_new)
    formula = LinearSystemSpec(DivisorClass(target, (x, y_new)), mults, frozenset(flags))

    labels = tuple(mults)
    ec = exceptional_name(center)
    rule = _identity_rule(exceptional_name(l) for l in labels if l != new)
    rule["F"] = {"F": 1}
    rule["C0"] = {"C0": 1, "F": 1, ec: -1} if lowers else {"C0": 1, ec: -1}
    rule[exceptional_name(new)] = {"F": 1, ec: -1}
    lattice = lattice_action(sys, target, labels, rule, flags)
    return _agree("elementary_transform", formula, lattice)


def blow_down_f1(sys: LinearSystemSpec) -> LinearSystemSpec:
    """Contract the ``(-1)``-section of ``F_1`` to ``p0``: ``x C0 + y F`` becomes degree ``y`` with ``mult(p0) = y - x``.

    For ``-aK + dF`` this is degree ``3a + d`` and multiplicity ``a + d``.
    Points flagged on ``C0`` would become infinitely near ``p0``; they are
    dropped when their multiplicity is 0 and rejected otherwise.
    """
    s = sys.surface
    if s != SurfaceModel.hirzebruch(1):
        raise ModelMismatchError(f"blow_down_f1 acts on F_1, got {s.describe()}")
    bad = [l for l in sys.on_c0 if sys.mult(l) != 0]
    if bad:
        raise UnsupportedBasisError(f"points {sorted(bad)} on C0 would be infinitely near p0")
    kept = LinearSystemSpec(sys.cls, {k: v for k, v in sys.mults.items() if k not in sys.on_c0})
    x, y = kept.cls.coords
    formula = LinearSystemSpec.plane(y, {P0: y - x, **kept.mults})

    rule = _identity_rule(exceptional_name(l) for l in kept.labels)
    rule["H"] = {"C0": 1, "F": 1}
    rule[exceptional_name(P0)] = {"C0": 1}
    lattice = lattice_action(kept, PLANE, formula.labels, rule)
    return _agree("blow_down_f1", formula, lattice)


def reference_blow_down_f1_value(a: int, d: int) -> tuple[int, int]:
    """Reference degree and ``p0`` multiplicity ``(d+3, d+3-2a)`` for the ``F_1`` blow-down.

    Agrees with :func:`blow_down_f1` only for ``a = 1``; kept for side-by-side reports.
    """
    return d + 3, d + 3 - 2 * a


def blow_up_p0(sys: LinearSystemSpec) -> LinearSystemSpec:
    """Inverse of :func:`blow_down_f1`: ``(d; p0 -> m0)`` becomes ``(d - m0) C0 + d F`` on ``F_1``."""
    _require_plane(sys, "blow_up_p0")
    d, m0 = sys.degree, sys.mult(P0)
    mults = {k: v for k, v in sys.mults.items() if k != P0}
    target = SurfaceModel.hirzebruch(1)
    formula = LinearSystemSpec(DivisorClass(target, (d - m0, d)), mults)

    e0 = exceptional_name(P0)
    rule = _identity_rule(exceptional_name(l) for l in mults)
    rule["C0"] = {e0: 1}
    rule["F"] = {"H": 1, e0: -1}
    return _agree("blow_up_p0", formula, lattice_action(sys, target, tuple(mults), rule))


def blow_down_to_hirzebruch(sys: LinearSystemSpec) -> LinearSystemSpec:
    """Push a system on ``Bl_Y'(F_e)`` down to ``F_e``.

    Each exceptional coordinate ``-m`` becomes a base point of multiplicity
    ``m`` at the corresponding point of ``Y'``; so ``-aK_S + dF`` becomes
    ``-aK + dF`` on ``F_e`` with multiplicity ``a`` along ``Y'``.
    """
    s = sys.surface
    if s.kind != "blowup" or not s.is_ruled:
        raise ModelMismatchError(f"expected a blow-up of F_e, got {s.describe()}")
    root = s.root
    blown = s.exceptional_labels
    coords = sys.cls.coords
    mults = {l: -c for l, c in zip(blown, coords[2:])}
    mults.update(sys.mults)
    formula = LinearSystemSpec(DivisorClass(root, coords[:2]), mults)

    rule = _identity_rule(root.basis + tuple(exceptional_name(l) for l in mults))
    lattice = lattice_action(sys, root, tuple(mults), rule)
    return _agree("blow_down_to_hirzebruch", formula, lattice)


def blow_up_points(sys: LinearSystemSpec, labels: Sequence[str]) -> LinearSystemSpec:
    """Inverse of :func:`blow_down_to_hirzebruch`: marked points become exceptional curves."""
    s = sys.surface
    if not s.is_hirzebruch:
        raise ModelMismatchError(f"expected F_e, got {s.describe()}")
    labels = tuple(labels)
    _require_marked(sys, labels)
    if sys.on_c0 & set(labels):
        raise UnsupportedBasisError("cannot blow up points flagged on C0 into a conic bundle")
    target = SurfaceModel.blow_up(s, labels)
    rest = {k: v for k, v in sys.mults.items() if k not in labels}
    formula = LinearSystemSpec(
        DivisorClass(target, sys.cls.coords + tuple(-sys.mult(l) for l in labels)),
        rest,
    )
    rule = _identity_rule(target.basis + tuple(exceptional_name(l) for l in rest))
    lattice = lattice_action(sys, target, tuple(rest), rule)
    return _agree("blow_up_points", formula, lattice)


# ---------------------------------------------------------------------------
# chains

STEP_KINDS = ("cremona", "dejonquieres", "elementary", "blowdown_f1", "blowdown_hirzebruch")
_FIBER_PRESERVING = ("dejonquieres", "elementary", "blowdown_f1", "blowdown_hirzebruch")


@dataclass(frozen=True)
class BirationalStep:
    kind: str
    centers: tuple[str, ...] = ()
    degree: int = 0
    inverse: bool = False
    on_c0: bool = False

    def __post_init__(self) -> None:
        if self.kind not in STEP_KINDS:
            raise InvalidInputError(f"unknown step kind {self.kind!r}")
        object.__setattr__(self, "centers", tuple(self.centers))
        if self.kind == "cremona" and len(set(self.centers)) != 3:
            raise InvalidInputError("Cremona step needs three distinct centers")
        if self.kind == "dejonquieres":
            if self.degree < 2:
                raise InvalidInputError("de Jonquieres step needs degree >= 2")
            if len(set(self.centers)) != 2 * self.degree - 2 or P0 in self.centers:
                raise InvalidInputError(
                    f"de Jonquieres of degree {self.degree} needs {2 * self.degree - 2} distinct simple points"
                )
        if self.kind == "elementary" and len(self.centers) != 1:
            raise InvalidInputError("elementary step needs exactly one center")

    @classmethod
    def cremona(cls, *centers: str) -> BirationalStep:
        return cls("cremona", centers)

    @classmethod
    def dejonquieres(cls, degree: int, simple_points: Sequence[str]) -> BirationalStep:
        return cls("dejonquieres", tuple(simple_points), degree=degree)

    @classmethod
    def elementary(cls, center: str, *, inverse: bool = False, on_c0: bool = False) -> BirationalStep:
        return cls("elementary", (center,), inverse=inverse, on_c0=on_c0)

    @classmethod
    def blowdown_f1(cls, *, inverse: bool = False) -> BirationalStep:
        return cls("blowdown_f1", inverse=inverse)

    @classmethod
    def blowdown_hirzebruch(cls, labels: Sequence[str] = (), *, inverse: bool = False) -> BirationalStep:
        return cls("blowdown_hirzebruch", tuple(labels), inverse=inverse)

    def inverted(self) -> BirationalStep:
        if self.kind in ("cremona", "dejonquieres"):
            return self
        if self.kind == "elementary":
            return BirationalStep.elementary(partner_label(self.centers[0]), inverse=not self.inverse)
        return BirationalStep(self.kind, self.centers, inverse=not self.inverse)

    def describe(self) -> str:
        inv = "^-1" if self.inverse else ""
        if self.kind == "dejonquieres":
            return f"dejonquieres[{self.degree}]({', '.join(self.centers)})"
        if self.centers:
            return f"{self.kind}{inv}({', '.join(self.centers)})"
        return f"{self.kind}{inv}"

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.centers:
            out["centers"] = list(self.centers)
        if self.kind == "dejonquieres":
            out["degree"] = self.degree
        if self.inverse:
            out["inverse"] = True
        if self.on_c0:
            out["on_c0"] = True
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> BirationalStep:
        centers = data.get("centers", ())
        if "center" in data:
            centers = (data["center"],)
        return cls(
            data["kind"],
            tuple(centers),
            degree=int(data.get("degree", 0)),
            inverse=bool(data.get("inverse", False)),
            on_c0=bool(data.get("on_c0", False)),
        )


def apply_step(step: BirationalStep, sys: LinearSystemSpec) -> LinearSystemSpec:
    if step.kind == "cremona":
        return cremona(sys, step.centers)
    if step.kind == "dejonquieres":
        return dejonquieres(sys, step.degree, step.centers)
    if step.kind == "elementary":
        return elementary_transform(sys, step.centers[0], inverse=step.inverse, on_c0=step.on_c0)
    if step.kind == "blowdown_f1":
        return blow_up_p0(sys) if step.inverse else blow_down_f1(sys)
    if step.inverse:
        return blow_up_points(sys, step.centers)
    out = blow_down_to_hirzebruch(sys)
    if step.centers and set(step.centers) != set(sys.surface.exceptional_labels):
        raise InvalidInputError(
            f"step contracts {step.centers}, surface has {sys.surface.exceptional_labels}"
        )
    return out


@dataclass(frozen=True)
class TraceEntry:
    index: int
    step: BirationalStep
    before: LinearSystemSpec
    after: LinearSystemSpec
    certificates: dict[str, bool]
    flags: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return all(self.certificates.values())

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "step": self.step.to_dict(),
            "before": self.before.to_dict(),
            "after": self.after.to_dict(),
            "certificates": dict(self.certificates),
            "flags": list(self.flags),
        }


def step_certificates(step: BirationalStep, before: LinearSystemSpec, after: LinearSystemSpec) -> dict[str, bool]:
    """Invariants that must hold across one step of a chain."""
    certs = {
        "lattice_agreement": True,  # apply_step raises on disagreement
        "self_intersection": before.self_intersection() == after.self_intersection(),
        "k_pairing": before.k_pairing() == after.k_pairing(),
    }
    if step.kind in _FIBER_PRESERVING or (step.kind == "cremona" and P0 in step.centers):
        certs["fiber_degree"] = before.fiber_degree() == after.fiber_degree()
    return certs


@dataclass(frozen=True)
class TransformChain:
    steps: tuple[BirationalStep, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __add__(self, other: TransformChain) -> TransformChain:
        return TransformChain(self.steps + other.steps)

    def inverse(self) -> TransformChain:
        return TransformChain(tuple(s.inverted() for s in reversed(self.steps)))

    def to_list(self) -> list[dict]:
        return [s.to_dict() for s in self.steps]

    @classmethod
    def from_list(cls, data: Sequence[Mapping]) -> TransformChain:
        return cls(tuple(BirationalStep.from_dict(d) for d in data))


def apply_chain(chain: TransformChain, sys: LinearSystemSpec) -> tuple[LinearSystemSpec, list[TraceEntry]]:
    """Apply every step in order, returning the final system and a per-step trace."""
    trace: list[TraceEntry] = []
    current = sys
    for i, step in enumerate(chain.steps):
        try:
            nxt = apply_step(step, current)
        except ModelMismatchError as exc:
            raise ModelMismatchError(f"step {i} ({step.describe()}): {exc}") from exc
        flags = tuple(f"non-effective:{l}" for l in nxt.negative_labels())
        trace.append(TraceEntry(i, step, current, nxt, step_certificates(step, current, nxt), flags))
        current = nxt
    return current, trace


# ---------------------------------------------------------------------------
# the composite map chi^X


def chi_map(e: int, X: Sequence[str], Xprime: Sequence[str]) -> TransformChain:
    """Elementary transformations at ``Xprime``, contraction of ``F_1`` and a de Jonquieres map of degree ``k+1``.

    ``|X| = |e-1| + 2k``; the de Jonquieres map is centred at ``X \\ Xprime``
    and omitted when ``k = 0``.
    """
    X, Xprime = tuple(X), tuple(Xprime)
    n = abs(e - 1)
    if len(set(X)) != len(X):
        raise InvalidInputError("repeated labels in X")
    if len(Xprime) != n or not set(Xprime) <= set(X) or len(set(Xprime)) != n:
        raise InvalidInputError(f"X' must be {n} distinct points of X")
    rest = tuple(x for x in X if x not in Xprime)
    if len(rest) % 2:
        raise InvalidInputError(f"|X| = {len(X)} is not |e-1| + 2k")
    k = len(rest) // 2
    steps = [BirationalStep.elementary(p) for p in Xprime]
    steps.append(BirationalStep.blowdown_f1())
    if k >= 1:
        steps.append(BirationalStep.dejonquieres(k + 1, rest))
    return TransformChain(tuple(steps))


def plane_signature(sys: LinearSystemSpec) -> tuple[int, int, tuple[int, ...]]:
    """``(degree, mult(p0), sorted nonzero multiplicities elsewhere)``."""
    others = sorted((m for k, m in sys.mults.items() if k != P0 and m != 0), reverse=True)
    return sys.degree, sys.mult(P0), tuple(others)


def chi_choice_report(sys: LinearSystemSpec, X: Sequence[str], choices: Iterable[Sequence[str]] | None = None) -> dict:
    """Apply ``chi_map`` for several choices of ``X'`` and compare the plane results."""
    e = sys.surface.e
    n = abs(e - 1)
    if choices is None:
        choices = itertools.combinations(X, n)
    results = {}
    for xp in choices:
        out, _ = apply_chain(chi_map(e, X, xp), sys)
        results[tuple(xp)] = plane_signature(out)
    values = set(results.values())
    return {"independent": len(values) == 1, "signatures": results}
