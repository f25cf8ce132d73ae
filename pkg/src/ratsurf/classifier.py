"""Rationality and unirationality verdicts for standard 3-fold conic bundles.

The input is the discriminant curve of ``pi: T -> W`` with ``W`` the plane
or a Hirzebruch surface.  On ``F_e`` the pencil is the ruling, so
``Lambda.Delta = a`` for ``Delta ~ a C0 + b F``.  A plane base is first moved
to ``F_1`` by blowing up a point of ``Delta``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import InvalidInputError

ISKOVSKIKH_BOUND = 3
UNIRATIONAL_BOUND = 7


class Outcome(enum.IntEnum):
    RATIONAL = 0
    UNIRATIONAL_NOT_RATIONAL = 1
    UNIRATIONAL = 2
    UNKNOWN = 3

    @property
    def label(self) -> str:
        return {
            Outcome.RATIONAL: "Rational",
            Outcome.UNIRATIONAL_NOT_RATIONAL: "UnirationalNotRational",
            Outcome.UNIRATIONAL: "Unirational",
            Outcome.UNKNOWN: "Unknown",
        }[self]

    @classmethod
    def from_label(cls, label: str) -> Outcome:
        for o in cls:
            if o.label == label:
                return o
        raise InvalidInputError(f"unknown outcome {label!r}")


@dataclass(frozen=True)
class ConicBundleInput:
    base: str  # "plane" | "hirzebruch"
    degree: int = 0
    singular_mults: tuple[int, ...] = ()
    e: int = 0
    a: int = 0
    b: int = 0
    standard: bool = True
    delta_connected: bool | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "singular_mults", tuple(int(m) for m in self.singular_mults))
        if self.base == "plane":
            if self.degree < 0:
                raise InvalidInputError("discriminant degree must be non-negative")
            for m in self.singular_mults:
                if m < 2 or m > self.degree:
                    raise InvalidInputError(f"singular point multiplicity {m} impossible in degree {self.degree}")
                if self.standard and m > 2:
                    raise InvalidInputError(
                        "the discriminant of a standard conic bundle has at most ordinary double points"
                    )
        elif self.base == "hirzebruch":
            if self.e < 0 or self.a < 0 or self.b < 0:
                raise InvalidInputError("e, a, b must be non-negative")
        else:
            raise InvalidInputError(f"unknown base {self.base!r}")

    @classmethod
    def plane(cls, degree: int, singular_mults: Sequence[int] = (), standard: bool = True, **kw) -> ConicBundleInput:
        return cls("plane", degree=degree, singular_mults=tuple(singular_mults), standard=standard, **kw)

    @classmethod
    def hirzebruch(cls, e: int, a: int, b: int = 0, standard: bool = True, **kw) -> ConicBundleInput:
        return cls("hirzebruch", e=e, a=a, b=b, standard=standard, **kw)

    def to_dict(self) -> dict:
        out: dict = {"base": self.base, "standard": self.standard}
        if self.base == "plane":
            out.update(degree=self.degree, singular_mults=list(self.singular_mults))
        else:
            out.update(e=self.e, a=self.a, b=self.b)
        if self.delta_connected is not None:
            out["delta_connected"] = self.delta_connected
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> ConicBundleInput:
        base = data.get("base")
        common = {
            "standard": bool(data.get("standard", True)),
            "delta_connected": data.get("delta_connected"),
        }
        if base == "plane":
            return cls.plane(int(data["degree"]), data.get("singular_mults", ()), **common)
        if base == "hirzebruch":
            return cls.hirzebruch(int(data["e"]), int(data["a"]), int(data.get("b", 0)), **common)
        raise InvalidInputError(f"unknown base {base!r}")


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    justification: tuple[str, ...] = ()
    caveats: tuple[str, ...] = ()
    pencil_degree: int | None = None

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome.label,
            "justification": list(self.justification),
            "caveats": list(self.caveats),
            "pencil_degree": self.pencil_degree,
        }


def sarkisov_blowup(D: int, m: int) -> tuple[int, int]:
    """Discriminant ``a C0 + b F`` on ``F_1`` after blowing up a point of multiplicity ``m`` on a degree ``D`` curve.

    The strict transform of ``Delta`` has class ``D(C0+F) - m C0``.
    """
    if D < 0:
        raise InvalidInputError("degree must be non-negative")
    if not 0 <= m <= min(2, D):
        raise InvalidInputError(f"need m in 0..min(2, D) for a standard bundle, got m={m}, D={D}")
    if D > 0 and m == 0:
        raise InvalidInputError("the blown-up point must lie on the discriminant")
    return D - m, D


def _ruled_verdict(a: int, standard: bool, rules: list[str]) -> Verdict:
    caveats: list[str] = []
    if not standard:
        rules.append("bundle not standard: no criterion applies")
        return Verdict(Outcome.UNKNOWN, tuple(rules), tuple(caveats), a)
    if a <= ISKOVSKIKH_BOUND:
        rules.append(f"Iskovskikh sufficiency: Lambda.Delta = {a} <= {ISKOVSKIKH_BOUND}")
        caveats.append("the sufficiency criterion has one excluded special case that is not identified here")
        return Verdict(Outcome.RATIONAL, tuple(rules), tuple(caveats), a)
    if a <= UNIRATIONAL_BOUND:
        rules.append(f"unirationality: fiber pencil with Lambda.Delta = {a} <= {UNIRATIONAL_BOUND}")
        rules.append(f"Shokurov: 3 < a = {a} on F_e gives non-rationality")
        return Verdict(Outcome.UNIRATIONAL_NOT_RATIONAL, tuple(rules), tuple(caveats), a)
    rules.append(f"Lambda.Delta = {a} > {UNIRATIONAL_BOUND}: outside every criterion")
    return Verdict(Outcome.UNKNOWN, tuple(rules), tuple(caveats), a)


def classify(cb: ConicBundleInput) -> Verdict:
    """Decide the strongest conclusion the criteria support; ``Unknown`` outside their hypotheses."""
    if cb.base == "hirzebruch":
        rules = [f"base F_{cb.e}, Delta ~ {cb.a} C0 + {cb.b} F, pencil = ruling"]
        return _ruled_verdict(cb.a, cb.standard, rules)

    if not cb.standard:
        return Verdict(Outcome.UNKNOWN, ("bundle not standard: no criterion applies",))
    D = cb.degree
    m = 0 if D == 0 else (2 if any(x == 2 for x in cb.singular_mults) else 1)
    a, b = sarkisov_blowup(D, m)
    where = "a node" if m == 2 else ("a smooth point" if m == 1 else "a point")
    rules = [f"blow up {where} of Delta (degree {D}): F_1 with Delta_1 ~ {a} C0 + {b} F"]
    v = _ruled_verdict(a, True, rules)
    if v.outcome is Outcome.UNIRATIONAL_NOT_RATIONAL:
        # non-rationality is only established over F_e bases
        rules = list(v.justification[:-1])
        return Verdict(Outcome.UNIRATIONAL, tuple(rules), v.caveats, a)
    return Verdict(v.outcome, v.justification, v.caveats, a)
