"""Actual dimension of fat-point linear systems by exact interpolation rank.

A point ``q`` of multiplicity ``m`` imposes ``m(m+1)/2`` linear conditions on
the coefficients of a degree ``d`` form: every Hasse derivative of order
``< m`` vanishes at ``q`` in an affine chart containing it.  The rank of the
stacked condition matrix over a prime field gives the projective dimension
``N - 1 - rank`` of the system at those particular points.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidInputError, SamplingError
from .linsys import P0_COORDS, PlaneSystem, PointConfig, check_dagger, expected_dim, generality_report
from .modp import DEFAULT_MODULUS, rank_mod_p

log = logging.getLogger(__name__)

DEFAULT_SEEDS = (1, 2, 3)


@dataclass(frozen=True)
class InterpolationProblem:
    degree: int
    conditions: tuple[tuple[tuple[int, int, int], int], ...] = ()
    modulus: int = DEFAULT_MODULUS
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise InvalidInputError("degree must be non-negative")
        conds = []
        for point, m in self.conditions:
            pt = tuple(int(x) % self.modulus for x in point)
            if len(pt) != 3:
                raise InvalidInputError(f"bad point {point}")
            if m < 1:
                raise InvalidInputError(f"multiplicity must be >= 1, got {m}")
            conds.append((pt, int(m)))
        object.__setattr__(self, "conditions", tuple(conds))


def monomials(d: int) -> list[tuple[int, int, int]]:
    """Exponent triples of the degree ``d`` monomials, in a fixed order."""
    return [(i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1)]


def condition_rows(point: Sequence[int], m: int, d: int, p: int) -> list[list[int]]:
    """Rows expressing ``mult_q >= m`` for forms of degree ``d`` over ``GF(p)``."""
    pt = [x % p for x in point]
    if not any(pt):
        raise InvalidInputError("the zero vector is not a point")
    # chart: the coordinate with the largest canonical representative
    c = max(range(3), key=lambda i: pt[i])
    inv = pow(pt[c], -1, p)
    pt = [x * inv % p for x in pt]
    iu, iv = [i for i in range(3) if i != c]
    u0, v0 = pt[iu], pt[iv]
    mons = monomials(d)
    rows = []
    for s in range(m):
        for t in range(m - s):
            row = []
            for mon in mons:
                a, b = mon[iu], mon[iv]
                if a < s or b < t:
                    row.append(0)
                    continue
                val = comb(a, s) * comb(b, t) % p
                row.append(val * pow(u0, a - s, p) * pow(v0, b - t, p) % p)
            rows.append(row)
    return rows


def actual_dim(problem: InterpolationProblem) -> int:
    """Projective dimension of the system; ``-1`` when it is empty."""
    d, p = problem.degree, problem.modulus
    n = (d + 1) * (d + 2) // 2
    rows: list[list[int]] = []
    for point, m in problem.conditions:
        rows.extend(condition_rows(point, m, d, p))
    r = rank_mod_p(rows, p) if rows else 0
    return n - 1 - r


def sample_general_points(
    n: int,
    seed: int,
    modulus: int = DEFAULT_MODULUS,
    labels: Sequence[str] | None = None,
    max_tries: int = 50,
) -> PointConfig:
    """``n`` random points over ``GF(modulus)`` in general position with respect to ``p0``.

    A sample is rejected and redrawn unless it satisfies condition (dagger)
    and every :func:`~ratsurf.linsys.generality_report` flag is clear.
    """
    if n < 0:
        raise InvalidInputError("n must be non-negative")
    if labels is None:
        labels = [f"q{i + 1}" for i in range(n)]
    if len(labels) != n:
        raise InvalidInputError("need one label per point")
    rng = np.random.default_rng(seed)
    for attempt in range(max_tries):
        raw = rng.integers(0, modulus, size=(n, 3))
        pts = [tuple(int(x) for x in row) for row in raw]
        if any(not any(q) for q in pts):
            continue
        cfg = PointConfig(tuple(labels), dict(zip(labels, pts)), {l: "generic" for l in labels}, modulus)
        try:
            if not check_dagger(cfg):
                continue
        except InvalidInputError:
            continue
        if generality_report(cfg).clear:
            if attempt:
                log.debug("seed %s: general sample after %d retries", seed, attempt)
            return cfg
    raise SamplingError(f"no general configuration of {n} points after {max_tries} tries (seed {seed})")


def problem_for(sys: PlaneSystem, points: PointConfig, seed: int | None = None) -> InterpolationProblem:
    """Attach coordinates to a plane system: ``p0 = [1,0,0]`` and ``points`` for its labels."""
    conds = []
    if sys.p0 > 0:
        conds.append((P0_COORDS, sys.p0))
    for label, m in sys.points.items():
        if m > 0:
            conds.append((points.point(label), m))
    return InterpolationProblem(sys.degree, tuple(conds), points.modulus or DEFAULT_MODULUS, seed)


@dataclass(frozen=True)
class ExpectedReport:
    system: PlaneSystem
    expected: int
    actual: Mapping[int, int] = field(default_factory=dict)
    modulus: int = DEFAULT_MODULUS

    @property
    def minimum(self) -> int:
        return min(self.actual.values())

    @property
    def verdict(self) -> str:
        """``agree`` or ``special``; an expected value below ``-1`` means expected empty."""
        return "agree" if self.minimum == max(self.expected, -1) else "special"

    @property
    def agree(self) -> bool:
        return self.verdict == "agree"

    def to_dict(self) -> dict:
        return {
            "system": self.system.to_dict(),
            "expected": self.expected,
            "actual": {str(k): v for k, v in self.actual.items()},
            "minimum": self.minimum,
            "verdict": self.verdict,
            "modulus": self.modulus,
        }


def verify_expected(
    sys: PlaneSystem,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    modulus: int = DEFAULT_MODULUS,
) -> ExpectedReport:
    """Compare :func:`actual_dim` at general points (one sample per seed) with :func:`expected_dim`."""
    if not seeds:
        raise InvalidInputError("need at least one seed")
    labels = list(sys.points)
    actual = {}
    for seed in seeds:
        pts = sample_general_points(len(labels), seed, modulus, labels)
        actual[seed] = actual_dim(problem_for(sys, pts, seed))
    return ExpectedReport(sys, expected_dim(sys), actual, modulus)
