from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from ratsurf.errors import InvalidInputError, SamplingError
from ratsurf.linsys import PlaneSystem, expected_dim
from ratsurf.modp import DEFAULT_MODULUS, is_singular_mod_p, rank_mod_p
from ratsurf.oracle import (
    InterpolationProblem,
    actual_dim,
    condition_rows,
    monomials,
    problem_for,
    sample_general_points,
    verify_expected,
)

SEVEN = [f"y{i}" for i in range(1, 8)]


# --- rank over GF(p) ------------------------------------------------------------------


def sympy_rank(rows, p):
    if not rows or not rows[0]:
        return 0
    K = GF(p)
    return DomainMatrix([[K(x) for x in r] for r in rows], (len(rows), len(rows[0])), K).rank()


@settings(max_examples=300, deadline=None)
@given(
    st.sampled_from([2, 3, 7, 101, DEFAULT_MODULUS]),
    st.integers(1, 7),
    st.integers(1, 7),
    st.data(),
)
def test_rank_matches_sympy_finite_field(p, m, n, data):
    rows = [[data.draw(st.integers(-3 * p, 3 * p)) for _ in range(n)] for _ in range(m)]
    if data.draw(st.booleans()) and m > 1:
        # force a dependency
        rows[-1] = [(a + 2 * b) for a, b in zip(rows[0], rows[1 % m])]
    assert rank_mod_p(rows, p) == sympy_rank(rows, p)


def test_rank_edge_cases():
    assert rank_mod_p([], 7) == 0
    assert rank_mod_p([[0, 0], [0, 0]], 7) == 0
    assert rank_mod_p([[7, 14]], 7) == 0
    assert is_singular_mod_p([[1, 2], [2, 4]], 7)
    assert not is_singular_mod_p([[1, 0], [0, 1]], 7)
    with pytest.raises(InvalidInputError):
        rank_mod_p([[1]], 2**31 + 11)


# --- condition rows -------------------------------------------------------------------


def poly_mul(f, g, p):
    out: dict = {}
    for ea, ca in f.items():
        for eb, cb in g.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = (out.get(e, 0) + ca * cb) % p
    return out


def random_form(d, rng, p):
    return {mon: rng.randrange(p) for mon in monomials(d)}


def line_through(q, rng, p):
    # a random point r; the line is q x r
    r = [rng.randrange(p) for _ in range(3)]
    l = (q[1] * r[2] - q[2] * r[1], q[2] * r[0] - q[0] * r[2], q[0] * r[1] - q[1] * r[0])
    return {(1, 0, 0): l[0] % p, (0, 1, 0): l[1] % p, (0, 0, 1): l[2] % p}


@pytest.mark.parametrize("seed", range(20))
def test_rows_vanish_on_forms_singular_at_the_point(seed):
    p = 101
    rng = random.Random(seed)
    d, m = rng.randint(2, 7), rng.randint(1, 4)
    m = min(m, d)
    q = [rng.randrange(p) for _ in range(3)]
    if not any(q):
        q[0] = 1
    f = random_form(d - m, rng, p)
    for _ in range(m):
        f = poly_mul(f, line_through(q, rng, p), p)
    vec = [f.get(mon, 0) for mon in monomials(d)]
    rows = condition_rows(q, m, d, p)
    assert len(rows) == m * (m + 1) // 2
    assert all(sum(a * b for a, b in zip(r, vec)) % p == 0 for r in rows)
    # a general form of that shape is not singular to one more order
    extra = condition_rows(q, m + 1, d, p)
    assert any(sum(a * b for a, b in zip(r, vec)) % p for r in extra) or d == m


def test_condition_rows_reject_zero_point():
    with pytest.raises(InvalidInputError):
        condition_rows((0, 0, 0), 1, 2, 7)


# --- dimensions ------------------------------------------------------------------------------


@pytest.mark.parametrize("d", range(0, 7))
def test_no_conditions_gives_full_space(d):
    assert actual_dim(InterpolationProblem(d)) == (d + 1) * (d + 2) // 2 - 1


def test_degree_eleven_pencil_is_a_pencil():
    report = verify_expected(PlaneSystem(11, 3, {y: 4 for y in SEVEN}))
    assert report.expected == 1 and report.verdict == "agree"
    assert set(report.actual.values()) == {1}


def test_quartic_pencil_is_a_pencil():
    report = verify_expected(PlaneSystem(4, 2, {"b": 2, "c": 2, "d": 1, "e": 1, "f": 1, "g": 1}))
    assert report.expected == 1 and report.agree


def test_double_conic_is_special():
    report = verify_expected(PlaneSystem(4, 2, {f"q{i}": 2 for i in range(4)}))
    assert report.expected == -1
    assert report.minimum == 0
    assert report.verdict == "special"


def test_expected_empty_is_clamped():
    # seven general points impose independent conditions on conics
    report = verify_expected(PlaneSystem(2, 1, {f"q{i}": 1 for i in range(6)}))
    assert report.expected == -2 and report.minimum == -1 and report.agree


def test_to_dict_is_json_friendly():
    d = verify_expected(PlaneSystem(3, 0, {"a": 1}), seeds=[4]).to_dict()
    assert d["actual"] == {"4": 8} and d["verdict"] == "agree"


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), st.lists(st.integers(0, 3), min_size=1, max_size=5), st.data())
def test_raising_a_multiplicity_never_raises_dimension(d, ms, data):
    labels = [f"q{i}" for i in range(len(ms))]
    pts = sample_general_points(len(labels), 11, labels=labels)
    base = PlaneSystem(d, 0, dict(zip(labels, ms)))
    i = data.draw(st.integers(0, len(ms) - 1))
    more = PlaneSystem(d, 0, {**base.points, labels[i]: ms[i] + 1})
    lo = actual_dim(problem_for(more, pts))
    hi = actual_dim(problem_for(base, pts))
    assert lo <= hi
    assert hi >= max(expected_dim(base), -1)


def test_sampling_is_deterministic_per_seed():
    a = sample_general_points(8, 5)
    b = sample_general_points(8, 5)
    c = sample_general_points(8, 6)
    assert a == b and a != c
    s = PlaneSystem(6, 2, {l: 2 for l in a.labels[:5]})
    assert actual_dim(problem_for(s, a, 5)) == actual_dim(problem_for(s, b, 5))


def test_sampling_fails_loudly_when_no_general_position_exists():
    # over GF(2) only three lines pass through p0, so six points off p0 put two on one of them
    with pytest.raises(SamplingError):
        sample_general_points(6, 1, modulus=2, max_tries=20)


def test_verify_needs_a_seed():
    with pytest.raises(InvalidInputError):
        verify_expected(PlaneSystem(2), seeds=[])
