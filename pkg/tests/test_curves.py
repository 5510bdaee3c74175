import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from harmcp2.algebra import UniPoly, Vec3
from harmcp2.curves import (
    CurveError,
    affine_form,
    eval_chart,
    linear_transform,
    make_curve,
    plucker_invariants,
    ramification_total,
    reparametrize,
)

ints = st.integers(-3, 3)
triples = st.lists(st.lists(ints, min_size=1, max_size=4), min_size=3, max_size=3)


def full_curve(coeffs):
    raw = Vec3.uni(*coeffs)
    assume(not raw.is_zero())
    c = make_curve(raw)
    assume(c.full)
    return c


def test_veronese_invariants(veronese):
    assert (veronese.k, veronese.r, veronese.full) == (2, 0, True)
    assert plucker_invariants(veronese) == (0, 4, 2, 0)


def test_cubic_invariants(cubic):
    # (1, z, z^3) is ramified once at z = 0
    assert (cubic.k, cubic.r) == (3, 1)
    assert plucker_invariants(cubic) == (0, 6, 3, 1)


def test_cubic_ramified_at_infinity():
    c = make_curve(Vec3.uni([1], [0, 0, 1], [0, 0, 0, 1]))
    assert (c.k, c.r) == (3, 1)


def test_line_is_not_full(line):
    assert not line.full and line.r is None
    with pytest.raises(CurveError, match="W identically degenerate"):
        ramification_total(line)
    with pytest.raises(CurveError):
        plucker_invariants(line)


def test_common_factor_is_removed():
    c = make_curve(Vec3.uni([0, 1], [0, 0, 1], [0, 0, 0, 1]))
    assert c.F == Vec3.uni([1], [0, 1], [0, 0, 1])


def test_zero_curve_rejected():
    with pytest.raises(CurveError):
        make_curve(Vec3.uni([0], [0], [0]))


def test_affine_form(cubic):
    (P1, Q1), (P2, Q2) = affine_form(cubic)
    assert (P1, Q1) == (UniPoly([0, 1]), UniPoly([1]))
    assert (P2, Q2) == (UniPoly([0, 0, 0, 1]), UniPoly([1]))


def test_eval_chart_matches_at_overlap(veronese):
    z = 0.3 + 0.7j
    a = eval_chart(veronese, z, "z")
    b = eval_chart(veronese, 1 / z, "w")
    assert abs(abs(np.vdot(a, b)) - 1) < 1e-12


@settings(max_examples=40, deadline=None)
@given(triples, st.integers(-2, 2), st.integers(1, 3))
def test_invariants_under_moebius_and_linear_maps(coeffs, b, a):
    c = full_curve(coeffs)
    assume(c.k >= 2)
    moved = reparametrize(c, a, b, 1, 2 * a + 1)
    assert (moved.k, moved.r) == (c.k, c.r)
    mixed = linear_transform(c, [[1, 1, 0], [0, 1, 2], [1, 0, 1]])
    assert (mixed.k, mixed.r, mixed.full) == (c.k, c.r, True)


@settings(max_examples=40, deadline=None)
@given(triples)
def test_plucker_relations(coeffs):
    c = full_curve(coeffs)
    d, E, kp, rp = plucker_invariants(c)
    assert c.r >= 0
    assert E == c.k + kp
    assert d == kp - c.k
    # ramification of the dual pair is symmetric: r = 2k - k' - 2, r' = 2k' - k - 2
    assert c.r == 2 * c.k - kp - 2
    assert rp == 2 * kp - c.k - 2
