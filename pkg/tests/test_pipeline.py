from fractions import Fraction

import numpy as np
import pytest

from harmcp2.algebra import Vec3
from harmcp2.deform import LinearFamily
from harmcp2.geometry import energy_split
from harmcp2.pipeline import (
    PipelineError,
    coefficient_directions,
    covariant_holomorphy_residual,
    curve_field,
    isotropy_pairings,
    jacobi_tolerance,
    killing_bump_field,
    map_from_array,
    nullity_rank,
    pipeline_roundtrip,
    pull_from_family,
    pull_step1,
    push_dG,
)
from harmcp2.sampled import map_from_curve

from conftest import grid

ZERO = Vec3.uni([0], [0], [0])


def test_direction_count(veronese, line):
    assert len(coefficient_directions(veronese.F)) == 16
    assert len(coefficient_directions(line.F)) == 10
    assert coefficient_directions(veronese.F)[0][0] == "F0[z^1]"


def test_constant_family_pushes_to_zero(veronese):
    v = push_dG(LinearFamily(veronese.F, ZERO), grid(16))
    assert np.all(v.values == 0)


def test_push_is_linear(veronese):
    g = grid(24)
    a = Vec3.uni([0], [0, 0, 1], [0])
    b = Vec3.uni([0, 1], [0], [1])
    lhs = push_dG(LinearFamily(veronese.F, a + b), g)
    rhs = push_dG(LinearFamily(veronese.F, a), g) + push_dG(LinearFamily(veronese.F, b), g)
    assert (lhs - rhs).sup_norm() < 1e-6 * lhs.sup_norm()


def test_push_is_tangent(veronese):
    v = push_dG(LinearFamily(veronese.F, Vec3.uni([0], [1], [0])), grid(16))
    assert v.orthogonality_defect() < 1e-12


def test_push_refuses_family_leaving_fullness(veronese):
    # a step of -1/500 cancels the z^2 term at t = 2 h, leaving a line
    fam = LinearFamily(veronese.F, Vec3.uni([0], [0], [0, 0, -500]))
    with pytest.raises(PipelineError, match="leaves fullness"):
        push_dG(fam, grid(16))


def test_pull_of_zero_is_zero(veronese):
    m = map_from_curve(veronese, grid(16), "gauss-prime")
    u = pull_step1(m, m.field(np.zeros_like(m.u)))
    assert np.all(u.values == 0)


def test_pull_depends_on_field_only(veronese):
    g = grid(32)
    m = map_from_curve(veronese, g, "gauss-prime")
    V = killing_bump_field(m).values
    W = killing_bump_field(m, seed=5).values
    a = pull_step1(m, m.field(V))
    b = pull_from_family(m, V)
    c = pull_from_family(m, V, W)
    assert (a - b).sup_norm() < 1e-3 * a.sup_norm()
    assert (b - c).sup_norm() < 1e-6 * a.sup_norm()


def _pull_error(f, N):
    g = grid(N)
    dF = Vec3.uni([0], [0, 0, 1], [1])
    v = push_dG(LinearFamily(f.F, dF), g)
    u = pull_step1(map_from_array(v.base, g), v)
    ref = curve_field(f.F, dF, g)
    return (u - ref).sup_norm() / ref.sup_norm()


def test_pull_recovers_curve_field(veronese):
    e32, e64 = _pull_error(veronese, 32), _pull_error(veronese, 64)
    assert e32 < 2e-2 and e32 / e64 > 8


def test_curve_fields_are_holomorphic(veronese):
    dF = Vec3.uni([0, 1], [1], [0, 0, 1])
    res = []
    for N in (32, 64):
        m = map_from_curve(veronese, grid(N))
        res.append(covariant_holomorphy_residual(m, curve_field(veronese.F, dF, grid(N))))
    assert res[0] < 5e-3 and res[0] / res[1] > 8
    m = map_from_curve(veronese, grid(32))
    assert covariant_holomorphy_residual(m, killing_bump_field(m)) > 0.1
    assert covariant_holomorphy_residual(m, m.field(np.zeros_like(m.u))) == 0.0


def test_roundtrip_zero_direction_is_exact(veronese):
    rep = pipeline_roundtrip(veronese, ZERO, grid(16))
    assert rep.absolute == 0.0 and rep.discrepancy == 0.0


def test_roundtrip_small_discrepancy(veronese):
    rep = pipeline_roundtrip(veronese, Vec3.uni([0], [0, 1], [0, 1]), grid(32))
    assert rep.discrepancy < 1e-3
    assert rep.fit_residual < 5e-3


def test_roundtrip_refuses_ramification_change(cubic):
    with pytest.raises(PipelineError, match=r"leaves Hol\*_\{k,r\}"):
        pipeline_roundtrip(cubic, Vec3.uni([0, 0, 1], [0], [0]), grid(16))


def test_roundtrip_refuses_ramified_curve(cubic):
    # this perturbation keeps r = 1, which is outside the implemented scope
    with pytest.raises(PipelineError, match="r = 0"):
        pipeline_roundtrip(cubic, Vec3.uni([0], [0], [0, 0, 0, 1]), grid(16))


def test_empty_nullity(veronese):
    m = map_from_curve(veronese, grid(16), "gauss-prime")
    assert nullity_rank(m, []).rank == 0


def test_nullity_gate_names_offender(veronese):
    g = grid(32)
    m = map_from_curve(veronese, g, "gauss-prime")
    fields = [("good", push_dG(LinearFamily(veronese.F, Vec3.uni([1], [0], [0])), g)), ("bump", killing_bump_field(m))]
    with pytest.raises(PipelineError, match="field bump is not a Jacobi field"):
        nullity_rank(m, fields)


def test_nullity_detects_dependence(veronese):
    g = grid(32)
    m = map_from_curve(veronese, g, "gauss-prime")
    a = push_dG(LinearFamily(veronese.F, Vec3.uni([1], [0], [0])), g)
    b = push_dG(LinearFamily(veronese.F, Vec3.uni([0], [1], [0])), g)
    rep = nullity_rank(m, [a, b, a.scale(2.0) + b])
    assert rep.rank == 2
    assert max(rep.residuals.values()) < jacobi_tolerance(32)


def test_isotropy_pairings_vanish_at_harmonic_map(veronese):
    m = map_from_curve(veronese, grid(64), "gauss-prime")
    for key, val in isotropy_pairings(m).items():
        assert grid(64).sup(np.abs(val)) < 5e-2, key


def test_energy_and_degree_conserved_to_first_order(veronese):
    g = grid(32)
    dF = Vec3.uni([0, 1], [0], [1])
    h = Fraction(1, 100)

    def split(t):
        return energy_split(map_from_curve(veronese.F + dF.scale(t), g, "gauss-prime"))

    plus, minus = split(h), split(-h)
    dE = (plus.energy - minus.energy) / (2 * float(h))
    dd = (plus.degree - minus.degree) / (2 * float(h))
    assert abs(dE) < 1e-2 and abs(dd) < 1e-3
