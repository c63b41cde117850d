import cmath
import math
from dataclasses import replace

import numpy as np
import pytest

from qhfol import holonomy as H
from qhfol.algebra import BiPoly
from qhfol.diffeo import JetDiffeo
from qhfol.errors import IllConditionedFit, LeafEscaped, SingularFiberHit, ToleranceNotMet
from qhfol.forms import OneForm

P = BiPoly.parse


def linear_turn(lam):
    return H.NumericForm.linear_model(lam), H.circle_loop(0, 1.0)


@pytest.fixture(scope="module")
def cusp_rep():
    return H.holonomy_rep(OneForm.exact(P("y^2-x^3")))


def test_lift_linear_half_turn():
    form, loop = linear_turn(-0.5)
    assert abs(H.lift_path(form, loop, 0.01) - (-0.01)) < 1e-8


def test_lift_contractible_loop():
    form = H.NumericForm.linear_model(-0.5)
    loop = H.circle_loop(2.0, 0.5)
    for v0 in (0.01, 0.02j, -0.005 + 0.003j):
        assert abs(H.lift_path(form, loop, v0) - v0) < 1e-10


def test_lift_trivial_linear_holonomy():
    form, loop = linear_turn(1.0)
    assert abs(H.lift_path(form, loop, 0.01) - 0.01) < 1e-10


def test_generator_linear_model():
    form, loop = linear_turn(-0.5)
    jet, err, rho = H.holonomy_generator(form, loop)
    assert abs(jet.coeffs[0] + 1) < 1e-6
    assert all(abs(c) * rho**k < 1e-6 for k, c in enumerate(jet.coeffs[1:], start=1))
    assert err > 0


def test_identity_loop_gives_identity_jet():
    form = H.NumericForm.linear_model(-1 / 3)
    jet, err, rho = H.holonomy_generator(form, H.circle_loop(3.0, 1.0))
    scaled = jet.scaled(rho)
    assert abs(scaled.coeffs[0] - 1) < 1e-8
    assert all(abs(c) < 1e-8 for c in scaled.coeffs[1:])


def test_step_halving_contract():
    form, loop = linear_turn(1j)
    fine, coarse, disc = H.lift_offsets(form, loop, [0.01, 0.005], H.NumericParams())
    assert np.all(disc / np.abs(fine) <= 1e-6)
    with pytest.raises(ToleranceNotMet):
        H.lift_offsets(form, loop, [0.01], H.NumericParams(rtol=1e-4, halving_factor=1e-14))


@pytest.mark.parametrize("lam", [-0.5, -1 / 3, 1j, 0.25 + 0.5j])
def test_halving_tolerance_moves_jet_less_than_error(lam):
    form, loop = linear_turn(lam)
    p = H.NumericParams()
    j1, e1, rho = H.holonomy_generator(form, loop, p)
    j2, e2, _ = H.holonomy_generator(form, loop, replace(p, rtol=p.rtol / 2), rho)
    assert j1.scaled(rho).distance(j2.scaled(rho)) < max(e1, e2)


@pytest.mark.parametrize("lam", [-0.5, -1 / 3, 1j, 0.25 + 0.5j, 2.0, -0.7])
def test_error_estimate_bounds_true_error(lam):
    # the linear model's holonomy is exactly v -> exp(2 pi i lam) v
    form, loop = linear_turn(lam)
    jet, err, rho = H.holonomy_generator(form, loop)
    exact = JetDiffeo.from_list([cmath.exp(2j * math.pi * lam)], 8)
    assert jet.scaled(rho).distance(exact) < err


def test_leaf_escape():
    # lambda = -i/2: |v| grows like exp(theta/2) along the turn
    form, loop = linear_turn(-0.5j)
    assert abs(H.lift_path(form, loop, 0.01)) > 0.2
    with pytest.raises(LeafEscaped):
        H.lift_path(form, loop, 0.01, H.NumericParams(escape_radius=0.05))


def test_singular_fibre():
    form = H.NumericForm.linear_model(-0.5)
    loop = H.circle_loop(0, 1e-3)
    with pytest.raises(SingularFiberHit):
        H.lift_path(form, loop, 0.01, H.NumericParams(b_floor=1.0))


def test_ill_conditioned_fit():
    form, loop = linear_turn(-0.5)
    with pytest.raises(IllConditionedFit):
        H.holonomy_generator(form, loop, H.NumericParams(offsets=(0.01, 0.01, 0.01), order=4))


def test_homotopy_invariance():
    form = H.NumericForm.linear_model(-1 / 3)
    base = cmath.exp(0.7j)
    a = H.lasso(base, 0, 0.3)
    b = H.circle_loop(0, 1.0)
    # conjugate the circle to the same base point: walk there along the unit circle
    arc = H.Segment("arc", center=0j, radius=1.0, theta0=0.7, theta1=0.0)
    back = arc.reversed()
    b = H.LoopSpec(base, ("0",), (arc,) + b.segments + (back,))
    c = H.lasso(base, 0, 0.6)
    ja, ea, rho = H.holonomy_generator(form, a)
    jb, eb, _ = H.holonomy_generator(form, b, rho=rho)
    jc, ec, _ = H.holonomy_generator(form, c, rho=rho)
    assert ja.scaled(rho).distance(jb.scaled(rho)) < ea + eb
    assert ja.scaled(rho).distance(jc.scaled(rho)) < ea + ec


def test_homotopy_invariance_cusp(cusp_rep):
    g = cusp_rep.generators[0]
    center = complex(0)  # the first lasso encircles parameter 0
    bigger = H.lasso(g.loop.base, center, 1.5 * g.loop.segments[1].radius)
    jet, err, _ = H.holonomy_generator(cusp_rep.form, bigger, rho=cusp_rep.rho)
    rho = cusp_rep.rho
    assert jet.scaled(rho).distance(g.diffeo.scaled(rho)) < err + g.error


def test_reversal_inverts(cusp_rep):
    rho = cusp_rep.rho
    for g in cusp_rep.generators:
        rev, err, _ = H.holonomy_generator(cusp_rep.form, g.loop.reversed(), rho=rho)
        both = rev.compose(g.diffeo).scaled(rho)
        ident = JetDiffeo.identity(both.order, exact=False)
        assert both.distance(ident) < 10 * (err + g.error)


def test_cusp_rep_census(cusp_rep):
    assert len(cusp_rep.generators) == 3
    assert [g.label for g in cusp_rep.generators] == ["0", "1", "inf"]
    assert cusp_rep.central == 3 and cusp_rep.transversal.chart == "3a"
    assert abs(abs(cusp_rep.transversal.base) - 1) < 1e-12


def test_linear_part_law(cusp_rep):
    for g in cusp_rep.generators:
        assert H.linear_law_defect(g) < 10 * g.error


def test_one_blowup_linear_model_multipliers_inverse():
    rep = H.holonomy_rep(OneForm.parse("1/2*y ; x"))
    assert len(rep.generators) == 2
    c0, c1 = (g.diffeo.coeffs[0] for g in rep.generators)
    assert abs(c0 * c1 - 1) < 1e-8
    for g in rep.generators:
        assert H.linear_law_defect(g) < 10 * g.error


def test_product_is_reported(cusp_rep):
    assert cusp_rep.product is not None and cusp_rep.product.order == 8


def test_parallel_generators_identical():
    omega = OneForm.exact(P("y^2-x^3"))
    a = H.holonomy_rep(omega, jobs=1)
    b = H.holonomy_rep(omega, jobs=3)
    assert a.to_json() == b.to_json()


def test_loops_are_closed_and_ordered(cusp_rep):
    for g in cusp_rep.generators:
        segs = g.loop.segments
        assert abs(segs[0].point(0.0) - g.loop.base) < 1e-12
        assert abs(segs[-1].point(1.0) - g.loop.base) < 1e-12
        for s, t in zip(segs, segs[1:]):
            assert abs(s.point(1.0) - t.point(0.0)) < 1e-12


def test_choose_base_is_deterministic_and_clear():
    pts = [0j, 1 + 0j, -0.5 + 0.2j]
    b1, b2 = H.choose_base(pts), H.choose_base(list(pts))
    assert b1 == b2 and abs(abs(b1) - 1) < 1e-12
    assert min(abs(b1 - p) for p in pts) > 0.3


def test_linear_model_lambda_sweep():
    for lam in (-0.5, -1 / 3, 1j):
        form, loop = linear_turn(lam)
        jet, _, _ = H.holonomy_generator(form, loop)
        assert abs(jet.coeffs[0] - cmath.exp(2j * math.pi * lam)) < 1e-8
