from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhfol.algebra import BiPoly
from qhfol.errors import NonIsolated, NotQuasiHomogeneousType, ZeroPolynomial
from qhfol.forms import OneForm
from qhfol.quasihom import (
    Weight,
    euler_check,
    ideal_membership,
    infer_weights,
    jacobian_membership,
    rotational_form,
    takens_normal_form,
)

from conftest import nonzero_rat, small_rat

P = BiPoly.parse


@pytest.mark.parametrize(
    "f, abg",
    [("y^2-x^3", (2, 3, 6)), ("x^2+y^2", (1, 1, 2)), ("y^3-x^5", (3, 5, 15)), ("x*y", (1, 1, 2))],
)
def test_infer_weights(f, abg):
    w = infer_weights(P(f))
    assert (w.alpha, w.beta, w.gamma) == abg
    assert not w.swapped


def test_infer_weights_swaps_variables():
    w = infer_weights(P("x^2 - y^3"))
    assert (w.alpha, w.beta, w.gamma, w.swapped) == (2, 3, 6, True)
    assert (w.wx, w.wy) == (3, 2)
    assert euler_check(P("x^2 - y^3"), w)


def test_infer_weights_rejects():
    assert infer_weights(P("y^2-x^3+x^4")) is None
    with pytest.raises(ZeroPolynomial):
        infer_weights(BiPoly())


def test_euler_examples():
    assert euler_check(P("y^2-x^3"), Weight(2, 3, 6))
    assert not euler_check(P("y^2-x^3+x^4"), Weight(2, 3, 6))
    assert euler_check(P("x*y"), Weight(1, 1, 2))


def test_weight_invariants():
    with pytest.raises(ValueError):
        Weight(2, 4, 8)
    with pytest.raises(ValueError):
        Weight(3, 2, 6)


@st.composite
def quasi_homogeneous(draw):
    wx = draw(st.integers(1, 4))
    wy = draw(st.integers(1, 5))
    gamma = wx * wy * draw(st.integers(1, 3))
    monos = [(i, (gamma - wx * i) // wy) for i in range(gamma // wx + 1) if (gamma - wx * i) % wy == 0]
    chosen = draw(st.lists(st.sampled_from(monos), min_size=1, max_size=len(monos), unique=True))
    return BiPoly({m: draw(nonzero_rat) for m in chosen})


@settings(max_examples=80, deadline=None)
@given(quasi_homogeneous(), nonzero_rat)
def test_inferred_weight_satisfies_euler_and_is_scale_invariant(f, c):
    w = infer_weights(f)
    assert w is not None and euler_check(f, w)
    assert infer_weights(f * c) == w


def test_ideal_membership_euler_cofactors():
    cert = ideal_membership(P("y^2-x^3"), P("-3*x^2"), P("2*y"), 8)
    assert cert.member
    a, b = cert.cofactors
    assert a == P("1/3*x") and b == P("1/2*y")


def test_ideal_membership_zero():
    cert = ideal_membership(BiPoly(), P("x"), P("y"), 4)
    assert cert.member and all(p.is_zero() for p in cert.cofactors)


@pytest.mark.parametrize("f", ["y^2-x^3", "y^2-x^3+x^4", "x^3+y^4", "x*y"])
def test_jacobian_member_reexpands(f):
    f = P(f)
    n = 10
    cert = jacobian_membership(f, n)
    assert cert.member
    a, b = cert.cofactors
    rest = f - a * f.partial_x() - b * f.partial_y()
    assert all(i + j >= n for i, j in rest.support())


def test_jacobian_non_member():
    f = P("x^5+y^5+x^3*y^3")
    cert = jacobian_membership(f, 12)
    assert not cert.member and cert.residual_order is not None
    assert cert.to_json()["label"] == "up to jet order 12"


def test_jacobian_non_isolated():
    with pytest.raises(NonIsolated):
        jacobian_membership(P("x^2*y^2"), 6)


def test_takens_exact():
    t = takens_normal_form(OneForm.exact(P("y^2-x^3")), Weight(2, 3, 6), 12)
    assert t.g == BiPoly.const(1) and t.h.is_zero() and t.f == P("y^2-x^3")


def test_takens_with_rotation_part():
    w = Weight(2, 3, 6)
    omega = OneForm.exact(P("y^2-x^3")) + rotational_form(w).scale(P("x*y"))
    t = takens_normal_form(omega, w, 12)
    assert t.g == BiPoly.const(1) and t.f == P("y^2-x^3") and t.h == P("x*y")
    assert t.residual_order(omega) is None


def test_takens_rotational_form_orientation():
    # beta x dy - alpha y dx
    rot = rotational_form(Weight(2, 3, 6))
    assert rot.a == P("-2*y") and rot.b == P("3*x")


def test_takens_rejects_non_isolated():
    with pytest.raises((NonIsolated, NotQuasiHomogeneousType)):
        takens_normal_form(OneForm(P("y"), BiPoly()), Weight(1, 1, 2), 6)


def test_takens_rejects_non_exact_lowest_part():
    # lowest part is purely rotational: no df component
    with pytest.raises(NotQuasiHomogeneousType):
        takens_normal_form(OneForm.parse("-2*y ; 3*x"), Weight(2, 3, 6), 8)


def test_takens_unit_factor():
    # (1 + x) * d(y^2 - x^3): g must undo the unit through the order
    w = Weight(2, 3, 6)
    omega = OneForm.exact(P("y^2-x^3")).scale(P("1+x"))
    t = takens_normal_form(omega, w, 14)
    assert t.f == P("y^2-x^3")
    r = t.residual_order(omega)
    assert r is None or r > 14


@st.composite
def takens_fixture(draw):
    wx, wy = draw(st.sampled_from([(2, 3), (3, 5)]))
    w = Weight(wx, wy, wx * wy)
    f = BiPoly({(wy, 0): draw(nonzero_rat), (0, wx): draw(nonzero_rat)})
    n = 16
    hterms = {}
    # h*rot must not undercut the lowest part df
    lo, hi = w.gamma - wx - wy, n - wx - wy
    for i in range(6):
        for j in range(6):
            if lo <= w.degree(i, j) <= hi:
                hterms[(i, j)] = draw(small_rat)
    return w, f, BiPoly(hterms), n


@settings(max_examples=25, deadline=None)
@given(takens_fixture())
def test_takens_roundtrip_property(fx):
    w, f, h, n = fx
    omega = OneForm.exact(f) + rotational_form(w).scale(h)
    t = takens_normal_form(omega, w, n)
    assert t.f == f
    r = t.residual_order(omega)
    assert r is None or r > n
    assert t.h == h and t.g == BiPoly.const(1)


def test_takens_to_json_fields():
    t = takens_normal_form(OneForm.exact(P("y^2-x^3")), Weight(2, 3, 6), 8)
    assert set(t.to_json()) == {"weight", "order", "g", "h", "f"}
    assert Fraction(1) == t.g.constant_term()
