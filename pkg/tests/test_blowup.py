from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhfol import blowup as bu
from qhfol.algebra import BiPoly, isolate_roots, upoly
from qhfol.desing import resolve_curve, resolve_foliation
from qhfol.errors import Dicritical, IrrationalCenter, NonReducedCurve, NotAPoint
from qhfol.forms import OneForm

from conftest import check_factorization

P = BiPoly.parse


def origin_blowup(f=None, omega=None):
    return bu.blowup_at(bu.initial_tree(f, omega))


def test_curve_pullback_home_chart():
    tree = origin_blowup(P("y^2-x^3"))
    c = tree.chart("1a")
    assert c.f == P("x^2*y^2 - x^3")
    assert tree.component(1).multiplicity_curve == 2
    assert c.strict(c.f) == P("y^2 - x")


def test_form_pullback_home_chart():
    tree = origin_blowup(omega=OneForm.parse("-3*x^2 ; 2*y"))
    c = tree.chart("1a")
    assert tree.component(1).multiplicity_form == 1
    assert c.omega == OneForm.parse("2*y^2 - 3*x ; 2*x*y")
    # on the divisor {x = 0} the strict form vanishes only at y = 0
    a0, b0 = c.omega.a.restrict_x0(), c.omega.b.restrict_x0()
    roots = {r for r, _ in isolate_roots(upoly.gcd(a0, b0))}
    assert roots == {0}


def test_axis_pullback_inf_chart():
    tree = origin_blowup(P("x"))
    c = tree.chart("1b")
    assert c.f == P("x*y")
    assert c.strict(c.f) == P("x")


def test_first_blowup_bookkeeping():
    tree = origin_blowup(P("x*y"))
    (d,) = tree.components
    assert (d.id, d.self_intersection, d.creation_index) == (1, -1, 1)
    assert tree.adjacency == frozenset()


def test_chain_one_step():
    tree, p = bu.chain_blowup(bu.initial_tree(P("y")), None, P("y"), 1)
    assert len(tree.components) == 1
    assert (p.chart, p.u, p.v) == ("1a", 0, 0)


def test_chain_two_steps():
    tree, _ = bu.chain_blowup(bu.initial_tree(P("y")), None, P("y"), 2)
    assert [d.self_intersection for d in tree.components] == [-2, -1]
    assert tree.edges() == [(1, 2)]


def test_chain_along_y_axis_carrying_cusp():
    # following {y = 0} separates from the cusp after the second blow-up
    tree, _ = bu.chain_blowup(bu.initial_tree(P("y^2-x^3")), None, P("y"), 3)
    assert [d.multiplicity_curve for d in tree.components] == [2, 3, 3]
    # independent check: order of the total transform along D3 in its home chart
    c = tree.chart("3a")
    total = P("y^2-x^3").substitute(c.x_map, c.y_map)
    assert total.x_order() == 3


def test_cusp_resolution_reaches_gamma():
    tree = resolve_curve(P("y^2-x^3"))
    assert [d.multiplicity_curve for d in tree.components] == [2, 3, 6]


def test_attachments_cusp():
    tree = resolve_curve(P("y^2-x^3"))
    seps = bu.separatrix_attachments(tree)
    assert len(seps) == 1 and seps[0].comp == 3


def test_attachments_xy():
    tree = origin_blowup(P("x*y"))
    seps = bu.separatrix_attachments(tree)
    assert sorted(bu.param_str(m.param) for m in seps) == ["0", "inf"]
    assert {m.chart for m in seps} == {"1a", "1b"}
    assert all(m.coords == (0, 0) for m in seps)


def test_attachments_two_parabolas():
    tree, _ = bu.chain_blowup(bu.initial_tree(P("y^2-x^4")), None, P("y"), 2)
    seps = bu.separatrix_attachments(tree)
    assert {m.comp for m in seps} == {2}
    assert sorted(m.param for m in seps) == [-1, 1]


def test_irrational_attachment_is_algpoint():
    tree = origin_blowup(P("x^2+2*y^2"))
    seps = bu.separatrix_attachments(tree)
    assert len(seps) == 2
    assert all(m.param.minpoly_str() == upoly.to_str(upoly.parse("t^2 + 1/2")) for m in seps)


def test_irrational_centre_rejected():
    tree = origin_blowup(P("y^2-2*x^2"))
    r, _ = isolate_roots(upoly.parse("t^2 - 2"))[0]
    with pytest.raises(IrrationalCenter):
        bu.blowup_at(tree, bu.PointOnDivisor("1a", 0, r))


def test_not_a_point():
    tree = origin_blowup(P("x*y"))
    with pytest.raises(NotAPoint):
        bu.blowup_at(tree, bu.PointOnDivisor("1a", 1, 1))
    with pytest.raises(NotAPoint):
        bu.blowup_at(tree)  # root already blown up
    tree = bu.blowup_at(tree, bu.PointOnDivisor("1a", 0, 0))
    with pytest.raises(NotAPoint):
        bu.blowup_at(tree, bu.PointOnDivisor("1a", 0, 0))


def test_dicritical_radial():
    radial = OneForm.parse("-y ; x")
    with pytest.raises(Dicritical):
        bu.blowup_at(bu.initial_tree(omega=radial))
    tree = bu.blowup_at(bu.initial_tree(omega=radial), allow_dicritical=True)
    assert tree.component(1).dicritical


def test_non_reduced_curve():
    with pytest.raises(NonReducedCurve):
        bu.initial_tree(P("y^2*(x+y)"))


def test_chart_transition():
    # home (s1, t1) and inf (s2, t2): s1 = s2*t2, t1 = 1/s2
    tree = resolve_curve(P("y^3-x^5"))
    samples = [(Fraction(2), Fraction(3)), (Fraction(-1, 2), Fraction(5, 7)), (Fraction(3), Fraction(-2))]
    for d in tree.components:
        a, b = tree.chart(d.home_chart), tree.chart(d.inf_chart)
        for s2, t2 in samples:
            s1, t1 = s2 * t2, 1 / s2
            assert a.x_map.evaluate(s1, t1) == b.x_map.evaluate(s2, t2)
            assert a.y_map.evaluate(s1, t1) == b.y_map.evaluate(s2, t2)
            assert a.f.evaluate(s1, t1) == b.f.evaluate(s2, t2)


def _self_intersection_ledger(tree):
    expected = {d.id: -1 for d in tree.components}
    replay = bu.initial_tree(tree.f, tree.omega)
    for cid, u, v in tree.history:
        chart = replay.chart(cid)
        for e in chart.divisor_locals:
            if (e.axis == "u" and u == 0) or (e.axis == "v" and v == 0):
                expected[e.comp] -= 1
        replay = bu.blowup_at(replay, bu.PointOnDivisor(cid, u, v), allow_dicritical=True)
    return expected


def assert_is_tree(tree):
    n = len(tree.components)
    edges = tree.edges()
    assert len(edges) == max(n - 1, 0)
    if n:
        seen, todo = {1}, [1]
        while todo:
            k = todo.pop()
            for j in tree.neighbours(k):
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
        assert seen == {d.id for d in tree.components}


CURVES = ["y^2-x^3", "y^3-x^5", "x*y", "y^2-x^4", "y-x^3", "x^2+y^2", "y*(y^2-x^3)", "y^3-x^7", "x^3-y^4"]


@pytest.mark.parametrize("f", CURVES)
def test_tree_and_self_intersection_ledger(f):
    tree = resolve_curve(P(f))
    assert_is_tree(tree)
    assert len(tree.components) == len(tree.history)
    ledger = _self_intersection_ledger(tree)
    assert {d.id: d.self_intersection for d in tree.components} == ledger


@st.composite
def qh_curves(draw):
    a = draw(st.integers(1, 5))
    b = draw(st.integers(a + 1, 7))
    from math import gcd

    if gcd(a, b) != 1:
        b = a + 1
    c = draw(st.sampled_from([1, -1, 2, Fraction(1, 3)]))
    return BiPoly({(0, a): 1, (b, 0): -c})


@settings(max_examples=20, deadline=None)
@given(qh_curves())
def test_resolution_trees_are_trees(f):
    tree = resolve_curve(f)
    assert_is_tree(tree)
    check_factorization(tree)


def test_foliation_tree_is_tree():
    tree = resolve_foliation(OneForm.exact(P("y^3-x^5")))
    assert_is_tree(tree)
    check_factorization(tree)
