from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhfol.algebra import (
    AlgPoint,
    BiPoly,
    NFElement,
    X,
    Y,
    alg_refine,
    divexact,
    divides,
    divmod_bipoly,
    gcd_bipoly,
    isolate_roots,
    poly_arith,
    rational_point,
    upoly,
)
from qhfol.errors import ParseError

from conftest import bipolys

P = BiPoly.parse


def test_mul_difference_of_squares():
    assert poly_arith("mul", P("x+y"), P("x-y")) == P("x^2-y^2")


def test_partial_x():
    assert poly_arith("partial_x", P("y^2-x^3")) == P("-3*x^2")


def test_substitute_chart():
    out = poly_arith("substitute", P("y^2-x^3"), X, X * Y)
    assert out == P("x^2*y^2 - x^3")


def test_canonical_storage_drops_zeros():
    f = P("x + y - x")
    assert f == Y
    assert BiPoly({(1, 1): 0}).is_zero()


@pytest.mark.parametrize(
    "f, g, expected",
    [("x", "y", "1"), ("x*y", "x^2", "x"), ("y^2-x^3", "2*y", "1"), ("x^2-y^2", "x^2+2*x*y+y^2", "x+y")],
)
def test_gcd_examples(f, g, expected):
    assert gcd_bipoly(P(f), P(g)) == gcd_bipoly(P(expected), P(expected))


def test_gcd_is_normalized():
    g = gcd_bipoly(P("6*x*y"), P("4*x^2"))
    assert g.leading()[1] == 1


@pytest.mark.parametrize(
    "text",
    ["y^2 - x^3", "-1/2*x*y + 3/7*y^5", "0", "x^10*y^3 - 2"],
)
def test_parse_print_roundtrip(text):
    f = P(text)
    assert P(f.to_str()) == f


def test_parse_error_offset():
    with pytest.raises(ParseError) as err:
        P("y^^2")
    assert err.value.offset == 2


def test_division():
    f = P("x^3*y - x*y^3")
    q, r = divmod_bipoly(f, P("x*y"))
    assert r.is_zero() and q == P("x^2 - y^2")
    assert divexact(f, P("x - y")) == P("x^2*y + x*y^2")
    assert not divides(P("x + 1"), f)


@settings(max_examples=60, deadline=None)
@given(bipolys(), bipolys(), bipolys())
def test_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f + (-f) == BiPoly()


@settings(max_examples=40, deadline=None)
@given(bipolys(max_deg=2, max_terms=3), bipolys(max_deg=2, max_terms=3), bipolys(2, 2), bipolys(2, 2))
def test_substitute_is_homomorphism(f, g, px, py):
    assert (f * g).substitute(px, py) == f.substitute(px, py) * g.substitute(px, py)
    assert (f + g).substitute(px, py) == f.substitute(px, py) + g.substitute(px, py)


@settings(max_examples=40, deadline=None)
@given(bipolys(max_deg=2), bipolys(max_deg=2), bipolys(max_deg=2, max_terms=2))
def test_gcd_divides_both(f, g, common):
    f, g = f * common, g * common
    if f.is_zero() and g.is_zero():
        return
    d = gcd_bipoly(f, g)
    for p in (f, g):
        _, r = divmod_bipoly(p, d)
        assert r.is_zero()
    if not common.is_zero():
        # the planted common factor divides the gcd
        assert divides(common, d)


def test_refine_sqrt2():
    roots = isolate_roots(upoly.parse("t^2 - 2"))
    p = next(r for r, _ in roots if r.numeric.real > 0)
    q = alg_refine(p, Fraction(1, 10**6))
    assert q.diameter() < 1e-6
    assert q.box_inside(p)
    (a, _), (c, _) = q.box
    assert a * a <= 2 <= c * c


def test_refine_rational_is_point():
    p = rational_point(3)
    q = alg_refine(p, Fraction(1, 100))
    assert q.box == ((3, 0), (3, 0)) and q.rational_value() == 3


def test_refine_imaginary_unit():
    roots = isolate_roots(upoly.parse("t^2 + 1"))
    p = next(r for r, _ in roots if r.numeric.imag > 0)
    q = alg_refine(p, Fraction(1, 1000))
    assert q.diameter() < 1e-3 and q.contains(1j) and q.box_inside(p)


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 30).filter(lambda n: int(n**0.5) ** 2 != n), st.integers(2, 40))
def test_refine_keeps_root(n, k):
    roots = isolate_roots(upoly.parse(f"t^2 - {n}"))
    for p, _ in roots:
        q = alg_refine(p, Fraction(1, k))
        assert q.box_inside(p)
        assert abs(q.numeric - p.numeric) < 1e-9
        assert q.diameter() < 1 / k


def test_isolate_mixed_roots():
    # (t - 1/2)^2 (t^2 + 1)
    p = upoly.mul(upoly.mul(upoly.parse("t - 1/2"), upoly.parse("t - 1/2")), upoly.parse("t^2 + 1"))
    roots = isolate_roots(p)
    assert roots[0] == (Fraction(1, 2), 2)
    assert len(roots) == 3 and all(isinstance(r, AlgPoint) for r, _ in roots[1:])


def test_number_field_arithmetic():
    (s, _), = [(r, m) for r, m in isolate_roots(upoly.parse("t^2 - 2")) if r.numeric.real > 0]
    a = NFElement(s, (Fraction(0), Fraction(1)))  # sqrt 2
    assert (a * a).is_rational() and (a * a).rational_value() == 2
    inv = a.inverse()
    assert abs(inv.numeric - 2**-0.5) < 1e-14
    assert (a * inv).rational_value() == 1


def test_algpoint_json_roundtrip():
    p, _ = isolate_roots(upoly.parse("t^3 - 2"))[0]
    assert AlgPoint.from_json(p.to_json()) == p
