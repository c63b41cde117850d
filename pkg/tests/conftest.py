from fractions import Fraction

from hypothesis import strategies as st

from qhfol.algebra import BiPoly

small_rat = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
nonzero_rat = small_rat.filter(lambda c: c != 0)


@st.composite
def bipolys(draw, max_deg=3, max_terms=4):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        i = draw(st.integers(0, max_deg))
        j = draw(st.integers(0, max_deg))
        terms[(i, j)] = draw(small_rat)
    return BiPoly(terms)


@st.composite
def exact_jets(draw, n):
    c1 = draw(nonzero_rat)
    rest = [draw(small_rat) for _ in range(n - 1)]
    return [c1] + rest


# every blow-up performed anywhere in the suite is checked here ---------------

import pytest  # noqa: E402

from qhfol import blowup as bu  # noqa: E402

FACTORIZATION_CHECKS = {"trees": 0, "charts": 0}


def _monomial(a, b):
    return BiPoly.monomial(a, b, 1)


def check_factorization(tree):
    """Pull-back of the root data through each composed chart map equals
    (exceptional monomial) x (strict transform), exactly."""
    root = tree.chart("0")
    for c in tree.charts[1:]:
        a = b = af = bf = 0
        for e in c.divisor_locals:
            d = tree.component(e.comp)
            if e.axis == "u":
                a, af = d.multiplicity_curve, d.multiplicity_form
            else:
                b, bf = d.multiplicity_curve, d.multiplicity_form
        if root.f is not None:
            total = root.f.substitute(c.x_map, c.y_map)
            assert total == c.f, f"chart {c.id}: stored total transform differs"
            strict = c.strict(c.f)
            assert _monomial(a, b) * strict == total, f"chart {c.id}: curve factorization"
            assert c.divisor_exponents(c.f) == (a, b)
        if root.omega is not None:
            pulled = root.omega.pullback(c.x_map, c.y_map)
            assert pulled == c.omega.scale(_monomial(af, bf)), f"chart {c.id}: form factorization"
        FACTORIZATION_CHECKS["charts"] += 1
    FACTORIZATION_CHECKS["trees"] += 1


@pytest.fixture(autouse=True)
def _checked_blowups(monkeypatch):
    original = bu.blowup_at

    def checked(*args, **kwargs):
        tree = original(*args, **kwargs)
        check_factorization(tree)
        return tree

    monkeypatch.setattr(bu, "blowup_at", checked)
    yield
