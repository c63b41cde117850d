"""Dense univariate polynomials over the rationals.

A polynomial is a tuple of ``Fraction`` coefficients, lowest degree first,
with no trailing zeros (the zero polynomial is ``()``).  Only what the rest
of the package needs is here: Euclidean arithmetic, evaluation, square-free
parts and factorisation (delegated to sympy).
"""

from fractions import Fraction
from functools import lru_cache

import sympy

UPoly = tuple


def trim(coeffs):
    c = [Fraction(a) for a in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(p):
    return len(p) - 1


def lead(p):
    return p[-1] if p else Fraction(0)


def add(p, q):
    n = max(len(p), len(q))
    return trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def neg(p):
    return tuple(-a for a in p)


def sub(p, q):
    return add(p, neg(q))


def scale(p, c):
    return trim(a * c for a in p)


def mul(p, q):
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def divmod_(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = degree(q)
    lq = q[-1]
    quot = [Fraction(0)] * max(len(p) - dq, 0)
    while len(r) - 1 >= dq and r:
        k = len(r) - 1 - dq
        c = r[-1] / lq
        quot[k] = c
        for i, b in enumerate(q):
            r[k + i] -= c * b
        r = list(trim(r))
    return trim(quot), trim(r)


def monic(p):
    return scale(p, 1 / p[-1]) if p else ()


def gcd(p, q):
    while q:
        p, q = q, divmod_(p, q)[1]
    return monic(p)


def xgcd(p, q):
    """Return (g, s, t) with s*p + t*q = g, g monic."""
    r0, r1 = p, q
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        quo, rem = divmod_(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, sub(s0, mul(quo, s1))
        t0, t1 = t1, sub(t0, mul(quo, t1))
    c = 1 / r0[-1]
    return scale(r0, c), scale(s0, c), scale(t0, c)


def deriv(p):
    return trim(i * p[i] for i in range(1, len(p)))


def evaluate(p, z):
    acc = 0
    for a in reversed(p):
        acc = acc * z + a
    return acc


def squarefree(p):
    return divmod_(p, gcd(p, deriv(p)))[0] if degree(p) > 0 else monic(p)


def root_order(p, c):
    """Multiplicity of the rational number ``c`` as a root of ``p``."""
    if not p:
        raise ValueError("zero polynomial has every root")
    k = 0
    lin = (-Fraction(c), Fraction(1))
    while True:
        quo, rem = divmod_(p, lin)
        if rem:
            return k
        p, k = quo, k + 1


def to_sympy(p, var):
    return sympy.Poly([sympy.Rational(a.numerator, a.denominator) for a in reversed(p)] or [0], var, domain="QQ")


def from_sympy(poly):
    return trim(Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs()))


_T = sympy.Symbol("t")


@lru_cache(maxsize=4096)
def factor(p):
    """Irreducible monic factors of ``p`` with multiplicities, over Q."""
    if degree(p) < 1:
        return ()
    _, facs = to_sympy(p, _T).factor_list()
    return tuple((monic(from_sympy(f)), m) for f, m in facs)


def to_str(p, var="t"):
    from .bipoly import BiPoly

    return BiPoly({(i, 0): a for i, a in enumerate(p) if a}).to_str(names=(var, "_"))


def parse(text, var="t"):
    from .bipoly import BiPoly

    bp = BiPoly.parse(text, names=(var, "_"))
    if any(j for (_, j) in bp.terms):
        raise ValueError("not univariate")
    out = [Fraction(0)] * (bp.degree_x() + 1 if bp.terms else 0)
    for (i, _), c in bp.terms.items():
        out[i] = c
    return trim(out)
