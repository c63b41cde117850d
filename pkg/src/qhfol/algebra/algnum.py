"""Isolated algebraic points and arithmetic in simple number fields.

An :class:`AlgPoint` pins down one root of an irreducible rational
polynomial by a rectangle with rational corners.  Real roots keep a
degenerate (zero-height) box on the real axis and are refined by exact
bisection; non-real roots are refined by quadrisection with an exact root
count from sympy.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from . import upoly

_T = sympy.Symbol("t")


@dataclass(frozen=True)
class AlgPoint:
    minpoly: tuple  # monic irreducible upoly
    box: tuple  # ((re_lo, im_lo), (re_hi, im_hi)), Fractions
    numeric: complex

    @property
    def degree(self):
        return upoly.degree(self.minpoly)

    def is_rational(self):
        return self.degree == 1

    def is_real(self):
        return self.box[0][1] == 0 and self.box[1][1] == 0

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("not a rational point")
        return -self.minpoly[0]

    def diameter(self):
        (a, b), (c, d) = self.box
        return float(abs(complex(float(c - a), float(d - b))))

    def contains(self, z):
        (a, b), (c, d) = self.box
        return float(a) <= z.real <= float(c) and float(b) <= z.imag <= float(d)

    def box_inside(self, other):
        (a, b), (c, d) = self.box
        (a2, b2), (c2, d2) = other.box
        return a2 <= a and b2 <= b and c <= c2 and d <= d2

    def minpoly_str(self):
        return upoly.to_str(self.minpoly)

    def to_json(self):
        (a, b), (c, d) = self.box
        return {
            "minpoly": self.minpoly_str(),
            "box": [[str(a), str(b)], [str(c), str(d)]],
            "numeric": [float(self.numeric.real), float(self.numeric.imag)],
        }

    @classmethod
    def from_json(cls, data):
        (a, b), (c, d) = data["box"]
        return cls(
            upoly.parse(data["minpoly"]),
            ((Fraction(a), Fraction(b)), (Fraction(c), Fraction(d))),
            complex(*data["numeric"]),
        )

    def __str__(self):
        return f"root of {self.minpoly_str()} near {self.numeric:.6g}"


def rational_point(c):
    c = Fraction(c)
    return AlgPoint((-c, Fraction(1)), ((c, Fraction(0)), (c, Fraction(0))), complex(c))


def _numeric_in_box(minpoly, box):
    (a, b), (c, d) = box
    centre = complex((float(a) + float(c)) / 2, (float(b) + float(d)) / 2)
    roots = np.roots([float(x) for x in reversed(minpoly)])
    best = min(roots, key=lambda r: abs(r - centre))
    if b == 0 and d == 0:
        best = complex(best.real, 0.0)
    return complex(best)


def isolate_roots(p):
    """All distinct complex roots of ``p`` with multiplicities.

    Rational roots come back as ``Fraction``, the others as
    :class:`AlgPoint`.  Order: rational roots ascending, then real
    irrational, then non-real, each group by increasing real part.
    """
    out = []
    for fac, mult in upoly.factor(p):
        if upoly.degree(fac) == 1:
            out.append((-fac[0], mult))
            continue
        real, cplx = upoly.to_sympy(fac, _T).intervals(all=True)
        for (lo, hi), _ in real:
            box = ((Fraction(int(lo.p), int(lo.q)), Fraction(0)), (Fraction(int(hi.p), int(hi.q)), Fraction(0)))
            out.append((AlgPoint(fac, box, _numeric_in_box(fac, box)), mult))
        for (lo, hi), _ in cplx:
            lre, lim = (sympy.nsimplify(v) for v in lo.as_real_imag())
            hre, him = (sympy.nsimplify(v) for v in hi.as_real_imag())
            box = (
                (Fraction(int(lre.p), int(lre.q)), Fraction(int(lim.p), int(lim.q))),
                (Fraction(int(hre.p), int(hre.q)), Fraction(int(him.p), int(him.q))),
            )
            out.append((AlgPoint(fac, box, _numeric_in_box(fac, box)), mult))

    def key(item):
        r, _ = item
        if isinstance(r, Fraction):
            return (0, float(r), 0.0)
        return (1 if r.is_real() else 2, r.numeric.real, r.numeric.imag)

    return sorted(out, key=key)


def _count_in_box(minpoly, box):
    (a, b), (c, d) = box
    poly = upoly.to_sympy(minpoly, _T)
    lo = sympy.Rational(a.numerator, a.denominator) + sympy.I * sympy.Rational(b.numerator, b.denominator)
    hi = sympy.Rational(c.numerator, c.denominator) + sympy.I * sympy.Rational(d.numerator, d.denominator)
    return poly.count_roots(lo, hi)


def alg_refine(p, eps):
    """Shrink the isolating box of ``p`` below diameter ``eps``."""
    eps = Fraction(eps)
    if p.is_rational():
        c = p.rational_value()
        return AlgPoint(p.minpoly, ((c, Fraction(0)), (c, Fraction(0))), complex(c))
    (a, b), (c, d) = p.box
    if p.is_real():
        sa = upoly.evaluate(p.minpoly, a)
        while c - a >= eps:
            m = (a + c) / 2
            sm = upoly.evaluate(p.minpoly, m)
            if sm == 0:
                a = c = m
                break
            if (sm > 0) == (sa > 0):
                a, sa = m, sm
            else:
                c = m
        box = ((a, Fraction(0)), (c, Fraction(0)))
        return AlgPoint(p.minpoly, box, _numeric_in_box(p.minpoly, box))
    box = p.box
    while True:
        (a, b), (c, d) = box
        if (c - a) ** 2 + (d - b) ** 2 < eps * eps:
            break
        mr, mi = (a + c) / 2, (b + d) / 2
        quarters = [
            ((a, b), (mr, mi)),
            ((mr, b), (c, mi)),
            ((a, mi), (mr, d)),
            ((mr, mi), (c, d)),
        ]
        for q in quarters:
            if _count_in_box(p.minpoly, q) >= 1:
                box = q
                break
        else:  # pragma: no cover - the parent box holds a root
            raise RuntimeError("root lost during refinement")
    return AlgPoint(p.minpoly, box, _numeric_in_box(p.minpoly, box))


class NFElement:
    """Element of Q[t]/(minpoly) evaluated at a chosen root."""

    __slots__ = ("field", "rep")

    def __init__(self, field, rep):
        self.field = field
        self.rep = upoly.divmod_(upoly.trim(rep), field.minpoly)[1]

    @staticmethod
    def _lift(field, other):
        if isinstance(other, NFElement):
            return other
        if isinstance(other, (int, Fraction)):
            return NFElement(field, (Fraction(other),))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(self.field, other)
        if other is NotImplemented:
            return other
        return NFElement(self.field, upoly.add(self.rep, other.rep))

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.field, upoly.neg(self.rep))

    def __sub__(self, other):
        return self + (-self._lift(self.field, other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(self.field, other)
        if other is NotImplemented:
            return other
        return NFElement(self.field, upoly.mul(self.rep, other.rep))

    __rmul__ = __mul__

    def inverse(self):
        if not self.rep:
            raise ZeroDivisionError("zero in number field")
        g, s, _ = upoly.xgcd(self.rep, self.field.minpoly)
        return NFElement(self.field, s)

    def __truediv__(self, other):
        return self * self._lift(self.field, other).inverse()

    def __eq__(self, other):
        other = self._lift(self.field, other)
        if other is NotImplemented:
            return False
        return self.rep == other.rep

    def __hash__(self):
        return hash(self.rep)

    def is_zero(self):
        return not self.rep

    def is_rational(self):
        return len(self.rep) <= 1

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("element is irrational")
        return self.rep[0] if self.rep else Fraction(0)

    @property
    def numeric(self):
        return complex(upoly.evaluate(tuple(float(c) for c in self.rep), self.field.numeric))

    def minpoly(self):
        """Minimal polynomial over Q, as an AlgPoint for this value."""
        if self.is_rational():
            return rational_point(self.rational_value())
        n = upoly.degree(self.field.minpoly)
        cols = []
        for k in range(n):
            e = NFElement(self.field, upoly.mul(self.rep, (Fraction(0),) * k + (Fraction(1),)))
            cols.append([e.rep[i] if i < len(e.rep) else Fraction(0) for i in range(n)])
        mat = sympy.Matrix(n, n, lambda i, j: sympy.Rational(cols[j][i].numerator, cols[j][i].denominator))
        charp = upoly.from_sympy(mat.charpoly(_T))
        target = self.numeric
        for fac, _ in upoly.factor(charp):
            for r, _ in isolate_roots(fac):
                if isinstance(r, Fraction):
                    continue
                if abs(r.numeric - target) < 1e-9 * max(1.0, abs(target)):
                    return r
        # fall back: nearest root among all factors
        cands = [r for fac, _ in upoly.factor(charp) for r, _ in isolate_roots(fac) if not isinstance(r, Fraction)]
        return min(cands, key=lambda r: abs(r.numeric - target))

    def __repr__(self):
        return f"NFElement({upoly.to_str(self.rep)} @ {self.field})"
