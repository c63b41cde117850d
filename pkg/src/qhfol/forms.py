"""Polynomial 1-forms ``a dx + b dy``."""

from dataclasses import dataclass

from .algebra import BiPoly, gcd_bipoly
from .errors import NonIsolated, ParseError


@dataclass(frozen=True)
class OneForm:
    a: BiPoly
    b: BiPoly

    @classmethod
    def exact(cls, f):
        return cls(f.partial_x(), f.partial_y())

    @classmethod
    def parse(cls, text):
        """Parse ``d(f)`` or ``A ; B`` (meaning A dx + B dy)."""
        s = text.strip()
        if s.startswith("d(") and s.endswith(")"):
            offset = text.index("d(") + 2
            try:
                return cls.exact(BiPoly.parse(s[2:-1]))
            except ParseError as e:
                raise ParseError(str(e).rsplit(" at offset", 1)[0], e.offset + offset) from None
        if ";" not in s:
            raise ParseError("expected 'd(f)' or 'A ; B'", 0)
        left, right = text.split(";", 1)
        a = BiPoly.parse(left)
        try:
            b = BiPoly.parse(right)
        except ParseError as e:
            raise ParseError(str(e).rsplit(" at offset", 1)[0], e.offset + len(left) + 1) from None
        return cls(a, b)

    def to_str(self):
        return f"{self.a.to_str()} ; {self.b.to_str()}"

    def __str__(self):
        return f"({self.a}) dx + ({self.b}) dy"

    def __add__(self, other):
        return OneForm(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return OneForm(self.a - other.a, self.b - other.b)

    def scale(self, g):
        return OneForm(self.a * g, self.b * g)

    def is_zero(self):
        return self.a.is_zero() and self.b.is_zero()

    def swap(self):
        """Exchange the roles of x and y."""
        return OneForm(self.b.swap(), self.a.swap())

    def pullback(self, px, py):
        """Pull back along (x, y) = (px(u, v), py(u, v))."""
        a, b = self.a.substitute(px, py), self.b.substitute(px, py)
        return OneForm(a * px.partial_x() + b * py.partial_x(), a * px.partial_y() + b * py.partial_y())

    def translate(self, u0, v0):
        from .algebra import X, Y

        return OneForm(self.a.substitute(X + u0, Y + v0), self.b.substitute(X + u0, Y + v0))

    def is_singular_at_origin(self):
        return self.a.constant_term() == 0 and self.b.constant_term() == 0

    def check_isolated(self):
        """Raise unless gcd(a, b) is a unit of the local ring at 0."""
        if self.is_zero():
            raise NonIsolated("zero form")
        g = gcd_bipoly(self.a, self.b)
        if g.constant_term() == 0:
            raise NonIsolated(f"gcd(a, b) = {g} vanishes at the origin")

    def without_units(self):
        """Divide out the common factor of a and b (a unit at 0, same foliation germ)."""
        from .algebra import divexact

        g = gcd_bipoly(self.a, self.b)
        if g.is_constant():
            return self
        if g.constant_term() == 0:
            raise NonIsolated(f"gcd(a, b) = {g} vanishes at the origin")
        return OneForm(divexact(self.a, g), divexact(self.b, g))

    def wedge_df(self, f):
        """Coefficient of dx^dy in omega ^ df."""
        return self.a * f.partial_y() - self.b * f.partial_x()

    def x_order(self):
        """Largest k with x^k dividing both coefficients."""
        return min(p.x_order() for p in (self.a, self.b) if not p.is_zero())

    def y_order(self):
        return min(p.y_order() for p in (self.a, self.b) if not p.is_zero())

    def shift_down(self, i, j):
        return OneForm(self.a.shift_down(i, j), self.b.shift_down(i, j))

    def to_json(self):
        return {"a": self.a.to_str(), "b": self.b.to_str()}

    @classmethod
    def from_json(cls, data):
        return cls(BiPoly.parse(data["a"]), BiPoly.parse(data["b"]))
