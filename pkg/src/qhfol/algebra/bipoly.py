"""Sparse bivariate polynomials with exact rational coefficients.

Text format: a signed sum of terms ``c*x^i*y^j`` where ``c`` is an integer
or a rational literal ``p/q``.  The parser also accepts parentheses,
products of sub-expressions and implicit multiplication such as ``3x``;
the printer always emits the canonical form (terms ascending
lexicographically in ``(i, j)``), which parses back to the same value.
"""

import re
from fractions import Fraction

from ..errors import ParseError
from . import upoly


def _frac(c):
    return c if isinstance(c, Fraction) else Fraction(c)


class BiPoly:
    """Immutable sparse polynomial in two variables.

    ``terms`` maps ``(i, j)`` (the exponents of the first and second
    variable) to a nonzero ``Fraction``.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for (i, j), c in terms.items():
                if i < 0 or j < 0:
                    raise ValueError(f"negative exponent in {(i, j)}")
                c = _frac(c)
                if c:
                    clean[(int(i), int(j))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, i, j, c=1):
        return cls({(i, j): c})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    # ring structure -----------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return BiPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return BiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return BiPoly()
            return BiPoly._raw({k: c * other for k, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return BiPoly({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        result, base = BiPoly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        return f"BiPoly({self.to_str()!r})"

    def __str__(self):
        return self.to_str()

    # structure queries ----------------------------------------------------

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return all(k == (0, 0) for k in self._terms)

    def coeff(self, i, j):
        return self._terms.get((i, j), Fraction(0))

    def constant_term(self):
        return self.coeff(0, 0)

    def support(self):
        return sorted(self._terms)

    def degree(self):
        return max((i + j for i, j in self._terms), default=-1)

    def degree_x(self):
        return max((i for i, _ in self._terms), default=-1)

    def degree_y(self):
        return max((j for _, j in self._terms), default=-1)

    def order(self):
        """Lowest total degree of a term (-1 for the zero polynomial)."""
        return min((i + j for i, j in self._terms), default=-1)

    def x_order(self):
        return min((i for i, _ in self._terms), default=0)

    def y_order(self):
        return min((j for _, j in self._terms), default=0)

    def leading(self):
        """Leading (exponent, coefficient) under the lexicographic order."""
        k = max(self._terms)
        return k, self._terms[k]

    # transformations ------------------------------------------------------

    def partial_x(self):
        return BiPoly._raw({(i - 1, j): c * i for (i, j), c in self._terms.items() if i})

    def partial_y(self):
        return BiPoly._raw({(i, j - 1): c * j for (i, j), c in self._terms.items() if j})

    def swap(self):
        return BiPoly._raw({(j, i): c for (i, j), c in self._terms.items()})

    def shift_down(self, a, b):
        """Divide by x^a y^b; every term must be divisible."""
        out = {}
        for (i, j), c in self._terms.items():
            if i < a or j < b:
                raise ValueError(f"x^{a}*y^{b} does not divide {self}")
            out[(i - a, j - b)] = c
        return BiPoly._raw(out)

    def shift_up(self, a, b):
        return BiPoly._raw({(i + a, j + b): c for (i, j), c in self._terms.items()})

    def truncate(self, n):
        """Drop all terms of total degree >= n."""
        return BiPoly._raw({k: c for k, c in self._terms.items() if k[0] + k[1] < n})

    def weighted_part(self, wx, wy, d, shift=0):
        return BiPoly._raw({k: c for k, c in self._terms.items() if wx * k[0] + wy * k[1] + shift == d})

    def weighted_degrees(self, wx, wy, shift=0):
        return sorted({wx * i + wy * j + shift for i, j in self._terms})

    def substitute(self, px, py):
        """Compose: return self(px, py) for BiPoly arguments."""
        px, py = self._coerce(px), self._coerce(py)
        if not self._terms:
            return BiPoly()
        xp = [BiPoly.const(1)]
        yp = [BiPoly.const(1)]
        for _ in range(self.degree_x()):
            xp.append(xp[-1] * px)
        for _ in range(self.degree_y()):
            yp.append(yp[-1] * py)
        out = {}
        for (i, j), c in self._terms.items():
            for k, v in (xp[i] * yp[j])._terms.items():
                out[k] = out.get(k, 0) + c * v
        return BiPoly({k: v for k, v in out.items() if v})

    def evaluate(self, x, y):
        """Evaluate at any values supporting + and * with Fractions."""
        if not self._terms:
            return 0
        xp, yp = {0: 1}, {0: 1}
        for i in range(1, self.degree_x() + 1):
            xp[i] = xp[i - 1] * x
        for j in range(1, self.degree_y() + 1):
            yp[j] = yp[j - 1] * y
        acc = 0
        for (i, j), c in self._terms.items():
            acc = acc + (xp[i] * yp[j]) * c
        return acc

    def restrict_x0(self):
        """f(0, y) as a univariate polynomial in y."""
        n = self.degree_y() + 1
        return upoly.trim(self.coeff(0, j) for j in range(max(n, 0)))

    def restrict_y0(self):
        """f(x, 0) as a univariate polynomial in x."""
        n = self.degree_x() + 1
        return upoly.trim(self.coeff(i, 0) for i in range(max(n, 0)))

    def coeffs_in_y(self):
        """Map j -> coefficient of y^j as a univariate polynomial in x."""
        rows = {}
        for (i, j), c in self._terms.items():
            rows.setdefault(j, {})[i] = c
        return {j: upoly.trim(r.get(i, 0) for i in range(max(r) + 1)) for j, r in rows.items()}

    @classmethod
    def from_y_coeffs(cls, rows):
        out = {}
        for j, p in rows.items():
            for i, c in enumerate(p):
                if c:
                    out[(i, j)] = c
        return cls._raw(out)

    # text format ----------------------------------------------------------

    def to_str(self, names=("x", "y")):
        if not self._terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self._terms.items()):
            mono = []
            for name, e in ((names[0], i), (names[1], j)):
                if e == 1:
                    mono.append(name)
                elif e > 1:
                    mono.append(f"{name}^{e}")
            mono = "*".join(mono)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    @classmethod
    def parse(cls, text, names=("x", "y")):
        return _Parser(text, names).parse()


X = BiPoly.monomial(1, 0)
Y = BiPoly.monomial(0, 1)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))")


class _Parser:
    def __init__(self, text, names):
        self.text = text
        self.names = names
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise ParseError("empty polynomial", 0)
        value = self.expr()
        kind, val, pos = self.peek()
        if kind is not None:
            raise ParseError(f"unexpected token {val!r}", pos)
        return value

    def expr(self):
        kind, val, _ = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        value = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                value = value + t if val == "+" else value - t
            else:
                return value

    def term(self):
        value = self.power()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                value = value * self.power()
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                value = value * self.power()
            else:
                return value

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or "/" in val:
                raise ParseError("expected a nonnegative integer exponent", pos)
            return base ** int(val)
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return BiPoly.const(Fraction(val))
        if kind == "name":
            if val == self.names[0]:
                return X
            if val == self.names[1]:
                return Y
            raise ParseError(f"unknown variable {val!r}", pos)
        if kind == "op" and val == "(":
            inner = self.expr()
            k2, v2, p2 = self.take()
            if not (k2 == "op" and v2 == ")"):
                raise ParseError("expected ')'", p2)
            return inner
        if kind is None:
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected token {val!r}", pos)


# exact division and gcd ------------------------------------------------------


def divmod_bipoly(f, g):
    """Multivariate division with respect to the lex order (y, x).

    Returns (q, r) with f = q*g + r and no term of r divisible by the
    leading monomial of g.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    key = lambda k: (k[1], k[0])
    (gi, gj) = max(g._terms, key=key)
    gc = g._terms[(gi, gj)]
    q, r, p = {}, {}, dict(f._terms)
    while p:
        k = max(p, key=key)
        c = p[k]
        if k[0] >= gi and k[1] >= gj:
            m = (k[0] - gi, k[1] - gj)
            t = c / gc
            q[m] = q.get(m, 0) + t
            for (a, b), v in g._terms.items():
                kk = (a + m[0], b + m[1])
                s = p.get(kk, 0) - t * v
                if s:
                    p[kk] = s
                else:
                    p.pop(kk, None)
        else:
            r[k] = c
            del p[k]
    return BiPoly(q), BiPoly(r)


def divexact(f, g):
    q, r = divmod_bipoly(f, g)
    if r:
        raise ValueError(f"{g} does not divide {f}")
    return q


def divides(g, f):
    return divmod_bipoly(f, g)[1].is_zero()


def _content_y(f):
    c = ()
    for p in f.coeffs_in_y().values():
        c = upoly.gcd(c, p) if c else upoly.monic(p)
    return c


def _primitive_y(f):
    c = _content_y(f)
    rows = {j: upoly.divmod_(p, c)[0] for j, p in f.coeffs_in_y().items()}
    return c, BiPoly.from_y_coeffs(rows)


def _prem_y(a, b):
    """Pseudo-remainder of a by b as polynomials in y over Q[x]."""
    db = b.degree_y()
    lb = BiPoly.from_y_coeffs({0: b.coeffs_in_y()[db]})
    r = a
    while not r.is_zero() and r.degree_y() >= db:
        dr = r.degree_y()
        lr = BiPoly.from_y_coeffs({0: r.coeffs_in_y()[dr]})
        r = lb * r - lr.shift_up(0, dr - db) * b
    return r


def normalize(f):
    """Scale so the lexicographically largest term has coefficient 1."""
    if f.is_zero():
        return f
    return f * (1 / f.leading()[1])


def gcd_bipoly(f, g):
    """Greatest common divisor over Q, normalized by :func:`normalize`."""
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if f.is_zero():
        return normalize(g)
    if g.is_zero():
        return normalize(f)
    cf, pf = _primitive_y(f)
    cg, pg = _primitive_y(g)
    cont = upoly.gcd(cf, cg)
    if pf.degree_y() < pg.degree_y():
        pf, pg = pg, pf
    while pg.degree_y() > 0:
        r = _prem_y(pf, pg)
        if r.is_zero():
            break
        pf, pg = pg, _primitive_y(r)[1]
    if pg.degree_y() <= 0:
        # the primitive parts share no factor involving y
        pg = BiPoly.const(1)
    return normalize(BiPoly.from_y_coeffs({0: cont}) * pg)


def poly_arith(op, *operands):
    """Dispatch ``add``, ``sub``, ``mul``, ``partial_x``, ``partial_y`` or
    ``substitute`` (operands ``f, px, py``)."""
    if op == "add":
        out = BiPoly()
        for p in operands:
            out = out + p
        return out
    if op == "sub":
        return operands[0] - operands[1]
    if op == "mul":
        out = BiPoly.const(1)
        for p in operands:
            out = out * p
        return out
    if op == "partial_x":
        return operands[0].partial_x()
    if op == "partial_y":
        return operands[0].partial_y()
    if op == "substitute":
        f, px, py = operands
        return f.substitute(px, py)
    raise ValueError(f"unknown operation {op!r}")
