"""Weights, Euler identity, jet-level ideal membership and Takens normal forms.

Weighted degrees: with weights ``wx`` on x and ``wy`` on y, the monomial
``x^i y^j`` has degree ``wx*i + wy*j``; the form terms ``x^i y^j dx`` and
``x^i y^j dy`` have degrees ``wx*(i+1) + wy*j`` and ``wx*i + wy*(j+1)``,
so that ``d`` preserves degree.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .algebra import BiPoly, gcd_bipoly, linalg
from .errors import NotQuasiHomogeneousType, ZeroPolynomial
from .forms import OneForm


@dataclass(frozen=True)
class Weight:
    """Weight (alpha, beta, gamma) with alpha <= beta coprime.

    ``swapped`` means x carries ``beta`` and y carries ``alpha``.
    """

    alpha: int
    beta: int
    gamma: int
    swapped: bool = False

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0 or self.gamma <= 0:
            raise ValueError("weights must be positive")
        if gcd(self.alpha, self.beta) != 1:
            raise ValueError("weights must be coprime")
        if self.alpha > self.beta:
            raise ValueError("alpha must not exceed beta")

    @classmethod
    def of_variables(cls, wx, wy, gamma):
        if wx <= wy:
            return cls(wx, wy, gamma, False)
        return cls(wy, wx, gamma, True)

    @property
    def wx(self):
        return self.beta if self.swapped else self.alpha

    @property
    def wy(self):
        return self.alpha if self.swapped else self.beta

    def degree(self, i, j):
        return self.wx * i + self.wy * j

    def to_json(self):
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma, "swapped": self.swapped}


def infer_weights(f):
    """Coprime weight with all of supp(f) on one weighted-homogeneous line.

    Returns None when the support is not on such a line.
    """
    if f.is_zero():
        raise ZeroPolynomial("cannot infer weights of 0")
    if f.constant_term() != 0:
        raise ValueError("f must vanish at the origin")
    supp = f.support()
    if len(supp) == 1:
        i, j = supp[0]
        return Weight(1, 1, i + j)
    (i0, j0), (i1, j1) = supp[0], supp[1]
    di, dj = i1 - i0, j1 - j0
    if di * dj >= 0:
        return None
    g = gcd(abs(di), abs(dj))
    wx, wy = abs(dj) // g, abs(di) // g
    gamma = wx * i0 + wy * j0
    if any(wx * i + wy * j != gamma for i, j in supp):
        return None
    return Weight.of_variables(wx, wy, gamma)


def euler_check(f, w):
    lhs = BiPoly.monomial(1, 0, w.wx) * f.partial_x() + BiPoly.monomial(0, 1, w.wy) * f.partial_y()
    return lhs == f * w.gamma


def _monomials_below(n):
    return [(i, d - i) for d in range(n) for i in range(d + 1)]


@dataclass(frozen=True)
class MembershipCertificate:
    member: bool
    jet_order: int
    cofactors: tuple = None  # (A, B) when member
    residual_order: int = None  # lowest failing jet order when not member

    def to_json(self):
        return {
            "member": self.member,
            "jet_order": self.jet_order,
            "label": f"up to jet order {self.jet_order}",
            "cofactors": None if self.cofactors is None else [p.to_str() for p in self.cofactors],
            "residual_order": self.residual_order,
        }


def _membership_system(f, g1, g2, n):
    monos = _monomials_below(n)
    index = {m: k for k, m in enumerate(monos)}
    cols = []
    for g in (g1, g2):
        for (i, j) in monos:
            col = [Fraction(0)] * len(monos)
            for (a, b), c in g.terms.items():
                k = index.get((a + i, b + j))
                if k is not None:
                    col[k] += c
            cols.append(col)
    rows = [[cols[c][r] for c in range(len(cols))] for r in range(len(monos))]
    rhs = [f.coeff(*m) for m in monos]
    return monos, rows, rhs


def _solve_membership(f, g1, g2, n):
    monos, rows, rhs = _membership_system(f, g1, g2, n)
    x = linalg.solve(rows, rhs)
    if x is None:
        return None
    k = len(monos)
    a = BiPoly({m: x[t] for t, m in enumerate(monos)})
    b = BiPoly({m: x[k + t] for t, m in enumerate(monos)})
    return a, b


def ideal_membership(f, g1, g2, n):
    """Decide f in (g1, g2) modulo terms of total degree >= n."""
    if n < 1:
        raise ValueError("jet order must be at least 1")
    sol = _solve_membership(f, g1, g2, n)
    if sol is not None:
        return MembershipCertificate(True, n, sol, None)
    for m in range(1, n + 1):
        if _solve_membership(f, g1, g2, m) is None:
            return MembershipCertificate(False, n, None, m)
    raise AssertionError("unreachable")  # pragma: no cover


def jacobian_membership(f, n):
    from .errors import NonIsolated

    fx, fy = f.partial_x(), f.partial_y()
    if fx.is_zero() or fy.is_zero() or not gcd_bipoly(fx, fy).is_constant():
        raise NonIsolated("partial derivatives share a factor")
    return ideal_membership(f, fx, fy, n)


# Takens normal form ---------------------------------------------------------


def rotational_form(w):
    """The form wy*x dy - wx*y dx (beta u dv - alpha v du for unswapped weights)."""
    return OneForm(BiPoly.monomial(0, 1, -w.wx), BiPoly.monomial(1, 0, w.wy))


def _form_degrees(omega, w):
    degs = set()
    for (i, j) in omega.a.terms:
        degs.add(w.degree(i + 1, j))
    for (i, j) in omega.b.terms:
        degs.add(w.degree(i, j + 1))
    return degs


def form_part(omega, w, d):
    """Weighted-homogeneous component of degree d."""
    return OneForm(omega.a.weighted_part(w.wx, w.wy, d, w.wx), omega.b.weighted_part(w.wx, w.wy, d, w.wy))


def _weighted_monomials(w, d):
    if d < 0:
        return []
    return [(i, j) for i in range(d // w.wx + 1) for j in range((d - w.wx * i) // w.wy + 1) if w.degree(i, j) == d]


@dataclass(frozen=True)
class TakensData:
    g: BiPoly
    h: BiPoly
    f: BiPoly
    weight: Weight
    order: int

    def residual(self, omega):
        rot = rotational_form(self.weight)
        df = OneForm.exact(self.f)
        return omega.scale(self.g) - df - rot.scale(self.h)

    def residual_order(self, omega):
        """Lowest weighted degree present in the residual (None if zero)."""
        degs = _form_degrees(self.residual(omega), self.weight)
        return min(degs) if degs else None

    def to_json(self):
        return {
            "weight": self.weight.to_json(),
            "order": self.order,
            "g": self.g.to_str(),
            "h": self.h.to_str(),
            "f": self.f.to_str(),
        }


def _solve_graded(columns, target, w, d):
    """Solve sum_k x_k * columns[k] = target in degree d; columns are OneForms."""
    keys = sorted(
        {("a", m) for c in columns + [target] for m in c.a.terms} | {("b", m) for c in columns + [target] for m in c.b.terms}
    )
    if not keys:
        return [Fraction(0)] * len(columns)
    rows = []
    for side, m in keys:
        rows.append([(c.a if side == "a" else c.b).coeff(*m) for c in columns])
    rhs = [(target.a if side == "a" else target.b).coeff(*m) for side, m in keys]
    if not columns:
        return [] if all(v == 0 for v in rhs) else None
    return linalg.min_norm_solve(rows, rhs)


def takens_normal_form(omega, w, n):
    """Compute (g, f, h) with g*omega = df + h*rot through weighted order n.

    Solved degree by degree; underdetermined systems take the minimal-norm
    solution in the monomial basis.
    """
    if n < 1:
        raise ValueError("order must be at least 1")
    omega.check_isolated()
    rot = rotational_form(w)
    degs = _form_degrees(omega, w)
    gamma = min(degs)
    parts = {d: form_part(omega, w, d) for d in range(gamma, n + 1)}

    # lowest degree: omega_gamma = df + h0 * rot
    fmonos = _weighted_monomials(w, gamma)
    hmonos = _weighted_monomials(w, gamma - w.wx - w.wy)
    columns = [OneForm.exact(BiPoly.monomial(*m)) for m in fmonos]
    columns += [rot.scale(BiPoly.monomial(*m)) for m in hmonos]
    sol = _solve_graded(columns, parts[gamma], w, gamma)
    if sol is None:
        raise NotQuasiHomogeneousType(f"lowest part of degree {gamma} is not df + h*rot")
    f = BiPoly({m: sol[k] for k, m in enumerate(fmonos)})
    if f.is_zero():
        raise NotQuasiHomogeneousType("lowest part has no exact component")
    h = BiPoly({m: sol[len(fmonos) + k] for k, m in enumerate(hmonos)})
    g = BiPoly.const(1)

    for d in range(gamma + 1, n + 1):
        known = OneForm(BiPoly(), BiPoly())
        for (i, j), c in g.terms.items():
            k = w.degree(i, j)
            part = parts.get(d - k)
            if part is not None:
                known = known + part.scale(BiPoly.monomial(i, j, c))
        gmonos = _weighted_monomials(w, d - gamma)
        hmonos = _weighted_monomials(w, d - w.wx - w.wy)
        columns = [parts[gamma].scale(BiPoly.monomial(*m)) for m in gmonos]
        columns += [rot.scale(BiPoly.monomial(*m, -1)) for m in hmonos]
        sol = _solve_graded(columns, OneForm(-known.a, -known.b), w, d)
        if sol is None:
            raise NotQuasiHomogeneousType(f"graded system unsolvable in weighted degree {d}")
        g = g + BiPoly({m: sol[k] for k, m in enumerate(gmonos)})
        h = h + BiPoly({m: sol[len(gmonos) + k] for k, m in enumerate(hmonos)})
    return TakensData(g, h, f, w, n)
