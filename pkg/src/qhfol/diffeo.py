"""Truncated germs of diffeomorphisms of (C, 0) and simultaneous conjugacy.

Coefficients are either all exact (``Fraction``) or all complex floats.
Composition convention: ``f.compose(g)`` is ``f o g``.
"""

import cmath
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import least_squares

from .algebra import Jet1
from .errors import NonInvertible, OrderMismatch

INVERTIBLE_FLOOR = 1e-12


@dataclass(frozen=True)
class JetDiffeo:
    order: int
    coeffs: tuple  # c_1 .. c_N
    error: float = 0.0

    def __post_init__(self):
        if len(self.coeffs) != self.order:
            raise ValueError("need exactly N coefficients c_1..c_N")

    @classmethod
    def identity(cls, n, exact=True):
        one, zero = (Fraction(1), Fraction(0)) if exact else (1 + 0j, 0j)
        return cls(n, (one,) + (zero,) * (n - 1))

    @classmethod
    def from_list(cls, coeffs, n=None, error=0.0):
        coeffs = list(coeffs)
        n = len(coeffs) if n is None else n
        zero = Fraction(0) if all(isinstance(c, (int, Fraction)) for c in coeffs) else 0j
        coeffs = (coeffs + [zero] * n)[:n]
        return cls(n, tuple(coeffs), error)

    @property
    def exact(self):
        return all(isinstance(c, (int, Fraction)) for c in self.coeffs)

    @property
    def multiplier(self):
        return self.coeffs[0]

    def jet(self):
        zero = Fraction(0) if self.exact else 0j
        return Jet1(self.order, (zero,) + tuple(self.coeffs))

    @classmethod
    def from_jet(cls, j, error=0.0):
        return cls(j.order, tuple(j.coeffs[1:]), error)

    def _check(self, other):
        if other.order != self.order:
            raise OrderMismatch(f"orders {self.order} and {other.order} differ")

    def compose(self, inner):
        """self o inner, truncated at order N."""
        self._check(inner)
        out = self.jet().compose(inner.jet())
        err = self.error + abs(complex(self.coeffs[0])) * inner.error
        return JetDiffeo.from_jet(out, err)

    def _require_invertible(self):
        if abs(complex(self.coeffs[0])) < INVERTIBLE_FLOOR:
            raise NonInvertible("linear coefficient is (numerically) zero")

    def invert(self):
        """Order-by-order inverse g with self o g = id."""
        self._require_invertible()
        n = self.order
        c1 = self.coeffs[0]
        zero = Fraction(0) if self.exact else 0j
        g = [1 / c1] + [zero] * (n - 1)
        for k in range(2, n + 1):
            trial = JetDiffeo(n, tuple(g))
            kth = self.compose(trial).coeffs[k - 1]
            # coefficient of z^k in self o g is c1 * g_k + (terms in g_j, j < k)
            g[k - 1] = -kth / c1
        inv_err = self.error / max(abs(complex(c1)), INVERTIBLE_FLOOR) ** 2
        return JetDiffeo(n, tuple(g), inv_err)

    def conjugate(self, phi):
        """phi o self o phi^-1."""
        return phi.compose(self.compose(phi.invert()))

    def evaluate(self, z):
        return self.jet().evaluate(z)

    def scaled(self, rho):
        """Coefficients of z -> f(rho z) / rho."""
        return JetDiffeo(self.order, tuple(c * rho ** k for k, c in enumerate(self.coeffs)), self.error)

    def truncate(self, n):
        return JetDiffeo(n, self.coeffs[:n], self.error)

    def distance(self, other):
        self._check(other)
        return max(abs(complex(a) - complex(b)) for a, b in zip(self.coeffs, other.coeffs))

    def to_json(self):
        if self.exact:
            coeffs = [str(c) for c in self.coeffs]
        else:
            coeffs = [[complex(c).real, complex(c).imag] for c in self.coeffs]
        return {"order": self.order, "exact": self.exact, "coeffs": coeffs, "error": self.error}

    @classmethod
    def from_json(cls, data):
        if data["exact"]:
            coeffs = tuple(Fraction(c) for c in data["coeffs"])
        else:
            coeffs = tuple(complex(re, im) for re, im in data["coeffs"])
        return cls(data["order"], coeffs, data.get("error", 0.0))


def jet_group(op, *args):
    if op == "compose":
        f, g = args
        return f.compose(g)
    if op == "invert":
        (f,) = args
        return f.invert()
    if op == "conjugate":
        f, phi = args
        return f.conjugate(phi)
    raise ValueError(f"unknown jet operation {op!r}")


# same-holonomy test ---------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    conjugate: bool
    phi: JetDiffeo = None
    residuals: tuple = ()  # per generator, per order (scaled coordinates)
    obstruction: tuple = None  # (order, generator index)
    pairing: tuple = ()
    tol: float = 0.0
    order: int = 0

    def to_json(self):
        return {
            "conjugate": self.conjugate,
            "order": self.order,
            "tol": self.tol,
            "pairing": list(self.pairing),
            "phi": None if self.phi is None else self.phi.to_json(),
            "residuals": [list(r) for r in self.residuals],
            "obstruction": None if self.obstruction is None else list(self.obstruction),
        }


def _complex_coeffs(j, n):
    return np.array([complex(c) for c in j.coeffs[:n]], dtype=complex)


def _series_compose(outer, inner, n):
    """Coefficients 1..n of outer o inner for coefficient arrays c_1..c_n."""
    res = np.zeros(n + 1, dtype=complex)
    power = np.zeros(n + 1, dtype=complex)
    power[0] = 1
    inner_full = np.concatenate([[0], inner[:n]])
    for k in range(1, n + 1):
        power = np.convolve(power, inner_full)[: n + 1]
        res += outer[k - 1] * power
    return res[1:]


def _solve_psi(fs, gs, n):
    """Tangent-to-identity psi with psi o f_i ~ g_i o psi, order by order.

    ``fs``/``gs``: lists of coefficient arrays with equal multipliers.
    Returns (psi coefficients, complex defects[i][k-1]).
    """
    psi = np.zeros(n, dtype=complex)
    psi[0] = 1
    for k in range(2, n + 1):
        rows, rhs = [], []
        psi[k - 1] = 0
        for f, g in zip(fs, gs):
            lhs0 = _series_compose(psi, f, k)[k - 1]
            rhs0 = _series_compose(g, psi, k)[k - 1]
            # d/d psi_k of (psi o f - g o psi)_k = f_1^k - g_1
            rows.append(f[0] ** k - g[0])
            rhs.append(rhs0 - lhs0)
        rows, rhs = np.array(rows), np.array(rhs)
        scale = np.max(np.abs(rows))
        if scale > 1e-9:
            psi[k - 1] = np.vdot(rows, rhs) / np.vdot(rows, rows)
        # resonant order: minimal-norm choice psi_k = 0
    diffs = [_series_compose(psi, f, n) - _series_compose(g, psi, n) for f, g in zip(fs, gs)]
    return psi, np.array(diffs)


def _rescale(g, c, n):
    """Coefficients of z -> g(c z) / c."""
    return np.array([g[k] * c**k for k in range(n)], dtype=complex)


def _fit_for_c(fs, gs, c, n):
    gcs = [_rescale(g, c, n) for g in gs]
    return _solve_psi(fs, gcs, n)


def _order2_c(fs, gs):
    """Least-squares (psi_2, c) from the order-2 equations; None if undetermined."""
    a = np.array([[f[0] ** 2 - f[0], -g[1]] for f, g in zip(fs, gs)], dtype=complex)
    b = np.array([-f[1] for f in fs], dtype=complex)
    if np.linalg.matrix_rank(a, tol=1e-9) < 2:
        return None
    sol = np.linalg.lstsq(a, b, rcond=None)[0]
    c = sol[1]
    return c if abs(c) > 1e-9 else None


def _best_c(fs, gs, n):
    cands = [1 + 0j]
    c2 = _order2_c(fs, gs) if n >= 2 else None
    if c2 is not None:
        cands.append(complex(c2))
    best = None
    for c0 in cands:
        def resid(p):
            c = complex(p[0], p[1])
            if abs(c) < 1e-12:
                return np.full(2 * len(fs) * n, 1e6)
            _, r = _fit_for_c(fs, gs, c, n)
            return np.concatenate([r.real.ravel(), r.imag.ravel()])

        if n >= 2:
            out = least_squares(resid, [c0.real, c0.imag], xtol=1e-15, ftol=1e-15, gtol=1e-15)
            c = complex(out.x[0], out.x[1])
        else:
            c = c0
        psi, r = _fit_for_c(fs, gs, c, n)
        if n >= 2:
            c, psi, r = _refine_joint(fs, gs, c, psi, n)
        r = np.abs(r)
        score = float(np.max(r)) if r.size else 0.0
        if best is None or score < best[0] - 1e-15:
            best = (score, c, psi, r)
    return best


def _joint_defects(fs, gs, c, psi, n):
    gcs = [_rescale(g, c, n) for g in gs]
    return np.array([_series_compose(psi, f, n) - _series_compose(g, psi, n) for f, g in zip(fs, gcs)])


def _refine_joint(fs, gs, c, psi, n):
    """Least squares over (c, psi_2..psi_n) together.

    Resonant orders leave psi_k free in their own equation, yet a parabolic
    generator pins it at order k + 1; the per-order sweep cannot see that.
    """

    def unpack(p):
        z = p[0::2] + 1j * p[1::2]
        return z[0], np.concatenate([[1 + 0j], z[1:]])

    def resid(p):
        cc, ps = unpack(p)
        if abs(cc) < 1e-12:
            return np.full(2 * len(fs) * n, 1e6)
        r = _joint_defects(fs, gs, cc, ps, n)
        return np.concatenate([r.real.ravel(), r.imag.ravel()])

    start = np.concatenate([[c], psi[1:]])
    p0 = np.empty(2 * len(start))
    p0[0::2], p0[1::2] = start.real, start.imag
    before = resid(p0)
    out = least_squares(resid, p0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    if np.max(np.abs(out.fun)) >= np.max(np.abs(before)):
        return c, psi, _joint_defects(fs, gs, c, psi, n)
    cc, ps = unpack(out.x)
    return cc, ps, _joint_defects(fs, gs, cc, ps, n)


def _generators(rep):
    return rep.generators if hasattr(rep, "generators") else list(rep)


def _jets(rep):
    return [g if isinstance(g, JetDiffeo) else g.diffeo for g in _generators(rep)]


def _rep_rho(rep):
    return getattr(rep, "rho", 1.0)


def _rep_error(rep):
    errs = [g.error for g in _jets(rep)]
    return max(errs) if errs else 0.0


def _conjugacy(jets0, jets1, n, tol, rho):
    fs = [_complex_coeffs(j.scaled(rho), n) for j in jets0]
    gs = [_complex_coeffs(j.scaled(rho), n) for j in jets1]
    # order 1: multipliers must agree (linear centralizer is free)
    for i, (f, g) in enumerate(zip(fs, gs)):
        if abs(f[0] - g[0]) > tol:
            res = [[abs(ff[0] - gg[0])] for ff, gg in zip(fs, gs)]
            return None, res, (1, i)
    if n == 1:
        return JetDiffeo(1, (1 + 0j,)), [[0.0] for _ in fs], None
    _, c, psi, r = _best_c(fs, gs, n)
    # phi = c psi in scaled coordinates
    phi_scaled = c * psi
    res = r.tolist()
    for k in range(n):
        for i in range(len(fs)):
            if r[i, k] > tol:
                return None, res, (k + 1, i)
    phi = JetDiffeo(n, tuple(complex(phi_scaled[k] / rho**k) for k in range(n)))
    return phi, res, None


def candidate_pairings(m, search=False):
    """Identity pairing, or all cyclic rotations and reversals for m <= 6."""
    ident = tuple(range(m))
    if not search:
        return [ident]
    if m > 6:
        raise ValueError("pairing search is limited to at most 6 generators")
    out = []
    for r in range(m):
        rot = tuple((i + r) % m for i in range(m))
        out.append(rot)
        out.append(tuple(reversed(rot)))
    seen, uniq = set(), []
    for p in out:
        if p not in seen:
            seen.add(p)
            uniq.append(p)
    return uniq


def same_holonomy_test(rep0, rep1, pairing=None, n=5, tol=None, search=False):
    """Find phi with phi o g0_i = g1_{pairing[i]} o phi through order n.

    ``rep0``/``rep1`` are HolonomyRep objects or plain lists of JetDiffeo.
    Comparisons use coefficients scaled by rho^k, rho the smaller fit radius.
    """
    j0, j1 = _jets(rep0), _jets(rep1)
    if len(j0) != len(j1):
        raise OrderMismatch(f"generator counts {len(j0)} and {len(j1)} differ")
    for j in j0 + j1:
        if j.order < n:
            raise OrderMismatch(f"jet of order {j.order} cannot be compared at order {n}")
    if tol is None:
        tol = 100 * max(_rep_error(rep0), _rep_error(rep1), 1e-12)
    rho = min(_rep_rho(rep0), _rep_rho(rep1))
    pairings = [tuple(pairing)] if pairing is not None else candidate_pairings(len(j0), search)
    first = None
    for p in pairings:
        phi, res, obstruction = _conjugacy(j0, [j1[k] for k in p], n, tol, rho)
        verdict = Verdict(phi is not None, phi, tuple(tuple(r) for r in res), obstruction, p, tol, n)
        if phi is not None:
            return verdict
        first = first or verdict
    return first


def commutes(phi, gens, n, rho=1.0, tol=1e-9):
    """phi commutes with every generator through order n (scaled coordinates)."""
    for g in gens:
        a = phi.truncate(n).compose(g.truncate(n)).scaled(rho)
        b = g.truncate(n).compose(phi.truncate(n)).scaled(rho)
        if a.distance(b) > tol:
            return False
    return True


def rotate_multiplier(jet, angle):
    """Multiply the linear coefficient by e^{i angle} (a deliberately wrong rep)."""
    coeffs = list(jet.coeffs)
    coeffs[0] = complex(coeffs[0]) * cmath.exp(1j * angle)
    return JetDiffeo(jet.order, tuple(coeffs), jet.error)


__all__ = [
    "JetDiffeo",
    "Verdict",
    "candidate_pairings",
    "commutes",
    "jet_group",
    "rotate_multiplier",
    "same_holonomy_test",
]

