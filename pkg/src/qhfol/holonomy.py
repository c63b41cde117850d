"""Numerical projective holonomy on the central component.

Holonomy coordinates: ``u`` runs along the component, ``v`` is transverse,
and the component is ``{v = 0}``.  A leaf over a path ``u(tau)`` solves
``dv/dtau = -a(u, v) u'(tau) / b(u, v)`` for the form ``a du + b dv``.

The holonomy of a loop maps the start offset ``v0`` on the fibre
``{u = u0}`` to the end point of the lifted path.  Composition follows path
order: the holonomy of "gamma1 then gamma2" is ``h2 o h1``.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

from . import blowup as bu
from .algebra import AlgPoint
from .desing import central_component, resolve_foliation
from .diffeo import JetDiffeo
from .errors import IllConditionedFit, LeafEscaped, SingularFiberHit, ToleranceNotMet


@dataclass(frozen=True)
class NumericForm:
    """a du + b dv with complex coefficients, terms as ((i, j), c) for u^i v^j."""

    a: tuple
    b: tuple

    @classmethod
    def from_dicts(cls, a, b):
        return cls(tuple(sorted((k, complex(c)) for k, c in a.items())), tuple(sorted((k, complex(c)) for k, c in b.items())))

    @classmethod
    def from_chart(cls, omega):
        """Home chart form P ds + Q dt of E = {s = 0}, with u = t and v = s."""
        a = {(j, i): complex(c) for (i, j), c in omega.b.terms.items()}
        b = {(j, i): complex(c) for (i, j), c in omega.a.terms.items()}
        return cls.from_dicts(a, b)

    @classmethod
    def from_oneform(cls, omega):
        """Take an exact form in (u, v) coordinates as is."""
        return cls.from_dicts(dict(omega.a.terms), dict(omega.b.terms))

    @classmethod
    def linear_model(cls, lam):
        """u dv - lam v du."""
        return cls.from_dicts({(0, 1): -complex(lam)}, {(1, 0): 1})

    @staticmethod
    def _eval(terms, u, v):
        out = np.zeros_like(v)
        for (i, j), c in terms:
            out = out + c * u**i * v**j
        return out

    def eval_a(self, u, v):
        return self._eval(self.a, u, v)

    def eval_b(self, u, v):
        return self._eval(self.b, u, v)

    def to_json(self):
        enc = lambda terms: [[i, j, c.real, c.imag] for (i, j), c in terms]  # noqa: E731
        return {"a": enc(self.a), "b": enc(self.b)}

    @classmethod
    def from_json(cls, d):
        dec = lambda terms: tuple(((i, j), complex(re, im)) for i, j, re, im in terms)  # noqa: E731
        return cls(dec(d["a"]), dec(d["b"]))


# loops ------------------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    kind: str  # "line" | "arc"
    start: complex = 0j
    end: complex = 0j
    center: complex = 0j
    radius: float = 0.0
    theta0: float = 0.0
    theta1: float = 0.0

    def point(self, tau):
        if self.kind == "line":
            return self.start + (self.end - self.start) * tau
        th = self.theta0 + (self.theta1 - self.theta0) * tau
        return self.center + self.radius * cmath.exp(1j * th)

    def velocity(self, tau):
        if self.kind == "line":
            return self.end - self.start
        th = self.theta0 + (self.theta1 - self.theta0) * tau
        return 1j * self.radius * cmath.exp(1j * th) * (self.theta1 - self.theta0)

    def reversed(self):
        if self.kind == "line":
            return Segment("line", start=self.end, end=self.start)
        return Segment("arc", center=self.center, radius=self.radius, theta0=self.theta1, theta1=self.theta0)

    def to_json(self):
        c = lambda z: [z.real, z.imag]  # noqa: E731
        if self.kind == "line":
            return {"kind": "line", "start": c(self.start), "end": c(self.end)}
        return {
            "kind": "arc",
            "center": c(self.center),
            "radius": self.radius,
            "theta0": self.theta0,
            "theta1": self.theta1,
        }

    @classmethod
    def from_json(cls, d):
        z = lambda p: complex(p[0], p[1])  # noqa: E731
        if d["kind"] == "line":
            return cls("line", start=z(d["start"]), end=z(d["end"]))
        return cls("arc", center=z(d["center"]), radius=d["radius"], theta0=d["theta0"], theta1=d["theta1"])


@dataclass(frozen=True)
class LoopSpec:
    base: complex
    encircled: tuple  # labels of the marked points (parameters as strings)
    segments: tuple

    def reversed(self):
        return LoopSpec(self.base, self.encircled, tuple(s.reversed() for s in reversed(self.segments)))

    def then(self, other):
        return LoopSpec(self.base, self.encircled + other.encircled, self.segments + other.segments)

    def to_json(self):
        return {
            "base": [self.base.real, self.base.imag],
            "encircled": list(self.encircled),
            "segments": [s.to_json() for s in self.segments],
        }

    @classmethod
    def from_json(cls, d):
        return cls(complex(*d["base"]), tuple(d["encircled"]), tuple(Segment.from_json(s) for s in d["segments"]))


def circle_loop(center, radius, label="", turns=1):
    """Counterclockwise circle starting and ending at center + radius."""
    seg = Segment("arc", center=complex(center), radius=radius, theta0=0.0, theta1=2 * math.pi * turns)
    return LoopSpec(complex(center) + radius, (label,), (seg,))


def lasso(base, point, radius, label=""):
    """Straight tail to the circle of ``radius`` around ``point``, one ccw turn, back."""
    base, point = complex(base), complex(point)
    d = base - point
    theta = cmath.phase(d)
    touch = point + radius * cmath.exp(1j * theta)
    segs = []
    if abs(base - touch) > 1e-15:
        segs.append(Segment("line", start=base, end=touch))
    segs.append(Segment("arc", center=point, radius=radius, theta0=theta, theta1=theta + 2 * math.pi))
    if abs(base - touch) > 1e-15:
        segs.append(Segment("line", start=touch, end=base))
    return LoopSpec(base, (label,), tuple(segs))


def infinity_loop(base, radius, label="inf"):
    """Big clockwise circle |u| = radius (a positive turn around u = inf)."""
    base = complex(base)
    theta = cmath.phase(base) if base != 0 else 0.0
    touch = radius * cmath.exp(1j * theta)
    segs = (
        Segment("line", start=base, end=touch),
        Segment("arc", center=0j, radius=radius, theta0=theta, theta1=theta - 2 * math.pi),
        Segment("line", start=touch, end=base),
    )
    return LoopSpec(base, (label,), segs)


def _segment_distance(p, a, b):
    ab = b - a
    if ab == 0:
        return abs(p - a)
    t = max(0.0, min(1.0, ((p - a) * ab.conjugate()).real / abs(ab) ** 2))
    return abs(p - (a + t * ab))


def choose_base(points, samples=720):
    """Point on the unit circle maximising the clearance of the lasso tails.

    Clearance is the smallest distance from a marked point to the base or to
    a tail aimed at another marked point.  Deterministic.
    """
    best = None
    for k in range(samples):
        u0 = cmath.exp(2j * math.pi * k / samples)
        clear = min((abs(u0 - p) for p in points), default=1.0)
        for p in points:
            for q in points:
                if q is not p and q != p:
                    clear = min(clear, _segment_distance(q, u0, p))
        if best is None or clear > best[0] + 1e-12:
            best = (clear, u0)
    return best[1]


@dataclass(frozen=True)
class Transversal:
    chart: str
    base: complex
    radius: float  # leaves leaving |v| <= radius are reported as escaped

    def to_json(self):
        return {"chart": self.chart, "base": [self.base.real, self.base.imag], "radius": self.radius}


@dataclass(frozen=True)
class NumericParams:
    offsets: tuple = None  # explicit offsets; default is the geometric ladder
    rtol: float = 1e-10
    max_step: float = np.inf
    order: int = 8
    halving_factor: float = 1e-6
    rho: float = None  # ladder top; None = automatic
    escape_radius: float = None  # None = 1000 * rho
    ladder_ratio: float = 0.5
    b_floor: float = 1e-14

    def ladder(self, rho):
        if self.offsets is not None:
            return tuple(complex(v) for v in self.offsets)
        return tuple(complex(rho * self.ladder_ratio**k) for k in range(2 * self.order + 1))


# integration ------------------------------------------------------------------


def _integrate(form, loop, v0s, rtol, max_step, escape, b_floor):
    v = np.asarray(v0s, dtype=complex).copy()
    scale = np.maximum(np.abs(v), 1e-300)
    for seg in loop.segments:

        def rhs(tau, y, seg=seg):
            u = seg.point(tau)
            b = form.eval_b(u, y)
            if np.min(np.abs(b)) < b_floor:
                raise SingularFiberHit(f"|b| below {b_floor} at u = {u:.6g}")
            return -form.eval_a(u, y) * seg.velocity(tau) / b

        def escaped(tau, y):
            return escape - np.max(np.abs(y))

        escaped.terminal = True
        sol = solve_ivp(
            rhs,
            (0.0, 1.0),
            v,
            method="DOP853",
            rtol=rtol,
            atol=rtol * 1e-3 * scale,
            max_step=max_step,
            events=escaped,
        )
        if sol.status == 1:
            raise LeafEscaped(f"leaf left |v| <= {escape}")
        if not sol.success:
            raise ToleranceNotMet(f"integrator failed: {sol.message}")
        v = sol.y[:, -1]
    return v


def _escape(params, v0s):
    return params.escape_radius or 1e3 * max(abs(v) for v in v0s)


def lift_offsets(form, loop, v0s, params, escape=None):
    """End points of the lifts of all offsets, with step-halving discrepancies."""
    escape = escape if escape is not None else _escape(params, v0s)
    coarse = _integrate(form, loop, v0s, params.rtol, params.max_step, escape, params.b_floor)
    fine = _integrate(form, loop, v0s, params.rtol / 256, params.max_step, escape, params.b_floor)
    disc = np.abs(coarse - fine)
    rel = disc / np.maximum(np.abs(fine), 1e-300)
    if np.max(rel) > params.halving_factor:
        raise ToleranceNotMet(f"step halving changed the lift by {np.max(rel):.3g} (relative)")
    return fine, coarse, disc


def lift_path(form, loop, v0, params=None):
    """End point of the leaf through (u0, v0) lifted along ``loop``."""
    params = params or NumericParams()
    fine, _, _ = lift_offsets(form, loop, [v0], params)
    return complex(fine[0])


def _fit_jet(v0s, values, n, rho):
    z = np.asarray(v0s) / rho
    if len(set(np.round(z, 15))) < n or len(z) < n:
        raise IllConditionedFit(f"{len(z)} offsets cannot determine {n} coefficients")
    # h(rho z) / (rho z) = sum_k d_k z^(k-1)
    mat = np.vander(z, n, increasing=True)
    rhs = np.asarray(values) / (rho * z)
    sol, _, rank, sv = np.linalg.lstsq(mat, rhs, rcond=None)
    if rank < n or sv[-1] / sv[0] < 1e-15:
        raise IllConditionedFit("offset ladder is degenerate")
    resid = np.max(np.abs(mat @ sol - rhs)) if len(z) > n else 0.0
    return sol, float(resid)


@dataclass(frozen=True)
class Generator:
    loop: LoopSpec
    diffeo: JetDiffeo
    error: float
    label: str = ""
    lam: object = None  # divisor-relative ratio of the encircled point, if known

    def to_json(self):
        return {
            "label": self.label,
            "lambda": None if self.lam is None else _enc_lam(self.lam),
            "loop": self.loop.to_json(),
            "jet": self.diffeo.to_json(),
            "error": self.error,
        }


def _enc_lam(lam):
    if isinstance(lam, AlgPoint):
        return {"algpoint": lam.to_json()}
    if isinstance(lam, Fraction):
        return str(lam)
    z = complex(lam)
    return [z.real, z.imag]


def _dec_lam(d):
    if d is None:
        return None
    if isinstance(d, dict):
        return AlgPoint.from_json(d["algpoint"])
    if isinstance(d, str):
        return Fraction(d)
    return complex(d[0], d[1])


def holonomy_generator(form, loop, params=None, rho=None):
    """Fit a jet to the holonomy of ``loop``; returns (JetDiffeo, error, rho).

    The error is the larger of the fit residual and twice the jet changes
    between the lifts at rtol, rtol/256 and rtol/512, in coordinates scaled
    by rho.
    """
    params = params or NumericParams()
    n = params.order
    rho = rho or params.rho or 0.05
    v0s = params.ladder(rho)
    fine, coarse, _ = lift_offsets(form, loop, v0s, params)
    d_fine, resid = _fit_jet(v0s, fine, n, rho)
    d_coarse, _ = _fit_jet(v0s, coarse, n, rho)
    # the fine lift sits near the round-off floor; measure it by halving once more
    finer = _integrate(form, loop, v0s, params.rtol / 512, params.max_step, _escape(params, v0s), params.b_floor)
    d_finer, _ = _fit_jet(v0s, finer, n, rho)
    spread = max(float(np.max(np.abs(d_fine - d_coarse))), float(np.max(np.abs(d_fine - d_finer))))
    # jets at the noise floor may straddle the true one: keep a factor 2
    err = max(resid, 2 * spread, 1e-16)
    coeffs = tuple(complex(d_fine[k] / rho**k) for k in range(n))
    return JetDiffeo(n, coeffs, err), err, rho


def auto_generator(form, loop, params, rho0, tries=8):
    """holonomy_generator, halving rho when the leaf escapes or hits a bad fibre."""
    rho = rho0
    last = None
    for _ in range(tries):
        try:
            return holonomy_generator(form, loop, params, rho)
        except (LeafEscaped, SingularFiberHit) as e:
            last = e
            rho /= 2
    raise last


# representation -----------------------------------------------------------------


@dataclass(frozen=True)
class HolonomyRep:
    transversal: Transversal
    generators: tuple
    rho: float
    form: NumericForm = None
    central: int = None
    product: JetDiffeo = None  # composite in loop order (reported only)

    def to_json(self):
        return {
            "transversal": self.transversal.to_json(),
            "central": self.central,
            "rho": self.rho,
            "generators": [g.to_json() for g in self.generators],
            "product": None if self.product is None else self.product.to_json(),
            "form": None if self.form is None else self.form.to_json(),
        }

    @classmethod
    def from_json(cls, d):
        t = d["transversal"]
        gens = tuple(
            Generator(
                LoopSpec.from_json(g["loop"]),
                JetDiffeo.from_json(g["jet"]),
                g["error"],
                g.get("label", ""),
                _dec_lam(g.get("lambda")),
            )
            for g in d["generators"]
        )
        prod = JetDiffeo.from_json(d["product"]) if d.get("product") else None
        form = NumericForm.from_json(d["form"]) if d.get("form") else None
        return cls(Transversal(t["chart"], complex(*t["base"]), t["radius"]), gens, d["rho"], form, d.get("central"), prod)


def _numeric_param(p):
    if isinstance(p, AlgPoint):
        return p.numeric
    return complex(p)


def central_marked_points(tree):
    """Marked points of the central component: [(param, numeric abscissa | None, lambda)]."""
    c = tree.central if tree.central is not None else central_component(tree)
    out = []
    for m in tree.marked_points:
        if m.comp != c:
            continue
        lam = m.sing.lam if m.sing is not None else None
        out.append((m.param, None if m.param == bu.INF else _numeric_param(m.param), lam))
    return c, out


def standard_loops(points, base=None):
    """One loop per marked point: lassos ordered ccw around the base, inf last."""
    finite = [(p, z, lam) for p, z, lam in points if z is not None]
    zs = [z for _, z, _ in finite]
    u0 = base if base is not None else choose_base(zs)
    finite.sort(key=lambda it: cmath.phase((it[1] - u0) / (-u0 if u0 != 0 else 1)) % (2 * math.pi))
    loops = []
    for p, z, lam in finite:
        others = [abs(z - w) for w in zs if w != z] + [abs(z - u0)]
        tails = [_segment_distance(z, u0, w) for w in zs if w != z]
        r = 0.3 * min(others + [x for x in tails if x > 0] + [1.0])
        loops.append((lasso(u0, z, r, bu.param_str(p)), lam))
    for p, z, lam in points:
        if z is None:
            big = 2.0 * max([abs(w) for w in zs] + [abs(u0)]) + 1.0
            loops.append((infinity_loop(u0, big, bu.INF), lam))
    return u0, loops


def holonomy_rep(omega, params=None, jobs=1):
    """Generators of the projective holonomy of the central component."""
    params = params or NumericParams()
    tree = resolve_foliation(omega, min_blowups=1)
    central, points = central_marked_points(tree)
    chart = tree.chart(tree.component(central).home_chart)
    form = NumericForm.from_chart(chart.omega)
    return rep_from_form(form, points, params, chart.id, central, jobs)


def rep_from_form(form, points, params, chart_id="0", central=None, jobs=1, base=None):
    u0, loops = standard_loops(points, base)
    rho0 = params.rho or 0.05

    def run(item):
        loop, lam = item
        jet, err, rho = auto_generator(form, loop, params, rho0)
        return Generator(loop, jet, err, loop.encircled[0], lam), rho

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(run, loops))
    else:
        results = [run(it) for it in loops]
    gens = tuple(g for g, _ in results)
    rho = min([r for _, r in results] + [rho0])
    product = None
    if gens:
        product = gens[0].diffeo
        for g in gens[1:]:
            product = g.diffeo.compose(product)
    escape = params.escape_radius or 1e3 * rho
    return HolonomyRep(Transversal(chart_id, u0, escape), gens, rho, form, central, product)


def linear_law_defect(gen):
    """|c1 - exp(2 pi i lambda)| for a generator with known lambda."""
    lam = gen.lam
    if lam is None:
        return None
    if isinstance(lam, AlgPoint):
        lam = lam.numeric
    return abs(complex(gen.diffeo.coeffs[0]) - cmath.exp(2j * math.pi * complex(lam)))

