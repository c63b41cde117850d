"""Point blow-ups, chart atlas and dual-tree bookkeeping.

Every blow-up of a point ``p = (u0, v0)`` of a chart with coordinates
``(u, v)`` creates a component ``E`` and two charts:

* ``<k>a`` (home chart of ``E``): ``(u, v) = (u0 + s, v0 + s t)``, ``E = {s = 0}``,
  parametrised by ``t``;
* ``<k>b`` (chart at infinity): ``(u, v) = (u0 + s t, v0 + t)``, ``E = {t = 0}``;
  only its origin (``t = inf`` on ``E``) is not seen by the home chart.

Points of a component are named by their parameter in the home chart
(a ``Fraction``, an :class:`AlgPoint`, or :data:`INF`).  A chart records,
for each component that is one of its coordinate axes, a Moebius map
turning the coordinate along that axis into the component parameter.
"""

from dataclasses import dataclass, replace
from fractions import Fraction

from .algebra import X, Y, AlgPoint, BiPoly, gcd_bipoly, isolate_roots
from .errors import Dicritical, IrrationalCenter, NonReducedCurve, NotAPoint
from .forms import OneForm

INF = "inf"

_ID_MOBIUS = (Fraction(1), Fraction(0), Fraction(0), Fraction(1))
_INV_MOBIUS = (Fraction(0), Fraction(1), Fraction(1), Fraction(0))


def mobius_apply(m, s):
    a, b, c, d = m
    if s == INF:
        return a / c if c else INF
    den = c * s + d
    if den == 0:
        return INF
    return (a * s + b) / den


def _mobius_shift(m, s0):
    """m(s0 + s) as a Moebius map of s."""
    a, b, c, d = m
    return (a, a * s0 + b, c, c * s0 + d)


def param_str(p):
    return INF if p == INF else str(p)


@dataclass(frozen=True)
class AxisEntry:
    comp: int
    axis: str  # "u": component is {u = 0}; "v": component is {v = 0}
    mobius: tuple

    def param_at(self, u, v):
        return mobius_apply(self.mobius, v if self.axis == "u" else u)


@dataclass(frozen=True)
class Chart:
    id: str
    x_map: BiPoly
    y_map: BiPoly
    divisor_locals: tuple
    f: BiPoly = None
    omega: OneForm = None
    epoch: int = 0  # number of components when the chart was created

    def axis_of(self, comp):
        for e in self.divisor_locals:
            if e.comp == comp:
                return e
        return None

    def axis_comp(self, axis):
        for e in self.divisor_locals:
            if e.axis == axis:
                return e.comp
        return None

    def divisor_exponents(self, poly):
        """Powers (a, b) of u and v that are divisor factors of ``poly``."""
        a = poly.x_order() if self.axis_comp("u") is not None else 0
        b = poly.y_order() if self.axis_comp("v") is not None else 0
        return a, b

    def strict(self, poly):
        return poly.shift_down(*self.divisor_exponents(poly))


@dataclass(frozen=True)
class Component:
    id: int
    self_intersection: int
    creation_index: int
    multiplicity_curve: int
    multiplicity_form: int
    home_chart: str
    inf_chart: str
    corners: tuple = ()  # ((param, neighbour id), ...)
    dicritical: bool = False

    def corner_params(self):
        return [p for p, _ in self.corners]

    def neighbour_at(self, param):
        for p, n in self.corners:
            if p == param:
                return n
        return None


@dataclass(frozen=True)
class PointOnDivisor:
    chart: str
    u: object
    v: object


@dataclass(frozen=True)
class MarkedPoint:
    comp: int
    param: object
    kind: str  # corner | separatrix-attachment | foliation-singularity | axis-attachment
    chart: str
    coords: tuple
    neighbour: int = None
    sing: object = None  # desing.SingClass, filled in by classification


@dataclass(frozen=True)
class Branch:
    id: int
    comp: int
    param: object
    axis: str = None  # "x=0" / "y=0" when the branch is a coordinate axis


@dataclass(frozen=True)
class ResolutionTree:
    components: tuple = ()
    adjacency: frozenset = frozenset()
    charts: tuple = ()
    marked_points: tuple = ()
    separatrix_branches: tuple = ()
    central: int = None
    root_blown: bool = False
    with_axes: bool = False
    history: tuple = ()  # blow-up centres in order: (chart id, u, v)

    def chart(self, cid):
        for c in self.charts:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def component(self, k):
        return self.components[k - 1]

    def edges(self):
        return sorted(tuple(sorted(e)) for e in self.adjacency)

    def neighbours(self, k):
        return sorted(j for e in self.adjacency if k in e for j in e if j != k)

    @property
    def f(self):
        return self.chart("0").f

    @property
    def omega(self):
        return self.chart("0").omega


def initial_tree(f=None, omega=None, with_axes=False):
    """Tree with no components: the root chart (x, y) carrying f and omega."""
    if f is not None:
        if f.is_zero():
            raise NonReducedCurve("zero polynomial")
        g = gcd_bipoly(gcd_bipoly(f, f.partial_x()), f.partial_y()) if not f.is_constant() else BiPoly.const(1)
        if not g.is_constant():
            raise NonReducedCurve(f"{f} has the repeated factor {g}")
    if omega is not None:
        omega.check_isolated()
    root = Chart("0", X, Y, (), f, omega, 0)
    return ResolutionTree(charts=(root,), with_axes=with_axes)


def _as_rational(c):
    if isinstance(c, AlgPoint):
        if c.is_rational():
            return c.rational_value()
        raise IrrationalCenter(f"centre coordinate {c} is irrational")
    if isinstance(c, complex) or isinstance(c, float):
        raise IrrationalCenter("centres must be exact rationals")
    return Fraction(c)


def _pull_form(omega, px, py, var, allow_dicritical=False):
    """Pull back and strip the exceptional factor; return (strict, order, dicritical)."""
    pulled = omega.pullback(px, py)
    if pulled.is_zero():
        raise Dicritical("pulled-back form vanishes")
    k = pulled.x_order() if var == "u" else pulled.y_order()
    strict = pulled.shift_down(k, 0) if var == "u" else pulled.shift_down(0, k)
    # the exceptional line must stay invariant
    tangential = strict.b.restrict_x0() if var == "u" else strict.a.restrict_y0()
    if tangential and not allow_dicritical:
        raise Dicritical("exceptional component is not invariant (dicritical)")
    return strict, k, bool(tangential)


def blowup_at(tree, p=None, allow_dicritical=False):
    """Blow up the point ``p`` (a PointOnDivisor, or None for the origin).

    A non-invariant exceptional line raises Dicritical unless
    ``allow_dicritical``, in which case the component is flagged.
    """
    if p is None:
        p = PointOnDivisor("0", Fraction(0), Fraction(0))
    chart = tree.chart(p.chart)
    u0, v0 = _as_rational(p.u), _as_rational(p.v)
    through = []
    for e in chart.divisor_locals:
        if (e.axis == "u" and u0 == 0) or (e.axis == "v" and v0 == 0):
            through.append((e, e.param_at(u0, v0)))
    if chart.id == "0":
        if tree.root_blown or u0 != 0 or v0 != 0:
            raise NotAPoint("the root chart only has the origin as a centre")
    elif not through:
        raise NotAPoint(f"({u0}, {v0}) is not on the divisor in chart {chart.id}")
    for e, param in through:
        nb = tree.component(e.comp).neighbour_at(param)
        if nb is not None and nb > chart.epoch:
            raise NotAPoint(f"point {param_str(param)} of D{e.comp} was already blown up")

    k = len(tree.components) + 1
    maps = {
        "a": (X + u0, X * Y + v0, "u"),
        "b": (X * Y + u0, Y + v0, "v"),
    }
    new_charts = {}
    mult_curve = mult_form = None
    dicritical = False
    for tag, (pu, pv, var) in maps.items():
        xm = chart.x_map.substitute(pu, pv)
        ym = chart.y_map.substitute(pu, pv)
        f = omega = None
        if chart.f is not None:
            f = chart.f.substitute(pu, pv)
            m = f.x_order() if var == "u" else f.y_order()
            mult_curve = m if mult_curve is None else mult_curve
            assert m == mult_curve, "curve multiplicity differs between charts"
        if chart.omega is not None:
            omega, mf, dicritical = _pull_form(chart.omega, pu, pv, var, allow_dicritical)
            mult_form = mf if mult_form is None else mult_form
        locals_ = []
        if tag == "a":
            locals_.append(AxisEntry(k, "u", _ID_MOBIUS))
            for e, _ in through:
                if e.axis == "v":
                    locals_.append(AxisEntry(e.comp, "v", _mobius_shift(e.mobius, u0)))
        else:
            for e, _ in through:
                if e.axis == "u":
                    locals_.append(AxisEntry(e.comp, "u", _mobius_shift(e.mobius, v0)))
            locals_.append(AxisEntry(k, "v", _INV_MOBIUS))
        new_charts[tag] = Chart(f"{k}{tag}", xm, ym, tuple(locals_), f, omega, k)

    comps = list(tree.components)
    if mult_form is not None:
        # order of the total pull-back: components through p contribute theirs
        mult_form += sum(comps[e.comp - 1].multiplicity_form for e, _ in through)
    adjacency = set(tree.adjacency)
    through_ids = [e.comp for e, _ in through]
    for i, a in enumerate(through_ids):
        for b in through_ids[i + 1 :]:
            adjacency.discard(frozenset((a, b)))
    new_corners = []
    for e, param in through:
        d = comps[e.comp - 1]
        corners = tuple((q, n) for q, n in d.corners if q != param) + ((param, k),)
        comps[e.comp - 1] = replace(d, self_intersection=d.self_intersection - 1, corners=corners)
        adjacency.add(frozenset((e.comp, k)))
        new_corners.append((Fraction(0) if e.axis == "v" else INF, e.comp))
    comps.append(
        Component(k, -1, k, mult_curve, mult_form, f"{k}a", f"{k}b", tuple(new_corners), dicritical)
    )
    return replace(
        tree,
        components=tuple(comps),
        adjacency=frozenset(adjacency),
        charts=tree.charts + (new_charts["a"], new_charts["b"]),
        marked_points=(),
        separatrix_branches=(),
        central=None,
        root_blown=tree.root_blown or chart.id == "0",
        history=tree.history + ((chart.id, u0, v0),),
    )


# locating points ------------------------------------------------------------


def corner_chart(tree, a, b):
    """The chart whose origin is the corner of components a and b."""
    for c in reversed(tree.charts):
        if c.axis_of(a) is not None and c.axis_of(b) is not None:
            return c
    raise KeyError(f"no chart contains the corner D{a} ^ D{b}")


def point_chart(tree, comp, param):
    """(chart, (u, v)) in which the point ``param`` of ``comp`` is seen.

    Corners are returned at the origin of their corner chart.
    """
    d = tree.component(comp)
    nb = d.neighbour_at(param)
    if nb is not None:
        return corner_chart(tree, comp, nb), (Fraction(0), Fraction(0))
    if param == INF:
        return tree.chart(d.inf_chart), (Fraction(0), Fraction(0))
    return tree.chart(d.home_chart), (Fraction(0), param)


def _params_equal(p, q):
    if isinstance(p, AlgPoint) or isinstance(q, AlgPoint):
        return False
    return p == q


def divisor_roots(tree, comp, poly_of_chart):
    """Non-corner points of ``comp`` where a chart polynomial vanishes.

    ``poly_of_chart(chart)`` returns the polynomial to test; in the home
    chart its restriction to ``E`` is factored, at infinity the origin value
    of the inf chart is tested.  Returns [(param, multiplicity)].
    """
    d = tree.component(comp)
    corners = d.corner_params()
    out = []
    home = tree.chart(d.home_chart)
    restr = poly_of_chart(home).restrict_x0()
    if restr:
        for r, mult in isolate_roots(restr):
            if not any(_params_equal(r, c) for c in corners):
                out.append((r, mult))
    if INF not in corners:
        inf = tree.chart(d.inf_chart)
        restr_inf = poly_of_chart(inf).restrict_y0()
        if restr_inf and restr_inf[0] == 0:
            m = next(i for i, c in enumerate(restr_inf) if c != 0)
            out.append((INF, m))
    return out


def _strict_f(chart):
    return chart.strict(chart.f)


def separatrix_attachments(tree):
    """Marked points where the strict transform of f meets the divisor."""
    if tree.f is None:
        raise ValueError("tree carries no curve")
    points = []
    for d in tree.components:
        for param, _mult in divisor_roots(tree, d.id, _strict_f):
            chart, coords = point_chart(tree, d.id, param)
            points.append(MarkedPoint(d.id, param, "separatrix-attachment", chart.id, coords))
    return points


def axis_attachments(tree):
    """Where the strict transforms of the coordinate axes meet the divisor."""
    points = []
    for name, getter in (("x=0", lambda c: c.strict(c.x_map)), ("y=0", lambda c: c.strict(c.y_map))):
        for d in tree.components:
            for param, _ in divisor_roots(tree, d.id, getter):
                chart, coords = point_chart(tree, d.id, param)
                points.append(MarkedPoint(d.id, param, "axis-attachment:" + name, chart.id, coords))
    return points


def corner_points(tree):
    pts = []
    for d in tree.components:
        for param, nb in d.corners:
            chart = corner_chart(tree, d.id, nb)
            pts.append(MarkedPoint(d.id, param, "corner", chart.id, (Fraction(0), Fraction(0)), neighbour=nb))
    return pts


def make_branches(tree, points):
    """Branches for the given attachment points, tagging coordinate axes."""
    axis_at = {}
    for m in axis_attachments(tree):
        if not isinstance(m.param, AlgPoint):
            axis_at[(m.comp, m.param)] = m.kind.split(":", 1)[1]
    out = []
    for i, m in enumerate(points):
        axis = None if isinstance(m.param, AlgPoint) else axis_at.get((m.comp, m.param))
        out.append(Branch(i + 1, m.comp, m.param, axis))
    return tuple(out)


def with_curve_census(tree):
    """Attach corner and separatrix marked points and branches."""
    seps = separatrix_attachments(tree)
    marks = corner_points(tree) + seps
    return replace(tree, marked_points=tuple(marks), separatrix_branches=make_branches(tree, seps))


def chain_blowup(tree, p, s_curve, n):
    """Blow up n times, each time at the attaching locus of the smooth branch
    ``s_curve`` (given in the coordinates of ``p``'s chart).

    Returns (tree, point) where point is the attaching locus after the last
    blow-up.
    """
    if p is None:
        p = PointOnDivisor("0", Fraction(0), Fraction(0))
    s_curve = s_curve.substitute(X + _as_rational(p.u), Y + _as_rational(p.v))
    if s_curve.constant_term() != 0:
        raise NotAPoint("branch does not pass through the centre")
    for _ in range(n):
        tree = blowup_at(tree, p)
        k = len(tree.components)
        # s_curve is centred at the origin of the blown-up point
        s_a = s_curve.substitute(X, X * Y)
        s_a = s_a.shift_down(s_a.x_order(), 0)
        restr = s_a.restrict_x0()
        if len(restr) == 2:
            c = -restr[0] / restr[1]
            p = PointOnDivisor(f"{k}a", Fraction(0), c)
            s_curve = s_a.substitute(X, Y + c)
        elif len(restr) <= 1:
            s_b = s_curve.substitute(X * Y, Y)
            s_b = s_b.shift_down(0, s_b.y_order())
            p = PointOnDivisor(f"{k}b", Fraction(0), Fraction(0))
            s_curve = s_b
        else:
            raise NotAPoint("branch is not smooth")
        if s_curve.constant_term() != 0:
            raise NotAPoint("branch lost its attaching point")
    return tree, p
