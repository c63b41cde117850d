"""Resolution drivers, singularity classification and the Euclid predictor."""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import isqrt

from . import blowup as bu
from .algebra import AlgPoint, NFElement, isolate_roots, upoly
from .errors import (
    IrrationalCenter,
    NotAPoint,
    NotQuasiHomogeneous,
    NotSingular,
    NotUnique,
    ResolutionCapExceeded,
)
from .quasihom import infer_weights

MAX_BLOWUPS = 64


# Euclid ---------------------------------------------------------------------


@dataclass(frozen=True)
class EuclidData:
    alpha: int
    beta: int
    remainders: tuple
    quotients: tuple

    @property
    def total(self):
        return sum(self.quotients)

    def to_json(self):
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "remainders": list(self.remainders),
            "quotients": list(self.quotients),
        }


def euclid_quotients(w):
    """r0 = beta, r1 = alpha, r_i = q_{i+1} r_{i+1} + r_{i+2}."""
    rs = [w.beta, w.alpha]
    qs = []
    while rs[-1] != 0:
        q, r = divmod(rs[-2], rs[-1])
        qs.append(q)
        rs.append(r)
    return EuclidData(w.alpha, w.beta, tuple(rs), tuple(qs))


# classification -------------------------------------------------------------


@dataclass(frozen=True)
class SingClass:
    tag: str  # NonSingular | Reduced | SaddleNode | NonReduced
    lam: object = None  # Fraction or AlgPoint, Reduced only
    linear_part: tuple = None  # ((b_x, b_y), (-a_x, -a_y)) of X = b d/dx - a d/dy
    trace: object = None
    det: object = None
    disc: object = None

    @property
    def lam_numeric(self):
        if self.lam is None:
            return None
        if isinstance(self.lam, AlgPoint):
            return self.lam.numeric
        return complex(self.lam)

    def to_json(self):
        from .serialize import sing_to_json

        return sing_to_json(self)


def _is_rational_square(q):
    q = Fraction(q)
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


def _is_zero(v):
    return v.is_zero() if isinstance(v, NFElement) else v == 0


def _rational_or_none(v):
    if isinstance(v, NFElement):
        return v.rational_value() if v.is_rational() else None
    return Fraction(v)


def _to_point(v):
    """Fraction or AlgPoint for an exact scalar."""
    if isinstance(v, NFElement):
        return v.rational_value() if v.is_rational() else v.minpoly()
    return Fraction(v)


def _coord(c):
    """Chart coordinate as an exact scalar: Fraction or NFElement."""
    if isinstance(c, AlgPoint):
        if c.is_rational():
            return c.rational_value()
        return NFElement(c, (Fraction(0), Fraction(1)))
    return Fraction(c)


def _canonical_ratio(tr, det):
    """Eigenvalue ratio with |r| <= 1 from trace and determinant (Q case)."""
    kappa = Fraction(tr) ** 2 / det
    # r + 1/r = kappa - 2
    s = kappa - 2
    disc = s * s - 4
    if _is_rational_square(disc):
        root = Fraction(isqrt(disc.numerator), isqrt(disc.denominator))
        r1, r2 = (s + root) / 2, (s - root) / 2
        return r1 if abs(r1) <= abs(r2) else r2
    # r^2 - s r + 1 = 0
    poly = (Fraction(1), -s, Fraction(1))
    roots = [r for r, _ in isolate_roots(poly)]
    import cmath

    return min(roots, key=lambda r: (round(abs(r.numeric), 12), abs(cmath.phase(r.numeric))))


def classify_singularity(omega, p=(0, 0), divisor=None):
    """Classify the singular point ``p`` of ``omega`` via X = b d/dx - a d/dy.

    ``divisor`` is "u" when {x = 0} is an invariant divisor through p and
    "v" for {y = 0}; then lambda = transverse / along eigenvalue.
    """
    x0, y0 = _coord(p[0]), _coord(p[1])
    a, b = omega.a, omega.b
    if not (_is_zero_val(a.evaluate(x0, y0)) and _is_zero_val(b.evaluate(x0, y0))):
        raise NotSingular(f"omega does not vanish at {p}")
    ax, ay = a.partial_x().evaluate(x0, y0), a.partial_y().evaluate(x0, y0)
    bx, by = b.partial_x().evaluate(x0, y0), b.partial_y().evaluate(x0, y0)
    lin = ((bx, by), (-ax, -ay))
    tr = bx - ay
    det = -bx * ay + by * ax
    disc = tr * tr - 4 * det
    info = dict(linear_part=lin, trace=tr, det=det, disc=disc)
    if _is_zero_val(det):
        if _is_zero_val(tr):
            return SingClass("NonReduced", **info)
        return SingClass("SaddleNode", **info)
    if _is_zero_val(tr):
        lam = Fraction(-1)
        return SingClass("Reduced", lam=lam, **info)
    # ratio r of eigenvalues satisfies r + 1/r + 2 = tr^2/det
    kappa = _rational_or_none(tr * tr / det)
    if kappa is not None and kappa >= 4 and _is_rational_square(kappa * (kappa - 4)):
        return SingClass("NonReduced", **info)
    if divisor == "u":
        lam = _to_point(bx / (-ay))
    elif divisor == "v":
        lam = _to_point(-ay / bx)
    elif kappa is not None:
        lam = _canonical_ratio(_rational_or_none(tr), _rational_or_none(det))
    else:
        raise IrrationalCenter("canonical ratio at an irrational point needs a divisor")
    return SingClass("Reduced", lam=lam, **info)


def _is_zero_val(v):
    if isinstance(v, NFElement):
        return v.is_zero()
    return v == 0


# resolution drivers ---------------------------------------------------------


def _sort_key(param):
    if param == bu.INF:
        return (2, 0.0, 0.0)
    if isinstance(param, AlgPoint):
        return (1, param.numeric.real, param.numeric.imag)
    return (0, float(param), 0.0)


def _axes_factor(f):
    """Coordinate axes not already dividing f, as a selector on charts."""
    use_x, use_y = f.x_order() == 0, f.y_order() == 0

    def total(chart):
        poly = chart.f
        if use_x:
            poly = poly * chart.x_map
        if use_y:
            poly = poly * chart.y_map
        return chart.strict(poly)

    return total


def _curve_bad_point(tree):
    """First point where f*x*y (reduced) fails to cross the divisor normally."""
    _curve_with_axes = _axes_factor(tree.f)
    for d in tree.components:
        items = []
        for param, nb in d.corners:
            chart = bu.corner_chart(tree, d.id, nb)
            if _curve_with_axes(chart).constant_term() == 0:
                items.append((param, chart.id, (Fraction(0), Fraction(0))))
        for param, mult in bu.divisor_roots(tree, d.id, _curve_with_axes):
            if mult >= 2:
                if isinstance(param, AlgPoint):
                    raise IrrationalCenter(f"non-transverse point {param} on D{d.id}")
                chart, coords = bu.point_chart(tree, d.id, param)
                items.append((param, chart.id, coords))
        if items:
            param, cid, (u, v) = min(items, key=lambda it: _sort_key(it[0]))
            return bu.PointOnDivisor(cid, u, v)
    return None


def resolve_curve(f):
    """Embedded resolution of f*x*y to normal crossings; census for f."""
    if f.constant_term() != 0:
        raise NotAPoint("curve does not pass through the origin")
    tree = bu.initial_tree(f, with_axes=True)
    tree = bu.blowup_at(tree)
    while True:
        p = _curve_bad_point(tree)
        if p is None:
            break
        if len(tree.components) >= MAX_BLOWUPS:
            raise ResolutionCapExceeded(f"more than {MAX_BLOWUPS} blow-ups")
        tree = bu.blowup_at(tree, p)
    tree = bu.with_curve_census(tree)
    return _with_central(tree)


def _form_points(tree, comp):
    """Singular points of the strict form on ``comp``: [(param, chart, coords, axis, nb)].

    ``axis`` is the local equation of ``comp`` when it is invariant, else None.
    """
    d = tree.component(comp)
    out = []
    origin = (Fraction(0), Fraction(0))
    for param, nb in d.corners:
        chart = bu.corner_chart(tree, comp, nb)
        if chart.omega.is_singular_at_origin():
            axis = None if d.dicritical else chart.axis_of(comp).axis
            out.append((param, chart, origin, axis, nb))

    if d.dicritical:
        # both coefficients must vanish on the divisor
        home = tree.chart(d.home_chart)
        common = upoly.gcd(home.omega.a.restrict_x0(), home.omega.b.restrict_x0())
        roots = isolate_roots(common) if upoly.degree(common) > 0 else []
        for param, _ in roots:
            if param not in d.corner_params():
                out.append((param, home, (Fraction(0), param), None, None))
        if bu.INF not in d.corner_params():
            inf = tree.chart(d.inf_chart)
            if inf.omega.is_singular_at_origin():
                out.append((bu.INF, inf, origin, None, None))
        return sorted(out, key=lambda it: _sort_key(it[0]))

    def tangential(chart):
        # coefficient of the transverse differential along the component
        e = chart.axis_of(comp)
        return chart.omega.a if e.axis == "u" else chart.omega.b

    for param, _ in bu.divisor_roots(tree, comp, tangential):
        chart, coords = bu.point_chart(tree, comp, param)
        out.append((param, chart, coords, chart.axis_of(comp).axis, None))
    return sorted(out, key=lambda it: _sort_key(it[0]))


def foliation_points(tree):
    """Classified marked points of every component: list of MarkedPoint."""
    marks = []
    for d in tree.components:
        for param, chart, coords, axis, nb in _form_points(tree, d.id):
            sing = classify_singularity(chart.omega, coords, axis)
            kind = "corner" if nb is not None else "foliation-singularity"
            marks.append(bu.MarkedPoint(d.id, param, kind, chart.id, coords, neighbour=nb, sing=sing))
    return marks


def resolve_foliation(omega, min_blowups=0):
    """Blow up NonReduced points until every singularity is reduced."""
    omega = omega.without_units()
    if not omega.is_singular_at_origin():
        raise NotSingular("the origin is a regular point")
    tree = bu.initial_tree(omega=omega)
    origin = classify_singularity(omega)
    if origin.tag != "NonReduced" and min_blowups == 0:
        mark = bu.MarkedPoint(None, None, "foliation-singularity", "0", (Fraction(0), Fraction(0)), sing=origin)
        return replace(tree, marked_points=(mark,))
    tree = bu.blowup_at(tree, allow_dicritical=True)
    while True:
        marks = foliation_points(tree)
        bad = [m for m in marks if m.sing.tag == "NonReduced"]
        if not bad and len(tree.components) >= min_blowups:
            break
        if len(tree.components) >= MAX_BLOWUPS:
            raise ResolutionCapExceeded(f"more than {MAX_BLOWUPS} blow-ups")
        m = bad[0]
        if any(isinstance(c, AlgPoint) and not c.is_rational() for c in m.coords):
            raise IrrationalCenter(f"non-reduced point at irrational parameter on D{m.comp}")
        tree = bu.blowup_at(tree, bu.PointOnDivisor(m.chart, m.coords[0], m.coords[1]), allow_dicritical=True)
    # a reduced point on an invariant component carries one transverse separatrix
    invariant = {d.id for d in tree.components if not d.dicritical}
    branches = bu.make_branches(
        tree, [m for m in marks if m.kind == "foliation-singularity" and m.comp in invariant]
    )
    tree = replace(tree, marked_points=tuple(marks), separatrix_branches=branches)
    return _with_central(tree)


def _with_central(tree):
    try:
        return replace(tree, central=central_component(tree))
    except NotUnique:
        return tree


def central_component(tree):
    """Component met by every separatrix branch.

    When coordinate axes are separatrices they may land on the chain ends;
    then the component carrying all the other branches is returned.
    """
    comps = {b.comp for b in tree.separatrix_branches}
    if len(comps) == 1:
        return comps.pop()
    inner = {b.comp for b in tree.separatrix_branches if b.axis is None}
    if len(inner) != 1:
        raise NotUnique(f"separatrix branches attach to components {sorted(comps)}")
    return inner.pop()


def is_generalized_curve(omega):
    tree = resolve_foliation(omega)
    return all(m.sing.tag != "SaddleNode" for m in tree.marked_points)


# prediction -----------------------------------------------------------------


@dataclass(frozen=True)
class PredictedTree:
    quotients: tuple
    component_count: int
    self_intersections: tuple  # by creation index
    adjacency: frozenset
    chain: tuple  # component ids from one end to the other
    central: int
    attachments: tuple  # number of f-branches per component (by creation index)
    axis_components: tuple  # ((axis name, component), ...)
    extremal_arrows: tuple  # per chain end: does it carry an axis branch of f

    def edges(self):
        return sorted(tuple(sorted(e)) for e in self.adjacency)

    def to_json(self):
        return {
            "quotients": list(self.quotients),
            "component_count": self.component_count,
            "self_intersections": list(self.self_intersections),
            "edges": [list(e) for e in self.edges()],
            "chain": list(self.chain),
            "central": self.central,
            "attachments": list(self.attachments),
            "axis_components": [list(a) for a in self.axis_components],
            "extremal_arrows": list(self.extremal_arrows),
        }


def _chain_order(n, adjacency):
    if n == 1:
        return (1,)
    deg = {k: 0 for k in range(1, n + 1)}
    for e in adjacency:
        for k in e:
            deg[k] += 1
    ends = sorted(k for k, v in deg.items() if v == 1)
    order = [ends[0]]
    prev = None
    while len(order) < n:
        cur = order[-1]
        nxt = [j for e in adjacency if cur in e for j in e if j != cur and j != prev]
        prev = cur
        order.append(nxt[0])
    return tuple(order)


def _split_axes(f):
    """(g, x-power, y-power) with f = x^i y^j g."""
    i, j = f.x_order(), f.y_order()
    return f.shift_down(i, j), i, j


def predict_dual_tree(w, f):
    """Replay the blocks of the Euclid quotients combinatorially."""
    if infer_weights(f) != w:
        raise NotQuasiHomogeneous(f"{f} is not quasi-homogeneous of weight {w}")
    ed = euclid_quotients(w)
    # curves are "x" / "y" (axes) or component ids; Q follows the axis of
    # the variable with the larger weight
    big, small = ("x", "y") if w.swapped else ("y", "x")
    p_cur, q_cur = small, big
    selfint = {}
    adjacency = set()
    meets = {"x": None, "y": None}
    n = 0
    for qi in ed.quotients:
        for _ in range(qi):
            n += 1
            selfint[n] = -1
            for c in (p_cur, q_cur):
                if isinstance(c, int):
                    selfint[c] -= 1
                    adjacency.add(frozenset((c, n)))
                else:
                    meets[c] = n
            if isinstance(p_cur, int) and isinstance(q_cur, int):
                adjacency.discard(frozenset((p_cur, q_cur)))
            p_cur = n
        p_cur, q_cur = q_cur, p_cur
    central = n
    g, xi, yj = _split_axes(f)
    # each non-axis branch is y^wx = c x^wy
    g_branches = g.degree_y() // w.wx if not g.is_constant() else 0
    attach = {k: 0 for k in range(1, n + 1)}
    attach[central] += g_branches
    if xi:
        attach[meets["x"]] += 1
    if yj:
        attach[meets["y"]] += 1
    chain = _chain_order(n, adjacency)
    ends = (chain[0], chain[-1])
    arrows = tuple(bool((xi and meets["x"] == e) or (yj and meets["y"] == e)) for e in ends)
    return PredictedTree(
        quotients=ed.quotients,
        component_count=n,
        self_intersections=tuple(selfint[k] for k in range(1, n + 1)),
        adjacency=frozenset(adjacency),
        chain=chain,
        central=central,
        attachments=tuple(attach[k] for k in range(1, n + 1)),
        axis_components=(("x", meets["x"]), ("y", meets["y"])),
        extremal_arrows=arrows,
    )


# tree comparison ------------------------------------------------------------


def _labels_computed(tree):
    counts = {d.id: 0 for d in tree.components}
    for b in tree.separatrix_branches:
        counts[b.comp] += 1
    return {d.id: (d.self_intersection, counts[d.id], d.id == tree.central) for d in tree.components}


def _labels_predicted(pt):
    return {
        k: (pt.self_intersections[k - 1], pt.attachments[k - 1], k == pt.central) for k in range(1, pt.component_count + 1)
    }


def _rooted_canon(node, parent, nbrs, labels):
    kids = sorted(
        (_rooted_canon(c, node, nbrs, labels) for c in nbrs[node] if c != parent), key=lambda t: t[0]
    )
    return ("(" + repr(labels[node]) + "".join(k[0] for k in kids) + ")", node, kids)


def _neighbour_map(ids, edges):
    nbrs = {k: [] for k in ids}
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    return nbrs


def canonical_form(ids, edges, labels):
    """Canonical string of a labelled unrooted tree (minimum over roots)."""
    nbrs = _neighbour_map(ids, edges)
    return min(_rooted_canon(r, None, nbrs, labels)[0] for r in ids)


def _match(t1, t2):
    """Pair up nodes of two isomorphic rooted canonical trees."""
    out = {t1[1]: t2[1]}
    for a, b in zip(t1[2], t2[2]):
        out.update(_match(a, b))
    return out


def trees_isomorphic(ids1, edges1, labels1, ids2, edges2, labels2):
    """Return a node mapping 1 -> 2 if the labelled trees are isomorphic, else None."""
    if len(ids1) != len(ids2):
        return None
    if not ids1:
        return {}
    n1, n2 = _neighbour_map(ids1, edges1), _neighbour_map(ids2, edges2)
    r1 = min(ids1, key=lambda r: _rooted_canon(r, None, n1, labels1)[0])
    c1 = _rooted_canon(r1, None, n1, labels1)
    for r2 in ids2:
        c2 = _rooted_canon(r2, None, n2, labels2)
        if c2[0] == c1[0]:
            return _match(c1, c2)
    return None


@dataclass(frozen=True)
class PredictionReport:
    match: bool
    predicted: PredictedTree
    computed: object  # ResolutionTree
    witness: dict = field(default_factory=dict)

    def to_json(self):
        from .serialize import tree_to_json

        return {
            "match": self.match,
            "predicted": self.predicted.to_json(),
            "computed": tree_to_json(self.computed),
            "witness": {str(k): v for k, v in sorted(self.witness.items())} if self.witness else None,
        }


def tree_shape(tree):
    ids = [d.id for d in tree.components]
    return ids, tree.edges(), _labels_computed(tree)


def verify_prediction(f):
    w = infer_weights(f)
    if w is None:
        raise NotQuasiHomogeneous(f"support of {f} is not on a weighted line")
    pred = predict_dual_tree(w, f)
    tree = resolve_curve(f)
    ids_p = list(range(1, pred.component_count + 1))
    mapping = trees_isomorphic(ids_p, pred.edges(), _labels_predicted(pred), *tree_shape(tree))
    return PredictionReport(mapping is not None, pred, tree, mapping or {})


def same_desingularization(t1, t2):
    """Isomorphism of two resolution trees (labels: self-intersection, branches, central)."""
    return trees_isomorphic(*tree_shape(t1), *tree_shape(t2)) is not None
