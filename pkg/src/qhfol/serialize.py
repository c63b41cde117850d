"""JSON and DOT encodings.

JSON output is byte-stable: keys keep their construction order and floats
are written with 17 significant digits.  Every ``*_to_json`` here has a
matching ``*_from_json`` that rebuilds an equal object.
"""

import math
from fractions import Fraction

from . import blowup as bu
from .algebra import AlgPoint, BiPoly, NFElement
from .forms import OneForm


def dumps(obj, indent=2):
    """Deterministic JSON text (floats as %.17g, non-finite floats as strings)."""
    out = []
    _emit(obj, out, 0, indent)
    return "".join(out)


def _fmt_float(x):
    if math.isnan(x) or math.isinf(x):
        return '"' + repr(x) + '"'
    text = format(x, ".17g")
    if all(ch not in text for ch in ".en"):
        text += ".0"
    return text


def _emit(obj, out, level, indent):
    import json

    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for k, (key, val) in enumerate(obj.items()):
            out.append(pad + json.dumps(str(key)) + ": ")
            _emit(val, out, level + 1, indent)
            out.append(",\n" if k < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        if all(isinstance(v, (int, float, str, bool)) or v is None for v in obj):
            out.append("[")
            for k, v in enumerate(obj):
                _emit(v, out, level + 1, indent)
                if k < len(obj) - 1:
                    out.append(", ")
            out.append("]")
            return
        out.append("[\n")
        for k, v in enumerate(obj):
            out.append(pad)
            _emit(v, out, level + 1, indent)
            out.append(",\n" if k < len(obj) - 1 else "\n")
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


# scalars --------------------------------------------------------------------


def scalar_to_json(v):
    if v is None:
        return None
    if v == bu.INF:
        return "inf"
    if isinstance(v, AlgPoint):
        return {"algpoint": v.to_json()}
    if isinstance(v, NFElement):
        return {"field": v.field.to_json(), "rep": [str(c) for c in v.rep]}
    if isinstance(v, (int, Fraction)):
        return str(Fraction(v))
    raise TypeError(f"not an exact scalar: {v!r}")


def scalar_from_json(d):
    if d is None:
        return None
    if d == "inf":
        return bu.INF
    if isinstance(d, dict):
        if "algpoint" in d:
            return AlgPoint.from_json(d["algpoint"])
        return NFElement(AlgPoint.from_json(d["field"]), tuple(Fraction(c) for c in d["rep"]))
    return Fraction(d)


def _poly(p):
    return None if p is None else p.to_str()


def _unpoly(s):
    return None if s is None else BiPoly.parse(s)


# trees ----------------------------------------------------------------------


def sing_to_json(s):
    if s is None:
        return None
    return {
        "tag": s.tag,
        "lambda": scalar_to_json(s.lam),
        "linear_part": None if s.linear_part is None else [[scalar_to_json(v) for v in row] for row in s.linear_part],
        "trace": scalar_to_json(s.trace),
        "det": scalar_to_json(s.det),
        "disc": scalar_to_json(s.disc),
    }


def sing_from_json(d):
    from .desing import SingClass

    if d is None:
        return None
    lin = d["linear_part"]
    return SingClass(
        d["tag"],
        scalar_from_json(d["lambda"]),
        None if lin is None else tuple(tuple(scalar_from_json(v) for v in row) for row in lin),
        scalar_from_json(d["trace"]),
        scalar_from_json(d["det"]),
        scalar_from_json(d["disc"]),
    )


def _chart_to_json(c):
    return {
        "id": c.id,
        "x_map": _poly(c.x_map),
        "y_map": _poly(c.y_map),
        "divisor_locals": [
            {"component": e.comp, "axis": e.axis, "mobius": [str(m) for m in e.mobius]} for e in c.divisor_locals
        ],
        "f": _poly(c.f),
        "omega": None if c.omega is None else c.omega.to_json(),
        "epoch": c.epoch,
    }


def _chart_from_json(d):
    return bu.Chart(
        d["id"],
        _unpoly(d["x_map"]),
        _unpoly(d["y_map"]),
        tuple(
            bu.AxisEntry(e["component"], e["axis"], tuple(Fraction(m) for m in e["mobius"])) for e in d["divisor_locals"]
        ),
        _unpoly(d["f"]),
        None if d["omega"] is None else OneForm.from_json(d["omega"]),
        d["epoch"],
    )


def _mark_to_json(m):
    return {
        "component": m.comp,
        "param": scalar_to_json(m.param),
        "kind": m.kind,
        "chart": m.chart,
        "coords": [scalar_to_json(c) for c in m.coords],
        "neighbour": m.neighbour,
        "singularity": sing_to_json(m.sing),
    }


def _mark_from_json(d):
    return bu.MarkedPoint(
        d["component"],
        scalar_from_json(d["param"]),
        d["kind"],
        d["chart"],
        tuple(scalar_from_json(c) for c in d["coords"]),
        d["neighbour"],
        sing_from_json(d["singularity"]),
    )


def tree_to_json(tree, charts=True):
    data = {
        "components": [
            {
                "id": d.id,
                "self_intersection": d.self_intersection,
                "creation_index": d.creation_index,
                "multiplicity_curve": d.multiplicity_curve,
                "multiplicity_form": d.multiplicity_form,
                "dicritical": d.dicritical,
                "home_chart": d.home_chart,
                "inf_chart": d.inf_chart,
                "corners": [[scalar_to_json(p), n] for p, n in d.corners],
            }
            for d in tree.components
        ],
        "edges": [list(e) for e in tree.edges()],
        "central": tree.central,
        "separatrix_branches": [
            {"id": b.id, "component": b.comp, "param": scalar_to_json(b.param), "axis": b.axis}
            for b in tree.separatrix_branches
        ],
        "marked_points": [_mark_to_json(m) for m in tree.marked_points],
        "root_blown": tree.root_blown,
        "with_axes": tree.with_axes,
        "history": [[c, str(u), str(v)] for c, u, v in tree.history],
    }
    if charts:
        data["charts"] = [_chart_to_json(c) for c in tree.charts]
    return data


def tree_from_json(d):
    comps = tuple(
        bu.Component(
            c["id"],
            c["self_intersection"],
            c["creation_index"],
            c["multiplicity_curve"],
            c["multiplicity_form"],
            c["home_chart"],
            c["inf_chart"],
            tuple((scalar_from_json(p), n) for p, n in c["corners"]),
            c["dicritical"],
        )
        for c in d["components"]
    )
    return bu.ResolutionTree(
        components=comps,
        adjacency=frozenset(frozenset(e) for e in d["edges"]),
        charts=tuple(_chart_from_json(c) for c in d.get("charts", [])),
        marked_points=tuple(_mark_from_json(m) for m in d["marked_points"]),
        separatrix_branches=tuple(
            bu.Branch(b["id"], b["component"], scalar_from_json(b["param"]), b["axis"]) for b in d["separatrix_branches"]
        ),
        central=d["central"],
        root_blown=d["root_blown"],
        with_axes=d["with_axes"],
        history=tuple((c, Fraction(u), Fraction(v)) for c, u, v in d["history"]),
    )


# DOT ------------------------------------------------------------------------


def _node_label(d):
    mu = d.multiplicity_curve if d.multiplicity_curve is not None else d.multiplicity_form
    return f"D_{d.id} (s={d.self_intersection}, m={mu})"


def tree_to_dot(tree, name="resolution", prefix="", cluster=False):
    lines = []
    head = f"subgraph cluster_{name} {{" if cluster else f"graph {name} {{"
    lines.append(head)
    if cluster:
        lines.append(f'  label="{name}";')
    for d in tree.components:
        extra = ", penwidth=2, shape=doublecircle" if d.id == tree.central else ""
        if d.dicritical:
            extra += ", style=dashed"
        lines.append(f'  {prefix}D{d.id} [label="{_node_label(d)}"{extra}];')
    for a, b in tree.edges():
        lines.append(f"  {prefix}D{a} -- {prefix}D{b};")
    for br in tree.separatrix_branches:
        tag = f" {br.axis}" if br.axis else ""
        lines.append(f'  {prefix}b{br.id} [shape=point, label="", xlabel="branch {br.id}{tag}"];')
        lines.append(f"  {prefix}D{br.comp} -- {prefix}b{br.id} [dir=forward];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def predicted_to_dot(pt, name="predicted", prefix="p", cluster=False):
    lines = [f"subgraph cluster_{name} {{" if cluster else f"graph {name} {{"]
    if cluster:
        lines.append(f'  label="{name}";')
    for k in range(1, pt.component_count + 1):
        extra = ", penwidth=2, shape=doublecircle" if k == pt.central else ""
        lines.append(f'  {prefix}D{k} [label="D_{k} (s={pt.self_intersections[k - 1]})"{extra}];')
    for a, b in pt.edges():
        lines.append(f"  {prefix}D{a} -- {prefix}D{b};")
    n = 0
    for k in range(1, pt.component_count + 1):
        for _ in range(pt.attachments[k - 1]):
            n += 1
            lines.append(f'  {prefix}b{n} [shape=point, label=""];')
            lines.append(f"  {prefix}D{k} -- {prefix}b{n} [dir=forward];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def report_to_dot(report):
    """Predicted and computed trees side by side."""
    body = predicted_to_dot(report.predicted, "predicted", "p", cluster=True)
    body += tree_to_dot(report.computed, "computed", "c", cluster=True)
    indented = "\n".join("  " + line for line in body.splitlines())
    return "graph prediction {\n" + indented + "\n}\n"


def tree_to_text(tree):
    lines = []
    for d in tree.components:
        mark = " *central*" if d.id == tree.central else ""
        lines.append(
            f"D{d.id}: self-intersection {d.self_intersection}, curve mult {d.multiplicity_curve}, "
            f"form mult {d.multiplicity_form}{mark}"
        )
    lines.append("edges: " + ", ".join(f"D{a}-D{b}" for a, b in tree.edges()))
    for b in tree.separatrix_branches:
        lines.append(f"branch {b.id} on D{b.comp} at {bu.param_str(b.param)}" + (f" ({b.axis})" if b.axis else ""))
    for m in tree.marked_points:
        s = "" if m.sing is None else f" {m.sing.tag}" + (f" lambda={bu.param_str(m.sing.lam)}" if m.sing.lam is not None else "")
        lines.append(f"point D{m.comp} @ {bu.param_str(m.param)} [{m.kind}]{s}")
    return "\n".join(lines) + "\n"

