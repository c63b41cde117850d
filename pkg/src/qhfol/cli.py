"""Command-line front end: ``qhfol <subcommand> ...``.

Exit status: 0 on success, 1 on a domain error (the error code is printed
on stderr), 2 on a usage error.
"""

import argparse
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import desing, diffeo, holonomy, quasihom, serialize
from .algebra import BiPoly
from .errors import NotQuasiHomogeneous, NotQuasiHomogeneousType, QHFolError
from .forms import OneForm


@dataclass(frozen=True)
class Config:
    order: int = 8  # holonomy jet order N
    tol: float = 1e-10  # integrator relative tolerance
    membership_order: int = 12
    takens_order: int = 20
    compare_order: int = 5
    format: str = "json"
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if self.order < 1 or self.membership_order < 1 or self.takens_order < 1 or self.compare_order < 1:
            raise ValueError("orders must be at least 1")
        if not self.tol > 0:
            raise ValueError("tolerances must be positive")
        if self.format not in ("json", "dot", "text"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")

    def numeric_params(self):
        ladder = None
        if self.seed:
            # rotate the offset ladder by a seed-determined phase
            phase = np.exp(2j * np.pi * np.random.default_rng(self.seed).uniform())
            ladder = tuple(0.05 * phase * 0.5**k for k in range(2 * self.order + 1))
        return holonomy.NumericParams(offsets=ladder, rtol=self.tol, order=self.order)


def load_config(path, overrides):
    base = {}
    if path:
        base = json.loads(Path(path).read_text())
        known = {f.name for f in fields(Config)}
        unknown = set(base) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
    base.update({k: v for k, v in overrides.items() if v is not None})
    return Config(**base)


# input parsing --------------------------------------------------------------


def is_form_text(text):
    s = text.strip()
    return s.startswith("d(") or ";" in s


def parse_input(text):
    """Return ("curve", f) or ("form", omega)."""
    if is_form_text(text):
        return "form", OneForm.parse(text)
    return "curve", BiPoly.parse(text)


def parse_weight(text):
    parts = [int(p) for p in text.split(",")]
    if len(parts) not in (2, 3):
        raise ValueError("weight must be 'wx,wy' or 'wx,wy,gamma'")
    gamma = parts[2] if len(parts) == 3 else 1
    return quasihom.Weight.of_variables(parts[0], parts[1], gamma)


def _primitive(omega):
    """f with df = omega when omega is closed, else None."""
    if omega.a.partial_y() != omega.b.partial_x():
        return None
    f = BiPoly()
    for (i, j), c in omega.a.terms.items():
        f = f + BiPoly.monomial(i + 1, j, c / (i + 1))
    rest = omega.b - f.partial_y()
    for (i, j), c in rest.terms.items():
        f = f + BiPoly.monomial(i, j + 1, c / (j + 1))
    return f


def form_weight(omega, given=None):
    if given is not None:
        return given
    f = _primitive(omega)
    w = quasihom.infer_weights(f) if f is not None and not f.is_zero() else None
    if w is None:
        raise NotQuasiHomogeneous("cannot infer a weight for this form; pass --weight")
    return w


# commands -------------------------------------------------------------------


def cmd_analyze(text, cfg, weight=None):
    kind, obj = parse_input(text)
    out = {"input": text, "kind": kind}
    if kind == "curve":
        f = obj
        w = quasihom.infer_weights(f)
        out["weight"] = None if w is None else w.to_json()
        out["quasi_homogeneous"] = w is not None
        out["euler"] = None if w is None else quasihom.euler_check(f, w)
        out["jacobian_membership"] = quasihom.jacobian_membership(f, cfg.membership_order).to_json()
        omega = OneForm.exact(f)
    else:
        omega = obj
        f = _primitive(omega)
        out["closed"] = f is not None
        w = weight
        if w is None and f is not None and not f.is_zero():
            w = quasihom.infer_weights(f)
        out["weight"] = None if w is None else w.to_json()
    if w is not None:
        try:
            out["takens"] = quasihom.takens_normal_form(omega, w, cfg.takens_order).to_json()
        except NotQuasiHomogeneousType as e:
            out["takens"] = {"error": e.code, "message": str(e)}
    else:
        out["takens"] = None
    try:
        out["generalized_curve"] = desing.is_generalized_curve(omega)
    except QHFolError as e:
        out["generalized_curve"] = {"error": e.code, "message": str(e)}
    return out


def cmd_resolve(text, cfg):
    kind, obj = parse_input(text)
    tree = desing.resolve_curve(obj) if kind == "curve" else desing.resolve_foliation(obj)
    if cfg.format == "dot":
        return serialize.tree_to_dot(tree)
    if cfg.format == "text":
        return serialize.tree_to_text(tree)
    return serialize.tree_to_json(tree)


def cmd_predict(text, cfg, verify=False):
    kind, obj = parse_input(text)
    if kind != "curve":
        raise NotQuasiHomogeneous("predict takes a polynomial")
    if verify:
        report = desing.verify_prediction(obj)
        if cfg.format == "dot":
            return serialize.report_to_dot(report)
        return report.to_json()
    w = quasihom.infer_weights(obj)
    if w is None:
        raise NotQuasiHomogeneous(f"support of {obj} is not on a weighted line")
    pt = desing.predict_dual_tree(w, obj)
    if cfg.format == "dot":
        return serialize.predicted_to_dot(pt)
    return {"weight": w.to_json(), "euclid": desing.euclid_quotients(w).to_json(), "predicted": pt.to_json()}


def cmd_takens(text, cfg, weight=None):
    kind, obj = parse_input(text)
    omega = OneForm.exact(obj) if kind == "curve" else obj
    w = form_weight(omega, weight)
    data = quasihom.takens_normal_form(omega, w, cfg.takens_order)
    out = data.to_json()
    out["residual_order"] = data.residual_order(omega)
    return out


def cmd_holonomy(text, cfg):
    kind, obj = parse_input(text)
    omega = OneForm.exact(obj) if kind == "curve" else obj
    rep = holonomy.holonomy_rep(omega, cfg.numeric_params(), jobs=cfg.jobs)
    return rep.to_json()


def _load_rep(arg, cfg):
    path = Path(arg)
    if path.exists():
        data = json.loads(path.read_text())
        if "generators" in data:
            return holonomy.HolonomyRep.from_json(data)
        if "a" in data and "b" in data:
            omega = OneForm.from_json(data)
        else:
            raise ValueError(f"{arg}: expected a holonomy rep or a form {{a, b}}")
    else:
        kind, obj = parse_input(arg)
        omega = OneForm.exact(obj) if kind == "curve" else obj
    return holonomy.holonomy_rep(omega, cfg.numeric_params(), jobs=cfg.jobs)


def _parse_pairing(text, m):
    if text in (None, "identity"):
        return None, False
    if text == "cyclic":
        return None, True
    pairing = tuple(int(p) for p in text.split(","))
    if sorted(pairing) != list(range(m)):
        raise ValueError(f"pairing must be a permutation of 0..{m - 1}")
    return pairing, False


def cmd_compare(a, b, cfg, pairing="identity", tol=None):
    rep0, rep1 = _load_rep(a, cfg), _load_rep(b, cfg)
    pairing, search = _parse_pairing(pairing, len(rep0.generators))
    verdict = diffeo.same_holonomy_test(rep0, rep1, pairing, cfg.compare_order, tol, search=search)
    return verdict.to_json()


# entry point ----------------------------------------------------------------


def _common_options():
    # SUPPRESS keeps a subparser from clobbering a value given before the subcommand
    c = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    c.add_argument("--config", help="JSON config file; flags override it")
    c.add_argument("--format", choices=["json", "dot", "text"])
    c.add_argument("--order", type=int, help="holonomy jet order N")
    c.add_argument("--tol", type=float, help="integrator relative tolerance")
    c.add_argument("--membership-order", type=int)
    c.add_argument("--takens-order", type=int)
    c.add_argument("--seed", type=int, help="nonzero: rotate the offset ladder by a seeded phase")
    c.add_argument("--jobs", type=int, help="parallel holonomy generators")
    c.add_argument("-o", "--output", help="write to this file instead of stdout")
    return c


def build_parser():
    common = _common_options()
    p = argparse.ArgumentParser(prog="qhfol", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("analyze", parents=[common], help="weights, Euler, jacobian membership, Takens, generalized curve")
    s.add_argument("input")
    s.add_argument("--weight", help="wx,wy[,gamma] for forms")
    s = sub.add_parser("resolve", parents=[common], help="resolution tree of a curve or a form")
    s.add_argument("input")
    s = sub.add_parser("predict", parents=[common], help="dual tree from the Euclid quotients")
    s.add_argument("input")
    s.add_argument("--verify", action="store_true")
    s = sub.add_parser("takens", parents=[common], help="Takens normal form")
    s.add_argument("input")
    s.add_argument("--weight")
    s = sub.add_parser("holonomy", parents=[common], help="holonomy generators of the central component")
    s.add_argument("input")
    s = sub.add_parser("compare", parents=[common], help="same-holonomy test for two forms or rep files")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--pairing", default="identity", help="identity | cyclic | comma-separated permutation")
    s.add_argument("--compare-order", type=int)
    s.add_argument("--compare-tol", type=float)
    return p


def run(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    keys = ("format", "order", "tol", "membership_order", "takens_order", "seed", "jobs", "compare_order")
    overrides = {k: getattr(args, k, None) for k in keys}
    try:
        cfg = load_config(getattr(args, "config", None), overrides)
    except (ValueError, OSError) as e:
        parser.error(str(e))
    weight = None
    if getattr(args, "weight", None):
        try:
            weight = parse_weight(args.weight)
        except ValueError as e:
            parser.error(str(e))
    cmd = args.command
    if cmd == "analyze":
        result = cmd_analyze(args.input, cfg, weight)
    elif cmd == "resolve":
        result = cmd_resolve(args.input, cfg)
    elif cmd == "predict":
        result = cmd_predict(args.input, cfg, args.verify)
    elif cmd == "takens":
        result = cmd_takens(args.input, cfg, weight)
    elif cmd == "holonomy":
        result = cmd_holonomy(args.input, cfg)
    else:
        result = cmd_compare(args.first, args.second, cfg, args.pairing, args.compare_tol)
    text = result if isinstance(result, str) else serialize.dumps(result) + "\n"
    output = getattr(args, "output", None)
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        return run(argv)
    except SystemExit as e:  # argparse usage errors
        return e.code if isinstance(e.code, int) else 2
    except QHFolError as e:
        sys.stderr.write(f"error[{e.code}]: {e}\n")
        return 1
    except ValueError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())

