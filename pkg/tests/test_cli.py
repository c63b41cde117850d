import json

import pytest

from qhfol import serialize as S
from qhfol.algebra import BiPoly
from qhfol.cli import Config, load_config, main
from qhfol.forms import OneForm

P = BiPoly.parse


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_cusp(capsys):
    code, out, _ = run(capsys, "analyze", "y^2 - x^3")
    d = json.loads(out)
    assert code == 0
    assert (d["weight"]["alpha"], d["weight"]["beta"], d["weight"]["gamma"]) == (2, 3, 6)
    assert d["euler"] is True and d["jacobian_membership"]["member"] is True
    assert d["generalized_curve"] is True


def test_analyze_perturbed_cusp(capsys):
    code, out, _ = run(capsys, "analyze", "y^2 - x^3 + x^4")
    d = json.loads(out)
    assert code == 0 and d["weight"] is None and d["quasi_homogeneous"] is False
    assert d["jacobian_membership"]["member"] is True


def test_analyze_form_reports_takens(capsys):
    code, out, _ = run(capsys, "analyze", "d(y^2-x^3)")
    d = json.loads(out)
    assert code == 0 and d["closed"] and d["takens"]["h"] == "0"


def test_parse_error_exit_code(capsys):
    code, out, err = run(capsys, "analyze", "y^^2")
    assert code == 1 and out == ""
    assert err.startswith("error[parse_error]") and "offset 2" in err


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "resolve")[0] == 2
    assert run(capsys, "--order", "0", "resolve", "x*y")[0] == 2
    assert run(capsys, "takens", "x*y", "--weight", "1,2,3,4")[0] == 2


def test_domain_error_exit_code(capsys):
    code, _, err = run(capsys, "predict", "y^2-x^3+x^4")
    assert code == 1 and "not_quasi_homogeneous" in err


def test_resolve_cusp(capsys):
    code, out, _ = run(capsys, "resolve", "y^2-x^3")
    d = json.loads(out)
    assert code == 0 and len(d["components"]) == 3 and d["central"] == 3


def test_resolve_dot_and_text(capsys):
    _, dot, _ = run(capsys, "resolve", "y^2-x^3", "--format", "dot")
    assert dot.startswith("graph resolution")
    _, text, _ = run(capsys, "--format", "text", "resolve", "d(y^2-x^3)")
    assert "*central*" in text


def test_predict_verify(capsys):
    code, out, _ = run(capsys, "predict", "--verify", "y^3-x^5")
    assert code == 0 and json.loads(out)["match"] is True


def test_predict_plain(capsys):
    _, out, _ = run(capsys, "predict", "y^3-x^5")
    d = json.loads(out)
    assert d["euclid"]["quotients"] == [1, 1, 2] and d["predicted"]["component_count"] == 4


def test_takens_with_weight(capsys):
    code, out, _ = run(capsys, "takens", "-2*x*y^2 - 3*x^2 ; 2*y + 3*x^2*y", "--weight", "2,3,6")
    d = json.loads(out)
    assert code == 0 and d["h"] == "x*y" and d["f"] == "y^2 - x^3"


def test_holonomy_and_compare(capsys, tmp_path):
    w0 = OneForm.parse("-3*x^2 - 2*x*y^2 ; 2*y + 3*x^2*y")
    w1 = w0.pullback(P("x+x^2"), P("y+x*y"))
    f0, f1 = tmp_path / "omega0.json", tmp_path / "omega1.json"
    f0.write_text(S.dumps(w0.to_json()))
    f1.write_text(S.dumps(w1.to_json()))
    code, out, _ = run(capsys, "compare", str(f0), str(f1), "--pairing", "cyclic")
    verdict = json.loads(out)
    assert code == 0 and verdict["conjugate"] is True and verdict["obstruction"] is None

    rep = tmp_path / "rep.json"
    code, _, _ = run(capsys, "holonomy", "d(y^2-x^3)", "-o", str(rep), "--jobs", "2")
    assert code == 0 and len(json.loads(rep.read_text())["generators"]) == 3
    code, out, _ = run(capsys, "compare", str(rep), str(rep))
    assert code == 0 and json.loads(out)["conjugate"] is True


def test_output_is_byte_stable(capsys):
    a = run(capsys, "holonomy", "d(y^2-x^3)")[1]
    b = run(capsys, "holonomy", "d(y^2-x^3)")[1]
    assert a == b


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"order": 6, "tol": 1e-9, "format": "dot"}))
    c = load_config(str(cfg), {"order": 5, "format": None})
    assert (c.order, c.tol, c.format) == (5, 1e-9, "dot")
    with pytest.raises(ValueError):
        load_config(None, {"tol": -1.0})
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    with pytest.raises(ValueError):
        load_config(str(bad), {})


def test_config_defaults():
    c = Config()
    assert (c.order, c.tol, c.membership_order, c.format) == (8, 1e-10, 12, "json")


def test_seed_rotates_offsets():
    a, b = Config(seed=1).numeric_params(), Config(seed=1).numeric_params()
    assert a.offsets == b.offsets and a.offsets is not None
    assert Config().numeric_params().offsets is None
