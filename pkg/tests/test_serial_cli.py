import json

import pytest

from hdts.core import boundary, cube, double, interval, make_map
from hdts.ops import coproduct, is_isomorphic
from hdts.precub import precub_boundary, precub_cube, find_precub_isomorphism
from hdts.homotopy import parallel_collapse, wedge_inclusion
from hdts.serial import (dump_json, export_dot, hdts_from_data, hdts_to_data,
                         load_any, map_from_data, map_to_data,
                         precub_from_data, precub_to_data)
from hdts.cli import run


def test_hdts_roundtrip_canonical():
    x = hdts_from_data({
        "sigma": ["a"],
        "states": ["p", "q"],
        "actions": [{"id": "u", "label": "a"}],
        "transitions": [{"from": "p", "actions": ["u"], "to": "q"}],
    })
    again = hdts_from_data(hdts_to_data(x))
    assert again == x


def test_hdts_roundtrip_structured_ids():
    x = cube(("a", "b"))
    again = hdts_from_data(hdts_to_data(x))
    assert is_isomorphic(again, x)


def test_transition_actions_canonicalized_on_load():
    x = hdts_from_data({
        "sigma": ["a", "b"],
        "states": ["p", "q"],
        "actions": [{"id": "u", "label": "a"}, {"id": "v", "label": "b"}],
        "transitions": [{"from": "p", "actions": ["v", "u"], "to": "q"}],
    })
    assert x.transitions[0].actions == ("u", "v")


def test_precub_roundtrip():
    for k in [precub_cube(("a", "b")), precub_boundary(("x", "y"))]:
        again = precub_from_data(precub_to_data(k))
        assert find_precub_isomorphism(again, k) is not None


def test_map_roundtrip():
    f = wedge_inclusion("x", ("x",))
    again = map_from_data(map_to_data(f))
    assert is_isomorphic(again.dom, f.dom)
    assert is_isomorphic(again.cod, f.cod)


def test_dot_export_double():
    text = export_dot(double("x"))
    assert text.count("->") == 2
    assert text.count('label="x"') == 2
    assert export_dot(cube((), ("a",))).count("->") == 0
    # determinism
    assert text == export_dot(double("x"))


def test_dot_export_precub():
    text = export_dot(precub_cube(("a",)))
    assert text.count("->") == 1


def test_dangling_reference_is_parse_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({
        "sigma": ["a"], "states": ["p"],
        "actions": [{"id": "u", "label": "a"}],
        "transitions": [{"from": "p", "actions": ["u"], "to": "nowhere"}],
    }))
    with pytest.raises(ValueError):
        load_any(str(p))


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def _write(tmp_path, name, obj):
    p = tmp_path / name
    dump_json(obj, str(p))
    return str(p)


def test_cli_validate_and_info(tmp_path, capsys):
    path = _write(tmp_path, "c2.json", cube(("a", "b")))
    assert run(["validate", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] is True
    assert run(["info", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["states"] == 4 and report["cubical"] is True


def test_cli_cube_and_realize(tmp_path, capsys):
    out = str(tmp_path / "sq.json")
    assert run(["cube", "a", "b", "--precub", "--out", out]) == 0
    capsys.readouterr()
    assert run(["realize", out]) == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["result"]["actions"]) == 2


def test_cli_equiv_exit_codes(tmp_path, capsys):
    p = parallel_collapse("x", ("x",))
    path = _write(tmp_path, "px.json", p)
    assert run(["equiv", "--model", "localized", path]) == 0
    capsys.readouterr()
    assert run(["equiv", "--model", "cts", path]) == 1
    capsys.readouterr()


def test_cli_check_hda_negative(tmp_path, capsys):
    from hdts.precub import pushout_precub, make_precub_map
    b = precub_boundary(("x", "y"))
    c = precub_cube(("x", "y"))
    incl = make_precub_map(b, c, {(n, x): x for n in range(b.dim + 1)
                                  for x in b.cells_at(n)})
    po = pushout_precub(incl, incl)
    path = _write(tmp_path, "dbl.json", po.apex)
    assert run(["check-hda", path]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["witness"]
    assert run(["sh", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["cells_merged"] == 2


def test_cli_dot_deterministic(tmp_path, capsys):
    path = _write(tmp_path, "d.json", double("x"))
    assert run(["dot", path]) == 0
    first = capsys.readouterr().out
    assert run(["dot", path]) == 0
    second = capsys.readouterr().out
    assert first == second
    assert first.count("->") == 2


def test_cli_reports_reproducible(tmp_path, capsys):
    path = _write(tmp_path, "b.json", boundary(("x", "y")))
    assert run(["cubify", path]) == 0
    first = capsys.readouterr().out
    assert run(["cubify", path]) == 0
    second = capsys.readouterr().out
    assert first == second
    report = json.loads(first)
    assert report["counit_iso"] is False
    assert len(report["result"]["actions"]) == 4


def test_cli_csa1_bls(tmp_path, capsys):
    sigma = ("x",)
    co = coproduct(cube(("x",), sigma), cube(("x",), sigma)).apex
    path = _write(tmp_path, "co.json", co)
    assert run(["bls", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["result"]["actions"]) == 1
    assert run(["csa1", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["identity_unit"] is True


def test_cli_homotopic_and_cellularize(tmp_path, capsys):
    f = wedge_inclusion("x", ("x",))
    path = _write(tmp_path, "f.json", f)
    assert run(["homotopic", path, path]) == 0
    capsys.readouterr()
    assert run(["cellularize", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["replay_ok"] is True
    assert report["cell_count"] == 1


def test_cli_lambda(capsys):
    assert run(["lambda", "--labels", "x", "--depth", "0",
                "--dim-bound", "1"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["count"] >= 1


def test_cli_error_exit(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    assert run(["validate", str(p)]) == 2


def test_cli_nerve_and_coreflect(tmp_path, capsys):
    path = _write(tmp_path, "d.json", double("x"))
    assert run(["nerve", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["result"]["cells"]["0"]
    from hdts.core import pure_transition
    path = _write(tmp_path, "p.json", pure_transition(("a", "b")))
    assert run(["coreflect", path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["unchanged"] is False
    assert len(report["result"]["states"]) == 2
    assert not report["result"]["actions"]
