import json
import subprocess
import sys

import pytest

from pacone.cli import main
from pacone.qfield import QuadField
from pacone.presentation import fixture_text

from conftest import DATA

K = QuadField(21)


def run(argv, tmp_path, name="out"):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    return code, out.read_text(encoding="utf-8") if out.exists() else ""


def write(tmp_path, doc, name="in.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc), encoding="utf-8")
    return str(p)


def fixture_doc():
    return json.loads(fixture_text("genus2"))


def test_validate_fixture(tmp_path):
    code, text = run(["validate", "--fixture", "genus2"], tmp_path)
    assert code == 0
    assert "ok     = yes" in text


def test_broken_lambda(tmp_path, capsys):
    doc = fixture_doc()
    doc["lambda"] = "1"
    code, _ = run(["validate", "--input", write(tmp_path, doc, "broken.json")], tmp_path)
    assert code == 1
    assert "dilatation must exceed 1" in capsys.readouterr().err


def test_deform_pinned(tmp_path):
    code, text = run(["deform", "--fixture", "genus2", "--set", "y5=0", "--set", "y6=-2*r", "--format", "json"], tmp_path)
    assert code == 0
    doc = json.loads(text)
    c = doc["deformation"]["cocycle"]
    assert K.parse(c["y1"]) == K(-3, 1, 2)
    assert K.parse(c["y2"]) == K(-3, 1, 2)
    assert doc["deformation"]["oracle"]["ok"] is True


def test_deform_symbolic(tmp_path):
    code, text = run(["deform", "--fixture", "genus2"], tmp_path)
    assert code == 0
    assert "y5" in text and "constraints" in text


@pytest.mark.parametrize("argv,code", [
    (["validate", "--input", "MISSING"], 3),
    (["frobnicate", "--fixture", "genus2"], 3),
    (["validate"], 3),
    (["validate", "--fixture", "genus2", "--input", "x.json"], 3),
    (["validate", "--fixture", "genus7"], 3),
    (["deform", "--fixture", "genus2", "--set", "y1=0"], 3),
    (["deform", "--fixture", "genus2", "--set", "y5"], 3),
    (["deform", "--fixture", "genus2", "--set", "y5=abc"], 3),
    (["deform", "--fixture", "genus2", "--z-scale", "0"], 3),
    (["deform", "--fixture", "genus2", "--set", "y5=-1*r", "--set", "y6=-1*r"], 2),
    (["analyze", "--fixture", "genus2"], 2),
    (["holonomy", "--fixture", "genus2", "--set", "y5=0", "--set", "y6=-2*r"], 0),
    (["cone", "--fixture", "genus2"], 0),
])
def test_exit_codes(argv, code, tmp_path, capsys):
    argv = [a if a != "MISSING" else str(tmp_path / "missing.json") for a in argv]
    got, _ = run(argv, tmp_path)
    assert got == code
    if code:
        assert capsys.readouterr().err.strip()


@pytest.mark.parametrize("mutate,code", [
    (lambda d: "{not json", 3),
    (lambda d: {**d, "genus": 0}, 3),
    (lambda d: {**d, "mu_u": d["mu_u"][:3]}, 3),
    (lambda d: {**d, "phi": {**d["phi"], "a1": "q9"}}, 3),
    (lambda d: {**d, "lambda": "(5-1*r)/2"}, 1),
    (lambda d: {**d, "mu_s": [*d["mu_s"][:4], "1", "0"]}, 1),
    (lambda d: {**d, "phi": {**d["phi"], "d1": "d1 d2"}}, 1),
    (lambda d: {**d, "mu_s": d["mu_u"]}, 1),
])
def test_malformed_inputs(mutate, code, tmp_path):
    path = write(tmp_path, mutate(fixture_doc()))
    got, _ = run(["report", "--input", path], tmp_path)
    assert got == code


def test_synthetic_report(tmp_path):
    code, text = run(["report", "--input", str(DATA / "torus1.json"), "--decreasing"], tmp_path)
    assert code == 0
    assert "dim H^1 = 1 = k" in text


def test_fixture_report_flags_dimension(tmp_path, capsys):
    code, text = run(["report", "--fixture", "genus2"], tmp_path)
    assert code == 2
    assert "dim H^1 = 1 != k = 2" in text
    assert "deformation: dim H^1 = 1" in capsys.readouterr().err


@pytest.mark.xfail(strict=True, reason="fixture words lose one cocycle dimension; see decisions ledger")
def test_fixture_report_text_line(tmp_path):
    _, text = run(["report", "--fixture", "genus2"], tmp_path)
    assert "dim H^1 = 2 = k" in text


@pytest.mark.xfail(strict=True, reason="equal split violates the fixture surface constraint; see decisions ledger")
def test_fixture_report_decreasing(tmp_path):
    code, text = run(["report", "--fixture", "genus2", "--decreasing", "--format", "json"], tmp_path)
    assert json.loads(text)["cone"]["omega_tot"] == "-4*r"
    assert code == 0


def test_omega_tot_json(tmp_path):
    code, text = run(["report", "--fixture", "genus2", "--decreasing", "--format", "json"], tmp_path)
    doc = json.loads(text)
    assert code == 2
    assert doc["cone"]["omega_tot"] == "-4*r"
    assert doc["input"]["disc"] == 21
    assert "rejected" in doc["cone"]["decreasing_error"]
    assert any("decreasing_choice" in f for f in doc["status"]["failures"])


def test_deterministic(tmp_path):
    a = run(["report", "--fixture", "genus2", "--format", "json"], tmp_path, "a")[1]
    b = run(["report", "--fixture", "genus2", "--format", "json"], tmp_path, "b")[1]
    assert a == b
    c = run(["report", "--fixture", "genus2"], tmp_path, "c")[1]
    d = run(["report", "--fixture", "genus2"], tmp_path, "d")[1]
    assert c == d


def _strings(v):
    if isinstance(v, dict):
        for x in v.values():
            yield from _strings(x)
    elif isinstance(v, list):
        for x in v:
            yield from _strings(x)
    elif isinstance(v, str):
        yield v


def test_json_literals_canonical(tmp_path):
    _, text = run(["report", "--input", str(DATA / "torus2.json"), "--decreasing", "--format", "json"], tmp_path)
    doc = json.loads(text)
    F = QuadField(doc["input"]["disc"])
    seen = 0
    for s in _strings(doc):
        if F._literal.match(s):
            assert F.parse(s).literal() == s
            seen += 1
    assert seen > 50


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "pacone", "validate", "--fixture", "genus2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("pacone validate")
