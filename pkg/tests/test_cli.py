import json
import subprocess
import sys

import pytest

from cjtkit.cli import run
from cjtkit.fileformats import (
    SchemaError,
    fixture_path,
    load_quiver,
    load_rep,
    quiver_from_doc,
    rep_from_doc,
)
from cjtkit.quiver import kronecker_P, running_example_quiver

K2 = fixture_path("kronecker2.json")
RUN = fixture_path("running_example.json")


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, err = invoke(capsys, *argv, "--json")
    assert code == 0, err
    return json.loads(out)


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(p)


# -- file formats ----------------------------------------------------------------

def test_fixtures_load():
    q, w, _ = load_quiver(RUN)
    assert q == running_example_quiver() and w.as_dict() == {"0": 2, "1": -1, "2": -1}
    kq, _, _ = load_quiver(K2)
    M, _ = load_rep(kq, fixture_path("P3.json"))
    assert M == kronecker_P(3)


def test_explicit_representation_document():
    q, _ = quiver_from_doc({"vertices": ["1", "2"], "arrows": [{"id": "a1", "tail": "1", "head": "2"}],
                            "weight": {"1": 1, "2": -1}})
    M = rep_from_doc(q, {"dims": {"1": 1, "2": 2}, "maps": {"a1": [["1/2"], [3]]}})
    assert M.maps["a1"].to_list() == [[0.5], [3]]
    with pytest.raises(SchemaError):
        rep_from_doc(q, {"dims": {"1": 1, "2": 2}, "maps": {"a1": [[1]]}})
    with pytest.raises(SchemaError):
        rep_from_doc(q, {"dims": {"1": 1}, "maps": {"zz": [[1]]}})
    with pytest.raises(SchemaError):
        rep_from_doc(q, {"dims": {"1": 1}, "maps": {"a1": [[0.5]]}})
    with pytest.raises(SchemaError):
        rep_from_doc(q, {"builtin": "P(2)"})  # one-arrow quiver is not K_2


@pytest.mark.parametrize("doc", [
    {"vertices": ["x"], "arrows": []},
    {"vertices": ["x"], "arrows": [], "weight": {"x": 0}},
    {"vertices": ["x", "y"], "arrows": [{"id": "a", "tail": "x"}], "weight": {}},
    {"vertices": ["x", "y"], "arrows": [], "weight": {"x": 1, "y": 1}},
])
def test_bad_quiver_documents(doc):
    with pytest.raises(SchemaError):
        quiver_from_doc(doc)


# -- commands ----------------------------------------------------------------------

def test_flows_running_example(capsys):
    r = report(capsys, "flows", RUN)
    assert r["schema"] == "cjt-report/1" and r["command"] == "flows"
    pts = [tuple(p[a] for a in ("a1", "a2", "a3", "a4")) for p in r["result"]["points"]]
    assert pts == [(1, 1, 0, 0), (1, 0, 1, 0), (0, 2, 0, 1), (0, 1, 1, 1), (0, 0, 2, 1)]
    code, out, _ = invoke(capsys, "flows", RUN)
    assert code == 0 and "(0, 2, 0, 1)" in out


def test_jtype_generic_P3(capsys):
    code, out, _ = invoke(capsys, "jtype", K2, fixture_path("P3.json"), "--generic", "--seed", "1")
    assert code == 0 and "[2]^3 [1]^1" in out


def test_jtype_at_point(capsys):
    r = report(capsys, "jtype", K2, fixture_path("regular11.json"), "--at", "a1=1,a2=-1", "--field", "q")
    assert r["result"]["profile"] == [2, 0, 0] and r["field"] == "q"


def test_cjt_projective(capsys):
    r = report(capsys, "cjt", RUN, fixture_path("proj2.json"), "--seed", "0")
    assert r["result"]["verdict"] == "NotConstant"


def test_cjt_certify(capsys):
    r = report(capsys, "cjt", K2, fixture_path("P3.json"), "--seed", "0", "--certify",
               "--per-stratum", "20", "--dense", "50")
    assert r["result"]["verdict"] == "CertifiedConstant"


def test_eip_ekp(capsys):
    r = report(capsys, "eip", K2, fixture_path("I2.json"), "--seed", "0", "--per-stratum", "10", "--dense", "20")
    assert r["result"]["verdict"] == "EIPProbable" and r["result"]["hom_ext"]
    r = report(capsys, "ekp", K2, fixture_path("I2.json"), "--seed", "0", "--per-stratum", "10", "--dense", "20")
    assert r["result"]["verdict"] == "NotEKP"


def test_sheaf(capsys):
    r = report(capsys, "sheaf", K2, fixture_path("I2.json"), "--i", "1")
    assert r["result"]["splitting_type"]["degrees"] == [-2]
    r = report(capsys, "sheaf", K2, fixture_path("P3.json"), "--i", "2", "--j", "1", "--window", "0..4")
    assert sorted(r["result"]["hilbert"]["values"]) == ["0", "1", "2", "3", "4"]


def test_jtable(capsys):
    r = report(capsys, "jtable", RUN, "--seed", "0", "--target", "0,0,1")
    assert r["result"]["table"]["matrix"] == [[1, 0, 0], [1, 1, 0], [2, 0, 1]]
    assert r["result"]["target"]["coefficients"] == {"0": -2, "2": 0, "1": 1}


def test_reports_are_byte_stable(capsys, tmp_path):
    out1 = tmp_path / "a.json"
    argv = ["cjt", RUN, fixture_path("proj2.json"), "--seed", "3", "--json"]
    code, first, _ = invoke(capsys, *argv, "--out", str(out1))
    code2, second, _ = invoke(capsys, *argv, "--out", str(out1))
    assert code == code2 == 0 and first == second
    assert json.loads(out1.read_text()) == json.loads(first)


def test_timing_is_opt_in(capsys):
    assert "timing" not in report(capsys, "flows", K2)
    assert "seconds" in report(capsys, "flows", K2, "--timing")["timing"]


# -- exit codes ----------------------------------------------------------------------

def error_of(err):
    return json.loads(err.strip().splitlines()[-1])["error"]


def test_missing_seed_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["cjt", K2, fixture_path("P3.json")])
    assert exc.value.code == 2
    assert error_of(capsys.readouterr().err)["type"] == "UsageError"
    code, _, err = invoke(capsys, "jtype", K2, fixture_path("P3.json"), "--generic")
    assert code == 2 and error_of(err)["type"] == "MissingSeed"


def test_schema_errors(capsys, tmp_path):
    bad = write(tmp_path, "bad.json", "{not json")
    code, _, err = invoke(capsys, "flows", bad)
    assert code == 2 and error_of(err)["exit_code"] == 2
    code, _, _ = invoke(capsys, "flows", str(tmp_path / "missing.json"))
    assert code == 2
    code, _, _ = invoke(capsys, "jtype", K2, fixture_path("P3.json"), "--at", "a1=1")
    assert code == 2
    code, _, _ = invoke(capsys, "flows", K2, "--field", "reals")
    assert code == 2
    code, _, _ = invoke(capsys, "sheaf", K2, fixture_path("P3.json"), "--i", "1", "--window", "5..1")
    assert code == 2


def test_precondition_errors(capsys, tmp_path):
    cyc = write(tmp_path, "cyc.json", {"vertices": ["x", "y"], "arrows": [
        {"id": "a", "tail": "x", "head": "y"}, {"id": "b", "tail": "y", "head": "x"}], "weight": {"x": 1, "y": -1}})
    code, _, err = invoke(capsys, "flows", cyc)
    assert code == 3 and error_of(err)["type"] == "CycleError"
    empty = write(tmp_path, "empty.json", {"vertices": ["1", "2"], "arrows": [
        {"id": "a1", "tail": "1", "head": "2"}], "weight": {"1": -1, "2": 1}})
    code, _, err = invoke(capsys, "flows", empty)
    assert code == 3 and error_of(err)["type"] == "EmptySemistableLocus"
    code, _, err = invoke(capsys, "sheaf", RUN, fixture_path("inj1.json"), "--i", "1")
    assert code == 3 and error_of(err)["type"] == "UnsupportedQuiverError"


def test_budget_errors(capsys):
    code, _, err = invoke(capsys, "sheaf", K2, fixture_path("I2.json"), "--i", "1", "--window", "0..1")
    assert code == 4 and error_of(err)["type"] == "WindowTooSmallError"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cjtkit", "flows", K2], capture_output=True, text=True)
    assert proc.returncode == 0 and "flow points (2)" in proc.stdout
