import json
import subprocess
import sys
from pathlib import Path

import pytest

from qrfcode.cli import run

DEMOS = Path(__file__).resolve().parent.parent / "demos"


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def write_errors(tmp_path, errors, name="errs.json"):
    path = tmp_path / name
    path.write_text(json.dumps({"errors": errors}))
    return str(path)


def test_build(capsys):
    code, doc, _ = call(capsys, "build", "--code", "5qubit")
    assert code == 0
    assert (doc["n"], doc["k"], doc["group_order"]) == (5, 1, 16)
    assert doc["generators"][0] == "ZXIXZ"


def test_unknown_code_and_bad_flag(capsys):
    code, doc, err = call(capsys, "build", "--code", "nosuch")
    assert code == 2 and doc is None and "3qubit" in err
    assert run(["build", "--code", "3qubit", "--bogus"]) == 2
    assert run([]) == 2
    capsys.readouterr()


def test_kl_check_single_paulis(capsys):
    code, doc, _ = call(capsys, "kl-check", "--code", "5qubit", "--errors", str(DEMOS / "single-paulis.json"))
    assert code == 0
    assert doc["correctable"] and doc["dense_agrees"]
    assert len(set(doc["sectors"])) == 16
    assert doc["C"][0][0] == 1.0 and doc["C"][0][1] == 0.0


def test_kl_check_failure(capsys, tmp_path):
    path = write_errors(tmp_path, ["III", "XII", "ZII"])
    code, doc, _ = call(capsys, "kl-check", "--code", "3qubit", "--errors", path)
    assert code == 1 and not doc["correctable"]
    assert doc["C"][0][2] is None
    assert doc["diagnostics"]["violations"] == [[0, 2, "ZII"]]


def test_kl_check_unreadable(capsys, tmp_path):
    code, _, err = call(capsys, "kl-check", "--code", "3qubit", "--errors", str(tmp_path / "missing.json"))
    assert code == 2 and "cannot read" in err


def test_frame_local(capsys):
    code, doc, _ = call(capsys, "frame", "local", "--code", "5qubit")
    assert code == 0 and doc["orientation_orthonormal"]
    assert len(doc["system_qubits"]) == 1 and len(doc["fragments_R"]) == 16
    code, doc, _ = call(capsys, "frame", "local", "--code", "5qubit", "--frame-qubits", "1,2,3,4")
    assert code == 0 and doc["system_qubits"] == [5]
    assert doc["fragments_R"][:3] == ["IIII", "ZXIX", "IYXX"]
    assert doc["seed"] == "product:XXXX"
    code, _, err = call(capsys, "frame", "local", "--code", "3qubit", "--frame-qubits", "1")
    assert code == 2 and err


def test_frame_from_errors(capsys, tmp_path):
    code, doc, _ = call(capsys, "frame", "from-errors", "--code", "3qubit")
    assert code == 0 and doc["frame_algebra_dim"] == 16
    assert sorted(doc["errors"]) == ["III", "IIX", "IXI", "XII"]
    path = write_errors(tmp_path, ["XXI", "IXX", "XIX"])
    code, doc, _ = call(capsys, "frame", "from-errors", "--code", "3qubit", "--errors", path)
    assert code == 0 and sorted(doc["errors"]) == ["III", "IXX", "XIX", "XXI"]


@pytest.mark.parametrize("frame", ["local", "errors", "local:1,2,3,4"])
def test_duality(capsys, frame):
    code, doc, _ = call(capsys, "duality", "--code", "5qubit", "--frame", frame)
    assert code == 0 and doc["ok"] and doc["weyl"]["ok"]
    assert min(doc["dual_recovery_fidelity"]) == 1.0


def test_surface(capsys):
    code, doc, _ = call(capsys, "surface", "--lattice", "rect:2x2", "--forests", "--defect-demo")
    assert code == 0
    assert (doc["n"], doc["k"]) == (13, 1)
    assert doc["forests"]["leftover_count"] == 1 and doc["forests"]["problems"] == []
    assert [row["class"] for row in doc["defect_demo"]] == ["corrected", "logical"]
    assert doc["defect_demo"][0]["fidelity"] == 1.0
    code, doc, _ = call(capsys, "surface", "--lattice", "torus:2x2", "--forests")
    assert code == 0 and doc["genus"] == 1 and doc["k"] == 2 and len(doc["relations"]) == 2


def test_surface_bad_lattice(capsys):
    code, _, err = call(capsys, "surface", "--lattice", "rect:axb")
    assert code == 2 and "bad lattice" in err


def test_verify_all_report(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, doc, _ = call(capsys, "verify-all", "--code", "3qubit", "--out", str(out))
    assert code == 0 and doc["ok"]
    assert set(doc) == {"schema", "tool_version", "target", "summary", "ok", "checks"}
    assert doc["summary"]["fail"] == 0 and doc["summary"]["pass"] == len(doc["checks"])
    for rec in doc["checks"]:
        assert set(rec) == {"name", "anchor", "verdict", "max_dev", "detail"}
        assert rec["verdict"] in ("pass", "fail", "skipped")
    assert json.loads(out.read_text()) == doc
    first = out.read_bytes()
    assert run(["verify-all", "--code", "3qubit", "--out", str(out)]) == 0
    capsys.readouterr()
    assert out.read_bytes() == first


def test_verify_all_lattice_and_cap(capsys):
    code, doc, _ = call(capsys, "verify-all", "--code", "rect:1x1")
    assert code == 0 and doc["ok"]
    code, doc, _ = call(capsys, "verify-all", "--code", "5qubit", "--max-dense-n", "3")
    assert code == 0 and doc["summary"]["skipped"] > 0


def test_catalog_override(capsys, tmp_path, monkeypatch):
    (tmp_path / "rep4.json").write_text(json.dumps(
        {"name": "rep4", "n": 4, "generators": ["ZZII", "IZZI", "IIZZ"],
         "logical_z": ["ZIII"], "logical_x": ["XXXX"]}))
    monkeypatch.setenv("QRFCODE_CATALOG", str(tmp_path))
    code, doc, _ = call(capsys, "build", "--code", "rep4")
    assert code == 0 and doc["group_order"] == 8
    code, _, err = call(capsys, "build", "--code", "5qubit")
    assert code == 2 and "rep4" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qrfcode.cli", "build", "--code", "3qubit"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["generators"] == ["ZZI", "IZZ"]
