import json
import subprocess
import sys

import jsonschema
import pytest

from frobound import datasets, reproduce
from frobound.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_zeta_tsv(capsys):
    code, out, _ = run(capsys, "zeta", "--q", "4", "--factors", "[[4,5],[3,10],[0,11]]", "--upto", "4")
    assert code == 0
    assert out.splitlines()[1:] == ["1\t4\t55", "2\t16\t55", "3\t64\t55", "4\t256\t55"]


def test_zeta_curve_json(capsys):
    code, out, _ = run(capsys, "zeta", "--curve", "genus3-q2", "--upto", "5", "--format", "json")
    assert code == 0
    assert json.loads(out)["N"] == [6, 8, 6, 32, 6]


def test_zeta_weil_violation(capsys):
    code, _, err = run(capsys, "zeta", "--q", "4", "--factors", "[[5,1]]")
    assert code == 2 and "Weil bound" in err


def test_bound_from_files(capsys, tmp_path):
    fpath = tmp_path / "genus-free.json"
    fpath.write_text(json.dumps(datasets.polynomial("q2-genus-free").to_json()))
    tpath = tmp_path / "elliptic-q2.json"
    tpath.write_text(json.dumps(datasets.theta("elliptic-q2").to_json()))
    code, out, _ = run(capsys, "bound", "--regime", "u0_zero", "--q", "2", "--f", str(fpath), "--theta", str(tpath), "--format", "json")
    assert code == 0
    cert = json.loads(out)
    assert cert["bound"]["floor"] == 6


def test_bound_text_marks_approximations(capsys):
    code, out, _ = run(capsys, "bound", "--regime", "u0_one_restricted", "--q", "2", "--f", "cubic-exclusion", "--theta", '{"intervals": [[{"a": "0", "b": "-1/2", "d": 2}, "1"]]}')
    assert code == 0
    assert "N <= (1/2)*g + (9/2)" in out


def test_family_suzuki(capsys):
    code, out, _ = run(capsys, "family", "--m", "4", "--q", "8")
    assert code == 0
    assert "N > 65" in out


def test_family_json(capsys):
    code, out, _ = run(capsys, "family", "--m", "7", "--q", "2", "--format", "json")
    obj = json.loads(out)
    assert code == 0
    assert all(obj["checks"].values())
    assert obj["threshold"]["exact_certificate"] is False


def test_family_cap(capsys):
    code, _, err = run(capsys, "family", "--m", "65")
    assert code == 2 and "[2, 64]" in err


def test_exclude(capsys):
    code, out, _ = run(capsys, "exclude", "--q", "2", "--f", "cubic-exclusion", "--alpha=-sqrt(2)/2", "--beta=-1", "--exclude-pi")
    assert code == 0
    assert "(0.75π, 1π]" in out


def test_identity(capsys):
    code, out, _ = run(capsys, "identity", "--f", "q4-genus-cap", "--curve", "x11-q4", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["holds"] and obj["slack_zero"]


def test_identity_q_disagrees(capsys):
    code, _, err = run(capsys, "identity", "--f", "q4-genus-cap", "--curve", "x11-q4", "--q", "2")
    assert code == 2 and "disagrees" in err


def test_malformed_json_reports_position(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"u": [1,\n  2,\n')
    code, _, err = run(capsys, "bound", "--regime", "u0_one", "--q", "2", "--f", str(bad))
    assert code == 2
    assert "line 3" in err and "column" in err


def test_condition_failure_is_structured(capsys):
    code, _, err = run(capsys, "bound", "--regime", "u0_minus_one", "--q", "4", "--f", '{"u": ["-1", "0", "1"]}')
    assert code == 2
    payload = json.loads(err[err.index("{"):])
    assert payload["condition"] == "b"
    assert "witness" in payload


def test_condition_d_offers_fallback(capsys):
    code, _, err = run(capsys, "bound", "--regime", "u0_minus_one", "--q", "2", "--f", "q4-genus-cap", "--theta", "elliptic-q4-over-f2")
    assert code == 2
    assert "condition (d)" in err and "fallback" in err


def test_optimize_json_and_output(capsys, tmp_path):
    out_file = tmp_path / "cert.json"
    code, out, _ = run(
        capsys, "optimize", "--q", "4", "--theta", "elliptic-q4-over-f2", "--regime", "u0_minus_one",
        "--degree", "4", "--format", "json", "--output", str(out_file),
    )
    obj = json.loads(out)
    assert code == 0
    assert obj["objective"] == {"a": "52/1", "b": "0/1", "d": 0}
    assert json.loads(out_file.read_text()) == obj["certificate"]


def test_optimize_infeasible(capsys):
    code, _, err = run(capsys, "optimize", "--q", "2", "--theta", "full", "--regime", "u0_zero", "--degree", "4")
    assert code == 2 and "Infeasible" in err


def test_bad_q(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["zeta", "--q", "1", "--factors", "[]"])
    assert exc.value.code == 2


def test_unknown_builtin(capsys):
    code, _, err = run(capsys, "bound", "--regime", "u0_one", "--q", "2", "--f", "nope")
    assert code == 2 and "known:" in err


def test_reproduce_all_rows(capsys):
    code, out, _ = run(capsys, "reproduce-paper", "--format", "json")
    report = json.loads(out)
    assert code == 0
    assert report["count"] == 12 and report["all_match"]
    jsonschema.validate(report, reproduce.report_schema())


def test_reproduce_corrupted(capsys):
    code, out, _ = run(capsys, "reproduce-paper", "--corrupt", "q2-genus-free")
    assert code == 1
    assert "[FAIL] genus-free-q2" in out


def test_reproduce_tsv(capsys):
    code, out, _ = run(capsys, "reproduce-paper", "--format", "tsv")
    assert code == 0
    assert len(out.splitlines()) == 13


def test_outputs_are_byte_identical(capsys):
    argv = ["bound", "--regime", "u0_one", "--q", "3", "--f", "q3-linear", "--format", "json"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert "time" not in json.loads(first)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "frobound", "reproduce-paper", "--format", "json"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["all_match"]
