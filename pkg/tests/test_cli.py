"""Command-line driver: output shapes, exit codes, env handling, determinism."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from branchflow.cli import main

REPO = Path(__file__).resolve().parent.parent
FIXTURE = REPO / "src" / "branchflow" / "data" / "fk_fixture.json"


def run(argv, capsys):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def json_lines(out):
    return [json.loads(line) for line in out.splitlines()]


# --- coeffs ---------------------------------------------------------------


def test_coeffs_f_order_2(capsys):
    rc, out, _ = run(["coeffs", "f", "--order", "2"], capsys)
    assert rc == 0
    doc = json.loads(out)
    assert doc == {
        "family": "f",
        "order": 2,
        "coeffs": [
            {"index": 1, "value": "1"},
            {"index": 0, "value": "2/3"},
            {"index": -1, "value": "-1/12"},
        ],
    }


def test_coeffs_b_order_3(capsys):
    rc, out, _ = run(["coeffs", "b", "--order", "3"], capsys)
    assert rc == 0
    values = [row["value"] for row in json.loads(out)["coeffs"]]
    assert values == ["1", "1/3", "1/36"]


def test_coeffs_csv_format(capsys):
    rc, out, _ = run(["coeffs", "f", "--order", "2", "--format", "csv"], capsys)
    assert rc == 0
    assert out == "index,value\n1,1\n0,2/3\n-1,-1/12\n"


def test_coeffs_out_file(tmp_path, capsys):
    target = tmp_path / "dump.json"
    rc, out, _ = run(["coeffs", "stirling", "--order", "3", "--out", str(target)], capsys)
    assert rc == 0
    assert out == ""
    doc = json.loads(target.read_text())
    assert [row["value"] for row in doc["coeffs"]] == ["1", "1/12", "1/288", "-139/51840"]


def test_coeffs_families_all_runnable(capsys):
    from branchflow.cli import FAMILIES

    for family in FAMILIES:
        rc, out, _ = run(["coeffs", family, "--order", "3"], capsys)
        assert rc == 0, family
        assert json.loads(out)["family"] == family


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "branchflow", "coeffs", "f", "--order", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["coeffs"][0] == {"index": 1, "value": "1"}


# --- usage errors ------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["coeffs", "b", "--order", "0"],
        ["verify", "iden", "--order", "-3"],
        ["coeffs", "f", "--order", "201"],
        ["coeffs", "f", "--order", "2.5"],
        ["coeffs", "nosuchfamily", "--order", "3"],
        ["verify", "nosuchidentity", "--order", "3"],
        ["verify", "grading", "--range", "abc"],
        ["verify", "grading", "--range", "3..1"],
        ["verify", "grading", "--weight", "17"],
        ["verify", "grading", "--weight", "0"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_env_default_order(monkeypatch, capsys):
    monkeypatch.setenv("BRANCHFLOW_DEFAULT_ORDER", "3")
    rc, out, _ = run(["coeffs", "b"], capsys)
    assert rc == 0
    assert len(json.loads(out)["coeffs"]) == 3


def test_env_malformed_order_rejected(monkeypatch, capsys):
    monkeypatch.setenv("BRANCHFLOW_DEFAULT_ORDER", "many")
    with pytest.raises(SystemExit) as exc:
        main(["coeffs", "b"])
    assert exc.value.code == 2
    # explicit --order wins, the env value is never consulted
    rc, _, _ = run(["coeffs", "b", "--order", "2"], capsys)
    assert rc == 0


# --- verify -------------------------------------------------------------------


def test_verify_report_shape(capsys):
    rc, out, err = run(["verify", "v-ode", "--order", "8"], capsys)
    assert rc == 0
    (doc,) = json_lines(out)
    assert set(doc) == {"identity", "order", "status", "first_mismatch", "elapsed_ms"}
    assert doc["identity"] == "v-ode"
    assert doc["order"] == 8
    assert doc["status"] == "PASS"
    assert doc["first_mismatch"] is None
    assert "1 PASS, 0 FAIL, 0 SKIPPED" in err


def test_verify_negative_range_token(capsys):
    # the separate-token form must survive argparse's option-name heuristics
    rc, out, _ = run(
        ["verify", "grading", "--order", "5", "--weight", "4", "--range", "-2..2"],
        capsys,
    )
    assert rc == 0
    docs = json_lines(out)
    assert [d["identity"] for d in docs] == [f"grading(m={m})" for m in range(-2, 3)]
    assert all(d["status"] == "PASS" for d in docs)


def test_verify_heisenberg_skips_diagonal(capsys):
    rc, out, _ = run(
        ["verify", "heisenberg-commutators", "--order", "5", "--weight", "3",
         "--range", "-1..1"],
        capsys,
    )
    assert rc == 0
    docs = json_lines(out)
    # n = 0 is not scanned; the two n + k = 0 cells are reported as skipped
    assert len(docs) == 6
    statuses = {d["identity"]: d["status"] for d in docs}
    assert statuses["heisenberg-commutators(n=-1,k=1)"] == "SKIPPED"
    assert statuses["heisenberg-commutators(n=1,k=-1)"] == "SKIPPED"
    assert sum(1 for s in statuses.values() if s == "PASS") == 4


def test_verify_virasoro_cell(capsys):
    rc, out, _ = run(
        ["verify", "virasoro-commutators", "--order", "5", "--weight", "3",
         "--range", "0..1"],
        capsys,
    )
    assert rc == 0
    docs = json_lines(out)
    assert [d["identity"] for d in docs] == [
        "virasoro-commutators(m=0,n=0)",
        "virasoro-commutators(m=0,n=1)",
        "virasoro-commutators(m=1,n=0)",
        "virasoro-commutators(m=1,n=1)",
    ]


def test_verify_determinism(capsys):
    argv = ["verify", "kw-constraints"]
    rc1, out1, _ = run(argv, capsys)
    rc2, out2, _ = run(argv, capsys)
    assert rc1 == rc2 == 0

    def scrub(out):
        docs = json_lines(out)
        for doc in docs:
            doc.pop("elapsed_ms")
        return docs

    assert scrub(out1) == scrub(out2)


def test_coeffs_determinism(capsys):
    rc1, out1, _ = run(["coeffs", "e", "--order", "6"], capsys)
    rc2, out2, _ = run(["coeffs", "e", "--order", "6"], capsys)
    assert rc1 == rc2 == 0
    assert out1 == out2


# --- fixture plumbing -----------------------------------------------------------


def _write_fixture(tmp_path, mutate):
    doc = json.loads(FIXTURE.read_text())
    mutate(doc)
    path = tmp_path / "fixture.json"
    path.write_text(json.dumps(doc))
    return path


def test_verify_kw_with_explicit_fixture(tmp_path, capsys):
    path = _write_fixture(tmp_path, lambda doc: None)
    rc, out, _ = run(["verify", "kw-constraints", "--fixture", str(path)], capsys)
    assert rc == 0
    assert [d["status"] for d in json_lines(out)] == ["PASS", "PASS"]


def test_verify_kw_corrupted_fixture_fails(tmp_path, capsys):
    def corrupt(doc):
        for rec in doc["terms"]:
            if rec["monomial"] == [3]:
                rec["coefficient"] = "1/23"

    path = _write_fixture(tmp_path, corrupt)
    rc, out, err = run(["verify", "kw-constraints", "--fixture", str(path)], capsys)
    assert rc == 1
    docs = json_lines(out)
    assert [d["status"] for d in docs] == ["FAIL", "FAIL"]
    assert docs[0]["first_mismatch"] == {"exponent": 1, "lhs": "1/184", "rhs": "0"}
    assert docs[1]["first_mismatch"] == {"exponent": 2, "lhs": "1/368", "rhs": "0"}
    assert "FAIL kw-constraints(m=1)" in err


def test_verify_kw_malformed_fixture_is_usage_error(tmp_path, capsys):
    path = tmp_path / "fixture.json"
    path.write_text("{not valid json")
    rc, _, err = run(["verify", "kw-constraints", "--fixture", str(path)], capsys)
    assert rc == 2
    assert err.startswith("error: kw-constraints:")


def test_verify_kw_missing_fixture_is_usage_error(tmp_path, capsys):
    rc, _, err = run(
        ["verify", "kw-constraints", "--fixture", str(tmp_path / "nope.json")], capsys
    )
    assert rc == 2
    assert "error: kw-constraints:" in err
