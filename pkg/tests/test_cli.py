import json

import pytest

from poissonkit.cli import main

from conftest import CORPUS


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_zero_all(capsys):
    code, out, _ = run(capsys, "check", CORPUS / "zero-dim2.json", "--all")
    assert code == 0
    assert out.count("PASS") == 21


def test_check_commutator(capsys):
    code, _, _ = run(capsys, "check", CORPUS / "m2-commutator.json", "--kind", "square-circle")
    assert code == 0


def test_check_failure_machine(capsys):
    code, out, _ = run(capsys, "check", CORPUS / "nonassociative-dim2.json",
                       "--kind", "square-circle", "--format", "machine")
    assert code == 1
    doc = json.loads(out)
    assert list(doc) == ["tool", "version", "command", "input_digest", "result"]
    fail = doc["result"]["reports"][0]["failures"][0]
    assert fail == {"axiom": "circle-associativity", "witness": [1, 1, 1], "residual": ["-1", "0"]}
    assert doc["input_digest"].startswith("sha256:")


def test_check_input_errors(capsys, tmp_path):
    code, _, err = run(capsys, "check", CORPUS / "zero-dim2.json", "--kind", "nope")
    assert code == 2 and "tailed-sc-1" in err
    code, _, err = run(capsys, "check", tmp_path / "missing.json", "--all")
    assert code == 2
    code, _, err = run(capsys, "check", CORPUS / "zero-dim2.json")
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"field": "Q", "dim": 1, "bracket": [[["0"]]], "circle": [[["x"]]]}')
    code, _, err = run(capsys, "check", bad, "--all")
    assert code == 2 and "circle[0][0][0]" in err
    code, _, err = run(capsys, "check", CORPUS / "m2-commutator.json", "--kind", "tailed-sc-1")
    assert code == 2 and "derivation" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as e:
        main(["check"])
    assert e.value.code == 2


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", CORPUS / "zero-dim2.json", "--format", "machine")
    assert code == 0 and len(json.loads(out)["result"]["passed"]) == 21
    code, out, _ = run(capsys, "classify", CORPUS / "m2-commutator.json", "--format", "machine")
    res = json.loads(out)["result"]
    assert len(res["not_applicable"]) == 18 and res["failed"] == []
    code, out, _ = run(capsys, "classify", CORPUS / "m2-commutator-d0.json", "--format", "machine")
    passed = json.loads(out)["result"]["passed"]
    assert all(f"tailed-sc-{i}" in passed for i in range(1, 9))


def test_solve_alpha(capsys):
    code, out, _ = run(capsys, "solve-alpha", CORPUS / "m2-commutator-d0.json", "--kind", "tailed-sc-3")
    assert code == 0 and "all-scalars" in out
    code, _, _ = run(capsys, "solve-alpha", CORPUS / "m2-commutator-d0.json", "--kind", "tailed-sc-1")
    assert code == 2
    code, out, _ = run(capsys, "solve-alpha", CORPUS / "unique-alpha-f5.json", "--kind", "tailed-sc-5",
                       "--format", "machine")
    assert code == 0
    assert json.loads(out)["result"] == {"kind": "tailed-sc-5", "status": "unique", "alpha": "3"}
    code, out, _ = run(capsys, "solve-alpha", CORPUS / "unique-alpha-f5.json", "--kind", "tailed-sc-6")
    assert code == 1 and "no-solution" in out


def test_survey_commands(capsys):
    code, _, err = run(capsys, "survey", "--dim", 2, "--subdim", 2)
    assert code == 2 and "proper" in err
    code, out, _ = run(capsys, "survey", "--dim", 2, "--subdim", 1, "--format", "machine")
    res = json.loads(out)["result"]
    assert code == 0 and res["counts"]["square-circle"] >= 1 and "remark_check" in res


def test_survey_catalog_file(capsys, tmp_path):
    cat = tmp_path / "cat.json"
    cat.write_text(json.dumps({"subspaces": {"w": ["WW"]}, "brackets": {"z": "0"},
                               "circles": {"fg": "f*g"}, "derivations": {"z": "0"}}))
    code, out, _ = run(capsys, "survey", "--dim", 2, "--subdim", 1, "--catalog", cat)
    assert code == 0 and "1 rows, 1 closed" in out
    cat.write_text('{"subspaces": {}, "bogus": 1}')
    code, _, _ = run(capsys, "survey", "--dim", 2, "--subdim", 1, "--catalog", cat)
    assert code == 2


def test_census_commands(capsys):
    code, out, _ = run(capsys, "census", "--field", "F2", "--dim", 1, "--kinds", "square-circle",
                       "--format", "machine")
    assert code == 0 and json.loads(out)["result"]["counts"] == {"square-circle": 2}
    code, out, _ = run(capsys, "census", "--field", "F2", "--dim", 1, "--with-derivation",
                       "--kinds", "tailed-sc-1")
    assert code == 0 and "tailed-sc-1" in out and " 3" in out
    code, _, err = run(capsys, "census", "--field", "F3", "--dim", 2, "--with-derivation")
    assert code == 2 and "cap" in err
    code, _, _ = run(capsys, "census", "--field", "Q", "--dim", 1)
    assert code == 2
    code, _, _ = run(capsys, "census", "--field", "F2", "--dim", 1, "--kinds", "tailed-sc-1")
    assert code == 2


def test_kinds_listing(capsys):
    code, out, _ = run(capsys, "kinds")
    assert code == 0 and len(out.splitlines()) == 21
