import json
from pathlib import Path

import pytest

from opcoact.__main__ import main
from opcoact.core.universal import universal_polynomials
from opcoact.utils import config
from opcoact.utils.data_importer import parse_groebner

from conftest import algebra

DATA = Path(__file__).parent / "data"
L2 = str(DATA / "l2.json")


def run_cli(*args: str) -> int:
    with pytest.raises(SystemExit) as info:
        main(list(args))
    return info.value.code


def test_polys(capsys):
    assert run_cli("polys", "--algebra", L2) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["jgens"]) == 4
    assert doc["dropped"] == 4
    assert doc["jgens"][2]["poly"] == [{"coeff": "1", "vars": [[0, 2, 1, 0, 1]]}]


def test_graded_polys_match_golden_file(capsys):
    assert run_cli("graded-polys", "--operad", "glie", "--algebra", str(DATA / "graded_lie.json")) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc == json.loads((DATA / "graded_lie_polys.json").read_text())


def test_text_format(capsys):
    assert run_cli("polys", "--algebra", L2, "--format", "text") == 0
    out = capsys.readouterr().out
    assert "X[1][2]*X[2][1] - X[1][1]*X[2][2] + X[1][1]" in out
    assert "4 generators of J" in out


def test_verify_commands_pass(capsys):
    assert run_cli("verify-t52", "--algebra", L2, "--max-arity", "3") == 0
    assert json.loads(capsys.readouterr().out)["passed"]
    assert run_cli("verify-eta", "--algebra", L2) == 0
    assert run_cli("bialgebra-check", "--algebra", L2) == 0
    assert run_cli("check-axioms", "--operad", "tass", "--k", "3", "--algebra", str(DATA / "tass1.json")) == 0


def test_groebner(capsys):
    assert run_cli("groebner", "--algebra", L2) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["order"] == "degrevlex" and doc["reduced"]
    assert doc["basis"] == [
        [{"coeff": "1", "vars": [[0, 2, 1, 0, 1]]}],
        [{"coeff": "1", "vars": [[0, 1, 1, 0, 1], [0, 2, 2, 0, 1]]}, {"coeff": "-1", "vars": [[0, 1, 1, 0, 1]]}],
    ]
    pres, alg = algebra("l2", "lie")
    assert parse_groebner(doc) == universal_polynomials(alg, alg, pres).groebner_basis()


def test_aut_check_failure_names_the_polynomial(capsys):
    assert run_cli("aut-check", "--algebra", L2, "--matrix", "[[1,0],[1,1]]") == 1
    out = capsys.readouterr().out
    doc = json.loads(out)
    assert "X[2][1]" in out
    assert not doc["kpoint"] and not doc["morphism"]


def test_aut_check_pass(capsys):
    assert run_cli("aut-check", "--algebra", L2, "--matrix", '[[2,"1/2"],[0,1]]') == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["inverse"] == [["1/2", "-1/4"], ["0", "1"]]


def test_zero_algebra(capsys):
    zero = str(DATA / "zero.json")
    assert run_cli("polys", "--algebra", zero) == 0
    assert json.loads(capsys.readouterr().out)["jgens"] == []
    assert run_cli("aut-check", "--algebra", zero, "--matrix", "[]") == 0


def test_missing_inputs_exit_2(tmp_path):
    assert run_cli("polys", "--algebra", str(tmp_path / "missing.json")) == 2
    assert run_cli("polys") == 2
    assert run_cli("kpoint-check", "--algebra", L2) == 2
    assert run_cli("polys", "--algebra", L2, "--operad", "nope") == 2


def test_float_constants_exit_2(tmp_path):
    bad = tmp_path / "float.json"
    bad.write_text('{"dim": 1, "operations": {"c": {"entries": [{"in": [1, 1], "out": {"1": 0.5}}]}}}')
    assert run_cli("check-axioms", "--algebra", str(bad)) == 2


def test_non_algebra_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 1, "operations": {"c": {"entries": [{"in": [1, 1], "out": {"1": 1}}]}}}')
    assert run_cli("check-axioms", "--algebra", str(bad)) == 1
    assert not json.loads(capsys.readouterr().out)["passed"]
    assert run_cli("polys", "--algebra", str(bad)) == 1
    assert json.loads(capsys.readouterr().out)["actions"]


def test_budget_exit_3():
    assert run_cli("groebner", "--algebra", str(DATA / "sl2.json"), "--max-steps", "1") == 3


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv(config.BUDGET_ENV, "1")
    assert run_cli("groebner", "--algebra", str(DATA / "sl2.json")) == 3
    monkeypatch.setenv(config.BUDGET_ENV, "many")
    assert run_cli("groebner", "--algebra", L2) == 2


def test_broken_config_exits_2():
    config.check_config_json()
    config.CONFIG_JSON.write_text("{not json")
    assert run_cli("polys", "--algebra", L2) == 2


def test_config_file_sets_defaults(capsys):
    config.check_config_json()
    config.CONFIG_JSON.write_text(json.dumps({"order": "lex"}))
    assert run_cli("polys", "--algebra", L2) == 0
    assert json.loads(capsys.readouterr().out)["order"] == "lex"


def test_output_and_metadata(tmp_path):
    out = tmp_path / "l2_polys.json"
    assert run_cli("polys", "--algebra", L2, "--output", str(out), "--metadata") == 0
    meta = json.loads((tmp_path / "l2_polys.json.meta.json").read_text())
    assert meta["command"] == "polys"
    assert any(item.startswith("algebra=") for item in meta["inputs"])
    assert "timestamp" not in out.read_text()


def test_saved_presentation_is_reused_and_stable(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli("polys", "--algebra", L2, "--output", str(first)) == 0
    assert run_cli("polys", "--algebra", L2, "--output", str(second)) == 0
    assert first.read_bytes() == second.read_bytes()
    assert run_cli("kpoint-check", "--presentation", str(first), "--matrix", "[[1,0],[0,1]]") == 0
    assert run_cli("kpoint-check", "--presentation", str(first), "--matrix", "[[1,0],[1,1]]") == 1


def test_grading_commands(tmp_path, capsys):
    good = '{"group": [2], "components": {"(1)": [[1, 0]], "(0)": [[0, 1]]}}'
    bad = '{"group": [2], "components": {"(0)": [[1, 0]], "(1)": [[0, 1]]}}'
    assert run_cli("grading-check", "--algebra", L2, "--grading", good) == 0
    assert run_cli("grading-check", "--algebra", L2, "--grading", bad) == 1
    capsys.readouterr()
    morphism = tmp_path / "morphism.json"
    assert run_cli("grading-to-morphism", "--algebra", L2, "--grading", good, "--output", str(morphism)) == 0
    assert run_cli("morphism-to-grading", "--algebra", L2, "--morphism", str(morphism)) == 0
    assert json.loads(capsys.readouterr().out)["components"] == {"(0)": [["0", "1"]], "(1)": [["1", "0"]]}
    assert run_cli("conjugate", "--algebra", L2, "--morphism", str(morphism), "--matrix", "[[2,1],[0,1]]") == 0
    assert set(json.loads(capsys.readouterr().out)["projections"]) == {"(0)", "(1)"}


def test_grading_iso_check():
    first = '{"group": [2], "components": {"(1)": [[1, 0]], "(0)": [[0, 1]]}}'
    second = '{"group": [2], "components": {"(1)": [[1, 0]], "(0)": [[1, 1]]}}'
    args = ["grading-iso-check", "--algebra", L2, "--grading", first, "--second-grading", second]
    assert run_cli(*args, "--matrix", "[[2,1],[0,1]]") == 0
    assert run_cli(*args, "--matrix", "[[1,0],[0,1]]") == 1


def test_hom_check_with_target():
    target = ["--algebra", L2, "--target-algebra", str(DATA / "abelian2.json")]
    assert run_cli("hom-check", *target, "--matrix", "[[0,0],[0,0]]") == 0
    assert run_cli("hom-check", *target, "--matrix", "[[1,0],[0,1]]") == 0
