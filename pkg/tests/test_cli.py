"""Command line behavior: output text, JSON shapes, exit codes."""

import json

import pytest

from gqsm.cli import main

from conftest import COUNT_GUARD, NEGATIVE_LOOP, SUM_THRESHOLD


@pytest.fixture
def sum_path(tmp_path):
    p = tmp_path / "sum_threshold.gq"
    p.write_text(SUM_THRESHOLD)
    return str(p)


@pytest.fixture
def run(capsys):
    def go(*argv):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return go


def test_solve_default_is_sm_operator(run, sum_path):
    code, out, err = run("solve", sum_path)
    assert code == 0
    assert out == "Answer 1: p(-1) p(1)\nAnswer 2: p(-1) p(1) p(2)\n"
    assert err == ""


def test_solve_grid_with_sections_and_agreement(run, sum_path):
    code, out, _ = run(
        "solve", sum_path, "--semantics", "both", "--route", "both"
    )
    assert code == 0
    assert out == (
        "== sm route=reduct\n"
        "Answer 1: p(-1) p(1)\n"
        "Answer 2: p(-1) p(1) p(2)\n"
        "== sm route=operator\n"
        "Answer 1: p(-1) p(1)\n"
        "Answer 2: p(-1) p(1) p(2)\n"
        "== flp route=reduct\n"
        "skipped: the flp semantics has no reduct route\n"
        "== flp route=operator\n"
        "Answer 1: p(-1) p(1)\n"
        "== agreement\n"
        "all computed model sets agree: no\n"
    )


def test_solve_unsatisfiable(run, tmp_path):
    p = tmp_path / "loop.gq"
    p.write_text(NEGATIVE_LOOP)
    code, out, _ = run("solve", str(p))
    assert code == 0
    assert out == "UNSATISFIABLE\n"


def test_solve_prints_empty_answers_without_trailing_space(run, tmp_path):
    p = tmp_path / "empty.gq"
    p.write_text("#universe {1}.\np(1) :- q(1).\n")
    code, out, _ = run("solve", str(p))
    assert code == 0
    assert out == "Answer 1:\n"


def test_solve_reads_stdin(run, capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(SUM_THRESHOLD))
    code, out, _ = run("solve", "-")
    assert code == 0
    assert "Answer 2: p(-1) p(1) p(2)" in out


def test_solve_json_shape(run, sum_path):
    code, out, _ = run(
        "solve", sum_path, "--format", "json", "--semantics", "both",
        "--route", "operator",
    )
    assert code == 0
    doc = json.loads(out)
    assert [r["semantics"] for r in doc["results"]] == ["sm", "flp"]
    assert doc["results"][0]["models"] == [
        ["p(-1)", "p(1)"],
        ["p(-1)", "p(1)", "p(2)"],
    ]
    assert doc["agreement"] == {"agree": False}
    # keys are sorted and the document ends with a newline
    assert out == json.dumps(doc, indent=2, sort_keys=True) + "\n"


def test_solve_json_notes_skipped_cells(run, sum_path):
    code, out, _ = run(
        "solve", sum_path, "--format", "json", "--semantics", "flp",
        "--route", "both",
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc["results"]) == 1
    assert doc["skipped"] == [
        {
            "semantics": "flp",
            "route": "reduct",
            "note": "the flp semantics has no reduct route",
        }
    ]


def test_solve_errors_when_nothing_can_run(run, sum_path):
    code, out, err = run(
        "solve", sum_path, "--semantics", "flp", "--route", "reduct"
    )
    assert code == 1
    assert out == ""
    assert err == "error: the flp semantics has no reduct route\n"


def test_ground_output(run, sum_path):
    code, out, _ = run("ground", sum_path)
    assert code == 0
    assert out == (
        "not sum{ -1 : p(-1); 1 : p(1); 2 : p(2) } < 2 -> p(2)\n"
        "sum{ -1 : p(-1); 1 : p(1); 2 : p(2) } > -1 -> p(-1)\n"
        "p(-1) -> p(1)\n"
    )


def test_ground_json(run, sum_path):
    code, out, _ = run("ground", sum_path, "--format", "json")
    doc = json.loads(out)
    (entry,) = doc["results"]
    assert entry["command"] == "ground"
    assert len(entry["rules"]) == 3
    assert entry["rules"][2]["quantifier"] == "impl"


def test_reduct_simplified_and_exact(run, sum_path):
    code, out, _ = run("reduct", sum_path, "--model", "p(-1), p(1), p(2)")
    assert code == 0
    assert out.splitlines()[0] == "top -> p(2)"
    code, out, _ = run(
        "reduct", sum_path, "--model", "p(-1), p(1), p(2)", "--no-simplify"
    )
    assert out.splitlines()[0] == "(bot -> bot) -> p(2)"


def test_reduct_of_the_smaller_model(run, sum_path):
    code, out, _ = run(
        "reduct", sum_path, "--model", "p(-1), p(1)", "--no-simplify"
    )
    assert out == (
        "bot -> bot\n"
        "sum{ -1 : p(-1); 1 : p(1); 2 : bot } > -1 -> p(-1)\n"
        "p(-1) -> p(1)\n"
    )


def test_reduct_json_counts_replacements(run, sum_path):
    code, out, _ = run(
        "reduct", sum_path, "--model", "p(-1), p(1)", "--format", "json",
        "--no-simplify",
    )
    doc = json.loads(out)
    (entry,) = doc["results"]
    assert entry["command"] == "reduct"
    assert entry["model"] == ["p(-1)", "p(1)"]
    assert [r["replaced"] for r in entry["rules"]] == [2, 1, 0]
    assert entry["rules"][0]["text"] == "bot -> bot"


def test_compare_text(run, tmp_path):
    p = tmp_path / "guard.gq"
    p.write_text(COUNT_GUARD)
    code, out, _ = run("compare", str(p))
    assert code == 0
    assert out == (
        "== sm route=operator\n"
        "Answer 1:\n"
        "Answer 2: p(a)\n"
        "== flp route=operator\n"
        "Answer 1:\n"
        "== agreement\n"
        "in class: no\n"
        "  rule 1: not atmost(0){X : p(X)}: quantifier 'atmost(0)' is not"
        " monotone in every position, so it cannot be negated\n"
        "difference: 1 model(s)\n"
        "  p(a)\n"
        "agreement violated: no\n"
    )


def test_compare_in_class_text(run, tmp_path):
    p = tmp_path / "plain.gq"
    p.write_text("#universe {1, 2}.\np(1) | p(2).\nq(X) :- p(X).\n")
    code, out, _ = run("compare", str(p))
    assert code == 0
    assert "in class: yes\n" in out
    assert "difference: none\n" in out
    assert "agreement violated: no\n" in out


def test_compare_json(run, tmp_path):
    p = tmp_path / "guard.gq"
    p.write_text(COUNT_GUARD)
    code, out, _ = run("compare", str(p), "--format", "json")
    doc = json.loads(out)
    assert doc["agreement"]["in_class"] is False
    assert doc["agreement"]["difference"] == [["p(a)"]]
    assert doc["agreement"]["agreement_violated"] is False
    assert doc["results"][0]["semantics"] == "sm"


def test_parse_errors_exit_1_with_position(run, tmp_path):
    p = tmp_path / "bad.gq"
    p.write_text("#universe {1}.\np(2).\n")
    code, out, err = run("solve", str(p))
    assert code == 1
    assert out == ""
    assert err == f"{p}:2:3: constant 2 is not a universe element\n"


def test_missing_file_exits_1(run):
    code, out, err = run("solve", "/no/such/file.gq")
    assert code == 1
    assert err.startswith("error: ")


def test_cap_overflow_exits_2(run, tmp_path):
    lines = ["#universe {1, 2, 3}."]
    for q in "abcdefghi":
        for e in (1, 2, 3):
            lines.append(f"x{q}({e}).")
    p = tmp_path / "big.gq"
    p.write_text("\n".join(lines) + "\n")
    code, out, err = run("solve", str(p))
    assert code == 2
    assert "2**27 candidate sets" in err


def test_bad_cap_env_exits_1(run, sum_path, monkeypatch):
    monkeypatch.setenv("GQSM_ATOM_CAP", "many")
    code, _, err = run("solve", sum_path)
    assert code == 1
    assert "GQSM_ATOM_CAP must be an integer" in err


def test_unknown_model_atom_exits_1(run, sum_path):
    code, _, err = run("reduct", sum_path, "--model", "zz(1)")
    assert code == 1
    assert "no predicate named 'zz'" in err


def test_help_exits_0(run):
    # argparse raises SystemExit internally; main converts it to a code
    code, out, _ = run("--help")
    assert code == 0
    assert "solve" in out


def test_missing_required_argument_exits_nonzero(run, sum_path):
    code, _, err = run("reduct", sum_path)
    assert code != 0


def test_output_is_deterministic(run, sum_path):
    first = run("solve", sum_path, "--semantics", "both", "--route", "both")
    second = run("solve", sum_path, "--semantics", "both", "--route", "both")
    assert first == second
    jf = run("compare", sum_path, "--format", "json")
    js = run("compare", sum_path, "--format", "json")
    assert jf == js
