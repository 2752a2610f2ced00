import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nsipm import cli
from nsipm.errors import ProblemFileError
from nsipm.io import (
    TRACE_HEADER,
    parse_problem,
    parse_problem_text,
    problem_from_dict,
    read_trace,
    serialize,
    write_problem,
)
from nsipm.verify import random_problem

LP_DOC = {"m": 1, "n": 2, "A": [5, -3], "b": [12], "c": [2, 3],
          "cones": [{"type": "nonneg", "dim": 2}]}


@pytest.fixture
def lp_file(tmp_path):
    path = tmp_path / "lp.json"
    path.write_text(json.dumps(LP_DOC))
    return path


def test_parse_small_lp(lp_file, small_lp):
    p = parse_problem(lp_file)
    np.testing.assert_array_equal(p.A, small_lp.A)
    np.testing.assert_array_equal(p.b, small_lp.b)
    np.testing.assert_array_equal(p.c, small_lp.c)
    assert p.cone == small_lp.cone


@pytest.mark.parametrize("change, needle", [
    ({"cones": [{"type": "nonneg", "dim": 1}]}, "cones"),
    ({"n": 0, "A": [], "c": [], "cones": []}, "'n'"),
    ({"A": [5]}, "'A'"),
    ({"b": [12, 1]}, "'b'"),
    ({"c": [2, "x"]}, "c[1]"),
    ({"cones": [{"type": "exp", "dim": 2}]}, "cones[0].dim"),
    ({"cones": [{"type": "psd", "dim": 2}]}, "cones[0].type"),
    ({"m": -1}, "'m'"),
])
def test_validation_errors_name_the_field(change, needle):
    doc = dict(LP_DOC, **change)
    with pytest.raises(ProblemFileError, match=needle.replace("[", r"\[").replace("]", r"\]")):
        problem_from_dict(doc)


def test_missing_field():
    doc = dict(LP_DOC)
    del doc["c"]
    with pytest.raises(ProblemFileError, match="missing field 'c'"):
        problem_from_dict(doc)


def test_malformed_json_reports_location():
    with pytest.raises(ProblemFileError, match="line 2, column"):
        parse_problem_text('{"m": 1,\n "n": }')


def test_unreadable_file(tmp_path):
    with pytest.raises(ProblemFileError):
        parse_problem(tmp_path / "missing.json")


@given(st.integers(0, 100_000))
@settings(max_examples=60, deadline=None)
def test_round_trip(seed):
    p = random_problem(np.random.default_rng(seed), n_max=10, m_max=5)
    q = parse_problem_text(serialize(p))
    assert np.array_equal(p.A, q.A) and np.array_equal(p.b, q.b) and np.array_equal(p.c, q.c)
    assert p.cone == q.cone


def test_write_problem(tmp_path, small_lp):
    path = tmp_path / "out.json"
    write_problem(small_lp, path)
    assert serialize(parse_problem(path)) == serialize(small_lp)


def test_cli_solve_small_lp(lp_file, tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    code = cli.main(["solve", "--problem", str(lp_file), "--preset", "1", "--eps", "1e-8",
                     "--trace", str(trace)])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["status"] == "optimal"
    assert out["primal_objective"] == pytest.approx(4.8, rel=1e-6)
    header, rows = read_trace(trace)
    assert tuple(header) == TRACE_HEADER
    # one predictor and one corrector row per iteration for preset 1
    assert len(rows) == 2 * out["iterations"]
    assert [r[1] for r in rows[:2]] == ["predictor", "corrector"]


def test_cli_trace_is_reproducible(lp_file, tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for path in paths:
        assert cli.main(["solve", "--problem", str(lp_file), "--preset", "2", "--line-search",
                         "--trace", str(path), "--no-timing"]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


@pytest.mark.parametrize("doc, code", [
    ({"m": 1, "n": 2, "A": [1, 1], "b": [-1], "c": [1, 1],
      "cones": [{"type": "nonneg", "dim": 2}]}, 2),
    ({"m": 1, "n": 2, "A": [1, -1], "b": [0], "c": [-1, -1],
      "cones": [{"type": "nonneg", "dim": 2}]}, 3),
])
def test_cli_infeasible_exit_codes(tmp_path, capsys, doc, code):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(doc))
    assert cli.main(["solve", "--problem", str(path), "--line-search"]) == code
    out = json.loads(capsys.readouterr().out)
    assert out["status"] in ("primal-infeasible", "dual-infeasible")


def test_cli_iteration_limit(lp_file, capsys):
    assert cli.main(["solve", "--problem", str(lp_file), "--max-iters", "3"]) == 5
    assert json.loads(capsys.readouterr().out)["status"] == "iteration-limit"


def test_cli_usage_and_parse_errors(lp_file, tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["solve", "--problem", str(lp_file), "--preset", "3"])
    assert info.value.code == 64
    with pytest.raises(SystemExit) as info:
        cli.main(["frobnicate"])
    assert info.value.code == 64
    assert cli.main(["solve", "--problem", str(tmp_path / "missing.json")]) == 65
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["solve", "--problem", str(bad)]) == 65


def test_cli_internal_error(lp_file, monkeypatch):
    from nsipm import steps
    monkeypatch.setitem(steps.PREDICTOR_CONSTANT, 1, 0.9)
    assert cli.main(["solve", "--problem", str(lp_file)]) == 70


def test_cli_verify_counterexamples(capsys):
    assert cli.main(["verify", "--suite", "counterexamples"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert sum(line.startswith("violation reproduced") for line in lines) == 2


def test_cli_verify_report_is_byte_identical(tmp_path):
    paths = [tmp_path / "r1.jsonl", tmp_path / "r2.jsonl"]
    for path in paths:
        assert cli.main(["verify", "--suite", "predictor", "--samples", "5", "--seed", "4",
                         "--report", str(path)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    records = [json.loads(line) for line in paths[0].read_text().splitlines()]
    assert all({"check", "lhs", "rhs", "passed"} <= set(r) for r in records)


def test_cli_verify_all_smoke():
    assert cli.main(["verify", "--suite", "all", "--samples", "10"]) == 0


def test_cli_verify_failure_exit(monkeypatch, capsys):
    from nsipm import verify

    def failing(*args, **kwargs):
        rep = verify.CheckReport("forced", "demo")
        rep.add(2.0, 1.0)
        return [rep]

    monkeypatch.setattr(verify, "run_suite", failing)
    assert cli.main(["verify", "--suite", "all"]) == 1
    assert "failing checks: forced" in capsys.readouterr().out
