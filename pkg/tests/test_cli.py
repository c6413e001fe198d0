import hashlib
import json
import math

import pytest

from submodular_bounds import cli
from submodular_bounds.cli import build_parser, main
from submodular_bounds.cli.report import Report, canonical_json, jsonable
from submodular_bounds.config import Settings
from submodular_bounds.const import (
    EXIT_INEQUALITY_VIOLATION,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_PRECONDITION,
    EXIT_RESOURCE_GUARD,
)
from tests.test_data.utils import C5, write_json

PAIR = {
    "p": {
        "alphabet_sizes": [2, 2],
        "pmf": [{"x": [0, 0], "p": "1/2"}, {"x": [1, 1], "p": "1/2"}],
    },
    "q_marginals": [["1/2", "1/2"], ["1/2", "1/2"]],
}
TENSORIZATION = {
    "q_marginals": [["1/2", "1/2"], ["1/3", "2/3"]],
    "g": [
        {"x": [0, 0], "value": 1},
        {"x": [0, 1], "value": 2},
        {"x": [1, 0], "value": 3},
        {"x": [1, 1], "value": 0.5},
    ],
}


def run_json(capsys, *argv: str) -> tuple[int, dict]:
    code = main(["--json", *argv])
    out = capsys.readouterr().out
    return code, json.loads(out) if out else {}


def results_of(report: dict) -> dict:
    return {result["name"]: result["value"] for result in report["results"]}


def assertions_of(report: dict) -> dict:
    return {assertion["name"]: assertion["holds"] for assertion in report["assertions"]}


# ----- bounds -----
def test_bounds_with_singletons_meet_the_entropy(capsys, distribution_file):
    code, report = run_json(capsys, "bounds", distribution_file)
    assert code == EXIT_OK
    results = results_of(report)
    assert list(results) == ["lower", "exact", "upper", "gap_lower", "gap_upper"]
    assert results["lower"] == pytest.approx(results["exact"])
    assert results["upper"] == pytest.approx(results["exact"])
    assert report["passed"]


@pytest.mark.parametrize(
    "options",
    [
        ["--form", "weak", "--weighting", "unit"],
        ["--collection", "k-sets:2", "--weighting", "lp-optimal"],
        ["--collection", "k-sets:2", "--weighting", "lp-optimal", "--form", "weak"],
        ["--collection", "consecutive:2", "--order", "3,1,2"],
        ["--form", "degree", "--lower-weighting", "unit"],
    ],
)
def test_bounds_sandwich_the_entropy(capsys, distribution_file, options):
    code, report = run_json(capsys, "bounds", distribution_file, *options)
    assert code == EXIT_OK
    results = results_of(report)
    assert results["lower"] <= results["exact"] + 1e-9
    assert results["exact"] <= results["upper"] + 1e-9
    assert all(assertions_of(report).values())


def test_bounds_in_bits(capsys, distribution_file):
    _, nats = run_json(capsys, "bounds", distribution_file)
    _, bits = run_json(capsys, "--log-base", "2", "bounds", distribution_file)
    assert bits["log_base"] == "2"
    assert results_of(bits)["exact"] == pytest.approx(results_of(nats)["exact"] / math.log(2))


# ----- lp-cover -----
def test_lp_cover_results(capsys, tmp_path, snapshot):
    code, report = run_json(capsys, "lp-cover", write_json(tmp_path, "c5.json", C5))
    assert code == EXIT_OK
    assert report["results"] == snapshot
    assert assertions_of(report) == {"covering optimum = dual packing optimum": True}


def test_lp_cover_with_costs_skips_duality(capsys, tmp_path):
    path = write_json(tmp_path, "h.json", {"n": 2, "edges": [[1], [2], [1, 2]]})
    code, report = run_json(capsys, "lp-cover", path, "--costs", "1,1,3/2")
    assert code == EXIT_OK
    results = results_of(report)
    assert results["optimum"] == "3/2"
    assert results["weighting"] == ["0", "0", "1"]
    assert "dual_optimum" not in results
    assert report["assertions"] == []


# ----- count -----
def test_count_independent_sets_of_four_cycle(capsys, c4_file):
    code, report = run_json(capsys, "count", c4_file, "--with-exact")
    assert code == EXIT_OK
    results = results_of(report)
    assert results["bound"] == pytest.approx(16)
    assert results["hom_bound"] == pytest.approx(math.sqrt(63))
    assert results["regular_cap"] == pytest.approx(16)
    assert results["exact"] == 7
    assert results["ratio"] == pytest.approx(7 / 16)
    assert all(assertions_of(report).values())


def test_count_colorings_of_four_cycle(capsys, c4_file):
    code, report = run_json(capsys, "count", c4_file, "--target", "colorings:3", "--with-exact")
    assert code == EXIT_OK
    results = results_of(report)
    assert results["exact"] == 18
    assert "bound" not in results
    assert results["hom_bound"] >= 18


def test_count_homs_into_a_graph_file(capsys, tmp_path, c4_file):
    edge = write_json(tmp_path, "k2.json", {"n": 2, "edges": [[1, 2]]})
    code, report = run_json(capsys, "count", c4_file, "--target", f"hom:{edge}", "--with-exact")
    assert code == EXIT_OK
    # C4 is bipartite, so it maps onto an edge in two ways
    assert results_of(report)["exact"] == 2


def test_count_guard_exit_code(capsys, tmp_path, c4_file):
    config = write_json(tmp_path, "settings.json", {"hom_guard": 10})
    code = main(["--config", config, "count", c4_file, "--target", "colorings:3", "--with-exact"])
    assert code == EXIT_RESOURCE_GUARD
    assert "guard" in capsys.readouterr().err


# ----- detineq -----
def test_detineq_two_by_two(capsys, matrix_file):
    code, report = run_json(capsys, "detineq", matrix_file)
    assert code == EXIT_OK
    results = results_of(report)
    assert results["lower"] == pytest.approx(9 / 4)
    assert results["det"] == pytest.approx(3)
    assert results["upper"] == pytest.approx(4)
    assertions = assertions_of(report)
    assert assertions["hadamard"]
    assert assertions["gaussian entropy bridge"]
    assert assertions["regular[1]"]


def test_detineq_rejects_indefinite_matrix(capsys, tmp_path):
    path = write_json(tmp_path, "bad.json", {"n": 2, "rows": [[1, 2], [2, 1]]})
    assert main(["detineq", path]) == EXIT_PRECONDITION
    assert "positive definite" in capsys.readouterr().err


# ----- check -----
def test_check_prop3(capsys):
    code, report = run_json(capsys, "check", "prop3")
    assert code == EXIT_OK
    results = results_of(report)
    assert results["H(X4|X1,X2,X3)"] == pytest.approx(0, abs=1e-12)
    assert results["H(X4|X1,X3)"] == pytest.approx(math.log(2))
    assert results["pair"] == [[1, 3], [3, 4]]
    assert results["first_witness"] == [[1], [4]]
    assert report["passed"]


def test_check_prop3_in_bits_from_config(capsys, tmp_path):
    config = write_json(tmp_path, "settings.json", {"log_base": "2"})
    _, report = run_json(capsys, "--config", config, "check", "prop3")
    assert report["log_base"] == "2"
    assert results_of(report)["H(X4|X1,X3)"] == pytest.approx(1)


@pytest.mark.parametrize("input_fixture", ["distribution_file", "matrix_file"])
def test_check_submodular(capsys, request, input_fixture):
    path = request.getfixturevalue(input_fixture)
    code, report = run_json(capsys, "check", "submodular", path)
    assert code == EXIT_OK
    expected = "entropy" if input_fixture == "distribution_file" else "log-det"
    assert results_of(report)["set_function"] == expected


def test_check_supermodular(capsys, tmp_path):
    code, report = run_json(capsys, "check", "supermodular", write_json(tmp_path, "p.json", PAIR))
    assert code == EXIT_OK
    results = results_of(report)
    assert results["divergence"] == pytest.approx(math.log(2))
    assert results["regular_bound"] == pytest.approx(0, abs=1e-12)
    assert report["passed"]


def test_check_duality(capsys, distribution_file):
    code, report = run_json(
        capsys, "check", "duality", distribution_file, "--collection", "leave-one-out"
    )
    assert code == EXIT_OK
    results = results_of(report)
    assert results["upper_gap_over_weight"] == pytest.approx(results["lower_gap_over_dual_weight"])
    assert results["regular_ratio"] == "2"
    assert report["passed"]


def test_check_monotonicity(capsys, distribution_file):
    code, report = run_json(capsys, "check", "monotonicity", distribution_file)
    assert code == EXIT_OK
    results = results_of(report)
    assert len(results["upper_gaps"]) == 3
    assert len(results["entropy_power_averages"]) == 3
    assert report["passed"]


def test_check_tensorization(capsys, tmp_path):
    path = write_json(tmp_path, "g.json", TENSORIZATION)
    code, report = run_json(capsys, "check", "tensorization", path)
    assert code == EXIT_OK
    results = results_of(report)
    assert results["ent"] <= results["bound"] + 1e-9
    assert results["scaled_divergence"] == pytest.approx(results["ent"])


def test_check_needs_input(capsys):
    assert main(["check", "submodular"]) == EXIT_PARSE


def test_unknown_check_kind_is_rejected_by_the_parser():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["check", "convexity"])


# ----- exit codes and reports -----
@pytest.mark.parametrize(
    "argv",
    [
        ["bounds", "missing.json"],
        ["bounds", "{distribution}", "--collection", "pairs"],
        ["bounds", "{distribution}", "--order", "1,2"],
        ["bounds", "{distribution}", "--collection", "k-sets:x"],
        ["bounds", "{distribution}", "--weighting", "half"],
    ],
)
def test_parse_errors_exit_with_code_two(capsys, distribution_file, argv):
    argv = [arg.format(distribution=distribution_file) for arg in argv]
    assert main(argv) == EXIT_PARSE
    assert "error:" in capsys.readouterr().err


def test_undecodable_input_exits_with_code_two(capsys, tmp_path):
    path = tmp_path / "binary.json"
    path.write_bytes(b"{\xff}")
    assert main(["bounds", str(path)]) == EXIT_PARSE
    assert "not UTF-8" in capsys.readouterr().err


def test_duplicate_outcomes_exit_with_code_two(capsys, tmp_path):
    data = {"alphabet_sizes": [2], "pmf": [{"x": [0], "p": "1/2"}, {"x": [0], "p": "1/2"}]}
    path = write_json(tmp_path, "twice.json", data)
    assert main(["bounds", path]) == EXIT_PARSE
    assert "listed twice" in capsys.readouterr().err


def test_failed_assertion_exits_with_code_five(capsys, monkeypatch):
    report = Report.start("check", Settings())
    report.add_assertion("one <= zero", -1.0)
    monkeypatch.setattr(cli, "run", lambda args: report)
    assert main(["check", "prop3"]) == EXIT_INEQUALITY_VIOLATION
    assert "FAIL" in capsys.readouterr().out


def test_json_output_is_deterministic(capsys, distribution_file):
    first = run_json(capsys, "bounds", distribution_file)
    second = run_json(capsys, "bounds", distribution_file)
    assert first == second

    report = first[1]
    with open(distribution_file, "rb") as file:
        expected = hashlib.sha256(file.read()).hexdigest()
    assert report["inputs"]["files"] == {"distribution": expected}
    inputs = {key: report["inputs"][key] for key in ("arguments", "files")}
    assert report["inputs"]["digest"] == hashlib.sha256(canonical_json(inputs).encode()).hexdigest()


def test_table_output(capsys, matrix_file):
    assert main(["detineq", matrix_file]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("detineq (tolerance 1e-09, log base e)")
    assert "assertions:" in out


def test_report_holds_within_tolerance():
    report = Report.start("bounds", Settings(tolerance=1e-6))
    report.add_assertion("close", -1e-7)
    report.add_assertion("far", -1e-3)
    assert report.failed == ["far"]
    assert not report.passed


@pytest.mark.parametrize(
    ("value", "expected"),
    [
        (math.inf, "inf"),
        (float("nan"), "nan"),
        ((1, 2.5), [1, 2.5]),
        ({1: True}, {"1": True}),
    ],
)
def test_jsonable(value, expected):
    assert jsonable(value) == expected
