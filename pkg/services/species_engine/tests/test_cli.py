import io
import json

import pytest

from common.errors import ErrorCodes
from services.species_engine.main import main
from services.species_engine.tests.conftest import GOLDEN


@pytest.fixture
def cli(capsys):
    def _run(*argv):
        code = main(list(argv))
        out = capsys.readouterr().out
        return code, json.loads(out) if out.strip() else None

    return _run


def test_validate_reports_block_dims(cli, problem_path):
    code, report = cli("validate", "--in", problem_path("sqrt2_two_cycle.json"))
    assert code == 0
    assert report["success"] is True
    assert report["command"] == "validate"
    data = report["data"]
    assert data["bimodule"]["block_dims"] == {"1,2": 4, "2,1": 2}
    assert data["algebra_dims"] == [1, 2]
    assert data["two_cycles"] == [[1, 2]]
    assert data["two_acyclic"] is False
    assert report["meta"]["version"]


def test_xgen(cli, problem_path):
    code, report = cli(
        "xgen", "--in", problem_path("sqrt2_two_cycle.json"), "--arrow", "a"
    )
    assert code == 0
    assert report["data"]["xgen"]["a"]["terms"] == [
        {"coeff": "1", "word": [["1", "b1"]], "tail": "1"},
        {"coeff": "1", "word": [["1", "b2"]], "tail": "sqrt2"},
    ]


def test_xmap(cli, problem_path):
    code, report = cli(
        "xmap", "--in", problem_path("sqrt2_two_cycle.json"), "--arrow", "b1"
    )
    assert code == 0
    assert report["data"]["functional"] == [{"arrow": "b1", "label": "1"}]
    assert report["data"]["xmap"]["terms"]


def test_delta(cli, problem_path):
    code, report = cli("delta", "--in", problem_path("three_cycle.json"))
    assert code == 0
    words = [t["word"] for t in report["data"]["delta"]["terms"]]
    assert [[g for _, g in w] for w in words] == [
        ["a", "b", "c"],
        ["b", "c", "a"],
        ["c", "a", "b"],
    ]


def test_mutate_matches_golden(cli, problem_path):
    golden = json.loads((GOLDEN / "three_cycle_mutate_k2.json").read_text())
    code, report = cli("mutate", "--in", problem_path("three_cycle.json"), "--k", "2")
    assert code == 0
    data = report["data"]
    assert data["vertex"] == golden["vertex"]
    assert sorted(data["removed"]) == golden["removed"]
    assert data["bimodule"] == golden["bimodule"]
    assert data["potential"]["terms"] == golden["potential_terms"]
    assert data["exchange_matrix"] == golden["exchange_matrix"]
    assert data["fz_mutated"] == golden["fz_mutated"]
    assert data["matrix_coherent"] is golden["matrix_coherent"]


def test_mutated_problem_reads_back(cli, problem_path, tmp_path):
    _, report = cli("mutate", "--in", problem_path("three_cycle.json"), "--k", "2")
    saved = tmp_path / "mutated.json"
    saved.write_text(json.dumps(report["data"]["problem"]))

    code, again = cli("validate", "--in", str(saved))
    assert code == 0
    arrows = again["data"]["bimodule"]["arrows"]
    assert [a["name"] for a in arrows] == ["b*", "*a"]


def test_premutate_only(cli, problem_path):
    code, report = cli(
        "mutate", "--in", problem_path("three_cycle.json"), "--k", "2",
        "--premutate-only",
    )
    assert code == 0
    names = [a["name"] for a in report["data"]["bimodule"]["arrows"]]
    assert names == ["c", "[ab]", "b*", "*a"]
    assert len(report["data"]["potential"]["terms"]) == 2


def test_mutate_trace(cli, problem_path):
    code, report = cli(
        "mutate", "--in", problem_path("three_cycle.json"), "--k", "2", "--trace"
    )
    assert code == 0
    assert report["meta"]["rounds"] >= 1
    assert len(report["meta"]["trace"]) == report["meta"]["rounds"] + 1


def test_ideal_dims(cli, problem_path):
    path = problem_path("three_cycle.json")
    code, report = cli("ideal-dim", "--in", path, "--degree", "4")
    assert code == 0
    assert report["data"]["per_degree_dims"] == [3, 3, 0, 0, 0]
    assert report["data"]["stabilized"] is True
    assert report["meta"]["degree"] == 4

    _, corner = cli("ideal-dim", "--in", path, "--degree", "4", "--exclude-vertex", "2")
    assert corner["data"]["per_degree_dims"] == [2, 1, 0, 0, 0]


@pytest.mark.parametrize(
    "degree, dims", [("0", [3]), ("1", [3, 3]), ("2", [3, 3, 3])]
)
def test_degree_flag_below_the_potential_truncates(cli, problem_path, degree, dims):
    code, report = cli(
        "ideal-dim", "--in", problem_path("three_cycle.json"), "--degree", degree
    )
    assert code == 0
    assert report["data"]["per_degree_dims"] == dims


def test_low_degree_mutation_and_def_dims(cli, problem_path):
    path = problem_path("three_cycle.json")
    code, report = cli("mutate", "--in", path, "--k", "2", "--degree", "2")
    assert code == 0
    assert report["data"]["removed"] == []
    assert report["meta"]["degree"] == 2

    code, report = cli("def-dim", "--in", path, "--degree", "1")
    assert code == 0
    assert report["data"]["per_degree_dims"] == [0, 0]


def test_def_dims(cli, problem_path):
    code, report = cli("def-dim", "--in", problem_path("three_cycle.json"))
    assert code == 0
    assert report["data"]["total"] == 0


def test_matrix_chain(cli, problem_path):
    code, report = cli(
        "matrix", "--in", problem_path("three_cycle.json"), "--mutate", "2"
    )
    assert code == 0
    data = report["data"]
    assert data["exchange_matrix"] == [[0, 1, -1], [-1, 0, 1], [1, -1, 0]]
    assert data["mutations"] == [
        {"vertex": 2, "matrix": [[0, -1, 0], [1, 0, -1], [0, 1, 0]]}
    ]
    assert len(data["realized_bimodule"]["arrows"]) == 2


def test_reduce(cli, problem_path):
    code, report = cli("reduce", "--in", problem_path("sqrt2_two_cycle.json"))
    assert code == 0
    data = report["data"]
    assert data["quadratic"]["decomposable"] is True
    assert len(data["removed"]) == 2
    assert data["reduced_potential"]["terms"] == []
    assert data["reduced_bimodule"]["block_dims"] == {"1,2": 2}


def test_involution_check(cli, problem_path):
    code, report = cli(
        "involution-check", "--in", problem_path("three_cycle.json"), "--k", "2"
    )
    assert code == 0
    data = report["data"]
    assert data["invariants_match"] is True
    assert data["certificate"]["lambda"] == "1"
    assert report["message"] == "invariants match"


def test_seed_potential(cli, problem_path):
    code, report = cli(
        "seed-potential", "--in", problem_path("three_cycle.json"), "--k", "2"
    )
    assert code == 0
    assert report["data"]["mutation"]["status"] == "defined"


def test_search(cli, problem_path):
    code, report = cli(
        "search", "--in", problem_path("three_cycle.json"),
        "--seq", "2,1,3", "--trials", "50", "--degree", "4", "--seed", "42",
    )
    assert code == 0
    assert report["data"]["fz_coherent"] is True
    assert report["data"]["sequence"] == [2, 1, 3]


def test_reads_stdin(cli, problem_path, monkeypatch):
    text = open(problem_path("three_cycle.json"), encoding="utf-8").read()
    monkeypatch.setattr("sys.stdin", io.StringIO(text))
    code, report = cli("validate")
    assert code == 0
    assert report["data"]["vertices"] == 3


def test_writes_out_file(cli, problem_path, tmp_path):
    target = tmp_path / "report.json"
    code, report = cli(
        "validate", "--in", problem_path("three_cycle.json"), "--out", str(target)
    )
    assert code == 0
    assert report is None
    assert json.loads(target.read_text())["success"] is True


def test_reports_are_deterministic(cli, problem_path):
    argv = ("mutate", "--in", problem_path("three_cycle.json"), "--k", "2")
    assert cli(*argv) == cli(*argv)


# =============================================================================
# Exit codes
# =============================================================================


def test_precondition_failure_exits_2(cli, problem_path):
    code, report = cli(
        "mutate", "--in", problem_path("sqrt2_two_cycle.json"), "--k", "1"
    )
    assert code == 2
    assert report["success"] is False
    assert report["command"] == "mutate"
    assert report["error"]["code"] == ErrorCodes.MUTATION_UNDEFINED


def test_invalid_input_exits_1(cli, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            {"species": ["rational"], "arrows": [{"name": "a", "from": 0, "to": 1}]}
        )
    )
    code, report = cli("validate", "--in", str(bad))
    assert code == 1
    assert report["error"]["code"] == ErrorCodes.INVALID_INPUT
    assert report["error"]["details"]["path"] == "arrows.0.from"


def test_unknown_flag_exits_1(cli, problem_path):
    code, report = cli("validate", "--in", problem_path("three_cycle.json"), "--bogus")
    assert code == 1
    assert report["success"] is False


def test_missing_file_exits_1(cli, tmp_path):
    code, _ = cli("validate", "--in", str(tmp_path / "nowhere.json"))
    assert code == 1


def test_negative_degree_exits_1(cli, problem_path):
    code, report = cli(
        "ideal-dim", "--in", problem_path("three_cycle.json"), "--degree", "-1"
    )
    assert code == 1
    assert report["error"]["details"]["path"] == "degree"


def test_unknown_generator_flag(cli, problem_path):
    code, report = cli(
        "xgen", "--in", problem_path("three_cycle.json"), "--arrow", "z"
    )
    assert code == 1
    assert report["error"]["code"] == ErrorCodes.UNKNOWN_GENERATOR
