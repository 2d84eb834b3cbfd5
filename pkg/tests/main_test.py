import json
import os

import pytest

from main import cli_main
from models.fitness_list import FitnessList

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data")
LINE_INSTANCE = os.path.join(DATA_DIR, "paper.dist")


def _write_list(path, n, values):
    path.write_text(json.dumps({"n": n, "entries": [[g, p, values[g * n + p]] for g in range(n) for p in range(n)]}),
                    encoding="utf-8")
    return str(path)


def test_no_arguments_is_a_usage_error(capsys):
    assert cli_main([]) == 2
    assert "usage" in capsys.readouterr().err


def test_unknown_flag_is_a_usage_error():
    assert cli_main(["solve", "--bogus"]) == 2


def test_unknown_subcommand_is_a_usage_error():
    assert cli_main(["transmogrify"]) == 2


def test_worked_example_demo_passes(capsys):
    """The built-in walkthrough reproduces both expected fitness lists."""
    assert cli_main(["demo-paper"]) == 0
    out = capsys.readouterr().out
    assert "Chromosome 1 = A₁ C₂ D₃ B₄  fitness value = 5" in out
    assert "OK" in out


@pytest.mark.parametrize("extra", [[], ["--instance", LINE_INSTANCE]])
def test_oracle_on_four_cities(capsys, extra):
    assert cli_main(["oracle", *extra]) == 0
    assert capsys.readouterr().out.strip() == "3 A B C D"


def test_oracle_missing_file_is_a_runtime_error(tmp_path):
    assert cli_main(["oracle", "--instance", str(tmp_path / "missing.dist")]) == 1


def test_solve_prints_best_and_evaluations(capsys):
    assert cli_main(["solve", "--budget-evals", "200", "--seed", "1"]) == 0
    first, second = capsys.readouterr().out.strip().splitlines()
    fitness, *labels = first.split()
    assert 3 <= float(fitness) <= 5
    assert sorted(labels) == ["A", "B", "C", "D"]
    assert second == "evaluations 200"


def test_solve_wall_clock_with_gene_machine(capsys):
    assert cli_main(["solve", "--time-ms", "20"]) == 0
    assert capsys.readouterr().out.splitlines()[1].startswith("evaluations ")


def test_wall_clock_only_for_gene_machine():
    assert cli_main(["solve", "--algo", "ga", "--time-ms", "10"]) == 2


def test_budget_flags_are_mutually_exclusive():
    assert cli_main(["solve", "--budget-evals", "10", "--time-ms", "10"]) == 2


def test_compare_rejects_wall_clock():
    assert cli_main(["compare", "--time-ms", "10"]) == 2


def test_compare_prints_json_report(capsys):
    """Three algorithms by two seeds give six records and an optimum from the oracle."""
    assert cli_main(["compare", "--budget-evals", "100", "--seeds", "2,1"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["records"]) == 6
    assert [r["seed"] for r in report["records"][:2]] == [1, 2]
    assert report["optimum"] == 3.0
    assert [s["algorithm"] for s in report["summaries"]] == ["gene-machine", "ga", "random"]


def test_compare_writes_csv_and_prints_summary(capsys, tmp_path):
    out = tmp_path / "bench.csv"
    assert cli_main(["compare", "--algo", "gene-machine,random", "--budget-evals", "60", "--seed", "3",
                     "--out", str(out), "--format", "csv"]) == 0
    printed = capsys.readouterr().out
    assert "gene-machine" in printed and "random" in printed
    assert out.exists()
    assert (tmp_path / "bench_trace.csv").exists()


def test_compare_unknown_algorithm_is_a_usage_error():
    assert cli_main(["compare", "--algo", "simulated-annealing"]) == 2


def test_seed_demo_with_forced_base(capsys):
    assert cli_main(["seed-demo", "--base", "A,C,D,B"]) == 0
    out = capsys.readouterr().out
    assert "Chromosome 2 = B₁ A₂ C₃ D₄  fitness value = 4" in out
    assert "Best seed: 4 B A C D" in out


def test_merge_demo_prints_elementwise_minimum(capsys, tmp_path):
    first = _write_list(tmp_path / "a.json", 2, [1, 5, 5, 1])
    second = _write_list(tmp_path / "b.json", 2, [3, 2, 2, 3])
    assert cli_main(["merge-demo", first, second]) == 0
    merged = FitnessList.from_json(capsys.readouterr().out)
    assert merged.to_dict()["entries"] == [[0, 0, 1.0], [0, 1, 2.0], [1, 0, 2.0], [1, 1, 1.0]]


def test_merge_demo_writes_output_file(tmp_path):
    first = _write_list(tmp_path / "a.json", 2, [1, 5, 5, 1])
    out = tmp_path / "merged.json"
    assert cli_main(["merge-demo", first, first, "--out", str(out)]) == 0
    assert FitnessList.from_json(out.read_text(encoding="utf-8")) == FitnessList.from_json(
        (tmp_path / "a.json").read_text(encoding="utf-8"))


def test_merge_demo_mismatched_sizes_fails(tmp_path):
    first = _write_list(tmp_path / "a.json", 2, [1, 5, 5, 1])
    second = _write_list(tmp_path / "b.json", 1, [0])
    assert cli_main(["merge-demo", first, second]) == 1


def test_oracle_on_non_utf8_file_is_a_runtime_error(tmp_path):
    path = tmp_path / "bad.dist"
    path.write_bytes(b"\xff\xfe2\n0 1\n1 0\n")
    assert cli_main(["oracle", "--instance", str(path)]) == 1


def test_oracle_on_empty_tsplib_is_a_runtime_error(tmp_path):
    path = tmp_path / "empty.tsp"
    path.write_text("NAME : empty\nDIMENSION : 0\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\nEOF\n",
                    encoding="utf-8")
    assert cli_main(["oracle", "--kind", "tsplib", "--instance", str(path)]) == 1


@pytest.mark.parametrize("content", [
    json.dumps({"n": 1, "entries": [[0, 0]]}).encode("utf-8"),
    b'{"n": 1, "entries": [[0, 0, 1.0]], "note": "\xff"}',
])
def test_merge_demo_malformed_list_is_a_runtime_error(tmp_path, content):
    good = _write_list(tmp_path / "good.json", 1, [1])
    bad = tmp_path / "bad.json"
    bad.write_bytes(content)
    assert cli_main(["merge-demo", good, str(bad)]) == 1
