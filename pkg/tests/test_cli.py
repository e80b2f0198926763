import json

import pandas as pd
import pytest

from src.cli import main
from src.core.curve import StepCurve, curve_error
from src.core.dataset import load_dataset, read_csv, write_csv
from src.fitting.datagen import TRUE_BREAKPOINTS, TRUE_VALUES
from src.services.report import FitReport


@pytest.fixture
def noiseless_csv(tmp_path):
    path = tmp_path / "grid.csv"
    assert main(["gen", "--i", "60", "--out", str(path)]) == 0
    return path


@pytest.fixture
def noisy_csv(tmp_path):
    path = tmp_path / "noisy.csv"
    assert main(["gen", "--i", "150", "--sigma", "5", "--seed", "2", "--out", str(path)]) == 0
    return path


def _fit(args, tmp_path):
    out = tmp_path / "report.json"
    code = main(["fit", *args, "--out", str(out)])
    report = FitReport.model_validate_json(out.read_text(encoding="utf-8")) if out.exists() else None
    return code, report


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["gen", "--i", "1000", "--sigma", "5", "--seed", "7", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text(encoding="utf-8").startswith("p,x\n")


def test_relaxed_fit_recovers_reference_blocks(noiseless_csv, tmp_path):
    code, report = _fit([str(noiseless_csv), "--k", "6", "--relaxed"], tmp_path)
    assert code == 0
    assert report.objective == 0.0
    assert [row.start for row in report.blocks] == list(TRUE_BREAKPOINTS[:-1])
    assert [row.value for row in report.blocks] == list(TRUE_VALUES)


def test_monotone_fit_with_relaxed_first(noiseless_csv, tmp_path):
    code, report = _fit([str(noiseless_csv), "--k", "6", "--strategy", "rlx"], tmp_path)
    assert code == 0
    assert report.schema_version == "stepfit/1"
    assert report.status == "Optimal"
    assert report.objective > 0.0
    values = [row.value for row in report.blocks]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_single_step_is_the_mean(tmp_path):
    path = tmp_path / "d.csv"
    write_csv([(0, 4), (1, 2), (2, 3)], path)
    code, report = _fit([str(path), "--k", "1"], tmp_path)
    assert code == 0
    assert [row.value for row in report.blocks] == [3.0]
    assert report.objective == 2.0
    assert report.input.digest == load_dataset(read_csv(path)).digest()


def test_plot_trace_rescores_to_the_objective(noisy_csv, tmp_path):
    plot = tmp_path / "trace.txt"
    code, report = _fit([str(noisy_csv), "--k", "4", "--plot", str(plot)], tmp_path)
    assert code == 0
    rows = [tuple(float(v) for v in line.split()) for line in plot.read_text(encoding="utf-8").splitlines()]
    assert len(rows) == 2 * len(report.blocks)
    breakpoints = [p for p, _ in rows[::2]] + [rows[-1][0]]
    curve = StepCurve(tuple(breakpoints), tuple(u for _, u in rows[::2]))
    data = load_dataset(read_csv(noisy_csv))
    assert curve_error(data, curve) == pytest.approx(report.objective, rel=1e-9)
    assert report.to_curve() == curve


def test_time_limit_exit_code(noisy_csv, tmp_path):
    code, report = _fit([str(noisy_csv), "--k", "6", "--time-limit", "0.000001"], tmp_path)
    assert code == 2
    assert report.status == "TimeLimit"
    full_code, full = _fit([str(noisy_csv), "--k", "6"], tmp_path)
    assert full_code == 0
    assert report.bounds.best_lb_final <= full.objective * (1 + 1e-9)


@pytest.mark.parametrize("argv", [
    ["fit", "missing.csv"],
    ["fit", "x.csv", "--k", "0"],
    ["fit", "x.csv", "--k", "2", "--strategy", "greedy"],
    ["oracle", "--max-i", "40"],
    ["nonsense"],
])
def test_usage_errors_exit_one(argv):
    assert main(argv) == 1


def test_domain_errors_exit_one(tmp_path, capsys):
    path = tmp_path / "dup.csv"
    path.write_text("p,x\n1,7\n1,3\n", encoding="utf-8")
    assert main(["fit", str(path), "--k", "2"]) == 1
    assert "error:" in capsys.readouterr().err
    assert main(["fit", str(path), "--k", "2", "--merge-duplicates", "--out", str(tmp_path / "r.json")]) == 0
    assert main(["fit", str(tmp_path / "absent.csv"), "--k", "2"]) == 1
    assert main(["fit", str(path), "--k", "2", "--loss", "quantile:2"]) == 1


def test_bounds_gap_is_zero_when_isotonic_fit_is_feasible(tmp_path, capsys):
    path = tmp_path / "d.csv"
    write_csv([(0, 9), (1, 9), (2, 7), (3, 7.5), (4, 3)], path)
    capsys.readouterr()
    assert main(["bounds", str(path), "--k", "3", "--with-relaxed", "--relaxed-lb"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["ub0"] == summary["lb_iso"]
    assert summary["gap0"] == 0.0
    assert summary["lb_relaxed"] <= summary["ub0"]


def test_oracle_command(capsys):
    assert main(["oracle", "--instances", "25", "--seed", "3", "--max-i", "8", "--k", "3"]) == 0
    assert "25 instances agree" in capsys.readouterr().out


def test_bench_k_sweep(tmp_path):
    out = tmp_path / "bench.csv"
    code = main(["bench", "--sweep", "k", "--values", "1,2,3,4", "--i", "40",
                 "--strategies", "iso,raw", "--out", str(out)])
    assert code == 0
    frame = pd.read_csv(out)
    assert list(frame.columns) == [
        "sweep", "I", "sigma", "K", "strategy", "error", "seconds",
        "labels_created", "labels_dominated", "labels_pruned", "status",
    ]
    assert len(frame) == 8
    for _, group in frame.groupby("strategy"):
        errors = group.sort_values("K")["error"].tolist()
        assert all(a >= b for a, b in zip(errors, errors[1:]))


def test_bounds_relaxed_optimum_on_reference_grid(noiseless_csv, capsys):
    capsys.readouterr()
    assert main(["bounds", str(noiseless_csv), "--k", "6", "--with-relaxed"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["lb_relaxed"] == 0.0
    assert summary["lb_iso"] > 0.0
