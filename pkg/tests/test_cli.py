import os
import pytest

from cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, main
from results_table import EVAL_COLUMNS, NONADD_COLUMNS, SWEEP_COLUMNS, read_results


def test_eval_vacuum_is_zero(temp_dir, write_config, constant_config):
    path = write_config(constant_config(epsilon=1.0), "vacuum.json")
    out = os.path.join(temp_dir, "eval_vacuum.csv")
    assert main(["eval", "--config", path, "--z", "0.5", "--output", out]) == EXIT_OK
    frame = read_results(out)
    assert list(frame.columns) == EVAL_COLUMNS
    assert frame.iloc[0]["v_reduced"] == 0.0
    assert frame.iloc[0]["x0"] == 1.0


def test_eval_to_stdout(capsys, write_config, constant_config):
    path = write_config(constant_config(epsilon=3.0), "eps3.json")
    assert main(["eval", "--config", path, "--z", "0.0005", "--quiet"]) == EXIT_OK
    header, row = capsys.readouterr().out.splitlines()
    assert header.split(",") == EVAL_COLUMNS
    assert float(row.split(",")[2]) == pytest.approx(-0.0625, rel=5e-3)


def test_eval_rejects_nonpositive_distance(write_config, constant_config):
    path = write_config(constant_config(), "eval.json")
    assert main(["eval", "--config", path, "--z", "-1"]) == EXIT_CONFIG


def test_sweep_columns_and_order(temp_dir, write_config, constant_config):
    doc = constant_config(z_grid={"min": 0.01, "max": 10.0, "points": 4}, tol=1e-8)
    path = write_config(doc, "sweep.json")
    out = os.path.join(temp_dir, "sweep.csv")
    assert main(["sweep", "--config", path, "--output", out, "--workers", "2"]) == EXIT_OK
    frame = read_results(out)
    assert list(frame.columns) == SWEEP_COLUMNS
    assert list(frame["z"]) == sorted(frame["z"])
    assert len(frame) == 4
    assert ((frame["ratio_to_conductor"] > 0) & (frame["ratio_to_conductor"] < 1)).all()


def test_sweep_reports_failed_points(temp_dir, write_config, constant_config):
    doc = constant_config(z_grid={"min": 0.01, "max": 10.0, "points": 3}, tol=1e-6)
    doc["model"] = {"kind": "tabulated", "table": [[0.0, 2.0], [5.0, 1.5], [10.0, 1.0]]}
    path = write_config(doc, "short_table.json")
    out = os.path.join(temp_dir, "partial.csv")
    assert main(["sweep", "--config", path, "--output", out]) == EXIT_NUMERICAL
    frame = read_results(out)
    assert len(frame) == 3
    assert frame["v_reduced"].isna().sum() == 2
    assert frame.iloc[-1]["v_reduced"] < 0


def test_sweep_needs_a_grid(write_config, constant_config):
    path = write_config(constant_config(), "no_grid.json")
    assert main(["sweep", "--config", path]) == EXIT_CONFIG


def test_limits(temp_dir, write_config, constant_config):
    path = write_config(constant_config(epsilon=1.1), "limits.json")
    out = os.path.join(temp_dir, "limits.csv")
    assert main(["limits", "--config", path, "--output", out]) == EXIT_OK
    values = dict(read_results(out).itertuples(index=False, name=None))
    assert values["long_range_factor_small_kappa"] == pytest.approx(0.0364337, abs=1e-7)
    assert values["short_range_v"] == pytest.approx(-0.125 * 0.1 / 2.1)


def test_nonadd_table(temp_dir):
    out = os.path.join(temp_dir, "nonadd.json")
    assert main(["nonadd", "--kappa", "0.1", "0.05", "--output", out, "--format", "json"]) == EXIT_OK
    frame = read_results(out, "json")
    assert list(frame.columns) == NONADD_COLUMNS
    assert list(frame["kappa"]) == [0.05, 0.1]
    assert frame.iloc[1]["series_3"] == pytest.approx(-0.0183725, abs=1e-7)


@pytest.mark.parametrize("kappa", ["5.0", "0.5", "0", "-0.1"])
def test_nonadd_out_of_range_is_argument_error(kappa):
    assert main(["nonadd", "--kappa", "0.1", kappa]) == EXIT_CONFIG


@pytest.mark.parametrize("doc", ["{broken", '{"schema_version": 1}'])
def test_malformed_config_exits_with_config_code(write_config, doc):
    path = write_config(doc, "malformed.json")
    assert main(["limits", "--config", path]) == EXIT_CONFIG


def test_missing_config_flag():
    assert main(["limits"]) == EXIT_CONFIG


def test_tol_flag_range_checked(write_config, constant_config):
    path = write_config(constant_config(), "tol.json")
    assert main(["limits", "--config", path, "--tol", "0.5"]) == EXIT_CONFIG


@pytest.mark.parametrize("argv", [
    [],
    ["integrate"],
    ["eval", "--config", "x.json"],
    ["validate", "--level", "exhaustive"],
    ["limits", "--verbose", "--quiet"],
])
def test_bad_arguments_exit_2(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2
