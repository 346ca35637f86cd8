"""Tests for the command line and the output files."""
import json

import numpy as np
import pandas as pd
import pytest

from cli import main as cli_main
from cli.main import SUBCOMMANDS, build_parser, main
from cli.outputs import SCHEMAS, format_value, read_meta, read_output, write_outputs
from qubit_lattice.errors import OutputExistsError


@pytest.fixture(autouse=True)
def _log_dir(tmp_path, monkeypatch):
    monkeypatch.setattr(cli_main, "LOG_DIR", str(tmp_path / "logs"))


def _run(tmp_path, *argv: str) -> int:
    return main([*argv, "--out", str(tmp_path / "out")])


# ============================================================================
# OUTPUTS
# ============================================================================

def test_format_value():
    assert format_value(np.inf) == "+inf"
    assert format_value(-np.inf) == "-inf"
    assert format_value(None) == ""
    assert format_value(np.nan) == ""
    assert format_value(np.int64(12870)) == "12870"
    assert format_value(1.0 / 3.0) == "0.333333333333"
    assert format_value("5-10") == "5-10"


def test_write_and_read_back(tmp_path):
    table = pd.DataFrame(
        {
            "E_over_B": [-0.4, 0.1],
            "E_prime": [-1.25, 0.5],
            "T_fd": [0.123456789012345, -np.inf],
            "T_can": [np.inf, -0.5],
            "T_th": [None, 2.0],
            "m": [0, 1],
        }
    )
    csv_path, meta_path = write_outputs(table, SCHEMAS["temps"], tmp_path, {"base_seed": 3}, prefix="t")
    lines = csv_path.read_text().splitlines()
    assert lines[0].startswith("# units: E_over_B=1, E_prime=delta")
    assert lines[1] == "E_over_B,E_prime,T_fd,T_can,T_th,m"
    assert lines[2] == "-0.4,-1.25,0.123456789012,+inf,,0"

    parsed = read_output(csv_path)
    assert parsed["T_can"].tolist() == [np.inf, -0.5]
    assert parsed["T_fd"].iloc[1] == -np.inf
    assert parsed["T_fd"].iloc[0] == pytest.approx(0.123456789012, rel=1e-12)
    assert np.isnan(parsed["T_th"].iloc[0])
    assert parsed["m"].tolist() == [0, 1]

    meta = read_meta(meta_path)
    assert meta["base_seed"] == 3
    assert meta["columns"] == ["E_over_B", "E_prime", "T_fd", "T_can", "T_th", "m"]
    assert "version" in meta


def test_missing_columns_and_overwrite_refusal(tmp_path):
    with pytest.raises(ValueError, match="T_can"):
        write_outputs(pd.DataFrame({"E_over_B": [0.0]}), SCHEMAS["temps"], tmp_path, {})

    table = pd.DataFrame({"quantity": ["n_b"], "value": [126]})
    csv_path, _ = write_outputs(table, SCHEMAS["theory"], tmp_path, {})
    before = csv_path.read_text()
    with pytest.raises(OutputExistsError):
        write_outputs(pd.DataFrame({"quantity": ["n_b"], "value": [924]}), SCHEMAS["theory"], tmp_path, {})
    assert csv_path.read_text() == before
    write_outputs(pd.DataFrame({"quantity": ["n_b"], "value": [924]}), SCHEMAS["theory"], tmp_path, {}, force=True)
    assert read_output(csv_path)["value"].tolist() == [924]


# ============================================================================
# COMMAND LINE
# ============================================================================

@pytest.mark.parametrize("command", [*SUBCOMMANDS, "figure"])
def test_help_lists_every_flag(command, capsys):
    argv = [command, "1", "--help"] if command == "figure" else [command, "--help"]
    assert main(argv) == 0
    text = capsys.readouterr().out
    for flag in ("--rows", "--cols", "--n", "--delta", "--J", "--dE", "--seed", "--realizations", "--window",
                 "--levels", "--dense-cap", "--threads", "--config", "--out", "--force"):
        assert flag in text


def test_usage_errors(capsys):
    assert main(["no-such-command"]) == 2
    assert main(["eta-scan", "--no-such-flag"]) == 2
    assert main([]) == 2
    assert "usage" in capsys.readouterr().err


def test_eta_scan_writes_schema(tmp_path):
    assert _run(tmp_path, "eta-scan", "--rows", "3", "--cols", "3", "--J", "0.1,0.5", "--realizations", "5") == 0
    table = read_output(tmp_path / "out" / "run_3x3_eta-scan.csv")
    assert list(table.columns[:5]) == ["J_over_delta", "Jn_over_delta", "eta", "stderr", "n_spacings"]
    assert table["J_over_delta"].tolist() == [0.1, 0.5]
    assert table["Jn_over_delta"].tolist() == pytest.approx([0.9, 4.5])

    meta = json.loads((tmp_path / "out" / "run_3x3_eta-scan.meta").read_text())
    assert meta["n_completed"] == 5
    assert meta["config"]["n_realizations"] == 5


def test_rerun_needs_force(tmp_path, capsys):
    args = ("spectrum", "--rows", "2", "--cols", "3", "--J", "0.2", "--realizations", "1")
    assert _run(tmp_path, *args) == 0
    path = tmp_path / "out" / "run_2x3_spectrum.csv"
    before = path.read_text()
    assert _run(tmp_path, *args) == 1
    assert "OutputExistsError" in capsys.readouterr().err
    assert path.read_text() == before
    assert _run(tmp_path, *args, "--force") == 0


def test_validation_errors_exit_3(tmp_path, capsys):
    assert _run(tmp_path, "eta-scan", "--delta", "-1") == 3
    assert "delta" in capsys.readouterr().err
    assert _run(tmp_path, "spectrum", "--dense-cap", "100") == 3
    assert "CapacityError" in capsys.readouterr().err


def test_theory_prints_scales(tmp_path, capsys):
    args = ("theory", "--rows", "4", "--cols", "4", "--delta", "1", "--J", "0.2", "--dense-cap", "100")
    assert _run(tmp_path, *args) == 0
    out = capsys.readouterr().out
    assert "12870" in out
    assert "gamma_bw" in out
    table = read_output(tmp_path / "out" / "run_4x4_theory.csv")
    values = dict(zip(table["quantity"], table["value"]))
    assert values["delta_c"] == pytest.approx(1.0 / 16)
    assert values["J_c"] == pytest.approx(3.7 / 16)
    assert values["tau_chi"] == pytest.approx(1.0 / (0.2**2 * 16))


def test_theory_from_qubit_count_and_excitation(tmp_path):
    assert _run(tmp_path, "theory", "--n", "12", "--J", "0.3", "--dE", "1.5") == 0
    table = read_output(tmp_path / "out" / "run_3x4_theory.csv")
    values = dict(zip(table["quantity"], table["value"]))
    assert values["n_b"] == 924
    assert values["n_eff"] == pytest.approx(np.sqrt(12 * 1.5))


def test_flags_override_config_file(tmp_path):
    config = tmp_path / "exp.cfg"
    config.write_text("rows=3\ncols=3\nj_values=0.3\nn_realizations=7\n")
    assert _run(tmp_path, "eta-scan", "--config", str(config), "--realizations", "2") == 0
    meta = read_meta(tmp_path / "out" / "run_3x3_eta-scan.meta")
    assert meta["n_requested"] == 2
    assert meta["config"]["j_values"] == [0.3]


def test_outputs_identical_across_thread_counts(tmp_path):
    args = ["sigma-scan", "--rows", "3", "--cols", "3", "--J", "0.2,0.6", "--realizations", "4"]
    assert main([*args, "--threads", "1", "--out", str(tmp_path / "a")]) == 0
    assert main([*args, "--threads", "2", "--out", str(tmp_path / "b")]) == 0
    name = "run_3x3_sigma-scan.csv"
    assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_parser_maps_flags_to_fields():
    args = build_parser().parse_args(["occupations", "--levels", "5-10,95-100", "--per-state", "--k", "4"])
    overrides = cli_main.flag_overrides(args)
    assert overrides == {"level_ranges": [(5, 10), (95, 100)], "per_state": True, "iterative_k": 4}

    args = build_parser().parse_args(["theory", "--n", "16", "--dE", "2.5"])
    assert cli_main.flag_overrides(args) == {"n_qubits": 16, "excitation": 2.5}
