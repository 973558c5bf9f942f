"""Command-line interface: subcommands, exit codes, config precedence."""

import json

import pytest

from uscmet import cli, sweeps


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_eval_prints_csv_row(capsys):
    code, out, err = run(
        capsys, "eval", "--g-over-gc", "0.9",
        "--quantity", "ground_qfi", "--no-timestamp",
    )
    assert code == 0
    assert err == ""
    lines = out.splitlines()
    assert lines[0] == "g_over_gc,ground_qfi,beyond_threshold"
    assert lines[1] == "0.9,10.153047091412747,false"


def test_eval_json_output(capsys):
    code, out, _ = run(
        capsys, "eval", "--model", "rabi", "--g-over-gc", "0.5",
        "--format", "json", "--no-timestamp",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["rows"][0]["rabi_omega_eff"] == pytest.approx(0.8660254037844386)


def test_eval_rejects_wrong_model_parameter(capsys):
    code, _, err = run(capsys, "eval", "--model", "rabi", "--kappa", "1.0")
    assert code == 1
    assert "kappa" in err


def test_sweep_to_file(tmp_path, capsys):
    out_file = tmp_path / "sweep.csv"
    code, out, _ = run(
        capsys, "sweep", "--range", "g_over_gc:0:0.9:4",
        "--quantity", "xi_minus", "--no-timestamp", "--out", str(out_file),
    )
    assert code == 0
    assert str(out_file) in out
    text = out_file.read_text(encoding="utf-8")
    columns, rows = sweeps.parse_csv(text)
    assert columns == ["g_over_gc", "xi_minus", "beyond_threshold"]
    assert len(rows) == 4
    assert rows[-1]["g_over_gc"] == 0.9


def test_sweep_requires_range(capsys):
    code, _, err = run(capsys, "sweep", "--model", "dicke")
    assert code == 1
    assert "--range" in err


def test_sweep_rejects_malformed_range(capsys):
    code, _, err = run(capsys, "sweep", "--range", "g:0:1")
    assert code == 1
    assert "NAME:START:STOP:COUNT" in err


def test_sweep_stdout_reruns_identical(capsys):
    argv = ("sweep", "--range", "g_over_gc:0:0.5:3", "--no-timestamp")
    code_a, out_a, _ = run(capsys, *argv)
    code_b, out_b, _ = run(capsys, *argv)
    assert code_a == code_b == 0
    assert out_a == out_b


def test_figure_writes_table_and_png(tmp_path, capsys):
    out_file = tmp_path / "slopes.csv"
    code, out, _ = run(
        capsys, "figure", "figs2", "--ratios", "100", "--couplings", "0.5",
        "--no-timestamp", "--out", str(out_file),
    )
    assert code == 0
    png = tmp_path / "slopes.png"
    assert out.splitlines() == [str(out_file), str(png)]
    assert png.read_bytes()[:4] == b"\x89PNG"
    columns, rows = sweeps.parse_csv(out_file.read_text(encoding="utf-8"))
    assert len(rows) == 1


def test_figure_no_plot_skips_png(tmp_path, capsys):
    out_file = tmp_path / "cmp.csv"
    code, out, _ = run(
        capsys, "figure", "figs3", "--couplings", "0.2", "--points", "4",
        "--no-plot", "--no-timestamp", "--out", str(out_file),
    )
    assert code == 0
    assert out.splitlines() == [str(out_file)]
    assert not (tmp_path / "cmp.png").exists()


def test_figure_rejects_inapplicable_flag(capsys):
    code, _, err = run(capsys, "figure", "fig2", "--points", "7")
    assert code == 1
    assert "--points" in err


def test_validate_pass_exit_zero(capsys):
    code, out, _ = run(
        capsys, "validate", "--check", "gaussian-orientation",
        "--check", "homodyne-reference",
    )
    assert code == 0
    assert "2/2 checks passed" in out


def test_validate_failure_exit_two(capsys):
    code, out, _ = run(
        capsys, "validate", "--check", "gaussian-orientation",
        "--tolerance", "gaussian-orientation=-1",
    )
    assert code == 2
    assert "FAIL" in out


def test_validate_unknown_check_exit_one(capsys):
    code, _, err = run(capsys, "validate", "--check", "made-up-check")
    assert code == 1
    assert "made-up-check" in err


def test_unwritable_output_exit_three(capsys):
    code, _, err = run(
        capsys, "eval", "--g-over-gc", "0.5",
        "--out", "/nonexistent-dir/out.csv",
    )
    assert code == 3
    assert "i/o error" in err


def test_unknown_subcommand_exit_one(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == 1


def test_help_passes_through(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["--help"])
    assert info.value.code == 0


def test_config_supplies_defaults(tmp_path, capsys):
    cfg = tmp_path / "defaults.cfg"
    cfg.write_text(
        "# shared sweep defaults\n"
        "model=dicke\n"
        "quantity=xi_minus,ground_qfi\n"
        "range=g_over_gc:0:0.9:4\n"
        "no_timestamp=true\n",
        encoding="utf-8",
    )
    code, out, _ = run(capsys, "sweep", "--config", str(cfg))
    assert code == 0
    assert out.splitlines()[0] == "g_over_gc,xi_minus,ground_qfi,beyond_threshold"
    assert len(out.splitlines()) == 5


def test_explicit_flags_beat_config(tmp_path, capsys):
    cfg = tmp_path / "defaults.cfg"
    cfg.write_text(
        "quantity=xi_minus,ground_qfi\nrange=g_over_gc:0:0.9:4\nno_timestamp=true\n",
        encoding="utf-8",
    )
    code, out, _ = run(
        capsys, "sweep", "--config", str(cfg),
        "--quantity", "omega_minus", "--range", "g_over_gc:0.5:0.5:1",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "g_over_gc,omega_minus,beyond_threshold"
    assert len(lines) == 2


def test_config_rejects_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("volume=11\n", encoding="utf-8")
    code, _, err = run(capsys, "eval", "--config", str(cfg))
    assert code == 1
    assert "volume" in err


def test_missing_config_exit_one(capsys):
    code, _, err = run(capsys, "eval", "--config", "/no/such/file.cfg")
    assert code == 1
    assert "config" in err
