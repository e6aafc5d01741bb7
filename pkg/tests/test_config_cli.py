import subprocess
import sys

import pytest

from ebnforge import ConfigurationError
from ebnforge.config import (
    EXPERIMENTS,
    defaults,
    dump_defaults,
    format_config,
    parse_config_text,
    schema_for,
)


# ------------------------------------------------------------------ parsing


def test_defaults_roundtrip_all_experiments():
    for exp in EXPERIMENTS:
        text = dump_defaults(exp)
        values = parse_config_text(text, exp)
        assert values == defaults(exp)
        assert format_config(values, exp) == text  # formatting is idempotent


def test_unknown_key_reports_line():
    text = "experiment = network\nseed = 3\nbogus = 1\n"
    with pytest.raises(ConfigurationError, match=r"config:3: unknown key 'bogus'"):
        parse_config_text(text, "network")


def test_duplicate_key_reports_line():
    text = "seed = 3\nseed = 4\n"
    with pytest.raises(ConfigurationError, match=r"config:2: duplicate key"):
        parse_config_text(text, "network")


def test_missing_equals_reports_line():
    with pytest.raises(ConfigurationError, match=r"config:2: expected 'key = value'"):
        parse_config_text("seed = 1\nwhat is this\n", "network")


def test_type_errors_report_key():
    with pytest.raises(ConfigurationError, match=r"expects an integer"):
        parse_config_text("n_neurons = 2.5\n", "network")
    with pytest.raises(ConfigurationError, match=r"expects a number"):
        parse_config_text("dt = fast\n", "network")


def test_auto_values():
    values = parse_config_text("omega_step = auto\n", "network")
    assert values["omega_step"] is None
    values = parse_config_text("i_leak_target = 1e-9\n", "single-synapse")
    assert values["i_leak_target"] == 1e-9


def test_comments_and_blanks_skipped():
    text = "# full line comment\n\nseed = 9  # trailing comment\n"
    assert parse_config_text(text, "network")["seed"] == 9


def test_experiment_mismatch_rejected():
    with pytest.raises(ConfigurationError, match=r"experiment is 'network'"):
        parse_config_text("experiment = network\n", "single-synapse")
    with pytest.raises(ConfigurationError, match="unknown experiment"):
        schema_for("nonsense")


def test_hw_defaults_match_dataclass():
    # the config schema's circuit constants must stay in sync with HwParams
    from ebnforge import HwParams

    p = HwParams()
    values = defaults("single-synapse")
    for name in (
        "i_rest",
        "i_reset",
        "i_sl",
        "i_unit",
        "pulse_width",
        "tau_dpi",
        "tau_mem",
        "gain",
        "dt",
    ):
        assert values[name] == getattr(p, name), name


# --------------------------------------------------------------------- CLI


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "ebnforge", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


def write_config(path, text):
    path.write_text(text)
    return str(path)


def test_cli_dump_defaults_parseable():
    for exp in EXPERIMENTS:
        res = run_cli(exp, "--dump-defaults")
        assert res.returncode == 0
        assert parse_config_text(res.stdout, exp) == defaults(exp)


def test_cli_requires_config():
    res = run_cli("network")
    assert res.returncode == 2
    assert "--config" in res.stderr


def test_cli_missing_config_file():
    res = run_cli("network", "--config", "/nonexistent/path.conf")
    assert res.returncode == 2
    assert "cannot read config" in res.stderr


def test_cli_config_error_names_line(tmp_path):
    cfg = write_config(tmp_path / "bad.conf", "experiment = network\nbogus = 1\n")
    res = run_cli("network", "--config", cfg)
    assert res.returncode == 2
    assert ":2: unknown key 'bogus'" in res.stderr


def test_cli_unknown_subcommand():
    res = run_cli("frobnicate", "--dump-defaults")
    assert res.returncode == 2  # argparse rejects it


def test_cli_network_writes_expected_files(tmp_path):
    cfg = write_config(tmp_path / "net.conf", "experiment = network\nseed = 7\n")
    out = tmp_path / "out"
    res = run_cli("network", "--config", cfg, "--out", str(out), "--iterations", "2")
    assert res.returncode == 0, res.stderr
    for name in (
        "config_effective.txt",
        "metrics.csv",
        "omega_initial.csv",
        "omega_final.csv",
        "omega_optimal.csv",
        "reconstruction_first.csv",
        "reconstruction_last.csv",
    ):
        assert (out / name).exists(), name
    metrics = (out / "metrics.csv").read_text().splitlines()
    assert metrics[0] == "iter,rmse,mean_rate,frob_dist,spike_count"
    assert len(metrics) == 3
    assert "rmse: iteration 1" in res.stdout
    assert f"wrote {out}" in res.stdout
    # the echoed config reflects the overrides
    echoed = (out / "config_effective.txt").read_text()
    assert "n_iterations = 2" in echoed
    assert f"output_dir = {out}" in echoed


def test_cli_zero_iterations_keeps_weights(tmp_path):
    cfg = write_config(tmp_path / "net.conf", "experiment = network\n")
    out = tmp_path / "out"
    res = run_cli("network", "--config", cfg, "--out", str(out), "--iterations", "0")
    assert res.returncode == 0, res.stderr
    assert (out / "omega_initial.csv").read_bytes() == (out / "omega_final.csv").read_bytes()
    assert (out / "metrics.csv").read_text().splitlines() == [
        "iter,rmse,mean_rate,frob_dist,spike_count"
    ]
    assert not (out / "reconstruction_first.csv").exists()


def test_cli_echo_roundtrip_reproduces_outputs(tmp_path):
    cfg = write_config(tmp_path / "net.conf", "experiment = network\nseed = 7\n")
    a = tmp_path / "a"
    b = tmp_path / "b"
    first = run_cli("network", "--config", cfg, "--out", str(a), "--iterations", "2")
    assert first.returncode == 0, first.stderr
    second = run_cli("network", "--config", str(a / "config_effective.txt"), "--out", str(b))
    assert second.returncode == 0, second.stderr
    csvs = sorted(p.name for p in a.glob("*.csv"))
    assert csvs  # sanity: the comparison below is not vacuous
    for name in csvs:
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_cli_seed_changes_outputs(tmp_path):
    cfg = write_config(tmp_path / "net.conf", "experiment = network\n")
    a = tmp_path / "a"
    b = tmp_path / "b"
    run_cli("network", "--config", cfg, "--out", str(a), "--iterations", "1", "--seed", "7")
    run_cli("network", "--config", cfg, "--out", str(b), "--iterations", "1", "--seed", "8")
    assert (a / "metrics.csv").read_bytes() != (b / "metrics.csv").read_bytes()


def test_cli_divergence_exits_3(tmp_path):
    cfg = write_config(
        tmp_path / "div.conf", "experiment = network\nomega_step = 1e306\n"
    )
    res = run_cli("network", "--config", cfg, "--out", str(tmp_path / "o"), "--iterations", "1")
    assert res.returncode == 3
    assert "simulation diverged at iteration 1" in res.stderr


def test_cli_writes_only_inside_outdir(tmp_path):
    workdir = tmp_path / "cwd"
    workdir.mkdir()
    cfg = write_config(tmp_path / "net.conf", "experiment = network\n")
    out = tmp_path / "results"
    res = run_cli(
        "network", "--config", cfg, "--out", str(out), "--iterations", "1", cwd=str(workdir)
    )
    assert res.returncode == 0, res.stderr
    assert list(workdir.iterdir()) == []
    assert (out / "metrics.csv").exists()


def test_cli_sweep_runs_each_value(tmp_path):
    cfg = write_config(tmp_path / "net.conf", "experiment = network\n")
    out = tmp_path / "sweep"
    res = run_cli(
        "network",
        "--config",
        cfg,
        "--out",
        str(out),
        "--iterations",
        "1",
        "--sweep",
        "seed=1..2",
    )
    assert res.returncode == 0, res.stderr
    assert "--- seed=1 (exit 0) ---" in res.stdout
    assert "--- seed=2 (exit 0) ---" in res.stdout
    assert (out / "seed=1" / "metrics.csv").exists()
    assert (out / "seed=2" / "metrics.csv").exists()
    # each sweep point matches the equivalent standalone run
    solo = tmp_path / "solo"
    run_cli("network", "--config", cfg, "--out", str(solo), "--iterations", "1", "--seed", "2")
    assert (out / "seed=2" / "metrics.csv").read_bytes() == (solo / "metrics.csv").read_bytes()


def test_cli_sweep_rejects_bad_specs(tmp_path):
    cfg = write_config(tmp_path / "net.conf", "experiment = network\n")
    res = run_cli("network", "--config", cfg, "--sweep", "dt=1..2")
    assert res.returncode == 2  # only integer keys can be swept
    res = run_cli("network", "--config", cfg, "--sweep", "seed=5")
    assert res.returncode == 2
    res = run_cli("network", "--config", cfg, "--sweep", "seed=9..1")
    assert res.returncode == 2


def test_cli_single_synapse_run(tmp_path):
    cfg = write_config(
        tmp_path / "hw.conf", "experiment = single-synapse\nduration = 0.5\n"
    )
    out = tmp_path / "hw"
    res = run_cli("single-synapse", "--config", cfg, "--out", str(out))
    assert res.returncode == 0, res.stderr
    assert "single-synapse: final weight code" in res.stdout
    assert "settled within band: yes" in res.stdout
    trace = (out / "trace.csv").read_text().splitlines()
    assert trace[0] == "t,i_mem,weight_code,decision,i_dpi_exc,i_dpi_inh,band_lo,band_hi"
    assert len(trace) == 50001


def test_cli_pinned_run_exits_3(tmp_path):
    cfg = write_config(
        tmp_path / "pin.conf",
        "experiment = single-synapse\ngain = 1e-3\nrate_hz = 400\nduration = 0.4\n",
    )
    res = run_cli("single-synapse", "--config", cfg, "--out", str(tmp_path / "o"))
    assert res.returncode == 3
    assert "pinned" in res.stderr
    assert "settled within band: no" in res.stdout


def test_cli_two_synapse_goes_negative(tmp_path):
    cfg = write_config(tmp_path / "hw.conf", "experiment = two-synapse\n")
    out = tmp_path / "hw"
    res = run_cli("two-synapse", "--config", cfg, "--out", str(out))
    assert res.returncode == 0, res.stderr
    assert "two-synapse: final weight code -" in res.stdout
    assert "settled within band: yes" in res.stdout
    assert (out / "trace.csv").exists()
