"""Command-line interface: config parsing, exit codes, and file contracts."""

import csv
import json
import textwrap
from pathlib import Path

import pytest

from netsel.cli import EXIT_ANALYSIS, EXIT_CONFIG, EXIT_OK, main
from netsel.config import ConfigError, parse_config

BASE = """\
[network]
capacity = 100
arrival = 30
target_share = 0.68

[population]
n = 10
anchored_primary = 1
anchored_secondary = 1

[rule]
type = fermi
beta_ratio = 1.0
"""


@pytest.fixture(autouse=True)
def isolated_cwd(tmp_path, monkeypatch):
    """Keep every test away from the repository directory and the real
    environment's output override."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("NETSEL_OUT_DIR", raising=False)
    return tmp_path


def write_config(tmp_path, text, name="experiment.ini"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text), encoding="utf-8")
    return str(path)


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def read_meta(csv_path):
    meta_path = csv_path.with_name(csv_path.stem + ".meta.json")
    return json.loads(meta_path.read_text(encoding="utf-8"))


# -- config parsing ----------------------------------------------------------------


def test_unknown_key_is_named(tmp_path):
    path = write_config(tmp_path, BASE.replace("capacity", "capcity"))
    with pytest.raises(ConfigError, match="capcity"):
        parse_config(path)


def test_unknown_section_is_named(tmp_path):
    path = write_config(tmp_path, BASE + "\n[netwerk]\nfoo = 1\n")
    with pytest.raises(ConfigError, match="netwerk"):
        parse_config(path)


def test_unparseable_value_is_named(tmp_path):
    path = write_config(tmp_path, BASE.replace("arrival = 30", "arrival = many"))
    with pytest.raises(ConfigError, match="network.arrival"):
        parse_config(path)


def test_missing_file_is_a_config_error(tmp_path, capsys):
    assert main(["equilibrium", "--config", str(tmp_path / "nope.ini")]) == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_config_errors_exit_with_code_two(tmp_path, capsys):
    path = write_config(tmp_path, BASE.replace("capacity", "capcity"))
    assert main(["equilibrium", "--config", path]) == EXIT_CONFIG
    assert "capcity" in capsys.readouterr().err


def test_both_beta_keys_rejected(tmp_path, capsys):
    path = write_config(tmp_path, BASE + "beta_absolute = 3.0\n")
    assert main(["stationary", "--config", path]) == EXIT_CONFIG
    assert "exactly one" in capsys.readouterr().err


def test_target_share_conflicts_with_explicit_prices(tmp_path, capsys):
    path = write_config(tmp_path, BASE.replace("arrival = 30", "arrival = 30\nprice_primary = 0.1"))
    assert main(["equilibrium", "--config", path]) == EXIT_CONFIG
    assert "not both" in capsys.readouterr().err


def test_proportional_rule_rejects_beta_keys(tmp_path, capsys):
    bad = BASE.replace("type = fermi", "type = proportional")
    path = write_config(tmp_path, bad)
    assert main(["stationary", "--config", path]) == EXIT_CONFIG


def test_sweep_grid_and_list_are_exclusive(tmp_path):
    path = write_config(
        tmp_path,
        BASE + "\n[sweep]\nvariable = lambda\nvalues = 30, 35\nstart = 30\nstop = 35\nstep = 5\n",
    )
    with pytest.raises(ConfigError, match="not both"):
        parse_config(path).sweep()


def test_sweep_rejects_unknown_variables(tmp_path):
    path = write_config(tmp_path, BASE + "\n[sweep]\nvariable = price\nvalues = 1\n")
    with pytest.raises(ConfigError, match="price"):
        parse_config(path).sweep()


def test_sweep_rejects_fractional_population_sizes(tmp_path):
    path = write_config(tmp_path, BASE + "\n[sweep]\nvariable = n\nvalues = 10, 2.5\n")
    with pytest.raises(ConfigError, match="integers"):
        parse_config(path).sweep()


def test_sweep_grid_includes_both_endpoints(tmp_path):
    path = write_config(
        tmp_path, BASE + "\n[sweep]\nvariable = lambda\nstart = 5\nstop = 95\nstep = 5\n"
    )
    values = parse_config(path).sweep().values
    assert len(values) == 19
    assert values[0] == 5.0 and values[-1] == 95.0


def test_bad_initial_state_string_is_a_config_error(tmp_path, capsys):
    path = write_config(
        tmp_path, BASE + "\n[simulation]\nsteps = 100\ninitial_state = somewhere\n"
    )
    assert main(["simulate", "--config", path]) == EXIT_CONFIG


def test_missing_config_flag_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["equilibrium"])
    assert exc.value.code == 2


def test_version_flag():
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0


# -- equilibrium --------------------------------------------------------------------


def test_equilibrium_reports_the_critical_state(tmp_path, capsys):
    path = write_config(tmp_path, BASE)
    assert main(["equilibrium", "--config", path]) == EXIT_OK
    out = capsys.readouterr().out
    assert "critical state" in out and "= 7" in out
    assert "0.68" in out
    # No output directory was configured, so nothing is written.
    assert list(tmp_path.glob("*.csv")) == []


def test_equilibrium_writes_when_asked(tmp_path):
    path = write_config(tmp_path, BASE)
    out_dir = tmp_path / "results"
    assert main(["equilibrium", "--config", path, "--out", str(out_dir), "--quiet"]) == EXIT_OK
    header, rows = read_rows(out_dir / "equilibrium.csv")
    assert header == ["quantity", "value"]
    table = {name: float(value) for name, value in rows}
    assert table["share_primary"] == pytest.approx(0.68, abs=1e-9)
    assert table["critical_state"] == 7
    assert table["poa"] > 1.0
    meta = read_meta(out_dir / "equilibrium.csv")
    assert meta["package"] == "netsel"
    assert meta["network"]["price_gap"] == pytest.approx(0.0017229002153625265, rel=1e-12)


def test_quiet_silences_the_summary(tmp_path, capsys):
    path = write_config(tmp_path, BASE)
    assert main(["equilibrium", "--config", path, "--quiet"]) == EXIT_OK
    assert capsys.readouterr().out == ""


# -- stationary ---------------------------------------------------------------------


def test_stationary_writes_the_product_form_law(tmp_path):
    path = write_config(tmp_path, BASE)
    out_dir = tmp_path / "res"
    assert main(["stationary", "--config", path, "--out", str(out_dir), "--quiet"]) == EXIT_OK
    header, rows = read_rows(out_dir / "stationary.csv")
    assert header == ["k", "psi"]
    assert [int(k) for k, _ in rows] == list(range(11))
    psi = [float(p) for _, p in rows]
    assert sum(psi) == pytest.approx(1.0, abs=1e-9)
    meta = read_meta(out_dir / "stationary.csv")
    assert meta["chain_class"] == "irreducible"
    assert meta["distribution_kind"] == "product_form"
    assert meta["mode"] == [7]
    assert meta["expected_poa"] == pytest.approx(1.0236875600386088, rel=1e-9)


def test_stationary_noise_free_two_point_law(tmp_path):
    config = BASE.replace("type = fermi\nbeta_ratio = 1.0", "type = proportional")
    config = config.replace("anchored_primary = 1", "anchored_primary = 0")
    config = config.replace("anchored_secondary = 1", "anchored_secondary = 0")
    path = write_config(tmp_path, config)
    out_dir = tmp_path / "res"
    assert main(["stationary", "--config", path, "--out", str(out_dir), "--quiet"]) == EXIT_OK
    _, rows = read_rows(out_dir / "stationary.csv")
    psi = {int(k): float(p) for k, p in rows}
    assert psi[6] + psi[7] == pytest.approx(1.0, abs=1e-12)
    assert psi[6] == pytest.approx(0.1850419084461624, rel=1e-9)
    assert read_meta(out_dir / "stationary.csv")["distribution_kind"] == "two_point_noise_free"


def test_stationary_absorbing_falls_back_to_absorption_report(tmp_path, capsys):
    config = BASE.replace("anchored_primary = 1", "anchored_primary = 0")
    config = config.replace("anchored_secondary = 1", "anchored_secondary = 0")
    path = write_config(tmp_path, config)
    out_dir = tmp_path / "res"
    assert main(["stationary", "--config", path, "--out", str(out_dir)]) == EXIT_OK
    assert "absorbing" in capsys.readouterr().out
    header, rows = read_rows(out_dir / "absorption.csv")
    assert header == ["k0", "prob_absorb_at_0", "prob_absorb_at_n", "expected_steps"]
    assert len(rows) == 11
    by_start = {int(r[0]): (float(r[1]), float(r[2])) for r in rows}
    assert by_start[0] == (1.0, 0.0)
    assert by_start[10] == (0.0, 1.0)
    assert by_start[5][0] == pytest.approx(0.1338213963353853, rel=1e-9)
    assert not (out_dir / "stationary.csv").exists()


def test_stationary_analysis_failure_exits_three(tmp_path, capsys):
    # Equal prices put the equilibrium on the all-primary boundary, so no
    # interior two-point law exists; the one-sided anchor keeps the chain
    # out of the absorbing class, leaving no analysis route at all.
    config = """\
    [network]
    capacity = 100
    arrival = 30

    [population]
    n = 10
    anchored_primary = 1

    [rule]
    type = proportional
    """
    path = write_config(tmp_path, config)
    assert main(["stationary", "--config", path, "--quiet"]) == EXIT_ANALYSIS
    assert "analysis error" in capsys.readouterr().err


# -- sweep --------------------------------------------------------------------------


def test_sweep_over_arrivals_in_the_absorbing_regime(tmp_path):
    config = BASE.replace("anchored_primary = 1", "anchored_primary = 0")
    config = config.replace("anchored_secondary = 1", "anchored_secondary = 0")
    config += "\n[sweep]\nvariable = lambda\nvalues = 30, 35\n"
    path = write_config(tmp_path, config)
    out_dir = tmp_path / "res"
    assert main(["sweep", "--config", path, "--out", str(out_dir), "--quiet"]) == EXIT_OK
    header, rows = read_rows(out_dir / "sweep.csv")
    assert header == ["sweep_value", "metric", "value"]
    table = {float(r[0]): (r[1], float(r[2])) for r in rows}
    assert table[30.0][0] == "poa_absorbing"
    assert table[30.0][1] == pytest.approx(1.0976, abs=1e-3)
    assert table[35.0][1] == pytest.approx(1.1202, abs=1e-3)


def test_sweep_over_population_sizes(tmp_path):
    path = write_config(tmp_path, BASE + "\n[sweep]\nvariable = n\nvalues = 10, 100\n")
    out_dir = tmp_path / "res"
    assert main(["sweep", "--config", path, "--out", str(out_dir), "--quiet"]) == EXIT_OK
    _, rows = read_rows(out_dir / "sweep.csv")
    values = [float(r[2]) for r in rows]
    assert all(r[1] == "poa_expected" for r in rows)
    assert values[1] < values[0]


def test_sweep_over_noise_ratios_is_monotone(tmp_path):
    path = write_config(tmp_path, BASE + "\n[sweep]\nvariable = beta_ratio\nvalues = 0, 1, 10\n")
    out_dir = tmp_path / "res"
    assert main(["sweep", "--config", path, "--out", str(out_dir), "--quiet"]) == EXIT_OK
    _, rows = read_rows(out_dir / "sweep.csv")
    values = [float(r[2]) for r in rows]
    assert values[0] >= values[1] >= values[2]
    assert all(v >= 1.0 for v in values)


def test_sweep_keeps_going_past_a_bad_point(tmp_path):
    path = write_config(tmp_path, BASE + "\n[sweep]\nvariable = lambda\nvalues = 30, 150\n")
    out_dir = tmp_path / "res"
    assert main(["sweep", "--config", path, "--out", str(out_dir), "--quiet"]) == EXIT_OK
    _, rows = read_rows(out_dir / "sweep.csv")
    metrics = {float(r[0]): r[1] for r in rows}
    assert metrics[30.0] == "poa_expected"
    assert metrics[150.0] == "error"
    assert read_meta(out_dir / "sweep.csv")["failed_points"] == 1


def test_sweep_with_no_good_points_exits_three(tmp_path, capsys):
    path = write_config(tmp_path, BASE + "\n[sweep]\nvariable = lambda\nvalues = 150, 200\n")
    out_dir = tmp_path / "res"
    assert main(["sweep", "--config", path, "--out", str(out_dir), "--quiet"]) == EXIT_ANALYSIS
    assert "every sweep point failed" in capsys.readouterr().err


def test_sweep_without_its_section_is_a_config_error(tmp_path, capsys):
    path = write_config(tmp_path, BASE)
    assert main(["sweep", "--config", path, "--quiet"]) == EXIT_CONFIG
    assert "[sweep]" in capsys.readouterr().err


# -- simulate -----------------------------------------------------------------------


SIM = BASE + """
[simulation]
seed = 9
steps = 20000
replicas = 2
initial_state = 5
trajectory_decimation = 500
"""


def test_simulate_writes_histogram_and_trajectory(tmp_path):
    path = write_config(tmp_path, SIM)
    out_dir = tmp_path / "res"
    assert main(["simulate", "--config", path, "--out", str(out_dir), "--quiet"]) == EXIT_OK
    header, rows = read_rows(out_dir / "histogram.csv")
    assert header == ["k", "count", "frequency"]
    counts = [int(r[1]) for r in rows]
    # burn-in resolves to min(10 * n^2, steps // 2) = 1000 per replica
    assert sum(counts) == (20000 - 1000) * 2
    freqs = [float(r[2]) for r in rows]
    assert sum(freqs) == pytest.approx(1.0, abs=1e-9)
    theader, trows = read_rows(out_dir / "trajectory.csv")
    assert theader == ["event", "k"]
    assert [int(r[0]) for r in trows] == list(range(0, 20001, 500))
    meta = read_meta(out_dir / "histogram.csv")
    assert meta["burn_in"] == 1000
    assert 0.0 <= meta["tv_to_analytic"] < 0.2
    assert len(meta["final_states"]) == 2


def test_simulate_is_deterministic(tmp_path):
    path = write_config(tmp_path, SIM)
    dirs = (tmp_path / "a", tmp_path / "b")
    for d in dirs:
        assert main(["simulate", "--config", path, "--out", str(d), "--quiet"]) == EXIT_OK
    for name in ("histogram.csv", "trajectory.csv"):
        assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()


def test_seed_flag_overrides_the_config(tmp_path):
    path = write_config(tmp_path, SIM)
    base_dir, seeded_dir = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--config", path, "--out", str(base_dir), "--quiet"]) == EXIT_OK
    assert (
        main(["simulate", "--config", path, "--out", str(seeded_dir), "--seed", "10", "--quiet"])
        == EXIT_OK
    )
    assert (base_dir / "histogram.csv").read_bytes() != (seeded_dir / "histogram.csv").read_bytes()
    assert read_meta(seeded_dir / "histogram.csv")["seed"] == 10


# -- replicator ---------------------------------------------------------------------


def test_replicator_converges_to_the_equilibrium_share(tmp_path):
    path = write_config(tmp_path, BASE + "\n[replicator]\ninitial_share = 0.2\nrtol = 1e-10\n")
    out_dir = tmp_path / "res"
    assert main(["replicator", "--config", path, "--out", str(out_dir), "--quiet"]) == EXIT_OK
    header, rows = read_rows(out_dir / "replicator.csv")
    assert header == ["time", "x_p"]
    assert float(rows[0][1]) == pytest.approx(0.2)
    assert float(rows[-1][1]) == pytest.approx(0.68, abs=1e-6)
    meta = read_meta(out_dir / "replicator.csv")
    assert meta["converged"] is True
    assert meta["fixed_point"] == pytest.approx(0.68, abs=1e-6)


def test_replicator_bad_start_is_a_config_error(tmp_path, capsys):
    path = write_config(tmp_path, BASE + "\n[replicator]\ninitial_share = 1.0\n")
    assert main(["replicator", "--config", path, "--quiet"]) == EXIT_CONFIG


# -- reproduce ----------------------------------------------------------------------


def test_reproduce_two_point_figure(tmp_path):
    out_dir = tmp_path / "figs"
    assert main(["reproduce", "--figure", "fig1a", "--out", str(out_dir), "--quiet"]) == EXIT_OK
    _, rows = read_rows(out_dir / "fig1a.csv")
    psi = {int(k): float(p) for k, p in rows}
    assert psi[6] + psi[7] == pytest.approx(1.0, abs=1e-12)
    meta = read_meta(out_dir / "fig1a.csv")
    assert meta["network"]["price_gap"] == pytest.approx(0.0017229002153625265, rel=1e-12)
    assert meta["equilibrium_marker"] == pytest.approx(6.8, abs=1e-9)


def test_reproduce_absorbing_poa_curve(tmp_path):
    out_dir = tmp_path / "figs"
    assert main(["reproduce", "--figure", "fig2b", "--out", str(out_dir), "--quiet"]) == EXIT_OK
    _, rows = read_rows(out_dir / "fig2b.csv")
    table = {float(r[0]): float(r[2]) for r in rows}
    assert table[30.0] == pytest.approx(1.0976, abs=1e-3)
    assert table[35.0] == pytest.approx(1.1202, abs=1e-3)


def test_reproduce_noise_comparison_figure(tmp_path):
    out_dir = tmp_path / "figs"
    assert main(["reproduce", "--figure", "fig3a", "--out", str(out_dir), "--quiet"]) == EXIT_OK
    _, dist_rows = read_rows(out_dir / "fig3a_distributions.csv")
    assert len(dist_rows) == 3 * 11
    _, summary_rows = read_rows(out_dir / "fig3a_summary.csv")
    poa = [float(r[2]) for r in summary_rows if r[1] == "poa_expected"]
    assert len(poa) == 3
    assert poa[0] >= poa[1] >= poa[2]


def test_reproduce_all_with_gnuplot_stubs(tmp_path):
    out_dir = tmp_path / "figs"
    assert main(
        ["reproduce", "--figure", "all", "--gnuplot", "--out", str(out_dir), "--quiet"]
    ) == EXIT_OK
    expected = [
        "fig1a.csv",
        "fig1b.csv",
        "fig2a_absorption.csv",
        "fig2a_distribution.csv",
        "fig2b.csv",
        "fig3a_distributions.csv",
        "fig3a_summary.csv",
        "fig3b_distributions.csv",
        "fig3b_summary.csv",
    ]
    for name in expected:
        assert (out_dir / name).exists(), name
        assert (out_dir / (Path(name).stem + ".meta.json")).exists(), name
    for fig in ("fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b"):
        assert (out_dir / f"{fig}.gp").exists()


# -- output directory resolution ------------------------------------------------------


def test_environment_variable_sets_the_output_directory(tmp_path, monkeypatch):
    env_dir = tmp_path / "from_env"
    monkeypatch.setenv("NETSEL_OUT_DIR", str(env_dir))
    path = write_config(tmp_path, BASE)
    assert main(["equilibrium", "--config", path, "--quiet"]) == EXIT_OK
    assert (env_dir / "equilibrium.csv").exists()


def test_out_flag_beats_the_environment(tmp_path, monkeypatch):
    env_dir = tmp_path / "from_env"
    flag_dir = tmp_path / "from_flag"
    monkeypatch.setenv("NETSEL_OUT_DIR", str(env_dir))
    path = write_config(tmp_path, BASE)
    assert main(["equilibrium", "--config", path, "--out", str(flag_dir), "--quiet"]) == EXIT_OK
    assert (flag_dir / "equilibrium.csv").exists()
    assert not (env_dir / "equilibrium.csv").exists()


def test_config_directory_beats_the_environment(tmp_path, monkeypatch):
    env_dir = tmp_path / "from_env"
    cfg_dir = tmp_path / "from_config"
    monkeypatch.setenv("NETSEL_OUT_DIR", str(env_dir))
    path = write_config(tmp_path, BASE + f"\n[output]\ndirectory = {cfg_dir}\n")
    assert main(["stationary", "--config", path, "--quiet"]) == EXIT_OK
    assert (cfg_dir / "stationary.csv").exists()
    assert not (env_dir / "stationary.csv").exists()
