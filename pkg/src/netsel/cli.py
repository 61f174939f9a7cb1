"""Command-line front end: experiments in, CSV plus JSON metadata out.

Subcommands: ``equilibrium``, ``stationary``, ``sweep``, ``simulate``,
``replicator`` (all driven by an INI config file) and ``reproduce``
(built-in figure datasets).  Every CSV gets a sidecar ``.meta.json``
recording the full parameter provenance, and outputs are deterministic:
the same config and seed always produce byte-identical files.

Exit codes: 0 success, 2 configuration error, 3 analysis-domain error
(e.g. asking for a stationary law of a chain that has none).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import __version__, chain, model, montecarlo, replicator
from .chain import ChainStructureError, PopulationConfig, StationaryDistribution
from .config import ConfigError, ExperimentConfig, parse_config
from .model import NetworkParams
from .protocols import Fermi, beta_reference, fermi_from_ratio

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ANALYSIS = 3

OUT_DIR_ENV = "NETSEL_OUT_DIR"


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _resolve_out_dir(args: argparse.Namespace, config: ExperimentConfig | None) -> Path:
    """--out flag beats the config's [output] directory beats $NETSEL_OUT_DIR
    beats the working directory."""
    if getattr(args, "out", None):
        path = Path(args.out)
    elif config is not None and config.output_directory():
        path = Path(config.output_directory())
    elif os.environ.get(OUT_DIR_ENV):
        path = Path(os.environ[OUT_DIR_ENV])
    else:
        path = Path.cwd()
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_csv(
    path: Path,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    meta: dict[str, Any],
    quiet: bool,
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    meta_path = path.with_name(path.stem + ".meta.json")
    payload = {"package": "netsel", "version": __version__, **meta}
    meta_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if not quiet:
        print(f"wrote {path}")


def _params_meta(params: NetworkParams) -> dict[str, Any]:
    return {
        "capacity": params.capacity,
        "arrival": params.arrival,
        "delay_weight": params.delay_weight,
        "price_primary": params.price_primary,
        "price_secondary": params.price_secondary,
        "price_gap": params.price_gap,
    }


def _population_meta(population: PopulationConfig) -> dict[str, Any]:
    return {
        "n": population.n,
        "anchored_primary": population.anchored_primary,
        "anchored_secondary": population.anchored_secondary,
    }


def _say(quiet: bool, message: str) -> None:
    if not quiet:
        print(message)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_equilibrium(config: ExperimentConfig, args: argparse.Namespace) -> int:
    params = config.network_params()
    population = config.population()
    info = model.equilibrium(params)
    k_star = model.critical_state(params, population.n)
    welfare_eq = model.social_welfare(params, info.share_primary)
    x_opt, s_min = model.social_optimum(params)
    poa = model.poa_at(params, info.share_primary)
    quiet = args.quiet
    _say(quiet, f"equilibrium share x_p      = {info.share_primary!r}")
    _say(quiet, f"equilibrium rate           = {info.rate_primary!r}")
    _say(quiet, f"boundary equilibrium       = {info.boundary}")
    _say(quiet, f"critical state k* (n={population.n})  = {k_star}")
    _say(quiet, f"welfare at equilibrium     = {welfare_eq!r}")
    _say(quiet, f"optimal share              = {x_opt!r}")
    _say(quiet, f"minimal welfare            = {s_min!r}")
    _say(quiet, f"price of anarchy           = {poa!r}")
    if args.out or config.output_directory() or os.environ.get(OUT_DIR_ENV):
        out_dir = _resolve_out_dir(args, config)
        rows = [
            ("share_primary", info.share_primary),
            ("rate_primary", info.rate_primary),
            ("boundary", int(info.boundary)),
            ("critical_state", k_star),
            ("welfare_equilibrium", welfare_eq),
            ("optimal_share", x_opt),
            ("welfare_minimum", s_min),
            ("poa", poa),
        ]
        meta = {
            "command": "equilibrium",
            "network": _params_meta(params),
            "population": _population_meta(population),
            "config": config.as_dict(),
        }
        _write_csv(out_dir / "equilibrium.csv", ("quantity", "value"), rows, meta, quiet)
    return EXIT_OK


def _analytic_stationary(
    config: ExperimentConfig,
    params: NetworkParams,
    population: PopulationConfig,
) -> tuple[StationaryDistribution | None, chain.ChainClass, chain.TransitionKernel]:
    """Stationary law by the route the chain's structure dictates.

    Irreducible chains use the product form; one-way (noise-free) chains
    use the two-point law; absorbing chains have no stationary law and
    return None so callers can fall back to an absorption report.
    """
    rule = config.rule(params, population.n)
    kernel = chain.build_kernel(params, population, rule)
    structure = chain.classify(kernel)
    if structure.kind == "irreducible":
        return chain.stationary_product(kernel), structure, kernel
    if structure.kind == "absorbing":
        return None, structure, kernel
    distribution = chain.stationary_noise_free(params, population, rule)
    return distribution, structure, kernel


def cmd_stationary(config: ExperimentConfig, args: argparse.Namespace) -> int:
    params = config.network_params()
    population = config.population()
    quiet = args.quiet
    out_dir = _resolve_out_dir(args, config)
    try:
        distribution, structure, kernel = _analytic_stationary(config, params, population)
    except (ChainStructureError, ValueError) as exc:
        print(f"analysis error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    base_meta = {
        "command": "stationary",
        "network": _params_meta(params),
        "population": _population_meta(population),
        "rule": repr(config.rule(params, population.n)),
        "chain_class": structure.kind,
        "config": config.as_dict(),
    }
    if distribution is None:
        # No stationary law: report exact absorption behaviour instead.
        _say(
            quiet,
            "chain is absorbing: no stationary law exists; writing absorption report instead",
        )
        rows = []
        for k0 in range(population.n + 1):
            result = chain.absorption_analysis(kernel, k0)
            rows.append(
                (k0, result.prob_absorb_at_0, result.prob_absorb_at_n, result.expected_steps)
            )
        meta = {**base_meta, "note": "absorbing chain; rows give exact absorption from each start"}
        _write_csv(
            out_dir / "absorption.csv",
            ("k0", "prob_absorb_at_0", "prob_absorb_at_n", "expected_steps"),
            rows,
            meta,
            quiet,
        )
        return EXIT_OK
    mode = chain.distribution_mode(distribution)
    poa_e = model.expected_poa(params, distribution)
    _say(quiet, f"stationary law kind = {distribution.kind}")
    _say(quiet, f"mode states         = {list(mode)}")
    _say(quiet, f"expected poa        = {poa_e!r}")
    meta = {
        **base_meta,
        "distribution_kind": distribution.kind,
        "mode": list(mode),
        "expected_poa": poa_e,
    }
    rows = [(k, float(p)) for k, p in enumerate(distribution.psi)]
    _write_csv(out_dir / "stationary.csv", ("k", "psi"), rows, meta, quiet)
    return EXIT_OK


def _sweep_point(
    config: ExperimentConfig, variable: str, value: float
) -> tuple[str, float]:
    """Evaluate one sweep point; returns (metric name, metric value)."""
    if variable == "lambda":
        params = config.network_params(arrival=value)
        population = config.population()
    elif variable == "n":
        params = config.network_params()
        population = config.population(n=int(value))
    else:
        params = config.network_params()
        population = config.population()
    if variable == "beta_ratio":
        rule = config.rule(params, population.n, beta_ratio=value)
    else:
        rule = config.rule(params, population.n)
    kernel = chain.build_kernel(params, population, rule)
    structure = chain.classify(kernel)
    if structure.kind == "irreducible":
        distribution = chain.stationary_product(kernel)
        return "poa_expected", model.expected_poa(params, distribution)
    if structure.kind == "absorbing":
        return "poa_absorbing", model.poa_absorbing(params)
    distribution = chain.stationary_noise_free(params, population, rule)
    return "poa_expected", model.expected_poa(params, distribution)


def cmd_sweep(config: ExperimentConfig, args: argparse.Namespace) -> int:
    sweep = config.sweep()
    if sweep is None:
        print("config error: sweep command needs a [sweep] section", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = _resolve_out_dir(args, config)
    rows: list[tuple[Any, ...]] = []
    successes = 0
    for value in sweep.values:
        try:
            metric, result = _sweep_point(config, sweep.variable, value)
            rows.append((value, metric, result))
            successes += 1
        except (ChainStructureError, ConfigError, ValueError) as exc:
            rows.append((value, "error", str(exc)))
    meta = {
        "command": "sweep",
        "variable": sweep.variable,
        "points": len(sweep.values),
        "failed_points": len(sweep.values) - successes,
        "config": config.as_dict(),
    }
    _write_csv(out_dir / "sweep.csv", ("sweep_value", "metric", "value"), rows, meta, args.quiet)
    if successes == 0:
        print("analysis error: every sweep point failed", file=sys.stderr)
        return EXIT_ANALYSIS
    return EXIT_OK


def cmd_simulate(config: ExperimentConfig, args: argparse.Namespace) -> int:
    params = config.network_params()
    population = config.population()
    rule = config.rule(params, population.n)
    spec = config.simulation_spec(seed_override=args.seed)
    decimation = config.trajectory_decimation()
    quiet = args.quiet
    out_dir = _resolve_out_dir(args, config)
    kernel = chain.build_kernel(params, population, rule)
    structure = chain.classify(kernel)
    result = montecarlo.run(spec, kernel, trajectory_decimation=decimation)
    analytic: StationaryDistribution | None
    try:
        analytic, _, _ = _analytic_stationary(config, params, population)
    except (ChainStructureError, ValueError):
        analytic = None
    tv: float | None = None
    if analytic is not None:
        tv = chain.total_variation(result.histogram.to_distribution(), analytic)
        _say(quiet, f"tv distance to analytic law = {tv!r}")
    else:
        _say(quiet, "no analytic stationary law for this chain; skipping TV comparison")
    base_meta = {
        "command": "simulate",
        "network": _params_meta(params),
        "population": _population_meta(population),
        "rule": repr(rule),
        "chain_class": structure.kind,
        "seed": spec.seed,
        "steps": spec.steps,
        "burn_in": spec.resolve_burn_in(population.n),
        "replicas": spec.replicas,
        "initial_state": spec.initial_state,
        "trajectory_decimation": decimation,
        "tv_to_analytic": tv,
        "final_states": result.final_states.tolist(),
        "config": config.as_dict(),
    }
    freqs = result.histogram.frequencies()
    hist_rows = [
        (k, int(c), float(f))
        for k, (c, f) in enumerate(zip(result.histogram.counts, freqs))
    ]
    _write_csv(
        out_dir / "histogram.csv", ("k", "count", "frequency"), hist_rows, base_meta, quiet
    )
    if result.trajectory is not None:
        traj_rows = [(int(e), int(k)) for e, k in result.trajectory]
        _write_csv(out_dir / "trajectory.csv", ("event", "k"), traj_rows, base_meta, quiet)
    return EXIT_OK


def cmd_replicator(config: ExperimentConfig, args: argparse.Namespace) -> int:
    params = config.network_params()
    settings = config.replicator_settings()
    quiet = args.quiet
    out_dir = _resolve_out_dir(args, config)
    try:
        result = replicator.integrate(
            params,
            initial_share=settings["initial_share"],
            horizon=settings["horizon"],
            rtol=settings["rtol"],
            gain=settings["gain"],
        )
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _say(quiet, f"fixed point = {result.fixed_point!r}")
    _say(quiet, f"converged   = {result.converged}")
    meta = {
        "command": "replicator",
        "network": _params_meta(params),
        "settings": settings,
        "fixed_point": result.fixed_point,
        "converged": result.converged,
        "config": config.as_dict(),
    }
    rows = [(s.time, s.share_primary) for s in result.trajectory]
    _write_csv(out_dir / "replicator.csv", ("time", "x_p"), rows, meta, quiet)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Figure reproduction
# ---------------------------------------------------------------------------

# Shared environment of all built-in figure datasets: a channel of
# capacity 100, unit delay weight, and the price gap calibrated so the
# equilibrium share sits at 0.68 (giving critical state 7 when n = 10).
_FIG_CAPACITY = 100.0
_FIG_ARRIVAL = 30.0
_FIG_DELAY_WEIGHT = 1.0
_FIG_TARGET_SHARE = 0.68


def _figure_params(arrival: float = _FIG_ARRIVAL) -> NetworkParams:
    gap = model.calibrate_price_gap(
        _FIG_CAPACITY, arrival, _FIG_DELAY_WEIGHT, _FIG_TARGET_SHARE
    )
    return NetworkParams(
        capacity=_FIG_CAPACITY,
        arrival=arrival,
        delay_weight=_FIG_DELAY_WEIGHT,
        price_primary=gap,
        price_secondary=0.0,
    )


def _figure_meta(params: NetworkParams, **extra: Any) -> dict[str, Any]:
    return {
        "command": "reproduce",
        "network": _params_meta(params),
        "target_share": _FIG_TARGET_SHARE,
        "note": "price gap calibrated so the equilibrium share is 0.68",
        **extra,
    }


def _fig1a(out_dir: Path, quiet: bool) -> None:
    """Two-point noise-free law over 10 users, with the equilibrium marker."""
    params = _figure_params()
    population = PopulationConfig(n=10)
    distribution = chain.stationary_noise_free(params, population)
    k_star = model.critical_state(params, population.n)
    rows = [(k, float(p)) for k, p in enumerate(distribution.psi)]
    meta = _figure_meta(
        params,
        figure="fig1a",
        population=_population_meta(population),
        rule="proportional (noise-free)",
        critical_state=k_star,
        equilibrium_marker=population.n * model.equilibrium(params).share_primary,
    )
    _write_csv(out_dir / "fig1a.csv", ("k", "psi"), rows, meta, quiet)


def _fig1b(out_dir: Path, quiet: bool) -> None:
    """Expected PoA of the noise-free law vs. arrival, n = 10 and n = 100.

    The price gap is recalibrated at every arrival so the equilibrium
    share stays at 0.68 and the critical state stays interior.
    """
    rows = []
    for arrival in np.arange(5.0, 96.0, 5.0):
        params = _figure_params(arrival=float(arrival))
        for n in (10, 100):
            distribution = chain.stationary_noise_free(params, PopulationConfig(n=n))
            poa_e = model.expected_poa(params, distribution)
            rows.append((float(arrival), f"poa_expected_n{n}", poa_e))
        rows.append((float(arrival), "poa_nash", model.poa_at(params, _FIG_TARGET_SHARE)))
    meta = _figure_meta(
        _figure_params(),
        figure="fig1b",
        rule="proportional (noise-free)",
        populations=[10, 100],
        note_sweep="gap recalibrated per arrival to hold the equilibrium share at 0.68",
    )
    _write_csv(out_dir / "fig1b.csv", ("sweep_value", "metric", "value"), rows, meta, quiet)


def _fig2a(out_dir: Path, quiet: bool) -> None:
    """Absorbing-case illustration: exact absorption report for the
    unanchored noisy chain, plus the all-primary point mass it ends in."""
    params = _figure_params()
    population = PopulationConfig(n=10)
    ratio = 1.0
    rule = fermi_from_ratio(params, population.n, ratio)
    kernel = chain.build_kernel(params, population, rule)
    absorb_rows = []
    for k0 in range(population.n + 1):
        result = chain.absorption_analysis(kernel, k0)
        absorb_rows.append(
            (k0, result.prob_absorb_at_0, result.prob_absorb_at_n, result.expected_steps)
        )
    meta = _figure_meta(
        params,
        figure="fig2a",
        population=_population_meta(population),
        rule=repr(rule),
        beta_ratio=ratio,
        note_rule="noise intensity ratio 1.0 chosen for the illustration and recorded here",
    )
    _write_csv(
        out_dir / "fig2a_absorption.csv",
        ("k0", "prob_absorb_at_0", "prob_absorb_at_n", "expected_steps"),
        absorb_rows,
        meta,
        quiet,
    )
    # The illustrated long-run outcome: everyone on the primary network.
    point_mass = [(k, 1.0 if k == population.n else 0.0) for k in range(population.n + 1)]
    _write_csv(out_dir / "fig2a_distribution.csv", ("k", "psi"), point_mass, meta, quiet)


def _fig2b(out_dir: Path, quiet: bool) -> None:
    """Closed-form absorbing-case PoA as the arrival rate fills the channel."""
    rows = []
    for arrival in np.arange(1.0, 100.0, 1.0):
        params = _figure_params(arrival=float(arrival))
        rows.append((float(arrival), "poa_absorbing", model.poa_absorbing(params)))
    meta = _figure_meta(_figure_params(), figure="fig2b")
    _write_csv(out_dir / "fig2b.csv", ("sweep_value", "metric", "value"), rows, meta, quiet)


def _fig3a(out_dir: Path, quiet: bool) -> None:
    """Anchored stationary laws at noise ratios 0, 1, 10 over 10 users."""
    params = _figure_params()
    population = PopulationConfig(n=10, anchored_primary=1, anchored_secondary=1)
    ratios = (0.0, 1.0, 10.0)
    dist_rows = []
    summary_rows = []
    for ratio in ratios:
        rule = fermi_from_ratio(params, population.n, ratio)
        kernel = chain.build_kernel(params, population, rule)
        distribution = chain.stationary_product(kernel)
        for k, p in enumerate(distribution.psi):
            dist_rows.append((ratio, k, float(p)))
        poa_e = model.expected_poa(params, distribution)
        mode = chain.distribution_mode(distribution)
        summary_rows.append((ratio, "poa_expected", poa_e))
        summary_rows.append((ratio, "mode_low", mode[0]))
        summary_rows.append((ratio, "mode_high", mode[-1]))
    meta = _figure_meta(
        params,
        figure="fig3a",
        population=_population_meta(population),
        beta_ratios=list(ratios),
        beta_reference=beta_reference(params, population.n),
    )
    _write_csv(out_dir / "fig3a_distributions.csv", ("beta_ratio", "k", "psi"), dist_rows, meta, quiet)
    _write_csv(out_dir / "fig3a_summary.csv", ("sweep_value", "metric", "value"), summary_rows, meta, quiet)


def _fig3b(out_dir: Path, quiet: bool) -> None:
    """Anchored stationary laws at ratio 1 for n = 10, 100, 1000, with a
    matched-moment Gaussian overlay per population size."""
    sizes = (10, 100, 1000)
    ratio = 1.0
    dist_rows = []
    summary_rows = []
    for n in sizes:
        params = _figure_params()
        population = PopulationConfig(n=n, anchored_primary=1, anchored_secondary=1)
        rule = fermi_from_ratio(params, n, ratio)
        kernel = chain.build_kernel(params, population, rule)
        distribution = chain.stationary_product(kernel)
        states = np.arange(n + 1)
        mean = float(np.dot(states, distribution.psi))
        var = float(np.dot((states - mean) ** 2, distribution.psi))
        sd = math.sqrt(var)
        gauss = np.exp(-((states - mean) ** 2) / (2.0 * var)) / (sd * math.sqrt(2.0 * math.pi))
        for k in states:
            dist_rows.append((n, int(k), float(distribution.psi[k]), float(gauss[k])))
        poa_e = model.expected_poa(params, distribution)
        mode = chain.distribution_mode(distribution)
        summary_rows.append((n, "poa_expected", poa_e))
        summary_rows.append((n, "mean", mean))
        summary_rows.append((n, "sd", sd))
        summary_rows.append((n, "mode_low", mode[0]))
        summary_rows.append((n, "mode_high", mode[-1]))
    meta = _figure_meta(
        _figure_params(),
        figure="fig3b",
        beta_ratio=ratio,
        populations=list(sizes),
        anchored=[1, 1],
        note_gauss="gaussian_fit matches the law's mean and variance, scaled as a density",
    )
    _write_csv(
        out_dir / "fig3b_distributions.csv",
        ("n", "k", "psi", "gaussian_fit"),
        dist_rows,
        meta,
        quiet,
    )
    _write_csv(out_dir / "fig3b_summary.csv", ("sweep_value", "metric", "value"), summary_rows, meta, quiet)


_FIGURES = {
    "fig1a": _fig1a,
    "fig1b": _fig1b,
    "fig2a": _fig2a,
    "fig2b": _fig2b,
    "fig3a": _fig3a,
    "fig3b": _fig3b,
}

_GNUPLOT_STUBS = {
    "fig1a": 'set datafile separator ","\nset xlabel "k"\nset ylabel "psi"\nplot "fig1a.csv" skip 1 using 1:2 with boxes title "stationary law"\n',
    "fig1b": 'set datafile separator ","\nset xlabel "arrival"\nset ylabel "expected PoA"\nplot "fig1b.csv" skip 1 using 1:3 with points title "sweep"\n',
    "fig2a": 'set datafile separator ","\nset xlabel "k"\nset ylabel "psi"\nplot "fig2a_distribution.csv" skip 1 using 1:2 with boxes title "absorbed outcome"\n',
    "fig2b": 'set datafile separator ","\nset xlabel "arrival"\nset ylabel "PoA"\nplot "fig2b.csv" skip 1 using 1:3 with lines title "absorbing PoA"\n',
    "fig3a": 'set datafile separator ","\nset xlabel "k"\nset ylabel "psi"\nplot "fig3a_distributions.csv" skip 1 using 2:3 with points title "stationary laws"\n',
    "fig3b": 'set datafile separator ","\nset xlabel "k"\nset ylabel "psi"\nplot "fig3b_distributions.csv" skip 1 using 2:3 with points title "laws", "" skip 1 using 2:($4/$1) with lines title "gaussian"\n',
}


def cmd_reproduce(args: argparse.Namespace) -> int:
    if args.figure == "all":
        figures = list(_FIGURES)
    else:
        figures = [args.figure]
    out_dir = _resolve_out_dir(args, None)
    for figure in figures:
        _FIGURES[figure](out_dir, args.quiet)
        if args.gnuplot:
            stub_path = out_dir / f"{figure}.gp"
            stub_path.write_text(_GNUPLOT_STUBS[figure], encoding="utf-8")
            if not args.quiet:
                print(f"wrote {stub_path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netsel",
        description="Network-selection game: equilibria, stationary laws, simulation.",
    )
    parser.add_argument("--version", action="version", version=f"netsel {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, needs_config: bool = True) -> None:
        if needs_config:
            p.add_argument("--config", required=True, help="INI experiment file")
        p.add_argument("--out", help="output directory (default: config, then $NETSEL_OUT_DIR, then cwd)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--quiet", action="store_true", help="suppress console summary lines")

    for name, helptext in (
        ("equilibrium", "equal-cost split, critical state, welfare, PoA"),
        ("stationary", "stationary distribution (or absorption report)"),
        ("sweep", "metric across a parameter grid"),
        ("simulate", "seeded Monte Carlo run with histogram and trajectory"),
        ("replicator", "deterministic mean-dynamics trajectory"),
    ):
        add_common(sub.add_parser(name, help=helptext))
    repro = sub.add_parser("reproduce", help="emit built-in figure datasets")
    repro.add_argument(
        "--figure",
        required=True,
        choices=[*_FIGURES, "all"],
        help="which dataset to write",
    )
    repro.add_argument("--gnuplot", action="store_true", help="also write a gnuplot stub")
    add_common(repro, needs_config=False)
    return parser


_COMMANDS = {
    "equilibrium": cmd_equilibrium,
    "stationary": cmd_stationary,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "replicator": cmd_replicator,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "reproduce":
        return cmd_reproduce(args)
    try:
        config = parse_config(args.config)
        return _COMMANDS[args.command](config, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def entry() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
