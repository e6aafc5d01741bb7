"""Experiment runner.

Three subcommands: `network` trains the ideal model on smoothed noise and
writes metrics plus weight/reconstruction snapshots; `single-synapse` and
`two-synapse` run the behavioral synapse datapath against a constant-rate
spike train and write the full trace. Every run echoes its effective config
into the output directory, so any result can be reproduced from the files it
sits next to.

Exit codes: 0 success, 2 config error, 3 divergence / non-convergence.
"""

from __future__ import annotations

import argparse
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import numpy as np

from . import config as configfile
from .core import (
    RecurrentMatrix,
    optimal_recurrent,
    params_for_decoder,
    random_decoder,
    train,
)
from .errors import ConfigurationError, SimulationDiverged
from .hwmodel import (
    HwParams,
    run_single_synapse,
    run_two_synapse,
    summarize_trace,
    trace_to_csv,
)
from .metrics import frobenius_distance, metrics_to_csv
from .signals import Signal, regular_spike_train, signal_to_csv, smoothed_noise

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3


def _write_matrix(matrix, path) -> None:
    with open(path, "w") as fh:
        for row in np.asarray(matrix, dtype=float):
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def cmd_network(values: dict) -> int:
    """Train the network experiment described by the effective config."""
    seed = values["seed"]
    dt = values["dt"]
    ss_decoder, ss_signal, ss_codes = np.random.SeedSequence(seed).spawn(3)
    d = random_decoder(
        values["n_inputs"], values["n_neurons"], np.random.default_rng(ss_decoder)
    )
    params = params_for_decoder(
        d,
        dt=dt,
        lam=values["lam"],
        v_rest=values["v_rest"],
        seed=seed,
        omega_step=values["omega_step"],
    )
    n_steps = int(round(values["duration"] / dt))
    sig = smoothed_noise(
        values["n_inputs"],
        n_steps,
        dt,
        values["noise_sigma"],
        values["kernel_sigma"],
        ss_signal,
    )
    reach = values["initial_code_range"]
    if not 0 <= reach <= 63:
        raise ConfigurationError("initial_code_range must be in [0, 63]")
    codes = np.random.default_rng(ss_codes).integers(
        -reach, reach + 1, size=(params.n_neurons, params.n_neurons)
    )
    omega0 = RecurrentMatrix(codes, params.omega_step)
    target = optimal_recurrent(d)

    n_iter = values["n_iterations"]
    record = {1, n_iter} if n_iter > 0 else set()
    result = train(params, d, omega0, sig, n_iter, record_iterations=record)

    outdir = Path(values["output_dir"])
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "config_effective.txt").write_text(
        configfile.format_config(values, "network")
    )
    metrics_to_csv(result.metrics, outdir / "metrics.csv")
    _write_matrix(omega0.physical, outdir / "omega_initial.csv")
    _write_matrix(result.omega.physical, outdir / "omega_final.csv")
    _write_matrix(target, outdir / "omega_optimal.csv")
    if n_iter > 0:
        signal_to_csv(
            Signal(result.reconstructions[1], dt), outdir / "reconstruction_first.csv"
        )
        signal_to_csv(
            Signal(result.reconstructions[n_iter], dt), outdir / "reconstruction_last.csv"
        )

    print(
        f"network: {params.n_neurons} neurons, {params.n_inputs} inputs, "
        f"{n_iter} iterations, seed {seed}"
    )
    if result.metrics:
        first, last = result.metrics[0], result.metrics[-1]
        print(f"rmse: iteration 1 {first.rmse:.6g} -> final {last.rmse:.6g}")
        print(
            f"mean_rate: iteration 1 {first.mean_rate:.6g} Hz -> "
            f"final {last.mean_rate:.6g} Hz"
        )
    frob_initial = frobenius_distance(omega0, target)
    frob_final = frobenius_distance(result.omega, target)
    print(f"frob_dist: initial {frob_initial:.6g} -> final {frob_final:.6g}")
    print(f"wrote {outdir}")
    return EXIT_OK


def _hw_params(values: dict) -> HwParams:
    return HwParams(
        i_rest=values["i_rest"],
        i_reset=values["i_reset"],
        i_sl=values["i_sl"],
        i_unit=values["i_unit"],
        pulse_width=values["pulse_width"],
        tau_dpi=values["tau_dpi"],
        tau_mem=values["tau_mem"],
        gain=values["gain"],
        dt=values["dt"],
        i_leak_target=values["i_leak_target"],
    )


def _finish_hw(experiment: str, values: dict, trace, params: HwParams) -> int:
    outdir = Path(values["output_dir"])
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "config_effective.txt").write_text(
        configfile.format_config(values, experiment)
    )
    trace_to_csv(trace, outdir / "trace.csv")
    s = summarize_trace(trace, params)
    print(f"{experiment}: final weight code {s.final_code}")
    print(f"settled within band: {'yes' if s.settled else 'no'}")
    settle = f"{s.settle_time:.6g} s" if s.settle_time is not None else "n/a"
    print(f"settle time: {settle}")
    print(f"weight commits: {s.n_commits}, decrement time {s.decrement_time:.6g} s")
    over = "yes" if s.overshoot else "no"
    print(f"max i_mem: {s.max_i_mem:.6g} A (overshoot above i_rest: {over})")
    print(f"wrote {outdir}")
    if s.pinned:
        print(
            "non-convergence: weight code pinned at a bound while i_mem "
            "stayed outside the band",
            file=sys.stderr,
        )
        return EXIT_DIVERGED
    return EXIT_OK


def cmd_single_synapse(values: dict) -> int:
    params = _hw_params(values)
    drive = regular_spike_train(values["rate_hz"], values["duration"])
    trace = run_single_synapse(params, drive, initial_code=values["initial_code"])
    return _finish_hw("single-synapse", values, trace, params)


def cmd_two_synapse(values: dict) -> int:
    params = _hw_params(values)
    drive = regular_spike_train(values["rate_hz"], values["duration"])
    trace = run_two_synapse(
        params,
        drive,
        initial_code=values["initial_code"],
        fixed_code=values["fixed_code"],
    )
    return _finish_hw("two-synapse", values, trace, params)


_COMMANDS = {
    "network": cmd_network,
    "single-synapse": cmd_single_synapse,
    "two-synapse": cmd_two_synapse,
}


def _dispatch(experiment: str, values: dict) -> int:
    return _COMMANDS[experiment](values)


def _parse_sweep(spec: str, experiment: str):
    key, sep, rng = spec.partition("=")
    key = key.strip()
    if not sep:
        raise ConfigurationError("--sweep expects KEY=A..B")
    schema = configfile.schema_for(experiment)
    if key not in schema:
        raise ConfigurationError(f"--sweep: unknown key {key!r}")
    if schema[key].kind != "int":
        raise ConfigurationError(f"--sweep: key {key!r} is not integer-valued")
    lo_txt, sep, hi_txt = rng.partition("..")
    if not sep:
        raise ConfigurationError("--sweep expects KEY=A..B")
    try:
        lo, hi = int(lo_txt), int(hi_txt)
    except ValueError:
        raise ConfigurationError("--sweep bounds must be integers") from None
    if lo > hi:
        raise ConfigurationError("--sweep range is empty (A > B)")
    return key, lo, hi


def _sweep_worker(experiment: str, values: dict):
    buf = io.StringIO()
    try:
        with redirect_stdout(buf), redirect_stderr(buf):
            code = _dispatch(experiment, values)
    except ConfigurationError as err:
        print(f"config error: {err}", file=buf)
        code = EXIT_CONFIG
    except SimulationDiverged as err:
        print(f"simulation diverged: {err}", file=buf)
        code = EXIT_DIVERGED
    return code, buf.getvalue()


def _run_sweep(experiment: str, values: dict, spec: str) -> int:
    """Run one simulation per sweep value, each in its own subdirectory."""
    key, lo, hi = _parse_sweep(spec, experiment)
    base = Path(values["output_dir"])
    jobs = []
    for v in range(lo, hi + 1):
        per = dict(values)
        per[key] = v
        per["output_dir"] = str(base / f"{key}={v}")
        jobs.append((v, per))
    worst = EXIT_OK
    with ProcessPoolExecutor() as pool:
        futures = [(v, pool.submit(_sweep_worker, experiment, per)) for v, per in jobs]
        for v, fut in futures:
            code, text = fut.result()
            print(f"--- {key}={v} (exit {code}) ---")
            sys.stdout.write(text)
            worst = max(worst, code)
    return worst


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ebn-forge",
        description="Run the spike-coding network and synapse-datapath experiments.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True, metavar="experiment")
    summaries = {
        "network": "train the ideal network on smoothed noise",
        "single-synapse": "one plastic synapse against a constant-rate drive",
        "two-synapse": "plastic plus fixed-weight synapse on the same drive",
    }
    for name in configfile.EXPERIMENTS:
        p = sub.add_parser(name, help=summaries[name])
        p.add_argument("--config", metavar="PATH", help="config file (key = value lines)")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--out", metavar="DIR", help="override the config output_dir")
        p.add_argument(
            "--dump-defaults",
            action="store_true",
            help="print this experiment's default config and exit",
        )
        p.add_argument(
            "--sweep",
            metavar="KEY=A..B",
            help="run KEY over the integer range A..B concurrently, "
            "one subdirectory per value",
        )
        if name == "network":
            p.add_argument("--iterations", type=int, help="override n_iterations")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.dump_defaults:
        sys.stdout.write(configfile.dump_defaults(args.experiment))
        return EXIT_OK
    try:
        if args.config is None:
            raise ConfigurationError("--config is required (or use --dump-defaults)")
        values = configfile.load_config(args.config, args.experiment)
        if args.seed is not None:
            values["seed"] = args.seed
        if args.out is not None:
            values["output_dir"] = args.out
        iterations = getattr(args, "iterations", None)
        if iterations is not None:
            if iterations < 0:
                raise ConfigurationError("--iterations must be >= 0")
            values["n_iterations"] = iterations
        if args.sweep:
            return _run_sweep(args.experiment, values, args.sweep)
        return _dispatch(args.experiment, values)
    except ConfigurationError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except SimulationDiverged as err:
        where = (
            f"iteration {err.iteration}"
            if err.iteration is not None
            else f"t = {err.time}"
        )
        print(f"simulation diverged at {where}: {err}", file=sys.stderr)
        return EXIT_DIVERGED


if __name__ == "__main__":
    sys.exit(main())
