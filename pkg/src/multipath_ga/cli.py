"""Command line interface.

Subcommands:
  synth      write the configured pulse and received record as CSV
  sweep      error-function slice along one parameter, others at truth
  estimate   run the GA estimator once and write report + history
  bench      Monte-Carlo MSE table over an SNR list

Exit codes: 0 success, 2 config or validation problem, 3 estimation
failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import REGISTRY, config_hash, load_scenario
from .csvio import format_value, write_csv
from .errors import ConfigError, DomainError, EstimationError
from .scenario import (
    make_clean_record,
    make_pulse,
    make_received,
    make_task,
    run_bench,
    sweep_slice,
    trial_seeds,
)
from .estimator import estimate


def _dest(name: str) -> str:
    return "key__" + name.replace(".", "__")


def _add_common(parser):
    parser.add_argument("--config", type=Path, default=None,
                        help="config file (key = value lines)")
    parser.add_argument("--out", type=Path, required=True,
                        help="output path (directory for synth/estimate, "
                             "file for sweep/bench)")
    group = parser.add_argument_group("config overrides")
    for key in REGISTRY.values():
        group.add_argument(f"--{key.name}", dest=_dest(key.name), metavar="V",
                           help=key.help or argparse.SUPPRESS)


def _overrides(args) -> dict[str, str]:
    out = {}
    for name in REGISTRY:
        value = getattr(args, _dest(name), None)
        if value is not None:
            out[name] = value
    return out


def _scenario(args):
    cfg, resolved = load_scenario(args.config, _overrides(args))
    meta = {
        "tool_version": __version__,
        "master_seed": cfg.seed,
        "config_hash": config_hash(resolved),
    }
    return cfg, meta


def _index_rows(signal):
    return [(i, float(v)) for i, v in enumerate(signal.samples)]


def cmd_synth(args) -> int:
    cfg, meta = _scenario(args)
    pulse = make_pulse(cfg)
    clean = make_clean_record(cfg, pulse)
    noise_seed, _ = trial_seeds(cfg.seed, 0, 0)
    received = make_received(cfg, noise_seed, clean=clean)
    out = Path(args.out)
    write_csv(out / "pulse.csv", ("index", "value"), _index_rows(pulse), meta)
    write_csv(out / "received.csv", ("index", "value"), _index_rows(received), meta)
    print(f"record_power = {format_value(clean.power)}")
    if cfg.snr_db is not None:
        noise = received.samples - clean.samples
        empirical = 10.0 * np.log10(clean.power / float(np.mean(noise**2)))
        print(f"empirical_snr_db = {empirical:.4f}")
    print(f"wrote {out / 'pulse.csv'} and {out / 'received.csv'}")
    return 0


def cmd_sweep(args) -> int:
    cfg, meta = _scenario(args)
    try:
        lo_s, hi_s = args.range.split(":")
        lo, hi = float(lo_s), float(hi_s)
    except ValueError:
        raise ConfigError(f"--range expects LO:HI, got {args.range!r}")
    values, errors = sweep_slice(cfg, args.param, lo, hi, args.steps)
    meta = {**meta, "parameter": args.param}
    write_csv(args.out, ("parameter_value", "E_c"),
              list(zip(values, errors)), meta)
    best = int(np.argmin(errors))
    print(f"argmin: {args.param} = {format_value(float(values[best]))} "
          f"(E_c = {errors[best]:.6g})")
    print(f"wrote {args.out}")
    return 0


def cmd_estimate(args) -> int:
    cfg, meta = _scenario(args)
    pulse = make_pulse(cfg)
    clean = make_clean_record(cfg, pulse)
    noise_seed, ga_seed = trial_seeds(cfg.seed, 0, 0)
    received = make_received(cfg, noise_seed, clean=clean)
    start = time.perf_counter()
    result = estimate(make_task(cfg, received, ga_seed, pulse=pulse))
    wall = time.perf_counter() - start

    rows = []
    for k, a in enumerate(result.channel.amplitudes):
        rows.append((f"a{k + 1}", float(a)))
    for k, d in enumerate(result.channel.delays):
        rows.append((f"tau{k + 1}", float(d)))
    rows.append(("objective", result.objective_at_estimate))
    rows.append(("generations", result.generations))

    out = Path(args.out)
    # wall time goes into the comment preamble, not the data rows, so
    # repeated runs with one seed produce identical report rows
    write_csv(out / "report.csv", ("name", "value"), rows,
              {**meta, "wall_time_s": f"{wall:.3f}"})
    history_rows = [
        (g, b, mn)
        for g, (b, mn) in enumerate(zip(result.history_best, result.history_mean))
    ]
    write_csv(out / "history.csv", ("generation", "best_E_c", "mean_E_c"),
              history_rows, meta)
    for name, value in rows:
        print(f"{name} = {format_value(value)}")
    if result.quality_warning:
        print(f"warning: {result.quality_warning}")
    print(f"wrote {out / 'report.csv'} and {out / 'history.csv'}")
    return 0


def cmd_bench(args) -> int:
    cfg, meta = _scenario(args)
    result = run_bench(cfg)
    write_csv(args.out, ("snr_db", "parameter_name", "mse", "trials"),
              result.rows, meta)
    print(f"wrote {args.out} ({len(result.rows)} rows, "
          f"{result.trials} trials per SNR)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multipath-ga",
        description="Multipath channel parameter estimation with a binary GA "
                    "on a thresholded spectral error function.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write pulse and received record CSVs")
    _add_common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("sweep", help="error slice along one parameter")
    _add_common(p)
    p.add_argument("--param", required=True,
                   help="a1..aM or tau1..tauM")
    p.add_argument("--range", required=True, help="LO:HI (delays in samples)")
    p.add_argument("--steps", required=True, type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("estimate", help="single estimation run")
    _add_common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("bench", help="MSE vs SNR Monte-Carlo study")
    _add_common(p)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except EstimationError as exc:
        print(f"estimation failed: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
