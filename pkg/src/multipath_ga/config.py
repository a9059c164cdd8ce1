"""Flat key = value config files with dotted sections.

Example:

    # three-path default scene
    record_len = 1000
    snr_db = 20
    channel.amplitudes = 1, -0.8, 0.4
    channel.delays = 200, 204, 220
    ga.max_generations = 500
    mode = hybrid

Lines are `key = value`, `#` starts a comment, keys are checked against
a registry (unknown or duplicate keys are errors with the offending
line number), and every key can also be set from the command line with
a flag of the same dotted name. Values parsed from overrides win over
the file, which wins over defaults.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

from .errors import ConfigError, DomainError
from .estimator import MODE_FULL, MODE_HYBRID
from .ga import GaConfig
from .scenario import ScenarioConfig
from .signals import ChirpSpec, MultipathChannel

_MODE_NAMES = {"full": MODE_FULL, "hybrid": MODE_HYBRID}


@dataclass(frozen=True)
class Key:
    name: str
    kind: str  # int | float | bool | mode | float_list | opt_int | opt_float
    help: str = ""


REGISTRY = {
    k.name: k
    for k in [
        Key("seed", "int", "master seed for every derived RNG stream"),
        Key("t_s", "float", "sampling interval in seconds"),
        Key("record_len", "int", "received record length in samples (even)"),
        Key("snr_db", "opt_float", "SNR in dB; omit (or set noiseless) for no noise"),
        Key("noiseless", "bool", "explicit no-noise flag, conflicts with snr_db"),
        Key("threshold_frac", "float", "band threshold as a fraction of peak |S|"),
        Key("mode", "mode", "estimator mode: full or hybrid"),
        Key("num_paths", "opt_int", "paths to estimate (default: true path count)"),
        Key("trials", "int", "Monte-Carlo trials per SNR in bench"),
        Key("snr_list", "float_list", "bench SNRs in dB (inf = noiseless)"),
        Key("chirp.n_sig", "int", "pulse length in samples"),
        Key("chirp.n_w", "opt_int", "window ramp length (default n_sig/10)"),
        Key("chirp.f1", "float", "sweep start, cycles/sample"),
        Key("chirp.f2", "float", "sweep end, cycles/sample"),
        Key("channel.amplitudes", "float_list", "true path amplitudes"),
        Key("channel.delays", "float_list", "true path delays in samples"),
        Key("ga.population_size", "int", ""),
        Key("ga.crossover_prob", "float", ""),
        Key("ga.mutation_prob", "float", "per-bit flip probability"),
        Key("ga.elitism_count", "int", ""),
        Key("ga.max_generations", "int", "hard generation cap"),
        Key("ga.plateau_window", "opt_int", "stop after this many flat generations"),
        Key("ga.plateau_epsilon", "float", "improvement below this counts as flat"),
        Key("ga.stop_on_uniform", "bool", "stop when the population is uniform"),
        Key("ga.crossover_points", "int", "1 = classic one-point"),
        Key("amp_bounds", "float_list", "amplitude search box, two values"),
        Key("delay_bits", "int", "bits per delay gene"),
        Key("amp_bits", "int", "bits per amplitude gene"),
    ]
}


def _parse_value(key: Key, raw: str, path, line):
    def fail(msg):
        raise ConfigError(f"key '{key.name}': {msg}", path, line)

    raw = raw.strip()
    if raw == "":
        fail("empty value")
    kind = key.kind
    try:
        if kind in ("int", "opt_int"):
            return int(raw)
        if kind in ("float", "opt_float"):
            return float(raw)
        if kind == "bool":
            low = raw.lower()
            if low in ("true", "1", "yes"):
                return True
            if low in ("false", "0", "no"):
                return False
            fail(f"expected a boolean, got {raw!r}")
        if kind == "mode":
            if raw not in _MODE_NAMES:
                fail(f"expected 'full' or 'hybrid', got {raw!r}")
            return _MODE_NAMES[raw]
        if kind == "float_list":
            return tuple(float(tok) for tok in raw.split(","))
    except ValueError as exc:
        fail(str(exc))
    raise AssertionError(f"unhandled kind {kind}")


def parse_config_text(text: str, path: str = "<config>") -> dict:
    """Parse config text into {key: (value, line_number)}."""
    entries: dict[str, tuple[object, int]] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        stripped = raw_line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError("expected 'key = value'", path, lineno)
        name, raw_value = stripped.split("=", 1)
        name = name.strip()
        if name not in REGISTRY:
            raise ConfigError(f"unknown key '{name}'", path, lineno)
        if name in entries:
            first = entries[name][1]
            raise ConfigError(
                f"duplicate key '{name}' (first set on line {first})", path, lineno
            )
        entries[name] = (_parse_value(REGISTRY[name], raw_value, path, lineno), lineno)
    return entries


def load_config_file(path) -> dict:
    with open(path, "r") as fh:
        return parse_config_text(fh.read(), str(path))


def apply_overrides(entries: dict, overrides: dict[str, str]) -> dict:
    """Layer CLI override strings (same dotted names) over file entries."""
    merged = dict(entries)
    for name, raw in overrides.items():
        if name not in REGISTRY:
            raise ConfigError(f"unknown key '{name}'", "<cli>")
        merged[name] = (_parse_value(REGISTRY[name], raw, "<cli>", None), None)
    return merged


def resolve(entries: dict) -> tuple[ScenarioConfig, dict]:
    """Build a validated ScenarioConfig from merged entries.

    Returns the config and the flat dict of resolved values (defaults
    filled in) that canonical_text/config hashing work from.
    """

    def get(name, default=None):
        return entries[name][0] if name in entries else default

    def line_of(name):
        return entries[name][1] if name in entries else None

    def build(factory, kwargs, owner_keys):
        try:
            return factory(**kwargs)
        except DomainError as exc:
            lines = [line_of(k) for k in owner_keys if line_of(k) is not None]
            raise ConfigError(
                str(exc), None, lines[0] if lines else None
            ) from exc

    snr_db = get("snr_db")
    noiseless = get("noiseless")
    if noiseless is True and snr_db is not None:
        raise ConfigError(
            "conflicting keys: noiseless=true together with snr_db", None,
            line_of("noiseless"),
        )
    if noiseless is False and snr_db is None:
        raise ConfigError(
            "noiseless=false requires snr_db", None, line_of("noiseless")
        )
    if snr_db is not None and math.isinf(snr_db):
        snr_db = None

    chirp = build(
        ChirpSpec,
        dict(
            n_sig=get("chirp.n_sig", 750),
            n_w=get("chirp.n_w"),
            f1=get("chirp.f1", 0.1),
            f2=get("chirp.f2", 0.15),
        ),
        ["chirp.n_sig", "chirp.n_w", "chirp.f1", "chirp.f2"],
    )
    channel = build(
        MultipathChannel,
        dict(
            amplitudes=get("channel.amplitudes", (1.0, -0.8, 0.4)),
            delays=get("channel.delays", (200.0, 204.0, 220.0)),
        ),
        ["channel.amplitudes", "channel.delays"],
    )
    ga = build(
        GaConfig,
        dict(
            population_size=get("ga.population_size", 50),
            crossover_prob=get("ga.crossover_prob", 0.6),
            mutation_prob=get("ga.mutation_prob", 0.001),
            elitism_count=get("ga.elitism_count", 1),
            max_generations=get("ga.max_generations", 500),
            plateau_window=get("ga.plateau_window"),
            plateau_epsilon=get("ga.plateau_epsilon", 0.0),
            stop_on_uniform=get("ga.stop_on_uniform", False),
            crossover_points=get("ga.crossover_points", 1),
            seed=get("seed", 0),
        ),
        [
            "ga.population_size", "ga.crossover_prob", "ga.mutation_prob",
            "ga.elitism_count", "ga.max_generations", "ga.plateau_window",
            "ga.plateau_epsilon", "ga.stop_on_uniform", "ga.crossover_points",
            "seed",
        ],
    )
    amp_bounds = get("amp_bounds", (-2.0, 2.0))
    if len(amp_bounds) != 2:
        raise ConfigError(
            f"amp_bounds needs exactly two values, got {len(amp_bounds)}",
            None, line_of("amp_bounds"),
        )
    cfg = build(
        ScenarioConfig,
        dict(
            chirp=chirp,
            channel=channel,
            record_len=get("record_len", 1000),
            t_s=get("t_s", 1.0),
            snr_db=snr_db,
            threshold_frac=get("threshold_frac", 0.1),
            mode=get("mode", MODE_FULL),
            num_paths=get("num_paths"),
            trials=get("trials", 50),
            snr_list=tuple(get("snr_list", (20.0, 10.0, 0.0, -10.0))),
            seed=get("seed", 0),
            ga=ga,
            amp_bounds=tuple(amp_bounds),
            delay_bits=get("delay_bits", 16),
            amp_bits=get("amp_bits", 12),
        ),
        ["record_len", "t_s", "threshold_frac", "mode", "num_paths", "trials",
         "snr_list", "delay_bits", "amp_bits"],
    )
    resolved = _resolved_values(cfg)
    return cfg, resolved


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, (tuple, list)):
        return ", ".join(_fmt(v) for v in value)
    return str(value)


def _resolved_values(cfg: ScenarioConfig) -> dict:
    mode_name = {v: k for k, v in _MODE_NAMES.items()}[cfg.mode]
    values = {
        "seed": cfg.seed,
        "t_s": cfg.t_s,
        "record_len": cfg.record_len,
        "snr_db": math.inf if cfg.snr_db is None else cfg.snr_db,
        "threshold_frac": cfg.threshold_frac,
        "mode": mode_name,
        "num_paths": cfg.num_paths,
        "trials": cfg.trials,
        "snr_list": cfg.snr_list,
        "chirp.n_sig": cfg.chirp.n_sig,
        "chirp.n_w": cfg.chirp.n_w,
        "chirp.f1": cfg.chirp.f1,
        "chirp.f2": cfg.chirp.f2,
        "channel.amplitudes": tuple(cfg.channel.amplitudes),
        "channel.delays": tuple(cfg.channel.delays),
        "ga.population_size": cfg.ga.population_size,
        "ga.crossover_prob": cfg.ga.crossover_prob,
        "ga.mutation_prob": cfg.ga.mutation_prob,
        "ga.elitism_count": cfg.ga.elitism_count,
        "ga.max_generations": cfg.ga.max_generations,
        "ga.plateau_window": cfg.ga.plateau_window,
        "ga.plateau_epsilon": cfg.ga.plateau_epsilon,
        "ga.stop_on_uniform": cfg.ga.stop_on_uniform,
        "ga.crossover_points": cfg.ga.crossover_points,
        "amp_bounds": cfg.amp_bounds,
        "delay_bits": cfg.delay_bits,
        "amp_bits": cfg.amp_bits,
    }
    return values


def canonical_text(resolved: dict) -> str:
    lines = []
    for name in sorted(resolved):
        value = resolved[name]
        if value is None:
            continue
        lines.append(f"{name} = {_fmt(value)}")
    return "\n".join(lines) + "\n"


def config_hash(resolved: dict) -> str:
    digest = hashlib.sha256(canonical_text(resolved).encode()).hexdigest()
    return f"sha256:{digest[:16]}"


def load_scenario(config_path=None, overrides: dict[str, str] | None = None):
    """File (optional) + overrides -> (ScenarioConfig, resolved dict)."""
    entries = load_config_file(config_path) if config_path is not None else {}
    if overrides:
        entries = apply_overrides(entries, overrides)
    return resolve(entries)
