"""Scenario-level helpers: build records, sweep error slices, run benches.

A ScenarioConfig is the fully resolved description of one experiment:
pulse parameters, true channel, record length, noise level, estimator
mode and GA settings, and the Monte-Carlo shape (trials, SNR list,
master seed). Every run that needs randomness derives its own seeds
from (master_seed, snr_index, trial_index), so results are reproducible
and independent of execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .error_functions import ParamVector, caef_thresholded
from .errors import DomainError
from .estimator import (
    ChannelEstimate,
    EstimationTask,
    MODE_FULL,
    MODE_HYBRID,
    estimate,
    squared_errors,
)
from .ga import GaConfig
from .signals import (
    AwgnSpec,
    ChirpSpec,
    MultipathChannel,
    SampledSignal,
    add_awgn,
    apply_channel,
    generate_chirp,
)
from .spectral import dft, select_support

NOISELESS = math.inf


def _default_channel() -> MultipathChannel:
    return MultipathChannel([1.0, -0.8, 0.4], [200.0, 204.0, 220.0])


@dataclass(frozen=True)
class ScenarioConfig:
    """One experiment, fully resolved. snr_db=None means noiseless."""

    chirp: ChirpSpec = field(default_factory=ChirpSpec)
    channel: MultipathChannel = field(default_factory=_default_channel)
    record_len: int = 1000
    t_s: float = 1.0
    snr_db: float | None = None
    threshold_frac: float = 0.1
    mode: str = MODE_FULL
    num_paths: int | None = None
    trials: int = 50
    snr_list: tuple[float, ...] = (20.0, 10.0, 0.0, -10.0)
    seed: int = 0
    ga: GaConfig = field(default_factory=GaConfig)
    amp_bounds: tuple[float, float] = (-2.0, 2.0)
    delay_bits: int = 16
    amp_bits: int = 12

    def __post_init__(self):
        if self.record_len < 2 or self.record_len % 2 != 0:
            raise DomainError(
                f"record_len must be even and >= 2, got {self.record_len}"
            )
        if self.num_paths is None:
            object.__setattr__(self, "num_paths", self.channel.num_paths)
        if self.num_paths < 1:
            raise DomainError(f"num_paths must be >= 1, got {self.num_paths}")
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials}")
        if len(self.snr_list) < 1:
            raise DomainError("snr_list must not be empty")
        if self.mode not in (MODE_FULL, MODE_HYBRID):
            raise DomainError(f"unknown mode {self.mode!r}")


def trial_seeds(master_seed: int, snr_index: int, trial_index: int) -> tuple[int, int]:
    """Derive the (noise_seed, ga_seed) pair for one trial."""
    ss = np.random.SeedSequence(entropy=(master_seed, snr_index, trial_index))
    state = ss.generate_state(2, dtype=np.uint64)
    return int(state[0]), int(state[1])


def make_pulse(cfg: ScenarioConfig) -> SampledSignal:
    return generate_chirp(cfg.chirp, cfg.t_s)


def make_clean_record(cfg: ScenarioConfig, pulse: SampledSignal | None = None) -> SampledSignal:
    if pulse is None:
        pulse = make_pulse(cfg)
    return apply_channel(pulse, cfg.channel, cfg.record_len)


def make_received(
    cfg: ScenarioConfig,
    noise_seed: int,
    snr_db: float | None = None,
    clean: SampledSignal | None = None,
) -> SampledSignal:
    """Clean record plus noise at snr_db (falls back to cfg.snr_db)."""
    if clean is None:
        clean = make_clean_record(cfg)
    level = cfg.snr_db if snr_db is None else snr_db
    if level is None or level == NOISELESS:
        return clean
    return add_awgn(clean, AwgnSpec(level, noise_seed))


def make_task(
    cfg: ScenarioConfig, received: SampledSignal, ga_seed: int,
    pulse: SampledSignal | None = None,
) -> EstimationTask:
    if pulse is None:
        pulse = make_pulse(cfg)
    return EstimationTask(
        received=received,
        pulse=pulse,
        num_paths=cfg.num_paths,
        threshold_frac=cfg.threshold_frac,
        mode=cfg.mode,
        ga=replace(cfg.ga, seed=ga_seed),
        amp_bounds=cfg.amp_bounds,
        delay_bits=cfg.delay_bits,
        amp_bits=cfg.amp_bits,
    )


def parse_parameter_name(name: str, num_paths: int) -> tuple[str, int]:
    """Split 'a2' / 'tau3' into (kind, zero-based index), validated."""
    for kind in ("tau", "a"):
        if name.startswith(kind) and name[len(kind):].isdigit():
            k = int(name[len(kind):])
            if not 1 <= k <= num_paths:
                raise DomainError(
                    f"parameter {name!r} out of range for {num_paths} paths"
                )
            return kind, k - 1
    raise DomainError(
        f"unknown parameter {name!r}; expected a1..a{num_paths} or tau1..tau{num_paths}"
    )


def sweep_slice(
    cfg: ScenarioConfig, parameter: str, lo: float, hi: float, steps: int
) -> tuple[np.ndarray, np.ndarray]:
    """Thresholded error along one parameter, others held at the truth.

    Delay parameters sweep in samples, amplitudes in amplitude units.
    Returns (values, errors).
    """
    if steps < 2:
        raise DomainError(f"steps must be >= 2, got {steps}")
    if not lo < hi:
        raise DomainError(f"need lo < hi, got [{lo}, {hi}]")
    kind, k = parse_parameter_name(parameter, cfg.channel.num_paths)
    pulse = make_pulse(cfg)
    clean = make_clean_record(cfg, pulse)
    noise_seed, _ = trial_seeds(cfg.seed, 0, 0)
    received = make_received(cfg, noise_seed, clean=clean)
    n_fft = cfg.record_len
    support = select_support(
        dft(pulse, n_fft), cfg.threshold_frac, received=dft(received, n_fft)
    )
    base_amps = cfg.channel.amplitudes.copy()
    base_delays_sec = cfg.channel.delays * cfg.t_s

    values = np.linspace(lo, hi, steps)
    errors = np.empty(steps)
    for i, v in enumerate(values):
        amps = base_amps.copy()
        delays = base_delays_sec.copy()
        if kind == "a":
            amps[k] = v
        else:
            delays[k] = v * cfg.t_s
        errors[i] = caef_thresholded(
            support, ParamVector(amps, delays), n_fft, cfg.t_s
        )
    return values, errors


def run_single_trial(
    cfg: ScenarioConfig,
    snr_db: float,
    noise_seed: int,
    ga_seed: int,
    pulse: SampledSignal | None = None,
    clean: SampledSignal | None = None,
) -> ChannelEstimate:
    if pulse is None:
        pulse = make_pulse(cfg)
    if clean is None:
        clean = make_clean_record(cfg, pulse)
    received = make_received(cfg, noise_seed, snr_db=snr_db, clean=clean)
    return estimate(make_task(cfg, received, ga_seed, pulse=pulse))


@dataclass
class BenchResult:
    """Per-SNR squared errors and the flattened MSE table.

    amp_sq[i] and delay_sq[i] hold the (trials, M) squared-error arrays
    for snr_list[i]; rows is the CSV-ready table
    (snr_db, parameter_name, mse, trials) in snr_list order with
    a1..aM before tau1..tauM.
    """

    snr_list: tuple[float, ...]
    trials: int
    amp_sq: list[np.ndarray]
    delay_sq: list[np.ndarray]
    rows: list[tuple]


def run_bench(cfg: ScenarioConfig) -> BenchResult:
    """Monte-Carlo MSE study over cfg.snr_list with cfg.trials each.

    Every trial gets its own noise and GA seeds from
    (cfg.seed, snr_index, trial_index), so the result is reproducible
    bit for bit and does not depend on how trials are scheduled.
    """
    pulse = make_pulse(cfg)
    clean = make_clean_record(cfg, pulse)
    m = cfg.channel.num_paths
    amp_sq_all: list[np.ndarray] = []
    delay_sq_all: list[np.ndarray] = []
    rows: list[tuple] = []
    for i, snr_db in enumerate(cfg.snr_list):
        estimates = []
        for t in range(cfg.trials):
            noise_seed, ga_seed = trial_seeds(cfg.seed, i, t)
            estimates.append(
                run_single_trial(cfg, snr_db, noise_seed, ga_seed, pulse, clean)
            )
        amp_sq, delay_sq = squared_errors(estimates, cfg.channel)
        amp_sq_all.append(amp_sq)
        delay_sq_all.append(delay_sq)
        for k in range(m):
            rows.append((snr_db, f"a{k + 1}", float(amp_sq[:, k].mean()), cfg.trials))
        for k in range(m):
            rows.append((snr_db, f"tau{k + 1}", float(delay_sq[:, k].mean()), cfg.trials))
    return BenchResult(cfg.snr_list, cfg.trials, amp_sq_all, delay_sq_all, rows)
