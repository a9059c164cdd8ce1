"""Scenario plumbing: seed derivation, record synthesis, parameter
sweeps, and the Monte-Carlo bench loop."""

import numpy as np
import pytest

from multipath_ga import (
    DomainError,
    GaConfig,
    MODE_HYBRID,
    MultipathChannel,
    ScenarioConfig,
    make_clean_record,
    make_pulse,
    make_received,
    make_task,
    run_bench,
    sweep_slice,
    trial_seeds,
)
from multipath_ga.scenario import parse_parameter_name, run_single_trial

from conftest import TRUTH_AMPS, TRUTH_DELAYS


def test_scenario_config_validation():
    with pytest.raises(DomainError):
        ScenarioConfig(record_len=999)
    with pytest.raises(DomainError):
        ScenarioConfig(trials=0)
    with pytest.raises(DomainError):
        ScenarioConfig(snr_list=())
    with pytest.raises(DomainError):
        ScenarioConfig(mode="simplex")
    with pytest.raises(DomainError):
        ScenarioConfig(num_paths=0)


def test_num_paths_defaults_to_channel():
    assert ScenarioConfig().num_paths == 3
    assert ScenarioConfig(num_paths=5).num_paths == 5


def test_trial_seeds_stable_and_distinct():
    assert trial_seeds(0, 0, 0) == trial_seeds(0, 0, 0)
    pairs = {trial_seeds(0, i, t) for i in range(4) for t in range(10)}
    assert len(pairs) == 40
    assert trial_seeds(1, 0, 0) != trial_seeds(0, 0, 0)


def test_record_synthesis(cfg, pulse, clean):
    assert len(pulse) == 750
    assert len(clean) == 1000
    assert np.all(clean.samples[:200] == 0.0)
    assert clean.power > 0.0


def test_make_received_noiseless_and_noisy(cfg, clean):
    quiet = make_received(cfg, noise_seed=1, clean=clean)
    np.testing.assert_array_equal(quiet.samples, clean.samples)
    noisy = make_received(cfg, noise_seed=1, snr_db=0.0, clean=clean)
    assert not np.array_equal(noisy.samples, clean.samples)
    again = make_received(cfg, noise_seed=1, snr_db=0.0, clean=clean)
    np.testing.assert_array_equal(noisy.samples, again.samples)


def test_make_task_wiring(cfg, clean):
    task = make_task(cfg, clean, ga_seed=77)
    assert task.num_paths == 3
    assert task.ga.seed == 77
    assert task.ga.max_generations == cfg.ga.max_generations
    assert task.mode == cfg.mode
    assert task.threshold_frac == cfg.threshold_frac


def test_parse_parameter_name():
    assert parse_parameter_name("tau1", 3) == ("tau", 0)
    assert parse_parameter_name("a3", 3) == ("a", 2)
    assert parse_parameter_name("tau10", 12) == ("tau", 9)
    for bad in ("a4", "tau0", "b2", "tau", "a-1", "amp1"):
        with pytest.raises(DomainError):
            parse_parameter_name(bad, 3)


def test_sweep_slice_delay_grid(cfg):
    values, errors = sweep_slice(cfg, "tau1", 190.0, 210.0, 21)
    assert values.shape == errors.shape == (21,)
    assert values[np.argmin(errors)] == 200.0
    assert np.all(errors >= 0.0)


def test_sweep_slice_amplitude_parabola(cfg):
    values, errors = sweep_slice(cfg, "a2", -2.0, 2.0, 401)
    i = int(np.argmin(errors))
    x = values[i - 1 : i + 2]
    y = errors[i - 1 : i + 2]
    # vertex of the parabola through the three lowest points
    denom = (x[0] - x[1]) * (x[0] - x[2]) * (x[1] - x[2])
    a = (x[2] * (y[1] - y[0]) + x[1] * (y[0] - y[2]) + x[0] * (y[2] - y[1])) / denom
    b = (x[2] ** 2 * (y[0] - y[1]) + x[1] ** 2 * (y[2] - y[0])
         + x[0] ** 2 * (y[1] - y[2])) / denom
    assert -b / (2 * a) == pytest.approx(-0.8, abs=1e-3)


def test_sweep_slice_validation(cfg):
    with pytest.raises(DomainError):
        sweep_slice(cfg, "tau1", 0.0, 10.0, 1)
    with pytest.raises(DomainError):
        sweep_slice(cfg, "tau1", 10.0, 0.0, 5)
    with pytest.raises(DomainError):
        sweep_slice(cfg, "tau9", 0.0, 10.0, 5)


def test_sweep_slice_noisy_is_seeded(ga_short):
    cfg = ScenarioConfig(snr_db=0.0, seed=3, ga=ga_short)
    v1, e1 = sweep_slice(cfg, "tau1", 195.0, 205.0, 11)
    v2, e2 = sweep_slice(cfg, "tau1", 195.0, 205.0, 11)
    np.testing.assert_array_equal(e1, e2)


@pytest.fixture(scope="module")
def ga_short():
    return GaConfig(max_generations=30)


def test_run_single_trial_deterministic(ga_short):
    cfg = ScenarioConfig(mode=MODE_HYBRID, ga=ga_short)
    a = run_single_trial(cfg, snr_db=20.0, noise_seed=5, ga_seed=9)
    b = run_single_trial(cfg, snr_db=20.0, noise_seed=5, ga_seed=9)
    np.testing.assert_array_equal(a.channel.amplitudes, b.channel.amplitudes)
    np.testing.assert_array_equal(a.channel.delays, b.channel.delays)
    assert a.objective_at_estimate == b.objective_at_estimate
    c = run_single_trial(cfg, snr_db=20.0, noise_seed=5, ga_seed=10)
    assert not np.array_equal(a.channel.delays, c.channel.delays)


def test_run_bench_table_layout(ga_short):
    cfg = ScenarioConfig(
        mode=MODE_HYBRID, ga=ga_short, trials=2, snr_list=(20.0, -10.0), seed=1
    )
    res = run_bench(cfg)
    assert res.trials == 2
    assert len(res.rows) == 12  # 6 parameters x 2 SNRs
    names = [r[1] for r in res.rows[:6]]
    assert names == ["a1", "a2", "a3", "tau1", "tau2", "tau3"]
    assert all(r[0] == 20.0 for r in res.rows[:6])
    assert all(r[0] == -10.0 for r in res.rows[6:])
    assert all(r[3] == 2 for r in res.rows)
    # rows hold the means of the stored per-trial squares
    assert res.amp_sq[0].shape == (2, 3)
    assert res.rows[0][2] == pytest.approx(res.amp_sq[0][:, 0].mean())
    assert res.rows[9][2] == pytest.approx(res.delay_sq[1][:, 0].mean())


def test_run_bench_deterministic(ga_short):
    cfg = ScenarioConfig(
        mode=MODE_HYBRID, ga=ga_short, trials=2, snr_list=(0.0,), seed=4
    )
    assert run_bench(cfg).rows == run_bench(cfg).rows


def test_run_bench_noiseless_entry(ga_short):
    cfg = ScenarioConfig(
        mode=MODE_HYBRID, ga=ga_short, trials=1, snr_list=(np.inf,), seed=0
    )
    res = run_bench(cfg)
    assert len(res.rows) == 6
    assert all(np.isinf(r[0]) for r in res.rows)
    assert all(np.isfinite(r[2]) for r in res.rows)


def test_run_bench_matches_manual_trials(ga_short):
    # the bench is nothing more than seeded single trials plus averaging
    cfg = ScenarioConfig(
        mode=MODE_HYBRID, ga=ga_short, trials=2, snr_list=(10.0,), seed=2
    )
    res = run_bench(cfg)
    manual = []
    for t in range(2):
        noise_seed, ga_seed = trial_seeds(2, 0, t)
        manual.append(run_single_trial(cfg, 10.0, noise_seed, ga_seed))
    truth = MultipathChannel(TRUTH_AMPS, TRUTH_DELAYS)
    est_delays = np.sort(np.array([e.channel.delays for e in manual]), axis=1)
    want = ((est_delays - TRUTH_DELAYS) ** 2).mean(axis=0)
    got = [r[2] for r in res.rows if r[1].startswith("tau")]
    np.testing.assert_allclose(got, want, rtol=1e-12)
