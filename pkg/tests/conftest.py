"""Shared fixtures: the default three-path scenario, computed once.

The heavy objects (pulse, clean record, spectra, support) are pure
functions of the default config, so they are session scoped.
"""

import sys

import numpy as np
import pytest

import multipath_ga as m


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # replay the acceptance checklist lines; stdout capture hides the
    # ones printed by passing tests
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT_LINES", []) if mod else []
    if lines:
        terminalreporter.section("acceptance checklist")
        for line in lines:
            terminalreporter.write_line(line)

TRUTH_AMPS = np.array([1.0, -0.8, 0.4])
TRUTH_DELAYS = np.array([200.0, 204.0, 220.0])


@pytest.fixture(scope="session")
def cfg():
    return m.ScenarioConfig()


@pytest.fixture(scope="session")
def pulse(cfg):
    return m.make_pulse(cfg)


@pytest.fixture(scope="session")
def clean(cfg, pulse):
    return m.make_clean_record(cfg, pulse)


@pytest.fixture(scope="session")
def pulse_spectrum(cfg, pulse):
    return m.dft(pulse, cfg.record_len)


@pytest.fixture(scope="session")
def clean_spectrum(cfg, clean):
    return m.dft(clean, cfg.record_len)


@pytest.fixture(scope="session")
def support(cfg, pulse_spectrum, clean_spectrum):
    return m.select_support(
        pulse_spectrum, cfg.threshold_frac, received=clean_spectrum
    )


@pytest.fixture(scope="session")
def norm_r2(support):
    return float(np.real(np.vdot(support.r_tilde, support.r_tilde)))


@pytest.fixture(scope="session")
def truth_params(cfg):
    return m.ParamVector(TRUTH_AMPS, TRUTH_DELAYS * cfg.t_s)
