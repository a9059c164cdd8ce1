"""Pulse synthesis, multipath channel application, and additive noise.

The transmitted pulse is a linear-FM chirp shaped by a raised-cosine
(Tukey-style) window: cosine ramps over the first and last n_w samples,
flat in between. A multipath channel is a sparse set of (amplitude,
delay) pairs applied to the pulse by superposition; integer-sample
delays are exact shifts, fractional delays use a frequency-domain phase
ramp. Noise is white Gaussian, scaled so the clean record power over
noise power matches a requested SNR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class SampledSignal:
    """A real discrete-time signal with its sampling interval.

    Attributes:
        samples: 1-D float array, length >= 1, all finite.
        t_s: sampling interval in seconds, > 0.
    """

    samples: np.ndarray
    t_s: float = 1.0

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size < 1:
            raise DomainError("samples must be a nonempty 1-D array")
        if not np.all(np.isfinite(samples)):
            raise DomainError("samples must all be finite")
        if not (self.t_s > 0 and math.isfinite(self.t_s)):
            raise DomainError(f"t_s must be positive and finite, got {self.t_s}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "t_s", float(self.t_s))

    def __len__(self):
        return self.samples.size

    @property
    def power(self) -> float:
        """Mean squared sample value."""
        return float(np.mean(self.samples**2))


@dataclass(frozen=True)
class ChirpSpec:
    """Windowed linear-FM pulse parameters.

    Frequencies are normalized to the sample rate (cycles per sample).
    The instantaneous frequency ramps from f1 to f2 across the n_sig
    samples; the sweep rate is (f2 - f1) / (2 * n_sig) so the quadratic
    phase term reaches the target band edge at the last sample.

    n_w defaults to n_sig // 10 when not given.
    """

    n_sig: int = 750
    n_w: int | None = None
    f1: float = 0.1
    f2: float = 0.15

    def __post_init__(self):
        if self.n_sig <= 0:
            raise DomainError(f"n_sig must be positive, got {self.n_sig}")
        n_w = self.n_sig // 10 if self.n_w is None else self.n_w
        object.__setattr__(self, "n_w", int(n_w))
        if not 0 < self.n_w <= self.n_sig / 2:
            raise DomainError(
                f"n_w must satisfy 0 < n_w <= n_sig/2, got n_w={self.n_w} n_sig={self.n_sig}"
            )
        if not 0.0 < self.f1 < self.f2 < 0.5:
            raise DomainError(
                f"need 0 < f1 < f2 < 0.5 (normalized), got f1={self.f1} f2={self.f2}"
            )

    @property
    def sweep_rate(self) -> float:
        return (self.f2 - self.f1) / (2.0 * self.n_sig)


def window_value(n: int, spec: ChirpSpec) -> float:
    """Window weight at sample index n.

    Raised-cosine ramp up over n = 0 .. n_w-1, flat 1.0 over
    n = n_w .. n_sig-n_w-1, raised-cosine ramp down over the final n_w
    samples (written against the mirrored index n - n_sig so the two
    ramps are symmetric).
    """
    if not 0 <= n < spec.n_sig:
        raise DomainError(f"index {n} outside [0, {spec.n_sig})")
    if n < spec.n_w:
        return 0.5 - 0.5 * math.cos(math.pi * n / spec.n_w)
    if n < spec.n_sig - spec.n_w:
        return 1.0
    return 0.5 - 0.5 * math.cos(math.pi * (n - spec.n_sig) / spec.n_w)


def generate_chirp(spec: ChirpSpec, t_s: float = 1.0) -> SampledSignal:
    """Windowed sine sweep: w[n] * sin(2*pi*(a*n^2 + f1*n))."""
    n = np.arange(spec.n_sig, dtype=np.float64)
    window = np.array([window_value(i, spec) for i in range(spec.n_sig)])
    phase = 2.0 * np.pi * (spec.sweep_rate * n**2 + spec.f1 * n)
    return SampledSignal(window * np.sin(phase), t_s)


@dataclass(frozen=True)
class MultipathChannel:
    """Discrete multipath channel: amplitudes and delays, delay in samples.

    Delays are in units of t_s and need not be integers. Amplitudes are
    real (sign carries the path inversion).
    """

    amplitudes: np.ndarray
    delays: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.float64)
        delays = np.asarray(self.delays, dtype=np.float64)
        if amps.ndim != 1 or delays.ndim != 1:
            raise DomainError("amplitudes and delays must be 1-D")
        if amps.size != delays.size or amps.size < 1:
            raise DomainError(
                f"need equal nonzero path counts, got {amps.size} amplitudes "
                f"and {delays.size} delays"
            )
        if not (np.all(np.isfinite(amps)) and np.all(np.isfinite(delays))):
            raise DomainError("amplitudes and delays must be finite")
        if np.any(delays < 0):
            raise DomainError("delays must be nonnegative")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "delays", delays)

    @property
    def num_paths(self) -> int:
        return self.amplitudes.size


def _fractional_shift(padded: np.ndarray, delay: float) -> np.ndarray:
    # Circular shift by a non-integer number of samples via a spectral
    # phase ramp. The Nyquist bin factor is forced real (cos(pi*d)) so
    # the output stays real; content wrapping past the end re-enters at
    # the start, consistent with the periodic model the spectral error
    # functions assume.
    n = padded.size
    spectrum = np.fft.fft(padded)
    factor = np.exp(-2j * np.pi * delay * np.fft.fftfreq(n))
    if n % 2 == 0:
        factor[n // 2] = math.cos(math.pi * delay)
    return np.fft.ifft(spectrum * factor).real


def apply_channel(
    pulse: SampledSignal, channel: MultipathChannel, out_len: int
) -> SampledSignal:
    """Superpose delayed, scaled copies of the pulse into a record.

    Integer delays place the pulse exactly (zero fill before, tail
    truncated if it runs past out_len). Fractional delays go through the
    frequency-domain phase shift and therefore wrap circularly.

    Args:
        pulse: transmitted pulse.
        channel: path amplitudes and delays (delays in samples).
        out_len: record length in samples.

    Returns:
        SampledSignal of length out_len with the pulse's t_s.
    """
    if out_len < 1:
        raise DomainError(f"out_len must be >= 1, got {out_len}")
    if np.any(channel.delays >= out_len):
        raise DomainError(
            f"delays must lie in [0, out_len={out_len}), got max {channel.delays.max()}"
        )
    src = pulse.samples
    out = np.zeros(out_len)
    padded = None
    for amp, delay in zip(channel.amplitudes, channel.delays):
        if float(delay).is_integer():
            d = int(delay)
            stop = min(out_len, d + src.size)
            out[d:stop] += amp * src[: stop - d]
        else:
            if padded is None:
                padded = np.zeros(out_len)
                keep = min(out_len, src.size)
                padded[:keep] = src[:keep]
            out += amp * _fractional_shift(padded, delay)
    return SampledSignal(out, pulse.t_s)


@dataclass(frozen=True)
class AwgnSpec:
    """White Gaussian noise level as SNR against the clean record.

    snr_db = +inf is the noiseless sentinel (signal returned unchanged).
    """

    snr_db: float
    seed: int = 0

    def __post_init__(self):
        if math.isnan(self.snr_db) or self.snr_db == -math.inf:
            raise DomainError(f"snr_db must be a real level or +inf, got {self.snr_db}")

    @property
    def noiseless(self) -> bool:
        return self.snr_db == math.inf


def add_awgn(signal: SampledSignal, spec: AwgnSpec) -> SampledSignal:
    """Add seeded white Gaussian noise at the requested SNR.

    Noise variance is P_signal / 10^(snr_db/10) where P_signal is the
    mean squared value of the input record, so the clean record power is
    the SNR reference.
    """
    if spec.noiseless:
        return SampledSignal(signal.samples.copy(), signal.t_s)
    p_signal = signal.power
    if p_signal <= 0.0:
        raise DomainError("zero-power signal: SNR is undefined")
    sigma = math.sqrt(p_signal / 10.0 ** (spec.snr_db / 10.0))
    rng = np.random.default_rng(spec.seed)
    noise = rng.normal(0.0, sigma, signal.samples.size)
    return SampledSignal(signal.samples + noise, signal.t_s)
