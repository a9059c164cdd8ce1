"""DFT wrapper, thresholded band selection, and delay steering matrices.

Conventions: unnormalized forward DFT, bin k of an n_fft-point transform
is frequency k/n_fft cycles per sample, the positive half is bins
0 .. n_fft/2 - 1 (DC in, Nyquist out). A delay tau maps to the phase
slope lambda = -tau * 2*pi / (n_fft * t_s), so a pure delayed pulse has
spectrum S[q] * exp(j * lambda * q) on the selected bins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoUsableBandError
from .signals import SampledSignal


@dataclass(frozen=True)
class Spectrum:
    """Complex DFT bins in natural (unshifted) order.

    For a real input the bins are conjugate symmetric:
    bins[n_fft - k] == conj(bins[k]).
    """

    bins: np.ndarray

    def __post_init__(self):
        bins = np.asarray(self.bins, dtype=np.complex128)
        if bins.ndim != 1 or bins.size < 2:
            raise DomainError("spectrum must be 1-D with at least 2 bins")
        object.__setattr__(self, "bins", bins)

    @property
    def n_fft(self) -> int:
        return self.bins.size


def dft(signal: SampledSignal, n_fft: int) -> Spectrum:
    """Forward DFT of a signal zero-padded to n_fft points.

    n_fft must be even and at least the signal length; silently
    truncating a record would corrupt every error value downstream, so
    a short n_fft is rejected instead.
    """
    if n_fft < len(signal):
        raise DomainError(
            f"n_fft={n_fft} shorter than signal ({len(signal)} samples); "
            "truncation is not supported"
        )
    if n_fft % 2 != 0:
        raise DomainError(f"n_fft must be even, got {n_fft}")
    return Spectrum(np.fft.fft(signal.samples, n=n_fft))


@dataclass(frozen=True)
class ThresholdedSupport:
    """Positive-half bins where the pulse spectrum clears a threshold.

    Attributes:
        indices: strictly increasing bin indices q_l in [0, n_fft/2).
        threshold: absolute magnitude threshold that was applied.
        s_diag: pulse spectrum values S[q_l].
        r_tilde: received spectrum values R[q_l], when a received
            spectrum was supplied.
    """

    indices: np.ndarray
    threshold: float
    s_diag: np.ndarray
    r_tilde: np.ndarray | None = None

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.ndim != 1 or idx.size < 1:
            raise DomainError("support must contain at least one bin")
        if np.any(np.diff(idx) <= 0):
            raise DomainError("support indices must be strictly increasing")
        if idx[0] < 0:
            raise DomainError("support indices must be nonnegative")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "s_diag", np.asarray(self.s_diag, dtype=np.complex128))
        if self.r_tilde is not None:
            object.__setattr__(
                self, "r_tilde", np.asarray(self.r_tilde, dtype=np.complex128)
            )

    @property
    def size(self) -> int:
        return self.indices.size


def select_support(
    pulse_spectrum: Spectrum,
    threshold_frac: float,
    received: Spectrum | None = None,
) -> ThresholdedSupport:
    """Keep positive-half bins whose pulse magnitude exceeds a fraction
    of the peak.

    threshold = threshold_frac * max |S[n]| over n in [0, n_fft/2), and
    a bin survives only when |S[n]| is strictly greater. A sane range
    for threshold_frac is 0.05 to 0.1; anything in (0, 1) is accepted.

    Raises:
        NoUsableBandError: when no bin clears the threshold (an all-zero
            pulse spectrum, for instance).
    """
    if not 0.0 < threshold_frac < 1.0:
        raise DomainError(f"threshold_frac must be in (0, 1), got {threshold_frac}")
    half = pulse_spectrum.bins[: pulse_spectrum.n_fft // 2]
    mags = np.abs(half)
    threshold = threshold_frac * float(mags.max())
    indices = np.nonzero(mags > threshold)[0]
    if indices.size == 0:
        raise NoUsableBandError(
            "no usable band: no bin magnitude strictly exceeds "
            f"{threshold:.6g} (threshold_frac={threshold_frac})"
        )
    r_tilde = None
    if received is not None:
        if received.n_fft != pulse_spectrum.n_fft:
            raise DomainError(
                f"received spectrum has {received.n_fft} bins, pulse has "
                f"{pulse_spectrum.n_fft}"
            )
        r_tilde = received.bins[indices]
    return ThresholdedSupport(indices, threshold, half[indices], r_tilde)


def tau_to_lambda(tau, n_fft: int, t_s: float):
    """Delay (seconds) to phase slope per bin: lambda = -tau*2*pi/(n_fft*t_s).

    Accepts a scalar or vector; returns an ndarray. Delays one record
    period apart (n_fft * t_s) give slopes 2*pi apart and are therefore
    indistinguishable, which is the aliasing limit of the model.
    """
    if n_fft < 2:
        raise DomainError(f"n_fft must be >= 2, got {n_fft}")
    if not t_s > 0:
        raise DomainError(f"t_s must be positive, got {t_s}")
    return -np.asarray(tau, dtype=np.float64) * 2.0 * np.pi / (n_fft * t_s)


def steering_matrix(lambdas, support: ThresholdedSupport) -> np.ndarray:
    """L x M matrix with entries exp(j * lambda_k * q_l), unit modulus."""
    lam = np.atleast_1d(np.asarray(lambdas, dtype=np.float64))
    return np.exp(1j * support.indices[:, None] * lam[None, :])


def build_p(support: ThresholdedSupport, a_matrix: np.ndarray) -> np.ndarray:
    """Scale steering columns by the pulse spectrum: p = diag(s) @ A."""
    if a_matrix.ndim != 2 or a_matrix.shape[0] != support.size:
        raise DomainError(
            f"steering matrix shape {a_matrix.shape} does not match support "
            f"size {support.size}"
        )
    return support.s_diag[:, None] * a_matrix
