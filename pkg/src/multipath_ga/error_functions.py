"""Frequency-domain squared-error objectives for multipath parameters.

Given received and pulse spectra R and S, a parameter set (a, tau)
predicts bin n as S[n] * sum_k a_k * exp(-j*tau_k*2*pi*n/(n_fft*t_s)).

Three variants:
  raef              real amplitudes, summed over the full spectrum
                    (negative frequencies included via bins n_fft/2..).
  caef_full         complex amplitudes allowed, positive half only.
  caef_thresholded  caef restricted to a thresholded support, evaluated
                    through the steering-matrix form.

raef and caef_full are deliberately written as direct summations and
share nothing with the matrix route used by caef_thresholded, so each
can serve as an independent check on the other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConditioningError, DomainError
from .spectral import Spectrum, ThresholdedSupport, build_p, steering_matrix, tau_to_lambda


@dataclass(frozen=True)
class ParamVector:
    """Candidate path amplitudes and delays (delays in seconds)."""

    amplitudes: np.ndarray
    delays: np.ndarray

    def __post_init__(self):
        amps = np.atleast_1d(np.asarray(self.amplitudes))
        if not np.iscomplexobj(amps):
            amps = amps.astype(np.float64)
        delays = np.atleast_1d(np.asarray(self.delays, dtype=np.float64))
        if amps.ndim != 1 or delays.ndim != 1 or amps.size != delays.size:
            raise DomainError("amplitudes and delays must be 1-D and equal length")
        if amps.size < 1:
            raise DomainError("need at least one path")
        if not (np.all(np.isfinite(amps)) and np.all(np.isfinite(delays))):
            raise DomainError("parameters must be finite")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "delays", delays)

    @property
    def num_paths(self) -> int:
        return self.amplitudes.size


def _require_real(amplitudes) -> np.ndarray:
    if np.iscomplexobj(amplitudes):
        if np.any(amplitudes.imag != 0.0):
            raise DomainError("amplitudes must be real for this error function")
        return amplitudes.real.astype(np.float64)
    return np.asarray(amplitudes, dtype=np.float64)


def _check_pair(r_spec: Spectrum, s_spec: Spectrum):
    if r_spec.n_fft != s_spec.n_fft:
        raise DomainError(
            f"spectra lengths differ: {r_spec.n_fft} vs {s_spec.n_fft}"
        )
    if r_spec.n_fft % 2 != 0:
        raise DomainError(f"spectrum length must be even, got {r_spec.n_fft}")


def _direct_error(r_bins, s_bins, freqs, amplitudes, delays, n_fft, t_s) -> float:
    # Plain summation route: phase matrix built directly from the
    # signed frequency indices, no steering-matrix machinery.
    phase = np.exp((-2j * np.pi / (n_fft * t_s)) * np.outer(freqs, delays))
    model = s_bins * (phase @ amplitudes)
    diff = r_bins - model
    return float(np.real(np.vdot(diff, diff)))


def raef(r_spec: Spectrum, s_spec: Spectrum, p: ParamVector, t_s: float) -> float:
    """Real-amplitude error over the full spectrum.

    Sums |R[n] - S[n]*sum_k a_k exp(-j*tau_k*2*pi*n/(n_fft*t_s))|^2 over
    the signed frequencies n = -n_fft/2 .. n_fft/2 - 1, stored as bins
    0 .. n_fft-1 with the negative half at indices n_fft + n. Complex
    amplitudes are rejected: this objective encodes the constraint that
    the paths scale, not rotate, the pulse.
    """
    _check_pair(r_spec, s_spec)
    amps = _require_real(p.amplitudes)
    n_fft = r_spec.n_fft
    freqs = np.fft.fftfreq(n_fft) * n_fft
    return _direct_error(r_spec.bins, s_spec.bins, freqs, amps, p.delays, n_fft, t_s)


def caef_full(r_spec: Spectrum, s_spec: Spectrum, p: ParamVector, t_s: float) -> float:
    """Complex-amplitude error over the positive half n = 0 .. n_fft/2 - 1."""
    _check_pair(r_spec, s_spec)
    n_fft = r_spec.n_fft
    half = n_fft // 2
    freqs = np.arange(half, dtype=np.float64)
    return _direct_error(
        r_spec.bins[:half], s_spec.bins[:half], freqs, p.amplitudes, p.delays,
        n_fft, t_s,
    )


def caef_thresholded(
    support: ThresholdedSupport, p: ParamVector, n_fft: int, t_s: float
) -> float:
    """Complex-amplitude error restricted to the thresholded support.

    Evaluated as ||r_tilde - p_mat(lambda) @ a||^2 with
    p_mat = diag(S[q]) @ A(lambda), which is the form the least-squares
    amplitude solve works with.
    """
    if support.r_tilde is None:
        raise DomainError("support carries no received bins (r_tilde is None)")
    lam = tau_to_lambda(p.delays, n_fft, t_s)
    p_mat = build_p(support, steering_matrix(lam, support))
    resid = support.r_tilde - p_mat @ p.amplitudes
    return float(np.real(np.vdot(resid, resid)))


def _ls_fit(support: ThresholdedSupport, lambdas):
    """Solve min_a ||r_tilde - p_mat(lambda) a||^2 by normal equations.

    Returns (a, p_mat). Raises ConditioningError when the Gram matrix is
    rank deficient at a machine-precision tolerance, carrying the
    condition estimate of p_mat.
    """
    if support.r_tilde is None:
        raise DomainError("support carries no received bins (r_tilde is None)")
    lam = np.atleast_1d(np.asarray(lambdas, dtype=np.float64))
    m = lam.size
    if support.size < m:
        raise DomainError(
            f"support has {support.size} bins, fewer than {m} paths"
        )
    p_mat = build_p(support, steering_matrix(lam, support))
    gram = p_mat.conj().T @ p_mat
    rhs = p_mat.conj().T @ support.r_tilde
    ev = np.linalg.eigvalsh(gram)
    ev_max = float(ev[-1])
    ev_min = float(ev[0])
    # Gram eigenvalues are squared singular values of p_mat, but an
    # exactly singular Gram still comes back with ev_min at the
    # eigensolver's noise floor (~eps * ev_max), so that floor is the
    # meaningful rank cutoff here.
    tol = np.finfo(np.float64).eps * max(support.size, m) * ev_max
    if ev_min <= tol:
        cond = np.inf if ev_min <= 0 else np.sqrt(ev_max / ev_min)
        raise ConditioningError(
            "rank-deficient amplitude system (duplicate or near-duplicate delays?)",
            cond,
        )
    try:
        return np.linalg.solve(gram, rhs), p_mat
    except np.linalg.LinAlgError as exc:
        raise ConditioningError(str(exc), np.sqrt(ev_max / ev_min)) from exc


def ls_amplitudes(support: ThresholdedSupport, lambdas) -> np.ndarray:
    """Least-squares optimal complex amplitudes for fixed delay slopes."""
    return _ls_fit(support, lambdas)[0]
