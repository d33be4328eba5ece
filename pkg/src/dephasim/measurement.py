"""Polarization tomography with Poissonian coincidence counts.

Six projectors are measured, in the order H, V, D, A, R, L with
D/A = (H +- V)/sqrt2 and R/L = (H +- iV)/sqrt2. Each basis setting collects
on average ``rate * duration_s`` coincidences split between its two outcomes.

Random streams: every draw comes from ``np.random.SeedSequence(seed,
spawn_key=key)`` where the key encodes (purpose, time index, ...). Results are
therefore reproducible and independent of evaluation order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import QubitState, apply_channel, plus_minus_pair, trace_distance
from .errors import AllZeroCounts
from .freq import DecoherenceTrace

SETTINGS = ("H", "V", "D", "A", "R", "L")

_S2 = 1 / np.sqrt(2)
_KETS = np.array([
    [1, 0],
    [0, 1],
    [_S2, _S2],
    [_S2, -_S2],
    [_S2, 1j * _S2],
    [_S2, -1j * _S2],
], dtype=complex)

_COUNTS = 0
_BOOTSTRAP = 1


@dataclass(frozen=True)
class CountingConfig:
    # 1.8e5 coincidences per 60 s, 10 s per setting
    rate: float = 3000.0
    duration_s: float = 10.0
    seed: int = 0
    mc_samples: int = 100

    def __post_init__(self):
        if not self.rate > 0 or not self.duration_s > 0:
            raise ValueError("rate and duration_s must be positive")
        if self.mc_samples < 2:
            raise ValueError("mc_samples must be >= 2")

    @property
    def counts_per_setting(self) -> float:
        return self.rate * self.duration_s


@dataclass(frozen=True)
class TomographyResult:
    rho_plus: QubitState
    rho_minus: QubitState
    abs_kappa_hat: float
    sigma: float


@dataclass(frozen=True, eq=False)
class MeasurementRun:
    d: np.ndarray
    abs_kappa_true: np.ndarray
    abs_kappa_est: np.ndarray
    sigma: np.ndarray
    counts: np.ndarray  # (time, {+, -}, setting)

    def within(self, n_sigma: float = 3.0) -> np.ndarray:
        return np.abs(self.abs_kappa_est - self.abs_kappa_true) <= n_sigma * self.sigma


def _rng(cfg: CountingConfig, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=tuple(key)))


def projector_probabilities(state: QubitState) -> np.ndarray:
    rho = state.matrix
    probs = np.einsum("ki,ij,kj->k", _KETS.conj(), rho, _KETS).real
    return np.clip(probs, 0.0, 1.0)


def simulate_counts(state: QubitState, cfg: CountingConfig, key: tuple[int, ...] = ()) -> np.ndarray:
    """Independent Poisson counts for the six projectors."""
    means = cfg.counts_per_setting * projector_probabilities(state)
    return _rng(cfg, _COUNTS, *key).poisson(means)


def expectation_counts(state: QubitState, total: float = 1.0) -> np.ndarray:
    """Noise-free (real-valued) counts proportional to the projector probabilities."""
    return total * projector_probabilities(state)


def bloch_from_counts(counts) -> np.ndarray:
    """Linear inversion to a Bloch vector, projected into the unit ball.

    Works on the last axis, so ``counts`` may carry leading batch dimensions.
    """
    c = np.asarray(counts, dtype=float)
    if c.shape[-1] != 6 or np.any(c < 0):
        raise ValueError("need six nonnegative counts")
    if np.any(c.sum(axis=-1) == 0):
        raise AllZeroCounts("every count is zero")
    plus = c[..., [2, 4, 0]]
    minus = c[..., [3, 5, 1]]
    total = plus + minus
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(total > 0, (plus - minus) / total, 0.0)
    # closest physical state in Frobenius norm: clip the negative eigenvalue,
    # which for a qubit means rescaling the Bloch vector to unit length
    norm = np.linalg.norm(r, axis=-1, keepdims=True)
    return np.where(norm > 1, r / np.where(norm > 0, norm, 1), r)


def raw_bloch(counts) -> np.ndarray:
    """Linear-inversion Bloch vector without the physical projection."""
    c = np.asarray(counts, dtype=float)
    plus, minus = c[[2, 4, 0]], c[[3, 5, 1]]
    total = plus + minus
    return np.where(total > 0, (plus - minus) / np.where(total > 0, total, 1), 0.0)


def reconstruct(counts) -> QubitState:
    """Physical state estimate from six counts."""
    return QubitState.from_bloch(bloch_from_counts(counts))


def extract_abs_kappa(rho_plus: QubitState, rho_minus: QubitState) -> float:
    """Trace distance of the evolved +-45 degree pair, equal to |kappa|."""
    return trace_distance(rho_plus, rho_minus)


def _td_from_counts(counts_pm: np.ndarray) -> np.ndarray:
    r = bloch_from_counts(counts_pm)
    return 0.5 * np.linalg.norm(r[..., 0, :] - r[..., 1, :], axis=-1)


def error_bars(counts, cfg: CountingConfig, first_index: int = 0) -> np.ndarray:
    """Monte Carlo standard deviation of the extracted |kappa| per time point.

    ``counts`` has shape (time, 2, 6): the +45 and -45 degree inputs at each
    time. Every count is redrawn from a Poisson law centered on its observed
    value, ``cfg.mc_samples`` times; the spread of the re-extracted |kappa| is
    the error bar.
    """
    counts = np.asarray(counts, dtype=float)
    if counts.ndim == 2:
        counts = counts[None]
    sigma = np.empty(counts.shape[0])
    for i, obs in enumerate(counts):
        draws = _rng(cfg, _BOOTSTRAP, first_index + i).poisson(obs, size=(cfg.mc_samples,) + obs.shape)
        # a resample with an empty state is skipped rather than aborting the run
        ok = draws.sum(axis=-1).min(axis=-1) > 0
        sigma[i] = np.std(_td_from_counts(draws[ok]), ddof=1) if ok.sum() >= 2 else np.inf
    return sigma


def evolved_pair(kappa: complex) -> tuple[QubitState, QubitState]:
    plus, minus = plus_minus_pair()
    return apply_channel(plus, kappa), apply_channel(minus, kappa)


def measure_point(kappa: complex, cfg: CountingConfig, index: int = 0) -> TomographyResult:
    rp, rm = evolved_pair(kappa)
    counts = np.stack([simulate_counts(rp, cfg, (index, 0)), simulate_counts(rm, cfg, (index, 1))])
    est_p, est_m = reconstruct(counts[0]), reconstruct(counts[1])
    sigma = error_bars(counts[None], cfg, first_index=index)[0]
    return TomographyResult(est_p, est_m, extract_abs_kappa(est_p, est_m), float(sigma))


def measure_trace(trace: DecoherenceTrace, cfg: CountingConfig) -> MeasurementRun:
    """Simulate tomography at every sample of ``trace`` (requires |kappa| <= 1)."""
    if np.any(np.abs(trace.kappa) > 1 + 1e-12):
        raise ValueError("a simulator trace cannot exceed |kappa| = 1")
    counts = np.empty((len(trace), 2, 6), dtype=np.int64)
    for i, k in enumerate(trace.kappa):
        rp, rm = evolved_pair(complex(k) / max(1.0, abs(k)))
        counts[i, 0] = simulate_counts(rp, cfg, (i, 0))
        counts[i, 1] = simulate_counts(rm, cfg, (i, 1))
    est = _td_from_counts(counts.astype(float))
    sigma = error_bars(counts, cfg)
    return MeasurementRun(trace.d, np.abs(trace.kappa), est, sigma, counts)
