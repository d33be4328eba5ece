"""Forward map from a pixelated complex frequency distribution to kappa(d).

Frequencies ``u`` are dimensionless in units of c/lambda0 (lambda0 = 800 nm)
and the evolution parameter ``d`` is the effective path difference
``delta_n * c * t / lambda0``. The kernel sign is fixed to ``exp(+2j*pi*u*d)``;
the opposite convention conjugates kappa and leaves |kappa| unchanged.

A finite uniform grid of spacing ``du`` makes kappa periodic in ``d`` with
period ``1/du``. :func:`forward_kappa` therefore refuses path values beyond
``0.5/du`` unless ``allow_aliasing=True``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AliasingError, InvalidDistributionError, MissingOrigin, SingularScaling

LAMBDA0_M = 800e-9
SPEED_OF_LIGHT = 299_792_458.0

NORM_TOL = 1e-9
GRID_TOL = 1e-12
SCALING_TOL = 1e-9


def canonical_phase(theta):
    """Map phases onto the branch (-pi, pi]."""
    theta = np.asarray(theta, dtype=float)
    out = np.angle(np.exp(1j * theta))
    return np.where(out <= -np.pi, out + 2 * np.pi, out)


@dataclass(frozen=True, eq=False)
class ComplexFreqDistribution:
    """Pixel probabilities ``p`` and phases ``theta`` on a uniform grid ``u``."""

    u: np.ndarray
    p: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        u = np.atleast_1d(np.asarray(self.u, dtype=float))
        p = np.atleast_1d(np.asarray(self.p, dtype=float))
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        if not (u.ndim == p.ndim == theta.ndim == 1) or not (u.size == p.size == theta.size):
            raise InvalidDistributionError("u, p, theta must be 1-d arrays of equal length")
        if u.size == 0:
            raise InvalidDistributionError("distribution has no pixels")
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(p)) and np.all(np.isfinite(theta))):
            raise InvalidDistributionError("non-finite entries")
        if np.any(p < 0):
            raise InvalidDistributionError("negative probability")
        if abs(p.sum() - 1.0) > NORM_TOL:
            raise InvalidDistributionError(f"probabilities sum to {p.sum():.12g}, not 1")
        if u.size > 1:
            steps = np.diff(u)
            du = (u[-1] - u[0]) / (u.size - 1)
            if du <= 0 or np.any(np.abs(steps - du) >= GRID_TOL * du + 1e-15 * np.abs(u[1:]).max()):
                raise InvalidDistributionError("frequency grid must be strictly increasing and uniform")
        for name, arr in (("u", u), ("p", p), ("theta", canonical_phase(theta))):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_weights(cls, u, weights) -> "ComplexFreqDistribution":
        """Build from complex weights ``w_j``; p = |w|/sum|w|, theta = arg(w)."""
        w = np.asarray(weights, dtype=complex)
        total = np.abs(w).sum()
        if total == 0:
            raise InvalidDistributionError("all weights are zero")
        return cls(u, np.abs(w) / total, np.angle(w))

    @property
    def size(self) -> int:
        return self.u.size

    @property
    def du(self) -> float:
        """Grid spacing; ``inf`` for a single pixel."""
        if self.u.size < 2:
            return float("inf")
        return float((self.u[-1] - self.u[0]) / (self.u.size - 1))

    @property
    def weights(self) -> np.ndarray:
        return self.p * np.exp(1j * self.theta)

    @property
    def aliasing_horizon(self) -> float:
        """Largest |d| resolved without periodic revival artifacts."""
        if self.u.size < 2:
            return float("inf")
        return 0.5 / self.du


@dataclass(frozen=True)
class InteractionSpec:
    """Birefringent medium; only ``delta_n = n_H - n_V`` matters."""

    delta_n: float

    def __post_init__(self):
        if not np.isfinite(self.delta_n) or self.delta_n == 0:
            raise ValueError("delta_n must be finite and nonzero")

    def path_difference(self, t_seconds):
        return self.delta_n * SPEED_OF_LIGHT * np.asarray(t_seconds, dtype=float) / LAMBDA0_M

    def interaction_time(self, d):
        return np.asarray(d, dtype=float) * LAMBDA0_M / (self.delta_n * SPEED_OF_LIGHT)


@dataclass(frozen=True, eq=False)
class DecoherenceTrace:
    """Complex samples ``kappa`` on an increasing path-difference grid ``d``."""

    d: np.ndarray
    kappa: np.ndarray

    def __post_init__(self):
        d = np.atleast_1d(np.asarray(self.d, dtype=float))
        kappa = np.atleast_1d(np.asarray(self.kappa, dtype=complex))
        if d.shape != kappa.shape or d.ndim != 1:
            raise ValueError("d and kappa must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(kappa))):
            raise ValueError("trace entries must be finite")
        if d.size > 1 and np.any(np.diff(d) <= 0):
            raise ValueError("d must be strictly increasing")
        d.setflags(write=False)
        kappa.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "kappa", kappa)

    def __len__(self):
        return self.d.size

    @property
    def abs(self) -> np.ndarray:
        return np.abs(self.kappa)


def forward_kappa(dist: ComplexFreqDistribution, path_grid, *, allow_aliasing: bool = False,
                  chunk: int = 256) -> DecoherenceTrace:
    """Evaluate ``kappa(d) = sum_j p_j exp(i theta_j) exp(2 pi i u_j d)``.

    The sum runs over pixels in a fixed order per sample, so results do not
    depend on how the path grid is chunked.
    """
    d = np.atleast_1d(np.asarray(path_grid, dtype=float))
    if not np.all(np.isfinite(d)):
        raise ValueError("path grid must be finite")
    horizon = dist.aliasing_horizon
    if not allow_aliasing and d.size and np.abs(d).max() > horizon * (1 + 1e-9):
        raise AliasingError(
            f"|d| up to {np.abs(d).max():.6g} exceeds the aliasing horizon 0.5/du = {horizon:.6g}")
    w = dist.weights
    # center the carrier so the phase argument stays small
    u0 = dist.u[dist.u.size // 2]
    rel = dist.u - u0
    out = np.empty(d.size, dtype=complex)
    for start in range(0, d.size, chunk):
        block = d[start:start + chunk]
        phase = np.exp(2j * np.pi * np.outer(block, rel))
        out[start:start + chunk] = (phase @ w) * np.exp(2j * np.pi * u0 * block)
    return DecoherenceTrace(d, out)


def kappa_zero(dist: ComplexFreqDistribution) -> complex:
    """kappa at d = 0, i.e. ``sum_j p_j exp(i theta_j)``."""
    return complex(np.sum(dist.weights))


def scaled_decoherence(trace: DecoherenceTrace, tol: float = SCALING_TOL) -> DecoherenceTrace:
    """Return ``kappa(d)/kappa(0)``; the first grid point must be d = 0."""
    if trace.d[0] != 0.0:
        raise MissingOrigin(f"first path sample is {trace.d[0]!r}, expected 0")
    k0 = trace.kappa[0]
    if abs(k0) <= tol:
        raise SingularScaling(f"|kappa(0)| = {abs(k0):.3g} <= {tol:g}")
    scaled = trace.kappa / k0
    scaled[0] = 1.0
    return DecoherenceTrace(trace.d, scaled)


def gaussian_distribution(n: int, sigma: float, *, center: float = 0.0, half_width: float = 8.0,
                          theta=None) -> ComplexFreqDistribution:
    """Discretized Gaussian spectrum on ``center +- half_width*sigma``.

    ``theta`` may be an array or a callable of the grid offsets ``u - center``.
    """
    rel = np.linspace(-half_width * sigma, half_width * sigma, n)
    p = np.exp(-0.5 * (rel / sigma) ** 2)
    p /= p.sum()
    if theta is None:
        th = np.zeros(n)
    elif callable(theta):
        th = theta(rel)
    else:
        th = np.asarray(theta, dtype=float)
    return ComplexFreqDistribution(center + rel, p, th)


def chirped_gaussian(n: int, sigma: float, *, peak: float, kappa0: float,
                     half_width: float = 8.0, center: float = 0.0) -> ComplexFreqDistribution:
    """Gaussian spectrum with quadratic plus linear spectral phase.

    In the continuum limit |kappa(d)| is a Gaussian bump of height ``peak``
    centered at ``d0 > 0`` with ``|kappa(0)| = kappa0``. With ``kappa0 < peak``
    the rescaled trace exceeds one, which is a non-positive dephasing map.
    """
    if not 0 < kappa0 < peak <= 1:
        raise ValueError("need 0 < kappa0 < peak <= 1")
    # (1 + (2 b sigma^2)^2)^(-1/4) = peak
    chirp = np.sqrt(peak ** -4 - 1.0) / (2 * sigma ** 2)
    width = 1.0 / (2 * np.pi * sigma * peak ** 2)
    d0 = width * np.sqrt(2 * np.log(peak / kappa0))
    return gaussian_distribution(
        n, sigma, center=center, half_width=half_width,
        theta=lambda v: chirp * v ** 2 - 2 * np.pi * d0 * v)


def chirped_gaussian_abs_kappa(d, sigma: float, *, peak: float, kappa0: float) -> np.ndarray:
    """Continuum-limit |kappa(d)| of :func:`chirped_gaussian`."""
    width = 1.0 / (2 * np.pi * sigma * peak ** 2)
    d0 = width * np.sqrt(2 * np.log(peak / kappa0))
    d = np.asarray(d, dtype=float)
    return peak * np.exp(-0.5 * ((d - d0) / width) ** 2)
