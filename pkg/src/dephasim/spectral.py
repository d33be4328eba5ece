"""Dephasing by a bosonic bath with spectral density J(omega).

    D(t) = exp(-Gamma(t)),
    Gamma(t) = int_0^inf J(w) coth(beta w / 2) (1 - cos w t) / w^2 dw

J absorbs all coupling constants. ``beta = inf`` is zero temperature.

Quadrature: :func:`spectral_decoherence` integrates all requested times at
once with an adaptive 21-point Gauss-Kronrod rule on a vector-valued integrand
(``scipy.integrate.quad_vec``), with table knots as forced breakpoints. The
error target is absolute on Gamma, which is relative on D. For the parametric
family the range is truncated at ``TAIL_CUTOFF * omega_c`` where the
exponential tail is below 1e-26.

:func:`decoherence_exponent` is an independent scalar route: the support is cut
into panels at every table knot and at every multiple of ``2 pi / t`` (one
oscillation period per panel), and each panel goes through QUADPACK QAGS.

``1 - cos(w t)`` is evaluated as ``2 sin^2(w t / 2)``; below the crossover
``w t < SERIES_CROSSOVER`` the ratio ``(1 - cos w t)/w^2`` switches to its
Taylor series ``t^2/2 - w^2 t^4/24``, so w = 0 itself is well defined.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import IntegralDiverges
from .freq import DecoherenceTrace

SERIES_CROSSOVER = 1e-4
TAIL_CUTOFF = 60.0
EPSREL = 1e-10
EPSABS_GAMMA = 1e-11
MAX_PANELS = 20000


@dataclass(frozen=True, eq=False)
class SpectralDensitySpec:
    """Either ``family="ohmic"`` with (alpha, omega_c, s) or a table (omega, J).

    The parametric family is ``J(w) = alpha * omega_c**(1 - s) * w**s * exp(-w / omega_c)``;
    ``s = 1`` is the Ohmic case. Tables are linearly interpolated and zero
    outside ``[omega[0], omega[-1]]``.
    """

    family: str | None = "ohmic"
    alpha: float = 1.0
    omega_c: float = 1.0
    s: float = 1.0
    omega: np.ndarray | None = None
    J: np.ndarray | None = None
    beta: float = math.inf

    def __post_init__(self):
        if not (self.beta > 0):
            raise ValueError("beta must be positive or inf")
        if self.omega is not None or self.J is not None:
            if self.omega is None or self.J is None:
                raise ValueError("a table needs both omega and J")
            omega = np.asarray(self.omega, dtype=float)
            J = np.asarray(self.J, dtype=float)
            if omega.ndim != 1 or omega.shape != J.shape or omega.size < 2:
                raise ValueError("omega and J must be 1-d of equal length >= 2")
            if omega[0] <= 0 or np.any(np.diff(omega) <= 0):
                raise ValueError("omega must be strictly increasing and positive")
            if np.any(J < 0):
                raise ValueError("J must be nonnegative")
            object.__setattr__(self, "omega", omega)
            object.__setattr__(self, "J", J)
            object.__setattr__(self, "family", None)
        elif self.family == "ohmic":
            if self.alpha < 0 or not self.omega_c > 0:
                raise ValueError("need alpha >= 0 and omega_c > 0")
        else:
            raise ValueError(f"unknown spectral family {self.family!r}")

    @classmethod
    def ohmic(cls, alpha: float, omega_c: float, beta: float = math.inf, s: float = 1.0):
        return cls(family="ohmic", alpha=alpha, omega_c=omega_c, s=s, beta=beta)

    @classmethod
    def table(cls, omega, J, beta: float = math.inf):
        return cls(family=None, omega=omega, J=J, beta=beta)

    @property
    def is_table(self) -> bool:
        return self.omega is not None

    @property
    def zero_temperature(self) -> bool:
        return math.isinf(self.beta)

    def density(self, w):
        w = np.asarray(w, dtype=float)
        if self.is_table:
            return np.interp(w, self.omega, self.J, left=0.0, right=0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.alpha * self.omega_c ** (1 - self.s) * np.power(w, self.s) * np.exp(-w / self.omega_c)
        return np.where(w > 0, out, 0.0)

    def support(self) -> tuple[float, float]:
        if self.is_table:
            return float(self.omega[0]), float(self.omega[-1])
        return 0.0, TAIL_CUTOFF * self.omega_c


def _check_convergence(spec: SpectralDensitySpec) -> None:
    # near w = 0: J ~ w^s, coth ~ 2/(beta w), (1 - cos wt)/w^2 ~ t^2/2
    if spec.is_table or spec.alpha == 0:
        return
    if spec.zero_temperature and spec.s <= -1:
        raise IntegralDiverges(f"J ~ w^{spec.s} is not integrable at w -> 0 (need s > -1)")
    if not spec.zero_temperature and spec.s <= 0:
        raise IntegralDiverges(f"J ~ w^{spec.s} at finite temperature diverges at w -> 0 (need s > 0)")


def _kernel(w: float, t: float) -> float:
    """(1 - cos w t) / w^2 without cancellation."""
    x = w * t
    if abs(x) < SERIES_CROSSOVER:
        return t * t * (0.5 - x * x / 24.0)
    return 2.0 * math.sin(0.5 * x) ** 2 / (w * w)


def _thermal(w: float, beta: float) -> float:
    if math.isinf(beta):
        return 1.0
    return 1.0 / math.tanh(0.5 * beta * w)


def _panels(spec: SpectralDensitySpec, t: float) -> np.ndarray:
    lo, hi = spec.support()
    edges = [lo, hi]
    if spec.is_table:
        edges.extend(spec.omega.tolist())
    if t > 0:
        period = 2 * math.pi / t
        n = min(int(hi / period), MAX_PANELS)
        edges.extend(period * np.arange(1, n + 1))
    edges = np.unique(np.clip(edges, lo, hi))
    return edges


def decoherence_exponent(spec: SpectralDensitySpec, t: float) -> float:
    """Gamma(t) >= 0."""
    if t == 0:
        return 0.0
    _check_convergence(spec)
    if spec.is_table:
        dens = lambda w: float(np.interp(w, spec.omega, spec.J))
    elif spec.alpha == 0:
        return 0.0
    else:
        pref = spec.alpha * spec.omega_c ** (1 - spec.s)
        wc = spec.omega_c
        s = spec.s
        dens = lambda w: pref * w ** s * math.exp(-w / wc) if w > 0 else 0.0
    beta = spec.beta

    def integrand(w):
        if w <= 0:
            # Gauss-Kronrod nodes are interior; never reached in practice
            return 0.0
        return dens(w) * _thermal(w, beta) * _kernel(w, t)

    edges = _panels(spec, t)
    parts = []
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=EPSREL, limit=200)
        parts.append(val)
    return math.fsum(parts)


def _kernel_vec(w: float, t: np.ndarray) -> np.ndarray:
    x = w * t
    small = np.abs(x) < SERIES_CROSSOVER
    out = np.empty_like(t)
    out[small] = t[small] ** 2 * (0.5 - x[small] ** 2 / 24.0)
    if w > 0:
        out[~small] = 2.0 * np.sin(0.5 * x[~small]) ** 2 / (w * w)
    return out


def exponents(spec: SpectralDensitySpec, times) -> np.ndarray:
    """Gamma(t) for every entry of ``times`` in one adaptive vector quadrature."""
    t = np.atleast_1d(np.asarray(times, dtype=float))
    _check_convergence(spec)
    if t.size == 0 or not np.any(t > 0) or (not spec.is_table and spec.alpha == 0):
        return np.zeros_like(t)
    lo, hi = spec.support()
    beta = spec.beta

    def integrand(w):
        if w <= 0:
            return np.zeros_like(t)
        return float(spec.density(w)) * _thermal(w, beta) * _kernel_vec(w, t)

    points = spec.omega[1:-1] if spec.is_table else None
    gamma, _ = integrate.quad_vec(integrand, lo, hi, epsabs=EPSABS_GAMMA, epsrel=EPSREL,
                                  norm="max", limit=100000, points=points)
    return np.where(t > 0, gamma, 0.0)


def spectral_decoherence(spec: SpectralDensitySpec, times) -> DecoherenceTrace:
    """Real trace D(t) = exp(-Gamma(t)) on nonnegative ``times``."""
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(t < 0):
        raise ValueError("times must be nonnegative")
    return DecoherenceTrace(t, np.exp(-exponents(spec, t)).astype(complex))


def ohmic_closed_form(alpha: float, omega_c: float, times) -> np.ndarray:
    """Zero-temperature Ohmic D(t) = (1 + omega_c^2 t^2)^(-alpha/2)."""
    t = np.asarray(times, dtype=float)
    return (1.0 + (omega_c * t) ** 2) ** (-0.5 * alpha)


def bimodal_table(n: int = 400, *, omega_max: float = 6.0) -> SpectralDensitySpec:
    """A synthetic two-peak J(w) (no natural bath has this shape)."""
    w = np.linspace(omega_max / n, omega_max, n)
    J = 0.35 * w * np.exp(-((w - 1.0) / 0.35) ** 2) + 0.6 * np.exp(-((w - 3.5) / 0.5) ** 2)
    return SpectralDensitySpec.table(w, J)


def decoherence_to_design(trace: DecoherenceTrace):
    """Wrap a spectral D(t) as a designer target (path grid = time grid)."""
    from .designer import DesignTarget

    return DesignTarget(trace.d, trace.kappa)
