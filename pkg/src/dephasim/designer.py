"""Inverse design of frequency distributions and SLM quantization.

A target D(d) sampled at ``d_m = m * dd`` (m = 0..M-1) is extended to negative
path differences by ``D(-d) = conj(D(d))`` and inverted by a length-``L`` DFT.
The resulting weights live on ``u_j = j / (L * dd)``; sampling is adequate
(the Nyquist bound) when the target carries no content at ``|u| >= 1/(2 dd)``,
which is checked by requiring negligible weight in the outermost bins.

The designed distribution realizes ``kappa(0) = D(0) / sum|w|``, which may be
smaller than one. Rescaling by kappa(0) restores the target exactly on the
sample grid; targets with |D(d)| > |D(0)| are therefore reachable and describe
non-positive maps.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AliasingError, BandwidthTooNarrow, NonPhysicalTarget
from .freq import ComplexFreqDistribution, DecoherenceTrace, forward_kappa, scaled_decoherence

# 3 nm FWHM at 800 nm, expressed in units of c/lambda0
SLM_BANDWIDTH_U = 3.0 / 800.0
SLM_PIXELS = 900

ALIAS_EDGE_FRACTION = 0.05
ALIAS_TOL = 1e-3


@dataclass(frozen=True, eq=False)
class DesignTarget:
    d: np.ndarray
    target: np.ndarray

    def __post_init__(self):
        d = np.atleast_1d(np.asarray(self.d, dtype=float))
        target = np.atleast_1d(np.asarray(self.target, dtype=complex))
        if d.shape != target.shape or d.ndim != 1 or d.size < 2:
            raise ValueError("d and target must be 1-d arrays of equal length >= 2")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(target))):
            raise ValueError("target entries must be finite")
        if d[0] != 0.0:
            raise ValueError("target grid must start at d = 0")
        step = d[1] - d[0]
        if step <= 0 or np.any(np.abs(np.diff(d) - step) > 1e-9 * step):
            raise ValueError("target grid must be uniform and increasing")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "target", target)

    @property
    def step(self) -> float:
        return float(self.d[1] - self.d[0])

    @classmethod
    def from_trace(cls, trace: DecoherenceTrace) -> "DesignTarget":
        return cls(trace.d, trace.kappa)

    def rescaled(self, factor: float) -> "DesignTarget":
        """Same samples on the path grid ``factor * d``."""
        return DesignTarget(self.d * factor, self.target)

    def head(self, m: int) -> "DesignTarget":
        return DesignTarget(self.d[:m], self.target[:m])


@dataclass(frozen=True)
class HardwareProfile:
    pixel_count: int = SLM_PIXELS
    bandwidth_u: float = SLM_BANDWIDTH_U
    amplitude_levels: int = 256
    phase_levels: int = 256
    center_u: float | None = None
    min_capture: float = 0.5

    def __post_init__(self):
        if self.pixel_count < 2:
            raise ValueError("pixel_count must be >= 2")
        if not self.bandwidth_u > 0:
            raise ValueError("bandwidth_u must be positive")
        if self.amplitude_levels < 2 or self.phase_levels < 2:
            raise ValueError("quantization needs at least 2 levels")
        if not 0 <= self.min_capture <= 1:
            raise ValueError("min_capture must lie in [0, 1]")

    @property
    def pixel_width(self) -> float:
        return self.bandwidth_u / self.pixel_count

    @classmethod
    def from_dict(cls, data: dict) -> "HardwareProfile":
        allowed = {"pixel_count", "bandwidth_u", "amplitude_levels", "phase_levels",
                   "center_u", "min_capture"}
        unknown = set(data) - allowed
        if unknown:
            raise ValueError(f"unknown hardware keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return {"pixel_count": self.pixel_count, "bandwidth_u": self.bandwidth_u,
                "amplitude_levels": self.amplitude_levels, "phase_levels": self.phase_levels,
                "center_u": self.center_u, "min_capture": self.min_capture}


def samples_needed(grid_size: int) -> int:
    """One-sided target samples consumed by a ``grid_size``-pixel design."""
    return grid_size // 2 + 1


def design_frequencies(grid_size: int, step: float) -> np.ndarray:
    """Centered DFT frequencies ``j / (grid_size * step)``."""
    return np.fft.fftshift(np.fft.fftfreq(grid_size, d=step))


def hermitian_extension(values: np.ndarray, grid_size: int) -> np.ndarray:
    """Length-``grid_size`` sequence x_n with x_{-n} = conj(x_n), in DFT order."""
    m = samples_needed(grid_size)
    x = np.empty(grid_size, dtype=complex)
    x[:m] = values[:m]
    if grid_size % 2 == 0:
        # the Nyquist sample is its own mirror image
        x[m - 1] = x[m - 1].real
        x[m:] = np.conj(values[1:m - 1][::-1])
    else:
        x[m:] = np.conj(values[1:m][::-1])
    x[0] = x[0].real
    return x


def inverse_weights(target: DesignTarget, grid_size: int) -> tuple[np.ndarray, np.ndarray]:
    """Frequencies and complex weights with ``sum_j w_j e^{2 pi i u_j d_m} = D(d_m)``."""
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    m = samples_needed(grid_size)
    if target.d.size < m:
        raise ValueError(f"a {grid_size}-pixel design needs {m} target samples, got {target.d.size}")
    x = hermitian_extension(target.target, grid_size)
    # w_j = (1/L) sum_n x_n e^{-2 pi i j n / L}, so sum_j w_j e^{+2 pi i u_j d_n} = x_n
    w = np.fft.fftshift(np.fft.fft(x)) / grid_size
    return design_frequencies(grid_size, target.step), w


def invert_target(target: DesignTarget, grid_size: int, *, check_aliasing: bool = True,
                  alias_tol: float = ALIAS_TOL) -> ComplexFreqDistribution:
    """Distribution whose rescaled forward trace reproduces ``target``.

    Uses the first ``grid_size // 2 + 1`` target samples.
    """
    u, w = inverse_weights(target, grid_size)
    total = np.abs(w).sum()
    if total == 0 or abs(target.target[0]) == 0:
        raise NonPhysicalTarget("target has no realizable spectrum (kappa(0) would vanish)")
    if check_aliasing and grid_size >= 2 / ALIAS_EDGE_FRACTION:
        edge = int(np.ceil(ALIAS_EDGE_FRACTION * grid_size / 2))
        edge_weight = np.abs(w[:edge]).sum() + np.abs(w[-edge:]).sum()
        if edge_weight > alias_tol * total:
            raise AliasingError(
                f"{edge_weight / total:.2e} of the spectral weight sits in the outer "
                f"{ALIAS_EDGE_FRACTION:.0%} of the band; sample the target more finely")
    # a real weight is exactly representable with theta in {0, pi}
    w = np.where(np.abs(w.imag) <= 1e-15 * total, w.real + 0j, w)
    return ComplexFreqDistribution.from_weights(u, w)


def invert_two_sided(trace: DecoherenceTrace) -> ComplexFreqDistribution:
    """Exact inverse from samples on ``d_n = n * dd`` for n = -L/2 .. L/2 - 1.

    One-sided targets only fix kappa for d >= 0, and their Hermitian extension
    yields real weights. With both signs of d sampled no extension is needed
    and any complex distribution on ``j / (L * dd)`` is recovered exactly.
    """
    d = trace.d
    n = d.size
    if n < 2 or n % 2:
        raise ValueError("two-sided inversion needs an even number of samples")
    step = (d[-1] - d[0]) / (n - 1)
    if abs(d[n // 2]) > 1e-12 * step or np.any(np.abs(np.diff(d) - step) > 1e-9 * step):
        raise ValueError("samples must be uniform with d = 0 at index L/2")
    x = np.fft.ifftshift(trace.kappa)
    w = np.fft.fftshift(np.fft.fft(x)) / n
    return ComplexFreqDistribution.from_weights(design_frequencies(n, step), w)


def realized_kappa_zero(target: DesignTarget, grid_size: int) -> complex:
    """kappa(0) of :func:`invert_target`'s output, before any scaling."""
    _, w = inverse_weights(target, grid_size)
    return complex(target.target[0] / np.abs(w).sum())


def match_pixel_pitch(target: DesignTarget, hw: HardwareProfile, grid_size: int) -> DesignTarget:
    """Rescale the path grid so design pixels coincide with SLM pixels."""
    step = 1.0 / (grid_size * hw.pixel_width)
    return target.rescaled(step / target.step)


def _quantize_levels(x: np.ndarray, levels: int) -> np.ndarray:
    """Mid-tread codes in [0, levels - 1] for x in [0, 1]."""
    return np.rint(np.clip(x, 0.0, 1.0) * (levels - 1))


def _window_grid(dist: ComplexFreqDistribution, hw: HardwareProfile) -> np.ndarray:
    n = hw.pixel_count
    w = hw.pixel_width
    center = hw.center_u if hw.center_u is not None else 0.5 * (dist.u[0] + dist.u[-1])
    first = center - 0.5 * (n - 1) * w
    if dist.size > 1 and abs(dist.du - w) <= 1e-9 * w:
        # commensurate grids: snap pixel centers onto source samples
        first = dist.u[0] + np.rint((first - dist.u[0]) / dist.du) * dist.du
    return first + w * np.arange(n)


def _on_hardware_grid(dist: ComplexFreqDistribution, hw: HardwareProfile) -> bool:
    if dist.size != hw.pixel_count or abs(dist.du - hw.pixel_width) > 1e-9 * hw.pixel_width:
        return False
    if hw.center_u is None:
        return True
    return abs(0.5 * (dist.u[0] + dist.u[-1]) - hw.center_u) <= 1e-9 * hw.pixel_width


def _rebin(dist: ComplexFreqDistribution, centers: np.ndarray, width: float) -> tuple[np.ndarray, float]:
    """Integrate the piecewise-constant spectrum over each target pixel.

    Each source pixel spreads its complex weight uniformly over one source
    pitch; a target pixel collects the overlapping fractions. Returns the
    binned weights and the captured probability.
    """
    if dist.size == 1:
        src_width = width
    else:
        src_width = dist.du
    edges = np.append(dist.u - 0.5 * src_width, dist.u[-1] + 0.5 * src_width)
    cum_w = np.concatenate([[0], np.cumsum(dist.weights)])
    cum_p = np.concatenate([[0], np.cumsum(dist.p)])
    bounds = np.append(centers - 0.5 * width, centers[-1] + 0.5 * width)

    def cumulative(values, x):
        pos = (x - edges[0]) / src_width
        # cut points that coincide with source edges up to rounding snap onto them
        pos = np.where(np.abs(pos - np.rint(pos)) <= 1e-9, np.rint(pos), pos)
        pos = np.clip(pos, 0, dist.size)
        i = np.minimum(np.floor(pos).astype(np.int64), dist.size - 1)
        frac = pos - i
        return values[i] + frac * (values[i + 1] - values[i])

    at = cumulative(cum_w, bounds)
    captured = float(np.diff(cumulative(cum_p, bounds[[0, -1]]))[0])
    return np.diff(at), captured


def quantize(dist: ComplexFreqDistribution, hw: HardwareProfile) -> ComplexFreqDistribution:
    """Emulate a finite SLM: pixel window, amplitude levels, phase levels.

    The spectrum is rebinned onto ``hw.pixel_count`` pixels spanning
    ``hw.bandwidth_u`` by integrating each source pixel's weight over its
    overlap with every SLM pixel; content outside the window is dropped. Amplitudes are
    quantized relative to the brightest pixel onto ``amplitude_levels`` evenly
    spaced levels including zero; phases onto ``phase_levels`` levels of
    ``2 pi / phase_levels``. Probabilities are renormalized at the end.
    """
    if _on_hardware_grid(dist, hw):
        u = dist.u
        binned = dist.weights
    else:
        u = _window_grid(dist, hw)
        binned, captured = _rebin(dist, u, hw.pixel_width)
        if captured < hw.min_capture:
            raise BandwidthTooNarrow(
                f"window captures {captured:.1%} of the probability (< {hw.min_capture:.0%})")

    mag = np.abs(binned)
    if mag.max() == 0:
        raise BandwidthTooNarrow("no probability survives the pixel window")
    amp_codes = _quantize_levels(mag / mag.max(), hw.amplitude_levels)
    step = 2 * np.pi / hw.phase_levels
    phase_codes = np.rint(np.angle(binned) / step)
    # canonical branch (-pi, pi]: codes in (-L/2, L/2]
    half = hw.phase_levels / 2
    phase_codes = np.where(phase_codes <= -half, phase_codes + hw.phase_levels, phase_codes)
    phase_codes = np.where(phase_codes > half, phase_codes - hw.phase_levels, phase_codes)
    phase_codes = np.where(amp_codes == 0, 0.0, phase_codes)
    p = amp_codes / amp_codes.sum()
    return ComplexFreqDistribution(u, p, phase_codes * step)


def roundtrip_error(target: DesignTarget, dist: ComplexFreqDistribution, *,
                    allow_aliasing: bool = False) -> float:
    """``max_m |D_sim(d_m) - D(d_m)/D(0)|`` with D_sim the kappa(0)-rescaled forward trace."""
    if target.target[0] == 0:
        raise NonPhysicalTarget("target vanishes at d = 0")
    sim = scaled_decoherence(forward_kappa(dist, target.d, allow_aliasing=allow_aliasing))
    return float(np.abs(sim.kappa - target.target / target.target[0]).max())


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())
