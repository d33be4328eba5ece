import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from dephasim.errors import AliasingError, InvalidDistributionError, MissingOrigin, SingularScaling
from dephasim.freq import (ComplexFreqDistribution, DecoherenceTrace, InteractionSpec,
                           canonical_phase, chirped_gaussian, chirped_gaussian_abs_kappa,
                           forward_kappa, gaussian_distribution, kappa_zero, scaled_decoherence)

finite = dict(allow_nan=False, allow_infinity=False)


@st.composite
def distributions(draw, max_size=40):
    n = draw(st.integers(1, max_size))
    du = draw(st.floats(1e-3, 1.0, **finite))
    u0 = draw(st.floats(-5, 5, **finite))
    raw = np.array(draw(st.lists(st.floats(0, 1, **finite), min_size=n, max_size=n)))
    if raw.sum() == 0:
        raw[0] = 1.0
    theta = np.array(draw(st.lists(st.floats(-10, 10, **finite), min_size=n, max_size=n)))
    return ComplexFreqDistribution(u0 + du * np.arange(n), raw / raw.sum(), theta)


def test_single_pixel_never_dephases():
    dist = ComplexFreqDistribution([0.3], [1.0], [0.0])
    trace = forward_kappa(dist, np.linspace(0, 1e6, 101))
    assert np.allclose(trace.abs, 1.0, atol=1e-12)


def test_two_pixels_give_cosine():
    u1, u2 = 0.2, 0.45
    dist = ComplexFreqDistribution([u1, u2], [0.5, 0.5], [0, 0])
    d = np.linspace(0, 0.5 / (u2 - u1), 200)
    assert np.allclose(forward_kappa(dist, d).abs, np.abs(np.cos(np.pi * (u2 - u1) * d)), atol=1e-14)


def _continuum_kappa(sigma, half_width, d):
    # dense quadrature of the truncated continuous Gaussian, independent of the pixel sum
    norm = integrate.quad(lambda v: np.exp(-0.5 * (v / sigma) ** 2), -half_width * sigma, half_width * sigma)[0]
    out = []
    for x in d:
        re = integrate.quad(lambda v: np.exp(-0.5 * (v / sigma) ** 2) * np.cos(2 * np.pi * v * x),
                            -half_width * sigma, half_width * sigma, limit=400, epsabs=1e-15)[0]
        out.append(re / norm)
    return np.array(out)


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_gaussian_matches_continuum_limit():
    sigma = 0.05
    dist = gaussian_distribution(4096, sigma)
    d = np.linspace(0, 2 / sigma, 81)
    got = forward_kappa(dist, d).abs
    oracle = np.abs(_continuum_kappa(sigma, 8.0, d))
    closed = np.exp(-2 * np.pi ** 2 * sigma ** 2 * d ** 2)
    # relative accuracy where the value is representable, absolute in the far tail
    resolvable = closed > 1e-12
    assert np.all(np.abs(got[resolvable] / closed[resolvable] - 1) < 1e-3)
    assert np.all(np.abs(got[resolvable] / oracle[resolvable] - 1) < 1e-3)
    assert np.all(np.abs(got[~resolvable] - closed[~resolvable]) < 1e-14)


def test_kappa_zero_examples():
    assert kappa_zero(gaussian_distribution(64, 1.0)) == pytest.approx(1.0)
    pair = ComplexFreqDistribution([0.0, 1.0], [0.5, 0.5], [0.0, np.pi])
    assert abs(kappa_zero(pair)) < 1e-15


def test_kappa_zero_linear_phase_characteristic_function():
    sigma, a = 0.2, 7.0
    dist = gaussian_distribution(4096, sigma, theta=lambda v: a * v)
    # E[exp(i a v)] for v ~ N(0, sigma^2)
    assert abs(kappa_zero(dist)) == pytest.approx(np.exp(-0.5 * a ** 2 * sigma ** 2), rel=1e-9)
    assert abs(kappa_zero(dist)) < 1


def test_scaled_examples():
    d = np.linspace(0, 1, 5)
    tr = DecoherenceTrace(d, np.exp(-d))
    assert np.array_equal(scaled_decoherence(tr).kappa, tr.kappa)
    const = scaled_decoherence(DecoherenceTrace(d, np.full(5, 0.5)))
    assert np.allclose(const.kappa, 1.0, atol=0)


def test_scaled_errors():
    with pytest.raises(MissingOrigin):
        scaled_decoherence(DecoherenceTrace([0.1, 0.2], [1, 1]))
    with pytest.raises(SingularScaling):
        scaled_decoherence(DecoherenceTrace([0.0, 0.2], [1e-12, 1]))


def test_chirped_gaussian_exceeds_one():
    sigma = 1 / (2 * np.pi * 0.64)
    dist = chirped_gaussian(4096, sigma, peak=0.8, kappa0=0.6)
    d = np.linspace(0, 4, 401)
    trace = forward_kappa(dist, d)
    assert abs(trace.kappa[0]) == pytest.approx(0.6, abs=1e-6)
    assert trace.abs.max() == pytest.approx(0.8, abs=1e-6)
    assert np.allclose(trace.abs, chirped_gaussian_abs_kappa(d, sigma, peak=0.8, kappa0=0.6), atol=1e-6)
    scaled = scaled_decoherence(trace)
    assert np.abs(scaled.kappa).max() == pytest.approx(4 / 3, abs=1e-5)


def test_aliasing_guard():
    dist = gaussian_distribution(101, 0.1)
    with pytest.raises(AliasingError):
        forward_kappa(dist, [0, 1.01 * dist.aliasing_horizon])
    forward_kappa(dist, [0, 3 * dist.aliasing_horizon], allow_aliasing=True)


def test_validation():
    with pytest.raises(InvalidDistributionError):
        ComplexFreqDistribution([0, 1], [0.5, 0.6], [0, 0])
    with pytest.raises(InvalidDistributionError):
        ComplexFreqDistribution([0, 1], [1.5, -0.5], [0, 0])
    with pytest.raises(InvalidDistributionError):
        ComplexFreqDistribution([0, 1, 3], [0.2, 0.3, 0.5], [0, 0, 0])
    with pytest.raises(InvalidDistributionError):
        ComplexFreqDistribution([0, 1], [0.5, 0.5], [0, np.nan])
    with pytest.raises(ValueError):
        DecoherenceTrace([0.0, 0.0], [1, 1])


def test_theta_is_canonical():
    dist = ComplexFreqDistribution([0, 1], [0.5, 0.5], [-np.pi, 3 * np.pi])
    assert np.allclose(dist.theta, [np.pi, np.pi])
    assert np.all(canonical_phase(np.linspace(-20, 20, 999)) > -np.pi)


def test_interaction_time_roundtrip():
    spec = InteractionSpec(delta_n=0.01)
    t = np.array([0.0, 1e-12, 3e-11])
    assert np.allclose(spec.interaction_time(spec.path_difference(t)), t, rtol=1e-15, atol=0)
    with pytest.raises(ValueError):
        InteractionSpec(0.0)


@settings(max_examples=1000)
@given(distributions())
def test_normalization_bound(dist):
    d = np.linspace(0, dist.aliasing_horizon if dist.size > 1 else 10.0, 17)
    assert np.all(forward_kappa(dist, d).abs <= 1 + 1e-12)


@given(distributions())
def test_origin_is_kappa_zero(dist):
    assert forward_kappa(dist, [0.0]).kappa[0] == pytest.approx(kappa_zero(dist), abs=1e-14)


@st.composite
def weight_pairs(draw):
    n = draw(st.integers(1, 30))
    parts = st.lists(st.complex_numbers(max_magnitude=1, **finite), min_size=n, max_size=n)
    return np.array(draw(parts)), np.array(draw(parts))


def _raw_kappa(u, w, d):
    # sum_j w_j exp(2 pi i u_j d) through forward_kappa, undoing its normalization
    total = np.abs(w).sum()
    if total == 0:
        return np.zeros(d.size, dtype=complex)
    return forward_kappa(ComplexFreqDistribution.from_weights(u, w), d, allow_aliasing=True).kappa * total


@given(weight_pairs(), st.floats(0, 1, **finite))
def test_linearity(pair, alpha):
    wa, wb = pair
    u = 0.01 * np.arange(wa.size)
    d = np.linspace(0, 50, 9)
    mix = _raw_kappa(u, alpha * wa + (1 - alpha) * wb, d)
    combo = alpha * _raw_kappa(u, wa, d) + (1 - alpha) * _raw_kappa(u, wb, d)
    assert np.abs(mix - combo).max() <= 1e-12


@given(distributions(), st.floats(-3, 3, **finite))
def test_time_shift(dist, d0):
    shifted = ComplexFreqDistribution(dist.u, dist.p, dist.theta + 2 * np.pi * dist.u * d0)
    span = 0.2 * (dist.aliasing_horizon if dist.size > 1 else 10.0)
    d = np.linspace(0, span, 9)
    new = forward_kappa(shifted, d, allow_aliasing=True).kappa
    old = forward_kappa(dist, d + d0, allow_aliasing=True).kappa
    # phases of size 2 pi u d0 lose ~|u d0| ulps when wrapped
    assert np.abs(new - old).max() <= 1e-12 * max(1.0, np.abs(dist.u).max() * abs(d0) * 10)


@given(distributions())
def test_scaled_origin_exact(dist):
    trace = forward_kappa(dist, np.linspace(0, min(1.0, dist.aliasing_horizon), 5))
    if abs(trace.kappa[0]) > 1e-9:
        assert scaled_decoherence(trace).kappa[0] == 1.0
