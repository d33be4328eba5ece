import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dephasim.errors import SizeTooLarge
from dephasim.ising import (REGIME_SAMPLES, _chain_hamiltonian_kron, REGIME_WINDOW, IsingChainSpec, Regime, _factors, _product,
                            chain_hamiltonian, decoherence_fn, exact_oracle, loschmidt_echo,
                            quasiparticles, regime_classifier)
from dephasim.freq import DecoherenceTrace

finite = dict(allow_nan=False, allow_infinity=False)

specs = st.builds(
    IsingChainSpec,
    lam=st.floats(0, 3, **finite),
    delta=st.floats(0, 0.5, **finite),
    n_spins=st.integers(1, 300).map(lambda n: 2 * n),
    coupling_J=st.floats(0.1, 3, **finite),
)


def test_zero_delta_means_zero_angles():
    for lam in (0.0, 0.5, 1.0, 1.8):
        qp = quasiparticles(IsingChainSpec(lam, delta=0.0, n_spins=64))
        assert np.all(qp.alpha == 0)
        trace = decoherence_fn(IsingChainSpec(lam, delta=0.0, n_spins=64), np.linspace(0, 10, 50))
        assert np.all(trace.kappa == 1)


def test_classical_chain_flat_band():
    qp = quasiparticles(IsingChainSpec(0.0, delta=0.0, n_spins=8))
    assert np.allclose(qp.epsilon, 2.0, atol=1e-15)
    # oracle: the spectrum of -sum s3 s3 on 8 sites has gaps in multiples of 2 * 2J = 4,
    # i.e. single-quasiparticle energy 2 (domain walls come in pairs)
    energies = np.unique(np.round(np.linalg.eigvalsh(chain_hamiltonian(8, 0.0)), 9))
    assert np.allclose(np.diff(energies), 4.0)


def test_time_zero_is_one():
    spec = IsingChainSpec(0.7, 0.2, n_spins=100)
    assert decoherence_fn(spec, [0.0]).kappa[0] == 1
    assert exact_oracle(IsingChainSpec(0.7, 0.2, n_spins=6), [0.0]).kappa[0] == pytest.approx(1, abs=1e-13)


def test_oracle_zero_delta():
    out = exact_oracle(IsingChainSpec(0.4, 0.0, n_spins=6), np.linspace(0, 5, 7))
    assert np.allclose(out.kappa, 1, atol=1e-12)


def test_matches_oracle_n8_examples():
    spec = IsingChainSpec(0.5, 0.1, n_spins=8)
    t = [0.5, 1.0, 2.0]
    assert np.abs(decoherence_fn(spec, t).kappa - exact_oracle(spec, t).kappa).max() < 1e-10


def test_matches_oracle_n8_trapping_side():
    spec = IsingChainSpec(1.8, 0.1, n_spins=8)
    t = np.linspace(0, 10, 50)
    assert np.abs(decoherence_fn(spec, t).kappa - exact_oracle(spec, t).kappa).max() < 1e-10


def test_branch_choice_is_settled_by_oracle():
    # the alternative lam + 2 delta reading disagrees with the dense calculation
    spec = IsingChainSpec(0.5, 0.3, n_spins=6)
    t = np.linspace(0, 6, 40)
    oracle = exact_oracle(spec, t).kappa.real
    good = decoherence_fn(spec, t, branch="delta").kappa.real
    bad = decoherence_fn(spec, t, branch="two_delta").kappa.real
    assert np.abs(good - oracle).max() < 1e-10
    assert np.abs(bad - oracle).max() > 1e-2


def test_oracle_size_limit():
    with pytest.raises(SizeTooLarge):
        exact_oracle(IsingChainSpec(0.5, n_spins=14), [0.0])


def test_spec_validation():
    for bad in (dict(lam=0.5, n_spins=7), dict(lam=0.5, n_spins=0), dict(lam=0.5, delta=-0.1),
                dict(lam=np.nan), dict(lam=0.5, coupling_J=0.0)):
        with pytest.raises(ValueError):
            IsingChainSpec(**bad)


@pytest.mark.parametrize("lam,expected", [(0.01, Regime.REVIVAL), (0.9, Regime.MONOTONE_DECAY),
                                          (1.8, Regime.TRAPPING)])
def test_regimes(lam, expected):
    t = np.linspace(*REGIME_WINDOW, REGIME_SAMPLES)
    trace = decoherence_fn(IsingChainSpec(lam, 0.1, n_spins=4000), t)
    assert regime_classifier(trace) is expected


def test_classifier_on_synthetic_curves():
    t = np.linspace(0, 1, 5)
    assert regime_classifier(DecoherenceTrace(t, [1, 0.8, 0.6, 0.5, 0.45])) is Regime.TRAPPING
    assert regime_classifier(DecoherenceTrace(t, [1, 0.2, 0.1, 0.7, 0.3])) is Regime.REVIVAL
    assert regime_classifier(DecoherenceTrace(t, [1, 0.5, 0.2, 0.1, 0.05])) is Regime.MONOTONE_DECAY


def test_log_space_product_matches_direct():
    spec = IsingChainSpec(0.9, 0.1, n_spins=4000)
    t = np.linspace(0, 4, 101)
    f = _factors(quasiparticles(spec), t)
    direct = np.prod(f, axis=1)
    logs = np.exp(np.log(f).sum(axis=1))
    assert np.allclose(_product(f), direct, rtol=0, atol=0)
    assert np.allclose(direct, logs, rtol=1e-12, atol=1e-300)


def test_underflow_handled():
    f = np.full((1, 4), 1e-310)
    f[0, 0] = 0.5
    assert _product(f)[0] == 0.0
    f = np.array([[1e-301, 1e10, 1e-5]])
    assert _product(f)[0] == pytest.approx(1e-296, rel=1e-12)


@settings(max_examples=200)
@given(specs, st.lists(st.floats(0, 50, **finite), min_size=1, max_size=10))
def test_bounds(spec, times):
    trace = decoherence_fn(spec, sorted(set(times)))
    assert np.all(trace.kappa.real >= 0) and np.all(trace.kappa.real <= 1)
    assert np.all(trace.kappa.imag == 0)
    assert decoherence_fn(spec, [0.0]).kappa[0] == 1


@given(specs, st.floats(0, 50, **finite))
def test_factor_bounds(spec, t):
    qp = quasiparticles(spec)
    f = _factors(qp, np.array([t]))[0]
    lower = np.cos(2 * qp.alpha) ** 2
    assert np.all(f >= lower - 1e-15) and np.all(f <= 1)


@settings(max_examples=20)
@given(st.sampled_from([2, 4, 6, 8]), st.floats(0, 2, **finite), st.floats(0, 0.3, **finite))
def test_oracle_property(n, lam, delta):
    spec = IsingChainSpec(lam, delta, n_spins=n)
    t = np.linspace(0, 10, 20)
    assert np.abs(decoherence_fn(spec, t).kappa - exact_oracle(spec, t).kappa).max() < 1e-10


def test_echo_is_square_of_amplitude():
    spec = IsingChainSpec(1.3, 0.2, n_spins=50)
    t = np.linspace(0, 3, 31)
    assert np.allclose(decoherence_fn(spec, t).kappa.real ** 2, loschmidt_echo(spec, t), rtol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_fast_hamiltonian_matches_kron(n):
    assert np.array_equal(chain_hamiltonian(n, 0.7, 1.3), _chain_hamiltonian_kron(n, 0.7, 1.3))
