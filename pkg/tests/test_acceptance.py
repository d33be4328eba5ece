"""Acceptance criteria, each at its stated tolerance.

Every test prints one ``PASS``/``FAIL`` line. Run directly with
``python tests/test_acceptance.py`` for just the summary lines.
"""
import json
import sys
import time

import numpy as np
import pytest

from dephasim import io, scenarios
from dephasim.channel import choi_eigenvalues
from dephasim.designer import (DesignTarget, HardwareProfile, invert_target, match_pixel_pitch, quantize,
                               roundtrip_error, samples_needed)
from dephasim.freq import DecoherenceTrace
from dephasim.ising import (REGIME_SAMPLES, REGIME_WINDOW, IsingChainSpec, Regime, decoherence_fn,
                            exact_oracle, regime_classifier)
from dephasim.measurement import CountingConfig, measure_trace
from dephasim.spectral import SpectralDensitySpec, ohmic_closed_form, spectral_decoherence

GRID = 4096


def report(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    try:
        capman = report.capsys
    except AttributeError:
        capman = None
    if capman is not None:
        with capman.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


@pytest.fixture(autouse=True)
def _printer(capsys):
    report.capsys = capsys
    yield
    report.capsys = None


def test_1_ising_oracle_equivalence():
    rng = np.random.default_rng(20240601)
    start = time.perf_counter()
    worst = 0.0
    for n in (2, 4, 6, 8, 10):
        for _ in range(20):
            spec = IsingChainSpec(lam=rng.uniform(0, 2), delta=rng.uniform(0, 0.3), n_spins=n)
            t = np.sort(rng.uniform(0, 10, 20))
            err = np.abs(decoherence_fn(spec, t).kappa - exact_oracle(spec, t).kappa).max()
            worst = max(worst, err)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-10 and elapsed < 60
    assert report(1, ok, f"max |closed form - exact diagonalization| = {worst:.2e} (< 1e-10), {elapsed:.1f} s (< 60 s)")


def test_2_regimes():
    start = time.perf_counter()
    t = np.linspace(*REGIME_WINDOW, REGIME_SAMPLES)
    expected = {0.01: Regime.REVIVAL, 0.9: Regime.MONOTONE_DECAY, 1.8: Regime.TRAPPING}
    got = {lam: regime_classifier(decoherence_fn(IsingChainSpec(lam, 0.1, 4000, 1.0), t))
           for lam in expected}
    elapsed = time.perf_counter() - start
    ok = got == expected and elapsed < 30
    labels = ", ".join(f"lambda={lam}: {r.value}" for lam, r in got.items())
    assert report(2, ok, f"{labels} on t in {list(REGIME_WINDOW)}, {elapsed:.2f} s (< 30 s)")


def _roundtrip_targets():
    hw = HardwareProfile()
    targets = {}
    t_ising = np.arange(samples_needed(GRID)) * 0.005
    for lam in (0.01, 0.9, 1.8):
        trace = decoherence_fn(IsingChainSpec(lam, 0.1, 4000), t_ising)
        targets[f"ising lambda={lam}"] = DesignTarget.from_trace(trace)
    t_ohm = np.arange(samples_needed(GRID)) * 0.01
    targets["ohmic alpha=1 wc=1"] = DesignTarget.from_trace(
        spectral_decoherence(SpectralDensitySpec.ohmic(1.0, 1.0), t_ohm))
    return hw, {name: match_pixel_pitch(tg, hw, GRID) for name, tg in targets.items()}


def test_3_fourier_roundtrip():
    start = time.perf_counter()
    hw, targets = _roundtrip_targets()
    full, coarse = {}, {}
    for name, target in targets.items():
        dist = invert_target(target, GRID)
        full[name] = roundtrip_error(target, dist)
        coarse[name] = roundtrip_error(target, quantize(dist, hw))
    elapsed = time.perf_counter() - start
    ok = max(full.values()) < 1e-6 and max(coarse.values()) < 5e-2 and elapsed < 10
    detail = "; ".join(f"{n}: {full[n]:.1e} / {coarse[n]:.1e}" for n in targets)
    assert report(3, ok, f"full / 900px-256-level error: {detail} (< 1e-6 / < 5e-2), {elapsed:.1f} s (< 10 s)")


def test_4_nonpositive_map(tmp_path):
    out, summary = scenarios.run_scenario(scenarios.template("nonpositive"), base_dir=tmp_path,
                                          output_dir=tmp_path / "np")
    cfg = json.loads((out / "manifest.json").read_text())["scenario"]["parameters"]
    scaled = io.read_trace(out / "scaled_trace.csv")
    t = scaled.d / summary["path_per_time"]
    inside = t <= cfg["window"] + 1e-9
    absD = np.abs(scaled.kappa[inside])
    high = absD >= 1.1
    fraction = high.mean()
    min_eig = min(choi_eigenvalues(complex(v))[0] for v in scaled.kappa[inside][high]) if high.any() else 0.0
    ok = absD.max() >= 1.1 and fraction >= 0.10 and min_eig < -0.01
    assert report(4, ok, f"max|D| = {absD.max():.3f}, |D| >= 1.1 on {fraction:.1%} of the window (>= 10%), "
                         f"min Choi eigenvalue there = {min_eig:.3f} (< -0.01)")


def test_5_ohmic_closed_form():
    start = time.perf_counter()
    worst = 0.0
    for alpha in (0.1, 1.0, 2.0):
        for wc in (0.5, 1.0, 2.0):
            t = np.linspace(0, 20 / wc, 401)
            got = spectral_decoherence(SpectralDensitySpec.ohmic(alpha, wc), t).kappa.real
            worst = max(worst, np.max(np.abs(got / ohmic_closed_form(alpha, wc, t) - 1)))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-6 and elapsed < 5
    assert report(5, ok, f"max relative error = {worst:.2e} (< 1e-6) over alpha in {{0.1, 1, 2}}, "
                         f"wc*t in [0, 20], {elapsed:.2f} s (< 5 s)")


def _pipeline_points(tmp_path, name):
    cfg = scenarios.template(name)
    cfg["parameters"]["measure"] = None
    out, summary = scenarios.run_scenario(cfg, base_dir=tmp_path, output_dir=tmp_path / name)
    trace = io.read_trace(out / "trace.csv")
    window = cfg["parameters"]["window"] * summary["path_per_time"]
    idx = np.flatnonzero(trace.d <= window * (1 + 1e-12))
    pick = np.unique(np.rint(np.linspace(0, idx.size - 1, 81)).astype(int))
    return DecoherenceTrace(trace.d[idx[pick]], trace.kappa[idx[pick]])


def test_6_measurement_fidelity(tmp_path):
    start = time.perf_counter()
    points = _pipeline_points(tmp_path, "fig2a")
    coverage, s10, s40 = [], [], []
    for seed in range(100):
        short = measure_trace(points, CountingConfig(rate=3000, duration_s=10, seed=seed))
        long = measure_trace(points, CountingConfig(rate=3000, duration_s=40, seed=seed))
        coverage.append(short.within(3.0).mean())
        s10.append(short.sigma)
        s40.append(long.sigma)
    ratio = float(np.mean(s40) / np.mean(s10))
    cov = float(np.mean(coverage))
    elapsed = time.perf_counter() - start
    ok = cov >= 0.95 and 0.4 <= ratio <= 0.6 and elapsed < 120
    assert report(6, ok, f"3-sigma coverage {cov:.2%} (>= 95%) over 100 seeds x 81 points of the "
                         f"lambda=0.01 pipeline trace; sigma(4x duration)/sigma = {ratio:.3f} (0.5 +- 20%), "
                         f"{elapsed:.1f} s (< 120 s)")


def test_7_determinism(tmp_path):
    mismatched = []
    checked = 0
    for name in scenarios.TEMPLATES:
        first, _ = scenarios.run_scenario(scenarios.template(name), base_dir=tmp_path,
                                          output_dir=tmp_path / name / "first")
        config, base = scenarios.load_config(first / "manifest.json")
        second, _ = scenarios.run_scenario(config, base_dir=base, output_dir=tmp_path / name / "second")
        for csv in sorted(first.glob("*.csv")):
            checked += 1
            if csv.read_bytes() != (second / csv.name).read_bytes():
                mismatched.append(f"{name}/{csv.name}")
    ok = not mismatched and checked > 0
    assert report(7, ok, f"{checked} CSVs across {len(scenarios.TEMPLATES)} scenarios re-run from their "
                         f"manifests, {len(mismatched)} differ {mismatched}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
