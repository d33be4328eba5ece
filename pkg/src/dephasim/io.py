"""CSV readers and writers for distributions, traces, targets and measurements.

Floats are written with ``%.17g`` so files round-trip exactly and identical
inputs always produce identical bytes.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .designer import DesignTarget
from .freq import ComplexFreqDistribution, DecoherenceTrace
from .measurement import MeasurementRun

DIST_HEADER = ("u", "p", "theta")
TRACE_HEADER = ("d", "re_kappa", "im_kappa", "abs_kappa")
TARGET_HEADER = ("d", "re", "im")
MEASUREMENT_HEADER = ("d", "abs_kappa_true", "abs_kappa_est", "sigma")
TABLE_HEADER = ("omega", "J")


def _fmt(x) -> str:
    return "%.17g" % x


def _write(path, header, columns) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([_fmt(v) for v in row])


def _read(path, header) -> dict[str, np.ndarray]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        got = next(reader, None)
        if got is None or tuple(h.strip() for h in got[:len(header)]) != tuple(header):
            raise ValueError(f"{path}: expected header {','.join(header)}, got {got}")
        rows = [r for r in reader if r]
    data = np.array(rows, dtype=float).reshape(-1, len(got)) if rows else np.empty((0, len(got)))
    return {name: data[:, i] for i, name in enumerate(header)}


def write_distribution(path, dist: ComplexFreqDistribution) -> None:
    _write(path, DIST_HEADER, (dist.u, dist.p, dist.theta))


def read_distribution(path) -> ComplexFreqDistribution:
    cols = _read(path, DIST_HEADER)
    return ComplexFreqDistribution(cols["u"], cols["p"], cols["theta"])


def write_trace(path, trace: DecoherenceTrace) -> None:
    k = trace.kappa
    _write(path, TRACE_HEADER, (trace.d, k.real, k.imag, np.abs(k)))


def read_trace(path) -> DecoherenceTrace:
    cols = _read(path, TRACE_HEADER)
    return DecoherenceTrace(cols["d"], cols["re_kappa"] + 1j * cols["im_kappa"])


def write_target(path, target: DesignTarget) -> None:
    _write(path, TARGET_HEADER, (target.d, target.target.real, target.target.imag))


def read_target(path) -> DesignTarget:
    cols = _read(path, TARGET_HEADER)
    return DesignTarget(cols["d"], cols["re"] + 1j * cols["im"])


def write_measurement(path, run: MeasurementRun) -> None:
    _write(path, MEASUREMENT_HEADER, (run.d, run.abs_kappa_true, run.abs_kappa_est, run.sigma))


def read_measurement(path) -> dict[str, np.ndarray]:
    return _read(path, MEASUREMENT_HEADER)


def read_spectral_table(path) -> tuple[np.ndarray, np.ndarray]:
    cols = _read(path, TABLE_HEADER)
    return cols["omega"], cols["J"]


def write_spectral_table(path, omega, J) -> None:
    _write(path, TABLE_HEADER, (omega, J))
