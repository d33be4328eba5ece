"""Qubit states and the pure-dephasing channel.

Basis labels are fixed as H = |0>, V = |1>. The channel keeps populations and
multiplies the coherences::

    rho01 -> conj(d) * rho01,    rho10 -> d * rho10

Choi matrices use the unnormalized convention ``C = sum_ij |i><j| (x) L(|i><j|)``
(trace 2 for a trace-preserving qubit channel).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError

STATE_TOL = 1e-9
POSITIVITY_TOL = 1e-9


@dataclass(frozen=True)
class QubitState:
    rho00: complex
    rho01: complex
    rho10: complex
    rho11: complex

    @classmethod
    def from_matrix(cls, rho) -> "QubitState":
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (2, 2):
            raise InvalidStateError(f"expected a 2x2 matrix, got shape {rho.shape}")
        return cls(complex(rho[0, 0]), complex(rho[0, 1]), complex(rho[1, 0]), complex(rho[1, 1]))

    @classmethod
    def from_bloch(cls, r) -> "QubitState":
        x, y, z = (float(c) for c in r)
        return cls(0.5 * (1 + z), 0.5 * (x - 1j * y), 0.5 * (x + 1j * y), 0.5 * (1 - z))

    @classmethod
    def pure(cls, c_h: complex, c_v: complex) -> "QubitState":
        """|psi> = c_h |H> + c_v |V> (normalized here)."""
        vec = np.array([c_h, c_v], dtype=complex)
        vec /= np.linalg.norm(vec)
        return cls.from_matrix(np.outer(vec, vec.conj()))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.rho00, self.rho01], [self.rho10, self.rho11]], dtype=complex)

    @property
    def bloch(self) -> np.ndarray:
        return np.array([2 * self.rho10.real, 2 * self.rho10.imag, (self.rho00 - self.rho11).real])

    def check(self, tol: float = STATE_TOL) -> None:
        """Raise :class:`InvalidStateError` unless Hermitian with unit trace."""
        if abs(self.rho10 - self.rho01.conjugate()) > tol:
            raise InvalidStateError("state is not Hermitian")
        if abs(self.rho00.imag) > tol or abs(self.rho11.imag) > tol:
            raise InvalidStateError("diagonal entries must be real")
        if abs(self.rho00 + self.rho11 - 1) > tol:
            raise InvalidStateError(f"trace is {self.rho00 + self.rho11}, not 1")

    def is_physical(self, tol: float = 1e-12) -> bool:
        try:
            self.check(max(tol, 1e-12))
        except InvalidStateError:
            return False
        return (self.rho00.real * self.rho11.real - abs(self.rho01) ** 2) >= -tol \
            and self.rho00.real >= -tol and self.rho11.real >= -tol


def plus_minus_pair() -> tuple[QubitState, QubitState]:
    """The +-45 degree inputs C_H = 1/sqrt2, C_V = +-1/sqrt2."""
    return QubitState.pure(1, 1), QubitState.pure(1, -1)


@dataclass(frozen=True)
class DephasingChannel:
    """Dephasing channel with complex decoherence value ``d``; |d| > 1 is allowed."""

    d: complex

    @property
    def magnitude(self) -> float:
        return abs(self.d)

    @property
    def phase(self) -> float:
        return float(np.angle(self.d))


def _as_channel(ch) -> DephasingChannel:
    return ch if isinstance(ch, DephasingChannel) else DephasingChannel(complex(ch))


def apply_channel(state: QubitState, ch: DephasingChannel | complex) -> QubitState:
    ch = _as_channel(ch)
    state.check()
    rho10 = ch.d * state.rho10
    return QubitState(state.rho00, rho10.conjugate(), rho10, state.rho11)


def choi_matrix(ch: DephasingChannel | complex) -> np.ndarray:
    """Unnormalized 4x4 Choi matrix built by acting on each ``|i><j|``."""
    ch = _as_channel(ch)
    choi = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            unit = np.zeros((2, 2), dtype=complex)
            unit[i, j] = 1.0
            if i == j:
                image = unit
            elif i == 0:
                image = np.conj(ch.d) * unit
            else:
                image = ch.d * unit
            choi += np.kron(unit, image)
    return choi


def choi_eigenvalues(ch: DephasingChannel | complex) -> tuple[float, float, float, float]:
    """Ascending Choi eigenvalues; analytically ``{0, 0, 1 - |d|, 1 + |d|}``."""
    vals = np.linalg.eigvalsh(choi_matrix(ch))
    # the two structural zeros come back as +-1e-16; snap them so the sign is meaningful
    scale = 8 * np.finfo(float).eps * max(1.0, float(np.abs(vals).max()))
    vals = np.where(np.abs(vals) <= scale, 0.0, vals)
    return tuple(float(v) for v in np.sort(vals))


def is_positive_map(ch: DephasingChannel | complex, tol: float = POSITIVITY_TOL) -> bool:
    """CP test; for this family CP and positivity both reduce to |d| <= 1."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return _as_channel(ch).magnitude <= 1 + tol


def trace_distance(a: QubitState, b: QubitState) -> float:
    """``0.5 * tr|a - b|`` (half the Bloch-vector distance for qubits)."""
    diff = a.matrix - b.matrix
    return 0.5 * float(np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))).sum())
