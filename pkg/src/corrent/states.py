"""Qubit state families: GHZ states, the three-qubit W state, products and noisy mixtures.

Conventions used everywhere in this package: qubit 1 is the most significant
bit of the computational basis index, and constructors fix the global phase so
that the first nonzero amplitude is real and nonnegative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
# Noise mixtures assembled in floating point can dip infinitesimally negative.
PSD_TOL = -1e-10
NORM_TOL = 1e-12


@dataclass(frozen=True)
class PureState:
    """State vector of an n-qubit register (length 2**n, unit norm)."""

    n_qubits: int
    amplitudes: np.ndarray

    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def validate(self):
        if self.amplitudes.shape != (2 ** self.n_qubits,):
            raise ValueError(
                f"amplitude vector has length {self.amplitudes.shape}, "
                f"expected {2 ** self.n_qubits}"
            )
        if abs(self.norm_sq() - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: |psi|^2 = {self.norm_sq()!r}")


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed state of an n-qubit register as a 2**n x 2**n complex matrix."""

    n_qubits: int
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits

    def validate(self):
        """Raise ValueError naming the worst violated invariant, if any."""
        m = self.entries
        if m.shape != (self.dim, self.dim):
            raise ValueError(f"matrix shape {m.shape} does not match {self.n_qubits} qubits")
        herm = np.abs(m - m.conj().T).max()
        if herm > HERMITICITY_TOL:
            raise ValueError(f"matrix not Hermitian: max |rho - rho^dag| = {herm!r}")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace = {tr!r}, expected 1")
        lo = float(np.linalg.eigvalsh(m).min())
        if lo < PSD_TOL:
            raise ValueError(f"matrix not positive semidefinite: min eigenvalue = {lo!r}")

    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)


def make_ghz(n: int) -> PureState:
    """Equal superposition of the all-zeros and all-ones basis states."""
    if n < 2:
        raise ValueError(f"need at least 2 qubits, got {n}")
    amp = np.zeros(2 ** n, dtype=complex)
    amp[0] = amp[-1] = 1.0 / math.sqrt(2.0)
    return PureState(n, amp)


def make_generalized_ghz(n: int, alpha: float) -> PureState:
    """cos(alpha) |0...0> + sin(alpha) |1...1> with alpha in [0, pi/4]."""
    if n < 2:
        raise ValueError(f"need at least 2 qubits, got {n}")
    if not 0.0 <= alpha <= math.pi / 4 + 1e-15:
        raise ValueError(f"alpha = {alpha!r} outside [0, pi/4]")
    amp = np.zeros(2 ** n, dtype=complex)
    amp[0] = math.cos(alpha)
    amp[-1] = math.sin(alpha)
    return PureState(n, amp)


def make_w3() -> PureState:
    """Three-qubit W state (|100> + |010> + |001>) / sqrt(3)."""
    amp = np.zeros(8, dtype=complex)
    amp[[1, 2, 4]] = 1.0 / math.sqrt(3.0)
    return PureState(3, amp)


def density_from_pure(psi: PureState) -> DensityMatrix:
    """Rank-1 projector |psi><psi|."""
    if abs(psi.norm_sq() - 1.0) > NORM_TOL:
        raise ValueError(f"input not normalized: |psi|^2 = {psi.norm_sq()!r}")
    return DensityMatrix(psi.n_qubits, np.outer(psi.amplitudes, psi.amplitudes.conj()))


def mix_white_noise(rho: DensityMatrix, v: float) -> DensityMatrix:
    """Visibility-v mixture v*rho + (1-v)*identity/2**n."""
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"visibility v = {v!r} outside [0, 1]")
    dim = rho.dim
    mixed = v * rho.entries + (1.0 - v) / dim * np.eye(dim, dtype=complex)
    return DensityMatrix(rho.n_qubits, mixed)


def tensor_product(parts: list[DensityMatrix]) -> DensityMatrix:
    """Kronecker product of density matrices, in the given qubit order."""
    if not parts:
        raise ValueError("empty list of factors")
    out = parts[0].entries
    n = parts[0].n_qubits
    for p in parts[1:]:
        out = np.kron(out, p.entries)
        n += p.n_qubits
    return DensityMatrix(n, out)
