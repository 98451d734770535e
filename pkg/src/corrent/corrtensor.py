"""Extended correlation tensors in the Pauli basis, metric scalar products and
local-frame rotations.

An n-qubit state maps to 4**n real components T_mu with mu = (mu_1 .. mu_n),
mu_k in {0, 1, 2, 3} meaning identity, x, y, z on qubit k. Components are
stored flat with base-4 linearization, mu_1 most significant, so the flat
array reshaped to (4,)*n is indexed directly by the multi-index. Indices with
value in {1, 2, 3} are called Latin; the all-Latin sub-block transforms
covariantly under per-qubit rotations while index value 0 is inert.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotAStateError, NumericError
from .states import DensityMatrix, PSD_TOL

MAX_QUBITS = 8
IMAG_DISCARD_TOL = 1e-10
IMAG_ERROR_TOL = 1e-8
FRAME_TOL = 1e-10

PAULIS = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

_ROWS = "abcdefgh"
_COLS = "ijklmnop"
_OUTS = "ABCDEFGH"


@dataclass(frozen=True)
class ExtendedCorrelationTensor:
    """All 4**n Pauli expectation values of an n-qubit state, stored flat."""

    n_qubits: int
    components: np.ndarray

    @property
    def grid(self) -> np.ndarray:
        """View of the components shaped (4,)*n, indexed by the multi-index."""
        return self.components.reshape((4,) * self.n_qubits)

    def component(self, mu) -> float:
        """Single component for a multi-index like (1, 1, 3)."""
        return float(self.grid[tuple(mu)])

    def latin_block(self) -> np.ndarray:
        """The (3,)*n sub-block with every index in {1, 2, 3}."""
        return self.grid[(slice(1, 4),) * self.n_qubits]

    def validate(self):
        if self.components.shape != (4 ** self.n_qubits,):
            raise ValueError(
                f"component vector has shape {self.components.shape}, "
                f"expected ({4 ** self.n_qubits},)"
            )
        if abs(self.components[0] - 1.0) > 1e-12:
            raise ValueError(f"T_00..0 = {self.components[0]!r}, expected 1")
        hi = float(np.abs(self.components).max())
        if hi > 1.0 + 1e-10:
            raise ValueError(f"component magnitude {hi!r} exceeds 1")


@dataclass(frozen=True)
class DiagonalMetric:
    """Nonnegative weight per multi-index, defining a diagonal scalar product."""

    n_qubits: int
    weights: np.ndarray

    @property
    def grid(self) -> np.ndarray:
        return self.weights.reshape((4,) * self.n_qubits)

    def validate(self):
        if self.weights.shape != (4 ** self.n_qubits,):
            raise ValueError("weight vector length does not match qubit count")
        if float(self.weights.min()) < 0.0:
            raise ValueError("metric weights must be nonnegative")


@dataclass(frozen=True)
class LocalFrame:
    """One proper rotation per qubit, acting on the Latin indices."""

    rotations: tuple

    @property
    def n_qubits(self) -> int:
        return len(self.rotations)

    @classmethod
    def identity(cls, n: int) -> "LocalFrame":
        return cls(tuple(np.eye(3) for _ in range(n)))

    def after(self, first: "LocalFrame") -> "LocalFrame":
        """Frame equivalent to rotating by `first` and then by this frame."""
        if self.n_qubits != first.n_qubits:
            raise ValueError("frames act on different numbers of qubits")
        return LocalFrame(tuple(s @ f for s, f in zip(self.rotations, first.rotations)))

    def validate(self):
        for k, r in enumerate(self.rotations):
            if r.shape != (3, 3):
                raise ValueError(f"rotation {k + 1} is not 3x3")
            if np.abs(r.T @ r - np.eye(3)).max() > FRAME_TOL:
                raise ValueError(f"rotation {k + 1} is not orthogonal")
            if abs(np.linalg.det(r) - 1.0) > FRAME_TOL:
                raise ValueError(f"rotation {k + 1} has determinant != +1")


def _check_qubit_count(n: int):
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count {n} outside supported range 1..{MAX_QUBITS}")


def _forward_subscripts(n: int, batched: bool = False) -> str:
    pre = "z" if batched else ""
    rho = pre + _ROWS[:n] + _COLS[:n]
    paulis = ",".join(_OUTS[k] + _COLS[k] + _ROWS[k] for k in range(n))
    return f"{rho},{paulis}->{pre}{_OUTS[:n]}"


def _inverse_subscripts(n: int) -> str:
    paulis = ",".join(_OUTS[k] + _ROWS[k] + _COLS[k] for k in range(n))
    return f"{_OUTS[:n]},{paulis}->{_ROWS[:n]}{_COLS[:n]}"


def tensor_from_density(rho: DensityMatrix) -> ExtendedCorrelationTensor:
    """Expectation value of every n-fold Pauli product.

    Imaginary parts below 1e-10 are float noise and get discarded; anything
    above 1e-8 means the input was not Hermitian and raises NumericError.
    """
    n = rho.n_qubits
    _check_qubit_count(n)
    t = rho.entries.reshape((2,) * (2 * n))
    raw = np.einsum(_forward_subscripts(n), t, *([PAULIS] * n), optimize=True)
    worst = float(np.abs(raw.imag).max())
    if worst > IMAG_ERROR_TOL:
        raise NumericError(f"correlation values have imaginary part {worst!r}")
    return ExtendedCorrelationTensor(n, np.ascontiguousarray(raw.real).reshape(-1))


def density_from_tensor(T: ExtendedCorrelationTensor) -> DensityMatrix:
    """Reassemble the density matrix 2**-n * sum_mu T_mu sigma_mu1 x ... x sigma_mun."""
    n = T.n_qubits
    _check_qubit_count(n)
    if abs(T.components[0] - 1.0) > 1e-12:
        raise ValueError(f"T_00..0 = {T.components[0]!r}, expected 1")
    m = np.einsum(_inverse_subscripts(n), T.grid.astype(complex), *([PAULIS] * n), optimize=True)
    m = m.reshape(2 ** n, 2 ** n) / 2 ** n
    lo = float(np.linalg.eigvalsh(m).min())
    if lo < PSD_TOL:
        raise NotAStateError(
            f"tensor does not correspond to a physical state: min eigenvalue = {lo!r}"
        )
    return DensityMatrix(n, m)


def inner_product_g(
    X: ExtendedCorrelationTensor, Y: ExtendedCorrelationTensor, G: DiagonalMetric
) -> float:
    """Diagonal-metric scalar product sum_mu X_mu G_mu Y_mu."""
    if not X.n_qubits == Y.n_qubits == G.n_qubits:
        raise ValueError("tensor and metric qubit counts differ")
    return float(np.dot(X.components * G.weights, Y.components))


def g_norm_sq(T: ExtendedCorrelationTensor, G: DiagonalMetric) -> float:
    """Squared length of T under the metric G."""
    return inner_product_g(T, T, G)


_Q_TEMPLATE = np.zeros((4, 4))
_Q_TEMPLATE[0, 0] = 1.0


def _rotation_to_q(r: np.ndarray) -> np.ndarray:
    q = _Q_TEMPLATE.copy()
    q[1:, 1:] = r
    return q


def _apply_rotations(grid: np.ndarray, rotations, axes) -> np.ndarray:
    """Contract each listed axis with the 4x4 extension of its rotation. No checks."""
    out = grid
    nd = grid.ndim
    for r, ax in zip(rotations, axes):
        fwd = (ax,) + tuple(i for i in range(nd) if i != ax)
        moved = out.transpose(fwd)
        res = (_rotation_to_q(r) @ moved.reshape(4, -1)).reshape(moved.shape)
        back = tuple(range(1, ax + 1)) + (0,) + tuple(range(ax + 1, nd))
        out = res.transpose(back)
    return out


def rotate_local_frames(T: ExtendedCorrelationTensor, F: LocalFrame) -> ExtendedCorrelationTensor:
    """Rotate the Latin index of every qubit by its frame rotation.

    Index value 0 is untouched, so T_00..0 and every mixed index rotate only
    in their Latin slots.
    """
    n = T.n_qubits
    if F.n_qubits != n:
        raise ValueError(f"frame has {F.n_qubits} rotations, tensor has {n} qubits")
    F.validate()
    rotated = _apply_rotations(T.grid, F.rotations, range(n))
    return ExtendedCorrelationTensor(n, np.ascontiguousarray(rotated).reshape(-1))
