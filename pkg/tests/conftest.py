import itertools
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from corrent.states import DensityMatrix, PureState  # noqa: E402

PAULI = [
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]


def random_pure_state(n, rng):
    z = rng.standard_normal(2 ** n) + 1j * rng.standard_normal(2 ** n)
    return PureState(n, z / np.linalg.norm(z))


def random_mixed_state(n, rng, rank=None):
    d = 2 ** n
    rank = rank or d
    a = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = a @ a.conj().T
    return DensityMatrix(n, m / np.trace(m))


def product_pure_state(blocks, rng):
    """Random pure product state over the given blocks of 1-based qubit labels."""
    n = sum(len(b) for b in blocks)
    order = [q for b in blocks for q in b]
    amps = None
    for b in blocks:
        z = rng.standard_normal(2 ** len(b)) + 1j * rng.standard_normal(2 ** len(b))
        z /= np.linalg.norm(z)
        amps = z if amps is None else np.kron(amps, z)
    perm = [order.index(q + 1) for q in range(n)]
    return PureState(n, amps.reshape((2,) * n).transpose(perm).reshape(-1))


def brute_force_tensor(rho: DensityMatrix) -> np.ndarray:
    """Independent reference: loop over all Pauli strings with explicit krons."""
    n = rho.n_qubits
    out = np.empty((4,) * n)
    for mu in itertools.product(range(4), repeat=n):
        op = PAULI[mu[0]]
        for k in mu[1:]:
            op = np.kron(op, PAULI[k])
        out[mu] = np.trace(rho.entries @ op).real
    return out


def partial_trace_last(entries: np.ndarray, n: int) -> np.ndarray:
    """Trace out the last qubit of an n-qubit density matrix."""
    t = entries.reshape(2 ** (n - 1), 2, 2 ** (n - 1), 2)
    return np.einsum("aibi->ab", t)


ACCEPTANCE_LINES = []


def record_acceptance(name, ok, detail=""):
    """Collect a pass/fail line; printed in the terminal summary at session end."""
    line = f"{name}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
