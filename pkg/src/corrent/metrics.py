"""The named diagonal metrics used by the detection criteria.

All weights are exact 0/1 values stored as floats.
"""

from __future__ import annotations

import numpy as np

from .corrtensor import DiagonalMetric, tensor_from_density, _check_qubit_count
from .states import density_from_pure, make_ghz


def standard_full_correlation_metric(n: int) -> DiagonalMetric:
    """Weight 1 on every all-Latin multi-index, 0 wherever an index is 0."""
    _check_qubit_count(n)
    if n < 2:
        raise ValueError(f"need at least 2 qubits, got {n}")
    mask = np.array([0.0, 1.0, 1.0, 1.0])
    w = mask
    for _ in range(n - 1):
        w = np.multiply.outer(w, mask)
    return DiagonalMetric(n, w.reshape(-1))


def modified_metric_3q(pair_assignment) -> DiagonalMetric:
    """Standard 3-qubit metric minus the three indices with z, z on the given pair.

    `pair_assignment` names two of the qubits 1..3; the remaining qubit keeps
    its free Latin index.
    """
    pair = tuple(sorted(set(pair_assignment)))
    if len(pair) != 2 or not set(pair) < {1, 2, 3}:
        raise ValueError(f"pair assignment {pair_assignment!r} must pick 2 of qubits 1..3")
    w = standard_full_correlation_metric(3).grid.copy()
    idx = [slice(1, 4)] * 3
    for q in pair:
        idx[q - 1] = 3
    w[tuple(idx)] = 0.0
    return DiagonalMetric(3, w.reshape(-1))


def ghz_metric(n: int) -> DiagonalMetric:
    """Weight 1 exactly where the n-qubit GHZ tensor is +-1, except the all-0 index."""
    _check_qubit_count(n)
    if n < 2:
        raise ValueError(f"need at least 2 qubits, got {n}")
    t = tensor_from_density(density_from_pure(make_ghz(n)))
    w = (np.abs(t.components) > 0.5).astype(float)
    w[0] = 0.0
    return DiagonalMetric(n, w)


_GHZ_XY_INDICES_4Q = [
    (1, 1, 1, 1),
    (1, 1, 2, 2),
    (1, 2, 2, 1),
    (2, 2, 1, 1),
    (1, 2, 1, 2),
    (2, 1, 2, 1),
    (2, 1, 1, 2),
    (2, 2, 2, 2),
]


def ghz_xy_metric_4q() -> DiagonalMetric:
    """Four-qubit metric supported on the eight x/y index patterns with even y count."""
    w = np.zeros((4,) * 4)
    for mu in _GHZ_XY_INDICES_4Q:
        w[mu] = 1.0
    return DiagonalMetric(4, w.reshape(-1))
