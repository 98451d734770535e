"""Brute-force maximization over pure product states.

Sampled maxima are lower bounds on the true optimum by construction. They are
used to validate the analytic criterion bounds from below and to derive
expected values in tests, never to certify entanglement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .corrtensor import (
    DiagonalMetric,
    ExtendedCorrelationTensor,
    _forward_subscripts,
    PAULIS,
)
from .partitions import Partition, enumerate_k_partitions
from .states import DensityMatrix, PureState

_CHUNK = 4096
_REFINE_CANDIDATES = 32
_REFINE_START = 0.25
_REFINE_SHRINK = 0.9


@dataclass(frozen=True)
class ProductSampler:
    """Sampling budget and seed for the product-state search.

    `partition` is carried for provenance; operations that take an explicit
    partition argument use that one.
    """

    partition: Optional[Partition] = None
    seed: int = 0
    samples: int = 100_000
    refine_steps: int = 200

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.refine_steps < 0:
            raise ValueError("refine_steps must be >= 0")


def _block_rng(seed: int, block_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(block_index)]))


def _draw_block_states(rng: np.random.Generator, dim: int, count: int) -> np.ndarray:
    """`count` uniform pure states of dimension `dim`, one per row.

    Real and imaginary parts are drawn interleaved so that the first k rows
    are identical no matter how many rows are requested in total.
    """
    raw = rng.standard_normal((count, dim, 2))
    psis = raw[..., 0] + 1j * raw[..., 1]
    psis /= np.linalg.norm(psis, axis=1, keepdims=True)
    return psis


def _block_tensors(psis: np.ndarray, m: int) -> np.ndarray:
    """Correlation tensors of a batch of m-qubit pure states, flattened to 4**m."""
    b = psis.shape[0]
    rho = psis[:, :, None] * psis.conj()[:, None, :]
    t = rho.reshape((b,) + (2,) * (2 * m))
    raw = np.einsum(_forward_subscripts(m, batched=True), t, *([PAULIS] * m), optimize=True)
    return raw.real.reshape(b, 4 ** m)


def _grouped_weight(W: np.ndarray, partition: Partition) -> np.ndarray:
    """Weighted target grid with axes permuted and merged per partition block."""
    order = [q - 1 for block in partition.blocks for q in block]
    return np.transpose(W, order).reshape([4 ** len(b) for b in partition.blocks])


def _overlap_batch(Wg: np.ndarray, block_tensors: list[np.ndarray]) -> np.ndarray:
    letters = "abcd"[: len(block_tensors)]
    sub = letters + "," + ",".join("z" + c for c in letters) + "->z"
    return np.einsum(sub, Wg, *block_tensors, optimize=True)


def _assemble_products(blocks_psis: list[np.ndarray], partition: Partition) -> np.ndarray:
    """Interleave per-block states back into full n-qubit state vectors."""
    full = blocks_psis[0]
    for p in blocks_psis[1:]:
        full = np.einsum("za,zb->zab", full, p).reshape(full.shape[0], -1)
    n = partition.n_qubits
    order = [q for block in partition.blocks for q in block]
    src_axis = {label: i for i, label in enumerate(order)}
    perm = [0] + [1 + src_axis[label] for label in range(1, n + 1)]
    return full.reshape((full.shape[0],) + (2,) * n).transpose(perm).reshape(full.shape[0], -1)


def sample_pure_product(partition: Partition, seed: int) -> PureState:
    """One uniformly random pure state per block, combined on the full register."""
    partition.validate()
    blocks_psis = [
        _draw_block_states(_block_rng(seed, j), 2 ** len(block), 1)
        for j, block in enumerate(partition.blocks)
    ]
    amps = _assemble_products(blocks_psis, partition)[0]
    return PureState(partition.n_qubits, amps)


def _search_maximum(partition, sampler, evaluate):
    """Chunked sampled maximum plus local refinement around the best sample.

    `evaluate(blocks_psis) -> (B,) array` scores a batch of product states
    given per-block state batches. Returns the best value found.
    """
    dims = [2 ** len(b) for b in partition.blocks]
    rngs = [_block_rng(sampler.seed, j) for j in range(len(dims))]

    best = -math.inf
    best_blocks = None
    remaining = sampler.samples
    while remaining > 0:
        count = min(remaining, _CHUNK)
        batch = [_draw_block_states(rng, d, count) for rng, d in zip(rngs, dims)]
        vals = evaluate(batch)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best = float(vals[i])
            best_blocks = [b[i].copy() for b in batch]
        remaining -= count

    if best_blocks is None or sampler.refine_steps == 0:
        return best
    refine_rng = np.random.default_rng(np.random.SeedSequence([int(sampler.seed), 0x5EED]))
    eps = _REFINE_START
    current = best_blocks
    for _ in range(sampler.refine_steps):
        cand = []
        for blk, d in zip(current, dims):
            noise = refine_rng.standard_normal((_REFINE_CANDIDATES, d, 2))
            moved = blk[None, :] + eps * (noise[..., 0] + 1j * noise[..., 1])
            moved /= np.linalg.norm(moved, axis=1, keepdims=True)
            cand.append(moved)
        vals = evaluate(cand)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best = float(vals[i])
            current = [c[i].copy() for c in cand]
        else:
            eps *= _REFINE_SHRINK
    return best


def max_product_overlap(
    T: ExtendedCorrelationTensor,
    G: DiagonalMetric,
    partition: Partition,
    sampler: ProductSampler,
) -> float:
    """Sampled maximum of (tensor(psi), T)_G over pure products of the partition."""
    if T.n_qubits != G.n_qubits or T.n_qubits != partition.n_qubits:
        raise ValueError("tensor, metric and partition qubit counts differ")
    partition.validate()
    W = (G.weights * T.components).reshape((4,) * T.n_qubits)
    Wg = _grouped_weight(W, partition)
    sizes = [len(b) for b in partition.blocks]

    def evaluate(blocks_psis):
        tensors = [_block_tensors(p, m) for p, m in zip(blocks_psis, sizes)]
        return _overlap_batch(Wg, tensors)

    return _search_maximum(partition, sampler, evaluate)


def max_biprod_fidelity(target: DensityMatrix, sampler: ProductSampler) -> float:
    """Sampled maximum of <psi|target|psi> over pure biproducts of every bipartition."""
    n = target.n_qubits
    rho = target.entries
    best = -math.inf
    for partition in enumerate_k_partitions(n, 2):

        def evaluate(blocks_psis, partition=partition):
            psis = _assemble_products(blocks_psis, partition)
            return np.einsum("zi,ij,zj->z", psis.conj(), rho, psis, optimize=True).real

        best = max(best, _search_maximum(partition, sampler, evaluate))
    return best


@dataclass(frozen=True)
class SchmidtReport:
    """Outcome of the generalized-Schmidt-form property checks."""

    tol: float
    zero_pattern_pass: bool
    zero_pattern_worst: float
    sign_pass: bool
    sign_worst: float
    dominance_pass: bool
    dominance_worst: float
    single_nonzero_held: bool

    def to_dict(self):
        return {
            "tol": self.tol,
            "zero_pattern": {"pass": self.zero_pattern_pass, "worst": self.zero_pattern_worst},
            "sign": {"pass": self.sign_pass, "worst": self.sign_worst},
            "dominance": {"pass": self.dominance_pass, "worst": self.dominance_worst},
            "single_nonzero_held": self.single_nonzero_held,
        }


def verify_schmidt_properties(T: ExtendedCorrelationTensor, tol: float) -> SchmidtReport:
    """Check the zero-pattern, sign and dominance properties of a candidate normal form.

    Zero pattern: components with one index j and the remaining indices equal
    to some i < j vanish. Sign: components with at least two indices equal to
    3 are nonnegative. Dominance: |T_jjj| bounds every component whose indices
    all reach j. The strictly-one-nonzero observation about the (1,1,i) and
    (2,2,i) groups is recorded but not asserted.
    """
    if T.n_qubits != 3:
        raise ValueError(f"property checks defined for 3 qubits, got {T.n_qubits}")
    L = T.latin_block()

    worst_zero = 0.0
    for j in range(2, 4):
        for i in range(1, j):
            for pos in range(3):
                mu = [i, i, i]
                mu[pos] = j
                worst_zero = max(worst_zero, abs(float(L[mu[0] - 1, mu[1] - 1, mu[2] - 1])))

    worst_sign = 0.0
    for a in range(1, 4):
        for pos in range(3):
            mu = [3, 3, 3]
            mu[pos] = a
            worst_sign = min(worst_sign, float(L[mu[0] - 1, mu[1] - 1, mu[2] - 1]))

    worst_dom = -math.inf
    for j in range(1, 4):
        corner = abs(float(L[j - 1, j - 1, j - 1]))
        tail = np.abs(L[j - 1 :, j - 1 :, j - 1 :]).max()
        worst_dom = max(worst_dom, float(tail) - corner)

    groups = [
        [L[0, 0, 0], L[0, 0, 1], L[0, 0, 2]],
        [L[1, 1, 0], L[1, 1, 1], L[1, 1, 2]],
    ]
    single = all(sum(1 for v in g if abs(float(v)) > tol) <= 1 for g in groups)

    return SchmidtReport(
        tol=tol,
        zero_pattern_pass=worst_zero <= tol,
        zero_pattern_worst=worst_zero,
        sign_pass=worst_sign >= -tol,
        sign_worst=worst_sign,
        dominance_pass=worst_dom <= tol,
        dominance_worst=worst_dom,
        single_nonzero_held=single,
    )
