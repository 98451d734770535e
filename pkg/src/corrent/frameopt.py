"""Deterministic multistart maximization of tensor objectives over per-qubit rotations.

Each restart draws one random rotation per selected qubit (uniform over SO(3)
via normalized quaternions), then runs a derivative-free coordinate ascent in
axis-angle steps: probe +-step about each coordinate axis of each selected
qubit, accept strict improvements, halve the step after a sweep with no
accepted move, stop below the convergence tolerance. Restart i is seeded with
base_seed + i and results merge by maximum with the lowest restart index
winning ties, so the outcome is independent of evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corrtensor import ExtendedCorrelationTensor, LocalFrame, _apply_rotations
from .errors import NumericError

_INITIAL_STEP = 0.3
_STEP_SHRINK = 0.5
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 64
    max_iterations: int = 400
    convergence_tol: float = 1e-9
    seed: int = 42

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1:
            raise ValueError("restarts and max_iterations must be positive")
        if not 0.0 < self.convergence_tol < 1.0:
            raise ValueError(f"convergence_tol = {self.convergence_tol!r} outside (0, 1)")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")


@dataclass(frozen=True)
class OptResult:
    value: float
    frame: LocalFrame
    restart_index: int
    iterations: int


def _axis_rotation(axis: int, angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    r = np.eye(3)
    i, j = [(1, 2), (2, 0), (0, 1)][axis]
    r[i, i] = c
    r[j, j] = c
    r[i, j] = -s
    r[j, i] = s
    return r


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform SO(3) sample from a normalized Gaussian quaternion."""
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ]
    )


def max_abs_latin_component(t: ExtendedCorrelationTensor) -> float:
    """Largest magnitude among the all-Latin components."""
    return float(np.abs(t.latin_block()).max())


def _ascend(grid, n, objective, axes, rots, cfg, restart_index):
    def evaluate(g):
        v = float(objective(ExtendedCorrelationTensor(n, g.reshape(-1))))
        if not math.isfinite(v):
            raise NumericError(f"objective returned {v!r} in restart {restart_index}")
        return v

    value = evaluate(_apply_rotations(grid, [rots[a] for a in axes], axes))
    step = _INITIAL_STEP
    iterations = 0
    while iterations < cfg.max_iterations and step >= cfg.convergence_tol:
        improved = False
        for ax in axes:
            others = [a for a in axes if a != ax]
            partial = _apply_rotations(grid, [rots[a] for a in others], others)
            for gen in range(3):
                for sign in (1.0, -1.0):
                    trial_rot = _axis_rotation(gen, sign * step) @ rots[ax]
                    v = evaluate(_apply_rotations(partial, [trial_rot], [ax]))
                    if v > value:
                        value = v
                        rots[ax] = trial_rot
                        improved = True
        iterations += 1
        if not improved:
            step *= _STEP_SHRINK
    return value, rots, iterations


def maximize_over_frames(
    T: ExtendedCorrelationTensor, objective, subset, cfg: OptimizerConfig
) -> OptResult:
    """Best objective value over per-qubit rotations of the given qubit subset.

    Parameters
    ----------
    T : ExtendedCorrelationTensor
        Input tensor; never mutated.
    objective : callable
        Pure function from a rotated tensor to a float.
    subset : iterable of int
        Qubit labels (1-based) whose frames are optimized; the rest keep
        identity rotations.
    cfg : OptimizerConfig
        Restart count, iteration budget, convergence tolerance and seed.
    """
    n = T.n_qubits
    labels = sorted(set(subset))
    if labels and (labels[0] < 1 or labels[-1] > n):
        raise ValueError(f"subset {labels} outside qubit labels 1..{n}")
    axes = [q - 1 for q in labels]
    if not axes:
        v = float(objective(T))
        if not math.isfinite(v):
            raise NumericError(f"objective returned {v!r} on the unrotated tensor")
        return OptResult(v, LocalFrame.identity(n), 0, 0)

    grid = T.grid
    best = None
    for i in range(cfg.restarts):
        rng = np.random.default_rng((cfg.seed + i) % 2 ** 64)
        rots = {ax: random_rotation(rng) for ax in axes}
        value, rots, iters = _ascend(grid, n, objective, axes, rots, cfg, i)
        if best is None or value > best.value + _TIE_TOL:
            rotations = tuple(rots.get(ax, np.eye(3)) for ax in range(n))
            best = OptResult(value, LocalFrame(rotations), i, iters)
    return best


def t_max(T: ExtendedCorrelationTensor, cfg: OptimizerConfig) -> float:
    """Largest tensor element magnitude reachable by local rotations."""
    return abs(maximize_over_frames(T, max_abs_latin_component, range(1, T.n_qubits + 1), cfg).value)


def _tri_contract(B, vecs, skip):
    """Contract the order-3 block B with the vectors on every axis except `skip`."""
    if skip == 0:
        return np.einsum("abc,b,c->a", B, vecs[1], vecs[2])
    if skip == 1:
        return np.einsum("abc,a,c->b", B, vecs[0], vecs[2])
    return np.einsum("abc,a,b->c", B, vecs[0], vecs[1])


def _hopm(B, rng, max_iters=2000, tol=1e-13):
    """Alternating rank-1 ascent on a 3x3x3 block: returns (value, unit vectors).

    Stops when the axis vectors stop moving; the stationarity residual, which
    controls the zero pattern of the normal form, shrinks with the movement.
    """
    us = []
    for _ in range(3):
        u = rng.standard_normal(3)
        us.append(u / np.linalg.norm(u))
    for _ in range(max_iters):
        moved = 0.0
        for k in range(3):
            m = _tri_contract(B, us, k)
            nm = float(np.linalg.norm(m))
            if nm > 1e-300:
                new = m / nm
                moved = max(moved, float(np.abs(new - us[k]).max()))
                us[k] = new
        if moved < tol:
            break
    val = float(np.einsum("abc,a,b,c", B, *us))
    return val, us


def _complete_rotation(u: np.ndarray) -> np.ndarray:
    """Proper rotation whose first row is u, completed deterministically."""
    k = int(np.argmin(np.abs(u)))
    e = np.zeros(3)
    e[k] = 1.0
    v = e - np.dot(e, u) * u
    v /= np.linalg.norm(v)
    return np.array([u, v, np.cross(u, v)])


def _so2_polish(latin, rng, n_starts=8, max_iters=2000, tol=1e-13):
    """Maximize the (2,2,2) component over per-qubit rotations about axis 1.

    Returns the per-qubit (cos, sin) pairs of the optimal in-plane rotations.
    Movement-based stopping, as in the first stage.
    """
    S = latin[1:, 1:, 1:]
    best_val = -math.inf
    best_ws = [np.array([1.0, 0.0])] * 3
    for s in range(n_starts):
        if s == 0:
            ws = [np.array([1.0, 0.0]) for _ in range(3)]
        else:
            ws = []
            for _ in range(3):
                phi = rng.uniform(0.0, 2.0 * math.pi)
                ws.append(np.array([math.cos(phi), math.sin(phi)]))
        for _ in range(max_iters):
            moved = 0.0
            for k in range(3):
                c = _tri_contract(S, ws, k)
                nm = float(np.linalg.norm(c))
                if nm > 1e-300:
                    new = c / nm
                    moved = max(moved, float(np.abs(new - ws[k]).max()))
                    ws[k] = new
            if moved < tol:
                break
        val = float(np.einsum("abc,a,b,c", S, *ws))
        if val > best_val + _TIE_TOL:
            best_val = val
            best_ws = [w.copy() for w in ws]
    return best_ws


def schmidt_normal_form(T: ExtendedCorrelationTensor, cfg: OptimizerConfig):
    """Rotate a 3-qubit tensor into its generalized Schmidt frame.

    Stage one maximizes the (1,1,1) component by alternating exact per-qubit
    row updates from cfg.restarts seeded random frames; at a fixed point the
    components with a single index above 1 vanish identically. Stage two
    maximizes the (2,2,2) component over the leftover rotations about axis 1,
    which zeroes the (3,2,2)-pattern components. Returns the rotated tensor
    and the frame that produces it.
    """
    n = T.n_qubits
    if n != 3:
        raise ValueError(f"normal form implemented for 3 qubits, got {n}")
    latin = T.latin_block()

    best_val = -math.inf
    best_us = None
    for i in range(cfg.restarts):
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 1, i]))
        val, us = _hopm(latin, rng)
        if val > best_val + _TIE_TOL:
            best_val = val
            best_us = us
    stage1 = [_complete_rotation(u) for u in best_us]

    latin1 = latin
    for k in range(3):
        latin1 = np.moveaxis(np.tensordot(stage1[k], latin1, axes=([1], [k])), 0, k)
    rng2 = np.random.default_rng(np.random.SeedSequence([cfg.seed, 2]))
    ws = _so2_polish(latin1, rng2)
    stage2 = []
    for (c, s) in ws:
        stage2.append(np.array([[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]]))

    rotations = tuple(stage2[k] @ stage1[k] for k in range(3))
    rotated = _apply_rotations(T.grid, rotations, range(3))
    out = ExtendedCorrelationTensor(3, np.ascontiguousarray(rotated).reshape(-1))
    return out, LocalFrame(rotations)
