"""Nonlinear correlation-tensor criteria for genuine multiqubit entanglement.

Every criterion compares a separable-side maximum (lhs) against a squared
metric norm of the tensor (rhs); strict inequality with a small margin on
every covered partition certifies the advertised kind of entanglement. The
criteria are sufficient conditions only: a failed inequality is inconclusive.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .corrtensor import ExtendedCorrelationTensor, g_norm_sq, tensor_from_density
from .frameopt import OptimizerConfig, OptResult, max_abs_latin_component, maximize_over_frames
from .metrics import (
    ghz_metric,
    ghz_xy_metric_4q,
    modified_metric_3q,
    standard_full_correlation_metric,
)
from .oracle import ProductSampler, max_product_overlap
from .partitions import Partition, enumerate_k_partitions, make_partition, partition_shape
from .states import DensityMatrix, density_from_pure, make_generalized_ghz, make_ghz, make_w3, mix_white_noise

STRICTNESS_MARGIN = 1e-9

FAMILIES = ("ghz", "generalized-ghz", "w3")

CRITERION_NAMES = (
    "prop1",
    "direct21",
    "prop2",
    "prop3",
    "prop3-weak",
    "ghz-metric",
    "prop4q",
    "prop5q",
    "prop211",
)

# Qubit count each tensor-based criterion accepts.
CRITERION_QUBITS = {
    "prop1": 3,
    "direct21": 3,
    "prop2": 3,
    "prop3": 3,
    "prop3-weak": 3,
    "prop4q": 4,
    "prop5q": 4,
    "prop211": 4,
}


@dataclass(frozen=True)
class PartitionTerm:
    """One partition's contribution: its bound, its norm and the optimizer run."""

    partition: Partition
    lhs: float
    rhs: float
    opt: Optional[OptResult]


@dataclass(frozen=True)
class CriterionVerdict:
    criterion_name: str
    lhs: float
    rhs: float
    detected: bool
    per_partition: tuple
    config_echo: OptimizerConfig
    rigorous: bool = True


@dataclass(frozen=True)
class FamilySpec:
    """A named noisy state family: ghz, generalized-ghz or w3."""

    family: str
    n: int
    alpha: Optional[float] = None
    visibility: Optional[float] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}, expected one of {FAMILIES}")
        if self.family == "w3":
            if self.n != 3:
                raise ValueError("the w3 family has exactly 3 qubits")
        elif self.n < 2:
            raise ValueError(f"need at least 2 qubits, got {self.n}")
        if self.family == "generalized-ghz":
            if self.alpha is None:
                raise ValueError("generalized-ghz requires alpha")
            if not 0.0 <= self.alpha <= math.pi / 4 + 1e-15:
                raise ValueError(f"alpha = {self.alpha!r} outside [0, pi/4]")
        if self.visibility is not None and not 0.0 <= self.visibility <= 1.0:
            raise ValueError(f"visibility = {self.visibility!r} outside [0, 1]")

    def effective_alpha(self) -> float:
        return math.pi / 4 if self.family == "ghz" else (self.alpha or 0.0)


def family_density(spec: FamilySpec) -> DensityMatrix:
    """Materialize the noisy family state; requires a visibility."""
    if spec.visibility is None:
        raise ValueError("family spec has no visibility")
    if spec.family == "ghz":
        base = make_ghz(spec.n)
    elif spec.family == "generalized-ghz":
        base = make_generalized_ghz(spec.n, spec.alpha)
    else:
        base = make_w3()
    return mix_white_noise(density_from_pure(base), spec.visibility)


def _require_n(T: ExtendedCorrelationTensor, n: int, name: str):
    if T.n_qubits != n:
        raise ValueError(f"{name} is defined for {n} qubits, tensor has {T.n_qubits}")


def _verdict(name, terms, cfg, rigorous=True) -> CriterionVerdict:
    """Assemble a verdict; detection needs every partition's inequality to hold.

    The reported lhs/rhs are those of the binding partition (smallest margin),
    so `detected == (lhs + margin < rhs)` holds for the verdict as a whole.
    """
    margins = [t.rhs - t.lhs for t in terms]
    binding = terms[int(np.argmin(margins))]
    detected = all(t.lhs + STRICTNESS_MARGIN < t.rhs for t in terms)
    return CriterionVerdict(name, binding.lhs, binding.rhs, detected, tuple(terms), cfg, rigorous)


# ---------------------------------------------------------------------------
# Three-qubit criteria. sigma picks which two qubits carry the paired indices.

_SIGMA_3Q = (((1, 2), 3), ((1, 3), 2), ((2, 3), 1))


def _sigma_partition(pair, single) -> Partition:
    return make_partition([list(pair), [single]])


def _flat_index(n: int, assignment: dict) -> int:
    """Flat component index for {qubit label: Pauli index}; unlisted qubits get 0."""
    return sum(v * 4 ** (n - q) for q, v in assignment.items())


def _sigma_indices(n: int, pair, free):
    """Flat indices of the (1,1,..), (2,2,..) and (3,3,..) pattern families.

    The pair qubits carry the repeated index; the free qubits run over all
    Latin values, fastest on the last one. Returns one flat array per family.
    """
    families = []
    for rep in (1, 2, 3):
        idx = []
        for latin in np.ndindex(*(3 for _ in free)):
            assignment = {q: rep for q in pair}
            assignment.update({q: latin[j] + 1 for j, q in enumerate(free)})
            idx.append(_flat_index(n, assignment))
        families.append(np.array(idx))
    return families


def _prop1_objective(pair, single):
    i11, i22, i33 = _sigma_indices(3, pair, (single,))
    gather = np.concatenate([i11, i22, i33])

    def obj(t):
        v = t.components[gather]
        a = np.abs(v[0:3] - v[3:6]) + np.abs(v[6:9])
        return math.sqrt(float(np.dot(a, a)))

    return obj


_THETA_GRID = np.linspace(0.0, math.pi / 4, 64)
_SIN2_GRID = np.sin(2.0 * _THETA_GRID)
_SIN2_GRID_SQ = _SIN2_GRID * _SIN2_GRID


def _theta_max_sq(aa: float, ab: float, bb: float) -> float:
    """Max over theta in [0, pi/4] of |a sin(2 theta) + b|^2, from cached dot products.

    Evaluated on a 64-point theta grid. The quantity is a convex quadratic in
    s = sin(2 theta), so its maximum over any interval sits at an interval
    end; the grid contains both ends of [0, pi/4] exactly and the refinement
    around the best grid point therefore reduces to the grid maximum itself.
    """
    vals = aa * _SIN2_GRID_SQ + (2.0 * ab) * _SIN2_GRID + bb
    return float(vals.max())


def _direct21_objective(pair, single):
    i11, i22, i33 = _sigma_indices(3, pair, (single,))
    gather = np.concatenate([i11, i22, i33])

    def obj(t):
        v = t.components[gather]
        a = v[0:3] - v[3:6]
        b = v[6:9]
        aa = float(np.dot(a, a))
        ab = float(np.dot(a, b))
        bb = float(np.dot(b, b))
        return math.sqrt(max(_theta_max_sq(aa, ab, bb), 0.0))

    return obj


def prop1_three_qubit(T: ExtendedCorrelationTensor, cfg: OptimizerConfig) -> CriterionVerdict:
    """Absolute-value pair bound against the full-correlation norm.

    For each split into an entangled pair and a spectator qubit, the bound
    sqrt(sum_i (|T_11i - T_22i| + |T_33i|)^2) is maximized over rotations of
    the pair; the state is genuinely 3-partite entangled when every split
    stays below the squared full-correlation norm.
    """
    _require_n(T, 3, "prop1")
    rhs = g_norm_sq(T, standard_full_correlation_metric(3))
    terms = []
    for pair, single in _SIGMA_3Q:
        opt = maximize_over_frames(T, _prop1_objective(pair, single), pair, cfg)
        terms.append(PartitionTerm(_sigma_partition(pair, single), opt.value, rhs, opt))
    return _verdict("prop1", terms, cfg)


def direct21_bound(T: ExtendedCorrelationTensor, cfg: OptimizerConfig) -> CriterionVerdict:
    """Exact pair-product maximum against the full-correlation norm.

    Tighter than prop1: the spectator-axis sum keeps the sign structure and an
    explicit scalar parameter scans the pair's Schmidt angle, so the lhs
    equals the true maximum overlap with pair-times-single product states.
    """
    _require_n(T, 3, "direct21")
    rhs = g_norm_sq(T, standard_full_correlation_metric(3))
    terms = []
    for pair, single in _SIGMA_3Q:
        opt = maximize_over_frames(T, _direct21_objective(pair, single), pair, cfg)
        terms.append(PartitionTerm(_sigma_partition(pair, single), opt.value, rhs, opt))
    return _verdict("direct21", terms, cfg)


def _masked_tensor(T: ExtendedCorrelationTensor, pair, single) -> ExtendedCorrelationTensor:
    """Copy of T with the (3,3,free) pattern components set to zero.

    This is the tensor weighted by the pair's modified metric as far as the
    paired-index patterns are concerned, so the pair-product maximum under
    that metric can be computed from it with the plain product objective.
    """
    _, _, i33 = _sigma_indices(T.n_qubits, pair, (single,))
    comp = T.components.copy()
    comp[i33] = 0.0
    return ExtendedCorrelationTensor(T.n_qubits, comp)


def prop2_modified(T: ExtendedCorrelationTensor, cfg: OptimizerConfig) -> CriterionVerdict:
    """Pair-product maximum under the modified metric against the modified norm.

    The metric drops the z,z components on the pair, and the lhs is the exact
    maximum overlap of pair-times-single products with the tensor under that
    same metric, which reduces to the pair-product objective evaluated on the
    tensor with the dropped components zeroed out. Detection requires the
    inequality to hold for every pair assignment, each with its own metric.
    """
    _require_n(T, 3, "prop2")
    terms = []
    for pair, single in _SIGMA_3Q:
        rhs = g_norm_sq(T, modified_metric_3q(pair))
        masked = _masked_tensor(T, pair, single)
        opt = maximize_over_frames(masked, _direct21_objective(pair, single), pair, cfg)
        terms.append(PartitionTerm(_sigma_partition(pair, single), opt.value, rhs, opt))
    return _verdict("prop2", terms, cfg)


def _drop_objective(pair, single):
    """Squared mass sitting on the (3,3,free) pattern of the rotated tensor."""
    _, _, i33 = _sigma_indices(3, pair, (single,))

    def obj(t):
        v = t.components[i33]
        return float(np.dot(v, v))

    return obj


def prop3_simple(
    T: ExtendedCorrelationTensor, cfg: OptimizerConfig, weak: bool = False
) -> CriterionVerdict:
    """Frame-floor of the modified norm against twice the peak tensor element.

    For each pair assignment the rhs is the modified norm minimized over pair
    rotations, i.e. the full-correlation norm minus the largest (3,3,free)
    mass any frame can collect. Any pair-product overlap, measured in the
    product's own frame, is bounded by 2 * T_max, so detection needs every
    assignment's rhs to exceed that; the weak form replaces 2 * T_max by the
    constant 2, coarser but free of optimization on the lhs side.
    """
    _require_n(T, 3, "prop3")
    if weak:
        lhs = 2.0
    else:
        opt_peak = maximize_over_frames(T, max_abs_latin_component, (1, 2, 3), cfg)
        lhs = 2.0 * abs(opt_peak.value)
    latin = g_norm_sq(T, standard_full_correlation_metric(3))
    terms = []
    for pair, single in _SIGMA_3Q:
        opt = maximize_over_frames(T, _drop_objective(pair, single), pair, cfg)
        rhs = latin - opt.value
        terms.append(PartitionTerm(_sigma_partition(pair, single), lhs, rhs, opt))
    name = "prop3-weak" if weak else "prop3"
    return _verdict(name, terms, cfg)


# ---------------------------------------------------------------------------
# GHZ-metric family test.


def _cos_sq(alpha: float) -> float:
    # Half-angle form: exact at alpha = pi/4, where cos(alpha)**2 rounds up.
    return 0.5 * (1.0 + math.cos(2.0 * alpha))


def ghz_metric_threshold(n: int, alpha: float) -> float:
    """Visibility above which the noisy generalized GHZ family is detected."""
    if n < 2:
        raise ValueError(f"need at least 2 qubits, got {n}")
    if not 0.0 <= alpha <= math.pi / 4 + 1e-15:
        raise ValueError(f"alpha = {alpha!r} outside [0, pi/4]")
    return (2 ** n * _cos_sq(alpha) - 1.0) / (2 ** n - 1.0)


def ghz_metric_test(spec: FamilySpec) -> CriterionVerdict:
    """Closed-form GHZ-metric detection for the (generalized) GHZ family.

    The product-side bound v (2^n cos^2 alpha - 1) holds across every
    bipartition at once, against the norm (2^n - 1) v^2, so detection is
    exactly visibility > ghz_metric_threshold(n, alpha). Only the GHZ family
    is accepted: the bound is not proven for other states, which must go
    through the sampled (non-rigorous) route instead.
    """
    if spec.family not in ("ghz", "generalized-ghz"):
        raise ValueError(f"ghz-metric closed form supports ghz families, not {spec.family!r}")
    if spec.visibility is None:
        raise ValueError("family spec has no visibility")
    v = spec.visibility
    alpha = spec.effective_alpha()
    lhs = v * (2 ** spec.n * _cos_sq(alpha) - 1.0)
    rhs = (2 ** spec.n - 1.0) * v * v
    cfg = OptimizerConfig(restarts=1, max_iterations=1)
    terms = tuple(
        PartitionTerm(p, lhs, rhs, None) for p in enumerate_k_partitions(spec.n, 2)
    )
    detected = lhs + STRICTNESS_MARGIN < rhs
    return CriterionVerdict("ghz-metric", lhs, rhs, detected, terms, cfg)


def ghz_metric_heuristic(
    T: ExtendedCorrelationTensor,
    cfg: OptimizerConfig,
    samples: int = 20_000,
    refine_steps: int = 100,
) -> CriterionVerdict:
    """Sampled GHZ-metric check for arbitrary states. Not rigorous.

    The product side is estimated from below by sampling, so a positive
    outcome suggests entanglement but certifies nothing.
    """
    n = T.n_qubits
    G = ghz_metric(n)
    rhs = g_norm_sq(T, G)
    terms = []
    for p in enumerate_k_partitions(n, 2):
        sampler = ProductSampler(partition=p, seed=cfg.seed, samples=samples, refine_steps=refine_steps)
        lhs = max_product_overlap(T, G, p, sampler)
        terms.append(PartitionTerm(p, lhs, rhs, None))
    return _verdict("ghz-metric-heuristic", terms, cfg, rigorous=False)


# ---------------------------------------------------------------------------
# Four-qubit criteria.


def _combo_31(block, single):
    """Signed index patterns of the (3+1) product bound for one 3-block."""
    terms = [(1.0, (1, 1, 1, 1))]
    for q in block:
        mu = [1] * 4
        for r in block:
            mu[r - 1] = 2
        mu[q - 1] = 1
        mu[single - 1] = 1
        terms.append((-1.0, tuple(mu)))
    return terms


def _combo_22(pair1, pair2):
    """Signed index patterns of the (2+2) product bound for one pair of pairs."""
    terms = []
    for a, b, sign in ((1, 1, 1.0), (1, 2, -1.0), (2, 1, -1.0), (2, 2, 1.0)):
        mu = [0] * 4
        for q in pair1:
            mu[q - 1] = a
        for q in pair2:
            mu[q - 1] = b
        terms.append((sign, tuple(mu)))
    return terms


def _combo_objective(signed_terms):
    signs = np.array([s for s, _ in signed_terms])
    idx = np.array([_flat_index(4, {q + 1: m for q, m in enumerate(mu)}) for _, mu in signed_terms])

    def obj(t):
        return abs(float(np.dot(signs, t.components[idx])))

    return obj


def _terms_31(T, cfg, rhs):
    out = []
    for p in enumerate_k_partitions(4, 2):
        if partition_shape(p) != (1, 3):
            continue
        single = next(b for b in p.blocks if len(b) == 1)[0]
        block = next(b for b in p.blocks if len(b) == 3)
        obj = _combo_objective(_combo_31(block, single))
        opt = maximize_over_frames(T, obj, (1, 2, 3, 4), cfg)
        out.append(PartitionTerm(p, opt.value, rhs, opt))
    return out


def _terms_22(T, cfg, rhs):
    out = []
    for p in enumerate_k_partitions(4, 2):
        if partition_shape(p) != (2, 2):
            continue
        obj = _combo_objective(_combo_22(p.blocks[0], p.blocks[1]))
        opt = maximize_over_frames(T, obj, (1, 2, 3, 4), cfg)
        out.append(PartitionTerm(p, opt.value, rhs, opt))
    return out


def prop4q_31_check(T: ExtendedCorrelationTensor, cfg: OptimizerConfig) -> CriterionVerdict:
    """Excludes every (3+1) product split of a pure 4-qubit state.

    Four frame-maximized sign combinations of x/y components are compared
    against the squared x/y-pattern norm. The conclusion "not a (3+1)
    product" is meaningful for pure states; the caller asserts purity.
    """
    _require_n(T, 4, "prop4q")
    rhs = g_norm_sq(T, ghz_xy_metric_4q())
    return _verdict("prop4q", _terms_31(T, cfg, rhs), cfg)


def prop5q_genuine_4q(T: ExtendedCorrelationTensor, cfg: OptimizerConfig) -> CriterionVerdict:
    """Genuine 4-partite entanglement via all seven biseparable splits.

    The four (3+1) combinations and three (2+2) combinations must all stay
    below the squared x/y-pattern norm.
    """
    _require_n(T, 4, "prop5q")
    rhs = g_norm_sq(T, ghz_xy_metric_4q())
    return _verdict("prop5q", _terms_31(T, cfg, rhs) + _terms_22(T, cfg, rhs), cfg)


def _prop211_objective(pair, rest):
    i11, i22, i33 = _sigma_indices(4, pair, tuple(rest))
    gather = np.concatenate([i11, i22, i33])

    def obj(t):
        v = t.components[gather]
        a = np.abs(v[0:9] - v[9:18]) + np.abs(v[18:27])
        return math.sqrt(float(np.dot(a, a)))

    return obj


def prop211_not3sep_4q(T: ExtendedCorrelationTensor, cfg: OptimizerConfig) -> CriterionVerdict:
    """Excludes 3-separability of a 4-qubit state.

    Every (2+1+1) split's bound sqrt(sum_ij (|T_11ij - T_22ij| + |T_33ij|)^2),
    maximized over all four local frames, must stay below the squared
    full-correlation norm; the state is then biseparable or genuinely
    multiqubit entangled.
    """
    _require_n(T, 4, "prop211")
    rhs = g_norm_sq(T, standard_full_correlation_metric(4))
    terms = []
    for p in enumerate_k_partitions(4, 3):
        if partition_shape(p) != (1, 1, 2):
            continue
        pair = next(b for b in p.blocks if len(b) == 2)
        rest = sorted(q for b in p.blocks if len(b) == 1 for q in b)
        opt = maximize_over_frames(T, _prop211_objective(pair, rest), (1, 2, 3, 4), cfg)
        terms.append(PartitionTerm(p, opt.value, rhs, opt))
    return _verdict("prop211", terms, cfg)


# ---------------------------------------------------------------------------
# Dispatch and visibility scans.


def evaluate_criterion(
    name: str, T: ExtendedCorrelationTensor, cfg: OptimizerConfig
) -> CriterionVerdict:
    """Run a tensor-based criterion by its CLI name."""
    if name == "prop1":
        return prop1_three_qubit(T, cfg)
    if name == "direct21":
        return direct21_bound(T, cfg)
    if name == "prop2":
        return prop2_modified(T, cfg)
    if name == "prop3":
        return prop3_simple(T, cfg, weak=False)
    if name == "prop3-weak":
        return prop3_simple(T, cfg, weak=True)
    if name == "prop4q":
        return prop4q_31_check(T, cfg)
    if name == "prop5q":
        return prop5q_genuine_4q(T, cfg)
    if name == "prop211":
        return prop211_not3sep_4q(T, cfg)
    if name == "ghz-metric":
        return ghz_metric_heuristic(T, cfg)
    raise ValueError(f"unknown criterion {name!r}")


def _detected_at(spec: FamilySpec, criterion: str, v: float, cfg: OptimizerConfig) -> bool:
    at_v = dataclasses.replace(spec, visibility=v)
    if criterion == "ghz-metric":
        return ghz_metric_test(at_v).detected
    T = tensor_from_density(family_density(at_v))
    return evaluate_criterion(criterion, T, cfg).detected


def vcrit_scan(
    spec_family: FamilySpec,
    criterion: str,
    precision: float,
    cfg: OptimizerConfig,
) -> Optional[float]:
    """Bisect the visibility axis for the detection boundary of a family.

    White-noise mixing scales the tensor linearly, so detection is monotone in
    v and bisection applies. Returns the smallest detected visibility up to
    +-precision, or None when the criterion never fires on [0, 1].
    """
    if precision <= 0.0:
        raise ValueError(f"precision = {precision!r} must be positive")
    if not _detected_at(spec_family, criterion, 1.0, cfg):
        return None
    lo, hi = 0.0, 1.0
    while hi - lo > precision:
        mid = 0.5 * (lo + hi)
        if _detected_at(spec_family, criterion, mid, cfg):
            hi = mid
        else:
            lo = mid
    return hi


def analytic_vcrit(spec: FamilySpec, criterion: str) -> Optional[float]:
    """Closed-form critical visibility where one is known, else None."""
    ghz_like = spec.family in ("ghz", "generalized-ghz")
    if criterion == "ghz-metric" and ghz_like:
        return ghz_metric_threshold(spec.n, spec.effective_alpha())
    if criterion == "direct21" and ghz_like and spec.n == 3:
        s = math.sin(2.0 * spec.effective_alpha())
        return 1.0 / math.sqrt(1.0 + 3.0 * s * s)
    return None
