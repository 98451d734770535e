"""Acceptance suite: one test per shipped claim, with a PASS/FAIL line each.

Heavy optimizer-versus-oracle comparisons run a light budget first and
re-evaluate any borderline case at the full default budget before judging.
"""

import json
import math
import re
import time

import numpy as np

from conftest import (
    product_pure_state,
    random_mixed_state,
    random_pure_state,
    record_acceptance,
)

from corrent.cli import main as cli_main
from corrent.corrtensor import (
    LocalFrame,
    g_norm_sq,
    rotate_local_frames,
    tensor_from_density,
)
from corrent.criteria import (
    FamilySpec,
    direct21_bound,
    evaluate_criterion,
    ghz_metric_test,
    ghz_metric_threshold,
    prop1_three_qubit,
    prop2_modified,
    prop3_simple,
    vcrit_scan,
)
from corrent.frameopt import OptimizerConfig, random_rotation, schmidt_normal_form
from corrent.metrics import modified_metric_3q, standard_full_correlation_metric
from corrent.oracle import (
    ProductSampler,
    max_biprod_fidelity,
    max_product_overlap,
    verify_schmidt_properties,
)
from corrent.partitions import make_partition
from corrent.states import density_from_pure, make_generalized_ghz, make_ghz, mix_white_noise

DEFAULT = OptimizerConfig()  # restarts=64, tol=1e-9, seed=42
SIGMA = (((1, 2), 3), ((1, 3), 2), ((2, 3), 1))


def sigma_partition(pair, single):
    return make_partition([list(pair), [single]])


def test_criterion_01_symmetric_ghz_threshold():
    started = time.perf_counter()
    spec = FamilySpec("generalized-ghz", 3, alpha=math.pi / 4)
    v = vcrit_scan(spec, "direct21", 5e-4, DEFAULT)
    elapsed = time.perf_counter() - started
    ok = v is not None and abs(v - 0.5) <= 1e-3 and elapsed <= 120.0
    record_acceptance(
        "ACCEPTANCE-01 symmetric GHZ3 direct21 threshold",
        ok,
        f"v_crit={v:.6f} target 0.500+-1e-3, {elapsed:.1f}s (budget 120s)",
    )


def test_criterion_02_generalized_ghz_curve():
    started = time.perf_counter()
    worst = 0.0
    for alpha in np.linspace(math.pi / 16, math.pi / 4, 9):
        spec = FamilySpec("generalized-ghz", 3, alpha=float(alpha))
        v = vcrit_scan(spec, "direct21", 1e-3, DEFAULT)
        target = 1.0 / math.sqrt(1.0 + 3.0 * math.sin(2.0 * alpha) ** 2)
        worst = max(worst, abs(v - target))
    elapsed = time.perf_counter() - started
    ok = worst <= 5e-3 and elapsed <= 900.0
    record_acceptance(
        "ACCEPTANCE-02 generalized GHZ3 curve (9 alphas)",
        ok,
        f"worst |numeric-analytic|={worst:.2e} (tol 5e-3), {elapsed:.1f}s (budget 900s)",
    )


def test_criterion_03_w3_threshold():
    started = time.perf_counter()
    v = vcrit_scan(FamilySpec("w3", 3), "prop1", 1e-3, DEFAULT)
    elapsed = time.perf_counter() - started
    ok = v is not None and abs(v - 0.636) <= 0.01 and elapsed <= 300.0
    record_acceptance(
        "ACCEPTANCE-03 noisy W3 prop1 threshold",
        ok,
        f"v_crit={v:.4f} target 0.636+-0.01, {elapsed:.1f}s (budget 300s)",
    )


def test_criterion_04_ghz_metric_thresholds_exact_and_straddle():
    exact = (
        ghz_metric_threshold(3, math.pi / 4) == 3.0 / 7.0
        and ghz_metric_threshold(4, math.pi / 4) == 7.0 / 15.0
    )
    flips = True
    for n, thr in ((3, 3.0 / 7.0), (4, 7.0 / 15.0)):
        above = ghz_metric_test(FamilySpec("ghz", n, visibility=thr + 1e-4)).detected
        below = ghz_metric_test(FamilySpec("ghz", n, visibility=thr - 1e-4)).detected
        flips = flips and above and not below
    record_acceptance(
        "ACCEPTANCE-04 GHZ-metric thresholds",
        exact and flips,
        f"exact 3/7 and 7/15: {exact}; verdict flips on 1e-4 straddle: {flips}",
    )


def test_criterion_05_biproduct_fidelity_bounds():
    sampler = ProductSampler(seed=2718, samples=50_000, refine_steps=150)
    started = time.perf_counter()
    f_ghz = max_biprod_fidelity(density_from_pure(make_ghz(3)), sampler)
    t_ghz = time.perf_counter() - started
    started = time.perf_counter()
    f_alpha = max_biprod_fidelity(
        density_from_pure(make_generalized_ghz(3, math.pi / 6)), sampler
    )
    t_alpha = time.perf_counter() - started
    ok = (
        0.499 <= f_ghz <= 0.5 + 1e-6
        and 0.749 <= f_alpha <= 0.75 + 1e-6
        and t_ghz <= 180.0
        and t_alpha <= 180.0
    )
    record_acceptance(
        "ACCEPTANCE-05 biproduct fidelity bounds",
        ok,
        f"GHZ3: {f_ghz:.6f} in [0.499, 0.5+1e-6] ({t_ghz:.1f}s); "
        f"alpha=pi/6: {f_alpha:.6f} in [0.749, 0.75+1e-6] ({t_alpha:.1f}s)",
    )


def test_criterion_06_four_qubit_appendix():
    started = time.perf_counter()

    def noisy4(v):
        return tensor_from_density(mix_white_noise(density_from_pure(make_ghz(4)), v))

    hot = evaluate_criterion("prop5q", noisy4(0.6), DEFAULT)
    cold = evaluate_criterion("prop5q", noisy4(0.4), DEFAULT)
    sep = evaluate_criterion("prop211", noisy4(0.5), DEFAULT)
    elapsed = time.perf_counter() - started
    ok = hot.detected and not cold.detected and sep.detected and elapsed <= 600.0
    record_acceptance(
        "ACCEPTANCE-06 four-qubit criteria",
        ok,
        f"prop5q v=0.6 detected={hot.detected}, v=0.4 detected={cold.detected}, "
        f"prop211 v=0.5 detected={sep.detected}, {elapsed:.1f}s (budget 600s)",
    )


def test_criterion_07_round_trip_and_invariance():
    from corrent.corrtensor import density_from_tensor

    rng = np.random.default_rng(4242)
    worst_rt = 0.0
    for i in range(100):
        n = (2, 3, 4)[i % 3]
        rho = random_mixed_state(n, rng)
        back = density_from_tensor(tensor_from_density(rho))
        worst_rt = max(worst_rt, float(np.abs(back.entries - rho.entries).max()))

    worst_inv = 0.0
    for n in (3, 4):
        T = tensor_from_density(random_mixed_state(n, rng))
        std = standard_full_correlation_metric(n)
        base = g_norm_sq(T, std)
        for _ in range(50):
            frame = LocalFrame(tuple(random_rotation(rng) for _ in range(n)))
            worst_inv = max(worst_inv, abs(g_norm_sq(rotate_local_frames(T, frame), std) - base))

    ok = worst_rt <= 1e-12 and worst_inv <= 1e-10
    record_acceptance(
        "ACCEPTANCE-07 round trip and norm invariance",
        ok,
        f"worst round-trip {worst_rt:.2e} (tol 1e-12); "
        f"worst norm drift over 100 frames {worst_inv:.2e} (tol 1e-10)",
    )


def _floor_margins_for_state(T, cfg, oracle_budget, seed):
    """(label, lhs, oracle) triples for every 3-qubit criterion and partition."""
    std = standard_full_correlation_metric(3)
    out = []
    v1 = prop1_three_qubit(T, cfg)
    v21 = direct21_bound(T, cfg)
    v2 = prop2_modified(T, cfg)
    v3 = prop3_simple(T, cfg)
    sampler = ProductSampler(seed=seed, samples=oracle_budget[0], refine_steps=oracle_budget[1])
    for (pair, single), t1, t21, t2, t3 in zip(
        SIGMA, v1.per_partition, v21.per_partition, v2.per_partition, v3.per_partition
    ):
        part = sigma_partition(pair, single)
        mod = modified_metric_3q(pair)
        o_std = max_product_overlap(T, std, part, sampler)
        o_mod = max_product_overlap(T, mod, part, sampler)
        rotated = rotate_local_frames(T, t3.opt.frame)
        o_mod_rot = max_product_overlap(rotated, mod, part, sampler)
        out.append((f"prop1@{part}", t1.lhs, o_std))
        out.append((f"direct21@{part}", t21.lhs, o_std))
        out.append((f"prop2@{part}", t2.lhs, o_mod))
        out.append((f"prop3@{part}", t3.lhs, o_mod_rot))
    return out


def test_criterion_08a_bound_soundness_floor():
    started = time.perf_counter()
    rng = np.random.default_rng(31415)
    base_cfg = OptimizerConfig(restarts=12, seed=42)
    worst = np.inf
    worst_label = ""
    retries = 0
    for i in range(100):
        T = tensor_from_density(random_mixed_state(3, rng))
        for label, lhs, oracle in _floor_margins_for_state(T, base_cfg, (1500, 50), 9000 + i):
            margin = lhs - oracle
            if margin < -1e-6:
                # re-evaluate the bound at the full default budget before judging
                retries += 1
                name = label.split("@")[0]
                strong = {
                    "prop1": lambda: prop1_three_qubit(T, DEFAULT),
                    "direct21": lambda: direct21_bound(T, DEFAULT),
                    "prop2": lambda: prop2_modified(T, DEFAULT),
                    "prop3": lambda: prop3_simple(T, DEFAULT),
                }[name]()
                part_str = label.split("@")[1]
                lhs = next(t.lhs for t in strong.per_partition if str(t.partition) == part_str)
                margin = lhs - oracle
            if margin < worst:
                worst = margin
                worst_label = label
    elapsed = time.perf_counter() - started
    ok = worst >= -1e-6
    record_acceptance(
        "ACCEPTANCE-08a bound-soundness floor (100 mixed 3-qubit states)",
        ok,
        f"worst lhs-oracle margin {worst:.2e} at {worst_label} (tol -1e-6), "
        f"{retries} rechecks, {elapsed:.1f}s",
    )


def _fp_checks_3q(T, cfg):
    strong = prop3_simple(T, cfg)
    weak_detect = all(2.0 + 1e-9 < t.rhs for t in strong.per_partition)
    return {
        "prop1": prop1_three_qubit(T, cfg).detected,
        "direct21": direct21_bound(T, cfg).detected,
        "prop2": prop2_modified(T, cfg).detected,
        "prop3": strong.detected,
        "prop3-weak": weak_detect,
    }


_SHAPE_ASSIGNMENTS_3Q = {
    (1, 2): [[[1, 2], [3]], [[1, 3], [2]], [[2, 3], [1]]],
    (1, 1, 1): [[[1], [2], [3]]],
}

_SHAPE_ASSIGNMENTS_4Q = {
    (1, 3): [[[1], [2, 3, 4]], [[2], [1, 3, 4]], [[3], [1, 2, 4]], [[4], [1, 2, 3]]],
    (2, 2): [[[1, 2], [3, 4]], [[1, 3], [2, 4]], [[1, 4], [2, 3]]],
    (1, 1, 2): [
        [[1], [2], [3, 4]], [[1], [3], [2, 4]], [[1], [4], [2, 3]],
        [[2], [3], [1, 4]], [[2], [4], [1, 3]], [[3], [4], [1, 2]],
    ],
    (1, 1, 1, 1): [[[1], [2], [3], [4]]],
}

_CRITERIA_EXCLUDING_4Q_SHAPE = {
    (1, 3): ("prop4q", "prop5q"),
    (2, 2): ("prop5q",),
    (1, 1, 2): ("prop4q", "prop5q", "prop211"),
    (1, 1, 1, 1): ("prop4q", "prop5q", "prop211"),
}


def test_criterion_08a_bound_soundness_floor_4q():
    # companion floor on 25 random 4-qubit mixed states for the 4-qubit criteria
    from corrent.metrics import ghz_xy_metric_4q
    from corrent.partitions import partition_shape

    started = time.perf_counter()
    rng = np.random.default_rng(98765)
    cfg = OptimizerConfig(restarts=6, seed=42)
    xy = ghz_xy_metric_4q()
    std4 = standard_full_correlation_metric(4)
    worst = np.inf
    worst_label = ""
    retries = 0
    for i in range(25):
        T = tensor_from_density(random_mixed_state(4, rng))
        sampler = ProductSampler(seed=7000 + i, samples=2000, refine_steps=40)
        checks = []
        v4 = evaluate_criterion("prop4q", T, cfg)
        for t in v4.per_partition:
            checks.append(("prop4q", t, xy))
        v5 = evaluate_criterion("prop5q", T, cfg)
        for t in v5.per_partition:
            if partition_shape(t.partition) == (2, 2):
                checks.append(("prop5q", t, xy))
        v211 = evaluate_criterion("prop211", T, cfg)
        for t in v211.per_partition:
            checks.append(("prop211", t, std4))
        for name, term, metric in checks:
            oracle = max_product_overlap(T, metric, term.partition, sampler)
            margin = term.lhs - oracle
            if margin < -1e-6:
                retries += 1
                strong = evaluate_criterion(name, T, DEFAULT)
                lhs = next(
                    t.lhs for t in strong.per_partition if t.partition == term.partition
                )
                margin = lhs - oracle
            if margin < worst:
                worst = margin
                worst_label = f"{name}@{term.partition}"
    elapsed = time.perf_counter() - started
    ok = worst >= -1e-6
    record_acceptance(
        "ACCEPTANCE-08a bound-soundness floor (25 mixed 4-qubit states)",
        ok,
        f"worst lhs-oracle margin {worst:.2e} at {worst_label} (tol -1e-6), "
        f"{retries} rechecks, {elapsed:.1f}s",
    )


def test_criterion_08b_no_false_positives_3q():
    started = time.perf_counter()
    rng = np.random.default_rng(27182)
    # a weak first pass only over-detects; every candidate is rechecked at DEFAULT
    light = OptimizerConfig(restarts=4, convergence_tol=1e-7, seed=42)
    false_positives = []
    retries = 0
    for shape, assignments in _SHAPE_ASSIGNMENTS_3Q.items():
        for i in range(100):
            blocks = assignments[i % len(assignments)]
            T = tensor_from_density(density_from_pure(product_pure_state(blocks, rng)))
            for name, detected in _fp_checks_3q(T, light).items():
                if detected:
                    retries += 1
                    if name == "prop3-weak":
                        confirmed = prop3_simple(T, DEFAULT, weak=True).detected
                    else:
                        confirmed = evaluate_criterion(name, T, DEFAULT).detected
                    if confirmed:
                        false_positives.append(f"{name} on {shape} product #{i}")
    elapsed = time.perf_counter() - started
    ok = not false_positives
    record_acceptance(
        "ACCEPTANCE-08b zero false positives (3-qubit products)",
        ok,
        f"200 products x 5 criteria, {retries} rechecks, "
        f"false positives: {false_positives or 'none'}, {elapsed:.1f}s",
    )


def test_criterion_08c_no_false_positives_4q():
    started = time.perf_counter()
    rng = np.random.default_rng(16180)
    light = OptimizerConfig(restarts=4, convergence_tol=1e-7, seed=42)
    false_positives = []
    retries = 0
    for shape, assignments in _SHAPE_ASSIGNMENTS_4Q.items():
        names = _CRITERIA_EXCLUDING_4Q_SHAPE[shape]
        for i in range(100):
            blocks = assignments[i % len(assignments)]
            T = tensor_from_density(density_from_pure(product_pure_state(blocks, rng)))
            for name in names:
                if evaluate_criterion(name, T, light).detected:
                    retries += 1
                    if evaluate_criterion(name, T, DEFAULT).detected:
                        false_positives.append(f"{name} on {shape} product #{i}")
    elapsed = time.perf_counter() - started
    ok = not false_positives
    record_acceptance(
        "ACCEPTANCE-08c zero false positives (4-qubit products)",
        ok,
        f"400 products, {retries} rechecks, false positives: "
        f"{false_positives or 'none'}, {elapsed:.1f}s",
    )


def test_criterion_09_schmidt_property_suite():
    started = time.perf_counter()
    rng = np.random.default_rng(14142)
    sign_violations = 0
    single_nonzero_held = 0
    ok = True
    for _ in range(50):
        T = tensor_from_density(density_from_pure(random_pure_state(3, rng)))
        normal, _ = schmidt_normal_form(T, DEFAULT)
        report = verify_schmidt_properties(normal, 1e-6)
        ok = ok and report.zero_pattern_pass and report.dominance_pass
        sign_violations += 0 if report.sign_pass else 1
        single_nonzero_held += 1 if report.single_nonzero_held else 0
    elapsed = time.perf_counter() - started
    record_acceptance(
        "ACCEPTANCE-09 Schmidt property suite (50 random pure states)",
        ok,
        f"zero-pattern and dominance pass at 1e-6; sign-condition violations "
        f"reported on {sign_violations}/50; single-nonzero observation held on "
        f"{single_nonzero_held}/50, {elapsed:.1f}s",
    )


def test_criterion_10_determinism(tmp_path):
    args = [
        "detect", "--family", "generalized-ghz", "--n", "3", "--alpha", str(math.pi / 8),
        "--visibility", "0.8", "--criterion", "prop1", "--restarts", "16", "--seed", "7",
    ]
    outs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        assert cli_main(args + ["--output", str(path)]) in (0, 1)
        outs.append(path.read_text())
    scrub = lambda s: re.sub(r'"wall_time_ms": [0-9eE+.-]+', '"wall_time_ms": X', s)
    identical = scrub(outs[0]) == scrub(outs[1])

    vargs = ["vcrit", "--family", "ghz", "--n", "3", "--criterion", "ghz-metric",
             "--precision", "1e-4", "--seed", "11"]
    vouts = []
    for name in ("va.json", "vb.json"):
        path = tmp_path / name
        assert cli_main(vargs + ["--output", str(path)]) == 0
        vouts.append(path.read_text())
    identical = identical and scrub(vouts[0]) == scrub(vouts[1])
    record_acceptance(
        "ACCEPTANCE-10 byte-identical reports modulo wall_time_ms",
        identical,
        "detect and vcrit reruns compared",
    )
