"""Command-line front end: state ingestion, criterion dispatch, visibility scans.

Exit codes: 0 means success (for `detect`, entanglement detected), 1 means a
`detect` run completed without detection, 2 means any error. Reports are JSON;
sweeps are CSV with a rendered figure next to them.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .corrtensor import LocalFrame, tensor_from_density
from .criteria import (
    CRITERION_NAMES,
    FamilySpec,
    analytic_vcrit,
    evaluate_criterion,
    family_density,
    ghz_metric_heuristic,
    ghz_metric_test,
    vcrit_scan,
)
from .errors import NotAStateError, NumericError, StateFileError
from .frameopt import OptimizerConfig, schmidt_normal_form
from .metrics import ghz_metric, ghz_xy_metric_4q, modified_metric_3q, standard_full_correlation_metric
from .oracle import ProductSampler, max_biprod_fidelity, max_product_overlap, verify_schmidt_properties
from .partitions import enumerate_k_partitions, make_partition, partition_shape
from .states import DensityMatrix

SCHEMA_VERSION = 1


def parse_state_file(path: str) -> DensityMatrix:
    """Load a density matrix from JSON: either a family spec or an explicit matrix."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise StateFileError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise StateFileError(f"{path}: expected a JSON object at the top level")

    if "family" in data:
        try:
            spec = FamilySpec(
                family=data["family"],
                n=int(data.get("n", 3)),
                alpha=data.get("alpha"),
                visibility=data.get("visibility", 1.0),
            )
            return family_density(spec)
        except (KeyError, TypeError) as e:
            raise StateFileError(f"{path}: bad family spec: {e}") from e

    if "matrix" in data:
        try:
            n = int(data["n_qubits"])
        except (KeyError, TypeError) as e:
            raise StateFileError(f"{path}: missing or bad field 'n_qubits'") from e
        dim = 2 ** n
        raw = data["matrix"]
        if len(raw) != dim or any(len(row) != dim for row in raw):
            raise StateFileError(f"{path}: field 'matrix' is not a {dim}x{dim} array")
        try:
            m = np.array(
                [[complex(cell[0], cell[1]) for cell in row] for row in raw], dtype=complex
            )
        except (TypeError, IndexError) as e:
            raise StateFileError(f"{path}: matrix entries must be [re, im] pairs") from e
        rho = DensityMatrix(n, m)
        try:
            rho.validate()
        except ValueError as e:
            raise NotAStateError(f"{path}: {e}") from e
        return rho

    raise StateFileError(f"{path}: need either a 'family' or a 'matrix' field")


def _family_from_args(args) -> FamilySpec:
    if args.family is None:
        raise ValueError("this command needs --family (with --n / --alpha / --visibility)")
    n = args.n if args.n is not None else (3 if args.family == "w3" else None)
    if n is None:
        raise ValueError("--n is required for this family")
    visibility = getattr(args, "visibility", None)
    return FamilySpec(family=args.family, n=n, alpha=args.alpha, visibility=visibility)


def _config_from_args(args) -> OptimizerConfig:
    return OptimizerConfig(
        restarts=args.restarts,
        convergence_tol=args.tol,
        seed=args.seed,
    )


def _load_state(args) -> tuple[DensityMatrix, dict]:
    if args.state is not None and args.family is not None:
        raise ValueError("give either --state or --family, not both")
    if args.state is not None:
        return parse_state_file(args.state), {"path": args.state}
    spec = _family_from_args(args)
    echo = {"family": spec.family, "n": spec.n}
    if spec.alpha is not None:
        echo["alpha"] = spec.alpha
    echo["visibility"] = spec.visibility
    return family_density(spec), echo


def _frame_rows(frame: LocalFrame):
    return [[float(x) for x in np.asarray(r).reshape(-1)] for r in frame.rotations]


def _partition_entries(verdict):
    out = []
    for t in verdict.per_partition:
        entry = {"partition": str(t.partition), "lhs": t.lhs, "rhs": t.rhs}
        if t.opt is not None:
            entry["frames"] = _frame_rows(t.opt.frame)
            entry["restart_index"] = t.opt.restart_index
            entry["iterations"] = t.opt.iterations
        out.append(entry)
    return out


def _binding_frames(verdict):
    margins = [t.rhs - t.lhs for t in verdict.per_partition]
    binding = verdict.per_partition[int(np.argmin(margins))]
    return _frame_rows(binding.opt.frame) if binding.opt is not None else None


def _emit(report: dict, output):
    text = json.dumps(report, indent=2) + "\n"
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def run_detect(args) -> int:
    started = time.perf_counter()
    cfg = _config_from_args(args)
    if args.criterion == "ghz-metric" and args.family is not None:
        spec = _family_from_args(args)
        verdict = ghz_metric_test(spec)
        state_echo = {"family": spec.family, "n": spec.n, "alpha": spec.alpha,
                      "visibility": spec.visibility}
    else:
        rho, state_echo = _load_state(args)
        T = tensor_from_density(rho)
        if args.criterion == "ghz-metric":
            verdict = ghz_metric_heuristic(T, cfg, samples=args.samples)
        else:
            verdict = evaluate_criterion(args.criterion, T, cfg)
    report = {
        "schema_version": SCHEMA_VERSION,
        "mode": "detect",
        "criterion": verdict.criterion_name,
        "state": state_echo,
        "lhs": verdict.lhs,
        "rhs": verdict.rhs,
        "detected": verdict.detected,
        "rigorous": verdict.rigorous,
        "partitions": _partition_entries(verdict),
        "frames": _binding_frames(verdict),
        "seed": cfg.seed,
        "restarts": cfg.restarts,
        "tolerance": cfg.convergence_tol,
        "wall_time_ms": (time.perf_counter() - started) * 1e3,
    }
    _emit(report, args.output)
    return 0 if verdict.detected else 1


def run_vcrit(args) -> int:
    started = time.perf_counter()
    cfg = _config_from_args(args)
    spec = _family_from_args(args)
    numeric = vcrit_scan(spec, args.criterion, args.precision, cfg)
    analytic = analytic_vcrit(spec, args.criterion)
    report = {
        "schema_version": SCHEMA_VERSION,
        "mode": "vcrit",
        "criterion": args.criterion,
        "family": spec.family,
        "n": spec.n,
        "alpha": spec.alpha,
        "v_crit_numeric": numeric,
        "v_crit_analytic": analytic,
        "abs_diff": abs(numeric - analytic) if numeric is not None and analytic is not None else None,
        "no_detection": numeric is None,
        "precision": args.precision,
        "seed": cfg.seed,
        "restarts": cfg.restarts,
        "tolerance": cfg.convergence_tol,
        "wall_time_ms": (time.perf_counter() - started) * 1e3,
    }
    _emit(report, args.output)
    return 0


def sweep_rows(spec_base: FamilySpec, alphas, criterion: str, precision: float, cfg) -> list[dict]:
    rows = []
    for alpha in alphas:
        spec = dataclasses.replace(spec_base, alpha=float(alpha))
        numeric = vcrit_scan(spec, criterion, precision, cfg)
        analytic = analytic_vcrit(spec, criterion)
        diff = abs(numeric - analytic) if numeric is not None and analytic is not None else None
        rows.append(
            {
                "alpha": float(alpha),
                "v_crit_numeric": numeric,
                "v_crit_analytic": analytic,
                "abs_diff": diff,
            }
        )
    return rows


def _csv_cell(value, sentinel="") -> str:
    if value is None:
        return sentinel
    return repr(float(value))


def run_sweep(args) -> int:
    cfg = _config_from_args(args)
    if args.family != "generalized-ghz":
        raise ValueError("sweep scans alpha, which only the generalized-ghz family has")
    spec_base = FamilySpec(family=args.family, n=args.n if args.n is not None else 3, alpha=0.0)
    if args.alpha_count < 1:
        raise ValueError("--alpha-count must be >= 1")
    alphas = np.linspace(args.alpha_min, args.alpha_max, args.alpha_count)
    rows = sweep_rows(spec_base, alphas, args.criterion, args.precision, cfg)

    out = args.output
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write("alpha,v_crit_numeric,v_crit_analytic,abs_diff\n")
            for r in rows:
                fh.write(
                    ",".join(
                        [
                            repr(r["alpha"]),
                            _csv_cell(r["v_crit_numeric"], sentinel=">1"),
                            _csv_cell(r["v_crit_analytic"]),
                            _csv_cell(r["abs_diff"]),
                        ]
                    )
                    + "\n"
                )
    except OSError as e:
        raise OSError(f"cannot write sweep output {out}: {e}") from e

    if not args.no_plot:
        from .plotting import render_sweep_figure

        figure_path = os.path.splitext(out)[0] + ".png"
        render_sweep_figure(rows, args.criterion, figure_path)
    return 0


def _parse_partition(text: str):
    blocks = [[int(c) for c in part] for part in text.split("|") if part]
    return make_partition(blocks)


def _metric_by_name(name: str, n: int, partition=None):
    if name == "standard":
        return standard_full_correlation_metric(n)
    if name == "ghz":
        return ghz_metric(n)
    if name == "ghz-xy":
        if n != 4:
            raise ValueError("the ghz-xy metric is a 4-qubit metric")
        return ghz_xy_metric_4q()
    if name == "modified":
        if n != 3 or partition is None or partition_shape(partition) != (1, 2):
            raise ValueError("the modified metric needs 3 qubits and a pair|single partition")
        pair = next(b for b in partition.blocks if len(b) == 2)
        return modified_metric_3q(pair)
    raise ValueError(f"unknown metric {name!r}")


def run_oracle_check(args) -> int:
    started = time.perf_counter()
    rho, state_echo = _load_state(args)
    n = rho.n_qubits
    T = tensor_from_density(rho)
    sampler = ProductSampler(seed=args.seed, samples=args.samples)
    if args.partition is not None:
        partitions = [_parse_partition(args.partition)]
    else:
        partitions = enumerate_k_partitions(n, 2)
    overlaps = []
    for p in partitions:
        metric = _metric_by_name(args.metric, n, p)
        overlaps.append(
            {"partition": str(p), "metric": args.metric,
             "overlap": max_product_overlap(T, metric, p, sampler)}
        )
    report = {
        "schema_version": SCHEMA_VERSION,
        "mode": "oracle-check",
        "state": state_echo,
        "biprod_fidelity_max": max_biprod_fidelity(rho, sampler),
        "overlaps": overlaps,
        "samples": sampler.samples,
        "refine_steps": sampler.refine_steps,
        "seed": sampler.seed,
        "wall_time_ms": (time.perf_counter() - started) * 1e3,
    }
    _emit(report, args.output)
    return 0


def run_schmidt(args) -> int:
    started = time.perf_counter()
    cfg = _config_from_args(args)
    rho, state_echo = _load_state(args)
    T = tensor_from_density(rho)
    normal, frame = schmidt_normal_form(T, cfg)
    checks = verify_schmidt_properties(normal, args.check_tol)
    report = {
        "schema_version": SCHEMA_VERSION,
        "mode": "schmidt",
        "state": state_echo,
        "leading_component": normal.component((1, 1, 1)),
        "tensor_components": [float(x) for x in normal.components],
        "frames": _frame_rows(frame),
        "properties": checks.to_dict(),
        "seed": cfg.seed,
        "restarts": cfg.restarts,
        "tolerance": cfg.convergence_tol,
        "wall_time_ms": (time.perf_counter() - started) * 1e3,
    }
    _emit(report, args.output)
    return 0


def _add_state_options(p: argparse.ArgumentParser):
    p.add_argument("--state", help="path to a JSON state file")
    p.add_argument("--family", choices=["ghz", "generalized-ghz", "w3"], help="named family")
    p.add_argument("--n", type=int, help="qubit count for --family")
    p.add_argument("--alpha", type=float, help="angle in radians for generalized-ghz")
    p.add_argument("--visibility", type=float, help="white-noise visibility in [0, 1]")


def _add_optimizer_options(p: argparse.ArgumentParser):
    p.add_argument("--restarts", type=int, default=64, help="optimizer restarts (default 64)")
    p.add_argument("--seed", type=int, default=42, help="base seed (default 42)")
    p.add_argument("--tol", type=float, default=1e-9, help="ascent convergence tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrent",
        description="Correlation-tensor criteria for genuine multiqubit entanglement.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="evaluate one criterion on one state")
    _add_state_options(p)
    _add_optimizer_options(p)
    p.add_argument("--criterion", required=True, choices=list(CRITERION_NAMES))
    p.add_argument("--samples", type=int, default=20_000,
                   help="oracle samples for the non-rigorous ghz-metric route")
    p.add_argument("--output", help="write the JSON report here instead of stdout")
    p.set_defaults(func=run_detect)

    p = sub.add_parser("vcrit", help="bisect the critical visibility of a family")
    _add_state_options(p)
    _add_optimizer_options(p)
    p.add_argument("--criterion", required=True, choices=list(CRITERION_NAMES))
    p.add_argument("--precision", type=float, default=1e-3)
    p.add_argument("--output", help="write the JSON report here instead of stdout")
    p.set_defaults(func=run_vcrit)

    p = sub.add_parser("sweep", help="critical visibility across an alpha grid (CSV + figure)")
    p.add_argument("--family", default="generalized-ghz", choices=["generalized-ghz"])
    p.add_argument("--n", type=int, default=3)
    _add_optimizer_options(p)
    p.add_argument("--criterion", required=True, choices=list(CRITERION_NAMES))
    p.add_argument("--precision", type=float, default=1e-3)
    p.add_argument("--alpha-min", type=float, default=math.pi / 16)
    p.add_argument("--alpha-max", type=float, default=math.pi / 4)
    p.add_argument("--alpha-count", type=int, default=9)
    p.add_argument("--output", required=True, help="CSV output path")
    p.add_argument("--no-plot", action="store_true", help="skip the figure next to the CSV")
    p.set_defaults(func=run_sweep)

    p = sub.add_parser("oracle-check", help="sampled product-state maxima for one state")
    _add_state_options(p)
    p.add_argument("--metric", default="standard",
                   choices=["standard", "modified", "ghz", "ghz-xy"])
    p.add_argument("--partition", help="restrict to one partition, e.g. 12|3")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output", help="write the JSON report here instead of stdout")
    p.set_defaults(func=run_oracle_check)

    p = sub.add_parser("schmidt", help="generalized Schmidt normal form of a 3-qubit state")
    _add_state_options(p)
    _add_optimizer_options(p)
    p.add_argument("--check-tol", type=float, default=1e-6)
    p.add_argument("--output", help="write the JSON report here instead of stdout")
    p.set_defaults(func=run_schmidt)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, NotAStateError, StateFileError, NumericError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
