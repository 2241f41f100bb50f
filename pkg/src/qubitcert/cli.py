"""Command-line interface: generate configs, simulate records, analyze them,
audit the drift bound, and run extremal searches.

Exit codes are a stable contract: 0 success, 2 usage or configuration error,
3 I/O error, 4 record-schema violation.  Every random choice flows from the
--seed flag, so simulated records, CSV reports, and search results are
byte-reproducible.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .configs import (
    BUILTIN_IDS,
    ConfigSet,
    builtin_config,
    config_bloch_vectors,
    load_config,
    save_config,
)
from .extremal import (
    DEFAULT_RESTARTS,
    ExtremalProblem,
    InconsistencyError,
    maximize_witness,
    save_search_result,
)
from .noise import (
    CoherentLeakParams,
    DriftModel,
    LeakageParams,
    apply_common_leakage,
    apply_readout_error,
    coherent_leak_prob_matrix,
    drift_bound,
    generate_drift_ensemble,
    predicted_prob_matrix,
)
from .reports import analyze_record, render_text, write_scatter_csv, write_scatter_svg
from .sampling import (
    ExperimentPlan,
    RecordSchemaError,
    load_record,
    save_record,
    simulate_record,
)
from .witness import witness, witness_variance

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_SCHEMA = 4

_TARGETS = {
    (2, "real"): ("0 (witness vanishes identically for qubits)", 0.0),
    (2, "complex"): ("0 (witness vanishes identically for qubits)", 0.0),
    (3, "real"): ("27*sqrt(2)/64 = 0.5966213...", 27.0 * math.sqrt(2.0) / 64.0),
    (3, "complex"): ("~0.632 (numerical, no known closed form)", None),
    (4, "real"): ("2^12/3^7 = 1.8728852...", 2.0**12 / 3.0**7),
    (4, "complex"): ("2^12/3^7 = 1.8728852...", 2.0**12 / 3.0**7),
}


def _resolve_config(value: str) -> ConfigSet:
    """Accept a built-in id or a path to a config JSON file."""
    if value in BUILTIN_IDS:
        return builtin_config(value)
    path = Path(value)
    if path.exists():
        return load_config(path)
    raise ValueError(
        f"{value!r} is neither a built-in config id ({', '.join(BUILTIN_IDS)}) "
        "nor an existing config file"
    )


def cmd_gen_config(args) -> int:
    if args.id is not None:
        config = builtin_config(args.id)
    else:
        config = load_config(args.config)
    out = Path(args.out) if args.out else Path(f"{config.id}.json")
    save_config(config, out)
    states, effects = config_bloch_vectors(config)
    print(f"config {config.id!r} -> {out}")
    for j, s in enumerate(states, start=1):
        x, y, z = s.n
        print(f"  prep n_{j} = ({x:+.6f}, {y:+.6f}, {z:+.6f})")
    for k, e in enumerate(effects, start=1):
        x, y, z = e.m
        print(f"  meas m_{k} = ({x:+.6f}, {y:+.6f}, {z:+.6f})")
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = _resolve_config(args.config)
    drift = None
    if args.drift_eps > 0.0:
        if args.coherent_leak is not None or args.leak_lambda or args.readout_e0 or args.readout_e1:
            raise ValueError(
                "--drift-eps cannot be combined with other noise flags: "
                "drifted matrices are re-derived from the clean gate angles"
            )
        drift = DriftModel(args.drift_eps, args.jobs, args.drift_mode)
    if args.coherent_leak is not None:
        true_p = coherent_leak_prob_matrix(config, CoherentLeakParams(args.coherent_leak))
    else:
        true_p = predicted_prob_matrix(config)
    if args.leak_lambda or args.leak_mu:
        true_p = apply_common_leakage(
            true_p, LeakageParams(args.leak_lambda, args.leak_mu)
        )
    if args.readout_e0 or args.readout_e1:
        true_p = apply_readout_error(true_p, args.readout_e0, args.readout_e1)

    plan = ExperimentPlan(args.jobs, args.shots, args.reps, args.seed)
    record = simulate_record(true_p, plan, drift, config=config, device=args.device)
    save_record(record, args.out)
    t = plan.total_counts
    sigma = math.sqrt(witness_variance(true_p, t))
    print(f"wrote {args.out}: {args.jobs} jobs x {args.shots} shots x {args.reps} reps")
    print(f"T = {t}")
    print(f"true W = {witness(true_p):+.6e}, predicted sigma(W) = {sigma:.6e}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    record = load_record(args.record)
    report = analyze_record(record)
    print(render_text(report))
    if args.out:
        write_scatter_csv(report, args.out)
        print(f"scatter CSV -> {args.out}")
    if args.svg:
        write_scatter_svg(report, args.svg)
        print(f"scatter SVG -> {args.svg}")
    return EXIT_OK


def cmd_audit_drift(args) -> int:
    config = _resolve_config(args.config)
    bound = drift_bound(args.drift_eps)
    modes = (
        ("angle-jitter", "column-mix")
        if args.drift_mode == "both"
        else (args.drift_mode,)
    )
    print(
        f"auditing {args.trials} ensembles of {args.jobs} jobs at "
        f"eps = {args.drift_eps:g} (bound 80*sqrt(2)*eps^2 = {bound:.6e})"
    )
    all_ok = True
    rows = ["mode,trials,max_abs_pooled_W,bound,fraction,pass"]
    for mode in modes:
        model = DriftModel(args.drift_eps, args.jobs, mode)
        worst = 0.0
        for trial in range(args.trials):
            mats = generate_drift_ensemble(config, model, args.seed + trial)
            pooled = np.mean([m.p for m in mats], axis=0)
            worst = max(worst, abs(float(np.linalg.det(pooled))))
        # 1e-12 slack absorbs determinant roundoff, which otherwise fails the
        # exactly-zero bound at eps = 0
        ok = worst <= bound + 1e-12
        all_ok &= ok
        frac = worst / bound if bound > 0.0 else 0.0
        rows.append(f"{mode},{args.trials},{worst!r},{bound!r},{frac!r},{ok}")
        print(
            f"  {mode:12s}: max pooled |W| = {worst:.6e} "
            f"({100.0 * frac:.3f}% of bound) -> {'PASS' if ok else 'FAIL'}"
        )
    if args.out:
        Path(args.out).write_text("\n".join(rows) + "\n")
        print(f"audit CSV -> {args.out}")
    print("PASS: bound never violated" if all_ok else "FAIL: bound violated")
    return EXIT_OK


def cmd_optimize(args) -> int:
    problem = ExtremalProblem(args.dim, args.field, args.effect_class)
    restarts = args.restarts or DEFAULT_RESTARTS[args.dim]
    label, target = _TARGETS[(args.dim, args.field)]
    print(f"d = {args.dim}, field = {args.field}, restarts = {restarts}")
    print(f"target: {label}")
    result = maximize_witness(problem, restarts, seed=args.seed)
    print(f"best |W| = {abs(result.best_W):.12f}  (converged: {result.converged})")
    if target is not None:
        print(f"gap to target: {abs(result.best_W) - target:+.3e}")
    if args.out:
        save_search_result(result, problem, args.out)
        print(f"search result JSON -> {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubitcert",
        description="Determinant dimension-witness certification toolkit.",
    )
    parser.add_argument("--version", action="version", version=f"qubitcert {__version__}")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("gen-config", help="write a config JSON and show its Bloch vectors")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("id", nargs="?", help=f"built-in id: {', '.join(BUILTIN_IDS)}")
    group.add_argument("--config", help="custom config file to canonicalize")
    p.add_argument("--out", help="output path (default: <id>.json)")
    p.set_defaults(func=cmd_gen_config)

    p = sub.add_parser("simulate", help="simulate an experiment record")
    p.add_argument("--config", required=True, help="built-in id or config file")
    p.add_argument("--jobs", type=int, default=10)
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--leak-lambda", type=float, default=0.0, help="common leakage weight")
    p.add_argument("--leak-mu", type=float, default=0.0, help="external-state response")
    p.add_argument("--readout-e0", type=float, default=0.0, help="P(read 1 | true 0)")
    p.add_argument("--readout-e1", type=float, default=0.0, help="P(read 0 | true 1)")
    p.add_argument("--drift-eps", type=float, default=0.0, help="per-job drift budget")
    p.add_argument(
        "--drift-mode", choices=["angle-jitter", "column-mix"], default="angle-jitter"
    )
    p.add_argument(
        "--coherent-leak", type=float, default=None, metavar="CHI",
        help="coherent leak angle per gate (three-level model)",
    )
    p.add_argument("--device", default="simulator", help="device label for the record")
    p.add_argument("--out", default="record.json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="analyze a record file")
    p.add_argument("record", help="record JSON file")
    p.add_argument("--out", help="per-job scatter CSV path")
    p.add_argument("--svg", help="per-job scatter SVG path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("audit-drift", help="stress the pooled-drift bound")
    p.add_argument("--config", required=True)
    p.add_argument("--drift-eps", type=float, required=True)
    p.add_argument("--jobs", type=int, default=10)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--drift-mode",
        choices=["both", "angle-jitter", "column-mix"],
        default="both",
    )
    p.add_argument("--out", help="audit summary CSV path")
    p.set_defaults(func=cmd_audit_drift)

    p = sub.add_parser("optimize", help="maximize |W| over d-dimensional strategies")
    p.add_argument("--dim", type=int, choices=[2, 3, 4], required=True)
    p.add_argument("--field", choices=["real", "complex"], default="complex")
    p.add_argument("--restarts", type=int, default=None, help="default: per-dim budget")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--effect-class", choices=["projective", "general"], default="projective"
    )
    p.add_argument("--out", help="search result JSON path")
    p.set_defaults(func=cmd_optimize)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    if not getattr(args, "func", None):
        parser.print_help()
        return EXIT_USAGE
    try:
        return args.func(args)
    except RecordSchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (ValueError, InconsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
