"""Command line entry point: ``rados <command> [options]``.

Exit codes: 0 success, 2 bad input, 3 numeric failure, 4 DP draw budget
exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import RadoSet, enumerate_all_rados
from .dataset import load_csv, load_haberman, max_abs_scale
from .errors import (DrawBudgetExceeded, NumericError, UnderdeterminedError,
                     WeakLearnerError, ZeroColumnError)
from .experiment import (ExperimentSpec, build_rados, run_cv_experiment, run_noise_sweep,
                         summarize_trace, train_once)
from .losses import LinearModel, equivalence_gap, logloss, logistic_rado_risk
from .privacy import DpFeatureConfig, dpfreal
from .reconstruction import hausdorff, load_matrix, recover_edges, save_matrix

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_BUDGET = 0, 2, 3, 4
MODEL_SCHEMA_VERSION = "1.0"


def _label_col(text: str):
    try:
        return int(text)
    except ValueError:
        return text


def _add_data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", default="haberman",
                   help="CSV file, or 'haberman' for the bundled dataset (default)")
    p.add_argument("--label-col", type=_label_col, default=-1,
                   help="label column name or index (default: last)")
    p.add_argument("--positive", default=">0",
                   help="rule mapping raw labels to +1: '>0.5', 'A,B', ... (default '>0')")
    p.add_argument("--no-header", action="store_true", help="the CSV has no header row")
    p.add_argument("--scale", action="store_true", help="divide each feature by its max |value|")


def _add_learner_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algo", choices=["radoboost", "adaboost_ss"], default="radoboost")
    p.add_argument("--T", type=int, default=1000, help="boosting rounds (default 1000)")
    p.add_argument("--n", type=int, default=None,
                   help="rados per training set (default min(1000, train/2))")
    p.add_argument("--rado", default="uniform", help="uniform | support=F | dp:j,eps")
    p.add_argument("--weak", default="strong", help="strong | clamped[:f] | median | lambda:x")
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)


def _load(args):
    if args.data == "haberman":
        ds = load_haberman()
    else:
        ds = load_csv(args.data, args.label_col, args.positive, header=not args.no_header)
    return max_abs_scale(ds) if args.scale else ds


def _spec(args, **extra) -> ExperimentSpec:
    return ExperimentSpec(
        data=args.data, label_column=args.label_col, positive_rule=args.positive,
        header=not args.no_header, algorithm=args.algo, rado=args.rado, T=args.T, n=args.n,
        weak=args.weak, kappa=args.kappa, seed=args.seed, **extra,
    )


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_train(args) -> int:
    ds = _load(args)
    spec = _spec(args)
    model, trace, best, n_used = train_once(ds, spec)
    payload = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "algorithm": spec.algorithm,
        "d": ds.d,
        "feature_names": list(ds.feature_names),
        "theta": model.theta.tolist(),
        "config": spec.echo(),
        "n_rados": n_used,
        "training_error": 100.0 * float(np.mean(ds.y * model.decision_function(ds.X) <= 0)),
        "trace": summarize_trace(trace),
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    if args.trace:
        Path(args.trace).write_text(trace.to_csv())
    return EXIT_OK


def cmd_bench(args) -> int:
    ds = _load(args)
    spec = _spec(args, folds=args.folds, workers=args.workers)
    result = run_cv_experiment(spec, ds)
    _emit(result.to_json(include_time=args.time), args.out)
    print(f"{spec.algorithm} {spec.rado}: {result.mean:.2f} +- {result.std:.2f} "
          f"over {spec.folds} folds", file=sys.stderr)
    return EXIT_OK


def cmd_sweep(args) -> int:
    ds = _load(args)
    sigmas = [float(s) for s in args.sigmas.split(",")]
    strategies = args.strategies.split(";") if args.strategies else [args.rado]
    spec = _spec(args, folds=args.folds, sigmas=sigmas, repeats=args.repeats, workers=args.workers)
    table = run_noise_sweep(spec, strategies, ds)
    _emit(table.rows_csv(), args.out)
    if args.runs_out:
        Path(args.runs_out).write_text(table.runs_csv())
    return EXIT_OK


def cmd_rado_gen(args) -> int:
    ds = _load(args)
    n = args.n if args.n is not None else max(1, min(1000, ds.m // 2))
    rados = build_rados(ds, args.rado, n, np.random.SeedSequence([args.seed]))
    text = rados.to_json() if args.format == "json" else rados.to_csv(ds.feature_names)
    _emit(text, args.out)
    return EXIT_OK


def cmd_dp_sample(args) -> int:
    ds = _load(args)
    rados = dpfreal(ds, DpFeatureConfig(args.j, args.eps, args.n, args.seed), eta=args.eta)
    _emit(rados.to_csv(ds.feature_names), args.out)
    meta = json.dumps(rados.metadata, indent=2)
    if args.meta:
        Path(args.meta).write_text(meta + "\n")
    else:
        print(meta, file=sys.stderr)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    """Pi is d x n (one rado per column), S is m x n."""
    if args.rados.endswith(".json"):
        Pi = RadoSet.from_json(Path(args.rados).read_text()).values.T
    else:
        Pi = load_matrix(args.rados)
    S = load_matrix(args.selection)
    recovery = recover_edges(Pi, S)
    report = recovery.report()
    if args.truth:
        report["hausdorff_to_truth"] = hausdorff(recovery.E, load_matrix(args.truth))
    if args.out:
        save_matrix(args.out, recovery.E)
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_losses_check(args) -> int:
    ds = _load(args)
    if args.theta:
        thetas = [np.array([float(v) for v in args.theta.split(",")])]
    else:
        rng = np.random.default_rng(args.seed)
        thetas = [rng.normal(size=ds.d) for _ in range(args.models)]
    full = enumerate_all_rados(ds)
    rows = []
    for theta in thetas:
        model = LinearModel(theta)
        gap = equivalence_gap(ds, model, full)
        rows.append({"theta": theta.tolist(), "logloss": logloss(ds, model),
                     "rado_risk": logistic_rado_risk(full, model, ds.m), "gap": abs(gap)})
    worst = max(r["gap"] for r in rows)
    print(json.dumps({"m": ds.m, "rados": full.n, "max_gap": worst, "tolerance": args.tol,
                      "ok": worst <= args.tol, "models": rows}, indent=2))
    return EXIT_OK if worst <= args.tol else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rados", description="Learning from Rademacher observations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit one model on a whole dataset")
    _add_data_args(p)
    _add_learner_args(p)
    p.add_argument("--out", help="model JSON path (default stdout)")
    p.add_argument("--trace", help="also write the per-round trace as CSV")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("bench", help="stratified cross-validation benchmark")
    _add_data_args(p)
    _add_learner_args(p)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--workers", type=int, default=1, help="parallel fold workers")
    p.add_argument("--time", action="store_true", help="include wall time in the result JSON")
    p.add_argument("--out", help="result JSON path (default stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sweep", help="Gaussian-noise sweep, RadoBoost vs AdaBoost-SS")
    _add_data_args(p)
    _add_learner_args(p)
    p.add_argument("--sigmas", required=True, help="comma separated noise levels, e.g. 0,0.1,0.5")
    p.add_argument("--strategies", help="';'-separated rado strategies (default: --rado)")
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="summary rows CSV (default stdout)")
    p.add_argument("--runs-out", help="per-run rows CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("rado", help="rado utilities")
    rado_sub = p.add_subparsers(dest="rado_command", required=True)
    g = rado_sub.add_parser("gen", help="generate rados from a dataset")
    _add_data_args(g)
    g.add_argument("--rado", default="uniform", help="uniform | support=F | dp:j,eps")
    g.add_argument("--n", type=int, default=None)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--format", choices=["csv", "json"], default="csv")
    g.add_argument("--out")
    g.set_defaults(func=cmd_rado_gen)

    p = sub.add_parser("dp-sample", help="feature-wise DP rados by rejection sampling")
    _add_data_args(p)
    p.add_argument("--j", type=int, required=True, help="index of the protected boolean feature")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eta", type=float, default=0.05, help="confidence for the draw budget")
    p.add_argument("--out", help="rado CSV path (default stdout)")
    p.add_argument("--meta", help="metadata JSON path (default stderr)")
    p.set_defaults(func=cmd_dp_sample)

    p = sub.add_parser("reconstruct", help="recover edge vectors from rados and their supports")
    p.add_argument("--rados", required=True, help="d x n matrix CSV, or a rado JSON dump")
    p.add_argument("--selection", required=True, help="m x n 0/1 support matrix CSV")
    p.add_argument("--truth", help="d x m edge matrix CSV to report the Hausdorff distance")
    p.add_argument("--out", help="write the recovered d x m edge matrix here")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("losses", help="loss utilities")
    loss_sub = p.add_subparsers(dest="losses_command", required=True)
    c = loss_sub.add_parser("check", help="check logloss = log 2 + log(exp rado-risk)/m")
    _add_data_args(c)
    c.add_argument("--theta", help="comma separated model weights (default: random models)")
    c.add_argument("--models", type=int, default=5)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--tol", type=float, default=1e-9)
    c.set_defaults(func=cmd_losses_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DrawBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (NumericError, UnderdeterminedError, ZeroColumnError, WeakLearnerError,
            np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
