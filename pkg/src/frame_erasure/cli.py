"""Command-line entry point.

One binary, one subcommand per experiment. Reports are JSON by default
(CSV is a flat projection for plotting) and contain the config echo, tool
version, and seed needed to reproduce the run. Identical flags and seed
produce byte-identical output; for that reason wall-clock timing goes to
stderr, never into the report.

Exit codes: 0 success, 2 validation error (bad flags or parameter
preconditions), 1 runtime failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time

from . import __version__, experiments
from .frames import (
    frame_bounds,
    harmonic_frame,
    load_frame,
    random_sphere_frame,
    repeated_basis_frame,
    tightness_defect,
)

COMMANDS = (
    "tightness",
    "encode-decode",
    "tail",
    "threshold",
    "scaling",
    "rudelson",
    "khinchine",
    "bernstein",
)


def _comma_floats(text: str) -> list:
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}")


def _comma_ints(text: str) -> list:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frame-erasure",
        description="Frame-expansion coding with random erasures: "
        "tightness checks, reconstruction trials, deviation-norm tails, "
        "thresholds, and the supporting operator-norm inequalities.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p):
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--seed", type=int, default=0)

    def add_frame_source(p):
        p.add_argument(
            "--family", choices=["harmonic", "sphere", "repeated-basis"]
        )
        p.add_argument("--frame-file", help="load the frame from a file instead")
        p.add_argument("--n", type=int, help="ambient dimension")
        p.add_argument("--m", type=int, help="vector count (default 64n)")
        p.add_argument("--s", type=int, help="copies per direction (default 100)")

    p = sub.add_parser("tightness", help="frame bounds and tightness defect")
    add_frame_source(p)
    add_output(p)

    p = sub.add_parser(
        "encode-decode", help="full pipeline trials on random unit sources"
    )
    add_frame_source(p)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--sample-mode", choices=["bernoulli", "fixed"], default="bernoulli")
    add_output(p)

    p = sub.add_parser("tail", help="deviation-norm exceedance probabilities")
    add_frame_source(p)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--t", type=_comma_floats, required=True, help="comma list")
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--sample-mode", choices=["bernoulli", "fixed"], default="bernoulli")
    add_output(p)

    p = sub.add_parser("threshold", help="smallest k meeting a success target")
    add_frame_source(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--success-prob", type=float, default=0.9)
    p.add_argument("--trials", type=int, default=2000)
    add_output(p)

    p = sub.add_parser("scaling", help="k_star versus n log n across dimensions")
    p.add_argument(
        "--family", choices=["harmonic", "sphere", "repeated-basis"], default="harmonic"
    )
    p.add_argument("--n-list", type=_comma_ints, required=True, help="comma list")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--success-prob", type=float, default=0.9)
    p.add_argument("--trials", type=int, default=2000)
    add_output(p)

    p = sub.add_parser(
        "rudelson", help="rank-one Rademacher moment inequality constant"
    )
    p.add_argument("--n", type=int, required=True, help="ambient dimension")
    p.add_argument("--m", type=int, help="vector count (default 2n)")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--trials", type=int, default=1000)
    add_output(p)

    p = sub.add_parser("khinchine", help="noncommutative Khinchine sandwich")
    p.add_argument("--n", type=int, required=True, help="ambient dimension")
    p.add_argument("--m", type=int, help="operator count (default 2n)")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--trials", type=int, default=1000)
    add_output(p)

    p = sub.add_parser("bernstein", help="received-count concentration bound")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--s-grid", type=_comma_floats, required=True, help="comma list")
    p.add_argument("--trials", type=int, default=10000)
    add_output(p)

    return parser


def _frame_from_args(args):
    if getattr(args, "frame_file", None):
        return load_frame(args.frame_file)
    if not getattr(args, "family", None):
        raise ValueError("either --family or --frame-file is required")
    if args.n is None:
        raise ValueError("--n is required with --family")
    if args.family == "harmonic":
        return harmonic_frame(args.n, args.m if args.m is not None else 64 * args.n)
    if args.family == "sphere":
        return random_sphere_frame(
            args.n, args.m if args.m is not None else 64 * args.n, args.seed
        )
    return repeated_basis_frame(args.n, args.s if args.s is not None else 100)


def _unit_vectors(d: int, count: int, seed: int):
    if d is None or d < 1:
        raise ValueError("n must be ≥ 1")
    if count < d:
        raise ValueError("vector count must be ≥ the dimension")
    return random_sphere_frame(d, count, seed).vectors


def _run_tightness(args):
    f = _frame_from_args(args)
    bounds = frame_bounds(f)
    return {
        "n": f.n,
        "m": f.m,
        "kind": f.kind,
        "tightness_defect": tightness_defect(f),
        "bound_lower": bounds.lower,
        "bound_upper": bounds.upper,
    }


def _run_encode_decode(args):
    f = _frame_from_args(args)
    result = experiments.encode_decode_trials(
        f, args.k, args.trials, args.seed, mode=args.sample_mode
    )
    return dataclasses.asdict(result)


def _run_tail(args):
    f = _frame_from_args(args)
    estimates = experiments.tail_estimate(
        f, args.k, args.epsilon, args.t, args.trials, args.seed, mode=args.sample_mode
    )
    return {
        "n": f.n,
        "m": f.m,
        "kind": f.kind,
        "estimates": [dataclasses.asdict(est) for est in estimates],
    }


def _threshold_family(args):
    if getattr(args, "frame_file", None):
        return load_frame(args.frame_file)
    if not getattr(args, "family", None):
        raise ValueError("either --family or --frame-file is required")
    return args.family


def _run_threshold(args):
    family = _threshold_family(args)
    n = args.n
    if n is None:
        if hasattr(family, "n"):
            n = family.n
        else:
            raise ValueError("--n is required with --family")
    result = experiments.threshold_search(
        family, n, args.epsilon, args.success_prob, args.trials, args.seed
    )
    return dataclasses.asdict(result)


def _run_scaling(args):
    result = experiments.scaling_study(
        args.family,
        args.n_list,
        args.epsilon,
        args.success_prob,
        args.trials,
        args.seed,
    )
    return dataclasses.asdict(result)


def _run_rudelson(args):
    count = args.m if args.m is not None else 2 * (args.n or 0)
    vectors = _unit_vectors(args.n, count, args.seed)
    result = experiments.rudelson_check(vectors, args.p, args.trials, args.seed)
    return dataclasses.asdict(result)


def _run_khinchine(args):
    from .linalg import SymOperator

    count = args.m if args.m is not None else 2 * (args.n or 0)
    vectors = _unit_vectors(args.n, count, args.seed)
    operators = [SymOperator(v[:, None] * v[None, :]) for v in vectors]
    result = experiments.khinchine_check(operators, args.p, args.trials, args.seed)
    return dataclasses.asdict(result)


def _run_bernstein(args):
    result = experiments.bernstein_check(
        args.m, args.k, args.s_grid, args.trials, args.seed
    )
    return dataclasses.asdict(result)


_HANDLERS = {
    "tightness": _run_tightness,
    "encode-decode": _run_encode_decode,
    "tail": _run_tail,
    "threshold": _run_threshold,
    "scaling": _run_scaling,
    "rudelson": _run_rudelson,
    "khinchine": _run_khinchine,
    "bernstein": _run_bernstein,
}


def _config_echo(args) -> dict:
    skip = {"command", "out"}
    echo = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        echo[key] = value
    return echo


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _csv_table(command: str, results: dict, config: dict):
    seed = config.get("seed", 0)
    if command == "tail":
        header = [
            "t",
            "empirical_prob",
            "ci_low",
            "ci_high",
            "mean_deviation_norm",
            "trials",
            "k",
            "epsilon",
            "seed",
        ]
        rows = [
            [
                est["t"],
                est["empirical_prob"],
                est["ci_low"],
                est["ci_high"],
                est["mean_deviation_norm"],
                est["trials"],
                est["k"],
                est["epsilon"],
                seed,
            ]
            for est in results["estimates"]
        ]
    elif command == "scaling":
        header = ["n", "k_star", "n_log_n", "ratio"]
        rows = [
            [row["n"], row["k_star"], row["n_log_n"], row["ratio"]]
            for row in results["rows"]
        ]
    elif command == "threshold":
        header = [
            "k",
            "empirical_prob",
            "ci_low",
            "ci_high",
            "mean_deviation_norm",
            "trials",
            "epsilon",
            "seed",
        ]
        rows = [
            [
                est["k"],
                est["empirical_prob"],
                est["ci_low"],
                est["ci_high"],
                est["mean_deviation_norm"],
                est["trials"],
                est["epsilon"],
                seed,
            ]
            for est in results["search_grid"]
        ]
    elif command == "bernstein":
        header = ["s", "empirical_prob", "bound", "std_error", "trials", "m", "k", "seed"]
        rows = [
            [
                pt["s"],
                pt["empirical_prob"],
                pt["bound"],
                pt["std_error"],
                results["trials"],
                results["m"],
                results["k"],
                seed,
            ]
            for pt in results["points"]
        ]
    elif command == "rudelson":
        header = ["d", "p", "trials", "lhs", "rhs_factor", "ratio", "seed"]
        rows = [
            [
                results["d"],
                results["p"],
                results["trials"],
                results["lhs"],
                results["rhs_factor"],
                results["ratio"],
                seed,
            ]
        ]
    elif command == "khinchine":
        header = [
            "d",
            "p",
            "operator_count",
            "trials",
            "middle",
            "r_value",
            "lower_ratio",
            "upper_ratio",
            "seed",
        ]
        rows = [
            [
                results["d"],
                results["p"],
                results["operator_count"],
                results["trials"],
                results["middle"],
                results["r_value"],
                results["lower_ratio"],
                results["upper_ratio"],
                seed,
            ]
        ]
    elif command == "tightness":
        header = ["n", "m", "kind", "tightness_defect", "bound_lower", "bound_upper"]
        rows = [
            [
                results["n"],
                results["m"],
                results["kind"],
                results["tightness_defect"],
                results["bound_lower"],
                results["bound_upper"],
            ]
        ]
    elif command == "encode-decode":
        header = [
            "k",
            "trials",
            "mean_error",
            "max_error",
            "mean_deviation_norm",
            "max_deviation_norm",
            "degenerate_trials",
            "seed",
        ]
        rows = [
            [
                results["k"],
                results["trials"],
                results["mean_error"],
                results["max_error"],
                results["mean_deviation_norm"],
                results["max_deviation_norm"],
                results["degenerate_trials"],
                seed,
            ]
        ]
    else:  # pragma: no cover - commands are closed set
        raise ValueError(f"no CSV projection for command {command!r}")
    return header, rows


def render_csv(report: dict) -> str:
    """Flat CSV projection of a report: header plus one row per point."""
    header, rows = _csv_table(report["command"], report["results"], report["config"])
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def emit_csv(report: dict, path: str) -> None:
    """Write the CSV projection of ``report`` to ``path``."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(render_csv(report))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        results = _HANDLERS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failures (convergence, internal checks)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report = {
        "command": args.command,
        "version": __version__,
        "config": _config_echo(args),
        "results": results,
    }
    try:
        text = render_csv(report) if args.format == "csv" else render_json(report)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    duration = time.perf_counter() - started
    print(f"completed in {duration:.2f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
