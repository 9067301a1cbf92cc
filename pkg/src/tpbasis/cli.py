"""Command line entry point: ``tpbasis convert-weights | verify | experiment``.

Exit codes: 0 on success, 2 when an inequality is violated, 3 when a draw
budget runs out.  ``TPBASIS_DIGITS`` sets the default working precision.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import experiments, harness
from .conversion import WeightRejection, all_positive, convert_weights
from .numerics import PrecisionConfig, default_config, format_rational

EXIT_OK, EXIT_VIOLATION, EXIT_BUDGET = 0, 2, 3


def _precision(args) -> PrecisionConfig:
    return PrecisionConfig(args.digits) if args.digits else default_config()


def _weights(text: str) -> list[Fraction]:
    return [Fraction(x) for x in text.replace(",", " ").split()]


def cmd_convert(args) -> int:
    w = [x for chunk in args.weights for x in _weights(chunk)]
    v = convert_weights(args.target, w, args.n)
    print(json.dumps({"n": args.n, "target": args.target,
                      "weights": [format_rational(x) for x in v],
                      "positive": all_positive(v)}))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _precision(args)
    model = harness.RandomModelConfig(seed=args.seed, n_min=min(2, args.nmax), n_max=args.nmax,
                                      trials=args.trials)
    try:
        report = harness.run_suite(args.suite, model, cfg, workers=args.workers)
    except WeightRejection as exc:
        print(exc, file=sys.stderr)
        return EXIT_BUDGET
    print(json.dumps(report.to_json(), indent=2))
    print(report.summary(), file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_tables(args) -> int:
    cfg = _precision(args)
    try:
        rows = experiments.run_table_experiment(args.nmin, args.nmax, args.seed, cfg,
                                                max_draws=args.max_draws)
    except experiments.InequalityViolation as exc:
        print(json.dumps(exc.record, indent=2), file=sys.stderr)
        return EXIT_VIOLATION
    except WeightRejection as exc:
        print(exc, file=sys.stderr)
        return EXIT_BUDGET
    _write(experiments.emit_tables(rows, args.format), args.out)
    return EXIT_OK


def cmd_counterexample(args) -> int:
    cfg = _precision(args)
    result = experiments.search_counterexamples(args.quantity, args.budget, args.seed, cfg)
    _write(json.dumps(result.to_json(), indent=2), args.out)
    print(f"{result.quantity}: {result.status} after {result.draws} draws", file=sys.stderr)
    return EXIT_OK if result.complete else EXIT_BUDGET


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tpbasis",
                                description="Totally positive bases, corner cuttings and their spectra.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("convert-weights", help="Bernstein weights to Said-Ball or DP weights")
    c.add_argument("--n", type=int, required=True, help="polynomial degree")
    c.add_argument("--target", choices=["said-ball", "dp"], required=True)
    c.add_argument("--weights", nargs="+", required=True,
                   help="n+1 rationals, space or comma separated (e.g. 1 2 1 or 1,3/2,1)")
    c.set_defaults(func=cmd_convert)

    v = sub.add_parser("verify", help="run a randomized property suite")
    v.add_argument("--suite", choices=harness.SUITES, required=True)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--digits", type=int, default=None, help="decimal digits (default: $TPBASIS_DIGITS or 100)")
    v.add_argument("--nmax", type=int, default=8)
    v.add_argument("--workers", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", help="regenerate the collocation experiments")
    esub = e.add_subparsers(dest="experiment", required=True)
    t = esub.add_parser("tables", help="minimal values, condition numbers and maximal singular values")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--digits", type=int, default=None)
    t.add_argument("--nmin", type=int, default=3)
    t.add_argument("--nmax", type=int, default=8)
    t.add_argument("--out", default=None, help="output file (default: stdout)")
    t.add_argument("--format", choices=["csv", "json", "text"], default="text")
    t.add_argument("--max-draws", type=int, default=experiments.MAX_WEIGHT_DRAWS,
                   help="weight draws per n before giving up")
    t.set_defaults(func=cmd_tables)

    x = esub.add_parser("counterexample", help="search both orderings of sigma_max or kappa_2")
    x.add_argument("--quantity", choices=["sigma-max", "kappa2"], required=True)
    x.add_argument("--budget", type=int, default=200)
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--digits", type=int, default=None)
    x.add_argument("--out", default=None)
    x.set_defaults(func=cmd_counterexample)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
