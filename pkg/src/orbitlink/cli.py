"""Command-line entry point: ``orbitlink sweep|recipe|validate``.

Exit codes: 0 success, 1 i/o error, 2 configuration error, 3 numerical
error, 4 validation failure.
"""
from __future__ import annotations

import argparse
import sys

from .config import parse_config
from .errors import ConvergenceError, DegenerateGeometry, DomainError, ParseError, QuadratureError, ValidationError
from .scenario import ScenarioConfig
from .sweep import (
    DEFAULT_MC_TRIALS,
    METRICS,
    PARAMETERS,
    RECIPES,
    SweepSpec,
    emit_csv,
    format_csv,
    linspace_values,
    recipe,
    run_sweeps,
)
from .validation import DEFAULT_TRIALS, validate

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VALIDATION = 4


def _seed(args) -> int:
    if args.seed is None:
        print("warning: --seed not given; using seed 0", file=sys.stderr)
        return 0
    return args.seed


def _write(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _base(args) -> ScenarioConfig:
    return parse_config(args.config) if args.config else ScenarioConfig()


def _cmd_sweep(args) -> int:
    metrics = tuple(m.strip() for m in args.metrics.split(",") if m.strip())
    spec = SweepSpec(
        args.param,
        linspace_values(args.start, args.stop, args.steps),
        metrics,
        mc_trials=args.trials,
        seed=_seed(args),
    )
    result = run_sweeps([spec], _base(args), workers=args.threads)
    if args.out in (None, "-"):
        sys.stdout.write(format_csv(result))
    else:
        emit_csv(result, args.out)
    return EXIT_OK


def _cmd_recipe(args) -> int:
    specs = recipe(args.name, mc_trials=args.trials, seed=_seed(args))
    result = run_sweeps(specs, _base(args), workers=args.threads)
    if args.out in (None, "-"):
        sys.stdout.write(format_csv(result))
    else:
        emit_csv(result, args.out)
    return EXIT_OK


def _cmd_validate(args) -> int:
    if args.scenarios < 1:
        raise ValidationError("scenarios", "must be at least 1")
    report = validate(
        args.scenarios, _seed(args), args.trials, base=_base(args), workers=args.threads
    )
    if args.out:
        _write(report.to_csv(), args.out)
    for c in report.failures:
        print(
            f"FAIL scenario {c.index} {c.metric}: analytic {c.analytic:.6g} "
            f"vs simulated {c.monte_carlo:.6g} (|delta| {c.delta:.3g} > {c.tolerance:.3g})",
            file=sys.stderr,
        )
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_VALIDATION


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _seed_int(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2**64)")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="orbitlink",
        description="Availability and coverage of LEO-relayed IoT-to-GEO links.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, trials_default):
        sp.add_argument("--config", help="JSON scenario file (defaults when omitted)")
        sp.add_argument("--seed", type=_seed_int, help="master seed for all Monte Carlo draws")
        sp.add_argument("--trials", type=_positive_int, default=trials_default, help="Monte Carlo trials per point")
        sp.add_argument("--threads", type=_positive_int, help="worker threads (default: CPU count)")

    sw = sub.add_parser("sweep", help="sweep one parameter and write CSV")
    sw.add_argument("--param", required=True, choices=sorted(PARAMETERS))
    sw.add_argument("--from", dest="start", type=float, required=True)
    sw.add_argument("--to", dest="stop", type=float, required=True)
    sw.add_argument("--steps", type=_positive_int, required=True)
    sw.add_argument("--metrics", required=True, help=f"comma-separated subset of {','.join(METRICS)}")
    sw.add_argument("--out", help="output CSV path (stdout when omitted)")
    common(sw, DEFAULT_MC_TRIALS)
    sw.set_defaults(func=_cmd_sweep)

    rc = sub.add_parser("recipe", help="run a preset sweep reproducing one figure")
    rc.add_argument("name", choices=RECIPES)
    rc.add_argument("--out", help="output CSV path (stdout when omitted)")
    common(rc, DEFAULT_MC_TRIALS)
    rc.set_defaults(func=_cmd_recipe)

    va = sub.add_parser("validate", help="compare analytic and simulated metrics on random scenarios")
    va.add_argument("--scenarios", type=int, default=20)
    va.add_argument("--out", help="write the per-check report as CSV")
    common(va, DEFAULT_TRIALS)
    va.set_defaults(func=_cmd_validate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, which is also our config-error code
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, ConvergenceError, DegenerateGeometry, DomainError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
