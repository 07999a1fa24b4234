"""Command-line entry point.

    python cli.py eval --config run.json --z 1e-8
    python cli.py sweep --config run.json --output sweep.csv
    python cli.py limits --config run.json
    python cli.py nonadd --kappa 0.05 0.1 0.2
    python cli.py validate --level full

Exit codes: 0 success, 1 numerical failure, 2 configuration failure.
"""
import math
import argparse
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import settings
from errors import CasimirError, ConfigError
from potential import (
    ReducedPoint,
    SeriesSpec,
    evaluate_potential,
    long_range_factor,
    long_range_factor_numeric,
    nonadditivity_ratio,
    nonadditivity_ratio_numeric,
    perfect_conductor_reduced,
    short_range_bracket_numeric,
    short_range_reduced,
    to_physical,
    UNIT_SYSTEMS,
)
from results_table import (
    EVAL_COLUMNS,
    LIMITS_COLUMNS,
    NONADD_COLUMNS,
    SWEEP_COLUMNS,
    ResultsTable,
)
from run_config import OutputSpec, RunConfig, load_config
from validation import run_validation

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_CONFIG = 2

DEFAULT_KAPPAS = (0.01, 0.02, 0.05, 0.1, 0.15, 0.2)


def _evaluate_point(config: RunConfig, z: float) -> dict:
    point = ReducedPoint.from_distance(config.atom, z)
    result = evaluate_potential(point.x0, config.model, config.atom, config.tol)
    return {
        "z": z,
        "x0": point.x0,
        "v_reduced": result.v_reduced,
        "V_physical": to_physical(result, config.atom, z, config.units),
        "regime": result.regime,
        "error_estimate": result.error_estimate,
    }


def run_eval(config: RunConfig, z: float) -> int:
    if not (math.isfinite(z) and z > 0):
        raise ConfigError(f"--z must be a positive distance, got {z}")
    record = _evaluate_point(config, z)
    table = ResultsTable(EVAL_COLUMNS)
    table.add_record(**record)
    table.write(config.output.path, config.output.format)
    return EXIT_OK


def _sweep_point(config: RunConfig, z: float) -> tuple[dict, bool]:
    try:
        record = _evaluate_point(config, z)
    except CasimirError as e:
        logger.error(f"Error evaluating potential at z={z}: {e}")
        return {"z": z}, False
    conductor = perfect_conductor_reduced(record["x0"]).v_reduced
    record.pop("regime")
    record["v_perfect_conductor"] = conductor
    record["ratio_to_conductor"] = record["v_reduced"] / conductor
    return record, True


def run_sweep(config: RunConfig, workers: int = settings.SWEEP_WORKERS) -> int:
    grid = config.z_grid
    if grid is None or grid.points < 2:
        raise ConfigError("sweep needs a z_grid with at least 2 points")
    zs = [float(z) for z in grid.values()]
    logger.info(f"Sweeping {len(zs)} distances from {grid.min} to {grid.max} with {workers} workers")
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        outcomes = list(pool.map(lambda z: _sweep_point(config, z), zs))

    table = ResultsTable(SWEEP_COLUMNS, sort_by="z")
    for record, _ in outcomes:
        table.add_record(**record)
    table.write(config.output.path, config.output.format)
    failed = sum(not ok for _, ok in outcomes)
    if failed:
        logger.error(f"Error in sweep: {failed} of {len(zs)} points failed")
        return EXIT_NUMERICAL
    logger.info("Sweep finished")
    return EXIT_OK


def run_limits(config: RunConfig) -> int:
    eps = config.model.static_epsilon
    kappa = eps - 1.0
    table = ResultsTable(LIMITS_COLUMNS)
    table.add_record(quantity="epsilon", value=eps)
    table.add_record(quantity="short_range_v", value=short_range_reduced(eps))
    table.add_record(quantity="short_range_bracket_numeric", value=short_range_bracket_numeric(eps, config.tol))
    table.add_record(quantity="long_range_factor_numeric", value=long_range_factor_numeric(eps, config.tol))
    if 0 < kappa <= settings.SMALL_KAPPA_MAX:
        table.add_record(quantity="long_range_factor_small_kappa",
                         value=long_range_factor(kappa, SeriesSpec("small_kappa", 3)))
    if kappa >= settings.LARGE_KAPPA_MIN:
        table.add_record(quantity="long_range_factor_large_kappa",
                         value=long_range_factor(kappa, SeriesSpec("large_kappa", 3)))
    table.add_record(quantity="perfect_conductor_short_v", value=-0.125)
    table.add_record(quantity="perfect_conductor_long_x0_v", value=-3.0 / (4.0 * math.pi))
    table.write(config.output.path, config.output.format)
    return EXIT_OK


def run_nonadd(kappas, output: OutputSpec, tol: float = settings.DEFAULT_TOL) -> int:
    bad = [k for k in kappas if not 0 < k <= settings.SMALL_KAPPA_MAX]
    if bad:
        raise ConfigError(
            f"--kappa values must lie in (0, {settings.SMALL_KAPPA_MAX}], got {', '.join(map(str, bad))}"
        )
    table = ResultsTable(NONADD_COLUMNS, sort_by="kappa")
    for kappa in kappas:
        table.add_record(
            kappa=kappa,
            series_1=nonadditivity_ratio(kappa, 1),
            series_2=nonadditivity_ratio(kappa, 2),
            series_3=nonadditivity_ratio(kappa, 3),
            numeric=nonadditivity_ratio_numeric(kappa, tol),
        )
    table.write(output.path, output.format)
    return EXIT_OK


def run_validate(level: str = "quick") -> int:
    results = run_validation(level)
    for check in results:
        status = "PASS" if check.passed else "FAIL"
        line = f"{status} {check.name}: measured={check.measured:.10g} expected={check.expected:.10g}"
        print(line + (f" ({check.detail})" if check.detail else ""))
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} checks passed")
    return EXIT_OK if passed == len(results) else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--units", choices=UNIT_SYSTEMS, help="unit system of V_physical")
    common.add_argument("--tol", type=float, help="quadrature tolerance")
    common.add_argument("--output", help="output file (stdout when omitted)")
    common.add_argument("--format", choices=("csv", "json"), help="output format")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("--quiet", action="store_true", help="warnings and errors only")

    parser = argparse.ArgumentParser(description="Atom / dielectric wall dispersion potential calculator.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_eval = sub.add_parser("eval", parents=[common], help="evaluate the potential at one distance")
    p_eval.add_argument("--z", type=float, required=True, help="atom-wall distance")
    p_sweep = sub.add_parser("sweep", parents=[common], help="evaluate the potential over z_grid")
    p_sweep.add_argument("--workers", type=int, default=settings.SWEEP_WORKERS)
    sub.add_parser("limits", parents=[common], help="asymptotic values and series factors")
    p_nonadd = sub.add_parser("nonadd", parents=[common], help="non-additivity ratio table")
    p_nonadd.add_argument("--kappa", type=float, nargs="+", default=list(DEFAULT_KAPPAS))
    p_validate = sub.add_parser("validate", parents=[common], help="run the self-validation suite")
    p_validate.add_argument("--level", choices=("quick", "full"), default="quick")
    return parser


def _resolve_config(args) -> RunConfig:
    if not args.config:
        raise ConfigError(f"{args.command} needs --config")
    config = load_config(args.config)
    if args.tol is not None:
        if not settings.MIN_TOL <= args.tol <= settings.MAX_TOL:
            raise ConfigError(f"--tol must lie in [{settings.MIN_TOL}, {settings.MAX_TOL}]")
        config = replace(config, tol=args.tol)
    if args.units:
        config = replace(config, units=args.units)
    if args.output or args.format:
        config = replace(config, output=OutputSpec(args.output or config.output.path,
                                                   args.format or config.output.format))
    return config


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level)

    try:
        if args.command == "validate":
            return run_validate(args.level)
        if args.command == "nonadd":
            output = OutputSpec(args.output, args.format or "csv")
            return run_nonadd(args.kappa, output, args.tol or settings.DEFAULT_TOL)
        config = _resolve_config(args)
        if args.command == "eval":
            return run_eval(config, args.z)
        if args.command == "sweep":
            return run_sweep(config, args.workers)
        return run_limits(config)
    except ConfigError as e:
        logger.error(f"Error in configuration: {e}")
        return EXIT_CONFIG
    except CasimirError as e:
        logger.error(f"Error running {args.command}: {e}")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
