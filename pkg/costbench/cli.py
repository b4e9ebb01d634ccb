"""Command-line front end: validate, curve, compare and measure."""

import argparse
import sys
from decimal import Decimal
from pathlib import Path
from typing import Dict, List, Optional

from loguru import logger

from costbench import __version__
from costbench.analysis import compare_report, scenario_curve
from costbench.config import get_settings
from costbench.exceptions import CostBenchError
from costbench.flatfile import build_model
from costbench.models import LoadProfile, Platform, UseCase
from costbench.reporting import (
    write_aggregates_csv,
    write_capacity_csv,
    write_curve_csv,
    write_long_csv,
    write_manifest,
    write_records_csv,
    write_report,
)
from costbench.scenario import Scenario, load_scenario, validate_file
from costbench.usecase import InMemoryStore, access_profile, run_uc1, run_uc2
from costbench.workload import generate_schedule, schedule_summary

EXIT_OK = 0
EXIT_IO = 4

LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan> - <level>{message}</level>"
)


def configure_logging(level: str) -> None:
    logger.remove()
    logger.add(sys.stderr, format=LOG_FORMAT, level=level.upper())


def _scenario_params(scenario: Scenario) -> Dict[str, object]:
    params: Dict[str, object] = {
        "version": __version__,
        "label": scenario.label,
        "scenario": scenario.path,
        "use_case": scenario.use_case,
        "platform": scenario.platform,
        "seed": scenario.seed,
        "grid": ",".join(format(count, "f") for count in scenario.sensors),
        "emit_interval": scenario.emit_interval,
        "window_size_s": scenario.window.size_s,
        "window_hop_s": scenario.window.hop_s,
        "db_reads_per_event": scenario.deployment.access.db_reads_per_event,
        "db_writes_per_event": scenario.deployment.access.db_writes_per_event,
        "messages_per_event": scenario.deployment.access.messages_per_event,
    }
    if scenario.platform == Platform.DSP:
        params["m_max"] = scenario.m_max
        params["duration_s"] = scenario.duration_s
    for key, source in scenario.sources.items():
        params[f"{key}_file"] = source
    return params


def _prefixed(prefix: str, params: Dict[str, object]) -> Dict[str, object]:
    return {f"{prefix}_{key}": value for key, value in params.items()}


def cmd_validate(paths: List[str]) -> int:
    """Validate every file; the exit code is that of the first failure."""
    status = EXIT_OK
    for path in paths:
        try:
            kind = validate_file(path)
            logger.info(f"{path}: valid {kind}")
        except CostBenchError as exc:
            logger.error(f"{path}: {type(exc).__name__}: {exc}")
            status = status or exc.exit_code
        except OSError as exc:
            logger.error(f"{path}: {exc}")
            status = status or EXIT_IO
    return status


def cmd_curve(scenario_path: str, out_dir: str, seed: Optional[int] = None, grid: Optional[str] = None) -> int:
    """Write the curve CSV, the capacity CSV (stream processing only) and a manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    scenario = load_scenario(scenario_path, seed=seed, grid=grid)
    curve = scenario_curve(scenario)

    files = [write_curve_csv(curve, out)]
    capacity = write_capacity_csv(curve, out)
    if capacity is not None:
        files.append(capacity)

    params = {"command": "curve", **_scenario_params(scenario)}
    params["files"] = ",".join(path.name for path in files)
    write_manifest(params, out)
    logger.info(f"Wrote {len(files)} file(s) for '{scenario.label}' to {out}")
    return EXIT_OK


def cmd_compare(
    scenario_paths: List[str],
    out_dir: str,
    seed: Optional[int] = None,
    grid: Optional[str] = None
) -> int:
    """Write report.json, one curve CSV per scenario, the long CSV and a manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    scenarios = [load_scenario(path, seed=seed, grid=grid) for path in scenario_paths]
    report = compare_report(scenarios)

    write_report(report, out)
    for curve in report.curves:
        write_curve_csv(curve, out)
        write_capacity_csv(curve, out)
    write_long_csv(report.curves, out / "costs_long.csv")

    params: Dict[str, object] = {"command": "compare", "version": __version__, "scenarios": len(scenarios)}
    for index, scenario in enumerate(scenarios):
        params.update(_prefixed(f"s{index}", _scenario_params(scenario)))
    write_manifest(params, out)

    for entry in report.break_evens:
        rate = entry.break_even.rate
        logger.info(
            f"Break-even {entry.faas} vs {entry.dsp}: "
            + (f"{rate} events/s" if rate is not None else "none in range")
        )
    return EXIT_OK


def cmd_measure(
    scenario_path: str,
    out_dir: str,
    sensors: int = 10,
    duration_s: Decimal = Decimal("60"),
    seed: Optional[int] = None
) -> int:
    """Run the scenario's use case on a small schedule and record the accesses it issues."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    scenario = load_scenario(scenario_path, seed=seed)
    profile = build_model(
        LoadProfile,
        {
            "sensors": sensors,
            "emit_interval": scenario.emit_interval,
            "duration": duration_s,
            "seed": scenario.seed,
        },
        "measure arguments",
    )
    schedule = generate_schedule(profile)
    summary = schedule_summary(schedule)

    if scenario.use_case == UseCase.UC1:
        store = InMemoryStore()
        _, measured = run_uc1(schedule, store)
        output = write_records_csv(store.items(), out / "records.csv")
    else:
        aggregates, measured = run_uc2(schedule, scenario.window, scenario.platform)
        output = write_aggregates_csv(aggregates, out / "aggregates.csv")

    expected = access_profile(scenario.use_case, scenario.platform, scenario.window)
    if measured != expected:
        logger.warning(f"Measured accesses {measured} differ from the canonical profile {expected}")

    params = {
        "command": "measure",
        **_scenario_params(scenario),
        "sensors": sensors,
        "duration": duration_s,
        "events": summary.events,
        "measured_db_reads_per_event": measured.db_reads_per_event,
        "measured_db_writes_per_event": measured.db_writes_per_event,
        "measured_messages_per_event": measured.messages_per_event,
        "files": output.name,
    }
    write_manifest(params, out)
    logger.info(f"Measured {summary.events} events for '{scenario.label}': {measured}")
    return EXIT_OK


def _decimal_arg(text: str) -> Decimal:
    try:
        return Decimal(text)
    except ArithmeticError as exc:
        raise argparse.ArgumentTypeError(f"invalid number: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="costbench",
        description="Cost benchmark simulator for function and stream processing deployments"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=settings.log_level, help="loguru level (default: %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True)

    validate = sub.add_parser("validate", help="parse and validate fixture files")
    validate.add_argument("paths", nargs="+", help="catalog, deployment, sut, slo or scenario files")

    def add_run_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", default=settings.output_dir, help="output directory (default: %(default)s)")
        p.add_argument("--seed", type=int, default=None, help="overrides the scenario seed")

    curve = sub.add_parser("curve", help="cost curve of one scenario")
    curve.add_argument("--scenario", required=True)
    curve.add_argument("--grid", default=None, help="comma list of sensor counts, overrides the scenario")
    add_run_args(curve)

    compare = sub.add_parser("compare", help="break-even and cost breakdown of several scenarios")
    compare.add_argument("--scenario", action="append", required=True, dest="scenarios",
                         help="repeat for each scenario; the first is the baseline")
    compare.add_argument("--grid", default=None, help="comma list of sensor counts, overrides every scenario")
    add_run_args(compare)

    measure = sub.add_parser("measure", help="run the use case on a small schedule and count accesses")
    measure.add_argument("--scenario", required=True)
    measure.add_argument("--sensors", type=int, default=10)
    measure.add_argument("--duration", type=_decimal_arg, default=Decimal("60"), help="schedule length in seconds")
    add_run_args(measure)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and return its exit code.

    0 ok, 2 invalid input, 3 infeasible capacity, 4 I/O failure.
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    try:
        if args.command == "validate":
            return cmd_validate(args.paths)
        if args.command == "curve":
            return cmd_curve(args.scenario, args.out, seed=args.seed, grid=args.grid)
        if args.command == "compare":
            return cmd_compare(args.scenarios, args.out, seed=args.seed, grid=args.grid)
        return cmd_measure(args.scenario, args.out, sensors=args.sensors, duration_s=args.duration, seed=args.seed)
    except CostBenchError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return exc.exit_code
    except OSError as exc:
        logger.error(f"I/O error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
