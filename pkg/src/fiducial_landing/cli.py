"""Command-line entry point.

    fiducial-landing run --scenario case.yaml [--seed N] [--out DIR] [--format csv|json]
    fiducial-landing batch --dir SCENARIOS --summary summary.csv [--jobs N]
    fiducial-landing plot --record run.csv --out timeline.png

Exit status: 0 when a run lands or a batch completes, 2 when a run times out,
1 on any error. ``FIDUCIAL_LANDING_CONFIG`` names a config file used when
neither ``--config`` nor the scenario provides one.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .scenario import ScenarioError, load_scenario
from .telemetry import TelemetryError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_TIMEOUT = 2

log = logging.getLogger("fiducial_landing")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fiducial-landing",
                                description="Simulate autonomous fiducial-marker landings.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one scenario")
    run.add_argument("--scenario", required=True, type=Path)
    run.add_argument("--seed", type=int, help="override the scenario seed")
    run.add_argument("--out", type=Path, help="directory for telemetry and the timeline figure")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--config", type=Path, help="simulation config file")

    batch = sub.add_parser("batch", help="simulate every scenario in a directory")
    batch.add_argument("--dir", required=True, type=Path)
    batch.add_argument("--summary", required=True, type=Path, help="summary CSV to write")
    batch.add_argument("--jobs", type=int, default=1)
    batch.add_argument("--config", type=Path, help="simulation config file")

    plot = sub.add_parser("plot", help="render a timeline figure from a telemetry CSV")
    plot.add_argument("--record", required=True, type=Path)
    plot.add_argument("--out", required=True, type=Path)
    return p


def _cmd_run(args) -> int:
    from .plotting import plot_timeline
    from .runner import run_scenario
    from .telemetry import export_timeseries

    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, seed=args.seed)
    config = load_config(args.config) if args.config else None
    record = run_scenario(scenario, config, base_dir=args.scenario.parent)
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        data = export_timeseries(record, args.out, args.format)
        fig = plot_timeline(record.rows, args.out / f"{record.scenario}.png", title=record.scenario)
        log.info("wrote %s and %s", data, fig)
    err = f"{record.touchdown_error_m:.4f}" if record.landed else "-"
    print(f"scenario={record.scenario} outcome={record.outcome} "
          f"touchdown_error_m={err} sim_time_s={record.rows[-1].t:.2f}")
    return EXIT_OK if record.landed else EXIT_TIMEOUT


def _cmd_batch(args) -> int:
    from .plotting import plot_errors
    from .stats import run_batch

    if args.jobs < 1:
        raise ValueError("--jobs must be at least 1")
    if not args.dir.is_dir():
        raise FileNotFoundError(f"scenario directory not found: {args.dir}")
    paths = sorted(p for p in args.dir.iterdir() if p.suffix in (".yaml", ".yml"))
    if not paths:
        raise ScenarioError(f"no scenario files in {args.dir}")
    scenarios = [load_scenario(p) for p in paths]
    config = load_config(args.config) if args.config else None
    summary = run_batch(scenarios, config, jobs=args.jobs, base_dir=args.dir)
    args.summary.parent.mkdir(parents=True, exist_ok=True)
    args.summary.write_text(summary.to_csv())
    errors: dict[str, list[float]] = {}
    for r in summary.records:
        if r.landed:
            errors.setdefault(r.pad_type, []).append(r.touchdown_error_m)
    if errors:
        plot_errors(errors, args.summary.with_name(args.summary.stem + "_errors.png"))
    sys.stdout.write(summary.to_csv())
    for r in summary.records:
        if not r.landed:
            log.warning("%s: %s", r.scenario, r.outcome)
    return EXIT_OK


def _cmd_plot(args) -> int:
    from .plotting import plot_timeline
    from .telemetry import read_csv

    rows = read_csv(args.record)
    plot_timeline(rows, args.out, title=args.record.stem)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    handler = {"run": _cmd_run, "batch": _cmd_batch, "plot": _cmd_plot}[args.command]
    try:
        return handler(args)
    except (ScenarioError, ConfigError, TelemetryError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
