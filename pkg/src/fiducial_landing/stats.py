"""Batch execution and landing-error statistics."""
from __future__ import annotations

import csv
import io
import logging
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .config import SimConfig
from .runner import RunRecord, run_scenario
from .scenario import Scenario

log = logging.getLogger(__name__)

SUMMARY_COLUMNS = ("pad_type", "mu_E_m", "sigma_E_m", "n", "n_runs", "max_alt_m", "max_dist_m")


@dataclass(frozen=True)
class SummaryRow:
    pad_type: str
    mu_e: float
    sigma_e: float
    n: int
    n_runs: int
    max_alt_m: float
    max_dist_m: float


@dataclass(frozen=True)
class Summary:
    rows: tuple[SummaryRow, ...]
    records: tuple[RunRecord, ...] = ()

    def row(self, pad_type: str) -> SummaryRow:
        for r in self.rows:
            if r.pad_type == pad_type:
                return r
        raise KeyError(pad_type)

    @property
    def overall(self) -> SummaryRow:
        return self.row("all")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for r in self.rows:
            w.writerow([r.pad_type, f"{r.mu_e:.6f}", f"{r.sigma_e:.6f}", r.n, r.n_runs,
                        f"{r.max_alt_m:.2f}", f"{r.max_dist_m:.2f}"])
        return buf.getvalue()


def error_stats(errors: Sequence[float]) -> tuple[float, float]:
    """Mean and sample standard deviation; a single value has deviation 0."""
    if not errors:
        return math.nan, math.nan
    if len(errors) == 1:
        log.warning("only one landed run; reporting sigma_E = 0")
        return float(errors[0]), 0.0
    return statistics.fmean(errors), statistics.stdev(errors)


def _row(name: str, records: Sequence[RunRecord]) -> SummaryRow:
    errors = [r.touchdown_error_m for r in records if r.landed]
    mu, sigma = error_stats(errors)
    landed = [r for r in records if r.landed]
    return SummaryRow(name, mu, sigma, len(errors), len(records),
                      max((r.start_altitude_m for r in landed), default=math.nan),
                      max((r.start_distance_m for r in landed), default=math.nan))


def summarize(records: Sequence[RunRecord]) -> Summary:
    pads = sorted({r.pad_type for r in records})
    rows = [_row(p, [r for r in records if r.pad_type == p]) for p in pads]
    rows.append(_row("all", records))
    return Summary(tuple(rows), tuple(records))


def _run(args):
    scenario, config, base_dir = args
    return run_scenario(scenario, config, base_dir)


def run_batch(scenarios: Sequence[Scenario], config: SimConfig | None = None, jobs: int = 1,
              base_dir: str | Path | None = None) -> Summary:
    if not scenarios:
        raise ValueError("run_batch needs at least one scenario")
    work = [(s, config, base_dir) for s in scenarios]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run, work))
    else:
        records = [_run(w) for w in work]
    return summarize(records)
