"""
Plot data for comparing two scenarios metric by metric.

One CSV per canonical metric with columns t,scenario_a,scenario_b, plus a
summary of per-metric means.
"""

import csv
import logging
import math
from pathlib import Path
from typing import Dict, List, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.tsentinel.config import METRIC_NAMES
from src.tsentinel.errors import TraceFormatError
from src.tsentinel.telemetry.models import TelemetryTrace

logger = logging.getLogger("tsentinel.export.plot_data")

PLOT_COLUMNS = ("t", "scenario_a", "scenario_b")
SUMMARY_FILE = "summary.csv"


class MetricComparison(BaseModel):
    """Mean of one metric in both traces."""

    model_config = ConfigDict(frozen=True)

    metric: str
    mean_a: float
    mean_b: float

    @property
    def ratio(self) -> float:
        """mean_b / mean_a; inf when only scenario b is non-zero, 1 when both are zero."""
        if self.mean_a == 0:
            return 1.0 if self.mean_b == 0 else math.inf
        return self.mean_b / self.mean_a


def _check_intervals(trace_a: TelemetryTrace, trace_b: TelemetryTrace):
    if not math.isclose(trace_a.interval, trace_b.interval, rel_tol=1e-12):
        raise TraceFormatError(
            f"interval mismatch: {trace_a.interval} s vs {trace_b.interval} s"
        )


def _metric_columns(trace: TelemetryTrace, n: int) -> np.ndarray:
    return np.array(
        [sample.metric_values() for sample in trace.samples[:n]], dtype=np.float64
    ).reshape(n, len(METRIC_NAMES))


def compare_scenarios(
    trace_a: TelemetryTrace, trace_b: TelemetryTrace
) -> List[MetricComparison]:
    """
    Per-metric means of two traces, in canonical metric order.

    Raises:
        TraceFormatError: If the intervals differ or either trace is empty
    """
    _check_intervals(trace_a, trace_b)
    if not trace_a.samples or not trace_b.samples:
        raise TraceFormatError("cannot compare an empty trace")
    means_a = _metric_columns(trace_a, len(trace_a)).mean(axis=0)
    means_b = _metric_columns(trace_b, len(trace_b)).mean(axis=0)
    return [
        MetricComparison(metric=name, mean_a=float(a), mean_b=float(b))
        for name, a, b in zip(METRIC_NAMES, means_a, means_b)
    ]


def write_plot_data(
    trace_a: TelemetryTrace,
    trace_b: TelemetryTrace,
    out_dir: Union[str, Path],
) -> Dict[str, Path]:
    """
    Write one CSV per canonical metric plus the summary file.

    Rows are truncated to the shorter trace, with a warning. Timestamps come
    from the first trace.

    Args:
        trace_a: First scenario
        trace_b: Second scenario, same interval
        out_dir: Directory to write into (created if missing)

    Returns:
        Dictionary mapping metric name (and "summary") to the written path

    Raises:
        TraceFormatError: If the intervals differ
    """
    _check_intervals(trace_a, trace_b)
    n = min(len(trace_a), len(trace_b))
    if len(trace_a) != len(trace_b):
        logger.warning(
            f"Traces have {len(trace_a)} and {len(trace_b)} samples; "
            f"truncating plot data to {n} rows"
        )

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    values_a = _metric_columns(trace_a, n)
    values_b = _metric_columns(trace_b, n)
    times = [sample.t for sample in trace_a.samples[:n]]

    written = {}
    for column, name in enumerate(METRIC_NAMES):
        path = out_dir / f"{name}.csv"
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(PLOT_COLUMNS)
            for t, a, b in zip(times, values_a[:, column], values_b[:, column]):
                writer.writerow([repr(float(t)), repr(float(a)), repr(float(b))])
        written[name] = path

    if n > 0:
        written["summary"] = write_summary(compare_scenarios(trace_a, trace_b), out_dir)
    logger.info(f"Wrote plot data for {len(METRIC_NAMES)} metrics to {out_dir}")
    return written


def write_summary(comparisons: List[MetricComparison], out_dir: Union[str, Path]) -> Path:
    path = Path(out_dir) / SUMMARY_FILE
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["metric", "mean_a", "mean_b", "ratio"])
        for item in comparisons:
            writer.writerow([item.metric, repr(item.mean_a), repr(item.mean_b), repr(item.ratio)])
    return path
