"""
Reading and writing telemetry traces as CSV.

The column layout is fixed:
t,cpu_util,mem_used,disk_read_reqs,disk_write_reqs,net_bytes_in,net_bytes_out,net_pkts_in,net_pkts_out[,label]
"""

import csv
import io
import logging
import math
from pathlib import Path
from typing import List, Optional, TextIO, Union

from pydantic import ValidationError

from src.tsentinel.config import DEFAULT_INTERVAL_S, METRIC_NAMES
from src.tsentinel.errors import TraceFormatError
from src.tsentinel.telemetry.models import (
    Label,
    MetricSample,
    TelemetryTrace,
    is_multiple,
    is_uniform_step,
)

logger = logging.getLogger("tsentinel.telemetry.csv_io")

REQUIRED_COLUMNS = ("t",) + METRIC_NAMES
LABEL_COLUMN = "label"


def _parse_number(token: str, field: str, row: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise TraceFormatError(
            f"malformed number {token!r} in column '{field}'", row=row, field=field
        ) from None
    if not math.isfinite(value):
        raise TraceFormatError(
            f"non-finite value {token!r} in column '{field}'", row=row, field=field
        )
    return value


def _parse_label(token: str, row: int) -> Optional[Label]:
    token = token.strip()
    if not token:
        return None
    try:
        return Label(token)
    except ValueError:
        raise TraceFormatError(
            f"unknown label {token!r} (expected 'attack' or 'no_attack')",
            row=row,
            field=LABEL_COLUMN,
        ) from None


def _build_sample(values: dict, row: int) -> MetricSample:
    try:
        return MetricSample(**values)
    except ValidationError as e:
        error = e.errors()[0]
        field = str(error["loc"][0]) if error["loc"] else None
        raise TraceFormatError(
            f"value out of range for field '{field}': {error['msg']}",
            row=row,
            field=field,
        ) from None


def parse_trace_csv(text: Union[str, TextIO]) -> TelemetryTrace:
    """
    Parse a telemetry trace from CSV text.

    The sampling interval is inferred from the spacing of the first two
    timestamps. A single-sample trace keeps the default interval when its
    timestamp is a multiple of it and otherwise takes the timestamp itself
    as the interval. Nothing is
    repaired: the first violation found is reported with its 1-based data
    row number.

    Args:
        text: CSV content as a string or an open text stream

    Returns:
        A validated TelemetryTrace

    Raises:
        TraceFormatError: On a missing column, malformed number, out-of-range
            value, duplicate column, non-uniform timestamp spacing or mixed
            labeling
    """
    stream = io.StringIO(text) if isinstance(text, str) else text
    reader = csv.reader(stream)

    header = next(reader, None)
    if header is None:
        raise TraceFormatError("empty input: header row missing")
    header = [column.strip() for column in header]
    duplicates = sorted({c for c in header if header.count(c) > 1})
    if duplicates:
        raise TraceFormatError(f"duplicate columns: {duplicates}", field=duplicates[0])

    for column in REQUIRED_COLUMNS:
        if column not in header:
            raise TraceFormatError(f"missing required column '{column}'", field=column)
    unknown = [c for c in header if c not in REQUIRED_COLUMNS and c != LABEL_COLUMN]
    if unknown:
        raise TraceFormatError(f"unexpected columns: {unknown}")
    positions = {column: header.index(column) for column in header}
    has_label = LABEL_COLUMN in positions

    samples: List[MetricSample] = []
    interval = DEFAULT_INTERVAL_S
    for row, cells in enumerate(reader, start=1):
        if not cells or all(not cell.strip() for cell in cells):
            continue
        if len(cells) != len(header):
            raise TraceFormatError(
                f"expected {len(header)} columns, found {len(cells)}", row=row
            )

        values = {
            column: _parse_number(cells[positions[column]], column, row)
            for column in REQUIRED_COLUMNS
        }
        values["label"] = _parse_label(cells[positions[LABEL_COLUMN]], row) if has_label else None
        sample = _build_sample(values, row)

        if samples:
            if len(samples) == 1:
                interval = sample.t - samples[0].t
                if interval <= 0:
                    raise TraceFormatError("timestamps not strictly increasing", row=row)
            elif not is_uniform_step(samples[-1].t, sample.t, interval):
                raise TraceFormatError("non-uniform timestamp spacing", row=row)
            if (sample.label is None) != (samples[0].label is None):
                raise TraceFormatError(
                    "mixed labeling: either all samples or none are labeled", row=row
                )
        samples.append(sample)

    if len(samples) == 1 and not is_multiple(samples[0].t, interval):
        interval = samples[0].t
    if samples and not is_multiple(samples[0].t, interval):
        raise TraceFormatError(
            "first timestamp is not a multiple of the sampling interval", row=1
        )

    logger.debug(f"Parsed {len(samples)} samples at interval {interval} s")
    return TelemetryTrace(interval=interval, samples=tuple(samples))


def write_trace_csv(trace: TelemetryTrace) -> str:
    """
    Serialize a trace to CSV text.

    Floats are written with repr(), the shortest form that parses back to
    the identical value, so parse_trace_csv(write_trace_csv(x)) == x.

    Args:
        trace: Trace to serialize

    Returns:
        CSV text with "\\n" line endings; an empty trace gives the header only
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    columns = list(REQUIRED_COLUMNS)
    if trace.is_labeled:
        columns.append(LABEL_COLUMN)
    writer.writerow(columns)

    for sample in trace.samples:
        row = [repr(float(sample.t))] + [repr(float(v)) for v in sample.metric_values()]
        if trace.is_labeled:
            row.append(sample.label.value)
        writer.writerow(row)
    return buffer.getvalue()


def read_trace(path: Union[str, Path]) -> TelemetryTrace:
    """Load a trace CSV file from disk."""
    path = Path(path)
    logger.info(f"Loading trace from {path}")
    with open(path, "r", newline="", encoding="utf-8-sig") as f:
        return parse_trace_csv(f)


def write_trace(trace: TelemetryTrace, path: Union[str, Path]) -> Path:
    """Write a trace CSV file to disk, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(write_trace_csv(trace))
    logger.info(f"Wrote {len(trace)} samples to {path}")
    return path
