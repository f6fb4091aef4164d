"""
Pydantic models for telemetry samples and traces.

Both models are frozen: once a trace has been validated it can be shared
freely between readers.
"""

import math
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.tsentinel.config import DEFAULT_INTERVAL_S, METRIC_NAMES
from src.tsentinel.errors import TraceFormatError


class Label(str, Enum):
    """Ground-truth or predicted class of a telemetry sample."""

    ATTACK = "attack"
    BENIGN = "no_attack"

    @classmethod
    def from_flag(cls, is_attack: bool) -> "Label":
        return cls.ATTACK if is_attack else cls.BENIGN


class MetricSample(BaseModel):
    """One observation of a host over a single sampling interval."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    t: float = Field(..., ge=0, description="Seconds since trace start")
    cpu_util: float = Field(..., ge=0, le=100, description="CPU utilization (%)")
    mem_used: float = Field(..., ge=0, le=1, description="Memory in use (fraction)")
    disk_read_reqs: float = Field(
        ..., ge=0, description="Disk read requests per interval"
    )
    disk_write_reqs: float = Field(
        ..., ge=0, description="Disk write requests per interval"
    )
    net_bytes_in: float = Field(..., ge=0, description="Incoming bytes per second")
    net_bytes_out: float = Field(..., ge=0, description="Outgoing bytes per second")
    net_pkts_in: float = Field(..., ge=0, description="Incoming packets per second")
    net_pkts_out: float = Field(
        ..., ge=0, description="Outgoing packets per second"
    )
    label: Optional[Label] = Field(default=None, description="Class, if known")

    def metric_values(self) -> Tuple[float, ...]:
        """Return the 8 metric fields in canonical order."""
        return tuple(getattr(self, name) for name in METRIC_NAMES)


def is_multiple(value: float, interval: float) -> bool:
    """Check whether value is an integer multiple of interval."""
    steps = value / interval
    return math.isclose(steps, round(steps), rel_tol=1e-9, abs_tol=1e-9)


def is_uniform_step(previous: float, current: float, interval: float) -> bool:
    """Check whether two timestamps are exactly one interval apart."""
    return math.isclose(current - previous, interval, rel_tol=1e-9, abs_tol=1e-12)


class TelemetryTrace(BaseModel):
    """A uniformly sampled sequence of telemetry samples."""

    model_config = ConfigDict(frozen=True)

    interval: float = Field(
        default=DEFAULT_INTERVAL_S, gt=0, description="Sampling interval (s)"
    )
    samples: Tuple[MetricSample, ...] = Field(default=())

    @model_validator(mode="after")
    def _check_invariants(self) -> "TelemetryTrace":
        if self.samples and not is_multiple(self.samples[0].t, self.interval):
            raise ValueError("first timestamp is not a multiple of the interval")
        for index in range(1, len(self.samples)):
            if not is_uniform_step(
                self.samples[index - 1].t, self.samples[index].t, self.interval
            ):
                raise ValueError(
                    f"non-uniform timestamp spacing at sample {index + 1}"
                )
        labeled = sum(1 for sample in self.samples if sample.label is not None)
        if 0 < labeled < len(self.samples):
            raise ValueError("mixed labeling: either all samples or none are labeled")
        return self

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def is_labeled(self) -> bool:
        return bool(self.samples) and self.samples[0].label is not None

    @property
    def labels(self) -> Optional[List[Label]]:
        if not self.is_labeled:
            return None
        return [sample.label for sample in self.samples]

    @property
    def duration(self) -> float:
        return len(self.samples) * self.interval


def concatenate_traces(traces: Sequence[TelemetryTrace]) -> TelemetryTrace:
    """
    Join traces into one continuous trace.

    Later traces are re-timed so that the combined timeline keeps the common
    interval; sample values and labels are kept as they are.

    Args:
        traces: Non-empty sequence of traces sharing one interval

    Returns:
        A single TelemetryTrace starting at the first trace's first timestamp

    Raises:
        TraceFormatError: If intervals differ or labeled and unlabeled traces are mixed
    """
    if not traces:
        raise TraceFormatError("no traces to concatenate")

    interval = traces[0].interval
    non_empty = [trace for trace in traces if trace.samples]
    for trace in traces:
        if not math.isclose(trace.interval, interval, rel_tol=1e-12):
            raise TraceFormatError(
                f"cannot concatenate traces with intervals {interval} and {trace.interval}"
            )
    if len({trace.is_labeled for trace in non_empty}) > 1:
        raise TraceFormatError("cannot concatenate labeled and unlabeled traces")

    start = non_empty[0].samples[0].t if non_empty else 0.0
    samples = []
    for trace in non_empty:
        for sample in trace.samples:
            samples.append(
                sample.model_copy(update={"t": start + len(samples) * interval})
            )
    return TelemetryTrace(interval=interval, samples=tuple(samples))
