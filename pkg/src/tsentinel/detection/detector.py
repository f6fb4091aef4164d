"""
Online replay of telemetry through a trained classifier.

Each sample is standardized, classified, and the raw decision is smoothed by
a majority vote over the last `window` raw decisions. Runs of smoothed attack
decisions become attack events.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Deque, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.tsentinel.classifiers import TrainedModel, predict_rows
from src.tsentinel.config import DEFAULT_WINDOW
from src.tsentinel.errors import ModelError
from src.tsentinel.evaluation.metrics import MetricsReport, confusion, metrics
from src.tsentinel.features.standardizer import Standardizer, standardize_row
from src.tsentinel.telemetry.models import Label, MetricSample, TelemetryTrace

logger = logging.getLogger("tsentinel.detection.detector")

MISSED = "missed"

# Timestamps are matched after rounding to this many decimals
ONSET_DECIMALS = 6


@dataclass(frozen=True)
class DetectorConfig:
    """Trained model, its standardizer and the smoothing window."""

    model: TrainedModel
    standardizer: Standardizer
    feature_names: Tuple[str, ...]
    window: int = DEFAULT_WINDOW

    def __post_init__(self):
        names = tuple(self.feature_names)
        if self.window < 1 or self.window % 2 == 0:
            raise ModelError(f"window must be a positive odd integer, got {self.window}")
        if tuple(self.standardizer.feature_names) != names:
            raise ModelError(
                f"feature mismatch: standardizer has {list(self.standardizer.feature_names)}, "
                f"detector expects {list(names)}"
            )
        if tuple(self.model.feature_names) != names:
            raise ModelError(
                f"feature mismatch: model has {list(self.model.feature_names)}, "
                f"detector expects {list(names)}"
            )
        object.__setattr__(self, "feature_names", names)


class OnlineDetector:
    """
    Sequential consumer of telemetry samples.

    Holds a FIFO of the most recent raw decisions; one instance must only be
    fed one stream at a time.
    """

    def __init__(self, config: DetectorConfig):
        self.config = config
        self._raw: Deque[Label] = deque(maxlen=config.window)
        self.last_raw: Optional[Label] = None

    def classify(self, sample: MetricSample) -> Label:
        """Raw model decision for one sample, without smoothing."""
        row = [getattr(sample, name) for name in self.config.feature_names]
        scaled = standardize_row(self.config.standardizer, row)
        return predict_rows(self.config.model, scaled[np.newaxis, :])[0]

    def step(self, sample: MetricSample) -> Label:
        """
        Classify a sample and return the smoothed decision.

        Attack is returned iff more than window/2 of the raw decisions in the
        buffer are attack; before the buffer fills only the decisions seen so
        far are counted.
        """
        raw = self.classify(sample)
        self.last_raw = raw
        self._raw.append(raw)
        attack_votes = sum(1 for decision in self._raw if decision is Label.ATTACK)
        return Label.from_flag(2 * attack_votes > self.config.window)


class AttackEvent(BaseModel):
    """A maximal run of attack decisions, [start_t, end_t)."""

    model_config = ConfigDict(frozen=True)

    start_t: float = Field(..., ge=0)
    end_t: float

    @model_validator(mode="after")
    def _check_order(self) -> "AttackEvent":
        if not self.start_t < self.end_t:
            raise ValueError("attack event must end after it starts")
        return self

    @property
    def duration(self) -> float:
        return self.end_t - self.start_t


class Decision(BaseModel):
    model_config = ConfigDict(frozen=True)

    t: float
    raw: Label
    smoothed: Label


class OnsetLatency(BaseModel):
    """Samples from a ground-truth attack onset to its first attack decision."""

    model_config = ConfigDict(frozen=True)

    onset_t: float
    latency: Union[int, Literal["missed"]]

    @property
    def missed(self) -> bool:
        return self.latency == MISSED


class DetectionReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    interval: float
    window: int
    decisions: List[Decision] = Field(default_factory=list)
    events: List[AttackEvent] = Field(default_factory=list)
    latencies: List[OnsetLatency] = Field(default_factory=list)
    metrics: Optional[MetricsReport] = None
    raw_metrics: Optional[MetricsReport] = None

    @property
    def missed_count(self) -> int:
        return sum(1 for entry in self.latencies if entry.missed)

    @property
    def mean_latency(self) -> Optional[float]:
        """Mean latency in samples over detected onsets, None if there are none."""
        detected = [entry.latency for entry in self.latencies if not entry.missed]
        if not detected:
            return None
        return sum(detected) / len(detected)


def attack_runs(flags: Sequence[bool]) -> List[Tuple[int, int]]:
    """Maximal runs of True as (start, stop) index pairs, stop exclusive."""
    runs = []
    start = None
    for index, flag in enumerate(flags):
        if flag and start is None:
            start = index
        elif not flag and start is not None:
            runs.append((start, index))
            start = None
    if start is not None:
        runs.append((start, len(flags)))
    return runs


def events_from_decisions(
    times: Sequence[float], decisions: Sequence[Label], interval: float
) -> List[AttackEvent]:
    """Turn maximal runs of attack decisions into events."""
    flags = [decision is Label.ATTACK for decision in decisions]
    return [
        AttackEvent(start_t=times[start], end_t=times[stop - 1] + interval)
        for start, stop in attack_runs(flags)
    ]


def onset_indices(times: Sequence[float], onsets: Sequence[float]) -> List[int]:
    """Sample indices whose timestamps equal one of the onset times."""
    index_of = {round(t, ONSET_DECIMALS): i for i, t in enumerate(times)}
    found = {index_of.get(round(float(t), ONSET_DECIMALS)) for t in onsets}
    return sorted(i for i in found if i is not None)


def onset_latencies(
    times: Sequence[float],
    truth: Sequence[Label],
    decisions: Sequence[Label],
    segment_onsets: Optional[Sequence[float]] = None,
) -> List[OnsetLatency]:
    """
    Latency of the first attack decision within each ground-truth attack segment.

    Segments are the runs of attack labels, further cut at every time in
    segment_onsets that falls inside a run, so back-to-back attack segments
    are timed separately. Onsets on benign samples are ignored. A segment
    with no attack decision before it ends is reported as missed.
    """
    cuts = onset_indices(times, segment_onsets or [])
    truth_flags = [label is Label.ATTACK for label in truth]

    latencies = []
    for run_start, run_stop in attack_runs(truth_flags):
        starts = [run_start] + [i for i in cuts if run_start < i < run_stop]
        for start, stop in zip(starts, starts[1:] + [run_stop]):
            latency: Union[int, str] = MISSED
            for index in range(start, stop):
                if decisions[index] is Label.ATTACK:
                    latency = index - start
                    break
            latencies.append(OnsetLatency(onset_t=times[start], latency=latency))
    return latencies


def detect_events(
    trace: TelemetryTrace,
    config: DetectorConfig,
    segment_onsets: Optional[Sequence[float]] = None,
) -> DetectionReport:
    """
    Replay a trace through a fresh detector.

    Samples are fed one at a time through OnlineDetector.step, so the result
    is what a live detector would have emitted. Latencies and sample-level
    metrics are filled in when the trace is labeled.

    Args:
        trace: Labeled or unlabeled trace; may be empty
        config: Detector configuration
        segment_onsets: Start times of the attack segments the trace was built
            from; without them each run of attack labels is one segment

    Returns:
        DetectionReport for the trace
    """
    detector = OnlineDetector(config)
    decisions = []
    for sample in trace.samples:
        smoothed = detector.step(sample)
        decisions.append(Decision(t=sample.t, raw=detector.last_raw, smoothed=smoothed))

    times = [d.t for d in decisions]
    smoothed = [d.smoothed for d in decisions]
    events = events_from_decisions(times, smoothed, trace.interval)

    latencies: List[OnsetLatency] = []
    sample_metrics = raw_metrics = None
    if trace.is_labeled:
        truth = trace.labels
        latencies = onset_latencies(times, truth, smoothed, segment_onsets)
        sample_metrics = metrics(confusion(smoothed, truth))
        raw_metrics = metrics(confusion([d.raw for d in decisions], truth))

    report = DetectionReport(
        interval=trace.interval,
        window=config.window,
        decisions=decisions,
        events=events,
        latencies=latencies,
        metrics=sample_metrics,
        raw_metrics=raw_metrics,
    )
    logger.info(
        f"Replayed {len(trace)} samples: {len(events)} event(s), "
        f"{report.missed_count} missed onset(s)"
    )
    return report
