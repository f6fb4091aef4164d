import numpy as np
import pytest

from src.tsentinel.config import METRIC_NAMES
from src.tsentinel.synth import (
    LoadModel,
    attack_scenario,
    baseline_scenario,
    mixed_scenario,
    synthesize,
)
from src.tsentinel.telemetry import Label, MetricSample, TelemetryTrace, concatenate_traces

VALID_VALUES = {
    "cpu_util": 12.5,
    "mem_used": 0.25,
    "disk_read_reqs": 3.0,
    "disk_write_reqs": 7.0,
    "net_bytes_in": 1500.0,
    "net_bytes_out": 2500.0,
    "net_pkts_in": 15.0,
    "net_pkts_out": 12.0,
}


def make_sample(t, label=None, **overrides):
    values = dict(VALID_VALUES)
    values.update(overrides)
    return MetricSample(t=t, label=label, **values)


def make_trace(rows, labels=None, interval=5.0):
    """Trace from an n x 8 array of metric values in canonical order."""
    samples = []
    for i, row in enumerate(np.asarray(rows, dtype=float)):
        label = None if labels is None else labels[i]
        samples.append(MetricSample(t=i * interval, label=label, **dict(zip(METRIC_NAMES, row))))
    return TelemetryTrace(interval=interval, samples=tuple(samples))


def training_trace(seed, model=None):
    """Baseline and attack runs joined into one labeled training trace."""
    model = model or LoadModel()
    return concatenate_traces(
        [
            synthesize(baseline_scenario(), model, 2 * seed),
            synthesize(attack_scenario(), model, 2 * seed + 1),
        ]
    )


def mixed_trace(seed, model=None):
    return synthesize(mixed_scenario(seed), model or LoadModel(), seed)


@pytest.fixture
def sample_factory():
    return make_sample


@pytest.fixture
def small_trace():
    """Six labeled samples: three quiet, three busy."""
    rows = []
    for i in range(6):
        busy = i >= 3
        rows.append(
            [
                90.0 + i if busy else 10.0 + i,
                0.3,
                3.0 + (i % 2),
                20.0 + i if busy else 5.0 + i,
                50000.0 + 10 * i if busy else 2000.0 + 10 * i,
                3000.0 + i,
                900.0 + i if busy else 20.0 + i,
                800.0 + i if busy else 15.0 + i,
            ]
        )
    labels = [Label.BENIGN] * 3 + [Label.ATTACK] * 3
    return make_trace(rows, labels)


@pytest.fixture(scope="session")
def train_trace_seed0():
    return training_trace(0)


@pytest.fixture(scope="session")
def mixed_trace_100():
    return mixed_trace(100)
