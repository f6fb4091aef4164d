"""
Seeded synthesis of labeled telemetry traces from a scenario and a load model.

Noise comes from numpy's PCG64 generator seeded with the caller's seed, so
identical (scenario, load model, seed) triples give bit-identical traces.
"""

import logging
import time

import numpy as np

from src.tsentinel.config import METRIC_NAMES
from src.tsentinel.synth.load_model import LoadModel
from src.tsentinel.synth.scenarios import ScenarioSpec
from src.tsentinel.telemetry.models import Label, MetricSample, TelemetryTrace

logger = logging.getLogger("tsentinel.synth.generator")

MEM_INDEX = METRIC_NAMES.index("mem_used")

# Legal range of each metric, canonical order
LOWER_BOUNDS = np.zeros(len(METRIC_NAMES))
UPPER_BOUNDS = np.array([100.0, 1.0] + [np.inf] * (len(METRIC_NAMES) - 2))


def make_generator(seed: int) -> np.random.Generator:
    """Return the noise generator used for a given seed."""
    return np.random.Generator(np.random.PCG64(seed))


def _backlog_series(
    attack_rates: np.ndarray, model: LoadModel, interval: float
) -> np.ndarray:
    """
    Memory held by queued half-open connections, per sample.

    The backlog grows with every attack packet up to backlog_cap and decays
    geometrically once the attack stops.
    """
    backlog = np.zeros(len(attack_rates))
    level = 0.0
    for i, rate in enumerate(attack_rates):
        if rate > 0:
            level = min(model.backlog_cap, level + model.backlog_growth * rate * interval)
        else:
            level *= model.backlog_relax
        backlog[i] = level
    return backlog


def synthesize_values(spec: ScenarioSpec, model: LoadModel, seed: int) -> np.ndarray:
    """
    Compute the n x 8 metric matrix of a scenario without building samples.

    Args:
        spec: Scenario to synthesize
        model: Load model supplying costs, baselines and noise levels
        seed: Noise seed

    Returns:
        Array of metric values in canonical column order, clamped to legal ranges
    """
    segment_of = spec.sample_segments()
    legit_rates = np.array([s.legit_rate for s in spec.segments])[segment_of]
    attack_rates = np.array(
        [s.attack_rate(model.max_attack_rate) for s in spec.segments]
    )[segment_of]

    rng = make_generator(seed)
    noise = rng.standard_normal((len(segment_of), len(METRIC_NAMES)))
    noise = noise * model.noise_std.as_array() * spec.noise_scale

    values = (
        model.baseline.as_array()
        + legit_rates[:, None] * model.legit_cost.as_array()
        + attack_rates[:, None] * model.attack_cost.as_array()
        + noise
    )
    values[:, MEM_INDEX] += _backlog_series(attack_rates, model, spec.interval)
    return np.clip(values, LOWER_BOUNDS, UPPER_BOUNDS)


def synthesize(spec: ScenarioSpec, model: LoadModel, seed: int) -> TelemetryTrace:
    """
    Synthesize a labeled telemetry trace.

    A sample is labeled attack exactly when its segment has a non-zero
    attack interval; idle gaps are labeled no_attack.

    Args:
        spec: Scenario to synthesize
        model: Load model
        seed: Noise seed

    Returns:
        TelemetryTrace with spec.sample_count samples starting at t = 0
    """
    start_time = time.time()
    values = synthesize_values(spec, model, seed)
    attack_segment = [segment.is_attack for segment in spec.segments]

    samples = []
    for i, (segment_index, row) in enumerate(zip(spec.sample_segments(), values)):
        samples.append(
            MetricSample(
                t=i * spec.interval,
                label=Label.from_flag(attack_segment[segment_index]),
                **dict(zip(METRIC_NAMES, row.tolist())),
            )
        )
    trace = TelemetryTrace(interval=spec.interval, samples=tuple(samples))

    logger.info(
        f"Synthesized {len(trace)} samples ({len(spec.segments)} segments, seed={seed}) "
        f"in {time.time() - start_time:.2f} seconds"
    )
    return trace
