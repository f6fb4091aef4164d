"""
Scenario descriptions: the load/attack protocol a trace is synthesized from.

Built-in scenarios reproduce the three experiments: a 30-minute run with
only legitimate clients, a 30-minute run with a three-phase SYN flood on top
of legitimate load, and a 120-minute run alternating legitimate-only,
attack-only and combined periods.
"""

import logging
import math
from enum import Enum
from pathlib import Path
from typing import List, Literal, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.tsentinel import config
from src.tsentinel.errors import ScenarioError
from src.tsentinel.telemetry.models import is_multiple

logger = logging.getLogger("tsentinel.synth.scenarios")

MAX_SENTINEL = "MAX"

AttackInterval = Union[Literal["MAX"], float]


class SegmentKind(str, Enum):
    """Traffic mix of a scenario segment."""

    IDLE = "idle"
    LEGIT_ONLY = "legit_only"
    ATTACK_ONLY = "attack_only"
    LEGIT_AND_ATTACK = "legit_and_attack"


class SegmentSpec(BaseModel):
    """A stretch of constant legitimate load and constant attack rate."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    duration: float = Field(..., gt=0, description="Segment length (s)")
    legit_rate: float = Field(
        default=0.0, ge=0, description="Legitimate HTTP requests per second"
    )
    attack_interval_ms: AttackInterval = Field(
        default=0.0,
        description="Milliseconds between attack packets; 0 = no attack, MAX = flood",
    )

    @model_validator(mode="after")
    def _check_interval(self) -> "SegmentSpec":
        if self.attack_interval_ms != MAX_SENTINEL and self.attack_interval_ms < 0:
            raise ValueError("attack_interval_ms must be >= 0 or MAX")
        return self

    @property
    def is_attack(self) -> bool:
        return self.attack_interval_ms == MAX_SENTINEL or self.attack_interval_ms > 0

    def attack_rate(self, max_attack_rate: float) -> float:
        """Attack packets per second for this segment."""
        if self.attack_interval_ms == MAX_SENTINEL:
            return max_attack_rate
        if self.attack_interval_ms == 0:
            return 0.0
        return 1000.0 / self.attack_interval_ms

    @property
    def kind(self) -> SegmentKind:
        if self.is_attack:
            if self.legit_rate > 0:
                return SegmentKind.LEGIT_AND_ATTACK
            return SegmentKind.ATTACK_ONLY
        if self.legit_rate > 0:
            return SegmentKind.LEGIT_ONLY
        return SegmentKind.IDLE


class ScenarioSpec(BaseModel):
    """An ordered list of segments sampled at a fixed interval."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    interval: float = Field(default=config.DEFAULT_INTERVAL_S, gt=0)
    segments: Tuple[SegmentSpec, ...] = Field(..., min_length=1)
    noise_scale: float = Field(default=1.0, ge=0)

    @model_validator(mode="after")
    def _check_durations(self) -> "ScenarioSpec":
        for index, segment in enumerate(self.segments, start=1):
            if not is_multiple(segment.duration, self.interval):
                raise ValueError(
                    f"segment {index} duration {segment.duration} s is not a "
                    f"multiple of the {self.interval} s interval"
                )
        return self

    @property
    def total_duration(self) -> float:
        return math.fsum(segment.duration for segment in self.segments)

    @property
    def sample_count(self) -> int:
        return sum(self.segment_sample_counts())

    def segment_sample_counts(self) -> List[int]:
        return [round(segment.duration / self.interval) for segment in self.segments]

    def sample_segments(self) -> np.ndarray:
        """Index of the segment each sample falls into."""
        return np.repeat(
            np.arange(len(self.segments), dtype=np.int64), self.segment_sample_counts()
        )


def baseline_scenario(legit_rate: float = config.DEFAULT_LEGIT_RATE) -> ScenarioSpec:
    """30 minutes of legitimate clients only, with 10 s idle gaps at both ends."""
    active = config.SCENARIO_DURATION_S - 2 * config.IDLE_GAP_S
    return ScenarioSpec(
        segments=(
            SegmentSpec(duration=config.IDLE_GAP_S),
            SegmentSpec(duration=active, legit_rate=legit_rate),
            SegmentSpec(duration=config.IDLE_GAP_S),
        )
    )


def attack_scenario(legit_rate: float = config.DEFAULT_LEGIT_RATE) -> ScenarioSpec:
    """
    30 minutes of legitimate load with a three-phase SYN flood on top.

    Attack phases last 600 s each (one packet every 300 ms, then every
    250 ms, then as fast as the attacker can) and start with the active
    window; the last phase is cut where the closing idle gap begins.
    """
    active_end = config.SCENARIO_DURATION_S - config.IDLE_GAP_S
    segments = [SegmentSpec(duration=config.IDLE_GAP_S)]
    start = config.IDLE_GAP_S
    for interval_ms in config.ATTACK_INTERVALS_MS:
        end = min(start + config.ATTACK_PHASE_S, active_end)
        segments.append(
            SegmentSpec(
                duration=end - start,
                legit_rate=legit_rate,
                attack_interval_ms=interval_ms,
            )
        )
        start = end
    segments.append(SegmentSpec(duration=config.IDLE_GAP_S))
    return ScenarioSpec(segments=tuple(segments))


MIXED_KINDS = (
    SegmentKind.LEGIT_ONLY,
    SegmentKind.ATTACK_ONLY,
    SegmentKind.LEGIT_AND_ATTACK,
)


def mixed_scenario(
    seed: int, legit_rate: float = config.DEFAULT_LEGIT_RATE
) -> ScenarioSpec:
    """
    120 minutes alternating legitimate-only, attack-only and combined traffic.

    Segment kinds are drawn uniformly and redrawn until each kind appears at
    least twice; every attack segment then draws its intensity uniformly from
    300 ms, 250 ms and MAX.

    Args:
        seed: Seed for the scenario generator
        legit_rate: Legitimate request rate used by segments with clients

    Returns:
        A ScenarioSpec of 12 segments of 600 s
    """
    rng = np.random.default_rng(seed)
    n_segments = config.MIXED_DURATION_S // config.MIXED_SEGMENT_S

    draws = 0
    while True:
        draws += 1
        kinds = rng.integers(0, len(MIXED_KINDS), size=n_segments)
        counts = np.bincount(kinds, minlength=len(MIXED_KINDS))
        if counts.min() >= config.MIXED_MIN_PER_KIND:
            break
    intensities = rng.integers(0, len(config.ATTACK_INTERVALS_MS), size=n_segments)
    logger.debug(f"Mixed scenario seed={seed} accepted after {draws} draw(s)")

    segments = []
    for kind_index, intensity_index in zip(kinds, intensities):
        kind = MIXED_KINDS[kind_index]
        rate = legit_rate if kind != SegmentKind.ATTACK_ONLY else 0.0
        interval_ms = (
            config.ATTACK_INTERVALS_MS[intensity_index]
            if kind != SegmentKind.LEGIT_ONLY
            else 0.0
        )
        segments.append(
            SegmentSpec(
                duration=config.MIXED_SEGMENT_S,
                legit_rate=rate,
                attack_interval_ms=interval_ms,
            )
        )
    return ScenarioSpec(segments=tuple(segments))


BUILTIN_SCENARIOS = ("baseline", "attack", "mixed")


def get_scenario_by_name(name: str, seed: int = 0) -> ScenarioSpec:
    """
    Build one of the built-in scenarios.

    Args:
        name: "baseline", "attack" or "mixed"
        seed: Only used by the mixed scenario

    Raises:
        ScenarioError: For an unknown name
    """
    if name == "baseline":
        return baseline_scenario()
    if name == "attack":
        return attack_scenario()
    if name == "mixed":
        return mixed_scenario(seed)
    raise ScenarioError(
        f"unknown scenario {name!r}, expected one of {', '.join(BUILTIN_SCENARIOS)}"
    )


def idle_sample_mask(spec: ScenarioSpec) -> np.ndarray:
    """True for samples in segments with neither legitimate nor attack traffic."""
    idle = np.array(
        [segment.kind == SegmentKind.IDLE for segment in spec.segments], dtype=bool
    )
    return idle[spec.sample_segments()]


def attack_onsets(spec: ScenarioSpec) -> List[float]:
    """Start time of every segment with a non-zero attack interval, in order."""
    onsets = []
    start = 0.0
    for segment in spec.segments:
        if segment.is_attack:
            onsets.append(start)
        start += segment.duration
    return onsets


# --- Text form -------------------------------------------------------------

SETTING_KEYS = ("interval", "noise_scale")


def _format_number(value: float) -> str:
    value = float(value)
    return str(int(value)) if value.is_integer() else repr(value)


def format_scenario(spec: ScenarioSpec) -> str:
    """
    Render a scenario as editable text.

    Settings are "key value" lines; each remaining line is one segment,
    "duration_s legit_rate attack_interval_ms". Lines starting with # are
    comments.
    """
    lines = [
        "# tsentinel scenario",
        f"interval {_format_number(spec.interval)}",
        f"noise_scale {_format_number(spec.noise_scale)}",
        "# duration_s legit_rate attack_interval_ms",
    ]
    for segment in spec.segments:
        interval_ms = (
            MAX_SENTINEL
            if segment.attack_interval_ms == MAX_SENTINEL
            else _format_number(segment.attack_interval_ms)
        )
        lines.append(
            f"{_format_number(segment.duration)} "
            f"{_format_number(segment.legit_rate)} {interval_ms}"
        )
    return "\n".join(lines) + "\n"


def parse_scenario(text: str) -> ScenarioSpec:
    """
    Parse the text produced by format_scenario.

    Raises:
        ScenarioError: On malformed lines or an invalid scenario, with the line number
    """
    settings = {}
    segments = []
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            if len(tokens) == 2 and tokens[0] in SETTING_KEYS:
                settings[tokens[0]] = float(tokens[1])
            elif len(tokens) == 3:
                interval_ms = (
                    MAX_SENTINEL
                    if tokens[2].upper() == MAX_SENTINEL
                    else float(tokens[2])
                )
                segments.append(
                    SegmentSpec(
                        duration=float(tokens[0]),
                        legit_rate=float(tokens[1]),
                        attack_interval_ms=interval_ms,
                    )
                )
            else:
                raise ScenarioError(f"line {line_number}: cannot parse {raw.strip()!r}")
        except (ValueError, ValidationError) as e:
            if isinstance(e, ScenarioError):
                raise
            raise ScenarioError(f"line {line_number}: {e}") from None

    try:
        return ScenarioSpec(segments=tuple(segments), **settings)
    except ValidationError as e:
        raise ScenarioError(f"invalid scenario: {e}") from None


def read_scenario(path: Union[str, Path]) -> ScenarioSpec:
    """Load a scenario text file."""
    path = Path(path)
    logger.info(f"Loading scenario from {path}")
    return parse_scenario(path.read_text())


def write_scenario(spec: ScenarioSpec, path: Union[str, Path]) -> Path:
    """Write a scenario text file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_scenario(spec))
    return path
