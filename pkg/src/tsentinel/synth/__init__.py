"""
Synthetic telemetry under legitimate and SYN-flood load.
"""

from src.tsentinel.synth.generator import synthesize
from src.tsentinel.synth.load_model import LoadModel, get_default_load_model
from src.tsentinel.synth.scenarios import (
    ScenarioSpec,
    SegmentKind,
    SegmentSpec,
    attack_onsets,
    attack_scenario,
    baseline_scenario,
    get_scenario_by_name,
    idle_sample_mask,
    mixed_scenario,
)

__all__ = [
    "LoadModel",
    "ScenarioSpec",
    "SegmentKind",
    "SegmentSpec",
    "attack_onsets",
    "attack_scenario",
    "baseline_scenario",
    "get_default_load_model",
    "get_scenario_by_name",
    "idle_sample_mask",
    "mixed_scenario",
    "synthesize",
]
