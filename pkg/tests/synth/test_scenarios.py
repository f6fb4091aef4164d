import numpy as np
import pytest
from pydantic import ValidationError

from src.tsentinel.errors import ScenarioError
from src.tsentinel.synth import (
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
from src.tsentinel.synth.scenarios import format_scenario, parse_scenario, read_scenario, write_scenario


def test_baseline_protocol():
    spec = baseline_scenario()
    assert spec.total_duration == 1800
    assert spec.sample_count == 360
    assert [s.kind for s in spec.segments] == [
        SegmentKind.IDLE,
        SegmentKind.LEGIT_ONLY,
        SegmentKind.IDLE,
    ]
    assert not any(s.is_attack for s in spec.segments)


def test_attack_protocol_phases():
    spec = attack_scenario()
    assert spec.sample_count == 360
    phases = [s for s in spec.segments if s.is_attack]
    assert [s.attack_interval_ms for s in phases] == [300, 250, "MAX"]
    assert [s.duration for s in phases] == [600, 600, 580]
    assert phases[0].attack_rate(10000.0) == pytest.approx(1000 / 300)
    assert phases[1].attack_rate(10000.0) == pytest.approx(4.0)
    assert phases[2].attack_rate(10000.0) == 10000.0
    assert all(s.legit_rate > 0 for s in phases)
    assert spec.segments[0].duration == 10 and spec.segments[-1].duration == 10


@pytest.mark.parametrize("seed", [0, 7, 100, 12345])
def test_mixed_protocol(seed):
    spec = mixed_scenario(seed)
    assert spec.total_duration == 7200
    assert spec.sample_count == 1440
    assert len(spec.segments) == 12
    kinds = [s.kind for s in spec.segments]
    for kind in (SegmentKind.LEGIT_ONLY, SegmentKind.ATTACK_ONLY, SegmentKind.LEGIT_AND_ATTACK):
        assert kinds.count(kind) >= 2


def test_mixed_kind_counts_over_seeds():
    for seed in range(100):
        spec = mixed_scenario(seed)
        kinds = [s.kind for s in spec.segments]
        short = [
            kind
            for kind in (SegmentKind.LEGIT_ONLY, SegmentKind.ATTACK_ONLY, SegmentKind.LEGIT_AND_ATTACK)
            if kinds.count(kind) < 2
        ]
        assert not short, f"seed {seed} has fewer than two {short}"
        assert all(s.kind is not SegmentKind.IDLE for s in spec.segments)


def test_mixed_is_seeded():
    assert mixed_scenario(3) == mixed_scenario(3)


def test_duration_must_be_multiple_of_interval():
    with pytest.raises(ValidationError, match="multiple"):
        ScenarioSpec(segments=(SegmentSpec(duration=12),))


def test_negative_attack_interval_rejected():
    with pytest.raises(ValidationError):
        SegmentSpec(duration=5, attack_interval_ms=-1)


def test_attack_onsets():
    assert attack_onsets(attack_scenario()) == [10.0, 610.0, 1210.0]
    assert attack_onsets(baseline_scenario()) == []
    spec = mixed_scenario(7)
    expected = [600.0 * i for i, s in enumerate(spec.segments) if s.is_attack]
    assert attack_onsets(spec) == expected


def test_idle_mask_marks_gaps():
    mask = idle_sample_mask(baseline_scenario())
    assert mask.sum() == 4
    assert mask[:2].all() and mask[-2:].all()
    assert not mask[2:-2].any()


def test_unknown_scenario_name():
    with pytest.raises(ScenarioError, match="unknown scenario"):
        get_scenario_by_name("flood")


def test_text_form_round_trip(tmp_path):
    spec = mixed_scenario(5)
    assert parse_scenario(format_scenario(spec)) == spec
    path = write_scenario(attack_scenario(), tmp_path / "attack.txt")
    assert read_scenario(path) == attack_scenario()


def test_text_form_parses_comments_and_max():
    text = "# demo\ninterval 5\n600 0 max  # flood\n300 40 0\n"
    spec = parse_scenario(text)
    assert spec.segments[0].attack_interval_ms == "MAX"
    assert spec.segments[1].kind is SegmentKind.LEGIT_ONLY
    assert spec.sample_count == 180


@pytest.mark.parametrize(
    "text",
    ["interval 5\n600 40\n", "600 40 abc\n", "interval 5\n7 0 0\n", ""],
)
def test_text_form_errors(text):
    with pytest.raises(ScenarioError):
        parse_scenario(text)


def test_sample_segments():
    spec = ScenarioSpec(segments=(SegmentSpec(duration=10), SegmentSpec(duration=15)))
    assert spec.sample_segments().tolist() == [0, 0, 1, 1, 1]
    assert isinstance(spec.sample_segments(), np.ndarray)
