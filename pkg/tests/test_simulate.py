from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tempoguard.events import EventKey, intervals
from tempoguard.ingest import IngestConfig, parse_log, segment, serialize_log
from tempoguard.simulate import (
    AUTOMATION_LATENCY_MS,
    ActivitySpec,
    SimConfig,
    builtin_specs,
    generate,
    spec_name_map,
)


def test_there_are_three_builtin_activities():
    specs = builtin_specs()
    assert [s.name for s in specs] == ["Come back home", "Use toilet", "Go to work"]


def test_toilet_activity_uses_only_bathroom_devices():
    toilet = next(s for s in builtin_specs() if s.name == "Use toilet")
    devices = {key.device for key, _ in toilet.steps}
    assert devices <= {"M5", "C5", "L5", "V"}


def test_activities_use_disjoint_devices():
    specs = builtin_specs()
    seen: set[str] = set()
    for spec in specs:
        devices = {key.device for key, _ in spec.steps}
        assert not devices & seen
        seen |= devices


def test_automation_consequences_follow_their_triggers():
    rules = {
        ("M2", "active"): ("L1", "on"),
        ("M1", "active"): ("L2", "on"),
        ("M5", "active"): ("L5", "on"),
        ("C5", "closed"): ("V", "on"),
        ("C2", "open"): ("L4", "on"),
        ("M3", "active"): ("L3", "on"),
    }
    for spec in builtin_specs():
        sequence = [(key.device, key.state) for key, _ in spec.steps]
        for trigger, consequence in rules.items():
            if trigger in sequence:
                assert sequence.index(consequence) > sequence.index(trigger)


def test_automation_steps_use_the_fixed_latency():
    for spec in builtin_specs():
        gaps = {key.device: gap for key, gap in spec.steps}
        for device in ("L1", "L2", "L4", "L3"):
            if device in gaps:
                assert gaps[device] == AUTOMATION_LATENCY_MS


def test_spec_rejects_interval_on_the_first_step():
    with pytest.raises(ValueError, match="first step"):
        ActivitySpec(
            name="x",
            steps=((EventKey("A", "motion", "active"), 5),),
        )


def test_spec_rejects_missing_interval_on_later_steps():
    with pytest.raises(ValueError, match="positive base interval"):
        ActivitySpec(
            name="x",
            steps=(
                (EventKey("A", "motion", "active"), None),
                (EventKey("B", "motion", "active"), None),
            ),
        )


def test_spec_rejects_negative_noise():
    with pytest.raises(ValueError, match="noise"):
        ActivitySpec(
            name="x",
            steps=((EventKey("A", "motion", "active"), None),),
            noise_sigma_frac=-0.1,
        )


def test_sim_config_requires_gap_beyond_segmentation_threshold():
    with pytest.raises(ValueError, match="segmentation gap"):
        SimConfig(inter_instance_gap_ms=120_000)
    with pytest.raises(ValueError):
        SimConfig(instances_per_activity=0)


def test_zero_noise_reproduces_base_intervals_exactly():
    specs = builtin_specs(noise_sigma_frac=0.0)
    events = generate(specs, SimConfig(instances_per_activity=2))
    segments = segment(events, IngestConfig())
    assert len(segments) == 6
    for spec, chunk in zip(specs, [segments[0:2], segments[2:4], segments[4:6]]):
        bases = tuple(gap for _, gap in spec.steps[1:])
        for inst in chunk:
            assert inst.key_sequence() == spec.key_sequence()
            assert intervals(inst) == bases


def test_same_seed_gives_identical_logs():
    one = generate(builtin_specs(), SimConfig(seed=7, instances_per_activity=3))
    two = generate(builtin_specs(), SimConfig(seed=7, instances_per_activity=3))
    assert serialize_log(one) == serialize_log(two)


def test_different_seeds_give_different_timing():
    one = generate(builtin_specs(), SimConfig(seed=1, instances_per_activity=3))
    two = generate(builtin_specs(), SimConfig(seed=2, instances_per_activity=3))
    assert serialize_log(one) != serialize_log(two)


def test_generated_log_round_trips_through_the_parser():
    events = generate(builtin_specs(), SimConfig(instances_per_activity=3))
    assert parse_log(serialize_log(events, "csv")) == events


def test_segmentation_recovers_every_scripted_instance():
    specs = builtin_specs()
    events = generate(specs, SimConfig(instances_per_activity=4))
    segments = segment(events, IngestConfig())
    assert len(segments) == 12
    wanted = {spec.key_sequence(): 0 for spec in specs}
    for inst in segments:
        wanted[inst.key_sequence()] += 1
    assert all(count == 4 for count in wanted.values())


def test_name_map_indexes_specs_by_key_sequence():
    specs = builtin_specs()
    mapping = spec_name_map(specs)
    assert mapping[specs[0].key_sequence()] == "Come back home"
    assert len(mapping) == 3


@settings(deadline=None)
@given(seed=st.integers(min_value=0, max_value=10**6))
def test_generated_intervals_are_strictly_positive(seed):
    events = generate(builtin_specs(noise_sigma_frac=0.5), SimConfig(seed=seed, instances_per_activity=1))
    for before, after in zip(events, events[1:]):
        assert after.timestamp_ms - before.timestamp_ms >= 1
