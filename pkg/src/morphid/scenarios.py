"""Bundled damage scenarios and synthetic experiment fixtures.

Eight named damage cases (single legs, leg pairs, partial links) drive the
regression suite: each one synthesizes an "experimental" record by walking
the damaged robot in the surrogate, optionally through the measurement
corruption harness and on a slope, and then asks the identification
pipeline to recover the damage.  A standard 18-run layout (more repeats for
the flagship two-leg case) gives a summary table comparable across
configurations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .config import PipelineConfig
from .detector import DetectorConfig
from .identifier import (
    DETECTION_RATE,
    GaRun,
    exhaustive_oracle,
    process_experimental,
    run_identification,
)
from .morphology import (
    MorphologyVector,
    RobotSpec,
    damaged_legs,
    format_morphology,
    from_link_counts,
    leg_link_counts,
)
from .signals import CorruptionConfig, TimedRecord, corrupt_trajectory
from .surrogate import (
    DEFAULT_GAINS,
    GaitParams,
    OrientationTrajectory,
    SurrogateGains,
    simulate_orientation,
)
from .trajio import record_from_trajectory

# Synthetic-record layout, in samples on the 200 Hz detection grid.  The
# stationary prefix ends on a detector window boundary and the walk starts
# 0.1 cycle before its own phase origin, so on clean data the detector dates
# motion one window later, exactly at gait phase zero; the comparison window
# is then phase-aligned with candidate simulations.
PREFIX_SAMPLES = 220
WALK_LEAD_SAMPLES = 180
WALK_SAMPLES = 1331

# Raised motion floor for corrupted records: with 1-degree sensor noise the
# max-minus-min of a half-second window of pure noise sits near 5 degrees,
# so the default 0.5-degree floor would date "motion" at the first window.
CORRUPTED_MOTION_FLOOR_DEG = 9.0


@dataclass(frozen=True)
class DamageScenario:
    key: str
    title: str
    link_counts: tuple[int, ...]
    suite_runs: int


SCENARIOS: dict[str, DamageScenario] = {
    s.key: s
    for s in (
        DamageScenario("leg_3_missing", "Leg 3 missing", (3, 3, 0, 3, 3, 3), 2),
        DamageScenario("leg_5_missing", "Leg 5 missing", (3, 3, 3, 3, 0, 3), 2),
        DamageScenario("legs_1_4_missing", "Legs 1 and 4 missing", (0, 3, 3, 0, 3, 3), 4),
        DamageScenario("legs_3_4_missing", "Legs 3 and 4 missing", (3, 3, 0, 0, 3, 3), 2),
        DamageScenario(
            "legs_3_4_two_last_missing",
            "Legs 3 and 4, two last links missing", (3, 3, 1, 1, 3, 3), 2,
        ),
        DamageScenario(
            "legs_3_4_one_last_missing",
            "Legs 3 and 4, last link missing", (3, 3, 2, 2, 3, 3), 2,
        ),
        DamageScenario("legs_4_5_missing", "Legs 4 and 5 missing", (3, 3, 3, 0, 0, 3), 2),
        DamageScenario("legs_2_3_missing", "Legs 2 and 3 missing", (3, 0, 0, 3, 3, 3), 2),
    )
}


def scenario_truth(scenario: DamageScenario, spec: RobotSpec) -> MorphologyVector:
    if spec.leg_count != len(scenario.link_counts):
        raise ValueError("bundled scenarios assume the six-legged default robot")
    return from_link_counts(scenario.link_counts, spec)


def scenario_record(
    spec: RobotSpec,
    gait: GaitParams,
    truth: MorphologyVector,
    *,
    corruption: CorruptionConfig | None = None,
    terrain: tuple[float, float] | None = None,
    gains: SurrogateGains = DEFAULT_GAINS,
) -> TimedRecord:
    """Synthesize the record of a damaged robot standing briefly, then walking.

    The stationary prefix holds the initial standing attitude so the
    detector has a quiet baseline to date the walking onset against.
    """
    dt = 1.0 / DETECTION_RATE
    total = WALK_LEAD_SAMPLES + WALK_SAMPLES
    walk = simulate_orientation(
        spec, truth, gait, total * dt, total,
        terrain_bias=terrain, gains=gains,
    )
    channels = []
    for row in walk.channels():
        row = row[WALK_LEAD_SAMPLES:]
        prefix = np.full(PREFIX_SAMPLES, row[0])
        channels.append(np.concatenate([prefix, row]))
    clean = OrientationTrajectory(0.0, dt, *channels)
    if corruption is None:
        return record_from_trajectory(clean)
    return corrupt_trajectory(clean, corruption)


def detection_demo_trace(
    spec: RobotSpec,
    gait: GaitParams,
    *,
    rng_seed: int = 0,
    noise_sigma: float = 0.001,
    gains: SurrogateGains = DEFAULT_GAINS,
) -> OrientationTrajectory:
    """A 32 s trace: still for 6 s, healthy walk to 19 s, then both middle
    legs lost.  Exercises motion-start and damage-onset estimation."""
    fs = 200.0
    healthy = from_link_counts([n for n in spec.links_per_leg], spec)
    damaged = from_link_counts((3, 3, 0, 0, 3, 3), spec)
    walk_h = simulate_orientation(spec, healthy, gait, 13.0, 2600, gains=gains)
    walk_d = simulate_orientation(spec, damaged, gait, 13.0, 2600, gains=gains)
    rng = np.random.default_rng(rng_seed)
    channels = []
    for h, d, offset in (
        (walk_h.roll, walk_d.roll, 0.0),
        (walk_h.pitch, walk_d.pitch, 0.0),
        (walk_h.yaw, walk_d.yaw, None),
    ):
        shift = h[-1] if offset is None else offset
        channels.append(np.concatenate([np.zeros(1200), h, d + shift]))
    noisy = [c + rng.normal(0.0, noise_sigma, len(c)) for c in channels]
    return OrientationTrajectory(0.0, 1.0 / fs, *noisy)


def identification_success(
    truth: MorphologyVector, found: MorphologyVector, spec: RobotSpec
) -> tuple[bool, bool]:
    """(leg level, link level) verdicts for an identification result.

    Leg level: exactly the truly damaged legs are reported damaged.  Link
    level: additionally, each damaged leg's present-link count is within one
    of the truth.
    """
    leg_ok = damaged_legs(found, spec) == damaged_legs(truth, spec)
    if not leg_ok:
        return False, False
    t_counts = leg_link_counts(truth, spec)
    f_counts = leg_link_counts(found, spec)
    link_ok = all(abs(a - b) <= 1 for a, b in zip(t_counts, f_counts))
    return True, link_ok


@dataclass
class ScenarioReport:
    scenario: str
    title: str
    seed: int
    corrupted: bool
    terrain_slope_deg: float | None
    truth: str
    identified: str
    leg_level_correct: bool
    link_level_correct: bool
    final_cost: float
    motion_start: float
    evaluations: int
    wall_time: float
    best_per_generation: list[tuple[str, float]]
    oracle_cost: float | None = None
    oracle_morphology: str | None = None


def run_scenario(
    name: str,
    cfg: PipelineConfig,
    *,
    seed: int = 0,
    corrupted: bool = False,
    terrain_slope_deg: float | None = None,
    terrain_heading_deg: float = 0.0,
    with_oracle: bool = False,
    sim_memo: dict | None = None,
) -> ScenarioReport:
    """Synthesize one scenario record and identify the damage in it."""
    scenario = SCENARIOS.get(name)
    if scenario is None:
        raise KeyError(f"unknown scenario {name!r}; known: {', '.join(sorted(SCENARIOS))}")
    cfg = cfg.with_seed(seed)
    spec = cfg.robot.to_spec()
    gait = cfg.gait.to_gait()
    gains = cfg.surrogate.to_gains()
    flt = cfg.filter.to_filter()
    ga = cfg.ga.to_ga()
    det = cfg.detector.to_detector()
    if corrupted:
        floor = max(det.motion_floor, math.radians(CORRUPTED_MOTION_FLOOR_DEG))
        det = replace(det, motion_floor=floor)

    truth = scenario_truth(scenario, spec)
    terrain = None
    if terrain_slope_deg is not None:
        terrain = (math.radians(terrain_slope_deg), math.radians(terrain_heading_deg))
    record = scenario_record(
        spec, gait, truth,
        corruption=cfg.corruption.to_corruption() if corrupted else None,
        terrain=terrain, gains=gains,
    )

    run: GaRun = run_identification(
        record, spec, gait, ga, flt, det, gains=gains, sim_memo=sim_memo
    )
    leg_ok, link_ok = identification_success(truth, run.final.morphology, spec)

    oracle_cost = oracle_morph = None
    if with_oracle:
        exp_f, _ = process_experimental(record, flt, det, ga.sim_time)
        oracle = exhaustive_oracle(
            exp_f, spec, gait, flt, sim_time=ga.sim_time, gains=gains, sim_memo=sim_memo
        )
        oracle_cost = oracle.best_cost
        oracle_morph = format_morphology(oracle.best_morphology, spec)

    return ScenarioReport(
        scenario=scenario.key,
        title=scenario.title,
        seed=seed,
        corrupted=corrupted,
        terrain_slope_deg=terrain_slope_deg,
        truth=format_morphology(truth, spec),
        identified=format_morphology(run.final.morphology, spec),
        leg_level_correct=leg_ok,
        link_level_correct=link_ok,
        final_cost=run.final.cost if run.final.cost is not None else float("inf"),
        motion_start=run.motion_start,
        evaluations=run.evaluations,
        wall_time=run.wall_time,
        best_per_generation=[
            (format_morphology(m, spec), c) for m, c in run.best_per_generation
        ],
        oracle_cost=oracle_cost,
        oracle_morphology=oracle_morph,
    )


@dataclass
class SuiteSummary:
    reports: list[ScenarioReport]
    per_scenario: dict[str, tuple[int, int]]  # key -> (correct, runs)
    correct: int
    total: int


def standard_suite(
    cfg: PipelineConfig,
    *,
    corrupted: bool = True,
    base_seed: int = 0,
    sim_memo: dict | None = None,
) -> SuiteSummary:
    """The fixed 18-run layout over all eight scenarios.

    A run counts as correct when the damaged legs are exactly recovered and
    every damaged leg's link count is within one of the truth.
    """
    reports: list[ScenarioReport] = []
    per: dict[str, tuple[int, int]] = {}
    seed = base_seed
    for scenario in SCENARIOS.values():
        good = 0
        for _ in range(scenario.suite_runs):
            rep = run_scenario(
                scenario.key, cfg, seed=seed, corrupted=corrupted, sim_memo=sim_memo
            )
            reports.append(rep)
            good += int(rep.leg_level_correct and rep.link_level_correct)
            seed += 1
        per[scenario.key] = (good, scenario.suite_runs)
    correct = sum(g for g, _ in per.values())
    total = sum(r for _, r in per.values())
    return SuiteSummary(reports, per, correct, total)
