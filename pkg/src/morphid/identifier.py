"""Morphology identification: a binary genetic search scored against the
recorded walk, plus an exhaustive brute-force reference.

The pipeline for one candidate: simulate its walk, filter every channel the
same way the recording was filtered, then accumulate the absolute
orientation error sample by sample across roll, pitch and yaw.  The genetic
loop ranks candidates by that cost, keeps the better half untouched, and
rebuilds the worse half by per-gene crossover from the better half followed
by per-leg mutation, with the link repair keeping every intermediate
candidate feasible.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .detector import DetectorConfig, detect
from .errors import PipelineError, ResourceLimitError
from .morphology import (
    DEFAULT_MAX_RAW_STATES,
    MorphologyVector,
    RobotSpec,
    apply_link_logic,
    enumerate_feasible,
    random_feasible,
)
from .signals import FilterConfig, TimedRecord, fft_filter, resample_uniform
from .surrogate import (
    DEFAULT_GAINS,
    GaitParams,
    OrientationTrajectory,
    SurrogateGains,
    simulate_orientation,
)
from .errors import SimulationError

COMPARISON_SAMPLES = 1024
DETECTION_RATE = 200.0  # Hz, grid used to uniformize records for detection


@dataclass(frozen=True)
class GaConfig:
    """Search parameters.  The per-link probability table biases mutation
    toward keeping links, more strongly for links close to the body."""

    pop_size: int = 10
    generations: int = 20
    cr: float = 0.9
    mr: float = 0.33
    p_table: tuple[tuple[float, ...], ...] | None = None
    sim_time: float = 5.0
    rng_seed: int = 0
    convergence_patience: int | None = None

    def __post_init__(self) -> None:
        if self.pop_size < 4 or self.pop_size % 2:
            raise ValueError("pop_size must be even and at least 4")
        if self.generations < 1:
            raise ValueError("generations must be at least 1")
        for name, p in (("cr", self.cr), ("mr", self.mr)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.sim_time <= 0:
            raise ValueError("sim_time must be positive")
        if self.convergence_patience is not None and self.convergence_patience < 1:
            raise ValueError("convergence_patience must be positive when set")

    def link_probabilities(self, spec: RobotSpec) -> tuple[tuple[float, ...], ...]:
        """Resolve the mutation table; 3-link legs default to (0.9, 0.7, 0.7)."""
        if self.p_table is not None:
            if len(self.p_table) != spec.leg_count or any(
                len(row) != n for row, n in zip(self.p_table, spec.links_per_leg)
            ):
                raise ValueError("p_table shape must match the robot's legs")
            if any(not 0.0 <= p <= 1.0 for row in self.p_table for p in row):
                raise ValueError("p_table entries must lie in [0, 1]")
            return self.p_table
        if all(n == 3 for n in spec.links_per_leg):
            return ((0.9, 0.7, 0.7),) * spec.leg_count
        raise ValueError("spec has legs without 3 links; provide an explicit p_table")


@dataclass
class Candidate:
    morphology: MorphologyVector
    cost: float | None = None


@dataclass
class GaRun:
    best_per_generation: list[tuple[MorphologyVector, float]]
    final: Candidate
    evaluations: int
    wall_time: float
    motion_start: float


def evaluate_cost(sim: OrientationTrajectory, exp: OrientationTrajectory) -> float:
    """Accumulated absolute orientation error across all channels and samples."""
    if len(sim) != len(exp):
        raise ValueError("trajectories must have the same sample count")
    if abs(sim.dt - exp.dt) > 1e-12 * max(sim.dt, exp.dt):
        raise ValueError("trajectories must share the sample interval; resample first")
    return float(np.abs(sim.channels() - exp.channels()).sum())


def filter_trajectory(traj: OrientationTrajectory, flt: FilterConfig) -> OrientationTrajectory:
    """Filter roll/pitch in peak mode and yaw in keep-all mode."""
    rate = 1.0 / traj.dt
    rp = replace(flt, mode="roll_pitch")
    yw = replace(flt, mode="yaw")
    return OrientationTrajectory(
        t0=traj.t0,
        dt=traj.dt,
        roll=fft_filter(traj.roll, rate, rp),
        pitch=fft_filter(traj.pitch, rate, rp),
        yaw=fft_filter(traj.yaw, rate, yw),
    )


def simulate_filtered(
    m: MorphologyVector,
    spec: RobotSpec,
    g: GaitParams,
    flt: FilterConfig,
    sim_time: float,
    gains: SurrogateGains = DEFAULT_GAINS,
    sim_memo: dict[tuple[int, ...], OrientationTrajectory] | None = None,
) -> OrientationTrajectory:
    """Simulated-then-filtered walk of a candidate; memoized when asked.

    A shared memo must only ever see one (spec, gait, filter, gains,
    sim_time) combination; the caller owns that guarantee.
    """
    if sim_memo is not None:
        hit = sim_memo.get(m.bits)
        if hit is not None:
            return hit
    raw = simulate_orientation(spec, m, g, sim_time, COMPARISON_SAMPLES, gains=gains)
    out = filter_trajectory(raw, flt)
    if sim_memo is not None:
        sim_memo[m.bits] = out
    return out


def uniformize_record(record: TimedRecord, rate: float = DETECTION_RATE) -> OrientationTrajectory:
    """Interpolate a timestamped record onto a uniform grid for detection."""
    if len(record) < 2:
        raise ValueError("record needs at least two samples")
    t0, t_end = record.times[0], record.times[-1]
    dt = 1.0 / rate
    n = int(np.floor((t_end - t0) / dt)) + 1
    grid = t0 + dt * np.arange(n)
    roll, pitch, yaw = (
        np.interp(grid, record.times, ch) for ch in record.channels()
    )
    return OrientationTrajectory(t0, dt, roll, pitch, yaw)


def process_experimental(
    record: TimedRecord,
    flt: FilterConfig,
    det: DetectorConfig,
    sim_time: float,
) -> tuple[OrientationTrajectory, float]:
    """Detect motion start, crop one comparison window, resample and filter.

    Returns the processed trajectory (time origin reset to zero) and the
    estimated motion start.  Raises PipelineError when the record never
    clears the detector's motion floor.
    """
    report = detect(uniformize_record(record), det)
    if report.motion_start is None:
        raise PipelineError("no locomotion found in the record")
    start = report.motion_start
    dt = sim_time / COMPARISON_SAMPLES
    channels = [
        resample_uniform(record.times, ch, start, sim_time, COMPARISON_SAMPLES)
        for ch in record.channels()
    ]
    cropped = OrientationTrajectory(0.0, dt, *channels)
    return filter_trajectory(cropped, flt), start


def init_population(spec: RobotSpec, cfg: GaConfig) -> list[Candidate]:
    """Distinct random feasible candidates, unevaluated, fixed by the seed."""
    if cfg.pop_size > spec.feasible_count:
        raise ValueError("population exceeds the number of feasible morphologies")
    return [
        Candidate(m) for m in random_feasible(spec, cfg.pop_size, cfg.rng_seed)
    ]


def crossover_step(
    pop: list[Candidate], spec: RobotSpec, cfg: GaConfig, rng: np.random.Generator
) -> list[Candidate]:
    """Rebuild the worse half gene-by-gene from randomly chosen elites.

    `pop` must be sorted by ascending cost.  For every gene of every
    second-half candidate a uniform draw against the crossover rate decides
    whether to copy that gene from a freshly drawn first-half donor.  Two
    draws happen per offspring, in order: the per-gene decision vector, then
    the per-gene donor indices.  Each offspring is repaired before return.
    """
    if len(pop) % 2:
        raise ValueError("population size must be even")
    half = len(pop) // 2
    elites = pop[:half]
    out = list(elites)
    n_t = spec.total_links
    for cand in pop[half:]:
        decide = rng.random(n_t) <= cfg.cr
        donors = rng.integers(0, half, size=n_t)
        genes = [
            elites[d].morphology.bits[j] if take else cand.morphology.bits[j]
            for j, (take, d) in enumerate(zip(decide, donors))
        ]
        repaired = apply_link_logic(MorphologyVector(tuple(genes)), spec)
        out.append(Candidate(repaired))
    return out


def mutation_step(
    pop: list[Candidate], spec: RobotSpec, cfg: GaConfig, rng: np.random.Generator
) -> list[Candidate]:
    """Mutate whole legs of the newly generated second half.

    Per offspring and per leg, a draw against the mutation rate selects the
    leg; a selected leg redraws every gene to 1 with its configured link
    probability, else 0.  Untouched legs keep their genes.  Each mutated
    candidate is repaired.
    """
    half = len(pop) // 2
    probs = cfg.link_probabilities(spec)
    slices = spec.leg_slices()
    out = list(pop[:half])
    for cand in pop[half:]:
        genes = list(cand.morphology.bits)
        mutated = False
        for leg, (s, p_row) in enumerate(zip(slices, probs)):
            if rng.random() <= cfg.mr:
                draws = rng.random(spec.links_per_leg[leg])
                genes[s] = [1 if r <= p else 0 for r, p in zip(draws, p_row)]
                mutated = True
        if mutated:
            repaired = apply_link_logic(MorphologyVector(tuple(genes)), spec)
            out.append(Candidate(repaired))
        else:
            out.append(Candidate(cand.morphology, cand.cost))
    return out


def _cost_of(
    m: MorphologyVector,
    exp_f: OrientationTrajectory,
    spec: RobotSpec,
    g: GaitParams,
    flt: FilterConfig,
    sim_time: float,
    gains: SurrogateGains,
    sim_memo: dict | None,
) -> float:
    try:
        sim_f = simulate_filtered(m, spec, g, flt, sim_time, gains, sim_memo)
    except SimulationError:
        return float("inf")  # unsupportable candidates sort last, never win
    return evaluate_cost(sim_f, exp_f)


def run_identification(
    exp_raw: TimedRecord,
    spec: RobotSpec,
    g: GaitParams,
    ga: GaConfig,
    flt: FilterConfig,
    det: DetectorConfig,
    *,
    gains: SurrogateGains = DEFAULT_GAINS,
    sim_memo: dict[tuple[int, ...], OrientationTrajectory] | None = None,
) -> GaRun:
    """Full pipeline: align the record, then search for the morphology.

    Candidate evaluations are memoized per run (and across runs through
    `sim_memo`); the reported evaluation count is the number of distinct
    morphologies this run asked to be scored.  Reproducible bit for bit
    from the inputs and the seed, wall time aside.
    """
    started = time.perf_counter()
    exp_f, motion_start = process_experimental(exp_raw, flt, det, ga.sim_time)

    cost_cache: dict[tuple[int, ...], float] = {}

    def score(cand: Candidate) -> None:
        if cand.cost is not None:
            return
        cached = cost_cache.get(cand.morphology.bits)
        if cached is None:
            cached = _cost_of(
                cand.morphology, exp_f, spec, g, flt, ga.sim_time, gains, sim_memo
            )
            cost_cache[cand.morphology.bits] = cached
        cand.cost = cached

    pop = init_population(spec, ga)
    for cand in pop:
        score(cand)
    pop.sort(key=lambda c: (c.cost, c.morphology.bits))
    best_history: list[tuple[MorphologyVector, float]] = [
        (pop[0].morphology, float(pop[0].cost))
    ]

    stale = 0
    for gen in range(ga.generations):
        rng = np.random.default_rng(np.random.SeedSequence((ga.rng_seed, gen + 1)))
        pop = crossover_step(pop, spec, ga, rng)
        pop = mutation_step(pop, spec, ga, rng)
        for cand in pop:
            score(cand)
        pop.sort(key=lambda c: (c.cost, c.morphology.bits))
        best = (pop[0].morphology, float(pop[0].cost))
        improved = best[1] < best_history[-1][1]
        best_history.append(best)
        if ga.convergence_patience is not None:
            stale = 0 if improved else stale + 1
            if stale >= ga.convergence_patience:
                break

    final = Candidate(best_history[-1][0], best_history[-1][1])
    return GaRun(
        best_per_generation=best_history,
        final=final,
        evaluations=len(cost_cache),
        wall_time=time.perf_counter() - started,
        motion_start=motion_start,
    )


@dataclass
class OracleResult:
    best_morphology: MorphologyVector
    best_cost: float
    table: list[tuple[MorphologyVector, float]] = field(repr=False)


def exhaustive_oracle(
    exp_processed: OrientationTrajectory,
    spec: RobotSpec,
    g: GaitParams,
    flt: FilterConfig,
    *,
    sim_time: float = 5.0,
    gains: SurrogateGains = DEFAULT_GAINS,
    sim_memo: dict[tuple[int, ...], OrientationTrajectory] | None = None,
    max_raw_states: int = DEFAULT_MAX_RAW_STATES,
) -> OracleResult:
    """Score every feasible morphology against an already processed record.

    Unsupportable morphologies are tabulated with infinite cost.  The argmin
    breaks ties toward the lexicographically smallest bit vector (the table
    is in enumeration order, so the first strict minimum wins).
    """
    if 2 ** spec.total_links > max_raw_states:
        raise ResourceLimitError("feasible set enumeration exceeds the state cap")
    table: list[tuple[MorphologyVector, float]] = []
    best: tuple[MorphologyVector, float] | None = None
    for m in enumerate_feasible(spec, max_raw_states):
        cost = _cost_of(m, exp_processed, spec, g, flt, sim_time, gains, sim_memo)
        table.append((m, cost))
        if best is None or cost < best[1]:
            best = (m, cost)
    assert best is not None
    return OracleResult(best[0], best[1], table)
