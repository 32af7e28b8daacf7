"""Deterministic forward model: morphology + tripod gait -> body orientation.

The model is quasi-static.  At every sample the body attitude is read off a
weighted least-squares plane fitted through six "support corners", one under
each leg mount:

* a corner drops by a fixed gain times the leg's length deficit (total
  healthy length minus the summed lengths of its present links), saturated
  at a configurable maximum, so shorter legs sink their side of the body;
* legs currently swinging keep only a small residual weight and sag by a
  drag height, which is what produces the gait-frequency wobble of a
  healthy walker;
* terrain bias adds a constant inclined plane to all corner heights.

Yaw integrates a rate proportional to the left/right imbalance of the
stance thrust, where each leg pushes in proportion to its remaining length
and fully missing legs push nothing.  Everything is a pure function of its
inputs, so concurrent evaluation of many candidates is safe.

The two response gains below (corner drop, swing drag) were calibrated once
against the target behaviors "healthy roll/pitch window fluctuation stays
under 5 degrees" and "both middle legs lost: pitch under 2 degrees, roll
fluctuation over 5 degrees", then frozen; regression tests pin them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SimulationError, StructureError
from .morphology import MorphologyVector, RobotSpec, is_feasible

MIN_SUPPORT_LEGS = 3


@dataclass(frozen=True)
class GaitParams:
    """Alternating-tripod gait description (leg indices are 1-based)."""

    period: float = 1.0
    step_height: float = 0.035
    stride: float = 0.08
    duty: float = 0.5
    group_a: tuple[int, ...] = (1, 4, 5)
    group_b: tuple[int, ...] = (2, 3, 6)

    def __post_init__(self) -> None:
        if self.period <= 0:
            raise ValueError("period must be positive")
        if not 0 < self.duty < 1:
            raise ValueError("duty must lie strictly between 0 and 1")
        if self.step_height < 0 or self.stride < 0:
            raise ValueError("step_height and stride must be nonnegative")
        if set(self.group_a) & set(self.group_b):
            raise ValueError("tripod groups must be disjoint")

    def check_groups(self, spec: RobotSpec) -> None:
        legs = set(range(1, spec.leg_count + 1))
        if set(self.group_a) | set(self.group_b) != legs:
            raise ValueError("tripod groups must cover every leg exactly once")


@dataclass(frozen=True)
class SurrogateGains:
    """Frozen response constants of the support-plane model."""

    corner_drop_gain: float = 0.8      # meters of corner drop per meter of leg deficit
    max_corner_drop: float = 0.30      # deficit saturation (meters), bounds the tilt
    swing_drag_scale: float = 1.0      # swing sag as a fraction of step height
    swing_weight: float = 0.12         # residual fit weight of a swinging corner
    yaw_rate_gain: float = 12.0        # rad of yaw per meter of net side thrust
    transition_fraction: float = 0.08  # stance/swing crossfade width, cycle fraction
    load_transfer: float = 0.9         # fore-aft load sweep amplitude within a stance


DEFAULT_GAINS = SurrogateGains()


@dataclass
class OrientationTrajectory:
    """Uniformly sampled roll/pitch/yaw, radians.

    Sign conventions: roll > 0 leans the right side down, pitch > 0 dips the
    nose, yaw > 0 turns toward the left (right-handed about the up axis).
    """

    t0: float
    dt: float
    roll: np.ndarray
    pitch: np.ndarray
    yaw: np.ndarray

    def __post_init__(self) -> None:
        self.roll = np.asarray(self.roll, dtype=float)
        self.pitch = np.asarray(self.pitch, dtype=float)
        self.yaw = np.asarray(self.yaw, dtype=float)
        q = len(self.roll)
        if q < 2 or len(self.pitch) != q or len(self.yaw) != q:
            raise ValueError("channels must share a common length >= 2")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if not (np.isfinite(self.roll).all() and np.isfinite(self.pitch).all()
                and np.isfinite(self.yaw).all()):
            raise ValueError("orientation samples must be finite")

    def __len__(self) -> int:
        return len(self.roll)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.roll))

    @property
    def duration(self) -> float:
        return self.dt * len(self.roll)

    def channels(self) -> np.ndarray:
        return np.stack([self.roll, self.pitch, self.yaw])


def tripod_support_set(g: GaitParams, t: float) -> frozenset[int]:
    """Legs in stance at time t: group A early in the cycle, B for the rest."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    phase = (t % g.period) / g.period
    return frozenset(g.group_a if phase < g.duty else g.group_b)


def mount_positions(spec: RobotSpec) -> tuple[np.ndarray, np.ndarray]:
    """Footprint (x, y) of each leg mount; x right, y forward."""
    az = np.asarray(spec.mount_angles)
    return spec.mount_radius * np.sin(az), spec.mount_radius * np.cos(az)


def _smoothstep(x: np.ndarray) -> np.ndarray:
    x = np.clip(x, 0.0, 1.0)
    return x * x * (3.0 - 2.0 * x)


def _phase_square(u: np.ndarray, length: float, width: float) -> np.ndarray:
    """Smooth square wave: 1 while (u mod 1) lies in [0, length), else 0,
    crossfaded over `width` cycles centered on both edges."""
    if not width < min(length, 1.0 - length):
        raise ValueError("transition width must fit inside both phases")
    rel = u % 1.0
    half = width / 2
    val = np.ones_like(rel)
    val = np.where(np.abs(rel - length) <= half,
                   _smoothstep(0.5 - (rel - length) / width), val)
    val = np.where((rel > length + half) & (rel < 1.0 - half), 0.0, val)
    val = np.where(rel >= 1.0 - half,
                   _smoothstep((rel - 1.0) / width + 0.5), val)
    val = np.where(rel <= half, _smoothstep(rel / width + 0.5), val)
    return val


def leg_reaches(spec: RobotSpec, m: MorphologyVector) -> np.ndarray:
    """Summed length of the present links of each leg, meters."""
    return np.array([
        sum(l for l, b in zip(lengths, seg) if b)
        for lengths, seg in zip(spec.link_lengths, m.segments(spec))
    ])


def simulate_orientation(
    spec: RobotSpec,
    m: MorphologyVector,
    g: GaitParams,
    duration: float,
    samples: int,
    terrain_bias: tuple[float, float] | None = None,
    gains: SurrogateGains = DEFAULT_GAINS,
) -> OrientationTrajectory:
    """Walk morphology `m` for `duration` seconds and record body orientation.

    `terrain_bias` is (slope, uphill heading), radians; heading uses the same
    azimuth convention as leg mounts (0 = uphill straight ahead).  Raises
    SimulationError when fewer than three legs retain any link, because no
    static support exists then.
    """
    if not is_feasible(m, spec):
        raise StructureError("morphology must be feasible (run the link repair first)")
    g.check_groups(spec)
    if samples < 16:
        raise ValueError("samples must be at least 16")
    if duration <= 0:
        raise ValueError("duration must be positive")

    reach = leg_reaches(spec, m)
    full = np.array([sum(row) for row in spec.link_lengths])
    present = reach > 0.0
    if int(present.sum()) < MIN_SUPPORT_LEGS:
        raise SimulationError(
            "statically unsupportable: fewer than "
            f"{MIN_SUPPORT_LEGS} legs retain any link"
        )

    dt = duration / samples
    t = dt * np.arange(samples)
    u = (t / g.period) % 1.0

    in_a = np.array([i + 1 in g.group_a for i in range(spec.leg_count)])
    s_a = _phase_square(u, g.duty, gains.transition_fraction)
    s_b = 1.0 - s_a
    stance = np.where(in_a[None, :], s_a[:, None], s_b[:, None])

    x, y = mount_positions(spec)
    if terrain_bias is not None:
        slope, heading = terrain_bias
        terrain = math.tan(slope) * (x * math.sin(heading) + y * math.cos(heading))
    else:
        terrain = np.zeros(spec.leg_count)

    drop = gains.corner_drop_gain * np.minimum(full - reach, gains.max_corner_drop)
    drag = gains.swing_drag_scale * g.step_height

    # Load within a stance is not constant: it ripples as the opposite group
    # swings past, and legs mounted further around the body ripple at higher
    # order and shifted timing (mirror pairs ripple together).  A shortened
    # leg sinks its corner most at its own load peaks, which stamps each
    # leg's damage with its own waveform instead of a shared amplitude.
    chi_a = 2.0 * np.pi * u / g.duty
    chi_b = 2.0 * np.pi * (u - g.duty) / (1.0 - g.duty)
    abs_az = np.abs(np.asarray(spec.mount_angles))
    ripple_order = np.maximum(1, np.round(abs_az / (np.pi / 4))).astype(int)
    peak_phase = 2.0 * abs_az

    # One weighted plane fit z ~ a + b*x + c*y per support phase (the corner
    # points sit on a circle, so the 3x3 solve is safe); only the corner
    # heights vary inside a phase, so each phase reduces to one constant
    # 3x6 fit operator.  The body attitude crossfades between the two phase
    # attitudes with the stance weight.
    basis = np.stack([np.ones_like(x), x, y], axis=1)

    def phase_attitude(
        in_stance: np.ndarray, chi: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        weights = np.where(in_stance, 1.0, gains.swing_weight)
        normal = np.einsum("i,ia,ib->ab", weights, basis, basis)
        operator = np.linalg.solve(normal, basis.T * weights)
        load = np.where(
            in_stance[None, :],
            1.0 + gains.load_transfer * np.cos(
                ripple_order[None, :] * chi[:, None] - peak_phase[None, :]
            ),
            1.0,
        )
        heights = terrain[None, :] - drop[None, :] * load - drag * (~in_stance)
        coef = heights @ operator.T
        return -np.arctan(coef[:, 1]), -np.arctan(coef[:, 2])

    roll_a, pitch_a = phase_attitude(in_a, chi_a)
    roll_b, pitch_b = phase_attitude(~in_a, chi_b)
    roll = s_a * roll_a + s_b * roll_b
    pitch = s_a * pitch_a + s_b * pitch_b

    # Yaw rate follows the left/right imbalance of the stance thrust, scaled
    # by how fast the robot actually advances: each leg pushes in proportion
    # to its remaining length, load redistributes over the surviving stance
    # legs (hence the normalization), and a weaker overall stance moves and
    # turns the body more slowly.
    thrust = reach / full
    side = np.sign(x)
    pushed = stance * thrust[None, :]
    denom = pushed.sum(axis=1)
    imbalance = np.divide(
        pushed @ side, denom, out=np.zeros_like(denom), where=denom > 1e-12
    )
    speed = np.divide(
        denom, stance.sum(axis=1),
        out=np.zeros_like(denom), where=stance.sum(axis=1) > 1e-12,
    )
    rate = gains.yaw_rate_gain * (g.stride / g.period) * imbalance * (0.5 + 0.5 * speed)
    yaw = np.concatenate([[0.0], np.cumsum(0.5 * (rate[1:] + rate[:-1])) * dt])

    return OrientationTrajectory(0.0, dt, roll, pitch, yaw)
