"""Sliding-window damage detector.

A healthy walker keeps its roll and pitch nearly level, so sustained
fluctuation (window max minus window min) in either channel is the damage
signature.  The same windows, against a much smaller floor, date the moment
the robot started moving at all, which downstream identification uses to
align recordings with simulations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .surrogate import OrientationTrajectory


@dataclass(frozen=True)
class DetectorConfig:
    window: float = 0.5                                  # seconds
    step: float = 0.1                                    # seconds
    fluct_threshold: float = math.radians(5.0)           # radians
    persistence: float = 2.0                             # seconds
    motion_floor: float = math.radians(0.5)              # radians

    def __post_init__(self) -> None:
        if not 0 < self.step <= self.window:
            raise ValueError("need 0 < step <= window")
        if self.persistence < self.window:
            raise ValueError("persistence must be at least one window")
        if self.fluct_threshold <= 0 or self.motion_floor <= 0:
            raise ValueError("thresholds must be positive")


@dataclass
class DetectionReport:
    damaged: bool
    damage_time: float | None
    motion_start: float | None
    max_fluctuation: float
    fluctuation_series: list[tuple[float, float]] = field(default_factory=list)


def window_fluctuation(
    channel: np.ndarray, dt: float, cfg: DetectorConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Max-minus-min of the channel in each sliding window.

    Windows start every `cfg.step` seconds; returned times are window ends,
    relative to the first sample.
    """
    channel = np.asarray(channel, dtype=float)
    duration = dt * (len(channel) - 1)
    if duration < cfg.window:
        raise ValueError("trace shorter than one detector window")
    n_windows = int(math.floor((duration - cfg.window) / cfg.step + 1e-9)) + 1
    times = np.empty(n_windows)
    values = np.empty(n_windows)
    for k in range(n_windows):
        start = k * cfg.step
        i0 = int(math.ceil(start / dt - 1e-9))
        i1 = int(math.floor((start + cfg.window) / dt + 1e-9))
        seg = channel[i0:i1 + 1]
        times[k] = start + cfg.window
        values[k] = seg.max() - seg.min()
    return times, values


def detect(traj: OrientationTrajectory, cfg: DetectorConfig) -> DetectionReport:
    """Flag damage and date it, and estimate when locomotion began.

    Damage requires the roll/pitch fluctuation to exceed the threshold in
    every window over a full persistence span; the span's start (a window
    end time) is reported.  Motion start is the first window end where any
    channel's fluctuation clears the motion floor.
    """
    duration = traj.dt * (len(traj) - 1)
    if duration < cfg.window + cfg.persistence:
        raise ValueError("trace must cover at least window + persistence")

    times, roll_f = window_fluctuation(traj.roll, traj.dt, cfg)
    _, pitch_f = window_fluctuation(traj.pitch, traj.dt, cfg)
    _, yaw_f = window_fluctuation(traj.yaw, traj.dt, cfg)
    times = times + traj.t0

    damage_stat = np.maximum(roll_f, pitch_f)
    exceed = damage_stat > cfg.fluct_threshold

    motion_start: float | None = None
    any_stat = np.maximum(damage_stat, yaw_f)
    hits = np.flatnonzero(any_stat > cfg.motion_floor)
    if hits.size:
        motion_start = float(times[hits[0]])

    damage_time: float | None = None
    last = times[-1]
    for i in np.flatnonzero(exceed):
        span_end = times[i] + cfg.persistence
        if span_end > last + 1e-9:
            break  # remaining spans are never fully observed
        inside = (times >= times[i] - 1e-9) & (times <= span_end + 1e-9)
        if exceed[inside].all():
            damage_time = float(times[i])
            break

    return DetectionReport(
        damaged=damage_time is not None,
        damage_time=damage_time,
        motion_start=motion_start,
        max_fluctuation=float(damage_stat.max()),
        fluctuation_series=[(float(t), float(v)) for t, v in zip(times, damage_stat)],
    )
