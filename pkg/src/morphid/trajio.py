"""Trajectory CSV files.

Files carry degrees for readability; everything in memory is radians.  The
unit conversion happens here and nowhere else.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .errors import TrajectoryParseError
from .signals import TimedRecord
from .surrogate import OrientationTrajectory

CSV_HEADER = ["time_s", "roll_deg", "pitch_deg", "yaw_deg"]


def load_trajectory(path: str | Path) -> TimedRecord:
    """Read a timestamped orientation record; timestamps must increase."""
    path = Path(path)
    times: list[float] = []
    channels: list[list[float]] = [[], [], []]
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise TrajectoryParseError(f"{path}:1: empty file, expected header")
        if [h.strip() for h in header] != CSV_HEADER:
            raise TrajectoryParseError(
                f"{path}:1: expected header {','.join(CSV_HEADER)!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 4:
                raise TrajectoryParseError(f"{path}:{lineno}: expected 4 fields")
            try:
                t = float(row[0])
                vals = [math.radians(float(v)) for v in row[1:]]
            except ValueError as exc:
                raise TrajectoryParseError(f"{path}:{lineno}: {exc}") from None
            if times and t <= times[-1]:
                raise TrajectoryParseError(
                    f"{path}:{lineno}: non-monotone timestamp {t}"
                )
            times.append(t)
            for ch, v in zip(channels, vals):
                ch.append(v)
    return TimedRecord(
        np.array(times), np.array(channels[0]), np.array(channels[1]), np.array(channels[2])
    )


def save_trajectory(record: TimedRecord, path: str | Path) -> None:
    """Write a record with the exact canonical header, degrees, 12 digits."""
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for t, r, p, y in zip(record.times, record.roll, record.pitch, record.yaw):
                writer.writerow([
                    f"{t:.12g}",
                    f"{math.degrees(r):.12g}",
                    f"{math.degrees(p):.12g}",
                    f"{math.degrees(y):.12g}",
                ])
    except OSError as exc:
        raise OSError(f"cannot write trajectory to {path}: {exc}") from exc


def record_from_trajectory(traj: OrientationTrajectory) -> TimedRecord:
    """View a uniformly sampled trajectory as a timestamped record."""
    return TimedRecord(traj.times, traj.roll, traj.pitch, traj.yaw)
