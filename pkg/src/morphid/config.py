"""Experiment configuration: one serializable document drives every run.

The JSON config file and the service wire format share these models.  Keys
carry their unit in the name (``_deg``, ``_s``, ``_hz``, ``_m``); the
conversion to the package's internal radians/seconds happens in the
``to_*`` methods.  CLI flags override file values, file values override the
defaults below.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field

from .detector import DetectorConfig
from .identifier import GaConfig
from .morphology import RobotSpec
from .signals import CorruptionConfig, FilterConfig
from .surrogate import GaitParams, SurrogateGains


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class RobotSection(_Strict):
    leg_count: int = 6
    links_per_leg: list[int] = Field(default_factory=lambda: [3] * 6)
    link_lengths_m: list[list[float]] = Field(
        default_factory=lambda: [[0.045, 0.075, 0.12]] * 6
    )
    link_masses_kg: list[list[float]] = Field(
        default_factory=lambda: [[0.03, 0.05, 0.06]] * 6
    )
    body_mass_kg: float = 1.2
    mount_angles_deg: list[float] = Field(
        default_factory=lambda: [45.0, -45.0, 90.0, -90.0, 135.0, -135.0]
    )
    mount_radius_m: float = 0.125

    def to_spec(self) -> RobotSpec:
        return RobotSpec(
            leg_count=self.leg_count,
            links_per_leg=tuple(self.links_per_leg),
            link_lengths=tuple(tuple(r) for r in self.link_lengths_m),
            link_masses=tuple(tuple(r) for r in self.link_masses_kg),
            body_mass=self.body_mass_kg,
            mount_angles=tuple(math.radians(a) for a in self.mount_angles_deg),
            mount_radius=self.mount_radius_m,
        )


class GaitSection(_Strict):
    period_s: float = 1.0
    step_height_m: float = 0.035
    stride_m: float = 0.08
    duty: float = 0.5
    group_a: list[int] = Field(default_factory=lambda: [1, 4, 5])
    group_b: list[int] = Field(default_factory=lambda: [2, 3, 6])

    def to_gait(self) -> GaitParams:
        return GaitParams(
            period=self.period_s,
            step_height=self.step_height_m,
            stride=self.stride_m,
            duty=self.duty,
            group_a=tuple(self.group_a),
            group_b=tuple(self.group_b),
        )


class SurrogateSection(_Strict):
    """Frozen calibration of the surrogate simulator (see surrogate module)."""

    corner_drop_gain: float = 0.8
    max_corner_drop_m: float = 0.30
    swing_drag_scale: float = 1.0
    swing_weight: float = 0.12
    yaw_rate_gain: float = 12.0
    transition_fraction: float = 0.08
    load_transfer: float = 0.9

    def to_gains(self) -> SurrogateGains:
        return SurrogateGains(
            corner_drop_gain=self.corner_drop_gain,
            max_corner_drop=self.max_corner_drop_m,
            swing_drag_scale=self.swing_drag_scale,
            swing_weight=self.swing_weight,
            yaw_rate_gain=self.yaw_rate_gain,
            transition_fraction=self.transition_fraction,
            load_transfer=self.load_transfer,
        )


class GaSection(_Strict):
    ps: int = 10
    gs: int = 20
    cr: float = 0.9
    mr: float = 0.33
    p_table: list[list[float]] | None = None
    sim_time_s: float = 5.0
    rng_seed: int = 0
    convergence_patience: int | None = None

    def to_ga(self) -> GaConfig:
        return GaConfig(
            pop_size=self.ps,
            generations=self.gs,
            cr=self.cr,
            mr=self.mr,
            p_table=tuple(tuple(r) for r in self.p_table) if self.p_table else None,
            sim_time=self.sim_time_s,
            rng_seed=self.rng_seed,
            convergence_patience=self.convergence_patience,
        )


class FilterSection(_Strict):
    fc_hz: float = 10.0
    pc: float = 0.1

    def to_filter(self) -> FilterConfig:
        return FilterConfig(f_cutoff=self.fc_hz, p_threshold=self.pc)


class DetectorSection(_Strict):
    window_s: float = 0.5
    step_s: float = 0.1
    fluct_threshold_deg: float = 5.0
    persistence_s: float = 2.0
    motion_floor_deg: float = 0.5

    def to_detector(self) -> DetectorConfig:
        return DetectorConfig(
            window=self.window_s,
            step=self.step_s,
            fluct_threshold=math.radians(self.fluct_threshold_deg),
            persistence=self.persistence_s,
            motion_floor=math.radians(self.motion_floor_deg),
        )


class CorruptionSection(_Strict):
    noise_sigma_deg: float = 1.0
    drift_rate_deg_s: float = 0.1
    delay_s: float = 0.3
    rate_low_hz: float = 950.0
    rate_high_hz: float = 1000.0
    rng_seed: int = 0

    def to_corruption(self) -> CorruptionConfig:
        return CorruptionConfig(
            noise_sigma=math.radians(self.noise_sigma_deg),
            drift_rate=math.radians(self.drift_rate_deg_s),
            delay=self.delay_s,
            rate_low=self.rate_low_hz,
            rate_high=self.rate_high_hz,
            rng_seed=self.rng_seed,
        )


class PathsSection(_Strict):
    input: str | None = None
    out_dir: str | None = None


class PipelineConfig(_Strict):
    """Everything one experiment needs, in one document."""

    robot: RobotSection = Field(default_factory=RobotSection)
    gait: GaitSection = Field(default_factory=GaitSection)
    surrogate: SurrogateSection = Field(default_factory=SurrogateSection)
    ga: GaSection = Field(default_factory=GaSection)
    filter: FilterSection = Field(default_factory=FilterSection)
    detector: DetectorSection = Field(default_factory=DetectorSection)
    corruption: CorruptionSection = Field(default_factory=CorruptionSection)
    paths: PathsSection = Field(default_factory=PathsSection)
    seed: int | None = None

    def with_seed(self, seed: int | None) -> "PipelineConfig":
        """Propagate a master seed into the stochastic sections."""
        if seed is None:
            return self
        update = self.model_copy(deep=True)
        update.seed = seed
        update.ga.rng_seed = seed
        update.corruption.rng_seed = seed
        return update

    def config_hash(self) -> str:
        doc = json.dumps(self.model_dump(mode="json"), sort_keys=True,
                         separators=(",", ":"))
        return hashlib.sha256(doc.encode()).hexdigest()[:12]


def load_config(path: str | Path | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    raw = json.loads(Path(path).read_text())
    return PipelineConfig.model_validate(raw)


def save_config(cfg: PipelineConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(cfg.model_dump(mode="json"), indent=2) + "\n")
