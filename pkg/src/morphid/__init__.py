"""Damage identification for multi-legged robots from body-orientation data."""

from .detector import DetectionReport, DetectorConfig, detect, window_fluctuation
from .errors import (
    MorphidError,
    PipelineError,
    ResourceLimitError,
    SimulationError,
    SpectrumIntegrityError,
    StructureError,
    TrajectoryParseError,
)
from .identifier import (
    Candidate,
    GaConfig,
    GaRun,
    OracleResult,
    crossover_step,
    evaluate_cost,
    exhaustive_oracle,
    filter_trajectory,
    init_population,
    mutation_step,
    run_identification,
)
from .morphology import (
    MorphologyVector,
    RobotSpec,
    apply_link_logic,
    damaged_legs,
    default_hexapod,
    enumerate_feasible,
    format_morphology,
    from_link_counts,
    is_feasible,
    leg_link_counts,
    parse_morphology,
    random_feasible,
)
from .signals import (
    CorruptionConfig,
    FilterConfig,
    Spectrum,
    TimedRecord,
    corrupt_trajectory,
    dft_forward,
    dft_inverse,
    fft_filter,
    power_spectrum,
    resample_uniform,
)
from .surrogate import (
    GaitParams,
    OrientationTrajectory,
    SurrogateGains,
    simulate_orientation,
    tripod_support_set,
)

__version__ = "0.1.0"
