"""Spectral tools: radix-2 transforms, power spectra, the peak-keeping
low-pass filter, uniform resampling, and the measurement-corruption harness.

The filter makes recorded and simulated orientation signals comparable by
removing everything a real recording chain disturbs: high-frequency noise
(cutoff), drift and offsets (DC removal plus first-sample alignment), and
sampling artifacts (callers resample onto a power-of-two grid first).
Roll and pitch keep only dominant spectral peaks because legged walking is
oscillatory in those channels; yaw may drift monotonically under asymmetric
damage, so it keeps every sufficiently strong bin instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import SpectrumIntegrityError
from .surrogate import OrientationTrajectory

FilterMode = Literal["roll_pitch", "yaw"]


@dataclass(frozen=True)
class FilterConfig:
    f_cutoff: float = 10.0     # Hz
    p_threshold: float = 0.1   # amplitude, radians
    mode: FilterMode = "roll_pitch"

    def __post_init__(self) -> None:
        if self.f_cutoff <= 0:
            raise ValueError("f_cutoff must be positive")
        if self.p_threshold < 0:
            raise ValueError("p_threshold must be nonnegative")
        if self.mode not in ("roll_pitch", "yaw"):
            raise ValueError("mode must be 'roll_pitch' or 'yaw'")


@dataclass(frozen=True)
class CorruptionConfig:
    """Measurement-chain defects applied to a clean trajectory.

    Gaussian noise per channel, linear drift, a constant recording delay on
    all timestamps, and per-step sample intervals drawn uniformly from the
    band [1/rate_high, 1/rate_low] to emulate a wandering sensor clock.
    """

    noise_sigma: float = 0.0   # radians
    drift_rate: float = 0.0    # radians / second
    delay: float = 0.0         # seconds
    rate_low: float = 950.0    # Hz
    rate_high: float = 1000.0  # Hz
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if not 0 < self.rate_low <= self.rate_high:
            raise ValueError("need 0 < rate_low <= rate_high")
        if self.delay < 0:
            raise ValueError("delay must be nonnegative")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")


@dataclass
class TimedRecord:
    """Orientation samples on an arbitrary strictly increasing time base."""

    times: np.ndarray
    roll: np.ndarray
    pitch: np.ndarray
    yaw: np.ndarray

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float)
        self.roll = np.asarray(self.roll, dtype=float)
        self.pitch = np.asarray(self.pitch, dtype=float)
        self.yaw = np.asarray(self.yaw, dtype=float)
        n = len(self.times)
        if any(len(c) != n for c in (self.roll, self.pitch, self.yaw)):
            raise ValueError("channels must match the timestamp count")
        if n >= 2 and not (np.diff(self.times) > 0).all():
            raise ValueError("timestamps must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    def channels(self) -> np.ndarray:
        return np.stack([self.roll, self.pitch, self.yaw])


@dataclass
class Spectrum:
    """Complex transform bins; bin k (0-based) sits at k * sample_rate / n."""

    bins: np.ndarray
    sample_rate: float

    def __post_init__(self) -> None:
        self.bins = np.asarray(self.bins, dtype=complex)

    @property
    def n(self) -> int:
        return len(self.bins)

    def frequencies(self) -> np.ndarray:
        return np.arange(self.n) * (self.sample_rate / self.n)


def _is_pow2(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


_PLANS: dict[int, tuple[np.ndarray, list[np.ndarray]]] = {}


def _plan(n: int) -> tuple[np.ndarray, list[np.ndarray]]:
    """Bit-reversal permutation and per-stage twiddles for length n."""
    cached = _PLANS.get(n)
    if cached is not None:
        return cached
    levels = n.bit_length() - 1
    rev = np.zeros(n, dtype=np.intp)
    for bit in range(levels):
        rev |= ((np.arange(n) >> bit) & 1) << (levels - 1 - bit)
    twiddles = []
    size = 2
    while size <= n:
        half = size // 2
        twiddles.append(np.exp(-2j * np.pi * np.arange(half) / size))
        size *= 2
    _PLANS[n] = (rev, twiddles)
    return rev, twiddles


def _radix2(values: np.ndarray, inverse: bool) -> np.ndarray:
    """Iterative decimation-in-time transform over the last axis."""
    n = values.shape[-1]
    rev, twiddles = _plan(n)
    work = np.asarray(values, dtype=complex)[..., rev]
    lead = work.shape[:-1]
    size = 2
    for tw in twiddles:
        half = size // 2
        tw = np.conj(tw) if inverse else tw
        work = work.reshape(*lead, n // size, size)
        even = work[..., :half]
        odd = work[..., half:] * tw
        work = np.concatenate([even + odd, even - odd], axis=-1).reshape(*lead, n)
        size *= 2
    return work / n if inverse else work


def dft_forward(x: np.ndarray, sample_rate: float) -> Spectrum:
    """Unnormalized forward transform of a real sequence.

    The length must be a power of two; resample nonconforming data with
    `resample_uniform` first.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("expected a 1-D real sequence")
    if not _is_pow2(len(x)):
        raise ValueError(
            f"length {len(x)} is not a power of two; use resample_uniform first"
        )
    if sample_rate <= 0:
        raise ValueError("sample_rate must be positive")
    return Spectrum(_radix2(x, inverse=False), sample_rate)


def dft_inverse(s: Spectrum) -> np.ndarray:
    """Inverse transform back to a real sequence.

    Requires a conjugate-symmetric spectrum (the fingerprint of a real
    signal); asymmetry beyond 1e-9 relative indicates a filtering bug and
    raises SpectrumIntegrityError.
    """
    bins = s.bins
    n = s.n
    if not _is_pow2(n):
        raise ValueError(f"length {n} is not a power of two")
    mirrored = np.conj(bins[(-np.arange(n)) % n])
    scale = np.abs(bins).max()
    if np.abs(bins - mirrored).max() > 1e-9 * max(scale, 1e-300):
        raise SpectrumIntegrityError("spectrum is not conjugate-symmetric")
    out = _radix2(bins, inverse=True)
    real = out.real
    if np.abs(out.imag).max() > 1e-9 * (1.0 + np.abs(real).max()):
        raise SpectrumIntegrityError("inverse transform left a complex residue")
    return real


def power_spectrum(s: Spectrum) -> np.ndarray:
    """Single-sided amplitude spectrum of a real signal, in signal units.

    A pure sinusoid of amplitude A occupying an exact bin reads A there; the
    DC and Nyquist bins are not doubled.
    """
    n = s.n
    half = n // 2
    ps = np.abs(s.bins[: half + 1]) / n
    ps[1:half] *= 2.0
    return ps


def _peak_bins(ps: np.ndarray) -> np.ndarray:
    """Strict local maxima of the single-sided spectrum.

    Boundary bins compare one-sided.  A flat plateau that dominates both
    flanks counts once, attributed to its lowest-frequency bin.
    """
    m = len(ps)
    change = np.flatnonzero(np.diff(ps) != 0.0)
    starts = np.concatenate([[0], change + 1])          # first bin of each run
    run_vals = ps[starts]
    higher_left = np.concatenate([[True], run_vals[1:] > run_vals[:-1]])
    higher_right = np.concatenate([run_vals[:-1] > run_vals[1:], [True]])
    keep = np.zeros(m, dtype=bool)
    keep[starts[higher_left & higher_right]] = True
    return keep


def fft_filter(channel: np.ndarray, sample_rate: float, cfg: FilterConfig) -> np.ndarray:
    """Clean one orientation channel for comparison against another source.

    Zeroes every bin above the cutoff and the DC bin, gates the remainder by
    amplitude (all strong bins in yaw mode, only strict spectral peaks in
    roll/pitch mode), reconstructs, and shifts the result so its first
    sample is exactly zero, giving both compared signals a common starting
    condition.  Idempotent per mode.
    """
    spectrum = dft_forward(channel, sample_rate)
    n = spectrum.n
    half = n // 2
    ps = power_spectrum(spectrum)
    freqs = np.arange(half + 1) * (sample_rate / n)

    keep = ps > cfg.p_threshold
    if cfg.mode == "roll_pitch":
        keep &= _peak_bins(ps)
    keep &= freqs <= cfg.f_cutoff
    keep[0] = False

    full = np.zeros(n, dtype=bool)
    full[: half + 1] = keep
    full[half + 1:] = keep[1:half][::-1]  # mirror partners live or die together
    bins = np.where(full, spectrum.bins, 0.0)
    out = dft_inverse(Spectrum(bins, sample_rate))
    return out - out[0]


def resample_uniform(
    times: np.ndarray,
    values: np.ndarray,
    t_start: float,
    duration: float,
    samples: int,
) -> np.ndarray:
    """Linear interpolation onto samples points t_start + k * duration/samples.

    The grid is endpoint-exclusive, so the effective rate is samples/duration.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(times) != len(values) or len(times) < 2:
        raise ValueError("times and values must share a length >= 2")
    if not (np.diff(times) > 0).all():
        raise ValueError("times must be strictly increasing")
    if not _is_pow2(samples):
        raise ValueError("samples must be a power of two")
    if duration <= 0:
        raise ValueError("duration must be positive")
    eps = 1e-9 * max(1.0, abs(times[-1]))
    if t_start < times[0] - eps or t_start + duration > times[-1] + eps:
        raise ValueError(
            f"window [{t_start}, {t_start + duration}] outside the recorded range "
            f"[{times[0]}, {times[-1]}]"
        )
    grid = t_start + (duration / samples) * np.arange(samples)
    return np.interp(grid, times, values)


def corrupt_trajectory(traj: OrientationTrajectory, cfg: CorruptionConfig) -> TimedRecord:
    """Re-record a clean trajectory through a defective measurement chain.

    Internal sample instants start at the trajectory origin and advance by
    jittered intervals; values are interpolated there, perturbed by noise
    and drift, and stamped `delay` seconds late.  Deterministic per seed
    (intervals are drawn first, then the noise block, in that order).
    """
    rng = np.random.default_rng(cfg.rng_seed)
    t0 = traj.t0
    t_end = traj.t0 + traj.dt * (len(traj) - 1)
    span = t_end - t0
    lo, hi = 1.0 / cfg.rate_high, 1.0 / cfg.rate_low
    count = int(np.ceil(span / lo)) + 1
    steps = rng.uniform(lo, hi, size=count)
    instants = t0 + np.concatenate([[0.0], np.cumsum(steps)])
    instants = instants[instants <= t_end + 1e-12]
    noise = rng.normal(0.0, cfg.noise_sigma, size=(3, len(instants)))
    drift = cfg.drift_rate * (instants - t0)
    clean_t = traj.times
    out = []
    for row, extra in zip(traj.channels(), noise):
        out.append(np.interp(instants, clean_t, row) + extra + drift)
    return TimedRecord(instants + cfg.delay, out[0], out[1], out[2])
