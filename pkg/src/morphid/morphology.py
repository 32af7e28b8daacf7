"""Binary leg-link morphologies and the structural description of the robot.

A robot is a body plus N legs; leg i carries n_i serial links.  Which links
are physically present is encoded as a flat binary vector with one bit per
link, grouped leg by leg.  A vector is *feasible* when, inside each leg, no
present link hangs below a missing one (a prefix of ones followed by zeros),
because a link cannot exist once its parent is gone.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError, StructureError

DEFAULT_MAX_RAW_STATES = 2 ** 20


@dataclass(frozen=True)
class RobotSpec:
    """Structural description: leg layout, link geometry, masses.

    Leg indices are 1-based everywhere in reports and configs.  Mount angles
    are azimuths in radians measured from the forward (+Y, walking) axis,
    positive toward the robot's right (+X).
    """

    leg_count: int
    links_per_leg: tuple[int, ...]
    link_lengths: tuple[tuple[float, ...], ...]
    link_masses: tuple[tuple[float, ...], ...]
    body_mass: float
    mount_angles: tuple[float, ...]
    mount_radius: float

    def __post_init__(self) -> None:
        if self.leg_count < 1:
            raise ValueError("leg_count must be >= 1")
        if len(self.links_per_leg) != self.leg_count:
            raise ValueError("links_per_leg length must equal leg_count")
        if any(n < 1 for n in self.links_per_leg):
            raise ValueError("every leg needs at least one link")
        if len(self.mount_angles) != self.leg_count:
            raise ValueError("mount_angles length must equal leg_count")
        for name, table in (("link_lengths", self.link_lengths),
                            ("link_masses", self.link_masses)):
            if len(table) != self.leg_count:
                raise ValueError(f"{name} needs one row per leg")
            for i, row in enumerate(table):
                if len(row) != self.links_per_leg[i]:
                    raise ValueError(f"{name}[{i}] must have {self.links_per_leg[i]} entries")
                if any(v <= 0 for v in row):
                    raise ValueError(f"{name} entries must be strictly positive")
        if self.body_mass <= 0 or self.mount_radius <= 0:
            raise ValueError("body_mass and mount_radius must be strictly positive")

    @property
    def total_links(self) -> int:
        return sum(self.links_per_leg)

    def leg_slices(self) -> list[slice]:
        """Slice of the flat bit vector owned by each leg, in leg order."""
        out, start = [], 0
        for n in self.links_per_leg:
            out.append(slice(start, start + n))
            start += n
        return out

    @property
    def feasible_count(self) -> int:
        return math.prod(n + 1 for n in self.links_per_leg)


def default_hexapod() -> RobotSpec:
    """Six 3-link legs mounted symmetrically at +-45, +-90, +-135 degrees.

    Odd legs (1, 3, 5) sit on the right side, even legs on the left, so the
    alternating-tripod groups {1, 4, 5} and {2, 3, 6} each form a stable
    triangle.  Lengths and masses are nominal desk-robot values.
    """
    angles_deg = (45.0, -45.0, 90.0, -90.0, 135.0, -135.0)
    return RobotSpec(
        leg_count=6,
        links_per_leg=(3,) * 6,
        link_lengths=((0.045, 0.075, 0.12),) * 6,
        link_masses=((0.03, 0.05, 0.06),) * 6,
        body_mass=1.2,
        mount_angles=tuple(math.radians(a) for a in angles_deg),
        mount_radius=0.125,
    )


@dataclass(frozen=True)
class MorphologyVector:
    """Flat tuple of link existence bits, one per link, grouped per leg."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("morphology bits must be 0 or 1")

    def __len__(self) -> int:
        return len(self.bits)

    def segments(self, spec: RobotSpec) -> list[tuple[int, ...]]:
        _check_length(self, spec)
        return [self.bits[s] for s in spec.leg_slices()]


def _check_length(m: MorphologyVector, spec: RobotSpec) -> None:
    if len(m.bits) != spec.total_links:
        raise StructureError(
            f"morphology has {len(m.bits)} bits, robot has {spec.total_links} links"
        )


def apply_link_logic(m: MorphologyVector, spec: RobotSpec) -> MorphologyVector:
    """Repair a candidate so no link survives below a missing one.

    Within each leg, every bit after the first zero is forced to zero; bits
    before it are untouched.  Idempotent, and never flips a 0 to 1.
    """
    _check_length(m, spec)
    out = list(m.bits)
    for s in spec.leg_slices():
        alive = True
        for k in range(s.start, s.stop):
            if not alive:
                out[k] = 0
            elif out[k] == 0:
                alive = False
    return MorphologyVector(tuple(out))


def is_feasible(m: MorphologyVector, spec: RobotSpec) -> bool:
    """True when every leg is a prefix of ones (a repair fixed point)."""
    _check_length(m, spec)
    for seg in m.segments(spec):
        seen_zero = False
        for b in seg:
            if seen_zero and b:
                return False
            if not b:
                seen_zero = True
    return True


def enumerate_feasible(
    spec: RobotSpec, max_raw_states: int = DEFAULT_MAX_RAW_STATES
) -> list[MorphologyVector]:
    """All feasible morphologies, in lexicographic bit order.

    There are prod(n_i + 1) of them: each leg independently keeps a prefix
    of 0..n_i links.  The cap is expressed in raw binary states (2**N_T)
    to bound what callers may brute-force against this listing.
    """
    n_t = spec.total_links
    if 2 ** n_t > max_raw_states:
        raise ResourceLimitError(
            f"2**{n_t} raw states exceed the cap of {max_raw_states}"
        )
    per_leg: list[list[tuple[int, ...]]] = []
    for n in spec.links_per_leg:
        per_leg.append([tuple([1] * k + [0] * (n - k)) for k in range(n + 1)])
    out = []
    for combo in itertools.product(*per_leg):
        bits: tuple[int, ...] = tuple(itertools.chain.from_iterable(combo))
        out.append(MorphologyVector(bits))
    return out


def random_feasible(spec: RobotSpec, count: int, rng_seed: int) -> list[MorphologyVector]:
    """Draw `count` distinct feasible morphologies, deterministically per seed.

    Each draw is a uniform random bit vector repaired by `apply_link_logic`;
    collisions with earlier draws are redrawn.  Draws are generated in fixed
    batches so the output sequence depends only on the seed.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    if count > spec.feasible_count:
        raise ValueError(
            f"requested {count} distinct morphologies, only {spec.feasible_count} exist"
        )
    rng = np.random.default_rng(rng_seed)
    slices = spec.leg_slices()
    seen: dict[tuple[int, ...], None] = {}
    batch = 1024
    while len(seen) < count:
        raw = rng.integers(0, 2, size=(batch, spec.total_links), dtype=np.int64)
        for s in slices:
            raw[:, s] = np.cumprod(raw[:, s], axis=1)
        for row in raw:
            key = tuple(int(b) for b in row)
            if key not in seen:
                seen[key] = None
                if len(seen) == count:
                    break
    return [MorphologyVector(bits) for bits in seen]


def leg_link_counts(m: MorphologyVector, spec: RobotSpec) -> tuple[int, ...]:
    """Present-link count per leg, the damage class used to judge a match."""
    return tuple(sum(seg) for seg in m.segments(spec))


def damaged_legs(m: MorphologyVector, spec: RobotSpec) -> tuple[int, ...]:
    """1-based indices of legs missing at least one link."""
    counts = leg_link_counts(m, spec)
    return tuple(i + 1 for i, (c, n) in enumerate(zip(counts, spec.links_per_leg)) if c < n)


def from_link_counts(counts: tuple[int, ...] | list[int], spec: RobotSpec) -> MorphologyVector:
    """Build the feasible vector whose per-leg present-link counts are given."""
    if len(counts) != spec.leg_count:
        raise StructureError("need one link count per leg")
    bits: list[int] = []
    for c, n in zip(counts, spec.links_per_leg):
        if not 0 <= c <= n:
            raise ValueError(f"link count {c} outside 0..{n}")
        bits.extend([1] * c + [0] * (n - c))
    return MorphologyVector(tuple(bits))


def format_morphology(m: MorphologyVector, spec: RobotSpec) -> str:
    """Render as bracketed per-leg groups, e.g. ``[111][110][000]``."""
    return "".join("[" + "".join(str(b) for b in seg) + "]" for seg in m.segments(spec))


def parse_morphology(text: str, spec: RobotSpec) -> MorphologyVector:
    """Parse the bracketed literal form produced by `format_morphology`."""
    stripped = text.strip()
    if not stripped:
        raise ValueError("empty morphology literal")
    groups: list[str] = []
    rest = stripped
    while rest:
        if not rest.startswith("["):
            raise ValueError(f"expected '[' at {rest[:8]!r}")
        end = rest.find("]")
        if end < 0:
            raise ValueError("unterminated '[' in morphology literal")
        groups.append(rest[1:end])
        rest = rest[end + 1:]
    if len(groups) != spec.leg_count:
        raise StructureError(f"expected {spec.leg_count} leg groups, found {len(groups)}")
    bits: list[int] = []
    for i, grp in enumerate(groups):
        if len(grp) != spec.links_per_leg[i]:
            raise StructureError(
                f"leg {i + 1} group has {len(grp)} bits, expected {spec.links_per_leg[i]}"
            )
        for ch in grp:
            if ch not in "01":
                raise ValueError(f"bad bit {ch!r} in morphology literal")
            bits.append(int(ch))
    return MorphologyVector(tuple(bits))
