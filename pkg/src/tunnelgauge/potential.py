"""
Units, barrier geometries and the tip / test-mass split of the barrier force.

Units throughout the package: energies in eV, lengths in Angstrom, and
hbar = 1, so that a wavevector k in 1/A is also a momentum in hbar/A.
The only physical constant needed is

    R_C = hbar^2 / (2 m_e) = 3.8099821 eV A^2

so the kinetic energy of a plane wave is R_C * k**2.

The potential is piecewise constant.  Its derivative is a train of delta
functions, one per step, and the force on the electrodes is split by a
partition index: steps before it push on the tip, the rest on the test mass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Union

from .errors import InvalidSpec

R_C = 3.8099821  # eV A^2
DEGENERATE_TOL = 1e-12  # eV


def wavevector(E: float, V: float) -> complex:
    """Local wavevector sqrt((E - V)/R_C) on the branch with Im(k) >= 0."""
    d = E - V
    if abs(d) <= DEGENERATE_TOL:
        return 0j
    if d > 0:
        return complex(math.sqrt(d / R_C), 0.0)
    return complex(0.0, math.sqrt(-d / R_C))


@dataclass(frozen=True)
class Region:
    x_left: float
    x_right: float
    V: float

    @property
    def width(self) -> float:
        return self.x_right - self.x_left


@dataclass(frozen=True)
class PotentialProfile:
    """Ordered regions; the first and last are semi-infinite leads."""

    regions: tuple[Region, ...]
    partition_index: int = 1
    steps: tuple[tuple[float, float], ...] = field(init=False, repr=False)

    def __post_init__(self):
        regs = tuple(self.regions)
        object.__setattr__(self, "regions", regs)
        if len(regs) < 2:
            raise InvalidSpec("a profile needs at least two regions (one step)")
        if not math.isinf(regs[0].x_left) or not math.isinf(regs[-1].x_right):
            raise InvalidSpec("first and last regions must be semi-infinite leads")
        if regs[0].V != 0.0:
            raise InvalidSpec("the left lead is the energy reference and must have V = 0")
        for left, right in zip(regs, regs[1:]):
            if left.x_right != right.x_left:
                raise InvalidSpec("regions must be contiguous")
        for r in regs:
            if not r.x_left < r.x_right:
                raise InvalidSpec(f"empty or inverted region {r}")
        steps = tuple((l.x_right, r.V - l.V) for l, r in zip(regs, regs[1:]))
        object.__setattr__(self, "steps", steps)
        if not 0 <= self.partition_index <= len(steps):
            raise InvalidSpec(
                f"partition_index {self.partition_index} outside [0, {len(steps)}]"
            )

    @property
    def step_positions(self) -> tuple[float, ...]:
        return tuple(x for x, _ in self.steps)

    def potentials(self) -> tuple[float, ...]:
        return tuple(r.V for r in self.regions)

    def region_index(self, x: float) -> int:
        """Index of the region containing x; a step point belongs to its right region."""
        for i, r in enumerate(self.regions[:-1]):
            if x < r.x_right:
                return i
        return len(self.regions) - 1


def profile_from_potentials(
    widths: list[float], potentials: list[float], V_right: float,
    partition_index: int = 1, x0: float = 0.0,
) -> PotentialProfile:
    """Lead at 0 | interior regions of the given widths | lead at V_right."""
    regions = [Region(-math.inf, x0, 0.0)]
    x = x0
    for w, V in zip(widths, potentials):
        regions.append(Region(x, x + w, float(V)))
        x += w
    regions.append(Region(x, math.inf, float(V_right)))
    return PotentialProfile(tuple(regions), partition_index)


# -- barrier specifications -------------------------------------------------


@dataclass(frozen=True)
class Rectangular:
    V0: float
    l: float
    partition_index: int | None = None
    kind = "rectangular"


@dataclass(frozen=True)
class AsymRectangular:
    """Rectangular barrier with the test-mass lead lowered by e*phi."""

    V0: float
    l: float
    phi: float
    partition_index: int | None = None
    kind = "asym_rectangular"


@dataclass(frozen=True)
class LinearSlowing:
    """Trapezoid from V0 down to V0 - e*phi, drawn as an n_steps staircase."""

    V0: float
    l: float
    phi: float
    n_steps: int = 128
    partition_index: int | None = None
    kind = "linear_slowing"


@dataclass(frozen=True)
class DoubleBarrier:
    """lead | V0 (l1) | V1 (l2) | V0 (l3) | lead."""

    V0: float
    V1: float
    l1: float
    l2: float
    l3: float
    partition_index: int | None = None
    kind = "double_barrier"


BarrierSpec = Union[Rectangular, AsymRectangular, LinearSlowing, DoubleBarrier]

_KINDS = {cls.kind: cls for cls in (Rectangular, AsymRectangular, LinearSlowing, DoubleBarrier)}

# name of the parameter that plays the role of the vacuum-gap width
GAP_WIDTH = {"rectangular": "l", "asym_rectangular": "l", "linear_slowing": "l",
             "double_barrier": "l1"}


def _check_positive(**widths):
    for name, w in widths.items():
        if not (isinstance(w, (int, float)) and math.isfinite(w) and w > 0):
            raise InvalidSpec(f"width {name} must be positive, got {w!r}")


def build_profile(spec: BarrierSpec) -> PotentialProfile:
    """Piecewise-constant profile for a barrier spec, with the default partition."""
    p = spec.partition_index
    if isinstance(spec, Rectangular):
        _check_positive(l=spec.l)
        return profile_from_potentials([spec.l], [spec.V0], 0.0, 1 if p is None else p)
    if isinstance(spec, AsymRectangular):
        _check_positive(l=spec.l)
        return profile_from_potentials([spec.l], [spec.V0], -spec.phi, 1 if p is None else p)
    if isinstance(spec, LinearSlowing):
        _check_positive(l=spec.l)
        n = spec.n_steps
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise InvalidSpec(f"n_steps must be an integer >= 1, got {n!r}")
        w = spec.l / n
        pots = [spec.V0 - spec.phi * (j + 0.5) / n for j in range(n)]
        widths = [w] * n
        # keep the right edge exactly at l
        widths[-1] = spec.l - w * (n - 1)
        return profile_from_potentials(widths, pots, -spec.phi, 1 if p is None else p)
    if isinstance(spec, DoubleBarrier):
        _check_positive(l1=spec.l1, l2=spec.l2, l3=spec.l3)
        return profile_from_potentials(
            [spec.l1, spec.l2, spec.l3], [spec.V0, spec.V1, spec.V0], 0.0,
            1 if p is None else p,
        )
    raise InvalidSpec(f"unknown barrier spec {spec!r}")


def mass_steps(profile: PotentialProfile) -> list[tuple[float, float]]:
    """Steps whose force acts on the test mass."""
    return list(profile.steps[profile.partition_index:])


def tip_steps(profile: PotentialProfile) -> list[tuple[float, float]]:
    return list(profile.steps[:profile.partition_index])


def with_width(spec: BarrierSpec, value: float, name: str | None = None) -> BarrierSpec:
    """Copy of spec with its gap width (or the named width) replaced."""
    return replace(spec, **{name or GAP_WIDTH[spec.kind]: value})


def barrier_from_json(data: dict) -> BarrierSpec:
    try:
        kind = data["kind"]
    except (KeyError, TypeError):
        raise InvalidSpec("barrier JSON needs a 'kind' field") from None
    cls = _KINDS.get(kind)
    if cls is None:
        raise InvalidSpec(f"unknown barrier kind {kind!r}; expected one of {sorted(_KINDS)}")
    params = {k: v for k, v in data.items() if k != "kind"}
    try:
        spec = cls(**params)
    except TypeError as exc:
        raise InvalidSpec(f"bad parameters for {kind}: {exc}") from None
    for name, value in params.items():
        if name in ("partition_index", "n_steps"):
            if value is not None and (not isinstance(value, int) or isinstance(value, bool)):
                raise InvalidSpec(f"{name} must be an integer")
        elif not isinstance(value, (int, float)) or isinstance(value, bool):
            raise InvalidSpec(f"{name} must be a number")
    build_profile(spec)  # validates widths and partition
    return spec


def barrier_to_json(spec: BarrierSpec) -> dict:
    out = {"kind": spec.kind}
    for name in spec.__dataclass_fields__:
        value = getattr(spec, name)
        if name == "partition_index" and value is None:
            continue
        out[name] = value
    return out
