"""Mean free path estimates: is the test mass small enough for ballistic electrons?"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants

from .errors import InvalidSpec, NonPositiveEnergy, NonPositiveInput

ELASTIC_REGIME = "elastic-model regime"
INELASTIC_REGIME = "inelastic-model regime"


@dataclass(frozen=True)
class MfpParams:
    A: float = 0.0  # eV^2 A
    B: float = 0.0  # eV^0.5 A
    mobility: float | None = None  # m^2/(V s)
    device_size: float | None = None  # A

    def __post_init__(self):
        for name in ("A", "B", "mobility", "device_size"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise InvalidSpec(f"{name} must be non-negative")


def mfp_empirical(E: float, A: float, B: float) -> float:
    """lambda(E) = A/E^2 + B/sqrt(E), in A.  A and B have no defaults on purpose."""
    if not E > 0:
        raise NonPositiveEnergy(f"E must be positive, got {E}")
    return A / (E * E) + B / math.sqrt(E)


def mfp_from_mobility(mobility: float, E: float) -> float:
    """lambda = mu sqrt(2 m_e E) / e, converted to A.

    mu in m^2/(V s), E in eV.  This is the drift time mu m_e / e times the
    speed sqrt(2E/m_e).
    """
    if not mobility > 0:
        raise NonPositiveInput(f"mobility must be positive, got {mobility}")
    if not E > 0:
        raise NonPositiveInput(f"E must be positive, got {E}")
    p = math.sqrt(2.0 * constants.m_e * E * constants.e)
    return mobility * p / constants.e / constants.angstrom


def ballistic_ratio(mfp: float, device_size: float) -> tuple[float, str]:
    """(mfp / device_size, regime label); a ratio of exactly 1 counts as ballistic."""
    if not device_size > 0:
        raise NonPositiveInput(f"device_size must be positive, got {device_size}")
    ratio = mfp / device_size
    return ratio, ELASTIC_REGIME if ratio >= 1.0 else INELASTIC_REGIME
