"""Physical constants and superconductor material presets.

Constants follow the 2019 SI exact definitions; derived quantities
(resistance quantum, Lorenz number, BCS gap) are computed from them at
import time so the algebraic identities hold to full floating precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants used throughout the package (SI units)."""

    k_B: float = 1.380649e-23          # Boltzmann constant, J/K (exact)
    e: float = 1.602176634e-19         # elementary charge, C (exact)
    h: float = 6.62607015e-34          # Planck constant, J s (exact)
    hbar: float = field(init=False)    # reduced Planck constant, J s
    R_K: float = field(init=False)     # resistance quantum h/e^2, Ohm
    L_0: float = field(init=False)     # Lorenz number pi^2 k_B^2/(3 e^2), W Ohm/K^2

    def __post_init__(self) -> None:
        object.__setattr__(self, "hbar", self.h / (2.0 * math.pi))
        object.__setattr__(self, "R_K", self.h / self.e**2)
        object.__setattr__(self, "L_0", math.pi**2 * self.k_B**2 / (3.0 * self.e**2))


CONSTANTS = PhysicalConstants()

#: BCS weak-coupling ratio Delta(0) = 1.764 k_B T_c.
BCS_GAP_RATIO = 1.764


def bcs_gap(T_c: float) -> float:
    """Zero-temperature BCS energy gap (J) for a critical temperature (K)."""
    if T_c <= 0.0:
        raise ValueError(f"critical temperature must be positive, got {T_c}")
    return BCS_GAP_RATIO * CONSTANTS.k_B * T_c


@dataclass(frozen=True)
class SuperconductorMaterial:
    """A superconductor described by its critical temperature and gap.

    Immutable; safe to share between threads.
    """

    name: str
    T_c: float      # critical temperature, K
    Delta: float    # zero-temperature energy gap, J

    def __post_init__(self) -> None:
        if self.T_c <= 0.0:
            raise ValueError(f"T_c must be positive, got {self.T_c}")
        if self.Delta <= 0.0:
            raise ValueError(f"Delta must be positive, got {self.Delta}")

    @classmethod
    def from_critical_temperature(cls, name: str, T_c: float) -> "SuperconductorMaterial":
        """Construct with the BCS weak-coupling gap Delta = 1.764 k_B T_c."""
        return cls(name=name, T_c=T_c, Delta=bcs_gap(T_c))


# Literature thin-film critical temperatures; overridable via the config file.
_PRESET_TC = {
    "Al": 1.196,
    "V": 5.40,
    "Ti": 0.39,
}

MATERIALS = {
    name: SuperconductorMaterial.from_critical_temperature(name, tc)
    for name, tc in _PRESET_TC.items()
}


def builtin_material(name: str) -> SuperconductorMaterial:
    """Look up a preset superconductor (Al, V or Ti) by name."""
    try:
        return MATERIALS[name]
    except KeyError:
        available = ", ".join(sorted(MATERIALS))
        raise KeyError(
            f"unknown superconductor preset {name!r}; available presets: {available}"
        ) from None
