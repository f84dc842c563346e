"""Electrical and thermionic physics of a single Sm-S tunnel junction.

Covers the closed-form cooling power at optimal bias, the full
quasiparticle tunneling integral used to validate it, the broadened
subgap density of states, and the transparency limit set by two-electron
(Andreev) tunneling.  All functions are pure and thread-safe.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate

from .constants import CONSTANTS, SuperconductorMaterial
from .errors import NumericError, ValidityWarning

#: Empirical prefactor of the optimal-bias cooling power.
COOLING_PREFACTOR = 0.59
#: Optimal bias sits 0.66 k_B T below the gap edge.
OPTIMAL_BIAS_OFFSET = 0.66
#: Smallest broadening used when evaluating the subgap density of states;
#: keeps the gamma = 0 case smooth for quadrature instead of branching.
GAMMA_FLOOR = 1e-15
#: Half-width of the tunneling integral window in units of Delta.  Fermi
#: factors suppress the tails as exp(-E/k_B T) and k_B T << Delta in scope.
INTEGRAL_WINDOW = 20.0

_NM2_PER_UM2 = 1e-6  # nm^2 -> um^2


@dataclass(frozen=True)
class JunctionParams:
    """Tunnel junction parameters.

    R_T_area is the characteristic resistance R_T*A in Ohm um^2, area the
    junction area in um^2, gamma_dynes the dimensionless subgap leakage,
    and A_ch the single Andreev channel area in nm^2 (None disables the
    Andreev contribution).
    """

    R_T_area: float
    area: float
    gamma_dynes: float
    A_ch: Optional[float] = None

    def __post_init__(self) -> None:
        if self.R_T_area <= 0.0:
            raise ValueError(f"R_T_area must be positive, got {self.R_T_area}")
        if self.area <= 0.0:
            raise ValueError(f"area must be positive, got {self.area}")
        if not 0.0 <= self.gamma_dynes < 1.0:
            raise ValueError(f"gamma_dynes must be in [0, 1), got {self.gamma_dynes}")
        if self.A_ch is not None and self.A_ch < 0.0:
            raise ValueError(f"A_ch must be non-negative, got {self.A_ch}")

    @property
    def R_T(self) -> float:
        """Junction normal-state resistance in Ohm."""
        return self.R_T_area / self.area


@dataclass(frozen=True)
class CoolingOperatingPoint:
    """Bias voltage and electrode temperatures of an operating junction."""

    V: float     # bias voltage, V
    T_N: float   # semiconductor electron temperature, K
    T_S: float   # superconductor quasiparticle temperature, K

    def __post_init__(self) -> None:
        if self.T_N <= 0.0 or self.T_S <= 0.0:
            raise ValueError("electrode temperatures must be positive")
        if self.V < 0.0:
            raise ValueError(f"bias voltage must be non-negative, got {self.V}")


def optimal_bias(Delta: float, T: float) -> float:
    """Optimal cooling bias V = (Delta - 0.66 k_B T)/e.

    Raises ValueError when 0.66 k_B T >= Delta, where the closed form
    leaves its validity range.
    """
    if Delta <= 0.0:
        raise ValueError(f"Delta must be positive, got {Delta}")
    if T < 0.0:
        raise ValueError(f"temperature must be non-negative, got {T}")
    offset = OPTIMAL_BIAS_OFFSET * CONSTANTS.k_B * T
    if offset >= Delta:
        raise ValueError(
            f"optimal bias undefined: 0.66 k_B T = {offset:.3e} J >= Delta = {Delta:.3e} J"
        )
    return (Delta - offset) / CONSTANTS.e


def andreev_gamma(R_T_area: float, A_ch: float) -> float:
    """Effective subgap leakage of two-electron tunneling, R_K A_ch / (4 R_T A).

    R_T_area in Ohm um^2, A_ch in nm^2.
    """
    if R_T_area <= 0.0:
        raise ValueError(f"R_T_area must be positive, got {R_T_area}")
    if A_ch < 0.0:
        raise ValueError(f"A_ch must be non-negative, got {A_ch}")
    return CONSTANTS.R_K * A_ch * _NM2_PER_UM2 / (4.0 * R_T_area)


def effective_gamma(j: JunctionParams) -> float:
    """Total subgap leakage: Dynes broadening plus the Andreev channel term."""
    gamma = j.gamma_dynes
    if j.A_ch is not None:
        gamma += andreev_gamma(j.R_T_area, j.A_ch)
    return gamma


def cooling_power_simplified(
    j: JunctionParams, m: SuperconductorMaterial, T_N: float
) -> float:
    """Closed-form cooling power at optimal bias, W.

    P = (Delta^2/(e^2 R_T)) * 0.59 * (k_B T_N / Delta)^(3/2)
        - V_opt^2 / (2 R_gap),

    with R_gap = R_T / gamma_total.  May be negative when subgap leakage
    dominates.  Emits a ValidityWarning above 0.5 T_c, where the closed
    form degrades; use cooling_power_full there instead.
    """
    if T_N <= 0.0:
        raise ValueError(f"T_N must be positive, got {T_N}")
    if T_N > 0.5 * m.T_c:
        warnings.warn(
            f"cooling_power_simplified evaluated at T_N = {T_N:.4g} K > "
            f"0.5 T_c = {0.5 * m.T_c:.4g} K; outside stated validity",
            ValidityWarning,
            stacklevel=2,
        )
    e = CONSTANTS.e
    R_T = j.R_T
    thermionic = (
        m.Delta**2 / (e**2 * R_T)
        * COOLING_PREFACTOR
        * (CONSTANTS.k_B * T_N / m.Delta) ** 1.5
    )
    gamma = effective_gamma(j)
    if gamma == 0.0:
        return thermionic
    V_opt = optimal_bias(m.Delta, T_N)
    return thermionic - 0.5 * V_opt**2 * gamma / R_T


def dynes_dos(E, Delta: float, gamma: float):
    """Broadened quasiparticle density of states, normalized to 1 far above the gap.

    n(E) = | Re[ (E/Delta + i gamma) / sqrt((E/Delta + i gamma)^2 - 1) ] |,
    symmetric under E -> -E.  gamma = 0 is evaluated with gamma clamped to
    1e-15 so the gap-edge singularity stays finite and smooth.

    Accepts scalars or arrays.
    """
    if Delta <= 0.0:
        raise ValueError(f"Delta must be positive, got {Delta}")
    if gamma < 0.0:
        raise ValueError(f"gamma must be non-negative, got {gamma}")
    g = max(gamma, GAMMA_FLOOR)
    u = np.asarray(E, dtype=float) / Delta + 1j * g
    n = np.abs(np.real(u / np.sqrt(u * u - 1.0)))
    if np.isscalar(E):
        return float(n)
    return n


def _fermi(E: np.ndarray, T: float) -> np.ndarray:
    """Fermi function, overflow-safe for |E| >> k_B T."""
    x = np.clip(E / (CONSTANTS.k_B * T), -500.0, 500.0)
    return 1.0 / (1.0 + np.exp(x))


def cooling_power_full(
    j: JunctionParams, m: SuperconductorMaterial, op: CoolingOperatingPoint
) -> float:
    """Full quasiparticle tunneling integral for the cooling power, W.

    P = (1/(e^2 R_T)) * Int dE n(E) (E - eV) [f(E - eV, T_N) - f(E, T_S)]

    evaluated by adaptive quadrature to 1e-6 relative tolerance over
    E in [-20 Delta, 20 Delta]; the truncated tails are exponentially
    suppressed by the Fermi factors.  Positive P means heat is removed
    from the semiconductor electrode.
    """
    e = CONSTANTS.e
    Delta = m.Delta
    gamma = effective_gamma(j)
    eV = e * op.V

    def integrand(E: float) -> float:
        occ = _fermi(np.asarray(E - eV), op.T_N) - _fermi(np.asarray(E), op.T_S)
        return dynes_dos(E, Delta, gamma) * (E - eV) * float(occ)

    lo, hi = -INTEGRAL_WINDOW * Delta, INTEGRAL_WINDOW * Delta
    breakpoints = sorted(
        {p for p in (-Delta, Delta, eV - Delta, eV + Delta, eV, 0.0) if lo < p < hi}
    )
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, _ = integrate.quad(
                integrand,
                lo,
                hi,
                points=breakpoints,
                limit=400,
                epsabs=1e-12 * Delta**2,  # negligible absolute floor for P ~ 0 points
                epsrel=1e-6,
            )
        except integrate.IntegrationWarning as exc:
            raise NumericError(
                f"tunneling integral did not converge: {exc}; "
                f"V={op.V:.4e} V, T_N={op.T_N:.4g} K, T_S={op.T_S:.4g} K, "
                f"Delta={Delta:.4e} J, gamma={gamma:.4e}"
            ) from exc
    return value / (e**2 * j.R_T)
