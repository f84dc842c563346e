"""Power-law phonon heat-leak channels and their series composition.

Each channel carries heat as P(T_a, T_b) = (T_a^n - T_b^n)/(alpha n),
equivalent to a thermal resistance R(T) = alpha T^(-n+1).  Exponents by
transport regime: n = 4 for planar boundary resistance and 3D leads,
n = 2 for a ballistic 1D channel at the conductance-quantum limit, and
n around 3 for diffusive nanowire constrictions (fitted from the BTE
solver).  Positive flow means heat leaving the first (T_a) node.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .constants import CONSTANTS
from .errors import NumericError

#: Allowed provenance tags for a channel.
CHANNEL_LABELS = ("PTB", "lead", "constriction", "quantum", "fitted")

_CM2_PER_UM2 = 1e-8  # um^2 -> cm^2

#: Relative tolerance of the series flow bisection.
_SERIES_RTOL = 1e-12


@dataclass(frozen=True)
class PowerLawChannel:
    """One phonon transport channel with resistance prefactor alpha (K^n/W)."""

    alpha: float
    n: float
    label: str = "fitted"

    def __post_init__(self) -> None:
        if self.alpha <= 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not 2.0 <= self.n <= 5.0:
            raise ValueError(f"exponent n must lie in [2, 5], got {self.n}")
        if self.label not in CHANNEL_LABELS:
            raise ValueError(
                f"unknown channel label {self.label!r}; expected one of {CHANNEL_LABELS}"
            )

    def heat_flow(self, T_a: float, T_b: float) -> float:
        """Heat flow (W) from the T_a node to the T_b node; antisymmetric."""
        if T_a <= 0.0 or T_b <= 0.0:
            raise ValueError("temperatures must be positive")
        return (T_a**self.n - T_b**self.n) / (self.alpha * self.n)

    def thermal_resistance(self, T: float) -> float:
        """Small-signal thermal resistance alpha T^(-n+1) in K/W."""
        if T <= 0.0:
            raise ValueError(f"temperature must be positive, got {T}")
        return self.alpha * T ** (-self.n + 1.0)

    def conductance(self, T: float) -> float:
        """Small-signal thermal conductance T^(n-1)/alpha in W/K."""
        return 1.0 / self.thermal_resistance(T)


def channel_from_boundary_resistance(r: float, area: float) -> PowerLawChannel:
    """Planar boundary-resistance channel (n = 4) from r in K^4 cm^2/W over area in um^2.

    The coefficient convention is R(T) = r T^-3 / A, so the heat flow is
    (A/(4 r)) (T_a^4 - T_b^4).
    """
    if r <= 0.0:
        raise ValueError(f"boundary resistance must be positive, got {r}")
    if area <= 0.0:
        raise ValueError(f"area must be positive, got {area}")
    return PowerLawChannel(alpha=r / (area * _CM2_PER_UM2), n=4.0, label="PTB")


def channel_from_quantum_limit(N: int, transmission: float = 1.0) -> PowerLawChannel:
    """Ballistic channel (n = 2) carrying N thermal conductance quanta.

    G(T) = N * transmission * pi^2 k_B^2 T / (3 h); the quantum limit is the
    single-channel conductance divided by the transmission probability.
    """
    if N < 1:
        raise ValueError(f"channel count must be at least 1, got {N}")
    if not 0.0 < transmission <= 1.0:
        raise ValueError(f"transmission must lie in (0, 1], got {transmission}")
    g_q = math.pi**2 * CONSTANTS.k_B**2 / (3.0 * CONSTANTS.h)  # W/K^2
    return PowerLawChannel(alpha=1.0 / (N * transmission * g_q), n=2.0, label="quantum")


@dataclass(frozen=True)
class CompositeChannel:
    """Channels in series, listed from the T_a side to the T_b side.

    The first listed channel touches the first temperature argument of
    heat_flow; stage configs list the junction-side channel first.
    """

    channels: tuple[PowerLawChannel, ...]

    def __init__(self, channels: Sequence[PowerLawChannel]):
        if not channels:
            raise ValueError("composite channel needs at least one member")
        object.__setattr__(self, "channels", tuple(channels))

    def heat_flow(self, T_a: float, T_b: float) -> float:
        """Series heat flow (W) from T_a to T_b.

        The unique flow for which every interface temperature is
        consistent, found by bisection on the flow to 1e-12 relative
        tolerance.  For equal exponents this equals the closed form with
        alpha_total = sum(alpha_i).
        """
        if T_a <= 0.0 or T_b <= 0.0:
            raise ValueError("temperatures must be positive")
        if len(self.channels) == 1:
            return self.channels[0].heat_flow(T_a, T_b)
        if T_a == T_b:
            return 0.0
        if T_a > T_b:
            return _series_flow(self.channels, T_a, T_b)
        # Reversing the list keeps each channel attached to its endpoint.
        return -_series_flow(tuple(reversed(self.channels)), T_b, T_a)

    def interface_temperatures(self, T_a: float, T_b: float) -> list[float]:
        """Node temperatures [T_a, t_1, ..., T_b] at the solved series flow."""
        q = self.heat_flow(T_a, T_b)
        temps = [T_a]
        t = T_a
        for ch in self.channels:
            t = (t**ch.n - ch.alpha * ch.n * q) ** (1.0 / ch.n)
            temps.append(t)
        return temps


def _endpoint_gap(channels: tuple[PowerLawChannel, ...], T_hot: float,
                  T_cold: float, q: float) -> float:
    """Cold-endpoint mismatch after propagating flow q down the chain."""
    t = T_hot
    for ch in channels:
        drop = t**ch.n - ch.alpha * ch.n * q
        if drop <= 0.0:
            return -T_cold  # flow overdraws the chain; q is too large
        t = drop ** (1.0 / ch.n)
    return t - T_cold


def _series_flow(channels: tuple[PowerLawChannel, ...], T_hot: float,
                 T_cold: float) -> float:
    """Bisection on the flow for a hot-to-cold ordered chain (T_hot > T_cold)."""
    q_hi = min(ch.heat_flow(T_hot, T_cold) for ch in channels)
    lo, hi = 0.0, q_hi
    f_lo = _endpoint_gap(channels, T_hot, T_cold, lo)
    f_hi = _endpoint_gap(channels, T_hot, T_cold, hi)
    if f_lo < 0.0 or f_hi > 0.0:
        raise NumericError(
            f"series flow bracket failure: f(0)={f_lo:.3e}, f(q_max)={f_hi:.3e} "
            f"for endpoints ({T_hot}, {T_cold}) K"
        )
    while hi - lo > _SERIES_RTOL * hi:
        mid = 0.5 * (lo + hi)
        if _endpoint_gap(channels, T_hot, T_cold, mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
