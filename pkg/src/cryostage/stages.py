"""Single-stage heat balance and cascade chaining.

A stage's electron temperature solves P_cool(T_N) = P_ph(T_N, T_0) + load,
the balance between junction cooling power and the phonon leak from the
previous (hot) stage at T_0.  Stages are solved independently and chained
hot to cold; the heat a stage dumps upstream does not perturb the stage
above it.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .constants import SuperconductorMaterial
from .errors import NumericError, ValidityWarning
from .junction import JunctionParams, cooling_power_simplified, optimal_bias
from .phonons import CompositeChannel

#: Absolute bisection tolerance on the stage temperature, K.
T_TOLERANCE = 1e-5
#: Residual acceptance factor: |P_cool - P_ph - load| <= factor * scale.
RESIDUAL_FACTOR = 1e-4
#: Floor of the residual scale, W.
RESIDUAL_FLOOR = 1e-18
#: The solver bracket stops at this fraction of T_c.
BRACKET_CEILING = 0.95
#: Points in the sign-change scan across the bracket.
SCAN_POINTS = 512


@dataclass(frozen=True)
class StageConfig:
    """One cooler stage: junction, superconductor and phonon channel stack.

    The phonon composite is listed junction-side first.  external_load is
    extra heat deposited on the cold island (W).  lead_temperature_rule
    fixes the superconductor quasiparticle temperature; the only supported
    rule thermalizes the lead to the previous stage.
    """

    junction: JunctionParams
    material: SuperconductorMaterial
    phonon: CompositeChannel
    external_load: float = 0.0
    lead_temperature_rule: str = "previous_stage"
    T_min: float = 1e-3

    def __post_init__(self) -> None:
        if self.external_load < 0.0:
            raise ValueError(f"external_load must be non-negative, got {self.external_load}")
        if self.T_min <= 0.0:
            raise ValueError(f"T_min must be positive, got {self.T_min}")
        if self.lead_temperature_rule != "previous_stage":
            raise ValueError(
                f"unsupported lead_temperature_rule {self.lead_temperature_rule!r}"
            )


@dataclass(frozen=True)
class StageSolution:
    """Solved equilibrium of one stage."""

    T_N: float                 # cold electron temperature, K
    T_0: float                 # previous-stage temperature, K
    T_S: float                 # superconductor lead temperature, K
    V_opt: float               # optimal bias at T_N, V
    P_cool: float              # junction cooling power at T_N, W
    P_ph_influx: float         # phonon heat leak into the island, W
    residual: float            # |P_cool - P_ph_influx - load|, W
    relative_cooling: float    # (T_0 - T_N)/T_0
    validity_warnings: tuple[str, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class CascadeConfig:
    """Bath temperature plus stages ordered hot to cold; may be empty."""

    T_bath: float
    stages: tuple[StageConfig, ...] = ()

    def __init__(self, T_bath: float, stages=()):
        if T_bath <= 0.0:
            raise ValueError(f"T_bath must be positive, got {T_bath}")
        object.__setattr__(self, "T_bath", T_bath)
        object.__setattr__(self, "stages", tuple(stages))


def relative_cooling(T_0: float, T_N: float) -> float:
    """Fractional cooling (T_0 - T_N)/T_0 between consecutive stages."""
    if T_0 <= 0.0:
        raise ValueError(f"T_0 must be positive, got {T_0}")
    return (T_0 - T_N) / T_0


@dataclass(frozen=True)
class BalanceScan:
    """Diagnostic view of the heat balance across the solver bracket."""

    temperatures: np.ndarray    # scan grid, K
    net_cooling: np.ndarray     # P_cool + phonon outflow - load at each point, W
    roots: tuple[float, ...]    # refined balance crossings
    stable: tuple[bool, ...]    # stability flag per root


def diagnostic_scan(stage: StageConfig, T_0: float,
                    points: int = SCAN_POINTS) -> BalanceScan:
    """Full balance scan with every root and its stability classification.

    Inspection aid for configs with multiple equilibria; the solver itself
    only returns the root selected by the cool-down rule.
    """
    t_hi = BRACKET_CEILING * stage.material.T_c
    grid = np.unique(np.append(np.geomspace(stage.T_min, t_hi, points), T_0))
    net = np.array([_net_cooling(stage, t, T_0) for t in grid])
    roots = _locate_roots(stage, grid, net, T_0)
    return BalanceScan(
        temperatures=grid,
        net_cooling=net,
        roots=tuple(roots),
        stable=tuple(_stability(stage, r, T_0) > 0.0 for r in roots),
    )


def _net_cooling(stage: StageConfig, T: float, T_0: float) -> float:
    """P_cool(T) + phonon outflow(T -> T_0) - load; zero at equilibrium.

    The phonon term is negative (an influx) while the island is colder
    than the previous stage, so this equals P_cool - P_ph - load there.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        p_cool = cooling_power_simplified(stage.junction, stage.material, T)
    return p_cool + stage.phonon.heat_flow(T, T_0) - stage.external_load


def _stability(stage: StageConfig, T: float, T_0: float) -> float:
    """Central-difference derivative of the net cooling at T."""
    h = min(max(1e-6, 1e-6 * T), 0.5 * T)
    return (_net_cooling(stage, T + h, T_0) - _net_cooling(stage, T - h, T_0)) / (2.0 * h)


def equilibrium_temperature(stage: StageConfig, T_0: float) -> StageSolution:
    """Solve the stage heat balance against a previous stage at T_0.

    Scans the bracket [T_min, 0.95 T_c] for balance crossings, refines
    each by bisection, and returns the largest stable root at or below
    T_0 (quasi-static cool-down from T_0).  If the junction cannot cool,
    the stable root above T_0 is returned with a heating warning.
    """
    t_hi = BRACKET_CEILING * stage.material.T_c
    if T_0 >= t_hi:
        raise ValueError(
            f"T_0 = {T_0:.4g} K is not below {BRACKET_CEILING} T_c = {t_hi:.4g} K"
        )
    if T_0 <= stage.T_min:
        raise ValueError(f"T_0 = {T_0:.4g} K must exceed T_min = {stage.T_min:.4g} K")

    grid = np.geomspace(stage.T_min, t_hi, SCAN_POINTS)
    grid = np.unique(np.append(grid, T_0))
    g = np.array([_net_cooling(stage, t, T_0) for t in grid])
    roots = _locate_roots(stage, grid, g, T_0)

    stable = sorted(r for r in roots if _stability(stage, r, T_0) > 0.0)
    notes: list[str] = []
    candidates = [r for r in stable if r <= T_0 * (1.0 + 1e-12)]
    if candidates:
        T_N = min(candidates[-1], T_0)
    elif stable:
        T_N = stable[0]
        notes.append(
            f"junction heats: no stable balance at or below T_0 = {T_0:.4g} K; "
            f"returned stable root at {T_N:.4g} K"
        )
        warnings.warn(notes[-1], ValidityWarning, stacklevel=2)
    else:
        span = f"[{stage.T_min:.3g}, {t_hi:.3g}] K"
        sign_summary = f"net cooling spans [{g.min():.3e}, {g.max():.3e}] W"
        raise NumericError(
            f"no stable heat-balance root in {span} for T_0 = {T_0:.4g} K; "
            f"{sign_summary} over a {grid.size}-point scan"
        )

    return _finalize(stage, T_N, T_0, notes)


def _locate_roots(stage: StageConfig, grid: np.ndarray, net: np.ndarray,
                  T_0: float) -> list[float]:
    """Exact zeros on the grid plus bisection-refined sign changes."""
    roots = [float(t) for t, g in zip(grid, net) if g == 0.0]
    for k in range(len(grid) - 1):
        if net[k] == 0.0 or net[k + 1] == 0.0:
            continue
        if net[k] * net[k + 1] < 0.0:
            roots.append(_bisect(stage, grid[k], grid[k + 1], net[k], T_0))
    return roots


def _bisect(stage: StageConfig, lo: float, hi: float, g_lo: float, T_0: float) -> float:
    """Refine a sign change to T_TOLERANCE and the residual criterion."""
    while hi - lo > 1e-13 * hi:
        mid = 0.5 * (lo + hi)
        g_mid = _net_cooling(stage, mid, T_0)
        if g_mid == 0.0:
            return mid
        if (g_mid > 0.0) == (g_lo > 0.0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
        if hi - lo <= T_TOLERANCE and _residual_ok(stage, 0.5 * (lo + hi), T_0):
            break
    return 0.5 * (lo + hi)


def _residual_ok(stage: StageConfig, T: float, T_0: float) -> bool:
    p_ph = -stage.phonon.heat_flow(T, T_0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        p_cool = cooling_power_simplified(stage.junction, stage.material, T)
    scale = max(abs(p_cool), abs(p_ph), RESIDUAL_FLOOR)
    return abs(p_cool - p_ph - stage.external_load) <= RESIDUAL_FACTOR * scale


def _finalize(stage: StageConfig, T_N: float, T_0: float, notes: list[str]) -> StageSolution:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ValidityWarning)
        p_cool = cooling_power_simplified(stage.junction, stage.material, T_N)
    notes = list(notes) + [str(w.message) for w in caught]
    p_ph = -stage.phonon.heat_flow(T_N, T_0)
    residual = abs(p_cool - p_ph - stage.external_load)
    scale = max(abs(p_cool), abs(p_ph), RESIDUAL_FLOOR)
    if residual > RESIDUAL_FACTOR * scale:
        raise NumericError(
            f"balance residual {residual:.3e} W exceeds {RESIDUAL_FACTOR:.0e} of "
            f"the dominant scale {scale:.3e} W at T_N = {T_N:.6g} K"
        )
    return StageSolution(
        T_N=T_N,
        T_0=T_0,
        T_S=T_0,
        V_opt=optimal_bias(stage.material.Delta, T_N),
        P_cool=p_cool,
        P_ph_influx=p_ph,
        residual=residual,
        relative_cooling=relative_cooling(T_0, T_N),
        validity_warnings=tuple(notes),
    )


def solve_cascade(config: CascadeConfig) -> list[StageSolution]:
    """Solve stages sequentially hot to cold; stage k sees T_N of stage k-1."""
    solutions: list[StageSolution] = []
    t_prev = config.T_bath
    for k, stage in enumerate(config.stages):
        try:
            sol = equilibrium_temperature(stage, t_prev)
        except (NumericError, ValueError) as exc:
            raise type(exc)(f"stage {k}: {exc}") from exc
        solutions.append(sol)
        t_prev = sol.T_N
    return solutions
