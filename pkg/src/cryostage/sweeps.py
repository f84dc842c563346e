"""Design-space sweeps over stage parameters.

Regenerates the design maps as machine-readable tables: relative cooling
versus previous-stage temperature for the three phonon-blocking scenarios,
the classical (n = 4) and conductance-quantum (n = 2) operating maps, and
the junction-transparency sweep with the Andreev tunneling limit overlay.

Every sweep point is an independent single-stage solve; failures are
captured per point and flagged in a status column rather than aborting
the sweep.  Points may be solved by a thread pool (capped by the
CRYOSTAGE_THREADS environment variable, 0 or unset = auto); assembly is
index-ordered, so output is deterministic regardless of parallelism.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from .constants import CONSTANTS, SuperconductorMaterial
from .errors import NumericError
from .junction import JunctionParams, andreev_gamma, effective_gamma
from .phonons import (
    CompositeChannel,
    PowerLawChannel,
    channel_from_boundary_resistance,
    channel_from_quantum_limit,
)
from .stages import StageConfig, equilibrium_temperature

SCENARIOS = ("ptb_only", "constricted", "quantum_limit")

#: Value written to the relative-cooling column of a failed sweep point.
ERROR_SENTINEL = ""


@dataclass(frozen=True)
class DesignDefaults:
    """Stage parameters shared by all sweeps; values from the config file.

    Resistances in Ohm um^2, areas in um^2 (A_ch in nm^2), boundary
    resistances in K^4 cm^2/W.
    """

    rt_area: float = 100.0
    area: float = 100.0
    gamma_dynes: float = 1e-3
    r_ptb: float = 22.0
    r_total_constricted: float = 220.0
    quanta: int = 10
    transmission: float = 1.0
    a_ch: float = 30.0
    external_load: float = 0.0
    t_min: float = 1e-3
    constriction_channel: PowerLawChannel | None = None

    def junction(self, *, rt_area: float | None = None,
                 with_andreev: bool = False) -> JunctionParams:
        return JunctionParams(
            R_T_area=self.rt_area if rt_area is None else rt_area,
            area=self.area,
            gamma_dynes=self.gamma_dynes,
            A_ch=self.a_ch if with_andreev else None,
        )

    def scenario_channel(self, scenario: str) -> CompositeChannel:
        """Phonon stack for a named blocking scenario, junction side first."""
        if scenario == "ptb_only":
            return CompositeChannel([channel_from_boundary_resistance(self.r_ptb, self.area)])
        if scenario == "constricted":
            ptb = channel_from_boundary_resistance(self.r_ptb, self.area)
            if self.constriction_channel is not None:
                extra = self.constriction_channel
            else:
                # Declared as the n = 4 remainder of the constricted total.
                r_extra = self.r_total_constricted - self.r_ptb
                if r_extra <= 0.0:
                    raise ValueError(
                        "constricted total must exceed the boundary resistance"
                    )
                extra = replace(
                    channel_from_boundary_resistance(r_extra, self.area),
                    label="constriction",
                )
            return CompositeChannel([ptb, extra])
        if scenario == "quantum_limit":
            return CompositeChannel(
                [channel_from_quantum_limit(self.quanta, self.transmission)]
            )
        raise ValueError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")

    def stage(self, material: SuperconductorMaterial, channel: CompositeChannel,
              junction: JunctionParams | None = None) -> StageConfig:
        return StageConfig(
            junction=self.junction() if junction is None else junction,
            material=material,
            phonon=channel,
            external_load=self.external_load,
            T_min=self.t_min,
        )


@dataclass(frozen=True)
class SweepResult:
    """Tabular sweep output plus the grid view used by plots and tests.

    rows/columns define the CSV payload; values is the relative-cooling
    grid with NaN at failed points (errors maps flat cell index to the
    failure message, so no fabricated numbers enter the table).
    """

    kind: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    values: np.ndarray
    axes: dict[str, np.ndarray]
    metadata: dict[str, str] = field(default_factory=dict)
    errors: dict[int, str] = field(default_factory=dict)


def _thread_count() -> int:
    raw = os.environ.get("CRYOSTAGE_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"CRYOSTAGE_THREADS must be an integer, got {raw!r}") from None
    if n <= 0:
        return min(8, os.cpu_count() or 1)
    return n


def _solve_points(tasks: Sequence[Callable[[], object]]) -> list[tuple[object, str]]:
    """Run independent point solves, preserving order; capture failures."""

    def run(task: Callable[[], object]) -> tuple[object, str]:
        try:
            return task(), ""
        except (NumericError, ValueError) as exc:
            return None, f"{type(exc).__name__}: {exc}"

    workers = _thread_count()
    if workers == 1 or len(tasks) <= 1:
        return [run(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, tasks))


def _check_axis(name: str, values: np.ndarray, positive: bool = False) -> None:
    if positive and np.any(values <= 0.0):
        raise ValueError(f"{name} axis values must be positive")
    if np.any(np.diff(values) <= 0.0):
        raise ValueError(f"{name} axis must be strictly increasing")


def _base_metadata(kind: str, material: SuperconductorMaterial,
                   defaults: DesignDefaults, **extra: str) -> dict[str, str]:
    meta = {
        "sweep": kind,
        "material": material.name,
        "T_c_K": f"{material.T_c:.12g}",
        "gamma_dynes": f"{defaults.gamma_dynes:.12g}",
        "RT_A_ohm_um2": f"{defaults.rt_area:.12g}",
        "area_um2": f"{defaults.area:.12g}",
    }
    meta.update(extra)
    return meta


def sweep_relative_cooling_vs_T0(
    scenario: str,
    material: SuperconductorMaterial,
    T0_grid: Iterable[float],
    defaults: DesignDefaults = DesignDefaults(),
) -> SweepResult:
    """Relative cooling against previous-stage temperature for one scenario."""
    T0_values = np.asarray(list(T0_grid), dtype=float)
    _check_axis("T0", T0_values, positive=True)
    channel = defaults.scenario_channel(scenario)
    stage = defaults.stage(material, channel)

    tasks = [lambda t0=t0: equilibrium_temperature(stage, t0) for t0 in T0_values]
    outcomes = _solve_points(tasks)

    rows = []
    values = np.full(T0_values.size, np.nan)
    errors: dict[int, str] = {}
    for k, (t0, (sol, err)) in enumerate(zip(T0_values, outcomes)):
        if err:
            errors[k] = err
            rows.append((t0, ERROR_SENTINEL, ERROR_SENTINEL, scenario, ERROR_SENTINEL, err))
        else:
            values[k] = sol.relative_cooling
            rows.append((t0, sol.T_N, sol.relative_cooling, scenario, sol.residual, "ok"))
    regime = ",".join(ch.label for ch in channel.channels)
    return SweepResult(
        kind="t0_curve",
        columns=("T0_K", "TN_K", "relative_cooling", "scenario", "residual_W", "status"),
        rows=tuple(rows),
        values=values,
        axes={"T0_K": T0_values},
        metadata=_base_metadata("t0_curve", material, defaults,
                                scenario=scenario, channel_regime=regime),
        errors=errors,
    )


def _map_sweep(
    kind: str,
    material: SuperconductorMaterial,
    t_grid: Iterable[float],
    second_axis_name: str,
    second_axis: Iterable[float],
    stage_for_cell: Callable[[float, float], StageConfig],
    defaults: DesignDefaults,
    **meta: str,
) -> SweepResult:
    t_values = np.asarray(list(t_grid), dtype=float)
    y_values = np.asarray(list(second_axis), dtype=float)
    if np.any(t_values <= 0.0) or np.any(t_values >= 0.95):
        raise ValueError("normalized temperatures must lie in (0, 0.95)")
    _check_axis("t", t_values)
    _check_axis(second_axis_name, y_values, positive=True)

    cells = [(i, j) for i in range(t_values.size) for j in range(y_values.size)]

    def make_task(i: int, j: int) -> Callable[[], object]:
        t, y = t_values[i], y_values[j]

        def task():
            stage = stage_for_cell(t, y)
            return equilibrium_temperature(stage, t * material.T_c)

        return task

    outcomes = _solve_points([make_task(i, j) for i, j in cells])

    rows = []
    values = np.full((t_values.size, y_values.size), np.nan)
    errors: dict[int, str] = {}
    for flat, ((i, j), (sol, err)) in enumerate(zip(cells, outcomes)):
        if err:
            errors[flat] = err
            rows.append((t_values[i], y_values[j], ERROR_SENTINEL, err))
        else:
            values[i, j] = sol.relative_cooling
            rows.append((t_values[i], y_values[j], sol.relative_cooling, "ok"))
    return SweepResult(
        kind=kind,
        columns=("t", "Pi_or_N", "relative_cooling", "status"),
        rows=tuple(rows),
        values=values,
        axes={"t": t_values, second_axis_name: y_values},
        metadata=_base_metadata(kind, material, defaults, **meta),
        errors=errors,
    )


def sweep_map_classical(
    material: SuperconductorMaterial,
    t_grid: Iterable[float],
    pi_grid: Iterable[float],
    defaults: DesignDefaults = DesignDefaults(),
) -> SweepResult:
    """Cooling map over normalized temperature and the blocking product Pi.

    Pi = alpha L_0 / (R_T T_c^2) for the n = 4 channel; each cell rebuilds
    alpha = Pi R_T T_c^2 / L_0 and runs a full stage solve.
    """
    R_T = defaults.rt_area / defaults.area
    T_c2 = material.T_c**2

    def stage_for_cell(t: float, pi: float) -> StageConfig:
        if pi <= 0.0:
            raise ValueError(f"Pi must be positive, got {pi}")
        alpha = pi * R_T * T_c2 / CONSTANTS.L_0
        channel = CompositeChannel([PowerLawChannel(alpha=alpha, n=4.0, label="PTB")])
        return defaults.stage(material, channel)

    return _map_sweep(
        "fig2e_map", material, t_grid, "Pi", pi_grid, stage_for_cell, defaults,
        channel_regime="ptb", axis="Pi=alpha*L_0/(R_T*T_c^2)",
    )


def sweep_map_quantum(
    material: SuperconductorMaterial,
    t_grid: Iterable[float],
    n_grid: Iterable[int],
    defaults: DesignDefaults = DesignDefaults(),
) -> SweepResult:
    """Cooling map over normalized temperature and conductance-quantum count."""

    def stage_for_cell(t: float, n: float) -> StageConfig:
        count = int(round(n))
        if count < 1:
            raise ValueError(f"quantum count must be >= 1, got {n}")
        channel = CompositeChannel(
            [channel_from_quantum_limit(count, defaults.transmission)]
        )
        return defaults.stage(material, channel)

    return _map_sweep(
        "fig2f_map", material, t_grid, "N", n_grid, stage_for_cell, defaults,
        channel_regime="quantum", axis="N=conductance quanta",
    )


def andreev_limit_curve(A_ch: float, threshold: float) -> float:
    """R_T A (Ohm um^2) at which the Andreev leakage reaches the threshold."""
    if A_ch < 0.0:
        raise ValueError(f"A_ch must be non-negative, got {A_ch}")
    if threshold <= 0.0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    return CONSTANTS.R_K * A_ch * 1e-6 / (4.0 * threshold)


def sweep_fig3(
    material: SuperconductorMaterial,
    rta_grid: Iterable[float],
    T0_values: Sequence[float] = (0.2, 0.3),
    defaults: DesignDefaults = DesignDefaults(),
    limit_threshold: float | None = None,
) -> SweepResult:
    """Relative cooling against junction transparency with Andreev leakage.

    Uses the constricted phonon total and the measured Andreev channel
    area; andreev_limit_flag marks grid points on the transparent side of
    the limit locus (Andreev leakage above the threshold, which defaults
    to the Dynes leakage).
    """
    rta_values = np.asarray(list(rta_grid), dtype=float)
    _check_axis("RT_A", rta_values, positive=True)
    threshold = defaults.gamma_dynes if limit_threshold is None else limit_threshold
    limit = andreev_limit_curve(defaults.a_ch, threshold)
    channel = CompositeChannel(
        [channel_from_boundary_resistance(defaults.r_total_constricted, defaults.area)]
    )

    cells = [(i, j) for i in range(rta_values.size) for j in range(len(T0_values))]

    def make_task(i: int, j: int) -> Callable[[], object]:
        rta, t0 = rta_values[i], T0_values[j]

        def task():
            junction = defaults.junction(rt_area=rta, with_andreev=True)
            stage = defaults.stage(material, channel, junction=junction)
            return equilibrium_temperature(stage, t0)

        return task

    outcomes = _solve_points([make_task(i, j) for i, j in cells])

    rows = []
    values = np.full((rta_values.size, len(T0_values)), np.nan)
    errors: dict[int, str] = {}
    for flat, ((i, j), (sol, err)) in enumerate(zip(cells, outcomes)):
        rta = rta_values[i]
        gamma_eff = effective_gamma(defaults.junction(rt_area=rta, with_andreev=True))
        flag = int(rta < limit)
        if err:
            errors[flat] = err
            rows.append((rta, T0_values[j], ERROR_SENTINEL, gamma_eff, flag, err))
        else:
            values[i, j] = sol.relative_cooling
            rows.append((rta, T0_values[j], sol.relative_cooling, gamma_eff, flag, "ok"))
    return SweepResult(
        kind="fig3_curve",
        columns=("RT_A_ohm_um2", "T0_K", "relative_cooling", "gamma_eff",
                 "andreev_limit_flag", "status"),
        rows=tuple(rows),
        values=values,
        axes={"RT_A_ohm_um2": rta_values, "T0_K": np.asarray(T0_values, dtype=float)},
        metadata=_base_metadata(
            "fig3_curve", material, defaults,
            A_ch_nm2=f"{defaults.a_ch:.12g}",
            r_total_K4cm2_W=f"{defaults.r_total_constricted:.12g}",
            andreev_limit_RT_A=f"{limit:.12g}",
            limit_threshold=f"{threshold:.12g}",
        ),
        errors=errors,
    )
