"""TOML config loading for the CLI.

One plain-text file describes the material, junction, phonon channel
stack, cascade, sweep grids and transport problem.  Field errors raise
ConfigError naming the offending key; defaults follow the standard
design-point parameters (R_T A = 100 Ohm um^2, gamma = 1e-3,
r_PTB = 22 K^4 cm^2/W, constricted total 220 K^4 cm^2/W, A_ch = 30 nm^2).
"""
from __future__ import annotations

import hashlib
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .bte import DomGrid, GrayMediumModel, WireGeometry
from .constants import CONSTANTS, MATERIALS, SuperconductorMaterial
from .errors import ConfigError
from .junction import JunctionParams
from .phonons import (
    CompositeChannel,
    PowerLawChannel,
    channel_from_boundary_resistance,
    channel_from_quantum_limit,
)
from .stages import CascadeConfig, StageConfig
from .sweeps import SCENARIOS, DesignDefaults


@dataclass(frozen=True)
class SweepGrids:
    """Axis grids for the figure sweeps."""

    t0_grid: tuple[float, ...]
    t_grid: tuple[float, ...]
    pi_grid: tuple[float, ...]
    n_grid: tuple[int, ...]
    rta_grid: tuple[float, ...]
    fig3_T0: tuple[float, ...]


@dataclass(frozen=True)
class BteSettings:
    """Transport problem pieces plus the curve/fit temperature grid."""

    geometry: WireGeometry
    medium: GrayMediumModel
    grid: DomGrid
    T_hot: float
    T_cold: float
    fit_T_grid: tuple[float, ...]


@dataclass(frozen=True)
class RunConfig:
    """Everything the CLI needs, resolved and validated."""

    material: SuperconductorMaterial
    defaults: DesignDefaults
    stage_T0: float
    stage: StageConfig
    cascade: CascadeConfig
    sweeps: SweepGrids
    bte: BteSettings
    config_hash: str
    source: str = "builtin-defaults"


DEFAULT_TOML = """\
# cryostage configuration (all keys optional; these are the defaults)

[material]
name = "Al"              # Al | V | Ti, or set T_c_K for a custom material

[junction]
rt_area_ohm_um2 = 100.0
area_um2 = 100.0
gamma_dynes = 1e-3
# andreev_channel_area_nm2 = 30.0   # uncomment to enable Andreev leakage

[stage]
t0_K = 0.3               # previous-stage temperature for `stage solve`
external_load_W = 0.0
t_min_K = 1e-3

# Phonon stack, junction side first; kinds: ptb | lead | quantum | fitted
[[stage.channels]]
kind = "ptb"
r_k4cm2_W = 22.0

[defaults]
r_ptb_k4cm2_W = 22.0
r_total_constricted_k4cm2_W = 220.0
quanta = 10
transmission = 1.0
a_ch_nm2 = 30.0

[cascade]
bath_K = 1.4
[[cascade.stages]]
material = "V"
scenario = "constricted"
[[cascade.stages]]
material = "Al"
scenario = "constricted"

[sweep]
t0_grid_K = [0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50]
t_grid = [0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50]
pi_grid = [0.01, 0.0316, 0.1, 0.316, 1.0, 3.16, 10.0, 31.6, 100.0]
n_grid = [1, 2, 5, 10, 20, 50, 100, 1000]
rta_grid_ohm_um2 = [10.0, 21.5, 46.4, 100.0, 215.0, 464.0, 1000.0, 4640.0, 10000.0]
fig3_t0_K = [0.2, 0.3]

[bte]
length_nm = 500.0
width_nm = 50.0
height_nm = 5.0
specularity = 0.5
velocity_m_s = 6000.0
# mfp_bulk_nm = 1000.0   # omit for an infinite bulk mean free path
n_x = 60
n_y = 16
n_polar = 8
n_azimuthal = 16
t_hot_K = 0.3
t_cold_K = 0.1
fit_t_grid_K = [0.1, 0.16, 0.25, 0.4, 0.63, 1.0]
"""


def _get(table: dict, key: str, kind, default, context: str):
    """Fetch and type-check one config value."""
    if key not in table:
        return default
    value = table[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ConfigError(
            f"{context}.{key}: expected {kind.__name__}, got {type(value).__name__}"
        )
    return value


def _get_list(table: dict, key: str, default, context: str) -> tuple[float, ...]:
    if key not in table:
        return tuple(default)
    value = table[key]
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{context}.{key}: expected a non-empty list")
    out = []
    for i, item in enumerate(value):
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ConfigError(f"{context}.{key}[{i}]: expected a number")
        out.append(float(item))
    return tuple(out)


def _material(table: dict) -> SuperconductorMaterial:
    name = _get(table, "name", str, "Al", "material")
    t_c = _get(table, "T_c_K", float, None, "material")
    gap_uev = _get(table, "gap_ueV", float, None, "material")
    if t_c is None and gap_uev is None:
        if name not in MATERIALS:
            raise ConfigError(
                f"material.name: unknown preset {name!r}; "
                f"available: {', '.join(sorted(MATERIALS))}"
            )
        return MATERIALS[name]
    if t_c is None:
        raise ConfigError("material.T_c_K is required when overriding the gap")
    try:
        if gap_uev is not None:
            return SuperconductorMaterial(
                name=name, T_c=t_c, Delta=gap_uev * 1e-6 * CONSTANTS.e
            )
        return SuperconductorMaterial.from_critical_temperature(name, t_c)
    except ValueError as exc:
        raise ConfigError(f"material: {exc}") from exc


def _channel(entry: dict, area_um2: float, index: int, context: str) -> PowerLawChannel:
    ctx = f"{context}[{index}]"
    if not isinstance(entry, dict):
        raise ConfigError(f"{ctx}: expected a table")
    kind = _get(entry, "kind", str, None, ctx)
    if kind is None:
        raise ConfigError(f"{ctx}.kind is required (ptb | lead | quantum | fitted)")
    try:
        if kind in ("ptb", "lead"):
            r = _get(entry, "r_k4cm2_W", float, None, ctx)
            if r is None:
                raise ConfigError(f"{ctx}.r_k4cm2_W is required for kind {kind!r}")
            ch = channel_from_boundary_resistance(r, area_um2)
            return PowerLawChannel(alpha=ch.alpha, n=ch.n,
                                   label="PTB" if kind == "ptb" else "lead")
        if kind == "quantum":
            quanta = _get(entry, "quanta", int, 10, ctx)
            trans = _get(entry, "transmission", float, 1.0, ctx)
            return channel_from_quantum_limit(quanta, trans)
        if kind == "fitted":
            alpha = _get(entry, "alpha", float, None, ctx)
            n = _get(entry, "n", float, None, ctx)
            if alpha is None or n is None:
                raise ConfigError(f"{ctx}: fitted channels need alpha and n")
            return PowerLawChannel(alpha=alpha, n=n, label="fitted")
    except ValueError as exc:
        raise ConfigError(f"{ctx}: {exc}") from exc
    raise ConfigError(f"{ctx}.kind: unknown kind {kind!r}")


def _junction(table: dict) -> JunctionParams:
    try:
        return JunctionParams(
            R_T_area=_get(table, "rt_area_ohm_um2", float, 100.0, "junction"),
            area=_get(table, "area_um2", float, 100.0, "junction"),
            gamma_dynes=_get(table, "gamma_dynes", float, 1e-3, "junction"),
            A_ch=_get(table, "andreev_channel_area_nm2", float, None, "junction"),
        )
    except ValueError as exc:
        raise ConfigError(f"junction: {exc}") from exc


def load_config(path: Path | str | None) -> RunConfig:
    """Load a TOML config file; None loads the built-in defaults."""
    if path is None:
        raw = DEFAULT_TOML.encode()
        source = "builtin-defaults"
    else:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        raw = path.read_bytes()
        source = str(path)
    try:
        data = tomllib.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"{source}: not valid TOML: {exc}") from exc
    try:
        return _resolve(data, hashlib.sha256(raw).hexdigest(), source)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def _resolve(data: dict, config_hash: str, source: str) -> RunConfig:
    material = _material(data.get("material", {}))
    junction = _junction(data.get("junction", {}))

    d = data.get("defaults", {})
    stage_table = data.get("stage", {})
    defaults = DesignDefaults(
        rt_area=junction.R_T_area,
        area=junction.area,
        gamma_dynes=junction.gamma_dynes,
        r_ptb=_get(d, "r_ptb_k4cm2_W", float, 22.0, "defaults"),
        r_total_constricted=_get(d, "r_total_constricted_k4cm2_W", float, 220.0, "defaults"),
        quanta=_get(d, "quanta", int, 10, "defaults"),
        transmission=_get(d, "transmission", float, 1.0, "defaults"),
        a_ch=_get(d, "a_ch_nm2", float, 30.0, "defaults"),
        external_load=_get(stage_table, "external_load_W", float, 0.0, "stage"),
        t_min=_get(stage_table, "t_min_K", float, 1e-3, "stage"),
    )

    channel_entries = stage_table.get("channels", [{"kind": "ptb", "r_k4cm2_W": defaults.r_ptb}])
    if not isinstance(channel_entries, list) or not channel_entries:
        raise ConfigError("stage.channels: expected a non-empty array of tables")
    channels = [
        _channel(entry, junction.area, i, "stage.channels")
        for i, entry in enumerate(channel_entries)
    ]
    try:
        stage = StageConfig(
            junction=junction,
            material=material,
            phonon=CompositeChannel(channels),
            external_load=defaults.external_load,
            T_min=defaults.t_min,
        )
    except ValueError as exc:
        raise ConfigError(f"stage: {exc}") from exc
    stage_T0 = _get(stage_table, "t0_K", float, 0.3, "stage")

    cascade = _cascade(data.get("cascade", {}), junction, defaults, stage)

    s = data.get("sweep", {})
    sweeps = SweepGrids(
        t0_grid=_get_list(s, "t0_grid_K", np.linspace(0.1, 0.5, 9), "sweep"),
        t_grid=_get_list(s, "t_grid", np.linspace(0.05, 0.5, 10), "sweep"),
        pi_grid=_get_list(s, "pi_grid", np.geomspace(1e-2, 1e2, 9), "sweep"),
        n_grid=tuple(
            int(n) for n in _get_list(s, "n_grid", (1, 2, 5, 10, 20, 50, 100, 1000), "sweep")
        ),
        rta_grid=_get_list(s, "rta_grid_ohm_um2", np.geomspace(10.0, 1e4, 9), "sweep"),
        fig3_T0=_get_list(s, "fig3_t0_K", (0.2, 0.3), "sweep"),
    )
    for axis in ("t0_grid", "t_grid", "pi_grid", "rta_grid", "fig3_T0"):
        values = getattr(sweeps, axis)
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ConfigError(f"sweep.{axis}: grid must be strictly increasing")

    bte = _bte(data.get("bte", {}))

    return RunConfig(
        material=material,
        defaults=defaults,
        stage_T0=stage_T0,
        stage=stage,
        cascade=cascade,
        sweeps=sweeps,
        bte=bte,
        config_hash=config_hash,
        source=source,
    )


def _cascade(table: dict, junction: JunctionParams, defaults: DesignDefaults,
             base_stage: StageConfig) -> CascadeConfig:
    bath = _get(table, "bath_K", float, 1.4, "cascade")
    entries = table.get("stages", [])
    if not isinstance(entries, list):
        raise ConfigError("cascade.stages: expected an array of tables")
    stages = []
    for i, entry in enumerate(entries):
        ctx = f"cascade.stages[{i}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"{ctx}: expected a table")
        name = _get(entry, "material", str, None, ctx)
        material = _material({"name": name}) if name else base_stage.material
        if "channels" in entry:
            chans = entry["channels"]
            if not isinstance(chans, list) or not chans:
                raise ConfigError(f"{ctx}.channels: expected a non-empty array")
            phonon = CompositeChannel(
                [_channel(c, junction.area, k, f"{ctx}.channels") for k, c in enumerate(chans)]
            )
        else:
            scenario = _get(entry, "scenario", str, "ptb_only", ctx)
            if scenario not in SCENARIOS:
                raise ConfigError(
                    f"{ctx}.scenario: unknown scenario {scenario!r}; "
                    f"expected one of {SCENARIOS}"
                )
            phonon = defaults.scenario_channel(scenario)
        try:
            stages.append(
                StageConfig(
                    junction=junction,
                    material=material,
                    phonon=phonon,
                    external_load=defaults.external_load,
                    T_min=defaults.t_min,
                )
            )
        except ValueError as exc:
            raise ConfigError(f"{ctx}: {exc}") from exc
    try:
        return CascadeConfig(T_bath=bath, stages=tuple(stages))
    except ValueError as exc:
        raise ConfigError(f"cascade: {exc}") from exc


def _bte(table: dict) -> BteSettings:
    nm = 1e-9
    try:
        geometry = WireGeometry(
            length=_get(table, "length_nm", float, 500.0, "bte") * nm,
            width=_get(table, "width_nm", float, 50.0, "bte") * nm,
            height=_get(table, "height_nm", float, 5.0, "bte") * nm,
            specularity=_get(table, "specularity", float, 0.5, "bte"),
        )
        mfp = _get(table, "mfp_bulk_nm", float, None, "bte")
        medium = GrayMediumModel.from_velocity(
            _get(table, "velocity_m_s", float, 6000.0, "bte"),
            mfp_bulk=math.inf if mfp is None else mfp * nm,
        )
        grid = DomGrid(
            n_x=_get(table, "n_x", int, 60, "bte"),
            n_y=_get(table, "n_y", int, 16, "bte"),
            n_polar=_get(table, "n_polar", int, 8, "bte"),
            n_azimuthal=_get(table, "n_azimuthal", int, 16, "bte"),
        )
    except ValueError as exc:
        raise ConfigError(f"bte: {exc}") from exc
    t_hot = _get(table, "t_hot_K", float, 0.3, "bte")
    t_cold = _get(table, "t_cold_K", float, 0.1, "bte")
    if t_hot <= 0.0 or t_cold <= 0.0:
        raise ConfigError("bte: reservoir temperatures must be positive")
    fit_grid = _get_list(table, "fit_t_grid_K", np.geomspace(0.1, 1.0, 6), "bte")
    return BteSettings(
        geometry=geometry,
        medium=medium,
        grid=grid,
        T_hot=t_hot,
        T_cold=t_cold,
        fit_T_grid=fit_grid,
    )
