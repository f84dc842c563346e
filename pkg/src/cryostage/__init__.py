"""Simulator and design explorer for phonon-blocked Sm-S tunnel-junction
refrigerator stages: junction cooling power, phonon heat leaks, Andreev
transparency limits, stage/cascade heat balance, and design-map sweeps."""

from .bte import (
    ConductancePoint,
    DomGrid,
    DomSolution,
    GrayMediumModel,
    PowerLawFit,
    WireGeometry,
    conductance_curve,
    constriction_wire_count,
    fit_power_law,
    solve_steady,
)
from .constants import (
    CONSTANTS,
    MATERIALS,
    PhysicalConstants,
    SuperconductorMaterial,
    bcs_gap,
    builtin_material,
)
from .errors import ConfigError, NumericError, ValidityWarning
from .junction import (
    CoolingOperatingPoint,
    JunctionParams,
    andreev_gamma,
    cooling_power_full,
    cooling_power_simplified,
    dynes_dos,
    effective_gamma,
    optimal_bias,
)
from .phonons import (
    CompositeChannel,
    PowerLawChannel,
    channel_from_boundary_resistance,
    channel_from_quantum_limit,
)
from .stages import (
    BalanceScan,
    CascadeConfig,
    StageConfig,
    StageSolution,
    diagnostic_scan,
    equilibrium_temperature,
    relative_cooling,
    solve_cascade,
)
from .sweeps import (
    DesignDefaults,
    SweepResult,
    andreev_limit_curve,
    sweep_fig3,
    sweep_map_classical,
    sweep_map_quantum,
    sweep_relative_cooling_vs_T0,
)

__version__ = "0.1.0"
