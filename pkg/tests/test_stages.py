"""Stage heat balance and cascade chaining."""
import math
import warnings

import numpy as np
import pytest

from cryostage.constants import builtin_material
from cryostage.errors import NumericError, ValidityWarning
from cryostage.junction import JunctionParams, cooling_power_simplified
from cryostage.phonons import (
    CompositeChannel,
    PowerLawChannel,
    channel_from_boundary_resistance,
    channel_from_quantum_limit,
)
from cryostage.stages import (
    CascadeConfig,
    StageConfig,
    diagnostic_scan,
    equilibrium_temperature,
    relative_cooling,
    solve_cascade,
)

AL = builtin_material("Al")
VA = builtin_material("V")

JUNCTION = JunctionParams(R_T_area=100.0, area=100.0, gamma_dynes=1e-3)
PTB = CompositeChannel([channel_from_boundary_resistance(22.0, 100.0)])


def default_stage(**overrides) -> StageConfig:
    kwargs = dict(junction=JUNCTION, material=AL, phonon=PTB)
    kwargs.update(overrides)
    return StageConfig(**kwargs)


def assert_valid_solution(stage: StageConfig, sol) -> None:
    """Residual bound and stability check the solver promises for any solve."""
    scale = max(abs(sol.P_cool), abs(sol.P_ph_influx), 1e-18)
    assert sol.residual <= 1e-4 * scale
    h = 1e-6
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        def net(t):
            p = cooling_power_simplified(stage.junction, stage.material, t)
            return p + stage.phonon.heat_flow(t, sol.T_0) - stage.external_load
        assert (net(sol.T_N + h) - net(sol.T_N - h)) / (2 * h) > 0.0


def scan_oracle(stage: StageConfig, T_0: float, n_points: int = 10_000) -> float:
    """Dense temperature scan locating the balance crossing closest below T_0."""
    grid = np.linspace(stage.T_min, T_0, n_points)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        net = np.array([
            cooling_power_simplified(stage.junction, stage.material, t)
            + stage.phonon.heat_flow(t, T_0)
            - stage.external_load
            for t in grid
        ])
    crossings = np.where(np.sign(net[:-1]) != np.sign(net[1:]))[0]
    assert crossings.size > 0
    k = crossings[-1]
    return 0.5 * (grid[k] + grid[k + 1])


def test_reference_stage_against_dense_scan():
    stage = default_stage()
    sol = equilibrium_temperature(stage, 0.3)
    oracle = scan_oracle(stage, 0.3)
    assert sol.T_N == pytest.approx(oracle, abs=1e-4)
    assert sol.T_N == pytest.approx(0.066, abs=0.01)
    assert sol.relative_cooling == pytest.approx(0.78, abs=0.02)
    assert_valid_solution(stage, sol)


def test_solution_reports_optimal_bias_at_tn():
    sol = equilibrium_temperature(default_stage(), 0.3)
    from cryostage.junction import optimal_bias

    assert sol.V_opt == optimal_bias(AL.Delta, sol.T_N)
    assert sol.T_S == 0.3


def test_degenerate_junction_returns_bath_exactly():
    stage = default_stage(
        junction=JunctionParams(R_T_area=math.inf, area=100.0, gamma_dynes=0.0)
    )
    sol = equilibrium_temperature(stage, 0.3)
    assert sol.T_N == 0.3
    assert sol.relative_cooling == 0.0


def test_overwhelming_load_heats_with_warning():
    stage = default_stage(external_load=5e-9)
    with pytest.warns(ValidityWarning, match="heats"):
        sol = equilibrium_temperature(stage, 0.3)
    assert sol.T_N > 0.3
    assert any("heats" in w for w in sol.validity_warnings)
    assert_valid_solution(stage, sol)


def test_unbalanceable_load_raises_with_diagnostics():
    stage = default_stage(external_load=1e-3)
    with pytest.raises(NumericError, match="scan"):
        equilibrium_temperature(stage, 0.3)


def test_t0_domain_limits():
    with pytest.raises(ValueError):
        equilibrium_temperature(default_stage(), 1.15)  # >= 0.95 T_c
    with pytest.raises(ValueError):
        equilibrium_temperature(default_stage(), 5e-4)  # <= T_min


def test_relative_cooling_arithmetic():
    assert relative_cooling(0.3, 0.15) == pytest.approx(0.5)
    assert relative_cooling(0.3, 0.3) == 0.0
    with pytest.raises(ValueError):
        relative_cooling(0.0, 0.1)


def test_monotone_in_phonon_blocking():
    # Scaling every channel alpha up never reduces the relative cooling.
    for t0 in np.linspace(0.15, 0.45, 5):
        previous = -1.0
        for scale in (0.25, 1.0, 4.0, 16.0, 64.0):
            channel = CompositeChannel(
                [PowerLawChannel(alpha=2.2e7 * scale, n=4.0, label="PTB")]
            )
            sol = equilibrium_temperature(default_stage(phonon=channel), t0)
            assert sol.relative_cooling >= previous - 1e-9
            previous = sol.relative_cooling


@pytest.mark.filterwarnings("ignore::cryostage.errors.ValidityWarning")
def test_monotone_in_dynes_leakage():
    # At the largest leakages the junction heats; relative cooling goes
    # negative but must keep decreasing.
    for t0 in np.linspace(0.15, 0.45, 5):
        previous = 2.0
        for gamma in (1e-5, 1e-4, 1e-3, 1e-2, 1e-1):
            junction = JunctionParams(R_T_area=100.0, area=100.0, gamma_dynes=gamma)
            sol = equilibrium_temperature(default_stage(junction=junction), t0)
            assert sol.relative_cooling <= previous + 1e-9
            previous = sol.relative_cooling


def test_every_scenario_solution_satisfies_contract():
    channels = {
        "ptb": PTB,
        "quantum": CompositeChannel([channel_from_quantum_limit(10)]),
        "series": CompositeChannel(
            [
                channel_from_boundary_resistance(22.0, 100.0),
                channel_from_quantum_limit(50),
            ]
        ),
    }
    for channel in channels.values():
        for t0 in (0.1, 0.3, 0.5):
            stage = default_stage(phonon=channel)
            sol = equilibrium_temperature(stage, t0)
            assert_valid_solution(stage, sol)
            assert 0.0 < sol.T_N <= t0


def test_empty_cascade():
    assert solve_cascade(CascadeConfig(T_bath=0.3)) == []


def test_single_stage_cascade_matches_direct_solve():
    stage = default_stage()
    direct = equilibrium_temperature(stage, 0.3)
    cascade = solve_cascade(CascadeConfig(T_bath=0.3, stages=(stage,)))
    assert len(cascade) == 1
    assert cascade[0] == direct


def test_two_stage_cascade_descends():
    constricted = CompositeChannel(
        [
            channel_from_boundary_resistance(22.0, 100.0),
            channel_from_boundary_resistance(198.0, 100.0),
        ]
    )
    cascade = CascadeConfig(
        T_bath=1.4,
        stages=(
            default_stage(material=VA, phonon=constricted),
            default_stage(material=AL, phonon=constricted),
        ),
    )
    sols = solve_cascade(cascade)
    assert 1.4 > sols[0].T_N > sols[1].T_N > 0.0
    assert sols[1].T_0 == sols[0].T_N


def test_cascade_determinism():
    cascade = CascadeConfig(T_bath=0.4, stages=(default_stage(), default_stage()))
    first = solve_cascade(cascade)
    second = solve_cascade(cascade)
    assert [s.T_N for s in first] == [s.T_N for s in second]
    assert [s.P_cool for s in first] == [s.P_cool for s in second]


def test_cascade_errors_name_the_stage():
    bad = default_stage(material=builtin_material("Ti"))  # 1.4 K >> 0.95 T_c(Ti)
    with pytest.raises(ValueError, match="stage 1"):
        solve_cascade(CascadeConfig(T_bath=1.4, stages=(default_stage(material=VA), bad)))


def test_diagnostic_scan_reports_the_solver_root():
    stage = default_stage()
    scan = diagnostic_scan(stage, 0.3)
    assert scan.temperatures.size == scan.net_cooling.size
    sol = equilibrium_temperature(stage, 0.3)
    stable_roots = [r for r, ok in zip(scan.roots, scan.stable) if ok]
    assert any(abs(r - sol.T_N) < 1e-4 for r in stable_roots)


def test_stage_config_validation():
    with pytest.raises(ValueError):
        default_stage(external_load=-1.0)
    with pytest.raises(ValueError):
        default_stage(T_min=0.0)
    with pytest.raises(ValueError):
        default_stage(lead_temperature_rule="bath")
