"""End-to-end composition: transport fit feeding a stage solve."""
import numpy as np
import pytest

from cryostage.bte import (
    DomGrid,
    GrayMediumModel,
    WireGeometry,
    conductance_curve,
    constriction_wire_count,
    fit_power_law,
)
from cryostage.constants import builtin_material
from cryostage.junction import JunctionParams
from cryostage.phonons import (
    CompositeChannel,
    PowerLawChannel,
    channel_from_boundary_resistance,
)
from cryostage.stages import StageConfig, equilibrium_temperature

pytestmark = pytest.mark.filterwarnings("ignore::cryostage.errors.ValidityWarning")


def test_fitted_constriction_channel_drives_a_stage():
    # Ballistic specular wires: cheap to solve, exactly cubic conductance.
    geom = WireGeometry(length=500e-9, width=50e-9, height=5e-9, specularity=1.0)
    medium = GrayMediumModel.from_velocity(6000.0)
    curve = conductance_curve(
        geom, medium, np.geomspace(0.05, 0.5, 5), DomGrid(n_x=16, n_y=4)
    )
    fit = fit_power_law(curve)
    assert fit.channel.n == pytest.approx(4.0, abs=1e-6)

    # Parallel wires fill one third of the junction area; conductances add.
    wires = constriction_wire_count(100.0, geom)
    assert wires == 133_333
    per_stage = PowerLawChannel(
        alpha=fit.channel.alpha / wires, n=fit.channel.n, label="constriction"
    )
    stack = CompositeChannel(
        [channel_from_boundary_resistance(22.0, 100.0), per_stage]
    )

    stage = StageConfig(
        junction=JunctionParams(R_T_area=100.0, area=100.0, gamma_dynes=1e-3),
        material=builtin_material("Al"),
        phonon=stack,
    )
    sol = equilibrium_temperature(stage, 0.3)
    assert 0.0 < sol.T_N < 0.3
    # the wire bundle leaks less than the bare boundary channel, so the
    # constricted stage must cool at least as well
    bare = equilibrium_temperature(
        StageConfig(
            junction=stage.junction,
            material=stage.material,
            phonon=CompositeChannel([channel_from_boundary_resistance(22.0, 100.0)]),
        ),
        0.3,
    )
    assert sol.relative_cooling >= bare.relative_cooling - 1e-9
