"""Config file parsing and resolution."""
import math

import pytest

from cryostage.config import DEFAULT_TOML, load_config
from cryostage.errors import ConfigError


def write(tmp_path, text):
    path = tmp_path / "cfg.toml"
    path.write_text(text)
    return path


def test_builtin_defaults_resolve():
    cfg = load_config(None)
    assert cfg.material.name == "Al"
    assert cfg.stage.junction.R_T_area == 100.0
    assert cfg.stage.junction.gamma_dynes == 1e-3
    assert cfg.defaults.r_ptb == 22.0
    assert cfg.defaults.r_total_constricted == 220.0
    assert cfg.defaults.a_ch == 30.0
    assert cfg.stage_T0 == 0.3
    assert len(cfg.cascade.stages) == 2
    assert cfg.bte.geometry.width == pytest.approx(50e-9)
    assert cfg.bte.geometry.height == pytest.approx(5e-9)
    assert math.isinf(cfg.bte.medium.mfp_bulk)
    assert len(cfg.config_hash) == 64


def test_default_toml_matches_builtin(tmp_path):
    # the shipped example config resolves identically to the embedded defaults
    path = write(tmp_path, DEFAULT_TOML)
    cfg = load_config(path)
    builtin = load_config(None)
    assert cfg.config_hash == builtin.config_hash
    assert cfg.stage == builtin.stage


def test_material_override_custom_tc(tmp_path):
    cfg = load_config(write(tmp_path, '[material]\nname = "Nb"\nT_c_K = 9.2\n'))
    assert cfg.material.name == "Nb"
    assert cfg.material.T_c == 9.2
    assert cfg.material.Delta == pytest.approx(1.764 * 1.380649e-23 * 9.2)


def test_material_explicit_gap(tmp_path):
    cfg = load_config(
        write(tmp_path, '[material]\nname = "X"\nT_c_K = 1.0\ngap_ueV = 200.0\n')
    )
    assert cfg.material.Delta == pytest.approx(200e-6 * 1.602176634e-19)


def test_unknown_preset_is_config_error(tmp_path):
    with pytest.raises(ConfigError, match="material.name"):
        load_config(write(tmp_path, '[material]\nname = "Nb"\n'))


def test_channel_declaration_by_regime(tmp_path):
    text = """
[junction]
area_um2 = 50.0

[[stage.channels]]
kind = "ptb"
r_k4cm2_W = 22.0

[[stage.channels]]
kind = "lead"
r_k4cm2_W = 40.0

[[stage.channels]]
kind = "quantum"
quanta = 7
transmission = 0.5

[[stage.channels]]
kind = "fitted"
alpha = 3.0e8
n = 3.1
"""
    cfg = load_config(write(tmp_path, text))
    labels = [c.label for c in cfg.stage.phonon.channels]
    assert labels == ["PTB", "lead", "quantum", "fitted"]
    # ptb alpha uses the junction area: 22/(50 um^2 * 1e-8)
    assert cfg.stage.phonon.channels[0].alpha == pytest.approx(4.4e7)
    assert cfg.stage.phonon.channels[3].n == 3.1


def test_channel_errors_name_the_entry(tmp_path):
    with pytest.raises(ConfigError, match=r"stage.channels\[0\].kind"):
        load_config(write(tmp_path, '[[stage.channels]]\nkind = "wormhole"\n'))
    with pytest.raises(ConfigError, match=r"stage.channels\[0\].r_k4cm2_W"):
        load_config(write(tmp_path, '[[stage.channels]]\nkind = "ptb"\n'))


def test_type_errors_name_the_key(tmp_path):
    with pytest.raises(ConfigError, match="junction.area_um2"):
        load_config(write(tmp_path, '[junction]\narea_um2 = "big"\n'))


def test_cascade_scenarios_and_materials(tmp_path):
    text = """
[cascade]
bath_K = 1.1
[[cascade.stages]]
material = "V"
scenario = "quantum_limit"
[[cascade.stages]]
scenario = "ptb_only"
"""
    cfg = load_config(write(tmp_path, text))
    assert cfg.cascade.T_bath == 1.1
    assert cfg.cascade.stages[0].material.name == "V"
    assert cfg.cascade.stages[0].phonon.channels[0].label == "quantum"
    assert cfg.cascade.stages[1].material.name == "Al"
    with pytest.raises(ConfigError, match=r"cascade.stages\[0\].scenario"):
        load_config(write(tmp_path, '[[cascade.stages]]\nscenario = "maximal"\n'))


def test_sweep_grids_must_increase(tmp_path):
    with pytest.raises(ConfigError, match="strictly increasing"):
        load_config(write(tmp_path, "[sweep]\nt0_grid_K = [0.3, 0.2]\n"))


def test_andreev_area_enables_leakage(tmp_path):
    cfg = load_config(write(tmp_path, "[junction]\nandreev_channel_area_nm2 = 30.0\n"))
    assert cfg.stage.junction.A_ch == 30.0


def test_bte_overrides(tmp_path):
    text = """
[bte]
length_nm = 1000.0
specularity = 0.0
mfp_bulk_nm = 250.0
n_x = 32
"""
    cfg = load_config(write(tmp_path, text))
    assert cfg.bte.geometry.length == pytest.approx(1e-6)
    assert cfg.bte.medium.mfp_bulk == pytest.approx(250e-9)
    assert cfg.bte.grid.n_x == 32
