import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import eq7, k1_oracle
from uav_coexist.network import (
    ConfigError,
    DensityConfig,
    RadioParams,
    Soma,
    Tdma,
    db_to_linear,
    dbm_to_watts,
    effective_densities,
    effective_density,
    invert_effective_density,
    load_config,
    raw_radar_density,
    scenario_from_dict,
    scenario_to_dict,
)


def test_table3_defaults_linear():
    p = RadioParams()
    assert p.p_tx == pytest.approx(0.1)
    assert (p.g_t, p.g_r, p.g_p) == pytest.approx((10.0, 10.0, 10.0))
    assert p.g_rI == pytest.approx(0.1)
    assert p.sigma_bar == pytest.approx(1000.0)
    assert p.c == 299_792_458.0


def test_k1_and_effective_area():
    p = RadioParams()
    assert p.k1 == pytest.approx(k1_oracle(), rel=1e-14)
    assert p.effective_area == pytest.approx(10.0 * 299_792_458.0**2 / (4 * math.pi * 35e9**2), rel=1e-14)


def test_unit_conversions():
    assert dbm_to_watts(20.0) == pytest.approx(0.1)
    assert db_to_linear(-10.0) == pytest.approx(0.1)


@pytest.mark.parametrize("kw", [{"p_tx": 0.0}, {"g_r": -1.0}, {"alpha_I": 2.0}, {"n0": -1e-3}, {"f_c": math.inf}])
def test_radio_params_invalid(kw):
    with pytest.raises(ConfigError):
        RadioParams(**kw)


def test_effective_density_example():
    dens = DensityConfig(lambda_d_raw=0.01, r0=5.0)
    eff = effective_densities(dens, Soma())
    assert eff.lambda_d == pytest.approx(0.0069268, rel=1e-4)
    assert eff.lambda_d == pytest.approx(eq7(0.01, 5.0), rel=1e-14)


def test_small_density_limit():
    assert effective_density(1e-9, 5.0) / 1e-9 == pytest.approx(1.0, abs=1e-6)


def test_active_radar_density_per_scheme():
    dens = DensityConfig(lambda_r_raw=0.1, delta=0.1)
    assert dens.active_radar_density(Soma()) == pytest.approx(0.01)
    assert dens.active_radar_density(Tdma(0.5)) == pytest.approx(0.02)
    assert effective_densities(dens, Tdma(0.5)).lambda_r_active_raw == pytest.approx(0.02)


def test_tdma_overfull_duty_rejected():
    dens = DensityConfig(delta=0.6)
    with pytest.raises(ConfigError):
        dens.active_radar_density(Tdma(0.5))
    with pytest.raises(ConfigError):
        DensityConfig().active_radar_density(Tdma(1.0))


def test_invert_examples():
    assert invert_effective_density(0.0069268, 5.0) == pytest.approx(0.01, rel=1e-4)
    assert invert_effective_density(0.0, 7.0) == 0.0
    with pytest.raises(ValueError):
        invert_effective_density(1 / (math.pi * 25), 5.0)


@given(st.floats(1e-6, 0.99), st.floats(0.5, 50.0))
def test_round_trip(packing, r0):
    parent = packing / (math.pi * r0 * r0)
    back = invert_effective_density(effective_density(parent, r0), r0)
    assert back == pytest.approx(parent, rel=1e-12)


@given(st.floats(1e-4, 20.0), st.floats(0.5, 50.0))
def test_packing_bound_and_monotonicity(packing, r0):
    # packing = parent pi r0^2, kept where exp(-packing) is resolvable
    parent = packing / (math.pi * r0 * r0)
    lam = effective_density(parent, r0)
    assert lam * math.pi * r0 * r0 < 1.0
    assert effective_density(parent * 1.1, r0) > lam
    assert effective_density(parent, r0 * 1.1) < lam


def test_raw_radar_density_inverts_active():
    dens = DensityConfig(lambda_r_raw=0.07, delta=0.2)
    for scheme in (Soma(), Tdma(0.3)):
        assert raw_radar_density(dens.active_radar_density(scheme), dens.delta, scheme) == pytest.approx(0.07)


def test_default_config():
    sc = load_config(None)
    assert sc.params == RadioParams()
    assert sc.dens == DensityConfig()
    assert sc.scheme == Soma(0.5)


def test_config_round_trip(tmp_path):
    data = {"p_tx_dbm": 23.0, "lambda_d_raw": 0.002, "scheme": {"tdma": {"tau": 0.25}}}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(data))
    sc = load_config(path)
    assert sc.scheme == Tdma(0.25)
    assert sc.params.p_tx == pytest.approx(dbm_to_watts(23.0))
    again = scenario_from_dict(scenario_to_dict(sc.params, sc.dens, sc.scheme))
    assert again.params.p_tx == pytest.approx(sc.params.p_tx, rel=1e-12)
    assert again.dens == sc.dens
    assert again.scheme == sc.scheme


@pytest.mark.parametrize(
    "text, line",
    [
        ('{\n  "alpha": 2.0,\n  "bogus": 1\n}', 3),
        ('{\n  "r0_m": 5,\n  "alpha_i": 1.5\n}', 3),
        ('{\n  "lambda_d_raw": "lots"\n}', 2),
        ('{\n  "duty_cycle": 0.6,\n  "scheme": {"tdma": {"tau": 0.5}}\n}', 3),
        ('{\n  "alpha": 2.0,\n  "r0_m": 5\n  "x": 1\n}', 4),
    ],
)
def test_config_errors_report_line(tmp_path, text, line):
    path = tmp_path / "bad.json"
    path.write_text(text)
    with pytest.raises(ConfigError) as info:
        load_config(path)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_bad_scheme_object():
    with pytest.raises(ConfigError):
        scenario_from_dict({"scheme": {"fdma": {}}})
    with pytest.raises(ConfigError):
        scenario_from_dict({"scheme": {"soma": {"phi": 1.5}}})
