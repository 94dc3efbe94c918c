import json
import math

import pytest

from orbitlink.config import (
    SCHEMA,
    build_scenario,
    defaults,
    parse_config,
    parse_config_text,
    scenario_to_dict,
    scenario_with,
)
from orbitlink.errors import ParseError, ValidationError
from orbitlink.scenario import ScenarioConfig, db_to_linear


def write(tmp_path, doc):
    p = tmp_path / "scenario.json"
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return p


def test_empty_document_gives_table_defaults(tmp_path):
    s = parse_config(write(tmp_path, {}))
    assert s == ScenarioConfig()
    assert s.n_leo == 1000 and s.big_theta == pytest.approx(math.pi / 4)
    assert s.ill.noise_power == 5e-13 and s.lgl.attenuation == 1.0
    assert s.ill.attenuation == pytest.approx(10 ** -0.2)
    assert s.pointing.sigma_d == 0.015 and s.ill.wavelength == 1550e-9


def test_units_are_converted_at_parse_time():
    s = parse_config_text(
        json.dumps(
            {
                "geometry": {"theta_deg": 30, "leo_altitude_km": 1500},
                "ill": {"tx_power_il_dbw": 20, "wavelength_il_nm": 1310, "noise_power_leo_mw": 1e-9},
                "lgl": {"varsigma_mrad": 10, "snr_threshold_lg_db": -80},
            }
        )
    )
    assert s.big_theta == pytest.approx(math.pi / 6)
    assert s.geometry.leo_radius == 7871.0
    assert s.ill.tx_power == pytest.approx(100.0)
    assert s.ill.wavelength == pytest.approx(1.31e-6)
    assert s.ill.noise_power == pytest.approx(1e-12)
    assert s.pointing.sigma_d == pytest.approx(0.01)
    assert s.lgl.snr_threshold == pytest.approx(db_to_linear(-80))


def test_top_level_keys_are_accepted():
    assert parse_config_text('{"theta_deg": 45}').big_theta == pytest.approx(math.pi / 4)
    assert parse_config_text('{"n_leo": 12}').n_leo == 12


def test_ill_ceiling_beyond_blockage_is_rejected():
    with pytest.raises(ValidationError) as e:
        parse_config_text('{"l_il_max_km": 10000}')
    assert e.value.key == "l_il_max_km" and "ceiling" in str(e.value)


def test_lgl_ceiling_beyond_blockage_is_rejected():
    with pytest.raises(ValidationError) as e:
        parse_config_text('{"lgl": {"l_lg_max_km": 80000}}')
    assert e.value.key == "l_lg_max_km"


@pytest.mark.parametrize(
    "doc, key",
    [
        ('{"colour": 1}', "colour"),
        ('{"ill": {"theta_deg": 4}}', "ill.theta_deg"),
        ('{"n_leo": 1.5}', "n_leo"),
        ('{"n_leo": -3}', "n_leo"),
        ('{"n_leo": true}', "n_leo"),
        ('{"theta_deg": "north"}', "theta_deg"),
        ('{"theta_deg": 200}', "theta_deg"),
        ('{"attenuation_il_db": 3}', "attenuation_il_db"),
        ('{"varsigma_mrad": 0}', "varsigma_mrad"),
        ('{"sr_omega": -1}', "sr_omega"),
        ('{"geometry": 5}', "geometry"),
        ('{"theta_deg": 4, "geometry": {"theta_deg": 5}}', "theta_deg"),
        ('{"leo_altitude_km": 900, "leo_radius_km": 7000}', "leo_altitude_km"),
        ('{"leo_radius_km": 6000}', "leo_radius_km"),
        ('{"l_il_max_km": 500}', "l_il_max_km"),
        ('{"max_subdivisions": 4}', "max_subdivisions"),
    ],
)
def test_validation_errors_name_the_key(doc, key):
    with pytest.raises(ValidationError) as e:
        parse_config_text(doc)
    assert e.value.key == key


@pytest.mark.parametrize("text", ["{", "[1, 2]", "not json", ""])
def test_malformed_documents(text):
    with pytest.raises(ParseError):
        parse_config_text(text)


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        parse_config(tmp_path / "absent.json")


def test_round_trip_through_document():
    s = scenario_with(ScenarioConfig(), n_leo=77, theta_deg=33.0, tx_power_il_dbw=7.5)
    back = parse_config_text(json.dumps(scenario_to_dict(s)))
    assert back.n_leo == 77
    assert back.big_theta == pytest.approx(s.big_theta, rel=1e-14)
    assert back.ill.tx_power == pytest.approx(s.ill.tx_power, rel=1e-12)
    assert back.lgl.l_max == s.lgl.l_max
    assert back.pointing.sigma_d == pytest.approx(s.pointing.sigma_d, rel=1e-14)
    assert back.sr == s.sr and back.series == s.series and back.quadrature == s.quadrature


def test_schema_keys_are_unique_and_have_defaults():
    keys = [k for sec in SCHEMA.values() for k in sec]
    assert len(keys) == len(set(keys))
    assert set(defaults()) == set(keys)


def test_scenario_with_applies_overrides_together():
    # altitude and ceiling change at once; order of keywords is irrelevant
    s = scenario_with(ScenarioConfig(), l_il_max_km=2000.0, leo_altitude_km=600.0)
    assert s.geometry.leo_radius == 6971.0 and s.ill.l_max == 2000.0
    with pytest.raises(ValidationError):
        scenario_with(ScenarioConfig(), leo_altitude_km=600.0)  # 3000 km now exceeds the ceiling
    with pytest.raises(ValidationError):
        scenario_with(ScenarioConfig(), wavelength_il_nm=1000.0)


def test_build_scenario_rejects_unknown_keys():
    with pytest.raises(ValidationError):
        build_scenario({"speed_of_light": 3e8})
