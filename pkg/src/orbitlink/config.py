"""JSON scenario files.

A document is an object with optional sections ``geometry``,
``constellation``, ``ill``, ``lgl`` and ``quadrature``. Keys carry their
unit in the name and are converted to the linear/SI/radian values used by
:class:`ScenarioConfig` here and nowhere else. Absent keys take their
defaults. Since every key name is unique across sections, a key may also be
given at the top level of the document.
"""
from __future__ import annotations

import json
import math
from dataclasses import replace
from pathlib import Path

from .constellation import ConstellationConfig
from .errors import DomainError, ParseError, ValidationError
from .fading import PointingParams, SeriesControl, SrFadingParams
from .geometry import GeometryConstants
from .scenario import (
    DEFAULT_GAIN_DBI,
    DEFAULT_SNR_THRESHOLD_IL_DB,
    DEFAULT_SNR_THRESHOLD_LG_DB,
    LinkBudget,
    QuadratureControl,
    ScenarioConfig,
    db_to_linear,
)

SCHEMA: dict[str, dict[str, float | int | None]] = {
    "geometry": {
        "earth_radius_km": 6371.0,
        "leo_radius_km": 7371.0,
        "leo_altitude_km": None,  # alternative to leo_radius_km
        "geo_radius_km": 35860.0,
        "theta_deg": 45.0,
    },
    "constellation": {
        "n_leo": 1000,
    },
    "ill": {
        "tx_power_il_dbw": 15.0,
        "gain_il_dbi": DEFAULT_GAIN_DBI,
        "wavelength_il_nm": 1550.0,
        "attenuation_il_db": -2.0,
        "noise_power_leo_mw": 5e-10,
        "l_il_max_km": 3000.0,
        "snr_threshold_il_db": DEFAULT_SNR_THRESHOLD_IL_DB,
        "sr_m": 19.4,
        "sr_b0": 0.158,
        "sr_omega": 1.29,
    },
    "lgl": {
        "tx_power_lg_dbw": 50.0,
        "gain_lg_dbi": DEFAULT_GAIN_DBI,
        "wavelength_lg_nm": 1550.0,
        "attenuation_lg_db": 0.0,
        "noise_power_geo_mw": 5e-10,
        "l_lg_max_km": 35000.0,
        "snr_threshold_lg_db": DEFAULT_SNR_THRESHOLD_LG_DB,
        "eta_s": 1.00526,
        "a0": 3.2120,
        "varsigma_mrad": 15.0,
    },
    "quadrature": {
        "rel_tolerance": 1e-10,
        "abs_tolerance": 1e-12,
        "max_subdivisions": 20000,
        "sr_max_terms": 200,
        "sr_term_tolerance": 1e-12,
    },
}

_INTEGER_KEYS = {"n_leo", "max_subdivisions", "sr_max_terms"}
_SECTION_OF = {key: section for section, keys in SCHEMA.items() for key in keys}


def defaults() -> dict[str, float | int | None]:
    """Flat mapping of every key to its default."""
    return {k: v for keys in SCHEMA.values() for k, v in keys.items()}


def _check_number(key: str, value):
    # bool is an int subclass; reject it explicitly
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(key, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ValidationError(key, f"must be finite, got {value!r}")
    if key in _INTEGER_KEYS:
        if int(value) != value:
            raise ValidationError(key, f"expected an integer, got {value!r}")
        return int(value)
    return float(value)


def flatten(doc: dict) -> dict[str, float | int]:
    """Validate key names and types of a parsed document and flatten it."""
    if not isinstance(doc, dict):
        raise ParseError("configuration must be a JSON object")
    flat: dict[str, float | int] = {}

    def put(key, value):
        if key not in _SECTION_OF:
            raise ValidationError(key, "unknown key")
        if key in flat:
            raise ValidationError(key, "given more than once")
        flat[key] = _check_number(key, value)

    for name, body in doc.items():
        if name in SCHEMA:
            if not isinstance(body, dict):
                raise ValidationError(name, "section must be a JSON object")
            for key, value in body.items():
                if key not in SCHEMA[name]:
                    raise ValidationError(f"{name}.{key}", "unknown key")
                put(key, value)
        else:
            put(name, body)
    return flat


def _positive(flat, key):
    v = flat[key]
    if not v > 0:
        raise ValidationError(key, f"must be positive, got {v}")
    return v


def build_scenario(values: dict[str, float | int]) -> ScenarioConfig:
    """Scenario from a flat mapping of (possibly partial) unit-named keys."""
    flat = {k: v for k, v in defaults().items() if v is not None}
    unknown = set(values) - set(_SECTION_OF)
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown key")
    flat.update({k: _check_number(k, v) for k, v in values.items()})

    if "leo_altitude_km" in values:
        if "leo_radius_km" in values:
            raise ValidationError("leo_altitude_km", "give either leo_altitude_km or leo_radius_km")
        flat["leo_radius_km"] = flat["earth_radius_km"] + _positive(flat, "leo_altitude_km")
    for key in ("earth_radius_km", "leo_radius_km", "geo_radius_km"):
        _positive(flat, key)
    if not flat["earth_radius_km"] < flat["leo_radius_km"] <= flat["geo_radius_km"]:
        raise ValidationError("leo_radius_km", "radii must satisfy earth < leo <= geo")
    if flat["n_leo"] < 0:
        raise ValidationError("n_leo", f"must be non-negative, got {flat['n_leo']}")
    theta = flat["theta_deg"]
    if not 0.0 <= theta <= 180.0:
        raise ValidationError("theta_deg", f"must lie in [0, 180], got {theta}")
    for hop in ("il", "lg"):
        key = f"attenuation_{hop}_db"
        if flat[key] > 0:
            raise ValidationError(key, f"attenuation is a loss and must be <= 0 dB, got {flat[key]}")
    for key in (
        "wavelength_il_nm",
        "wavelength_lg_nm",
        "noise_power_leo_mw",
        "noise_power_geo_mw",
        "l_il_max_km",
        "l_lg_max_km",
        "sr_m",
        "sr_b0",
        "eta_s",
        "a0",
        "varsigma_mrad",
        "rel_tolerance",
        "abs_tolerance",
        "sr_term_tolerance",
    ):
        _positive(flat, key)
    if flat["sr_omega"] < 0:
        raise ValidationError("sr_omega", "must be non-negative")
    if flat["varsigma_mrad"] >= 1000.0:
        raise ValidationError("varsigma_mrad", "must be below 1000 mrad")
    if flat["max_subdivisions"] < 8:
        raise ValidationError("max_subdivisions", "must be at least 8")
    if flat["sr_max_terms"] < 1:
        raise ValidationError("sr_max_terms", "must be at least 1")

    geometry = GeometryConstants(
        flat["earth_radius_km"], flat["leo_radius_km"], flat["geo_radius_km"]
    )
    ill = LinkBudget(
        tx_power=db_to_linear(flat["tx_power_il_dbw"]),
        antenna_gain=db_to_linear(flat["gain_il_dbi"]),
        wavelength=flat["wavelength_il_nm"] / 1e9,
        attenuation=db_to_linear(flat["attenuation_il_db"]),
        noise_power=flat["noise_power_leo_mw"] / 1e3,
        l_max=flat["l_il_max_km"],
        snr_threshold=db_to_linear(flat["snr_threshold_il_db"]),
    )
    lgl = LinkBudget(
        tx_power=db_to_linear(flat["tx_power_lg_dbw"]),
        antenna_gain=db_to_linear(flat["gain_lg_dbi"]),
        wavelength=flat["wavelength_lg_nm"] / 1e9,
        attenuation=db_to_linear(flat["attenuation_lg_db"]),
        noise_power=flat["noise_power_geo_mw"] / 1e3,
        l_max=flat["l_lg_max_km"],
        snr_threshold=db_to_linear(flat["snr_threshold_lg_db"]),
    )
    try:
        return ScenarioConfig(
            constellation=ConstellationConfig(flat["n_leo"], geometry),
            big_theta=math.radians(theta),
            ill=ill,
            sr=SrFadingParams(flat["sr_m"], flat["sr_b0"], flat["sr_omega"]),
            lgl=lgl,
            pointing=PointingParams(flat["eta_s"], flat["a0"], flat["varsigma_mrad"] / 1e3),
            quadrature=QuadratureControl(
                flat["rel_tolerance"], flat["abs_tolerance"], flat["max_subdivisions"]
            ),
            series=SeriesControl(flat["sr_max_terms"], flat["sr_term_tolerance"]),
        )
    except DomainError as exc:  # pragma: no cover - guarded by the checks above
        raise ValidationError("scenario", str(exc)) from exc


def parse_config_text(text: str) -> ScenarioConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return build_scenario(flatten(doc))


def parse_config(path) -> ScenarioConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise ParseError(f"configuration file not found: {path}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"configuration file is not UTF-8 text: {path}") from exc
    return parse_config_text(text)


def scenario_with(base: ScenarioConfig, **values) -> ScenarioConfig:
    """Copy of ``base`` with unit-named overrides, e.g. ``theta_deg=30``.

    Only the keys used by sweeps are supported. All overrides are applied
    before the scenario invariants are checked, so their order is irrelevant.
    """
    g, n_leo, theta = base.geometry, base.n_leo, base.big_theta
    ill, lgl = {}, {}
    for key, v in values.items():
        v = _check_number(key, v) if key in _SECTION_OF else v
        if key == "n_leo":
            if v < 0:
                raise ValidationError(key, f"must be non-negative, got {v}")
            n_leo = v
        elif key == "leo_altitude_km":
            if not v > 0:
                raise ValidationError(key, f"must be positive, got {v}")
            if g.earth_radius + v > g.geo_radius:
                raise ValidationError(key, "LEO shell would lie above the GEO orbit")
            g = replace(g, leo_radius=g.earth_radius + v)
        elif key == "theta_deg":
            if not 0.0 <= v <= 180.0:
                raise ValidationError(key, f"must lie in [0, 180], got {v}")
            theta = math.radians(v)
        elif key == "tx_power_il_dbw":
            ill["tx_power"] = db_to_linear(v)
        elif key == "tx_power_lg_dbw":
            lgl["tx_power"] = db_to_linear(v)
        elif key in ("l_il_max_km", "l_lg_max_km"):
            if not v > 0:
                raise ValidationError(key, f"must be positive, got {v}")
            (ill if key == "l_il_max_km" else lgl)["l_max"] = v
        else:
            raise ValidationError(key, "not a sweepable key")
    return replace(
        base,
        constellation=ConstellationConfig(n_leo, g),
        big_theta=theta,
        ill=replace(base.ill, **ill),
        lgl=replace(base.lgl, **lgl),
    )


def scenario_to_dict(s: ScenarioConfig) -> dict:
    """Sectioned document that parses back to ``s`` (up to float rounding)."""
    g = s.geometry

    def db(x):
        return 10.0 * math.log10(x)

    return {
        "geometry": {
            "earth_radius_km": g.earth_radius,
            "leo_radius_km": g.leo_radius,
            "geo_radius_km": g.geo_radius,
            "theta_deg": math.degrees(s.big_theta),
        },
        "constellation": {"n_leo": s.n_leo},
        "ill": {
            "tx_power_il_dbw": db(s.ill.tx_power),
            "gain_il_dbi": db(s.ill.antenna_gain),
            "wavelength_il_nm": s.ill.wavelength * 1e9,
            "attenuation_il_db": db(s.ill.attenuation),
            "noise_power_leo_mw": s.ill.noise_power * 1e3,
            "l_il_max_km": s.ill.l_max,
            "snr_threshold_il_db": db(s.ill.snr_threshold),
            "sr_m": s.sr.m,
            "sr_b0": s.sr.b0,
            "sr_omega": s.sr.omega,
        },
        "lgl": {
            "tx_power_lg_dbw": db(s.lgl.tx_power),
            "gain_lg_dbi": db(s.lgl.antenna_gain),
            "wavelength_lg_nm": s.lgl.wavelength * 1e9,
            "attenuation_lg_db": db(s.lgl.attenuation),
            "noise_power_geo_mw": s.lgl.noise_power * 1e3,
            "l_lg_max_km": s.lgl.l_max,
            "snr_threshold_lg_db": db(s.lgl.snr_threshold),
            "eta_s": s.pointing.eta_s,
            "a0": s.pointing.a0,
            "varsigma_mrad": s.pointing.sigma_d * 1e3,
        },
        "quadrature": {
            "rel_tolerance": s.quadrature.rel_tolerance,
            "abs_tolerance": s.quadrature.abs_tolerance,
            "max_subdivisions": s.quadrature.max_subdivisions,
            "sr_max_terms": s.series.max_terms,
            "sr_term_tolerance": s.series.term_tolerance,
        },
    }
