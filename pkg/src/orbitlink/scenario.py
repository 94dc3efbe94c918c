"""Scenario parameter bundles shared by the analytic and simulation engines.

Everything here is linear and SI except distances (km) and angles (rad).
Unit conversion from dB, dBW, dBi, nm and mW happens once, in
:mod:`orbitlink.config`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .constellation import ConstellationConfig
from .errors import DomainError, ValidationError
from .fading import PointingParams, SeriesControl, SrFadingParams
from .geometry import GeometryConstants, earth_blockage_bounds

# relative slack when comparing l_max against the Earth-blockage ceiling
_CEILING_SLACK = 1e-12

ANALYTIC = "analytic"
MONTE_CARLO = "monte-carlo"


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class LinkBudget:
    """Free-space link budget of one hop.

    ``tx_power`` and ``noise_power`` in W, ``antenna_gain``, ``attenuation``
    and ``snr_threshold`` linear, ``wavelength`` in m, ``l_max`` in km.
    """

    tx_power: float
    antenna_gain: float
    wavelength: float
    attenuation: float
    noise_power: float
    l_max: float
    snr_threshold: float

    def __post_init__(self):
        for name in ("tx_power", "antenna_gain", "wavelength", "noise_power", "l_max", "snr_threshold"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0 < self.attenuation <= 1:
            raise DomainError(f"attenuation must lie in (0, 1], got {self.attenuation}")

    @property
    def fade_scale(self) -> float:
        """Required fade per squared km of distance: gamma*sigma^2/(rho*G*zeta)*(4*pi*1e3/lambda)^2."""
        k = 4.0 * math.pi * 1e3 / self.wavelength
        return self.snr_threshold * self.noise_power / (
            self.tx_power * self.antenna_gain * self.attenuation
        ) * k * k

    def required_fade(self, distance_km):
        """Smallest fade power that lifts the SNR above threshold at ``distance_km``."""
        return self.fade_scale * distance_km * distance_km

    def received_power(self, distance_km, fade):
        loss = self.wavelength / (4.0 * math.pi * distance_km * 1e3)
        return self.tx_power * self.antenna_gain * loss * loss * self.attenuation * fade

    def snr(self, distance_km, fade):
        return self.received_power(distance_km, fade) / self.noise_power

    def distance_for_fade(self, fade: float) -> float:
        """Distance (km) at which the required fade equals ``fade``."""
        return math.sqrt(fade / self.fade_scale)


@dataclass(frozen=True)
class QuadratureControl:
    rel_tolerance: float = 1e-10
    abs_tolerance: float = 1e-12
    max_subdivisions: int = 20000

    def __post_init__(self):
        if not (self.rel_tolerance > 0 and self.abs_tolerance > 0) or self.max_subdivisions < 8:
            raise DomainError(f"invalid quadrature control {self}")

    def halved(self) -> "QuadratureControl":
        return replace(self, rel_tolerance=self.rel_tolerance / 2, abs_tolerance=self.abs_tolerance / 2)


# Reference link parameters. The SNR thresholds have no tabulated source; the
# defaults place the relayed link near full coverage at 18 dBW (see README).
DEFAULT_NOISE_W = 5e-13
DEFAULT_GAIN_DBI = 41.7
DEFAULT_WAVELENGTH_M = 1550e-9
DEFAULT_SNR_THRESHOLD_IL_DB = -90.0
DEFAULT_SNR_THRESHOLD_LG_DB = -95.0


def default_ill() -> LinkBudget:
    return LinkBudget(
        tx_power=db_to_linear(15.0),
        antenna_gain=db_to_linear(DEFAULT_GAIN_DBI),
        wavelength=DEFAULT_WAVELENGTH_M,
        attenuation=db_to_linear(-2.0),
        noise_power=DEFAULT_NOISE_W,
        l_max=3000.0,
        snr_threshold=db_to_linear(DEFAULT_SNR_THRESHOLD_IL_DB),
    )


def default_lgl() -> LinkBudget:
    return LinkBudget(
        tx_power=db_to_linear(50.0),
        antenna_gain=db_to_linear(DEFAULT_GAIN_DBI),
        wavelength=DEFAULT_WAVELENGTH_M,
        attenuation=1.0,
        noise_power=DEFAULT_NOISE_W,
        l_max=35000.0,
        snr_threshold=db_to_linear(DEFAULT_SNR_THRESHOLD_LG_DB),
    )


@dataclass(frozen=True)
class ScenarioConfig:
    constellation: ConstellationConfig = field(default_factory=ConstellationConfig)
    big_theta: float = math.pi / 4
    ill: LinkBudget = field(default_factory=default_ill)
    sr: SrFadingParams = field(default_factory=SrFadingParams)
    lgl: LinkBudget = field(default_factory=default_lgl)
    pointing: PointingParams = field(default_factory=PointingParams)
    quadrature: QuadratureControl = field(default_factory=QuadratureControl)
    series: SeriesControl = field(default_factory=SeriesControl)

    def __post_init__(self):
        if not 0.0 <= self.big_theta <= math.pi:
            raise ValidationError("theta_deg", f"GEO central angle {self.big_theta} rad outside [0, pi]")
        g = self.geometry
        il_ceiling, lg_ceiling = earth_blockage_bounds(g)
        if self.ill.l_max > il_ceiling * (1 + _CEILING_SLACK):
            raise ValidationError(
                "l_il_max_km",
                f"{self.ill.l_max} km exceeds the Earth-blockage ceiling {il_ceiling:.3f} km",
            )
        if self.ill.l_max < g.leo_altitude * (1 - _CEILING_SLACK):
            raise ValidationError(
                "l_il_max_km", f"{self.ill.l_max} km is below the LEO altitude {g.leo_altitude} km"
            )
        if self.lgl.l_max > lg_ceiling * (1 + _CEILING_SLACK):
            raise ValidationError(
                "l_lg_max_km",
                f"{self.lgl.l_max} km exceeds the Earth-blockage ceiling {lg_ceiling:.3f} km",
            )

    @property
    def geometry(self) -> GeometryConstants:
        return self.constellation.geometry

    @property
    def n_leo(self) -> int:
        return self.constellation.n_leo

    def replace(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes)

    def with_n_leo(self, n: int) -> "ScenarioConfig":
        return replace(self, constellation=replace(self.constellation, n_leo=n))

    def with_leo_altitude(self, h_km: float) -> "ScenarioConfig":
        g = replace(self.geometry, leo_radius=self.geometry.earth_radius + h_km)
        return replace(self, constellation=replace(self.constellation, geometry=g))

    def with_ill(self, **changes) -> "ScenarioConfig":
        return replace(self, ill=replace(self.ill, **changes))

    def with_lgl(self, **changes) -> "ScenarioConfig":
        return replace(self, lgl=replace(self.lgl, **changes))


@dataclass(frozen=True)
class ProbabilityEstimate:
    value: float
    provenance: str = ANALYTIC
    half_width_95: float | None = None
    n_trials: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise DomainError(f"probability {self.value} outside [0, 1]")
        if self.provenance not in (ANALYTIC, MONTE_CARLO):
            raise DomainError(f"unknown provenance {self.provenance!r}")

    @classmethod
    def from_counts(cls, successes: int, n_trials: int) -> "ProbabilityEstimate":
        p = successes / n_trials
        return cls(p, MONTE_CARLO, 1.96 * math.sqrt(p * (1.0 - p) / n_trials), n_trials)

    @property
    def sigma(self) -> float:
        """Binomial standard error (zero for analytic values)."""
        if self.n_trials is None:
            return 0.0
        return math.sqrt(self.value * (1.0 - self.value) / self.n_trials)

    def __float__(self) -> float:
        return self.value
