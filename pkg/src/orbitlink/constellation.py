"""Binomial point process constellation and relay geometry."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateGeometry, DomainError
from .geometry import (
    ARCCOS_GUARD,
    GeometryConstants,
    SphericalPoint,
    chord,
    clamped_arccos,
    max_central_angle,
)

# below this sin(theta)*sin(Theta) the azimuth-dependent branch is ill-posed
_DEGENERATE_SIN = 1e-15


@dataclass(frozen=True)
class ConstellationConfig:
    n_leo: int = 1000
    geometry: GeometryConstants = field(default_factory=GeometryConstants)

    def __post_init__(self):
        if int(self.n_leo) != self.n_leo or self.n_leo < 0:
            raise DomainError(f"n_leo must be a non-negative integer, got {self.n_leo}")
        object.__setattr__(self, "n_leo", int(self.n_leo))
        g = self.geometry
        if not g.earth_radius < g.leo_radius:
            raise DomainError("LEO shell must lie above the Earth's surface")

    @property
    def shell_radius(self) -> float:
        return self.geometry.leo_radius


@dataclass(frozen=True)
class ContactAngleDistribution:
    """Distribution of the central angle to the nearest of ``n_leo`` satellites,
    considered on [0, theta_max]."""

    n_leo: int
    theta_max: float = math.pi

    def cdf(self, theta):
        return contact_angle_cdf(theta, self.n_leo)

    def pdf(self, theta):
        return contact_angle_pdf(theta, self.n_leo)

    @property
    def mass(self) -> float:
        return contact_angle_cdf(self.theta_max, self.n_leo)


def sample_constellation(cfg: ConstellationConfig, rng: np.random.Generator) -> list[SphericalPoint]:
    n = cfg.n_leo
    cos_polar = 2.0 * rng.random(n) - 1.0
    azimuth = 2.0 * math.pi * rng.random(n)
    polar = np.arccos(cos_polar)
    return [SphericalPoint(cfg.shell_radius, float(t), float(a)) for t, a in zip(polar, azimuth)]


def contact_angle_cdf(theta, n: int):
    theta = np.asarray(theta, dtype=float)
    # (1 + cos t) / 2 = 1 - sin^2(t/2); log1p keeps precision near t = 0
    if n > 0:
        with np.errstate(divide="ignore"):  # theta = pi gives log1p(-1) = -inf, CDF 1
            out = -np.expm1(n * np.log1p(-np.sin(theta / 2.0) ** 2))
    else:
        out = np.zeros_like(theta)
    out = np.clip(out, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def contact_angle_pdf(theta, n: int):
    if n < 1:
        raise DomainError("contact angle density needs at least one satellite")
    theta = np.asarray(theta, dtype=float)
    out = 0.5 * n * np.sin(theta) * (np.cos(theta / 2.0) ** 2) ** (n - 1)
    return float(out) if out.ndim == 0 else out


def contact_angle_quantile(u, n: int):
    """Inverse of contact_angle_cdf, accurate for small angles and large n."""
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore"):
        s2 = -np.expm1(np.log1p(-u) / n)  # sin^2(theta/2)
    out = 2.0 * np.arcsin(np.sqrt(np.clip(s2, 0.0, 1.0)))
    return float(out) if out.ndim == 0 else out


def ill_max_angle(cfg: ConstellationConfig, l_il_max: float) -> float:
    g = cfg.geometry
    return max_central_angle(g.earth_radius, g.leo_radius, l_il_max)


def availability_ill(cfg: ConstellationConfig, l_il_max: float) -> float:
    """Probability that the nearest satellite is within ``l_il_max`` km."""
    theta_max = ill_max_angle(cfg, l_il_max)
    if cfg.n_leo == 0:
        return 0.0
    return contact_angle_cdf(theta_max, cfg.n_leo)


def lgl_cos_limit(g: GeometryConstants, l_lg_max: float) -> float:
    """cos of the LEO-GEO central angle at which the chord equals ``l_lg_max``."""
    r1, r2 = g.leo_radius, g.geo_radius
    return (r1 * r1 + r2 * r2 - l_lg_max * l_lg_max) / (2.0 * r1 * r2)


def lgl_availability_array(theta, g: GeometryConstants, big_theta: float, l_lg_max: float):
    """Vectorised conditional LGL availability; see conditional_lgl_availability."""
    theta = np.asarray(theta, dtype=float)
    r1, r2 = g.leo_radius, g.geo_radius
    near = chord(r1, r2, np.cos(theta - big_theta))
    far = chord(r1, r2, np.cos(theta + big_theta))
    out = np.empty_like(theta)
    zero = near > l_lg_max
    one = ~zero & (far <= l_lg_max)
    mid = ~zero & ~one
    out[zero] = 0.0
    out[one] = 1.0
    if mid.any():
        t = theta[mid]
        ss = np.sin(t) * math.sin(big_theta)
        if np.any(ss < _DEGENERATE_SIN):
            raise DegenerateGeometry(
                "azimuth branch reached with sin(theta)*sin(Theta) ~ 0"
            )
        arg = lgl_cos_limit(g, l_lg_max) / ss - np.cos(t) * math.cos(big_theta) / ss
        # rounding at the branch edges can push |arg| a hair past 1
        arg = np.clip(arg, -1.0 - ARCCOS_GUARD, 1.0 + ARCCOS_GUARD)
        out[mid] = clamped_arccos(arg) / math.pi
    return out


def conditional_lgl_availability(
    theta: float, cfg: ConstellationConfig, big_theta: float, l_lg_max: float
) -> float:
    """Probability, over a uniform relay azimuth, that the LEO-GEO chord is
    within ``l_lg_max`` given the relay's central angle ``theta`` from the
    IoT device and the GEO central angle ``big_theta``.

    The nearest (azimuth 0) and farthest (azimuth pi) chords are checked
    first; the arccos branch is only entered when the limit lies between them.
    """
    if not 0.0 <= theta <= math.pi or not 0.0 <= big_theta <= math.pi:
        raise DomainError("angles must lie in [0, pi]")
    out = lgl_availability_array(np.array([theta]), cfg.geometry, big_theta, l_lg_max)
    return float(out[0])


def lgl_branch_points(g: GeometryConstants, big_theta: float, l_lg_max: float) -> list[float]:
    """Contact angles in (0, pi) at which the conditional LGL availability
    changes branch (nearest or farthest chord equal to ``l_lg_max``)."""
    c = lgl_cos_limit(g, l_lg_max)
    if c >= 1.0 or c <= -1.0:
        return []
    alpha = math.acos(c)
    pts = [big_theta - alpha, big_theta + alpha, alpha - big_theta, 2.0 * math.pi - alpha - big_theta]
    return sorted({p for p in pts if 0.0 < p < math.pi})
