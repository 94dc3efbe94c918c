"""Earth-centred spherical geometry.

Points are ``(radius, polar, azimuth)`` triples with the polar angle measured
from the +z axis. Radii are in km and angles in radians everywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * math.pi

# arccos arguments within this distance outside [-1, 1] are rounding noise
ARCCOS_GUARD = 1e-9


def clamped_arccos(x, guard=ARCCOS_GUARD):
    """arccos that tolerates rounding just outside [-1, 1].

    Arguments further than ``guard`` outside the interval raise DomainError.
    Works on scalars and arrays.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) > 1.0 + guard) or np.any(np.isnan(arr)):
        raise DomainError(f"arccos argument outside [-1, 1]: {x}")
    out = np.arccos(np.clip(arr, -1.0, 1.0))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SphericalPoint:
    radius: float
    polar: float
    azimuth: float = 0.0

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError(f"radius must be positive, got {self.radius}")
        polar = math.fmod(self.polar, TWO_PI)
        azimuth = self.azimuth
        if polar < 0:
            polar += TWO_PI
        if polar > math.pi:
            # reflect through the pole onto the opposite meridian
            polar = TWO_PI - polar
            azimuth += math.pi
        azimuth = math.fmod(azimuth, TWO_PI)
        if azimuth < 0:
            azimuth += TWO_PI
        if azimuth >= TWO_PI:
            azimuth = 0.0
        object.__setattr__(self, "polar", float(polar))
        object.__setattr__(self, "azimuth", float(azimuth))

    def cartesian(self) -> np.ndarray:
        return to_cartesian(self.radius, self.polar, self.azimuth)

    def unit(self) -> np.ndarray:
        return to_cartesian(1.0, self.polar, self.azimuth)


@dataclass(frozen=True)
class GeometryConstants:
    """Radii of the Earth, the LEO shell and the GEO orbit (km).

    Equal radii are admitted so that degenerate shells can be probed; model
    configurations built on top of this type demand strict ordering.
    """

    earth_radius: float = 6371.0
    leo_radius: float = 7371.0
    geo_radius: float = 35860.0

    def __post_init__(self):
        if not 0 < self.earth_radius <= self.leo_radius <= self.geo_radius:
            raise DomainError(
                "radii must satisfy 0 < earth <= leo <= geo, got "
                f"{self.earth_radius}, {self.leo_radius}, {self.geo_radius}"
            )

    @property
    def leo_altitude(self) -> float:
        return self.leo_radius - self.earth_radius

    @property
    def geo_altitude(self) -> float:
        return self.geo_radius - self.earth_radius


def to_cartesian(radius, polar, azimuth):
    """Spherical to Cartesian; broadcasts over array inputs (last axis = xyz)."""
    radius, polar, azimuth = np.broadcast_arrays(
        np.asarray(radius, float), np.asarray(polar, float), np.asarray(azimuth, float)
    )
    s = np.sin(polar)
    return np.stack(
        [radius * s * np.cos(azimuth), radius * s * np.sin(azimuth), radius * np.cos(polar)],
        axis=-1,
    )


def cos_angle_between(polar1, azimuth1, polar2, azimuth2):
    """Cosine of the angle between two directions given in spherical angles."""
    return np.sin(polar1) * np.sin(polar2) * np.cos(azimuth1 - azimuth2) + np.cos(
        polar1
    ) * np.cos(polar2)


def chord(r1, r2, cos_gamma):
    """Straight-line distance between radii ``r1`` and ``r2`` separated by angle gamma."""
    sq = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * cos_gamma
    return np.sqrt(np.maximum(sq, 0.0))


def euclidean_distance(a: SphericalPoint, b: SphericalPoint) -> float:
    c = cos_angle_between(a.polar, a.azimuth, b.polar, b.azimuth)
    return float(chord(a.radius, b.radius, c))


def central_angle(a: SphericalPoint, b: SphericalPoint) -> float:
    """Angle at the Earth's centre between the position vectors of a and b."""
    c = float(np.dot(a.unit(), b.unit()))
    return clamped_arccos(c)


def max_central_angle(r_inner: float, r_outer: float, l_max: float) -> float:
    """Largest central angle at which two shells are within ``l_max`` km.

    Law of cosines solved for the angle. ``l_max`` below the radial gap
    admits no contact and raises DomainError, as does ``l_max`` beyond
    ``r_inner + r_outer``.
    """
    gap = abs(r_outer - r_inner)
    if l_max < gap * (1.0 - ARCCOS_GUARD):
        raise DomainError(
            f"l_max={l_max} km is shorter than the radial gap {gap} km; no contact possible"
        )
    arg = (r_outer**2 + r_inner**2 - l_max**2) / (2.0 * r_outer * r_inner)
    return clamped_arccos(arg)


def earth_blockage_bounds(g: GeometryConstants) -> tuple[float, float]:
    """Longest unblocked IoT-LEO and LEO-GEO link lengths (km)."""
    il = math.sqrt(max(g.leo_radius**2 - g.earth_radius**2, 0.0))
    lg = 2.0 * math.sqrt(max(g.geo_radius**2 - g.leo_radius**2, 0.0))
    return il, lg


def point_segment_distance(p, a, b):
    """Distance from points ``p`` (..., 3) to the segment [a, b] in 3-D."""
    p = np.asarray(p, float)
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    ab = b - a
    denom = float(np.dot(ab, ab))
    if denom == 0.0:
        return np.linalg.norm(p - a, axis=-1)
    t = np.clip(((p - a) @ ab) / denom, 0.0, 1.0)
    closest = a + t[..., None] * ab
    return np.linalg.norm(p - closest, axis=-1)
