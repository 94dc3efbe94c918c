"""Closed-form end-to-end availability and coverage.

Both metrics are expectations over the contact angle theta of the nearest
relay. They are integrated in the probability variable u = F(theta), where
F is the contact-angle CDF, so that the integrand stays bounded however
sharply the contact density peaks for large constellations:

    E[g(theta); theta <= theta_max] = integral_0^F(theta_max) g(F^-1(u)) du

Kinks of g (branch changes of the conditional LGL availability and the
pointing-error cut-off at A0) are mapped to u and used as panel edges.
"""
from __future__ import annotations

import math

import numpy as np

from .constellation import (
    contact_angle_cdf,
    contact_angle_quantile,
    ill_max_angle,
    lgl_availability_array,
    lgl_branch_points,
)
from .errors import QuadratureError, Unreachable
from .fading import pointing_cdf, sr_cdf
from .geometry import SphericalPoint, chord, euclidean_distance
from .quadrature import adaptive_simpson, gauss_legendre
from .scenario import ANALYTIC, ProbabilityEstimate, ScenarioConfig

INNER_NODES = 64
_RESIDUAL = 1e-9
MAX_SATELLITES = 10**7


def _finish(value: float, upper: float) -> ProbabilityEstimate:
    if value < -_RESIDUAL or value > upper + _RESIDUAL:
        raise QuadratureError(f"quadrature result {value!r} outside [0, {upper!r}]")
    return ProbabilityEstimate(min(max(value, 0.0), upper, 1.0), ANALYTIC)


def _integrate_over_contact(s: ScenarioConfig, g, kinks) -> tuple[float, float]:
    """Integrate g(theta) against the contact-angle law on [0, theta_max].

    Returns ``(value, mass)`` where mass is the ILL availability.
    """
    n = s.n_leo
    if n == 0:
        return 0.0, 0.0
    theta_max = ill_max_angle(s.constellation, s.ill.l_max)
    u_max = contact_angle_cdf(theta_max, n)
    if u_max == 0.0:
        return 0.0, 0.0
    inner = [t for t in kinks if 0.0 < t < theta_max]
    edges = sorted({0.0, u_max, *(contact_angle_cdf(t, n) for t in inner)})

    def integrand(u):
        theta = np.minimum(contact_angle_quantile(u, n), theta_max)
        return g(theta)

    q = s.quadrature
    value, _ = adaptive_simpson(
        integrand, edges, q.rel_tolerance, q.abs_tolerance, q.max_subdivisions
    )
    return value, u_max


def _ill_distance(s: ScenarioConfig, theta):
    g = s.geometry
    return chord(g.earth_radius, g.leo_radius, np.cos(theta))


def _ill_coverage_array(s: ScenarioConfig, theta):
    fade = s.ill.required_fade(_ill_distance(s, theta))
    return 1.0 - sr_cdf(fade, s.sr, s.series)


def _lgl_cutoff_distance(s: ScenarioConfig) -> float:
    """Shortest LGL distance beyond which the required pointing fade exceeds A0."""
    return min(s.lgl.l_max, s.lgl.distance_for_fade(s.pointing.a0))


def _lgl_inner_array(s: ScenarioConfig, theta):
    """(1/pi) * integral over available azimuths of the LGL coverage, per theta."""
    g = s.geometry
    reach = _lgl_cutoff_distance(s)
    phi_up = math.pi * lgl_availability_array(theta, g, s.big_theta, reach)
    x, wts = gauss_legendre(INNER_NODES)
    phi = 0.5 * phi_up[:, None] * (x[None, :] + 1.0)
    cos_gamma = np.sin(theta)[:, None] * math.sin(s.big_theta) * np.cos(phi) + np.cos(theta)[
        :, None
    ] * math.cos(s.big_theta)
    d = chord(g.leo_radius, g.geo_radius, cos_gamma)
    cover = 1.0 - pointing_cdf(s.lgl.required_fade(d), s.pointing)
    return 0.5 * phi_up * (cover @ wts) / math.pi


def availability(s: ScenarioConfig) -> ProbabilityEstimate:
    """Probability that the nearest relay satisfies both distance ceilings."""
    g = s.geometry
    kinks = lgl_branch_points(g, s.big_theta, s.lgl.l_max)
    value, mass = _integrate_over_contact(
        s, lambda t: lgl_availability_array(t, g, s.big_theta, s.lgl.l_max), kinks
    )
    return _finish(value, mass)


def snr_coverage_ill(theta: float, s: ScenarioConfig) -> float:
    """P[SNR_IL > gamma_IL] for a relay at contact angle ``theta``."""
    return float(_ill_coverage_array(s, np.array([theta]))[0])


def snr_coverage_lgl(theta: float, phi: float, s: ScenarioConfig) -> float:
    """P[SNR_LG > gamma_LG] for a relay at polar ``theta`` and azimuth ``phi``."""
    g = s.geometry
    d = euclidean_distance(
        SphericalPoint(g.geo_radius, s.big_theta, 0.0), SphericalPoint(g.leo_radius, theta, phi)
    )
    return 1.0 - pointing_cdf(s.lgl.required_fade(d), s.pointing)


def _coverage_kinks(s: ScenarioConfig) -> list[float]:
    g = s.geometry
    return sorted(
        set(lgl_branch_points(g, s.big_theta, s.lgl.l_max))
        | set(lgl_branch_points(g, s.big_theta, _lgl_cutoff_distance(s)))
    )


def coverage(s: ScenarioConfig) -> ProbabilityEstimate:
    """End-to-end coverage through the nearest relay.

    E over theta of [ILL coverage(theta) * (1/pi) * integral_0^{pi P_LG(theta)}
    LGL coverage(theta, phi) dphi]. The azimuth integral is truncated where
    the required pointing fade passes A0, past which the LGL coverage is
    exactly zero, so the 64-point inner rule never sees a discontinuity.
    """
    value, _ = _integrate_over_contact(
        s, lambda t: _ill_coverage_array(s, t) * _lgl_inner_array(s, t), _coverage_kinks(s)
    )
    upper = availability(s).value
    return _finish(value, upper)


def coverage_ill_ceiling(s: ScenarioConfig) -> ProbabilityEstimate:
    """Coverage limit when the LGL always succeeds once available."""
    g = s.geometry
    kinks = lgl_branch_points(g, s.big_theta, s.lgl.l_max)
    value, mass = _integrate_over_contact(
        s,
        lambda t: _ill_coverage_array(s, t) * lgl_availability_array(t, g, s.big_theta, s.lgl.l_max),
        kinks,
    )
    return _finish(value, mass)


def geo_visible(s: ScenarioConfig) -> bool:
    g = s.geometry
    return s.big_theta <= math.acos(g.earth_radius / g.geo_radius)


def coverage_direct_geo(s: ScenarioConfig) -> float:
    """Single-hop IoT-to-GEO coverage on the ILL budget and SR fading."""
    if not geo_visible(s):
        return 0.0
    g = s.geometry
    d = euclidean_distance(
        SphericalPoint(g.earth_radius, 0.0, 0.0), SphericalPoint(g.geo_radius, s.big_theta, 0.0)
    )
    return 1.0 - sr_cdf(s.ill.required_fade(d), s.sr, s.series)


def min_satellites_for_availability(s: ScenarioConfig, target: float) -> int:
    """Smallest constellation size whose availability reaches ``target``.

    Doubling search for an upper bracket, then bisection. The search assumes
    availability is nondecreasing in the number of satellites, which holds
    while every relay inside the ILL ceiling can see the GEO. For a GEO low
    on the horizon it does not, and the result is then one admissible size,
    not necessarily the smallest.
    """
    if not 0.0 < target < 1.0:
        raise ValueError("target must lie in (0, 1)")

    def ok(n: int) -> bool:
        return availability(s.with_n_leo(n)).value >= target

    hi = 1
    while not ok(hi):
        if hi >= MAX_SATELLITES:
            raise Unreachable(f"availability {target} not reached with {MAX_SATELLITES} satellites")
        hi = min(hi * 2, MAX_SATELLITES)
    lo = hi // 2  # ok(lo) is false unless hi == 1
    if hi == 1:
        return 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi
