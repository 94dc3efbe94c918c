"""Small-scale fading for the two hops.

The ground-to-LEO hop uses shadowed-Rician (SR) fading, evaluated through its
negative-binomial / incomplete-gamma series. The LEO-to-GEO hop uses a
pointing-error model whose deviation angle is Rayleigh distributed.
Samplers draw from the physical models so they can serve as independent
checks on the closed forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc

from .errors import ConvergenceError, DomainError

# series convergence is declared failed only if the last term is this large
_CONVERGENCE_FLOOR = 1e-6
_TERM_CHUNK = 32


@dataclass(frozen=True)
class SrFadingParams:
    """Shadowed-Rician parameters: shadowing severity ``m``, half scattered
    power ``b0`` and line-of-sight power ``omega``."""

    m: float = 19.4
    b0: float = 0.158
    omega: float = 1.29

    def __post_init__(self):
        if not (self.m > 0 and self.b0 > 0 and self.omega >= 0):
            raise DomainError(f"invalid SR parameters {self}")

    @property
    def mean(self) -> float:
        return 2.0 * self.b0 + self.omega


@dataclass(frozen=True)
class PointingParams:
    """Pointing-error parameters.

    ``sigma_d`` is the Rayleigh scale of the beam deviation angle in radians.
    """

    eta_s: float = 1.00526
    a0: float = 3.2120
    sigma_d: float = 15e-3

    def __post_init__(self):
        if not (self.eta_s > 0 and self.a0 > 0 and self.sigma_d > 0):
            raise DomainError(f"invalid pointing parameters {self}")
        if self.sigma_d >= 1.0:
            raise DomainError("sigma_d must be below 1 rad for the (1 - sigma^2) factor")

    @property
    def exponent(self) -> float:
        return self.eta_s * self.eta_s


@dataclass(frozen=True)
class SeriesControl:
    max_terms: int = 200
    term_tolerance: float = 1e-12

    def __post_init__(self):
        if self.max_terms < 1 or not self.term_tolerance > 0:
            raise DomainError(f"invalid series control {self}")


def pochhammer_log_coefficients(m: float, n_terms: int) -> np.ndarray:
    """log((m)_z / (z! * Gamma(z+1))) for z = 0..n_terms-1, built incrementally.

    Each step multiplies by (m + z) / (z + 1)^2, so no factorial is ever
    formed explicitly.
    """
    z = np.arange(n_terms - 1, dtype=float)
    steps = np.log(m + z) - 2.0 * np.log1p(z)
    return np.concatenate(([0.0], np.cumsum(steps)))


def _sr_log_weights(p: SrFadingParams, start: int, stop: int) -> np.ndarray:
    """log of the SR mixing weights for terms start..stop-1.

    The weight of term z is (m)_z/(z! Gamma(z+1)) * r^z * (1-r)^m * Gamma(z+1),
    the last factor converting the lower incomplete gamma to its regularised
    form. The weights sum to one.
    """
    denom = 2.0 * p.b0 * p.m + p.omega
    log_r = math.log(p.omega / denom) if p.omega > 0 else -math.inf
    log_q = math.log(2.0 * p.b0 * p.m / denom)
    coef = pochhammer_log_coefficients(p.m, stop)[start:stop]
    z = np.arange(start, stop, dtype=float)
    with np.errstate(invalid="ignore"):
        zlogr = np.where(z == 0, 0.0, z * log_r)
    return coef + np.array([math.lgamma(k + 1.0) for k in z]) + zlogr + p.m * log_q


def sr_cdf(w, p: SrFadingParams = SrFadingParams(), ctl: SeriesControl = SeriesControl()):
    """CDF of the shadowed-Rician fading power.

    Sums the series term by term and stops, independently for each entry of
    ``w``, at the first term below ``ctl.term_tolerance`` times the partial
    sum. Accepts scalars or arrays.
    """
    w_arr = np.atleast_1d(np.asarray(w, dtype=float))
    if np.any(w_arr < 0) or np.any(np.isnan(w_arr)):
        raise DomainError("sr_cdf requires w >= 0")
    x = w_arr / (2.0 * p.b0)
    total = np.zeros_like(x)
    done = x == 0.0
    last = np.zeros_like(x)
    start = 0
    while not done.all() and start < ctl.max_terms:
        stop = min(start + _TERM_CHUNK, ctl.max_terms)
        logw = _sr_log_weights(p, start, stop)
        z = np.arange(start + 1, stop + 1, dtype=float)
        active = ~done
        xa = x[active]
        terms = np.exp(logw)[None, :] * gammainc(z[None, :], xa[:, None])
        partial = total[active][:, None] + np.cumsum(terms, axis=1)
        small = terms < ctl.term_tolerance * partial
        hit = small.any(axis=1)
        first = np.where(hit, small.argmax(axis=1), terms.shape[1] - 1)
        rows = np.arange(xa.size)
        new_total = partial[rows, first]
        idx = np.flatnonzero(active)
        total[idx] = new_total
        last[idx] = terms[rows, first]
        done[idx[hit]] = True
        start = stop
    if not done.all():
        bad = ~done & (last > _CONVERGENCE_FLOOR * total)
        if bad.any():
            raise ConvergenceError(
                f"SR series did not converge in {ctl.max_terms} terms at w={w_arr[bad][0]}"
            )
    out = np.clip(total, 0.0, 1.0)
    return float(out[0]) if np.ndim(w) == 0 else out.reshape(np.shape(w))


def sample_sr(p: SrFadingParams, rng: np.random.Generator, size=None):
    """Draw SR fading powers from the physical composition.

    W = |X + Y exp(j psi)|^2 with X circular complex Gaussian of total
    variance 2*b0, Y a Nakagami-m amplitude of spread omega and psi uniform.
    """
    shape = () if size is None else size
    scatter = math.sqrt(p.b0)
    xr = rng.standard_normal(shape) * scatter
    xi = rng.standard_normal(shape) * scatter
    y2 = rng.gamma(p.m, p.omega / p.m, shape) if p.omega > 0 else np.zeros(shape)
    psi = rng.random(shape) * (2.0 * math.pi)
    y = np.sqrt(y2)
    w = (xr + y * np.cos(psi)) ** 2 + (xi + y * np.sin(psi)) ** 2
    return float(w) if size is None else w


def rayleigh_pdf(theta_d, sigma):
    theta_d = np.asarray(theta_d, dtype=float)
    s2 = sigma * sigma
    out = theta_d / s2 * np.exp(-theta_d * theta_d / (2.0 * s2))
    return float(out) if out.ndim == 0 else out


def pointing_cdf_conditional(w, theta_d, p: PointingParams = PointingParams()):
    """CDF of the pointing fade given the deviation angle.

    Integrates the conditional density from 0 to ``w``; its total mass is
    cos(theta_d), so the result tops out below one.
    """
    if np.any(np.asarray(theta_d) < 0):
        raise DomainError("deviation angle must be non-negative")
    w = np.asarray(w, dtype=float)
    frac = np.clip(w / p.a0, 0.0, 1.0) ** p.exponent
    out = np.clip(np.cos(theta_d) * frac, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def pointing_cdf(w, p: PointingParams = PointingParams()):
    """Unconditional pointing-error CDF (second-order small-angle form).

    On [0, A0] the value is (w/A0)^(eta_s^2) * (1 - sigma_d^2); it jumps to
    one just above A0. The jump is part of the model, not a bug.
    """
    w = np.asarray(w, dtype=float)
    inside = np.clip(w / p.a0, 0.0, 1.0) ** p.exponent * (1.0 - p.sigma_d**2)
    out = np.where(w < 0, 0.0, np.where(w > p.a0, 1.0, inside))
    return float(out) if out.ndim == 0 else out


def sample_pointing(p: PointingParams, rng: np.random.Generator, size=None):
    """Draw pointing fades.

    The deviation angle is Rayleigh(sigma_d). With probability cos(theta_d)
    the fade is A0 * U^(1/eta_s^2); otherwise the beam is lost and the fade
    is zero.
    """
    shape = () if size is None else size
    theta_d = rng.rayleigh(p.sigma_d, shape)
    keep = rng.random(shape) < np.clip(np.cos(theta_d), 0.0, 1.0)
    u = rng.random(shape)
    w = np.where(keep, p.a0 * u ** (1.0 / p.exponent), 0.0)
    return float(w) if size is None else w
