"""Monte Carlo oracle for the end-to-end metrics.

Every trial draws a fresh constellation, picks a relay, checks both distance
ceilings, draws both fades and checks both SNR thresholds.

Randomness is counter-based. Trials are cut into fixed blocks whose size
depends only on the constellation size; block ``b`` draws geometry from
``Philox(key=(seed, 0), counter=b)`` and fades from ``Philox(key=(seed, 1),
counter=b)``. Results are therefore a pure function of (scenario, n_trials,
seed), whatever the number of worker threads, and availability and coverage
runs with the same seed see identical constellations.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fading import sample_pointing, sample_sr
from .geometry import SphericalPoint, chord
from .policy import RelayPolicy
from .scenario import ProbabilityEstimate, ScenarioConfig

_SATS_PER_BLOCK = 1 << 18
_MAX_TRIALS_PER_BLOCK = 4096
_GEOMETRY_STREAM = 0
_FADING_STREAM = 1
_SEED_LIMIT = 1 << 64


@dataclass(frozen=True)
class TrialOutcome:
    relay_found: bool
    ill_available: bool
    lgl_available: bool
    ill_covered: bool
    lgl_covered: bool
    relay_position: SphericalPoint | None = None

    @property
    def available(self) -> bool:
        return self.relay_found and self.ill_available and self.lgl_available

    @property
    def covered(self) -> bool:
        return self.available and self.ill_covered and self.lgl_covered


@dataclass(frozen=True)
class TrialBatch:
    """Per-trial outcome flags for a contiguous run of trials."""

    relay_found: np.ndarray
    ill_available: np.ndarray
    lgl_available: np.ndarray
    ill_covered: np.ndarray
    lgl_covered: np.ndarray
    relay_polar: np.ndarray
    relay_azimuth: np.ndarray

    @property
    def available(self) -> np.ndarray:
        return self.relay_found & self.ill_available & self.lgl_available

    @property
    def covered(self) -> np.ndarray:
        return self.available & self.ill_covered & self.lgl_covered

    def outcomes(self, shell_radius: float) -> list[TrialOutcome]:
        out = []
        for i in range(self.relay_found.size):
            pos = (
                SphericalPoint(shell_radius, self.relay_polar[i], self.relay_azimuth[i])
                if self.relay_found[i]
                else None
            )
            out.append(
                TrialOutcome(
                    bool(self.relay_found[i]),
                    bool(self.ill_available[i]),
                    bool(self.lgl_available[i]),
                    bool(self.ill_covered[i]),
                    bool(self.lgl_covered[i]),
                    pos,
                )
            )
        return out


@dataclass(frozen=True)
class SimulationResult:
    n_trials: int
    available_count: int
    covered_count: int

    @property
    def availability(self) -> ProbabilityEstimate:
        return ProbabilityEstimate.from_counts(self.available_count, self.n_trials)

    @property
    def coverage(self) -> ProbabilityEstimate:
        return ProbabilityEstimate.from_counts(self.covered_count, self.n_trials)


def trials_per_block(n_leo: int) -> int:
    return max(1, min(_MAX_TRIALS_PER_BLOCK, _SATS_PER_BLOCK // max(n_leo, 1)))


def block_rng(seed: int, stream: int, block: int) -> np.random.Generator:
    """Generator for one block of trials; distinct (seed, stream, block) never overlap."""
    if not 0 <= seed < _SEED_LIMIT:
        raise DomainError(f"seed must lie in [0, 2**64), got {seed}")
    return np.random.Generator(np.random.Philox(key=(stream << 64) | seed, counter=block << 192))


def simulate_block(
    s: ScenarioConfig, seed: int, block: int, n: int, policy: RelayPolicy = RelayPolicy.NEAREST_TO_IOT
) -> TrialBatch:
    """Run ``n`` trials of block ``block``; ``n`` is the block length."""
    g = s.geometry
    n_leo = s.n_leo
    geo_rng = block_rng(seed, _GEOMETRY_STREAM, block)
    fade_rng = block_rng(seed, _FADING_STREAM, block)
    cos_polar = 2.0 * geo_rng.random((n, n_leo)) - 1.0
    azimuth = 2.0 * math.pi * geo_rng.random((n, n_leo))
    w_il = sample_sr(s.sr, fade_rng, n)
    w_lg = sample_pointing(s.pointing, fade_rng, n)

    if n_leo == 0:
        false = np.zeros(n, dtype=bool)
        nan = np.full(n, np.nan)
        return TrialBatch(false, false, false, false, false, nan, nan)

    sin_t, cos_t = math.sin(s.big_theta), math.cos(s.big_theta)
    if policy is RelayPolicy.NEAREST_TO_IOT:
        # IoT device sits on the pole: the nearest satellite has the largest cos(polar)
        idx = np.argmax(cos_polar, axis=1)
    elif policy is RelayPolicy.NEAREST_TO_GEO:
        sin_p = np.sqrt(np.maximum(1.0 - cos_polar * cos_polar, 0.0))
        idx = np.argmax(sin_t * sin_p * np.cos(azimuth) + cos_t * cos_polar, axis=1)
    else:
        # squared distance to the IoT-GEO segment, expanded so that only
        # x = R sin(polar) cos(azimuth) and z = R cos(polar) are needed
        r, re = g.leo_radius, g.earth_radius
        ab_x, ab_z = g.geo_radius * sin_t, g.geo_radius * cos_t - re
        ab2 = ab_x * ab_x + ab_z * ab_z
        sin_p = np.sqrt(np.maximum(1.0 - cos_polar * cos_polar, 0.0))
        proj = r * sin_p * np.cos(azimuth) * ab_x + (r * cos_polar - re) * ab_z
        t = np.clip(proj / ab2, 0.0, 1.0)
        dist2 = (r * r + re * re) - 2.0 * r * re * cos_polar - 2.0 * t * proj + t * t * ab2
        idx = np.argmin(dist2, axis=1)

    rows = np.arange(n)
    c = cos_polar[rows, idx]
    az = azimuth[rows, idx]
    sin_p = np.sqrt(np.maximum(1.0 - c * c, 0.0))
    l_il = chord(g.earth_radius, g.leo_radius, c)
    l_lg = chord(g.leo_radius, g.geo_radius, sin_t * sin_p * np.cos(az) + cos_t * c)
    ill_ok = l_il <= s.ill.l_max
    lgl_ok = l_lg <= s.lgl.l_max
    ill_cov = s.ill.snr(l_il, w_il) > s.ill.snr_threshold
    lgl_cov = s.lgl.snr(l_lg, w_lg) > s.lgl.snr_threshold
    found = np.ones(n, dtype=bool)
    return TrialBatch(found, ill_ok, lgl_ok, ill_cov, lgl_cov, np.arccos(c), az)


def _block_plan(n_leo: int, n_trials: int) -> list[tuple[int, int]]:
    size = trials_per_block(n_leo)
    return [(b, min(size, n_trials - b * size)) for b in range(-(-n_trials // size))]


def _default_workers() -> int:
    return os.cpu_count() or 1


def simulate(
    s: ScenarioConfig,
    n_trials: int,
    seed: int,
    policy: RelayPolicy = RelayPolicy.NEAREST_TO_IOT,
    workers: int | None = None,
) -> SimulationResult:
    if n_trials < 1:
        raise DomainError("n_trials must be at least 1")
    plan = _block_plan(s.n_leo, n_trials)

    def run(item):
        block, n = item
        batch = simulate_block(s, seed, block, n, policy)
        return int(batch.available.sum()), int(batch.covered.sum())

    workers = workers or _default_workers()
    if workers == 1 or len(plan) == 1:
        counts = [run(item) for item in plan]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(run, plan))
    available = sum(c[0] for c in counts)
    covered = sum(c[1] for c in counts)
    return SimulationResult(n_trials, available, covered)


def trial_outcomes(
    s: ScenarioConfig, n_trials: int, seed: int, policy: RelayPolicy = RelayPolicy.NEAREST_TO_IOT
) -> list[TrialOutcome]:
    """Per-trial outcomes in trial order; meant for small runs and inspection."""
    out = []
    for block, n in _block_plan(s.n_leo, n_trials):
        out.extend(simulate_block(s, seed, block, n, policy).outcomes(s.geometry.leo_radius))
    return out


def run_availability_mc(s: ScenarioConfig, n_trials: int, seed: int, workers: int | None = None) -> ProbabilityEstimate:
    return simulate(s, n_trials, seed, workers=workers).availability


def run_coverage_mc(s: ScenarioConfig, n_trials: int, seed: int, workers: int | None = None) -> ProbabilityEstimate:
    return simulate(s, n_trials, seed, workers=workers).coverage


def reproducibility_check(s: ScenarioConfig, seed: int, n_trials: int = 1000, workers=(1, 8)) -> bool:
    """True when runs at every worker count give bit-identical estimates."""
    results = [simulate(s, n_trials, seed, workers=w) for w in workers]
    results.append(simulate(s, n_trials, seed, workers=workers[0]))
    return all(r == results[0] for r in results)
