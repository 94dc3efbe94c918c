"""Randomised analytic-versus-simulation check.

Each scenario is drawn within physical bounds (radii ordered, both distance
ceilings inside their Earth-blockage limits). Availability and coverage are
computed both ways; a pair passes when

    |analytic - simulated| <= 3 * sqrt(p (1 - p) / n) + varsigma^2

with p the analytic value. The varsigma^2 slack covers the small-angle
approximation in the closed-form pointing-error law. Scenario 0 always has an
empty constellation, where both sides must be exactly zero.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import analysis
from .config import scenario_with
from .geometry import earth_blockage_bounds
from .montecarlo import simulate
from .scenario import ScenarioConfig

DEFAULT_TRIALS = 100_000
MAX_VALIDATION_SATELLITES = 1000

REPORT_HEADER = (
    "scenario",
    "n_leo",
    "h_leo_km",
    "theta_deg",
    "tx_power_il_dbw",
    "tx_power_lg_dbw",
    "l_il_max_km",
    "l_lg_max_km",
    "metric",
    "analytic",
    "monte_carlo",
    "abs_delta",
    "tolerance",
    "pass",
)


@dataclass(frozen=True)
class ScenarioDraw:
    n_leo: int
    h_leo_km: float
    theta_deg: float
    tx_power_il_dbw: float
    tx_power_lg_dbw: float
    l_il_max_km: float
    l_lg_max_km: float

    def scenario(self, base: ScenarioConfig) -> ScenarioConfig:
        return scenario_with(
            base,
            n_leo=self.n_leo,
            leo_altitude_km=self.h_leo_km,
            theta_deg=self.theta_deg,
            tx_power_il_dbw=self.tx_power_il_dbw,
            tx_power_lg_dbw=self.tx_power_lg_dbw,
            l_il_max_km=self.l_il_max_km,
            l_lg_max_km=self.l_lg_max_km,
        )


@dataclass(frozen=True)
class Check:
    index: int
    draw: ScenarioDraw
    metric: str
    analytic: float
    monte_carlo: float
    tolerance: float

    @property
    def delta(self) -> float:
        return abs(self.analytic - self.monte_carlo)

    @property
    def passed(self) -> bool:
        if self.draw.n_leo == 0:
            return self.analytic == 0.0 and self.monte_carlo == 0.0
        return self.delta <= self.tolerance


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]
    n_trials: int
    seed: int

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_abs_delta(self) -> float:
        return max((c.delta for c in self.checks), default=0.0)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def summary(self) -> str:
        n = len(self.checks)
        return (
            f"{n - len(self.failures)}/{n} checks passed over {n // 2} scenarios "
            f"({self.n_trials} trials, seed {self.seed}); max |delta| = {self.max_abs_delta:.3g}"
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(REPORT_HEADER)
        for c in self.checks:
            d = c.draw
            w.writerow(
                [
                    c.index,
                    d.n_leo,
                    f"{d.h_leo_km:.9g}",
                    f"{d.theta_deg:.9g}",
                    f"{d.tx_power_il_dbw:.9g}",
                    f"{d.tx_power_lg_dbw:.9g}",
                    f"{d.l_il_max_km:.9g}",
                    f"{d.l_lg_max_km:.9g}",
                    c.metric,
                    f"{c.analytic:.9g}",
                    f"{c.monte_carlo:.9g}",
                    f"{c.delta:.9g}",
                    f"{c.tolerance:.9g}",
                    "pass" if c.passed else "FAIL",
                ]
            )
        return buf.getvalue()


def draw_scenario(rng: np.random.Generator, base: ScenarioConfig) -> ScenarioDraw:
    """One random scenario inside the physical bounds of ``base``'s radii."""
    g = base.geometry
    n_leo = int(round(math.exp(rng.uniform(0.0, math.log(MAX_VALIDATION_SATELLITES)))))
    h = float(rng.uniform(500.0, 2000.0))
    probe = replace(g, leo_radius=g.earth_radius + h)
    il_ceiling, lg_ceiling = earth_blockage_bounds(probe)
    return ScenarioDraw(
        n_leo=n_leo,
        h_leo_km=h,
        theta_deg=float(rng.uniform(0.0, 120.0)),
        tx_power_il_dbw=float(rng.uniform(0.0, 30.0)),
        tx_power_lg_dbw=float(rng.uniform(30.0, 70.0)),
        l_il_max_km=float(rng.uniform(h, il_ceiling)),
        l_lg_max_km=float(rng.uniform(g.geo_radius - probe.leo_radius, lg_ceiling)),
    )


def tolerance(p: float, n_trials: int, sigma_d: float) -> float:
    return 3.0 * math.sqrt(p * (1.0 - p) / n_trials) + sigma_d * sigma_d


def validate(
    scenario_count: int,
    seed: int = 0,
    n_trials: int = DEFAULT_TRIALS,
    base: ScenarioConfig | None = None,
    workers: int | None = None,
    availability_kernel: Callable[[ScenarioConfig], float] | None = None,
    coverage_kernel: Callable[[ScenarioConfig], float] | None = None,
) -> ValidationReport:
    """Compare analytic and simulated metrics on random scenarios.

    The kernel arguments replace the analytic evaluators; they exist so the
    harness itself can be tested against a deliberately wrong formula.
    """
    if scenario_count < 1:
        raise ValueError("scenario_count must be at least 1")
    base = base or ScenarioConfig()
    avail = availability_kernel or (lambda s: analysis.availability(s).value)
    cover = coverage_kernel or (lambda s: analysis.coverage(s).value)
    rng = np.random.default_rng(seed)
    checks = []
    for i in range(scenario_count):
        draw = draw_scenario(rng, base)
        if i == 0:
            draw = replace(draw, n_leo=0)
        s = draw.scenario(base)
        mc = simulate(s, n_trials, (seed + i) % 2**64, workers=workers)
        sd = s.pointing.sigma_d
        for metric, analytic, sim in (
            ("availability", float(avail(s)), mc.availability.value),
            ("coverage", float(cover(s)), mc.coverage.value),
        ):
            tol = tolerance(min(max(analytic, 0.0), 1.0), n_trials, sd)
            checks.append(Check(i, draw, metric, analytic, sim, tol))
    return ValidationReport(tuple(checks), n_trials, seed)
