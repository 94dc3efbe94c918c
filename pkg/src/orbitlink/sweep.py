"""Parameter sweeps, named figure recipes and CSV output."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from . import analysis
from .config import scenario_with
from .errors import ConvergenceError, DegenerateGeometry, DomainError, QuadratureError, ValidationError
from .montecarlo import simulate
from .policy import RelayPolicy
from .scenario import ANALYTIC, ProbabilityEstimate, ScenarioConfig

CSV_HEADER = ("param", "param_value", "metric", "value", "ci_half_width", "provenance")

# sweep parameter -> config key it overrides (the key carries the CLI unit)
PARAMETERS = {
    "n_leo": "n_leo",
    "h_leo": "leo_altitude_km",
    "big_theta": "theta_deg",
    "tx_power_il": "tx_power_il_dbw",
    "tx_power_lg": "tx_power_lg_dbw",
    "l_il_max": "l_il_max_km",
    "l_lg_max": "l_lg_max_km",
}

ANALYTIC_METRICS = ("availability", "coverage", "direct_geo")
MC_METRICS = ("availability_mc", "coverage_mc", "policy1", "policy2", "policy3")
METRICS = ANALYTIC_METRICS + MC_METRICS
MIN_MC_TRIALS = 1000
DEFAULT_MC_TRIALS = 100_000


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple
    metrics: tuple
    mc_trials: int = DEFAULT_MC_TRIALS
    seed: int = 0
    # fixed overrides applied to the base scenario, as (config key, value)
    fixed: tuple = ()
    # curve label appended to metric names, e.g. "h_leo=1500"
    label: str | None = None

    def __post_init__(self):
        if self.parameter not in PARAMETERS:
            raise ValidationError("param", f"unknown sweep parameter {self.parameter!r}")
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ValidationError("values", "sweep needs at least one value")
        if not all(math.isfinite(v) for v in values):
            raise ValidationError("values", "sweep values must be finite")
        steps = np.diff(values)
        if values and not (np.all(steps > 0) or np.all(steps < 0)):
            raise ValidationError("values", "sweep values must be strictly monotone")
        if self.parameter == "n_leo":
            if any(v != int(v) or v < 0 for v in values):
                raise ValidationError("values", "n_leo values must be non-negative integers")
            values = tuple(int(v) for v in values)
        object.__setattr__(self, "values", values)
        metrics = tuple(dict.fromkeys(self.metrics))
        if not metrics:
            raise ValidationError("metrics", "at least one metric is required")
        unknown = [m for m in metrics if m not in METRICS]
        if unknown:
            raise ValidationError("metrics", f"unknown metric {unknown[0]!r}")
        object.__setattr__(self, "metrics", metrics)
        if any(m in MC_METRICS for m in metrics) and self.mc_trials < MIN_MC_TRIALS:
            raise ValidationError("trials", f"Monte Carlo metrics need at least {MIN_MC_TRIALS} trials")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed", "seed must lie in [0, 2**64)")

    def metric_name(self, metric: str) -> str:
        return metric if self.label is None else f"{metric}[{self.label}]"


@dataclass(frozen=True)
class SweepRow:
    param: str
    param_value: float | int
    metric: str
    value: float
    ci_half_width: float | None
    provenance: str


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...] = field(default_factory=tuple)

    def __add__(self, other: "SweepResult") -> "SweepResult":
        return SweepResult(self.rows + other.rows)

    def column(self, metric: str) -> list[float]:
        return [r.value for r in self.rows if r.metric == metric]


def _tagged(exc: Exception, parameter: str, value) -> Exception:
    return type(exc)(f"{parameter}={value}: {exc}")


def _point(spec: SweepSpec, s: ScenarioConfig, workers) -> dict[str, ProbabilityEstimate]:
    out: dict[str, ProbabilityEstimate] = {}
    sims: dict[RelayPolicy, object] = {}

    def sim(policy):
        if policy not in sims:
            sims[policy] = simulate(s, spec.mc_trials, spec.seed, policy=policy, workers=workers)
        return sims[policy]

    for m in spec.metrics:
        if m == "availability":
            out[m] = analysis.availability(s)
        elif m == "coverage":
            out[m] = analysis.coverage(s)
        elif m == "direct_geo":
            out[m] = ProbabilityEstimate(analysis.coverage_direct_geo(s), ANALYTIC)
        elif m == "availability_mc":
            out[m] = sim(RelayPolicy.NEAREST_TO_IOT).availability
        elif m == "coverage_mc":
            out[m] = sim(RelayPolicy.NEAREST_TO_IOT).coverage
        else:
            out[m] = sim(RelayPolicy(m)).coverage
    return out


def run_sweep(spec: SweepSpec, base: ScenarioConfig, workers: int | None = None) -> SweepResult:
    """Evaluate every metric of ``spec`` at every parameter value, in order.

    Monte Carlo metrics at one point share a seed, so availability_mc and
    coverage_mc come from the same trials. Numerical failures are re-raised
    with the offending parameter value in the message.
    """
    key = PARAMETERS[spec.parameter]
    curve_base = scenario_with(base, **dict(spec.fixed))
    rows = []
    for v in spec.values:
        try:
            s = scenario_with(curve_base, **{key: v})
            est = _point(spec, s, workers)
        except ValidationError as exc:
            raise ValidationError(exc.key, f"{exc.detail} (at {spec.parameter}={v})") from exc
        except (QuadratureError, ConvergenceError, DegenerateGeometry, DomainError) as exc:
            raise _tagged(exc, spec.parameter, v) from exc
        for m in spec.metrics:
            e = est[m]
            rows.append(
                SweepRow(spec.parameter, v, spec.metric_name(m), e.value, e.half_width_95, e.provenance)
            )
    return SweepResult(tuple(rows))


def run_sweeps(specs: Iterable[SweepSpec], base: ScenarioConfig, workers: int | None = None) -> SweepResult:
    out = SweepResult()
    for spec in specs:
        out = out + run_sweep(spec, base, workers)
    return out


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.9g}"


def format_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in result.rows:
        ci = "" if r.ci_half_width is None else _fmt(r.ci_half_width)
        w.writerow([r.param, _fmt(r.param_value), r.metric, _fmt(r.value), ci, r.provenance])
    return buf.getvalue()


def emit_csv(result: SweepResult, path) -> None:
    Path(path).write_text(format_csv(result), encoding="utf-8")


def linspace_values(start: float, stop: float, steps: int) -> tuple:
    if steps < 1:
        raise ValidationError("steps", "must be at least 1")
    if steps == 1:
        return (start,)
    return tuple(float(v) for v in np.linspace(start, stop, steps))


# Figure recipes. Transmit-power axes span +-20 dB around the defaults.
ALTITUDES_KM = (1000.0, 1500.0, 2000.0)
RECIPE_FIG9_TX_POWER_IL_DBW = 5.0


def _per_altitude(parameter, values, metrics, fixed=(), **kw) -> list[SweepSpec]:
    return [
        SweepSpec(
            parameter,
            values,
            metrics,
            fixed=tuple(fixed) + (("leo_altitude_km", h),),
            label=f"h_leo={h:g}",
            **kw,
        )
        for h in ALTITUDES_KM
    ]


def recipe(name: str, mc_trials: int = DEFAULT_MC_TRIALS, seed: int = 0) -> list[SweepSpec]:
    kw = {"mc_trials": mc_trials, "seed": seed}
    if name == "fig2":
        return _per_altitude(
            "n_leo",
            range(50, 1001, 50),
            ("availability", "availability_mc", "coverage", "coverage_mc"),
            **kw,
        )
    if name == "fig3":
        return _per_altitude(
            "big_theta",
            range(0, 121, 5),
            ("availability", "availability_mc"),
            fixed=(("n_leo", 100),),
            **kw,
        )
    if name == "fig4":
        return _per_altitude("tx_power_il", np.arange(-5.0, 35.01, 2.5), ("coverage", "coverage_mc"), **kw)
    if name == "fig5":
        return _per_altitude("tx_power_lg", np.arange(30.0, 70.01, 2.5), ("coverage", "coverage_mc"), **kw)
    if name == "fig8":
        return [
            SweepSpec(
                "tx_power_il",
                np.arange(-5.0, 25.01, 2.5),
                ("coverage", "policy1", "policy2", "policy3"),
                fixed=(("theta_deg", 15.0),),
                **kw,
            )
        ]
    if name == "fig9":
        return [
            SweepSpec(
                "big_theta",
                range(0, 61, 5),
                ("coverage", "policy1", "policy2", "policy3"),
                fixed=(("tx_power_il_dbw", RECIPE_FIG9_TX_POWER_IL_DBW),),
                **kw,
            )
        ]
    raise ValidationError("recipe", f"unknown recipe {name!r}; choose one of {', '.join(RECIPES)}")


RECIPES = ("fig2", "fig3", "fig4", "fig5", "fig8", "fig9")
