"""Availability and coverage of IoT-to-GEO links relayed by a random LEO constellation."""
from .analysis import availability, coverage, coverage_direct_geo, min_satellites_for_availability
from .config import parse_config
from .errors import (
    ConvergenceError,
    DegenerateGeometry,
    DomainError,
    OrbitlinkError,
    ParseError,
    QuadratureError,
    Unreachable,
    ValidationError,
)
from .montecarlo import run_availability_mc, run_coverage_mc, simulate
from .policy import RelayPolicy, policy_coverage_mc, select_relay
from .scenario import ProbabilityEstimate, ScenarioConfig

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DegenerateGeometry",
    "DomainError",
    "OrbitlinkError",
    "ParseError",
    "ProbabilityEstimate",
    "QuadratureError",
    "RelayPolicy",
    "ScenarioConfig",
    "Unreachable",
    "ValidationError",
    "availability",
    "coverage",
    "coverage_direct_geo",
    "min_satellites_for_availability",
    "parse_config",
    "policy_coverage_mc",
    "run_availability_mc",
    "run_coverage_mc",
    "select_relay",
    "simulate",
]
