"""Relay-selection policies.

Only nearest-to-IoT selection has closed forms; the other two policies are
evaluated by simulation alone.
"""
from __future__ import annotations

import enum
from typing import Sequence

import numpy as np

from .geometry import SphericalPoint


class RelayPolicy(enum.Enum):
    NEAREST_TO_IOT = "policy1"
    NEAREST_TO_GEO = "policy2"
    NEAREST_TO_DIRECT_LINE = "policy3"

    @property
    def label(self) -> str:
        return {
            RelayPolicy.NEAREST_TO_IOT: "nearest to IoT device",
            RelayPolicy.NEAREST_TO_GEO: "nearest to GEO satellite",
            RelayPolicy.NEAREST_TO_DIRECT_LINE: "nearest to IoT-GEO segment",
        }[self]


def select_indices(policy: RelayPolicy, sats, iot, geo) -> np.ndarray:
    """Index of the selected relay for each row of ``sats``.

    ``sats`` has shape (..., n, 3) in Cartesian km; ``iot`` and ``geo`` are
    3-vectors. Ties go to the lowest index.
    """
    sats = np.asarray(sats, float)
    iot = np.asarray(iot, float)
    geo = np.asarray(geo, float)
    if policy is RelayPolicy.NEAREST_TO_IOT:
        cost = np.sum((sats - iot) ** 2, axis=-1)
    elif policy is RelayPolicy.NEAREST_TO_GEO:
        cost = np.sum((sats - geo) ** 2, axis=-1)
    else:
        ab = geo - iot
        t = np.clip(((sats - iot) @ ab) / float(ab @ ab), 0.0, 1.0)
        cost = np.sum((sats - iot - t[..., None] * ab) ** 2, axis=-1)
    return np.argmin(cost, axis=-1)


def select_relay(
    policy: RelayPolicy,
    sats: Sequence[SphericalPoint],
    iot: SphericalPoint,
    geo: SphericalPoint,
) -> SphericalPoint | None:
    if len(sats) == 0:
        return None
    xyz = np.array([p.cartesian() for p in sats])
    return sats[int(select_indices(policy, xyz, iot.cartesian(), geo.cartesian()))]


def policy_coverage_mc(policy: RelayPolicy, s, n_trials: int, seed: int, workers=None):
    """Simulated end-to-end coverage with the relay chosen by ``policy``.

    Both distance ceilings still apply to whichever relay is chosen.
    """
    from .montecarlo import simulate

    return simulate(s, n_trials, seed, policy=policy, workers=workers).coverage
