import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orbitlink.errors import DomainError
from orbitlink.geometry import (
    GeometryConstants,
    SphericalPoint,
    central_angle,
    chord,
    clamped_arccos,
    earth_blockage_bounds,
    euclidean_distance,
    max_central_angle,
    point_segment_distance,
    to_cartesian,
)

# frozen from tests/oracles/generate.py (Cartesian vectors, brentq)
IOT_TO_GEO_AT_45_DEG_KM = 31676.999050307455
THETA_MAX_3000_KM = 0.4157286653927102
IL_CEILING_KM = 3707.0203668175336
LG_CEILING_KM = 70188.54490584628

angles = st.floats(0.0, math.pi)
azimuths = st.floats(0.0, 2 * math.pi)
radii = st.floats(6371.0, 50000.0)


def test_coincident_points_are_zero_apart():
    p = SphericalPoint(7371.0, 0.7, 1.3)
    assert euclidean_distance(p, p) == pytest.approx(0.0, abs=1e-9)
    assert central_angle(p, p) == pytest.approx(0.0, abs=1e-7)


def test_antipodal_points_are_a_diameter_apart():
    a, b = SphericalPoint(7000.0, 0.0), SphericalPoint(7000.0, math.pi)
    assert euclidean_distance(a, b) == pytest.approx(14000.0, rel=1e-15)
    assert central_angle(a, b) == pytest.approx(math.pi)


def test_iot_to_geo_distance_matches_cartesian_oracle():
    d = euclidean_distance(SphericalPoint(6371.0, 0.0), SphericalPoint(35860.0, math.pi / 4))
    assert d == pytest.approx(IOT_TO_GEO_AT_45_DEG_KM, rel=1e-13)


@pytest.mark.parametrize("phi", [0.0, 1.0, 2.5, 5.9])
def test_orthogonal_radii_give_right_angle(phi):
    assert central_angle(SphericalPoint(6371.0, 0.0), SphericalPoint(9000.0, math.pi / 2, phi)) == pytest.approx(
        math.pi / 2, abs=1e-15
    )


def test_random_pairs_match_cartesian_oracle(rng):
    n = 10_000
    r1, r2 = rng.uniform(6371, 40000, n), rng.uniform(6371, 40000, n)
    t1, t2 = np.arccos(rng.uniform(-1, 1, n)), np.arccos(rng.uniform(-1, 1, n))
    a1, a2 = rng.uniform(0, 2 * np.pi, n), rng.uniform(0, 2 * np.pi, n)
    xa = np.stack([r1 * np.sin(t1) * np.cos(a1), r1 * np.sin(t1) * np.sin(a1), r1 * np.cos(t1)], -1)
    xb = np.stack([r2 * np.sin(t2) * np.cos(a2), r2 * np.sin(t2) * np.sin(a2), r2 * np.cos(t2)], -1)
    oracle = np.linalg.norm(xa - xb, axis=-1)
    cosg = np.sum(xa * xb, -1) / (r1 * r2)
    np.testing.assert_allclose(chord(r1, r2, cosg), oracle, rtol=1e-9)
    for i in range(0, n, 500):
        pa, pb = SphericalPoint(r1[i], t1[i], a1[i]), SphericalPoint(r2[i], t2[i], a2[i])
        assert euclidean_distance(pa, pb) == pytest.approx(oracle[i], rel=1e-9)
        ang = math.atan2(np.linalg.norm(np.cross(xa[i], xb[i])), xa[i] @ xb[i])
        assert central_angle(pa, pb) == pytest.approx(ang, abs=1e-7)


def test_to_cartesian_broadcasts():
    xyz = to_cartesian(np.array([1.0, 2.0]), np.array([0.0, math.pi / 2]), 0.0)
    np.testing.assert_allclose(xyz, [[0, 0, 1], [2, 0, 0]], atol=1e-15)


@given(radii, angles, azimuths, radii, angles, azimuths)
def test_distance_is_symmetric_and_nonnegative(r1, t1, a1, r2, t2, a2):
    a, b = SphericalPoint(r1, t1, a1), SphericalPoint(r2, t2, a2)
    d = euclidean_distance(a, b)
    assert d >= 0
    assert d == pytest.approx(euclidean_distance(b, a), rel=1e-12, abs=1e-9)
    assert 0.0 <= central_angle(a, b) <= math.pi


def test_spherical_point_normalises_angles():
    p = SphericalPoint(7000.0, 1.0, -0.5)
    assert 0 <= p.azimuth < 2 * math.pi
    q = SphericalPoint(7000.0, 2 * math.pi - 1.0, 0.0)  # polar past pi folds back
    assert 0 <= q.polar <= math.pi
    np.testing.assert_allclose(q.cartesian(), SphericalPoint(7000.0, 1.0, math.pi).cartesian(), atol=1e-9)


def test_spherical_point_rejects_nonpositive_radius():
    with pytest.raises(DomainError):
        SphericalPoint(0.0, 0.0)


def test_max_central_angle_at_altitude_gap_is_zero():
    assert max_central_angle(6371.0, 7371.0, 1000.0) == pytest.approx(0.0, abs=1e-6)


def test_max_central_angle_at_horizon():
    assert max_central_angle(6371.0, 7371.0, math.sqrt(7371.0**2 - 6371.0**2)) == pytest.approx(
        math.acos(6371.0 / 7371.0), rel=1e-12
    )


def test_max_central_angle_matches_root_finding_oracle():
    assert max_central_angle(6371.0, 7371.0, 3000.0) == pytest.approx(THETA_MAX_3000_KM, rel=1e-12)


def test_max_central_angle_below_gap_raises():
    with pytest.raises(DomainError):
        max_central_angle(6371.0, 7371.0, 999.0)


@given(st.floats(1000.0, 3707.0))
def test_max_central_angle_inverts_chord(l):
    t = max_central_angle(6371.0, 7371.0, l)
    d = euclidean_distance(SphericalPoint(6371.0, 0.0), SphericalPoint(7371.0, t))
    assert d == pytest.approx(l, rel=1e-9)


def test_max_central_angle_is_monotone():
    ls = np.linspace(1000.0, 3700.0, 200)
    ts = [max_central_angle(6371.0, 7371.0, l) for l in ls]
    assert np.all(np.diff(ts) > 0)


def test_clamping_absorbs_rounding_but_not_bugs():
    assert clamped_arccos(1.0 + 1e-12) == 0.0
    assert clamped_arccos(-1.0 - 1e-12) == pytest.approx(math.pi)
    with pytest.raises(DomainError):
        clamped_arccos(1.0 + 1e-6)


def test_blockage_bounds_table_radii():
    il, lg = earth_blockage_bounds(GeometryConstants())
    assert il == pytest.approx(IL_CEILING_KM, rel=1e-14)
    assert lg == pytest.approx(LG_CEILING_KM, rel=1e-14)
    assert 3000.0 <= il and 35000.0 <= lg


def test_blockage_bounds_degenerate_shells():
    assert earth_blockage_bounds(GeometryConstants(6371.0, 6371.0, 35860.0))[0] == 0.0
    assert earth_blockage_bounds(GeometryConstants(6371.0, 7371.0, 7371.0))[1] == 0.0


def test_geometry_constants_ordering():
    with pytest.raises(DomainError):
        GeometryConstants(7000.0, 6000.0, 35860.0)
    g = GeometryConstants()
    assert g.leo_altitude == 1000.0


def test_point_segment_distance_endpoints_and_interior():
    a, b = np.zeros(3), np.array([10.0, 0.0, 0.0])
    assert point_segment_distance(np.array([5.0, 3.0, 0.0]), a, b) == pytest.approx(3.0)
    assert point_segment_distance(np.array([-4.0, 3.0, 0.0]), a, b) == pytest.approx(5.0)
    assert point_segment_distance(np.array([14.0, 0.0, 3.0]), a, b) == pytest.approx(5.0)
