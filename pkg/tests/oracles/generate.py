"""Independent reference values frozen into the test suite.

Run with ``python3 tests/oracles/generate.py``. Nothing here imports the
package: every quantity is recomputed from first principles with generic
scipy tools (Cartesian vectors, root finding, adaptive quad on the density,
brute-force azimuth grids), so agreement is a genuine cross-check.
"""
import math

import numpy as np
from scipy import integrate, optimize, special

RE, RL, RG = 6371.0, 7371.0, 35860.0
M, B0, OM = 19.4, 0.158, 1.29
ETA2, A0, SD = 1.00526**2, 3.2120, 15e-3
NOISE_W = 5e-13
GAIN = 10 ** (41.7 / 10)
LAM = 1550e-9


def cart(r, pol, az):
    return r * np.array([math.sin(pol) * math.cos(az), math.sin(pol) * math.sin(az), math.cos(pol)])


def dist(r1, p1, a1, r2, p2, a2):
    return float(np.linalg.norm(cart(r1, p1, a1) - cart(r2, p2, a2)))


def sr_pdf(x):
    # closed-form SR density with the confluent hypergeometric function
    k = (2 * B0 * M / (2 * B0 * M + OM)) ** M / (2 * B0)
    return k * math.exp(-x / (2 * B0)) * special.hyp1f1(M, 1.0, OM * x / (2 * B0 * (2 * B0 * M + OM)))


def sr_cdf_quad(w):
    return integrate.quad(sr_pdf, 0.0, w, epsabs=1e-14, epsrel=1e-13, limit=200)[0]


def sr_cdf_series(w):
    # same series written with scipy.special.poch and factorials, terms to 120
    r = OM / (2 * B0 * M + OM)
    out = 0.0
    for z in range(120):
        out += special.poch(M, z) / math.factorial(z) * r**z * special.gammainc(z + 1, w / (2 * B0))
    return (2 * B0 * M / (2 * B0 * M + OM)) ** M * out


def pointing_closed_form(w):
    if w < 0:
        return 0.0
    if w > A0:
        return 1.0
    return (w / A0) ** ETA2 * (1 - SD**2)


def fade_scale(tx_dbw, atten_db, gamma_db):
    k = 4 * math.pi * 1e3 / LAM
    return 10 ** (gamma_db / 10) * NOISE_W / (10 ** (tx_dbw / 10) * GAIN * 10 ** (atten_db / 10)) * k * k


def phi_star(theta, big_theta, l):
    """Largest azimuth with LEO-GEO distance <= l, by root finding."""
    f = lambda phi: dist(RG, big_theta, 0.0, RL, theta, phi) - l
    if f(0.0) > 0:
        return 0.0
    if f(math.pi) <= 0:
        return math.pi
    return optimize.brentq(f, 0.0, math.pi, xtol=1e-15, rtol=1e-15)


def contact_pdf(theta, n):
    return 0.5 * n * math.sin(theta) * ((1 + math.cos(theta)) / 2) ** (n - 1)


def theta_max(l):
    return optimize.brentq(lambda t: dist(RE, 0, 0, RL, t, 0) - l, 0.0, math.pi / 2, xtol=1e-15)


def branch_points(big_theta, l):
    pts = []
    grid = np.linspace(1e-9, math.pi - 1e-9, 4001)
    for fn in (lambda t: dist(RG, big_theta, 0, RL, t, 0) - l, lambda t: dist(RG, big_theta, 0, RL, t, math.pi) - l):
        vals = [fn(t) for t in grid]
        for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
            if fa * fb < 0:
                pts.append(optimize.brentq(fn, a, b, xtol=1e-15))
    return sorted(pts)


def availability_quad(n, big_theta=math.pi / 4, l_il=3000.0, l_lg=35000.0):
    tm = theta_max(l_il)
    pts = [p for p in branch_points(big_theta, l_lg) if p < tm]
    g = lambda t: contact_pdf(t, n) * phi_star(t, big_theta, l_lg) / math.pi
    return integrate.quad(g, 0.0, tm, points=pts or None, epsabs=1e-13, epsrel=1e-12, limit=500)[0]


def coverage_quad(n, big_theta=math.pi / 4, tx_il=15.0, tx_lg=50.0, g_il=-90.0, g_lg=-95.0):
    tm = theta_max(3000.0)
    k_il = fade_scale(tx_il, -2.0, g_il)
    k_lg = fade_scale(tx_lg, 0.0, g_lg)
    l_cut = min(35000.0, math.sqrt(A0 / k_lg))

    def outer(t):
        d_il2 = RL**2 + RE**2 - 2 * RL * RE * math.cos(t)
        p_il = 1 - sr_cdf_series(k_il * d_il2)
        ps = phi_star(t, big_theta, l_cut)
        if ps == 0.0:
            return 0.0
        inner = integrate.quad(
            lambda phi: 1 - pointing_closed_form(k_lg * dist(RG, big_theta, 0, RL, t, phi) ** 2),
            0.0, ps, epsabs=1e-13, epsrel=1e-11, limit=200,
        )[0]
        return contact_pdf(t, n) * p_il * inner / math.pi

    pts = sorted({*branch_points(big_theta, 35000.0), *branch_points(big_theta, l_cut)})
    pts = [p for p in pts if p < tm]
    return integrate.quad(outer, 0.0, tm, points=pts or None, epsabs=1e-12, epsrel=1e-10, limit=300)[0]


if __name__ == "__main__":
    print("distance iot->geo(pi/4)", repr(dist(RE, 0, 0, RG, math.pi / 4, 0)))
    print("theta_max(3000)", repr(theta_max(3000.0)))
    print("blockage", repr(math.sqrt(RL**2 - RE**2)), repr(2 * math.sqrt(RG**2 - RL**2)))
    for w in (0.1, 0.5, 1.0, 2.0, 5.0):
        print("sr_cdf", w, repr(sr_cdf_quad(w)), repr(sr_cdf_series(w)))
    print("lgl phi*/pi theta=0.3", repr(phi_star(0.3, math.pi / 4, 35000.0) / math.pi))
    grid = np.linspace(0, 2 * math.pi, 1_000_001)[:-1]
    c = np.sin(0.3) * math.sin(math.pi / 4) * np.cos(grid) + math.cos(0.3) * math.cos(math.pi / 4)
    print("lgl grid fraction theta=0.3", np.mean(np.sqrt(RL**2 + RG**2 - 2 * RL * RG * c) <= 35000.0))
    print("lgl phi*/pi theta=0.4 Theta=80deg", repr(phi_star(0.4, math.radians(80), 35000.0) / math.pi))
    print("branch points Theta=pi/4, 35000", [repr(p) for p in branch_points(math.pi / 4, 35000.0)])
    print("branch points Theta=80deg, 35000", [repr(p) for p in branch_points(math.radians(80), 35000.0)])
    for n in (50, 100, 500, 1000):
        print("availability", n, repr(availability_quad(n)))
    print("availability N=100 Theta=70deg", repr(availability_quad(100, math.radians(70))))
    print("availability N=100 Theta=60deg", repr(availability_quad(100, math.radians(60))))
    for n in (50, 100, 1000):
        print("coverage", n, repr(coverage_quad(n)))
    print("coverage N=1000 rho_il=18", repr(coverage_quad(1000, tx_il=18.0)))
    d = dist(RE, 0, 0, RG, math.pi / 4, 0)
    print("direct 18 dBW", repr(1 - sr_cdf_series(fade_scale(18.0, -2.0, -90.0) * d * d)))
