"""Adaptive Simpson quadrature over a vectorised integrand, plus fixed
Gauss-Legendre rules.

The adaptive scheme keeps a global error budget: every round it bisects the
smallest set of worst panels whose removal would bring the summed error
estimate under half the tolerance. All new abscissae of a round are
evaluated in a single integrand call, so the integrand must accept and
return 1-D arrays.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import QuadratureError

_INITIAL_PANELS = 4
# Simpson error estimates run optimistic next to square-root edges of the
# integrand, so the summed estimate must undercut the tolerance by this factor
_SAFETY = 10.0


@lru_cache(maxsize=8)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point rule on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _panel_values(a, w, f):
    s1 = w / 6.0 * (f[:, 0] + 4.0 * f[:, 2] + f[:, 4])
    s2 = w / 12.0 * (f[:, 0] + 4.0 * f[:, 1] + 2.0 * f[:, 2] + 4.0 * f[:, 3] + f[:, 4])
    diff = s2 - s1
    return s2 + diff / 15.0, np.abs(diff) / 15.0


def adaptive_simpson(func, breakpoints, rel_tol=1e-10, abs_tol=1e-12, max_panels=20000):
    """Integrate ``func`` over [breakpoints[0], breakpoints[-1]].

    Interior breakpoints become panel edges and are never straddled, which
    is how known kinks of the integrand are handled. Returns
    ``(value, error_estimate)``; raises QuadratureError when the panel
    budget runs out before the tolerance is met.
    """
    edges = np.unique(np.asarray(breakpoints, dtype=float))
    if edges.size < 2:
        return 0.0, 0.0
    # initial panels: each breakpoint interval cut into equal pieces
    frac = np.linspace(0.0, 1.0, _INITIAL_PANELS + 1)
    starts = (edges[:-1, None] + np.diff(edges)[:, None] * frac[None, :-1]).ravel()
    stops = np.append(starts[1:], edges[-1])
    # snap panel ends to the exact breakpoints
    stops[_INITIAL_PANELS - 1 :: _INITIAL_PANELS] = edges[1:]
    widths = stops - starts
    grid = starts[:, None] + widths[:, None] * np.linspace(0.0, 1.0, 5)[None, :]
    grid[:, 4] = stops
    fvals = np.asarray(func(grid.ravel()), dtype=float).reshape(grid.shape)
    if not np.all(np.isfinite(fvals)):
        raise QuadratureError("integrand returned non-finite values")
    a, w, f = starts, widths, fvals
    value, err = _panel_values(a, w, f)
    frozen = np.zeros(a.size, dtype=bool)

    while True:
        total = float(value.sum())
        tol = max(abs_tol, rel_tol * abs(total)) / _SAFETY
        e_total = float(err.sum())
        if e_total <= tol:
            return total, e_total
        cand = np.flatnonzero(~frozen)
        if cand.size == 0:
            raise QuadratureError(
                f"panels cannot be refined further; error {e_total:.3g} > tolerance {tol:.3g}"
            )
        order = cand[np.argsort(err[cand], kind="stable")[::-1]]
        remaining = e_total - np.cumsum(err[order])
        k = int(np.searchsorted(-remaining, -0.5 * tol)) + 1
        pick = order[: min(k, order.size)]
        # panels narrower than the float grid around them cannot be split
        tiny = w[pick] <= 8.0 * np.finfo(float).eps * np.maximum(np.abs(a[pick]), 1e-300)
        if tiny.any():
            frozen[pick[tiny]] = True
            pick = pick[~tiny]
            if pick.size == 0:
                continue
        if a.size + pick.size > max_panels:
            raise QuadratureError(
                f"tolerance {tol:.3g} not reached within {max_panels} panels (error {e_total:.3g})"
            )
        pa, pw, pf = a[pick], w[pick], f[pick]
        new_x = pa[:, None] + pw[:, None] * np.array([1.0, 3.0, 5.0, 7.0])[None, :] / 8.0
        new_f = np.asarray(func(new_x.ravel()), dtype=float).reshape(new_x.shape)
        if not np.all(np.isfinite(new_f)):
            raise QuadratureError("integrand returned non-finite values")
        left = np.column_stack([pf[:, 0], new_f[:, 0], pf[:, 1], new_f[:, 1], pf[:, 2]])
        right = np.column_stack([pf[:, 2], new_f[:, 2], pf[:, 3], new_f[:, 3], pf[:, 4]])
        half = pw / 2.0
        la, ra = pa, pa + half
        lv, le = _panel_values(la, half, left)
        rv, re = _panel_values(ra, half, right)
        keep = np.ones(a.size, dtype=bool)
        keep[pick] = False
        a = np.concatenate([a[keep], la, ra])
        w = np.concatenate([w[keep], half, pw - half])
        f = np.concatenate([f[keep], left, right])
        value = np.concatenate([value[keep], lv, rv])
        err = np.concatenate([err[keep], le, re])
        frozen = np.concatenate([frozen[keep], np.zeros(2 * pick.size, dtype=bool)])
        # fixed panel order keeps the final summation reproducible
        order = np.argsort(a, kind="stable")
        a, w, f, value, err, frozen = a[order], w[order], f[order], value[order], err[order], frozen[order]
