"""Largest convex nondecreasing minorants of sampled obstacles.

Radial psh functions are convex nondecreasing functions of t = log|z|, so
the psh envelope of a radial obstacle is, on a grid, the lower convex hull
of the samples flattened to the left of its minimum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .grid import GridFunction, log_grid
from .weights import compose_power

CONTACT_RTOL = 1e-10
FULL_MASS_TOL = 1e-4
T_FLOOR_ENV = -1e3


@dataclass(frozen=True, eq=False)
class EnvelopeResult:
    env: GridFunction
    contact: np.ndarray
    discrete_ma: np.ndarray
    slopes: np.ndarray
    full_mass: bool | None = None
    left_slope_limit: float | None = None

    @property
    def off_contact_mass(self):
        return float(np.sum(self.discrete_ma[~self.contact[1:-1]]))

    @property
    def total_mass(self):
        return float(np.sum(self.discrete_ma))


def _lower_hull(ts, vals):
    """Indices of the lower convex hull vertices (monotone chain)."""
    hull = []
    for i in range(ts.size):
        while len(hull) >= 2:
            j, k = hull[-2], hull[-1]
            # drop k if it lies on or above the segment j -> i
            cross = (ts[k] - ts[j]) * (vals[i] - vals[j]) - (vals[k] - vals[j]) * (ts[i] - ts[j])
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    return np.array(hull)


def convex_increasing_minorant(g, n=None):
    """Envelope of ``g`` among convex nondecreasing piecewise-linear functions.

    ``discrete_ma[i]`` is the Monge-Ampere mass at interior node i: the slope
    jump, or n * left_slope^(n-1) * jump when a dimension n is given.
    """
    ts, vals = g.ts, g.vals
    hull = _lower_hull(ts, vals)
    hv = vals[hull]
    k_min = int(np.argmin(hv))  # leftmost minimiser
    seg_slope = np.diff(hv) / np.diff(ts[hull])
    seg_slope[:k_min] = 0.0
    flat = hv[k_min]

    seg = np.clip(np.searchsorted(ts[hull], ts, side="right") - 1, 0, hull.size - 2)
    env = hv[seg] + seg_slope[seg] * (ts - ts[hull][seg])
    left = ts <= ts[hull][k_min]
    env[left] = flat
    env = np.minimum(env, vals)

    # slope of the segment containing each grid interval, exact per hull piece
    interval_slope = seg_slope[seg[:-1]]
    jump = interval_slope[1:] - interval_slope[:-1]
    if n is None:
        ma = jump
    else:
        ma = n * interval_slope[:-1] ** (n - 1) * jump
    ma = np.maximum(ma, 0.0)
    contact = np.abs(env - vals) <= CONTACT_RTOL * (1 + np.abs(vals))
    return EnvelopeResult(GridFunction(ts, env), contact, ma, interval_slope)


def _left_slope(chi, q, t_min, num):
    g = compose_power(chi, q, log_grid(t_min, -1e-3, num))
    return convex_increasing_minorant(g).slopes[0]


def envelope_power(rp, q, ts=None, t_min=T_FLOOR_ENV, num=4096):
    """Envelope of -(-v)^q, with the no-pole-mass (full mass) test.

    The left-end slope of the envelope is recomputed on grids reaching
    4x and 16x further out; the limit of slope^n is extrapolated with
    Aitken's delta^2 and compared with 1e-4. A slope that grows with the
    grid extent means mass escapes to the pole.
    """
    if ts is None:
        ts = log_grid(t_min, -1e-3, num)
    ts = np.asarray(ts, dtype=float)
    g = compose_power(rp.chi, q, ts)
    res = convex_increasing_minorant(g, rp.n)

    t0 = ts[0]
    if 16 * t0 < rp.t_floor:
        raise DomainError("grid too close to the weight's floor for the extent test")
    s = np.array([_left_slope(rp.chi, q, f * t0, num) for f in (16, 4, 1)]) ** rp.n
    if s[0] > s[1] * (1 + 1e-9) or s[1] > s[2] * (1 + 1e-9):
        limit = np.inf
    else:
        den = s[0] + s[2] - 2 * s[1]
        limit = s[0] if den == 0 else (s[0] * s[2] - s[1] ** 2) / den
        limit = float(min(max(limit, 0.0), s[0]))
    return EnvelopeResult(res.env, res.contact, res.discrete_ma, res.slopes,
                          full_mass=bool(limit <= FULL_MASS_TOL), left_slope_limit=limit)


def maximality_defect(g, res, rng, trials=100):
    """Largest excess of a random convex nondecreasing minorant of g over the envelope.

    Candidates are maxima of two affine minorants with nonnegative slopes,
    each pushed up until it touches g. Zero (up to rounding) if ``res.env``
    is maximal.
    """
    ts, vals = g.ts, g.vals
    env = res.env.vals
    top = float(np.max(np.diff(vals) / np.diff(ts), initial=0.0))
    worst = -np.inf
    for _ in range(trials):
        h = np.full(ts.shape, -np.inf)
        for a in rng.uniform(0.0, max(top, 1.0), 2):
            b = np.min(vals - a * ts)
            h = np.maximum(h, a * ts + b)
        h = np.minimum(h, vals)
        worst = max(worst, float(np.max(h - env)))
    return max(worst, 0.0)
