"""Adaptive quadrature on half-lines (-inf, upper] with tail classification.

The integral is computed on [t_floor, upper]. The part left of t = -1 is
mapped to u = log(-t), where power tails become exponentials in u and
endpoint logarithms become polynomial. The remainder beyond t_floor is
extrapolated from a power-law (or exponential) fit next to the floor.
The same estimate is formed at the nested floors T, T/2, T/4, T/8 and
accelerated with Aitken's delta^2; comparing the accelerated values from
T and from T/2 measures how much the answer still depends on the
truncation.

Whether the integral is finite is decided from the decay exponent of the
integrand on a window far out in the tail, never from the quadrature value
itself; exponents within ``delta_margin`` of -1 are reported as
inconclusive.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, EstimationError, IntegrandError

_GL_X, _GL_W = np.polynomial.legendre.leggauss(15)
_N_WINDOW = 64
_N_LOCAL = 16


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-8
    tail_window: tuple = (-1e5, -1e2)
    delta_margin: float = 0.05
    max_subdivisions: int = 4000
    floor_tol: float = 1e-4

    def __post_init__(self):
        lo, hi = (float(x) for x in self.tail_window)
        if not lo < hi < 0:
            raise ConfigError(f"tail_window must satisfy lo < hi < 0, got {self.tail_window}")
        object.__setattr__(self, "tail_window", (lo, hi))
        if self.rel_tol <= 0 or self.delta_margin <= 0 or self.floor_tol <= 0:
            raise ConfigError("rel_tol, delta_margin and floor_tol must be positive")
        if self.max_subdivisions < 1:
            raise ConfigError("max_subdivisions must be positive")


class Kind(str, enum.Enum):
    FINITE = "Finite"
    DIVERGENT = "Divergent"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class IntegralVerdict:
    """Outcome of an improper integral.

    ``value`` is always filled in: the extrapolated integral for finite
    verdicts, the truncated one otherwise. ``criterion`` carries a second,
    independently computed verdict when an operation produces one.
    """

    kind: Kind
    value: float
    abs_err: float
    tail_exponent: float
    floor_sensitivity: float
    note: str = ""
    criterion: "IntegralVerdict | None" = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("value", "abs_err", "tail_exponent", "floor_sensitivity"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def finite(self):
        return self.kind is Kind.FINITE

    @property
    def divergent(self):
        return self.kind is Kind.DIVERGENT


def _eval(f, t):
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        y = np.asarray(f(t), dtype=float)
    if y.shape != t.shape:
        y = np.broadcast_to(y, t.shape)
    bad = ~np.isfinite(y)
    if np.any(bad):
        tb = float(t[bad][0])
        raise IntegrandError(f"non-finite integrand sample at t={tb!r}", t=tb)
    return y


def _gauss(g, a, b):
    """15-point Gauss-Legendre on each panel [a_i, b_i] (vectorized)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = mid[:, None] + half[:, None] * _GL_X[None, :]
    return half * (g(nodes) @ _GL_W)


def adaptive_gauss(g, edges, rel_tol, max_panels):
    """Integrate g over the union of panels given by sorted ``edges``.

    Each panel's error is |G(panel) - G(left) - G(right)|; the panels
    carrying the most error are bisected until the total error is below
    rel_tol * |integral| or the panel budget runs out.
    Returns (value, abs_err, converged).
    """
    edges = np.asarray(edges, dtype=float)
    a, b = edges[:-1], edges[1:]
    whole = _gauss(g, a, b)
    done_val = done_err = 0.0
    n_done = 0
    while True:
        m = 0.5 * (a + b)
        left, right = _gauss(g, a, m), _gauss(g, m, b)
        val = left + right
        err = np.abs(whole - val)
        total = done_val + float(np.sum(val))
        total_err = done_err + float(np.sum(err))
        target = max(rel_tol * abs(total), 1e-300)
        if total_err <= target:
            return total, total_err, True
        if n_done + 2 * a.size > max_panels:
            return total, total_err, False
        order = np.argsort(err)[::-1]
        remaining = total_err - np.cumsum(err[order])
        n_split = int(np.count_nonzero(remaining > 0.5 * target)) + 1
        split = np.zeros(a.size, dtype=bool)
        split[order[:n_split]] = True
        done_val += float(np.sum(val[~split]))
        done_err += float(np.sum(err[~split]))
        n_done += int(np.count_nonzero(~split))
        a, m, b = a[split], m[split], b[split]
        whole = np.concatenate([left[split], right[split]])
        a, b = np.concatenate([a, m]), np.concatenate([m, b])


def _integrate_segment(f, lo, hi, cuts, rel_tol, max_panels):
    """∫_lo^hi f dt, lo < hi <= 0, substituting t = -e^u left of -1."""
    val = err = 0.0
    ok = True
    if hi > -1.0:
        a = max(lo, -1.0)
        edges = np.unique(np.r_[a, [c for c in cuts if a < c < hi], hi])
        edges = np.union1d(edges, np.linspace(a, hi, 5))
        v, e, c = adaptive_gauss(lambda t: _eval(f, t), edges, rel_tol, max_panels)
        val, err, ok = val + v, err + e, ok and c
    if lo < -1.0:
        t_hi = min(hi, -1.0)
        u_lo, u_hi = math.log(-t_hi), math.log(-lo)
        unit = np.arange(math.ceil(u_lo), u_hi)
        ucuts = [math.log(-c) for c in cuts if lo < c < t_hi]
        edges = np.unique(np.r_[u_lo, unit, ucuts, u_hi])

        def g(u):
            t = -np.exp(u)
            y = _eval(f, t) * -t
            if not np.all(np.isfinite(y)):
                tb = float(t[~np.isfinite(y)][0])
                raise IntegrandError(f"integrand overflows at t={tb!r}", t=tb)
            return y

        v, e, c = adaptive_gauss(g, edges, rel_tol, max_panels)
        val, err, ok = val + v, err + e, ok and c
    return val, err, ok


def _fit_line(x, y):
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    return coef[0], coef[1], float(np.sqrt(np.mean(resid**2)))


def _classify_samples(t, y):
    """Shared logic of the tail fits. Returns (beta, log_c, exp_rate).

    beta = -inf flags superpolynomial decay (or an identically zero tail);
    then exp_rate is the fitted rate (0 for a zero tail).
    """
    nz = y != 0
    if not np.any(nz):
        return -math.inf, 0.0, 0.0
    s = np.sign(y[nz])
    if np.any(s != s[0]):
        raise EstimationError("integrand changes sign on the tail window")
    x = -t
    # Samples ordered from deep tail to near zero: underflowed zeros in the deep
    # part with nonzero samples closer in mean decay faster than any power.
    order = np.argsort(x)
    nz_sorted = nz[order]
    if not np.all(nz_sorted):
        first_zero = int(np.argmin(nz_sorted))
        if not np.any(nz_sorted[first_zero:]):
            xs, ys = x[order][:first_zero], np.abs(y[order][:first_zero])
            rate = 0.0
            if xs.size >= 2:
                rate = max(0.0, -_fit_line(xs, np.log(ys))[0])
            return -math.inf, 0.0, rate
    xs, ys = x[nz], np.abs(y[nz])
    if xs.size < 8:
        raise EstimationError(f"only {xs.size} usable tail samples (need 8)")
    ly = np.log(ys)
    beta, logc, r_pow = _fit_line(np.log(xs), ly)
    slope_exp, _, r_exp = _fit_line(xs, ly)
    if r_pow > 10.0 * r_exp + 1e-9 and slope_exp < 0:
        return -math.inf, logc, -slope_exp
    return float(beta), float(logc), 0.0


def tail_exponent(f, window, cfg=None):
    """Decay exponent beta of |f| ~ C (-t)^beta over ``window``.

    Least-squares slope of log|f| against log(-t) on log-spaced samples;
    returns -inf when the decay is superpolynomial, i.e. the power-law fit
    leaves more than ten times the residual of an exponential fit, or the
    samples underflow to zero deep in the window.
    """
    lo, hi = window
    if not lo < hi < 0:
        raise ConfigError(f"bad tail window {window}")
    t = -np.geomspace(-lo, -hi, _N_WINDOW)
    y = _eval(f, t)
    beta, _, _ = _classify_samples(t, y)
    return beta


def _tail_beyond(f, floor):
    """Extrapolated ∫_{-inf}^{floor} f.

    Fit on log-spaced points between |floor|/2 and |floor|. Returns nan
    when the local exponent says the tail is not integrable.
    """
    t = -np.geomspace(-floor / 2.0, -floor, _N_LOCAL)
    y = _eval(f, t)
    try:
        beta, logc, rate = _classify_samples(t, y)
    except EstimationError:
        return math.nan
    y_floor = float(y[-1])
    if beta == -math.inf:
        return y_floor / rate if rate > 0 else 0.0
    if beta >= -1.0:
        return math.nan
    sign = 1.0 if y_floor >= 0 else -1.0
    fitted = sign * math.exp(logc) * (-floor) ** beta
    return fitted * (-floor) / (-beta - 1.0)


def _aitken(x):
    """Aitken delta^2 limit of three estimates; the first one if the
    differences are not geometric with ratio in (0, 1)."""
    d1, d2 = x[1] - x[0], x[2] - x[1]
    if d1 == 0 or d2 == 0 or not 0 < d2 / d1 < 1:
        return x[0]
    return x[0] - d1 * d1 / (d2 - d1)


def integrate_halfline(f, upper=0.0, cfg=None, t_floor=-1e6, breakpoints=()):
    """Improper integral of f over (-inf, upper] as an IntegralVerdict.

    f must be vectorized over numpy arrays of t. ``breakpoints`` are
    abscissae where f changes character (bumps, joints); panels are split
    there so narrow features are not stepped over.
    """
    cfg = cfg or QuadConfig()
    upper = float(upper)
    T = float(t_floor)
    if upper > 0:
        raise ConfigError("upper limit must be <= 0")
    if not T < upper:
        raise ConfigError("t_floor must lie below the upper limit")
    lo_w, hi_w = cfg.tail_window
    if not (T < lo_w and hi_w < upper):
        raise ConfigError(
            f"tail_window {cfg.tail_window} must lie inside (t_floor={T:g}, upper={upper:g})"
        )
    cuts = sorted(float(c) for c in breakpoints if T < c < upper)
    budget = cfg.max_subdivisions

    beta = tail_exponent(f, cfg.tail_window, cfg)
    # nested floors T, T/2, ... (as many as fit below the tail window, up to 4)
    floors = [T]
    while len(floors) < 4 and floors[-1] / 2.0 <= lo_w:
        floors.append(floors[-1] / 2.0)
    if len(floors) < 2:
        floors.append(T / 2.0)
    edges = floors + [upper]
    pieces, quad_err, converged = [], 0.0, True
    for a, b in zip(edges[:-1], edges[1:]):
        v, e, ok = _integrate_segment(f, a, b, cuts, cfg.rel_tol, budget)
        pieces.append(v)
        quad_err += e
        converged = converged and ok
    # truncated[k] = integral over [floors[k], upper]
    truncated_k = np.cumsum(pieces[::-1])[::-1]
    truncated, base = float(truncated_k[0]), float(truncated_k[1])

    d = cfg.delta_margin
    tails = [_tail_beyond(f, F) for F in floors]
    if beta < -1.0 - d and not any(math.isnan(x) for x in tails):
        est = [float(tr) + tl for tr, tl in zip(truncated_k, tails)]
        if len(est) == 4:
            # shallow to deep, so the sequence converges
            full, halved = _aitken(est[2::-1]), _aitken(est[3:0:-1])
        else:
            full, halved = est[0], est[1]
        diff = abs(full - halved)
        scale = max(abs(full), abs(halved))
        sens = diff / scale if scale > 0 else 0.0
        if not converged:
            return IntegralVerdict(Kind.INCONCLUSIVE, full, quad_err + diff, beta, sens,
                                   note="subdivision budget exhausted")
        if sens > cfg.floor_tol:
            return IntegralVerdict(Kind.INCONCLUSIVE, full, quad_err + diff, beta, sens,
                                   note="value still depends on t_floor")
        return IntegralVerdict(Kind.FINITE, full, quad_err + diff, beta, sens)

    scale = max(abs(truncated), abs(base))
    sens = abs(truncated - base) / scale if scale > 0 else 0.0
    if beta > -1.0 + d:
        return IntegralVerdict(Kind.DIVERGENT, truncated, quad_err, beta, sens)
    note = "tail exponent within the margin of -1" if beta >= -1.0 - d else "tail fit unusable"
    return IntegralVerdict(Kind.INCONCLUSIVE, truncated, quad_err, beta, sens, note=note)
