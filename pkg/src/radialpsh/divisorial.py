"""Transverse one-dimensional model of potentials chi(log|s|_h).

Near a smooth point of the divisor {z1 = 0} the relevant integrals reduce,
in logarithmic polar coordinates t = log|z1|, to integrals over (-inf, -1]
involving chi'' only; the tangential directions contribute bounded factors
that are not modelled.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, EstimationError, PreconditionError
from .quad import QuadConfig, integrate_halfline

UPPER = -1.0


def _integrate(w, f, cfg):
    return integrate_halfline(f, UPPER, cfg or QuadConfig(), w.t_floor, w.breakpoints())


def div_entropy(w, cfg=None):
    """Verdict for ∫_{-inf}^{-1} (-t) chi''(t) dt."""

    def f(t):
        return (-t) * w.deriv(t, 2)

    return _integrate(w, f, cfg)


def div_energy(w, p, cfg=None):
    """Verdict for ∫_{-inf}^{-1} (-chi)^p chi''(t) dt."""
    if p <= 0:
        raise DomainError("p must be positive")
    if not w(UPPER) < 0:
        raise PreconditionError("weight must be negative on (-inf, -1]")

    def f(t):
        return (-w(t)) ** p * w.deriv(t, 2)

    return _integrate(w, f, cfg)


def div_critical_p(w, cfg=None, p_range=(0.05, 50.0), tol=1e-3):
    """Supremum of p with finite normal-slice energy (bisection on verdicts)."""
    lo, hi = p_range
    if div_energy(w, hi, cfg).finite:
        return math.inf
    v_lo = div_energy(w, lo, cfg)
    if not v_lo.finite:
        raise EstimationError(f"normal-slice energy not finite even at p={lo}")
    b_lo = v_lo.tail_exponent
    b_hi = div_energy(w, hi, cfg).tail_exponent
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        v = div_energy(w, mid, cfg)
        if v.finite:
            lo, b_lo = mid, v.tail_exponent
        elif v.divergent:
            hi, b_hi = mid, v.tail_exponent
        else:
            hi, b_hi = mid, v.tail_exponent
            break
    if np.isfinite(b_lo) and np.isfinite(b_hi) and b_hi != b_lo:
        return lo + (-1.0 - b_lo) * (hi - lo) / (b_hi - b_lo)
    return 0.5 * (lo + hi)
