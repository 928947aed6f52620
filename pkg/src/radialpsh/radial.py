"""Radial reductions: functionals of v = chi(log|z|) as integrals over t.

Conventions. The Monge-Ampere mass of {log|z| < t} is chi'(t)^n, so the
pushforward density of (dd^c v)^n to the t-line is m = n chi'^(n-1) chi''.
Lebesgue measure of the unit ball pushes forward to 2n sigma e^(2nt) dt with
sigma = pi^n / n! the volume of the unit ball in C^n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, EstimationError, PreconditionError, ConsistencyError
from .quad import IntegralVerdict, Kind, QuadConfig, integrate_halfline
from .weights import Weight

BALL = "ball"
PROJECTIVE = "projective"
POLE_MASS_TOL = 1e-6


def ball_volume(n):
    """Volume of the unit ball in C^n = R^(2n)."""
    return math.pi**n / math.factorial(n)


@dataclass(frozen=True, eq=False)
class RadialPotential:
    """A weight in complex dimension n.

    In the ball model the weight is shifted so that chi(0) = 0; the shift
    applied is kept in ``shift``. Projective potentials are evaluated on
    the chart ball |z| <= 1 without a shift.
    """

    w: Weight
    n: int
    model: str = BALL
    shift: float = field(init=False, default=0.0)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError("complex dimension n must be a positive integer")
        object.__setattr__(self, "n", int(self.n))
        if self.model not in (BALL, PROJECTIVE):
            raise DomainError(f"unknown model {self.model!r}")
        if self.model == BALL:
            object.__setattr__(self, "shift", -float(self.w(0.0)))

    @property
    def t_floor(self):
        return self.w.t_floor

    def chi(self, t):
        return self.w(t) + self.shift

    def d1(self, t):
        return self.w.deriv(t, 1)

    def d2(self, t):
        return self.w.deriv(t, 2)

    def log_density(self, t):
        """log m(t) = log n + (n-1) log chi' + log chi''."""
        n = self.n
        with np.errstate(invalid="ignore"):
            ld = math.log(n) + self.w.log_deriv(t, 2)
            if n > 1:
                ld = ld + (n - 1) * self.w.log_deriv(t, 1)
        return np.where(np.isnan(ld), -np.inf, ld)

    def breakpoints(self):
        return self.w.breakpoints()

    def with_floor(self, t_floor):
        return RadialPotential(self.w.with_floor(t_floor), self.n, self.model)


@dataclass(frozen=True)
class ReducedDensity:
    """Pushforward of (dd^c v)^n to the t-line, with its antiderivative chi'^n."""

    rp: RadialPotential

    @property
    def n(self):
        return self.rp.n

    def __call__(self, t):
        return np.exp(self.rp.log_density(t))

    def antiderivative(self, t):
        return self.rp.d1(t) ** self.n

    def mass(self, t0, t1):
        """Exact mass of [t0, t1]."""
        return self.antiderivative(t1) - self.antiderivative(t0)


def ma_pushforward(rp):
    return ReducedDensity(rp)


def pole_mass(rp):
    """lim chi'(t)^n as t -> -inf, the Monge-Ampere mass charged at the pole.

    chi'^n is sampled at T, T/4, T/16 and extrapolated with Aitken's delta^2
    (exact for c + C(-t)^beta on a geometric progression).
    """
    T = rp.t_floor
    g = np.array([rp.d1(T), rp.d1(T / 4), rp.d1(T / 16)]) ** rp.n
    if np.any(np.diff(g) < -1e-12 * (1 + abs(g[-1]))):
        raise EstimationError("chi' is not monotone towards the floor")
    g1, g2, g3 = g
    den = g1 + g3 - 2 * g2
    if den == 0 or not np.isfinite(den):
        lim = g1
    else:
        lim = (g1 * g3 - g2 * g2) / den
    return float(min(max(lim, 0.0), g1))


def in_full_mass_class(rp):
    return pole_mass(rp) <= POLE_MASS_TOL


def _cfg(cfg):
    return cfg if cfg is not None else QuadConfig()


def _integrate(rp, f, cfg):
    return integrate_halfline(f, 0.0, _cfg(cfg), rp.t_floor, rp.breakpoints())


def entropy(rp, cfg=None):
    """Entropy of (dd^c v)^n relative to Lebesgue measure on the unit ball.

    Computes the exact integral ∫ m log(m / (2n sigma e^(2nt))) dt and,
    separately, the criterion ∫ (-t) chi'^(n-1) chi'' dt, whose finiteness
    is equivalent. The criterion verdict rides along in ``.criterion``.
    A potential with mass at the pole has no density: infinite entropy.
    """
    n = rp.n
    log_norm = math.log(2 * n * ball_volume(n))

    def exact(t):
        lm = rp.log_density(t)
        m = np.exp(lm)
        return np.where(m > 0, m * (lm - log_norm - 2 * n * t), 0.0)

    def crit(t):
        return (-t) * np.exp(rp.log_density(t)) / n

    if not in_full_mass_class(rp):
        note = f"pole mass {pole_mass(rp):.3g}: measure not absolutely continuous"
        c = IntegralVerdict(Kind.DIVERGENT, math.inf, 0.0, math.inf, math.nan, note)
        return IntegralVerdict(Kind.DIVERGENT, math.inf, 0.0, math.inf, math.nan, note, c)

    v_exact = _integrate(rp, exact, cfg)
    v_crit = _integrate(rp, crit, cfg)
    kinds = {v_exact.kind, v_crit.kind}
    if Kind.INCONCLUSIVE not in kinds and len(kinds) > 1:
        raise ConsistencyError(
            f"entropy {v_exact.kind} but criterion integral {v_crit.kind} for {rp.w!r}, n={n}"
        )
    return replace(v_exact, criterion=v_crit)


def _neg_chi(rp):
    if rp.chi(0.0) > 1e-12 * (1 + abs(rp.shift)):
        raise PreconditionError("weight must be <= 0 on the integration range")

    def negchi(t):
        return np.maximum(-rp.chi(t), 0.0)

    return negchi


def energy(rp, p, cfg=None):
    """E_p = ∫ (-chi)^p m dt over (-inf, 0]."""
    if p <= 0:
        raise DomainError("p must be positive")
    negchi = _neg_chi(rp)

    def f(t):
        return negchi(t) ** p * np.exp(rp.log_density(t))

    return _integrate(rp, f, cfg)


def critical_p(rp, cfg=None, p_range=(0.05, 50.0), max_iter=40):
    """Supremum of the p with finite E_p; +inf for bounded potentials.

    Bisects on the energy verdict; when the bracket closes in on the
    inconclusive band, the energy tail exponent (affine in p for power
    type weights) is solved for -1 between the bracket ends.
    """
    cfg = _cfg(cfg)
    lo, hi = p_range
    v_hi = energy(rp, hi, cfg)
    if v_hi.finite:
        return math.inf
    v_lo = energy(rp, lo, cfg)
    if not v_lo.finite:
        raise EstimationError(f"energy not finite even at p={lo}")
    b_lo, b_hi = v_lo.tail_exponent, v_hi.tail_exponent
    for _ in range(max_iter):
        if hi - lo < 1e-3:
            break
        mid = 0.5 * (lo + hi)
        v = energy(rp, mid, cfg)
        if v.finite:
            lo, b_lo = mid, v.tail_exponent
        elif v.divergent:
            hi, b_hi = mid, v.tail_exponent
        else:
            # inside the band: keep the bracket and interpolate the exponent
            b_mid = v.tail_exponent
            if math.isfinite(b_mid) and math.isfinite(b_lo) and b_mid != b_lo:
                return lo + (-1.0 - b_lo) * (mid - lo) / (b_mid - b_lo)
            break
    if math.isfinite(b_lo) and math.isfinite(b_hi) and b_hi != b_lo:
        p_star = lo + (-1.0 - b_lo) * (hi - lo) / (b_hi - b_lo)
        if lo - 1e-9 <= p_star <= hi + 1e-9:
            return p_star
    return 0.5 * (lo + hi)


def _require_energy(rp, p, cfg):
    if not in_full_mass_class(rp):
        raise PreconditionError(f"pole mass {pole_mass(rp):.3g} > 0: potential not in E^p")
    E = energy(rp, p, cfg)
    if not E.finite:
        raise PreconditionError(f"E_{p:g} is {E.kind}, not finite")
    if not E.value > 0:
        raise PreconditionError("E_p = 0: the potential is constant")
    return E


def mt_log_integrand(rp, p, c, E_value):
    """log of the Moser-Trudinger integrand in t (volume factor included)."""
    n = rp.n
    gamma = c * E_value ** (-1.0 / n)
    log_norm = math.log(2 * n * ball_volume(n))
    negchi = _neg_chi(rp)

    def logf(t):
        return log_norm + 2 * n * t + gamma * negchi(t) ** (1 + p / n)

    return logf


def mt_integral(rp, p, c, cfg=None, E=None, log_scale=0.0):
    """Moser-Trudinger integral ∫_ball exp(c E_p^(-1/n) |v|^(1+p/n)) dV.

    The integrand is multiplied by exp(-log_scale) (and so is the value);
    finiteness does not depend on the scale.
    """
    if c <= 0:
        raise DomainError("c must be positive")
    if E is None:
        E = _require_energy(rp, p, cfg)
    logf = mt_log_integrand(rp, p, c, E.value)

    def f(t):
        return np.exp(logf(t) - log_scale)

    return _integrate(rp, f, cfg)


def exp_moment(rp, k, cfg=None):
    """∫_ball e^(-k v) dV."""
    if k <= 0:
        raise DomainError("k must be positive")
    n = rp.n
    log_norm = math.log(2 * n * ball_volume(n))

    def f(t):
        return np.exp(log_norm + 2 * n * t - k * rp.chi(t))

    return _integrate(rp, f, cfg)


def sublevel_radius(rp, s, tol=1e-10):
    """t_s with chi(t_s) = -s, by bisection; {v <= -s} = {|z| <= e^t_s}."""
    if rp.model != BALL:
        raise PreconditionError("sublevel sets are computed in the ball model")
    if not s > 0:
        raise DomainError("s must be positive")
    lo, hi = rp.t_floor, 0.0
    c_lo = rp.chi(lo)
    if not c_lo < -s:
        raise DomainError(f"s={s:g} out of range: chi(t_floor)={c_lo:g}")
    probe = np.linspace(lo, hi, 17)
    if np.any(np.diff(rp.chi(probe)) < 0):
        raise EstimationError("weight is not monotone on the bracket")
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        r = rp.chi(mid) + s
        if abs(r) <= tol * max(1.0, s) or mid in (lo, hi):
            return mid
        if r > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def capacity_sublevel(rp, s):
    """Monge-Ampere capacity of {v <= -s} in the unit ball: (-t_s)^(-n)."""
    return (-sublevel_radius(rp, s)) ** (-rp.n)


def volume_sublevel(rp, s):
    """Lebesgue volume of {v <= -s}: sigma e^(2n t_s)."""
    return ball_volume(rp.n) * math.exp(2 * rp.n * sublevel_radius(rp, s))


def dp_proxy(rp1, rp2, p, cfg=None):
    """∫ |chi1 - chi2|^p (m1 + m2) dt, the pluripotential proxy for d_p."""
    if rp1.n != rp2.n or rp1.model != rp2.model:
        raise PreconditionError("potentials must share dimension and model")
    if p <= 0:
        raise DomainError("p must be positive")
    T = max(rp1.t_floor, rp2.t_floor)

    def f(t):
        diff = np.abs(rp1.chi(t) - rp2.chi(t))
        dens = np.exp(rp1.log_density(t)) + np.exp(rp2.log_density(t))
        return np.where(dens > 0, diff**p * dens, 0.0)

    cuts = tuple(rp1.breakpoints()) + tuple(rp2.breakpoints())
    v = integrate_halfline(f, 0.0, _cfg(cfg), T, cuts)
    if not v.finite:
        raise EstimationError(f"d_p proxy integral is {v.kind}")
    return v.value
