"""Executable checks of the inequalities, one InequalityReport per assertion."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import EstimationError, IntegrandError, PreconditionError
from .quad import Kind, QuadConfig
from .radial import (
    RadialPotential,
    _require_energy,
    capacity_sublevel,
    dp_proxy,
    energy,
    entropy,
    exp_moment,
    mt_integral,
    mt_log_integrand,
    volume_sublevel,
)
from .weights import SoftplusKink, Tabulated, TranslatedScaled, floor_limit

BOUNDED_TOL = 1e-3


class Verdict(str, enum.Enum):
    HOLDS = "Holds"
    VIOLATED = "Violated"
    SKIPPED = "Skipped"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class InequalityReport:
    """lhs <= rhs, checked with relative slack 1e-9."""

    name: str
    params: dict
    lhs: float
    rhs: float
    margin: float
    verdict: Verdict
    reason: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def holds(self):
        return self.verdict is Verdict.HOLDS

    @property
    def violated(self):
        return self.verdict is Verdict.VIOLATED

    def sort_key(self):
        return (self.name, sorted(self.params.items()))


def compare(name, params, lhs, rhs, **extra):
    margin = rhs - lhs
    ok = margin >= -1e-9 * (1 + abs(rhs))
    return InequalityReport(name, dict(params), float(lhs), float(rhs), float(margin),
                            Verdict.HOLDS if ok else Verdict.VIOLATED, extra=extra)


def skipped(name, params, reason, lhs=math.nan, rhs=math.nan, **extra):
    return InequalityReport(name, dict(params), lhs, rhs, math.nan, Verdict.SKIPPED,
                            reason, extra=extra)


def _rp_params(rp):
    return {"weight": rp.w.spec(), "n": rp.n, "model": rp.model}


# -- Young pair ---------------------------------------------------------------

def entropy_young(s):
    """(s+1) log(s+1) - s."""
    return (s + 1) * math.log1p(s) - s


def entropy_young_conjugate(t):
    """e^t - t - 1, the convex conjugate of entropy_young."""
    return math.expm1(t) - t


def young_pair(s, t):
    params = {"s": s, "t": t}
    if s < 0 or t < 0:
        return skipped("young", params, "s and t must be nonnegative")
    if t > 700:
        return skipped("young", params, "e^t overflows")
    return compare("young", params, s * t, entropy_young(s) + entropy_young_conjugate(t))


# -- Moser-Trudinger and Aubin ------------------------------------------------

def mt_constant_bound(n, p):
    """2n(n+1)/(n+p): every smaller constant gives a finite integral."""
    return 2 * n * (n + 1) / (n + p)


def _mt_finite(rp, p, c, cfg, E):
    try:
        return mt_integral(rp, p, c, cfg, E=E)
    except IntegrandError:
        return None


def mt_threshold(rp, p, cfg=None, E=None, c_max_factor=16.0, iters=20):
    """Empirical supremum of c with finite Moser-Trudinger integral.

    Bisection on the verdict kind over (0, c_max_factor * bound]; returns inf
    if the integral is still finite at the top. Each probe integrates the
    integrand divided by its maximum on a probe grid so that large but
    finite integrals do not overflow.
    """
    cfg = cfg or QuadConfig()
    E = E or _require_energy(rp, p, cfg)
    probe = -np.geomspace(1e-3, -rp.t_floor, 4000)

    T = rp.t_floor

    def finite_at(c):
        logf = mt_log_integrand(rp, p, c, E.value)(probe)
        k = int(np.argmax(logf))
        # the tail window has to start beyond the integrand's peak
        lo_w, hi_w = cfg.tail_window
        hi_w = min(hi_w, 10 * probe[k])
        lo_w = max(min(lo_w, 1000 * hi_w), 0.9 * T)
        if not lo_w < 4 * hi_w:
            return False
        pcfg = replace(cfg, tail_window=(lo_w, hi_w))
        try:
            return mt_integral(rp, p, c, pcfg, E=E, log_scale=float(logf[k])).finite
        except IntegrandError:
            return False

    lo, hi = 0.0, c_max_factor * mt_constant_bound(rp.n, p)
    if finite_at(hi):
        return math.inf
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if finite_at(mid):
            lo = mid
        else:
            hi = mid
    return lo


def check_mt(rp, p, c_grid=None, cfg=None, with_threshold=True):
    """Finiteness of the Moser-Trudinger integral for each c.

    Constants up to 0.9 of the guaranteed range must give Finite (Violated
    otherwise); larger constants are reported but not asserted.
    """
    cfg = cfg or QuadConfig()
    base = _rp_params(rp) | {"p": p}
    E = _require_energy(rp, p, cfg)
    bound = mt_constant_bound(rp.n, p)
    guaranteed = 0.9 * bound
    if c_grid is None:
        c_grid = np.linspace(guaranteed / 6, guaranteed, 6)
    reports = []
    for c in c_grid:
        c = float(c)
        params = base | {"c": c}
        v = _mt_finite(rp, p, c, cfg, E)
        extra = {"E_p": E.value}
        if v is not None:
            extra |= {"value": v.value, "abs_err": v.abs_err,
                      "tail_exponent": v.tail_exponent, "floor_sensitivity": v.floor_sensitivity}
        kind = v.kind if v is not None else Kind.DIVERGENT
        if c > guaranteed * (1 + 1e-12):
            reports.append(skipped("mt", params, f"c above 0.9*{bound:g}: not asserted",
                                   extra | {"kind": str(kind)}))
        elif kind is Kind.FINITE:
            reports.append(compare("mt", params, v.value, math.inf, **extra))
        elif kind is Kind.INCONCLUSIVE:
            reports.append(skipped("mt", params, "quadrature inconclusive", **extra))
        else:
            reports.append(InequalityReport("mt", params, math.inf, math.inf, -math.inf,
                                            Verdict.VIOLATED, "integral diverges", extra))
    if with_threshold:
        c_star = mt_threshold(rp, p, cfg, E)
        reports.append(compare("mt_threshold", base, guaranteed, c_star, bound=bound))
    return reports


def aubin_constant(n, p, c):
    """A = p n^(n/p) / (c^(n/p) (n+p)^(1+n/p))."""
    return p * n ** (n / p) / (c ** (n / p) * (n + p) ** (1 + n / p))


def check_aubin(rp, p, k_list=(1, 2, 4, 8, 16), cfg=None, c=None):
    """log ∫ e^(-k v) dV <= A k^(1+n/p) E_p^(1/p) + B for each k, plus growth slope.

    c defaults to the largest constant verified by check_mt and B to the
    log of the verified Moser-Trudinger integral at that c.
    """
    cfg = cfg or QuadConfig()
    n = rp.n
    base = _rp_params(rp) | {"p": p}
    E = _require_energy(rp, p, cfg)
    if c is None:
        c = 0.9 * mt_constant_bound(n, p)
    mt = _mt_finite(rp, p, c, cfg, E)
    if mt is None or not mt.finite:
        return [skipped("aubin", base | {"c": c}, "Moser-Trudinger integral not verified")]
    A = aubin_constant(n, p, c)
    B = math.log(mt.value)
    reports, ks, logs = [], [], []
    for k in k_list:
        params = base | {"k": k, "c": c}
        if not k > 0:
            reports.append(skipped("aubin", params, "k must be positive"))
            continue
        v = exp_moment(rp, k, cfg)
        if not v.finite:
            reports.append(skipped("aubin", params, f"exp moment {v.kind}"))
            continue
        lhs = math.log(v.value)
        rhs = A * k ** (1 + n / p) * E.value ** (1 / p) + B
        reports.append(compare("aubin", params, lhs, rhs, A=A, B=B, E_p=E.value))
        ks.append(k)
        logs.append(lhs)
    params = base | {"k_list": list(k_list), "c": c}
    logs = np.array(logs)
    if len(ks) < 3 or np.any(logs <= 0):
        reports.append(skipped("aubin_slope", params, "need 3 positive log-moments"))
    else:
        slope = np.polyfit(np.log(ks), np.log(logs), 1)[0]
        reports.append(compare("aubin_slope", params, slope, 1 + n / p + 0.1))
    return reports


# -- capacity, volume ---------------------------------------------------------

def is_bounded(w):
    _, change = floor_limit(w)
    return change <= BOUNDED_TOL


def check_capacity_energy(rp, p, s_list, cfg=None):
    """s^(n+p) Cap(v <= -s) <= ((n+p)/(n+1))^n E_p for each s."""
    n = rp.n
    base = _rp_params(rp) | {"p": p}
    if not is_bounded(rp.w):
        return [skipped("capacity_energy", base | {"s": s}, "not in T(Omega) model class")
                for s in s_list]
    E = energy(rp, p, cfg)
    if not E.finite:
        return [skipped("capacity_energy", base | {"s": s}, f"E_p {E.kind}") for s in s_list]
    q = (n + p) / (n + 1)
    rhs = q**n * E.value
    reports = []
    for s in s_list:
        lhs = s ** (n + p) * capacity_sublevel(rp, s)
        reports.append(compare("capacity_energy", base | {"s": s}, lhs, rhs, E_p=E.value))
    return reports


def check_volume_capacity(rp, beta, s_list):
    """Vol(v <= -s) exp(beta Cap^(-1/n)) stays bounded along the s grid."""
    n = rp.n
    params = _rp_params(rp) | {"beta": beta}
    if beta >= 2 * n:
        return skipped("volume_capacity", params, "beta must be < 2n")
    s = np.sort(np.asarray(s_list, dtype=float))
    M = np.array([volume_sublevel(rp, x) * math.exp(beta * capacity_sublevel(rp, x) ** (-1 / n))
                  for x in s])
    qlen = max(1, s.size // 4)
    first, last = M[:qlen].max(), M[-qlen:].max()
    return compare("volume_capacity", params, last, 1.1 * first, C_beta=float(M.max()))


# -- non-compactness scaling --------------------------------------------------

def example_member(n, j, t_floor=None):
    """psi_j = eps_j chi(log|z| + C_j) - eps_j C_j with eps_j = 2^-j, C_j = eps_j^-n."""
    eps = 2.0 ** (-j)
    C = eps ** (-n)
    T = t_floor if t_floor is not None else -16 * (C + 500)
    w = TranslatedScaled(SoftplusKink(), eps, C, t_floor=T)
    return RadialPotential(w, n), eps, C


def member_config(C, cfg=None):
    """Tail window beyond the bump at t = -C."""
    cfg = cfg or QuadConfig()
    return replace(cfg, tail_window=(-2 * (C + 500), -(C + 60)))


def noncompact_scaling(n, p, j_list=range(4, 10), cfg=None, entropies=True):
    """Energy scaling of the family psi_j against eps_j^(n+p-np)."""
    cfg = cfg or QuadConfig()
    j_list = list(j_list)
    if len(j_list) < 3:
        raise EstimationError("need at least 3 members")
    params = {"n": n, "p": p, "j": j_list}
    eps, I, ents = [], [], []
    for j in j_list:
        rp, e, C = example_member(n, j)
        mcfg = member_config(C, cfg)
        zero = RadialPotential(Tabulated.zero(rp.t_floor), n)
        I.append(dp_proxy(rp, zero, p, mcfg))
        eps.append(e)
        if entropies:
            ents.append(entropy(rp, mcfg))
    slope = float(np.polyfit(np.log(eps), np.log(I), 1)[0])
    expected = n + p - n * p
    reports = [compare("noncompact_slope", params, abs(slope - expected), 0.1,
                       slope=slope, expected=expected, values=I)]
    if n > 1 and abs(p - n / (n - 1)) < 1e-12:
        ratio = max(I) / min(I)
        reports.append(compare("noncompact_bounded", params, ratio, 10.0, values=I))
    if entropies:
        if not all(v.finite for v in ents):
            kinds = [str(v.kind) for v in ents]
            reports.append(InequalityReport("noncompact_entropy", params, math.nan, math.nan,
                                            math.nan, Verdict.VIOLATED,
                                            f"entropies not all finite: {kinds}"))
        else:
            vals = [v.value for v in ents]
            ref = vals[0]
            reports.append(compare("noncompact_entropy", params, max(vals), 10 * abs(ref),
                                   values=vals))
    return reports


# -- finite entropy => finite energy ------------------------------------------

def check_theorem_a(rp, cfg=None, p_fracs=(0.25, 0.5, 0.75, 0.95)):
    """Finite entropy forces finite E_p below n/(n-1), never Divergent at n/(n-1)."""
    n = rp.n
    base = _rp_params(rp)
    ent = entropy(rp, cfg)
    if not ent.finite:
        return [skipped("thmA", base, f"entropy {ent.kind}")]
    p_crit = n / (n - 1) if n > 1 else math.inf
    reports = []
    if math.isinf(p_crit):
        ps = [0.5, 1.0, 2.0, 4.0]
    else:
        ps = [f * p_crit for f in p_fracs]
    for p in ps:
        v = energy(rp, p, cfg)
        if v.finite:
            reports.append(compare("thmA", base | {"p": p}, 0.0, 0.0))
        else:
            reports.append(InequalityReport("thmA", base | {"p": p}, math.nan, math.nan, math.nan,
                                            Verdict.VIOLATED, f"E_p {v.kind}"))
    if not math.isinf(p_crit):
        v = energy(rp, p_crit, cfg)
        params = base | {"p": p_crit}
        if v.divergent:
            reports.append(InequalityReport("thmA_critical", params, math.nan, math.nan,
                                            math.nan, Verdict.VIOLATED, "E_p divergent"))
        else:
            reports.append(compare("thmA_critical", params, 0.0, 0.0, kind=str(v.kind)))
    return reports
