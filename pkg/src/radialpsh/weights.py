"""Convex nondecreasing weights chi on the half-line t <= 0.

A radial psh function v(z) = chi(log|z|) is determined by its weight; all the
functionals in this package are one-dimensional integrals of chi, chi' and
chi''. Every family exposes closed forms for the value, both derivatives and
the logarithms of both derivatives (the latter keep Monge-Ampere densities
representable when they underflow).
"""

from __future__ import annotations

import copy
import math

import numpy as np

from .errors import DomainError, PoleError
from .grid import GridFunction

DEFAULT_T_FLOOR = -1e6


def _as_array(t):
    arr = np.asarray(t, dtype=float)
    return arr, arr.ndim == 0


def _out(arr, scalar):
    return float(arr) if scalar else arr


class Weight:
    """Base class. Subclasses implement the ``_value``/``_d1``/``_d2`` kernels.

    Kernels take float arrays and may be called outside t <= 0 (the
    translated family evaluates its base at t + C); the public methods
    enforce the domain.
    """

    family = "abstract"
    t_floor = DEFAULT_T_FLOOR

    # -- kernels -----------------------------------------------------------
    def _value(self, t):
        raise NotImplementedError

    def _d1(self, t):
        raise NotImplementedError

    def _d2(self, t):
        raise NotImplementedError

    def _log_d1(self, t):
        with np.errstate(divide="ignore"):
            return np.log(self._d1(t))

    def _log_d2(self, t):
        with np.errstate(divide="ignore"):
            return np.log(self._d2(t))

    def _check(self, t):
        if np.any(t > 0):
            raise DomainError(f"{self.family}: weights are defined for t <= 0 only")

    # -- public ------------------------------------------------------------
    def __call__(self, t):
        arr, scalar = _as_array(t)
        self._check(arr)
        return _out(self._value(arr), scalar)

    def deriv(self, t, order=1):
        if order not in (1, 2):
            raise DomainError(f"unsupported derivative order {order!r}")
        arr, scalar = _as_array(t)
        self._check(arr)
        return _out(self._d1(arr) if order == 1 else self._d2(arr), scalar)

    def log_deriv(self, t, order=1):
        """log chi'(t) or log chi''(t); -inf where the derivative vanishes."""
        if order not in (1, 2):
            raise DomainError(f"unsupported derivative order {order!r}")
        arr, scalar = _as_array(t)
        self._check(arr)
        return _out(self._log_d1(arr) if order == 1 else self._log_d2(arr), scalar)

    def breakpoints(self):
        """Abscissae where the weight changes character (joints, bumps)."""
        return ()

    def nonpositive(self):
        """Whether chi <= 0 on t <= 0 holds for the family."""
        return True

    def with_floor(self, t_floor):
        """Copy of the weight with a different numerical floor."""
        w = copy.copy(self)
        w.t_floor = float(t_floor)
        return w

    def spec(self):
        raise NotImplementedError

    def __repr__(self):
        return f"Weight({self.spec()!r}, t_floor={self.t_floor:g})"


class _PowerBlend(Weight):
    """-scale * (-t)^a on t <= -1, quadratic blend on [-1, 0].

    The blend matches value, slope and curvature at t = -1 and keeps chi''
    constant on the blend, so the weight is C^2.
    """

    def __init__(self, exponent, scale, t_floor=DEFAULT_T_FLOOR):
        if not 0 < exponent < 1:
            raise DomainError("exponent must lie in (0, 1)")
        self.a = float(exponent)
        self.scale = float(scale)
        self.t_floor = float(t_floor)

    def _value(self, t):
        a, k = self.a, self.scale
        x = np.maximum(-t, 1.0)
        s = t + 1.0
        tail = -k * x**a
        blend = -k + k * a * s + 0.5 * k * a * (1 - a) * s * s
        return np.where(t <= -1, tail, blend)

    def _d1(self, t):
        a, k = self.a, self.scale
        x = np.maximum(-t, 1.0)
        return np.where(t <= -1, k * a * x ** (a - 1), k * a + k * a * (1 - a) * (t + 1.0))

    def _d2(self, t):
        a, k = self.a, self.scale
        x = np.maximum(-t, 1.0)
        return np.where(t <= -1, k * a * (1 - a) * x ** (a - 2), k * a * (1 - a))

    def _log_d1(self, t):
        a, k = self.a, self.scale
        x = np.maximum(-t, 1.0)
        blend = np.log(k * a + k * a * (1 - a) * np.maximum(t + 1.0, 0.0))
        return np.where(t <= -1, math.log(k * a) + (a - 1) * np.log(x), blend)

    def _log_d2(self, t):
        a, k = self.a, self.scale
        x = np.maximum(-t, 1.0)
        c = math.log(k * a * (1 - a))
        return np.where(t <= -1, c + (a - 2) * np.log(x), c)

    def breakpoints(self):
        return (-1.0,)


class PowerAlpha(_PowerBlend):
    """chi(t) = -(-t)^alpha / alpha for t <= -1."""

    family = "power"

    def __init__(self, alpha, t_floor=DEFAULT_T_FLOOR):
        super().__init__(alpha, 1.0 / alpha, t_floor)

    @property
    def alpha(self):
        return self.a

    def spec(self):
        return f"power:{self.a:g}"


class DivisorPower(_PowerBlend):
    """chi(t) = -(-t)^r for t <= -1."""

    family = "divpower"

    def __init__(self, r, t_floor=DEFAULT_T_FLOOR):
        super().__init__(r, 1.0, t_floor)

    @property
    def r(self):
        return self.a

    def spec(self):
        return f"divpower:{self.a:g}"


class Exp(Weight):
    """chi(t) = e^t - 1."""

    family = "exp"

    def __init__(self, t_floor=DEFAULT_T_FLOOR):
        self.t_floor = float(t_floor)

    def _value(self, t):
        return np.expm1(t)

    def _d1(self, t):
        return np.exp(t)

    _d2 = _d1

    def _log_d1(self, t):
        return np.array(t, dtype=float)

    _log_d2 = _log_d1

    def spec(self):
        return "exp"


class SoftplusKink(Weight):
    """chi(t) = log(1 + e^t): flat towards -inf, identity towards +inf.

    Smooth stand-in for a kink that is 0 left of -log 2 and t right of log 2.
    It is positive, so it is only meaningful shifted (ball model) or inside
    a translated/scaled family.
    """

    family = "softplus"

    def __init__(self, t_floor=DEFAULT_T_FLOOR):
        self.t_floor = float(t_floor)

    def _value(self, t):
        return np.logaddexp(0.0, t)

    def _d1(self, t):
        return np.exp(self._log_d1(t))

    def _d2(self, t):
        return np.exp(self._log_d2(t))

    def _log_d1(self, t):
        return -np.logaddexp(0.0, -t)

    def _log_d2(self, t):
        return -np.logaddexp(0.0, -t) - np.logaddexp(0.0, t)

    def breakpoints(self):
        return (-40.0, -10.0, -3.0, 0.0, 3.0, 10.0, 40.0)

    def nonpositive(self):
        return False

    def spec(self):
        return "softplus"


class TranslatedScaled(Weight):
    """chi(t) = eps * base(t + C) - eps * C."""

    family = "ts"

    def __init__(self, base, eps, C, t_floor=None):
        if eps <= 0 or C < 0:
            raise DomainError("eps must be positive and C nonnegative")
        self.base = base
        self.eps = float(eps)
        self.C = float(C)
        self.t_floor = float(t_floor) if t_floor is not None else base.t_floor

    def _value(self, t):
        return self.eps * self.base._value(t + self.C) - self.eps * self.C

    def _d1(self, t):
        return self.eps * self.base._d1(t + self.C)

    def _d2(self, t):
        return self.eps * self.base._d2(t + self.C)

    def _log_d1(self, t):
        return math.log(self.eps) + self.base._log_d1(t + self.C)

    def _log_d2(self, t):
        return math.log(self.eps) + self.base._log_d2(t + self.C)

    def breakpoints(self):
        return tuple(b - self.C for b in self.base.breakpoints() if b - self.C <= 0)

    def nonpositive(self):
        return self.base.nonpositive()

    def spec(self):
        return f"ts:{self.base.spec()}:{self.eps:g}:{self.C:g}"


class Tabulated(Weight):
    """Shape-preserving C^1 quadratic spline through convex nondecreasing data.

    Node slopes are averages of neighbouring secants; each interval gets one
    quadratic when the slopes are consistent with its secant, otherwise two
    quadratics joined at an interior knot chosen so the derivative stays
    monotone (Schumaker's construction). chi'' is piecewise constant.
    """

    family = "tabulated"

    def __init__(self, grid, t_floor=None):
        if not isinstance(grid, GridFunction):
            grid = GridFunction(*grid)
        ts, z = grid.ts, grid.vals
        h = np.diff(ts)
        sec = np.diff(z) / h
        scale = 1.0 + np.max(np.abs(sec))
        if np.any(sec < -1e-12 * scale):
            raise DomainError("tabulated weight must be nondecreasing")
        if np.any(np.diff(sec) < -1e-10 * scale):
            raise DomainError("tabulated weight must be convex")
        sec = np.maximum.accumulate(np.maximum(sec, 0.0))
        s = np.empty_like(ts)
        if sec.size == 1:
            s[:] = sec[0]
        else:
            s[1:-1] = 0.5 * (sec[:-1] + sec[1:])
            s[0] = max(0.0, 2 * sec[0] - s[1])
            s[-1] = 2 * sec[-1] - s[-2]

        starts, z0, s0, curv = [], [], [], []
        for i in range(h.size):
            hi, si, sj, d = h[i], s[i], s[i + 1], sec[i]
            D = sj - si
            if abs(0.5 * (si + sj) - d) <= 1e-13 * scale or D <= 0:
                starts.append(ts[i]), z0.append(z[i]), s0.append(si)
                curv.append(0.5 * D / hi if D > 0 else 0.0)
                continue
            lo = max(0.0, hi * ((sj - d) - (d - si)) / D)
            up = min(hi, 2 * hi * (sj - d) / D)
            a = 0.5 * (lo + up)
            b = hi - a
            sbar = (2 * d * hi - a * si - b * sj) / hi
            zk = z[i] + 0.5 * a * (si + sbar)
            if a > 0:
                starts.append(ts[i]), z0.append(z[i]), s0.append(si)
                curv.append(0.5 * (sbar - si) / a)
            if b > 0:
                starts.append(ts[i] + a), z0.append(zk), s0.append(sbar)
                curv.append(0.5 * (sj - sbar) / b)
        self.grid = grid
        self._starts = np.array(starts)
        self._z0 = np.array(z0)
        self._s0 = np.array(s0)
        self._c = np.array(curv)
        self.t_floor = float(ts[0]) if t_floor is None else float(t_floor)
        if self.t_floor < ts[0]:
            raise DomainError("t_floor lies outside the tabulated grid")

    @classmethod
    def identity(cls, t_floor=DEFAULT_T_FLOOR):
        w = cls(GridFunction([t_floor, 0.0], [t_floor, 0.0]))
        w._name = "identity"
        return w

    @classmethod
    def zero(cls, t_floor=DEFAULT_T_FLOOR):
        w = cls(GridFunction([t_floor, 0.0], [0.0, 0.0]))
        w._name = "zero"
        return w

    def _check(self, t):
        lo, hi = self.grid.ts[0], self.grid.ts[-1]
        if np.any((t < lo) | (t > hi)) or np.any(t > 0):
            raise DomainError(f"tabulated weight evaluated outside [{lo:g}, {min(hi, 0.0):g}]")

    def _piece(self, t):
        self._check(t)
        k = np.clip(np.searchsorted(self._starts, t, side="right") - 1, 0, self._starts.size - 1)
        return k, t - self._starts[k]

    def _value(self, t):
        k, dx = self._piece(t)
        return self._z0[k] + self._s0[k] * dx + self._c[k] * dx * dx

    def _d1(self, t):
        k, dx = self._piece(t)
        return self._s0[k] + 2 * self._c[k] * dx

    def _d2(self, t):
        k, _ = self._piece(t)
        return 2 * self._c[k]

    def breakpoints(self):
        return tuple(self._starts[1:])

    _name = None

    def spec(self):
        return self._name or f"tabulated[{len(self.grid)}]"


def compose_power(w, q, ts):
    """Samples of t -> -(-chi(t))^q, the obstacle fed to the envelope.

    ``w`` is any callable weight (a Weight or a RadialPotential's chi).
    """
    if q <= 1:
        raise DomainError("q must exceed 1")
    ts = np.asarray(ts, dtype=float)
    chi = np.asarray(w(ts), dtype=float)
    if np.any(chi > 0):
        raise PoleError("weight is positive on the grid; -(-chi)^q is undefined")
    if np.any(chi == 0):
        bad = ts[chi == 0][0]
        raise PoleError(f"weight vanishes at t={bad:g}; stop the grid before its zero")
    return GridFunction(ts, -((-chi) ** q))


def floor_limit(w, t_floor=None):
    """chi at the floor and its change when the floor is halved.

    Returns (chi(T), |chi(T) - chi(T/2)|); a change below 1e-3 is read as
    a finite limit chi(-inf).
    """
    T = w.t_floor if t_floor is None else t_floor
    a, b = float(w(T)), float(w(T / 2))
    return a, abs(a - b)


def parse_weight(spec, t_floor=None):
    """Build a weight from ``family:param`` strings such as ``power:0.45``.

    Families: ``power:a``, ``divpower:r``, ``exp``, ``softplus``,
    ``identity``, ``zero``, ``ts:<base>:eps:C`` (base is a nested spec).
    """
    kw = {} if t_floor is None else {"t_floor": float(t_floor)}
    head, _, rest = spec.strip().partition(":")
    head = head.lower()
    try:
        if head == "power":
            return PowerAlpha(float(rest), **kw)
        if head == "divpower":
            return DivisorPower(float(rest), **kw)
        if head == "exp" and not rest:
            return Exp(**kw)
        if head == "softplus" and not rest:
            return SoftplusKink(**kw)
        if head == "identity" and not rest:
            return Tabulated.identity(**kw)
        if head == "zero" and not rest:
            return Tabulated.zero(**kw)
        if head == "ts":
            base_spec, eps, C = rest.rsplit(":", 2)
            base = parse_weight(base_spec)
            w = TranslatedScaled(base, float(eps), float(C))
            if t_floor is not None:
                w.t_floor = float(t_floor)
            return w
    except ValueError as exc:
        raise DomainError(f"bad weight spec {spec!r}: {exc}") from exc
    raise DomainError(f"unknown weight spec {spec!r}")
