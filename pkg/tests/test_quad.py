import math

import mpmath
import numpy as np
import pytest

from radialpsh import ConfigError, IntegralVerdict, Kind, QuadConfig, integrate_halfline, tail_exponent
from radialpsh.errors import IntegrandError
from radialpsh.quad import adaptive_gauss


def oracle(f, upper=0.0):
    with mpmath.workdps(30):
        return float(mpmath.quad(f, [-mpmath.inf, -1, upper]))


@pytest.mark.parametrize("f,fm", [
    (lambda t: 1 / (1 + t * t), lambda t: 1 / (1 + t * t)),
    (lambda t: np.exp(t), mpmath.exp),
    (lambda t: (1 - t) ** -1.5, lambda t: (1 - t) ** -1.5),
    (lambda t: (1 - t) ** -3 * np.log(2 - t), lambda t: (1 - t) ** -3 * mpmath.log(2 - t)),
])
def test_finite_integrals_match_mpmath(f, fm):
    v = integrate_halfline(f)
    assert v.kind is Kind.FINITE
    assert v.value == pytest.approx(oracle(fm), rel=1e-7)
    assert v.floor_sensitivity <= 1e-4


def test_divergent_and_borderline():
    assert integrate_halfline(lambda t: (1 - t) ** -0.5).kind is Kind.DIVERGENT
    v = integrate_halfline(lambda t: 1 / (1 - t))
    assert v.kind is Kind.INCONCLUSIVE
    assert v.tail_exponent == pytest.approx(-1.0, abs=1e-3)


def test_log_singularity_at_upper_endpoint():
    v = integrate_halfline(lambda t: np.exp(t) * np.log(-t))
    assert v.value == pytest.approx(-float(mpmath.euler), rel=1e-7)


@pytest.mark.parametrize("beta", [-3.0, -1.7, -0.4, 0.5])
def test_tail_exponent_of_pure_powers(beta):
    got = tail_exponent(lambda t: (-t) ** beta, (-1e5, -1e2))
    assert got == pytest.approx(beta, abs=1e-9)


def test_superpolynomial_decay_flagged():
    assert tail_exponent(lambda t: np.exp(t / 50), (-1e5, -1e2)) == -math.inf
    assert tail_exponent(lambda t: np.zeros_like(t), (-1e5, -1e2)) == -math.inf


def test_adaptive_gauss_against_exact_value():
    val, err, ok = adaptive_gauss(np.sqrt, np.array([0.0, 1.0]), 1e-10, 4000)
    assert ok and val == pytest.approx(2 / 3, rel=1e-10)


def test_config_validation():
    with pytest.raises(ConfigError):
        QuadConfig(tail_window=(-1.0, -10.0))
    with pytest.raises(ConfigError):
        QuadConfig(rel_tol=0)
    with pytest.raises(ConfigError):
        integrate_halfline(np.exp, t_floor=-1e4)  # window not inside (T, 0)


def test_nonfinite_integrand_raises():
    with pytest.raises(IntegrandError):
        integrate_halfline(lambda t: np.where(t > -0.3, np.nan, np.exp(t)))


def test_deterministic():
    f = lambda t: (1 - t) ** -1.3  # noqa: E731
    assert integrate_halfline(f) == integrate_halfline(f)


def test_verdict_fields_are_python_floats():
    v = integrate_halfline(np.exp)
    assert isinstance(v, IntegralVerdict)
    assert all(type(getattr(v, k)) is float
               for k in ("value", "abs_err", "tail_exponent", "floor_sensitivity"))


def test_inverse_square_below_minus_one():
    v = integrate_halfline(lambda t: (-t) ** -2.0, upper=-1.0)
    assert v.kind is Kind.FINITE and abs(v.value - 1.0) <= 1e-6


def test_harmonic_tail_sits_in_the_band():
    v = integrate_halfline(lambda t: 1 / -t, upper=-1.0)
    assert v.kind is Kind.INCONCLUSIVE
    assert v.tail_exponent == pytest.approx(-1.0, abs=1e-9)
