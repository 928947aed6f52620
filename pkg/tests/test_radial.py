import math

import mpmath
import numpy as np
import pytest

from radialpsh import (
    DomainError,
    Exp,
    Kind,
    PowerAlpha,
    PreconditionError,
    RadialPotential,
    SoftplusKink,
    Tabulated,
    TranslatedScaled,
    capacity_sublevel,
    critical_p,
    dp_proxy,
    energy,
    entropy,
    exp_moment,
    ma_pushforward,
    mt_integral,
    pole_mass,
    volume_sublevel,
)
from radialpsh.radial import ball_volume, in_full_mass_class
from radialpsh.quad import adaptive_gauss


def exp_energy_oracle(n, p):
    # chi = e^t - 1, m = n e^(nt): E_p = n * Beta(n, p+1)
    return float(n * mpmath.beta(n, p + 1))


@pytest.mark.parametrize("n,p", [(1, 1.0), (2, 1.0), (2, 0.5), (3, 2.0), (3, 1.5)])
def test_exp_energy_closed_form(n, p):
    v = energy(RadialPotential(Exp(), n), p)
    assert v.kind is Kind.FINITE
    assert v.value == pytest.approx(exp_energy_oracle(n, p), rel=1e-8)


def test_e1_exp_dimension_two_is_one_third():
    assert energy(RadialPotential(Exp(), 2), 1.0).value == pytest.approx(1 / 3, abs=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_exp_entropy_against_mpmath(n):
    sigma = math.pi**n / math.factorial(n)

    def f(t):
        m = n * mpmath.exp(n * t)
        return m * mpmath.log(m / (2 * n * sigma * mpmath.exp(2 * n * t)))

    with mpmath.workdps(30):
        want = float(mpmath.quad(f, [-mpmath.inf, 0]))
    v = entropy(RadialPotential(Exp(), n))
    assert v.kind is Kind.FINITE and v.criterion.kind is Kind.FINITE
    assert v.value == pytest.approx(want, rel=1e-8)
    assert v.criterion.value == pytest.approx(1 / n**2, rel=1e-8)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_mass_identity(family, n):
    rp = RadialPotential(family, n)
    mu = ma_pushforward(rp)
    lo = max(-1e3, rp.t_floor)
    edges = sorted({lo, -10.0, -1.0, 0.0} | {b for b in rp.breakpoints() if lo < b < 0})
    for a, b in zip(edges[:-1], edges[1:]):
        val, _, ok = adaptive_gauss(lambda t: mu(t), np.array([a, b]), 1e-12, 4000)
        assert abs(val - mu.mass(a, b)) <= 1e-6


def test_ball_volume():
    assert ball_volume(1) == pytest.approx(math.pi)
    assert ball_volume(2) == pytest.approx(math.pi**2 / 2)


def test_pole_mass():
    assert pole_mass(RadialPotential(Tabulated.identity(), 2)) == pytest.approx(1.0)
    assert pole_mass(RadialPotential(Exp(), 2)) == 0.0
    assert in_full_mass_class(RadialPotential(PowerAlpha(0.45), 2))
    assert not in_full_mass_class(RadialPotential(Tabulated.identity(), 1))


def test_entropy_of_pole_is_divergent():
    v = entropy(RadialPotential(Tabulated.identity(), 2))
    assert v.kind is Kind.DIVERGENT and v.tail_exponent == math.inf


def test_entropy_verdict_agrees_with_criterion(family):
    for n in (1, 2, 3):
        v = entropy(RadialPotential(family, n))
        if Kind.INCONCLUSIVE not in (v.kind, v.criterion.kind):
            assert v.kind is v.criterion.kind


@pytest.mark.parametrize("s", [0.5, 2.0, 3.0])
@pytest.mark.parametrize("w", [Exp(), PowerAlpha(0.3)], ids=["exp", "power0.3"])
def test_energy_scaling(s, w):
    n, p = 2, 1.5
    base = energy(RadialPotential(w, n), p).value
    scaled = energy(RadialPotential(TranslatedScaled(w, s, 0.0), n), p).value
    assert scaled == pytest.approx(s ** (p + n) * base, rel=1e-6)


def test_critical_p_matches_exponent_formula():
    for a, n in ((0.45, 2), (0.6, 3)):
        assert critical_p(RadialPotential(PowerAlpha(a), n)) == pytest.approx(n * (1 - a) / a, abs=0.1)
    assert critical_p(RadialPotential(Exp(), 2)) == math.inf


def test_energy_preconditions():
    with pytest.raises(DomainError):
        energy(RadialPotential(Exp(), 2), 0.0)
    rp = RadialPotential(SoftplusKink(), 2, model="projective")
    with pytest.raises(PreconditionError):
        energy(rp, 1.0)


def test_mt_integral_exp_against_mpmath():
    n, p, c = 2, 1.0, 3.0
    rp = RadialPotential(Exp(), n)
    E = 1 / 3
    gamma = c * E ** (-1 / n)
    sigma = ball_volume(n)
    with mpmath.workdps(30):
        want = float(2 * n * sigma * mpmath.quad(
            lambda t: mpmath.exp(2 * n * t + gamma * (1 - mpmath.exp(t)) ** (1 + p / n)),
            [-mpmath.inf, -1, 0]))
    assert mt_integral(rp, p, c).value == pytest.approx(want, rel=1e-7)


def test_exp_moment_against_mpmath():
    n, k = 2, 4.0
    with mpmath.workdps(30):
        want = float(2 * n * ball_volume(n) * mpmath.quad(
            lambda t: mpmath.exp(2 * n * t - k * (mpmath.exp(t) - 1)), [-mpmath.inf, 0]))
    assert exp_moment(RadialPotential(Exp(), n), k).value == pytest.approx(want, rel=1e-8)


@pytest.mark.parametrize("s", [0.1, 0.5, 0.9])
def test_capacity_and_volume_closed_forms(s):
    n = 2
    rp = RadialPotential(Exp(), n)
    t_s = math.log1p(-s)
    assert capacity_sublevel(rp, s) == pytest.approx((-t_s) ** -n, rel=1e-8)
    assert volume_sublevel(rp, s) == pytest.approx(ball_volume(n) * math.exp(2 * n * t_s), rel=1e-8)


def test_sublevel_out_of_range():
    with pytest.raises(DomainError):
        capacity_sublevel(RadialPotential(Exp(), 2), 1.5)


def test_dp_proxy_symmetry_and_zero():
    a, b = RadialPotential(Exp(), 2), RadialPotential(PowerAlpha(0.3), 2)
    assert dp_proxy(a, b, 1.0) == pytest.approx(dp_proxy(b, a, 1.0), rel=1e-12)
    assert dp_proxy(a, a, 1.0) == 0.0
    z = RadialPotential(Tabulated.zero(), 2)
    assert dp_proxy(a, z, 1.0) == pytest.approx(1 / 3, rel=1e-8)


def test_dimension_validation():
    with pytest.raises(DomainError):
        RadialPotential(Exp(), 0)
    with pytest.raises(DomainError):
        RadialPotential(Exp(), 2, model="sphere")


def test_density_spot_value():
    assert ma_pushforward(RadialPotential(PowerAlpha(0.5), 2))(-4.0) == pytest.approx(1 / 16, rel=1e-12)


def test_translated_softplus_has_no_pole_mass():
    assert pole_mass(RadialPotential(TranslatedScaled(SoftplusKink(), 0.25, 16.0), 2)) == 0.0


def test_mt_rejects_pole_model():
    with pytest.raises(PreconditionError):
        mt_integral(RadialPotential(Tabulated.identity(), 2), 1.0, 1.0)


def test_mt_rejects_constant_potential():
    with pytest.raises(PreconditionError):
        mt_integral(RadialPotential(Tabulated.zero(), 2), 1.0, 1.0)
