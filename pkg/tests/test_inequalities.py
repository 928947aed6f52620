import math

import numpy as np
import pytest

from radialpsh import (
    Exp,
    PowerAlpha,
    RadialPotential,
    Verdict,
    check_aubin,
    check_capacity_energy,
    check_mt,
    check_theorem_a,
    check_volume_capacity,
    mt_threshold,
    noncompact_scaling,
    young_pair,
)
from radialpsh.inequalities import aubin_constant, entropy_young, entropy_young_conjugate, mt_constant_bound


def test_young_grid():
    grid = np.geomspace(1e-3, 20.0, 100)
    reports = [young_pair(float(s), float(t)) for s in grid for t in grid]
    assert all(r.holds for r in reports)


def test_young_equality_on_conjugate_curve():
    for s in np.geomspace(1e-3, 20.0, 20):
        t = math.log1p(s)
        r = young_pair(float(s), t)
        assert abs(r.margin) <= 1e-9


def test_young_conjugate_is_legendre_transform():
    s = np.linspace(0, 50, 200001)
    for t in (0.1, 1.0, 2.5):
        brute = np.max(s * t - ((s + 1) * np.log1p(s) - s))
        assert brute == pytest.approx(entropy_young_conjugate(t), rel=1e-6)
    assert entropy_young(0.0) == 0.0


def test_young_skips_overflow():
    assert young_pair(1.0, 800.0).verdict is Verdict.SKIPPED


def test_constants():
    assert mt_constant_bound(2, 1.0) == pytest.approx(4.0)
    A = aubin_constant(2, 1.0, 3.6)
    assert A == pytest.approx(1 * 2**2 / (3.6**2 * 3**3))


def test_mt_holds_and_threshold():
    rp = RadialPotential(PowerAlpha(0.45), 2)
    reports = check_mt(rp, 1.0)
    assert all(r.holds for r in reports)
    assert mt_threshold(rp, 1.0) >= 0.9 * mt_constant_bound(2, 1.0)


def test_mt_threshold_exp_weight_is_infinite():
    # a bounded weight makes the integrand bounded: every c works
    assert mt_threshold(RadialPotential(Exp(), 2), 1.0) == math.inf


def test_aubin():
    reports = check_aubin(RadialPotential(PowerAlpha(0.45), 2), 1.0)
    assert all(r.holds for r in reports)
    slope = [r for r in reports if r.name == "aubin_slope"][0]
    assert slope.lhs <= 3.1


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("p", [1.0, 2.0])
def test_capacity_energy_holds_for_p_at_least_one(n, p):
    s = [0.1 * i for i in range(1, 10)]
    assert all(r.holds for r in check_capacity_energy(RadialPotential(Exp(), n), p, s))


def test_capacity_energy_spot_value():
    r = check_capacity_energy(RadialPotential(Exp(), 2), 1.0, [0.5])[0]
    assert r.lhs == pytest.approx(0.125 / math.log(2) ** 2, rel=1e-9)
    assert r.rhs == pytest.approx(1 / 3, rel=1e-9)  # q = 1 when n = 2, p = 1


def test_capacity_energy_fails_below_p_one():
    # with q = (n+p)/(n+1) < 1 the q^n factor is too small for the exp weight
    r = check_capacity_energy(RadialPotential(Exp(), 2), 0.5, [0.35])[0]
    assert r.violated


def test_capacity_energy_skips_unbounded():
    rs = check_capacity_energy(RadialPotential(PowerAlpha(0.45), 2), 1.0, [0.5])
    assert rs[0].verdict is Verdict.SKIPPED


def test_volume_capacity():
    r = check_volume_capacity(RadialPotential(Exp(), 2), 3.5, np.linspace(0.05, 0.95, 19))
    assert r.holds
    assert check_volume_capacity(RadialPotential(Exp(), 2), 4.0, [0.5]).verdict is Verdict.SKIPPED


def test_noncompact_slopes():
    for p, want in ((1.0, 1.0), (2.0, 0.0)):
        reports = noncompact_scaling(2, p, entropies=False)
        slope = reports[0]
        assert slope.holds and slope.extra["slope"] == pytest.approx(want, abs=0.1)


def test_theorem_a_pipeline():
    assert all(r.holds for r in check_theorem_a(RadialPotential(PowerAlpha(0.3), 2)))
    assert check_theorem_a(RadialPotential(PowerAlpha(0.7), 2))[0].verdict is Verdict.SKIPPED
