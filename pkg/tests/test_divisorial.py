import math

import pytest

from radialpsh import DivisorPower, Exp, Kind, PreconditionError, Tabulated, div_critical_p, div_energy, div_entropy
from radialpsh.weights import floor_limit


@pytest.mark.parametrize("r", [0.3, 0.5, 0.7])
def test_divisor_power_entropy_diverges(r):
    v = div_entropy(DivisorPower(r))
    assert v.kind is Kind.DIVERGENT
    assert v.tail_exponent == pytest.approx(r - 1, abs=1e-6)


def test_exp_entropy_closed_form():
    # ∫_{-inf}^{-1} (-t) e^t dt = 2/e
    v = div_entropy(Exp())
    assert v.kind is Kind.FINITE and v.value == pytest.approx(2 / math.e, rel=1e-10)


def test_linear_weight_has_zero_curvature():
    v = div_entropy(Tabulated.identity())
    assert v.kind is Kind.FINITE and v.value == 0.0


@pytest.mark.parametrize("r", [0.1, 0.3, 0.5, 0.7, 0.9])
@pytest.mark.parametrize("p", [0.5, 1.0, 2.0, 3.0])
def test_energy_threshold(r, p):
    beta = r * (p + 1) - 2
    v = div_energy(DivisorPower(r), p)
    assert v.tail_exponent == pytest.approx(beta, abs=1e-6)
    if abs(beta + 1) <= 0.05:
        assert v.kind is Kind.INCONCLUSIVE
    else:
        assert v.finite == (r < 1 / (1 + p))


def test_divisor_energy_closed_form():
    # chi = -x^r, chi'' = r(1-r) x^(r-2): ∫_1^inf x^(rp) r(1-r) x^(r-2) dx
    r, p = 0.2, 1.0
    want = r * (1 - r) / (1 - r * p - r)
    assert div_energy(DivisorPower(r), p).value == pytest.approx(want, rel=1e-7)


def test_critical_p():
    assert div_critical_p(DivisorPower(0.5)) == pytest.approx(1.0, abs=0.05)
    assert div_critical_p(Exp()) == math.inf


def test_energy_requires_negative_weight():
    with pytest.raises(PreconditionError):
        div_energy(Tabulated.zero(), 1.0)


@pytest.mark.parametrize("w", [Exp(), DivisorPower(0.3), DivisorPower(0.7)], ids=lambda w: w.spec())
def test_no_go_finite_entropy_iff_bounded(w):
    assert div_entropy(w).finite == (floor_limit(w)[1] <= 1e-3)
