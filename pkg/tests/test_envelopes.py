import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radialpsh import Exp, PowerAlpha, RadialPotential, Tabulated, convex_increasing_minorant, envelope_power
from radialpsh.envelopes import maximality_defect
from radialpsh.grid import GridFunction
from radialpsh.scenarios import dip_obstacle, random_perturbed_convex


def brute_force_envelope(ts, vals):
    """Pointwise sup of affine minorants with slope >= 0 (slopes from pair secants)."""
    sec = [(vals[j] - vals[i]) / (ts[j] - ts[i]) for i in range(ts.size) for j in range(i + 1, ts.size)]
    slopes = np.array([0.0] + [s for s in sec if s >= 0])
    best = np.full(ts.shape, -np.inf)
    for a in slopes:
        b = np.min(vals - a * ts)
        best = np.maximum(best, a * ts + b)
    return best


samples = st.lists(st.floats(-5.0, 5.0, allow_nan=False), min_size=3, max_size=30)


@settings(max_examples=80, deadline=None)
@given(samples, st.integers(0, 2**32 - 1))
def test_matches_brute_force(vals, seed):
    rng = np.random.default_rng(seed)
    ts = np.sort(rng.choice(np.linspace(-10, 0, 200), size=len(vals), replace=False))
    vals = np.array(vals)
    res = convex_increasing_minorant(GridFunction(ts, vals))
    assert res.env.vals == pytest.approx(brute_force_envelope(ts, vals), abs=1e-9)


@settings(max_examples=80, deadline=None)
@given(samples)
def test_shape_idempotence_and_minorant(vals):
    ts = np.linspace(-5, 0, len(vals))
    g = GridFunction(ts, vals)
    res = convex_increasing_minorant(g)
    e = res.env.vals
    assert np.all(e <= g.vals + 1e-12)
    assert np.all(np.diff(e) >= -1e-12)
    assert np.all(np.diff(np.diff(e) / np.diff(ts)) >= -1e-9)
    again = convex_increasing_minorant(res.env).env.vals
    assert again == pytest.approx(e, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(samples, samples)
def test_monotone_in_obstacle(a, b):
    k = min(len(a), len(b))
    ts = np.linspace(-5, 0, k)
    lo = np.minimum(a[:k], b[:k])
    e_lo = convex_increasing_minorant(GridFunction(ts, lo)).env.vals
    e_hi = convex_increasing_minorant(GridFunction(ts, np.array(a[:k]))).env.vals
    assert np.all(e_lo <= e_hi + 1e-12)


def test_convex_input_is_fixed():
    ts = np.linspace(-3, 0, 50)
    g = GridFunction(ts, np.expm1(ts))
    res = convex_increasing_minorant(g)
    assert np.array_equal(res.env.vals, g.vals)
    assert res.contact.all()


def test_known_hull():
    ts = np.linspace(-1.0, 0.0, 11)
    # decreasing convex obstacle: flattened to its minimum
    res = convex_increasing_minorant(GridFunction(ts, ts**2))
    assert res.env.vals == pytest.approx(np.zeros_like(ts), abs=1e-15)
    # increasing concave obstacle: the chord
    res = convex_increasing_minorant(GridFunction(ts, -(ts**2)))
    assert res.env.vals == pytest.approx(ts, abs=1e-12)
    ts = np.linspace(-1.0, -0.1, 10)
    g = GridFunction(ts, -((-ts) ** 2))
    # nondecreasing: already concave increasing -> chord from the first to the last node
    res = convex_increasing_minorant(g)
    chord = -1.0 + (ts + 1.0) * ((-0.01 + 1.0) / 0.9)
    assert res.env.vals == pytest.approx(chord, abs=1e-12)


def test_dip_contact_support():
    ts = np.linspace(-6.0, 0.0, 601)
    res = convex_increasing_minorant(GridFunction(ts, dip_obstacle(ts)), n=2)
    assert res.total_mass > 0
    assert res.off_contact_mass <= 1e-8 * res.total_mass
    assert not res.contact.all()


def test_random_inputs_contact_and_maximality():
    rng = np.random.default_rng(7)
    for _ in range(20):
        g = random_perturbed_convex(rng)
        res = convex_increasing_minorant(g, n=3)
        assert res.off_contact_mass <= 1e-8 * res.total_mass
        assert maximality_defect(g, res, rng, trials=50) <= 1e-9


def test_discrete_ma_dimension_factor():
    ts = np.array([-2.0, -1.0, 0.0])
    g = GridFunction(ts, np.array([0.0, 1.0, 3.0]))
    assert convex_increasing_minorant(g).discrete_ma == pytest.approx([1.0])
    assert convex_increasing_minorant(g, n=2).discrete_ma == pytest.approx([2 * 1.0 * 1.0])


@pytest.mark.parametrize("w,want", [(PowerAlpha(0.45), True), (Exp(), True), (Tabulated.identity(), False)],
                         ids=["power", "exp", "identity"])
def test_full_mass(w, want):
    res = envelope_power(RadialPotential(w, 2), 1.5 if want else 2.0)
    assert res.full_mass is want
