"""Numerical toolkit for entropy, energy and Moser-Trudinger type bounds of
radial plurisubharmonic potentials v = chi(log|z|)."""

from .divisorial import div_critical_p, div_energy, div_entropy
from .envelopes import EnvelopeResult, convex_increasing_minorant, envelope_power
from .errors import (
    ConfigError,
    ConsistencyError,
    DomainError,
    EstimationError,
    IntegrandError,
    PoleError,
    PreconditionError,
    RadialPshError,
)
from .grid import GridFunction, log_grid
from .inequalities import (
    InequalityReport,
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
from .quad import IntegralVerdict, Kind, QuadConfig, integrate_halfline, tail_exponent
from .radial import (
    RadialPotential,
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
from .scenarios import RunConfig, run_scenario
from .weights import (
    DivisorPower,
    Exp,
    PowerAlpha,
    SoftplusKink,
    Tabulated,
    TranslatedScaled,
    Weight,
    parse_weight,
)

__version__ = "0.1.0"
