"""Command-line front end: ``radialpsh <subcommand> [options]``.

Every subcommand writes rows of one table schema (see ``scenarios.COLUMNS``)
as CSV or JSON. Exit status: 0 on success, 1 if any check is Violated,
2 on usage or configuration errors.

Defaults for any option may be supplied in a JSON file named by the
``RADIALPSH_CONFIG`` environment variable; keys are option names with
underscores (``rel_tol``, ``tail_window``, ...). Unknown keys are rejected.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import divisorial, envelopes, inequalities, radial
from .errors import ConfigError, RadialPshError
from .inequalities import Verdict
from .quad import QuadConfig
from .radial import BALL, PROJECTIVE, RadialPotential
from .scenarios import COLUMNS, SCENARIOS, RunConfig, params_json, report_row, run_scenario, verdict_row
from .weights import DEFAULT_T_FLOOR, PowerAlpha, parse_weight

CONFIG_ENV = "RADIALPSH_CONFIG"
SUITES = ("young", "mt", "aubin", "capacity", "volume", "noncompact", "thmA", "all")


# -- argument types -----------------------------------------------------------

def _floats(text):
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text):
    vals = _floats(text)
    if any(v != int(v) for v in vals):
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}")
    return [int(v) for v in vals]


def _window(text):
    vals = _floats(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError("tail window is 'lo,hi'")
    return tuple(vals)


def _common_parser():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("quadrature")
    g.add_argument("--t-floor", type=float, default=DEFAULT_T_FLOOR,
                   help="lower truncation standing in for -inf (default: %(default)g)")
    g.add_argument("--rel-tol", type=float, default=1e-8,
                   help="relative quadrature tolerance (default: %(default)g)")
    g.add_argument("--tail-window", type=_window, default=(-1e5, -1e2),
                   help="window lo,hi for the tail exponent fit (default: -1e5,-1e2)")
    g.add_argument("--delta-margin", type=float, default=0.05,
                   help="half-width of the inconclusive band around -1 (default: %(default)g)")
    o = p.add_argument_group("output")
    o.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="output format (default: %(default)s)")
    o.add_argument("--out", default="-", help="output path, '-' for stdout (default: %(default)s)")
    o.add_argument("--seed", type=int, default=0,
                   help="seed for randomized sweeps (default: %(default)s)")
    o.add_argument("--jobs", type=int, default=1, help="worker threads (default: %(default)s)")
    w = p.add_argument_group("potential")
    w.add_argument("--weight", action="append", default=None,
                   help="weight spec, repeatable: power:A, divpower:R, exp, softplus, identity, "
                        "zero, ts:BASE:EPS:C (default: power:0.45)")
    w.add_argument("--alpha", type=_floats, default=None,
                   help="shorthand for --weight power:A, comma-separated")
    w.add_argument("--n", type=_ints, default=None, help="complex dimension(s), comma-separated (default: 2)")
    w.add_argument("--p", type=_floats, default=None, help="energy exponent(s), comma-separated (default: 1; suites sweep their own)")
    w.add_argument("--model", choices=(BALL, PROJECTIVE), default=BALL,
                   help="ball or projective chart (default: %(default)s)")
    return p


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="radialpsh",
        description="Entropy, energy and Moser-Trudinger checks for radial psh potentials.",
        epilog=f"Option defaults may be read from the JSON file named by ${CONFIG_ENV}.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_, description=help_)

    add("entropy", "entropy verdict and criterion integral")
    add("energy", "E_p verdict for each p")
    add("critical-p", "supremum of p with finite E_p")
    s = add("mt", "Moser-Trudinger integral for each c")
    s.add_argument("--c", type=_floats, default=None,
                   help="constants c (default: 0.9 x the guaranteed bound)")
    s = add("exp-moment", "exponential moments of -v")
    s.add_argument("--k", type=_floats, default=[1.0, 2.0, 4.0, 8.0, 16.0],
                   help="exponents k (default: 1,2,4,8,16)")
    s = add("capacity", "capacity and volume of sublevel sets")
    s.add_argument("--s", type=_floats, default=[0.1, 0.5, 0.9], help="levels s (default: 0.1,0.5,0.9)")
    s = add("dp-proxy", "d_p proxy between the first two weights")
    add("div-entropy", "divisorial entropy criterion")
    add("div-energy", "divisorial energy for each p")
    s = add("envelope", "envelope of -(-v)^q and the full-mass test")
    s.add_argument("--q", type=_floats, default=[1.5], help="exponent(s) q (default: 1.5)")
    s = add("check", "inequality suites")
    s.add_argument("--suite", choices=SUITES, default="all", help="suite (default: %(default)s)")
    s = add("scenario", "named acceptance scenario")
    s.add_argument("name", help="one of: " + ", ".join(SCENARIOS + ("all",)))
    return parser, sub


def _load_config_defaults(subparsers):
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {CONFIG_ENV}={path}: {exc}")
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    known = {a.dest for sp in subparsers.choices.values() for a in sp._actions} - {"help"}
    bad = sorted(set(data) - known)
    if bad:
        raise ConfigError(f"unknown config keys: {', '.join(bad)}")
    for sp in subparsers.choices.values():
        dests = {a.dest for a in sp._actions}
        sp.set_defaults(**{k: v for k, v in data.items() if k in dests})


def _quad_config(args):
    return QuadConfig(rel_tol=args.rel_tol, tail_window=tuple(args.tail_window),
                      delta_margin=args.delta_margin)


def _as_list(x, conv):
    if x is None:
        return None
    if isinstance(x, (list, tuple)):
        return [conv(v) for v in x]
    return [conv(x)]


def _weights(args):
    specs = list(args.weight or [])
    specs += [f"power:{a!r}" for a in (args.alpha or [])]
    if not specs:
        specs = ["power:0.45"]
    return [parse_weight(s, args.t_floor) for s in specs]


def _potentials(args, default_n=(2,)):
    ns = _as_list(args.n, int) or list(default_n)
    return [RadialPotential(w, n, args.model) for w, n in itertools.product(_weights(args), ns)]


def _ps(args, default=(1.0,)):
    return _as_list(args.p, float) or list(default)


def _base(rp):
    return {"weight": rp.w.spec(), "n": rp.n, "model": rp.model}


# -- subcommands --------------------------------------------------------------

def _cmd_entropy(args, cfg):
    rows = []
    for rp in _potentials(args):
        v = radial.entropy(rp, cfg)
        rows.append(verdict_row("entropy", "entropy", _base(rp), v))
        rows.append(verdict_row("entropy", "entropy_criterion", _base(rp), v.criterion))
    return rows


def _cmd_energy(args, cfg):
    return [verdict_row("energy", "energy", _base(rp) | {"p": p}, radial.energy(rp, p, cfg))
            for rp in _potentials(args) for p in _ps(args)]


def _cmd_critical_p(args, cfg):
    rows = []
    for rp in _potentials(args):
        pc = radial.critical_p(rp, cfg)
        rows.append({**_blank("critical-p", "critical_p", _base(rp)), "verdict": "", "value": pc})
    return rows


def _cmd_mt(args, cfg):
    rows = []
    for rp in _potentials(args):
        for p in _ps(args):
            bound = inequalities.mt_constant_bound(rp.n, p)
            E = radial.energy(rp, p, cfg)
            for c in _as_list(args.c, float) or [0.9 * bound]:
                params = _base(rp) | {"p": p, "c": c, "E_p": E.value}
                if not E.finite or not E.value > 0:
                    rows.append(report_row("mt", inequalities.skipped(
                        "mt", params, f"E_p {E.kind}")))
                    continue
                v = radial.mt_integral(rp, p, c, cfg, E=E)
                rows.append(verdict_row("mt", "mt_integral", params, v))
    return rows


def _cmd_exp_moment(args, cfg):
    return [verdict_row("exp-moment", "exp_moment", _base(rp) | {"k": k},
                        radial.exp_moment(rp, k, cfg))
            for rp in _potentials(args) for k in _as_list(args.k, float)]


def _cmd_capacity(args, cfg):
    rows = []
    for rp in _potentials(args):
        for s in _as_list(args.s, float):
            row = _blank("capacity", "capacity_sublevel", _base(rp) | {"s": s})
            row["value"] = radial.capacity_sublevel(rp, s)
            rows.append(row)
            row = _blank("capacity", "volume_sublevel", _base(rp) | {"s": s})
            row["value"] = radial.volume_sublevel(rp, s)
            rows.append(row)
    return rows


def _cmd_dp_proxy(args, cfg):
    weights = _weights(args)
    if len(weights) != 2:
        raise ConfigError("dp-proxy needs exactly two --weight options")
    rows = []
    for n in _as_list(args.n, int) or [2]:
        rp1, rp2 = (RadialPotential(w, n, args.model) for w in weights)
        for p in _ps(args):
            params = {"weight": rp1.w.spec(), "weight2": rp2.w.spec(), "n": n, "p": p}
            row = _blank("dp-proxy", "dp_proxy", params)
            row["value"] = radial.dp_proxy(rp1, rp2, p, cfg)
            rows.append(row)
    return rows


def _cmd_div_entropy(args, cfg):
    return [verdict_row("div-entropy", "div_entropy", {"weight": w.spec()},
                        divisorial.div_entropy(w, cfg)) for w in _weights(args)]


def _cmd_div_energy(args, cfg):
    return [verdict_row("div-energy", "div_energy", {"weight": w.spec(), "p": p},
                        divisorial.div_energy(w, p, cfg))
            for w in _weights(args) for p in _ps(args)]


def _cmd_envelope(args, cfg):
    rows = []
    for rp in _potentials(args):
        for q in _as_list(args.q, float):
            res = envelopes.envelope_power(rp, q)
            params = _base(rp) | {"q": q, "left_slope_limit": res.left_slope_limit,
                                  "off_contact_mass": res.off_contact_mass}
            row = _blank("envelope", "full_mass", params)
            row["verdict"] = "true" if res.full_mass else "false"
            row["value"] = res.total_mass
            rows.append(row)
    return rows


def _suite_reports(suite, args, cfg):
    if suite == "young":
        grid = np.geomspace(1e-3, 20.0, 100)
        return [inequalities.young_pair(float(s), float(t)) for s in grid for t in grid]
    if suite == "mt":
        return [r for rp in _suite_potentials(args) for p in _ps(args, (1.0,))
                for r in inequalities.check_mt(rp, p, cfg=cfg)]
    if suite == "aubin":
        return [r for rp in _suite_potentials(args) for p in _ps(args, (1.0,))
                for r in inequalities.check_aubin(rp, p, cfg=cfg)]
    if suite == "capacity":
        s_list = [round(0.1 * i, 10) for i in range(1, 10)]
        return [r for rp in _suite_potentials(args, "exp") for p in _ps(args, (1.0,))
                for r in inequalities.check_capacity_energy(rp, p, s_list, cfg)]
    if suite == "volume":
        return [inequalities.check_volume_capacity(rp, 2 * rp.n - 0.5, np.linspace(0.05, 0.95, 19))
                for rp in _suite_potentials(args, "exp")]
    if suite == "noncompact":
        ns = _as_list(args.n, int) or [2]
        return [r for n in ns for p in _ps(args, (1.0, 1.5, 2.0))
                for r in inequalities.noncompact_scaling(n, p, cfg=cfg)]
    if suite == "thmA":
        return [r for rp in _suite_potentials(args) for r in inequalities.check_theorem_a(rp, cfg)]
    raise ConfigError(f"unknown suite {suite!r}")


def _suite_potentials(args, default_weight="power:0.45"):
    if not args.weight and not args.alpha:
        args = argparse.Namespace(**{**vars(args), "weight": [default_weight]})
    return _potentials(args)


def _cmd_check(args, cfg):
    suites = [s for s in SUITES if s != "all"] if args.suite == "all" else [args.suite]
    with ThreadPoolExecutor(max(1, args.jobs)) as pool:
        parts = list(pool.map(lambda s: _suite_reports(s, args, cfg), suites))
    rows = []
    for suite, reports in zip(suites, parts):
        for r in sorted(reports, key=lambda r: (r.name, params_json(r.params))):
            rows.append(report_row(suite, r))
    return rows


def _cmd_scenario(args, cfg):
    if args.name not in SCENARIOS + ("all",):
        raise ConfigError(f"unknown scenario {args.name!r}")
    ns = _as_list(args.n, int)
    run = RunConfig(quad=cfg, seed=args.seed, n=tuple(ns) if ns else None, jobs=args.jobs)
    _, rows = run_scenario(args.name, run)
    return rows


COMMANDS = {
    "entropy": _cmd_entropy, "energy": _cmd_energy, "critical-p": _cmd_critical_p,
    "mt": _cmd_mt, "exp-moment": _cmd_exp_moment, "capacity": _cmd_capacity,
    "dp-proxy": _cmd_dp_proxy, "div-entropy": _cmd_div_entropy, "div-energy": _cmd_div_energy,
    "envelope": _cmd_envelope, "check": _cmd_check, "scenario": _cmd_scenario,
}


# -- output -------------------------------------------------------------------

def _blank(scenario, name, params):
    row = dict.fromkeys(COLUMNS, math.nan)
    row.update(scenario=scenario, name=name, param_json=params_json(params), verdict="")
    return row


def format_number(x):
    """Shortest round-tripping text for a float; nan/inf spelled out."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _json_value(x):
    x = float(x)
    return x if math.isfinite(x) else format_number(x)


def render(rows, fmt, seed=None):
    numeric = COLUMNS[4:]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow([r[c] if c not in numeric else format_number(r[c]) for c in COLUMNS])
        return buf.getvalue()
    out = [{c: (r[c] if c not in numeric else _json_value(r[c])) for c in COLUMNS} for r in rows]
    return json.dumps(out, indent=1) + "\n"


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None):
    parser, sub = build_parser()
    try:
        _load_config_defaults(sub)
    except ConfigError as exc:
        print(f"radialpsh: error: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _quad_config(args)
        rows = COMMANDS[args.command](args, cfg)
    except (ConfigError, ValueError) as exc:
        print(f"radialpsh: error: {exc}", file=sys.stderr)
        return 2
    except RadialPshError as exc:
        print(f"radialpsh: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    if args.command in ("check", "scenario"):
        for r in rows:
            params = json.loads(r["param_json"])
            params.setdefault("seed", args.seed)
            r["param_json"] = json.dumps(params, sort_keys=True)
    _emit(render(rows, args.format), args.out)
    return 1 if any(r["verdict"] == str(Verdict.VIOLATED) for r in rows) else 0


if __name__ == "__main__":
    sys.exit(main())
