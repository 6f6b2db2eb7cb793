"""Command-line front end: ``sdma-netcap {eval,figure,validate,plan}``.

Output is CSV by default (``--json`` for a JSON mirror). Exit codes: 0
success, 2 configuration or validation error, 3 numerical failure, 4 a
Monte Carlo validation point out of tolerance.
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
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import analytics, design
from . import montecarlo as mc
from .core import (NetcapError, NetworkParams, NumericalError, QuantizationScheme,
                   ValidationError, db_to_linear)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VALIDATION = 0, 2, 3, 4


class ConfigParse(NetcapError, ValueError):
    """Malformed configuration; carries the offending line and/or field."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line, self.field = line, field


class UnknownFigure(NetcapError, ValueError):
    pass


# ------------------------------------------------------------------ config

_ALIASES = {
    "lambda": "lambda", "lam": "lambda", "density": "lambda",
    "alpha": "alpha",
    "m": "antennas", "antennas": "antennas",
    "k": "streams", "streams": "streams",
    "b": "bits", "bits": "bits",
    "beta_db": "beta_db", "beta": "beta",
    "d": "distance", "distance": "distance",
    "snr_db": "snr_db", "snr": "snr_db",
    "power": "power", "noise": "noise",
    "epsilon": "epsilon", "eps": "epsilon",
    "quantization": "quantization",
    "metric": "metric",
}
REQUIRED = ("lambda", "alpha", "antennas")


def _number(text: str, key: str, line: int | None) -> float:
    t = text.strip().lower()
    if t in ("inf", "infinite", "infinity", "+inf"):
        return math.inf
    try:
        return float(t)
    except ValueError:
        raise ConfigParse(f"not a number: {text!r}", line, key) from None


def _values(raw, key: str, line: int | None) -> list:
    """Scalar or list value; text lists are comma separated."""
    if key in ("quantization", "metric"):
        return [str(raw).strip()]
    if isinstance(raw, list):
        return [_number(str(v), key, line) for v in raw]
    if isinstance(raw, (int, float)):
        return [float(raw)]
    parts = [p for p in str(raw).split(",") if p.strip()]
    if not parts:
        raise ConfigParse("empty value", line, key)
    return [_number(p, key, line) for p in parts]


def parse_config_text(text: str) -> dict[str, list]:
    """Flat ``key = value`` (or ``key: value``) text, or a JSON object.

    Values may be comma-separated lists; ``#`` starts a comment.
    """
    stripped = text.lstrip()
    out: dict[str, list] = {}
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigParse(f"invalid JSON: {exc.msg}", exc.lineno) from None
        for k, v in data.items():
            key = _ALIASES.get(str(k).strip().lower())
            if key is None:
                raise ConfigParse("unknown key", None, str(k))
            out[key] = _values(v, key, None)
        return out
    for n, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":" if ":" in line else None
        if sep is None:
            raise ConfigParse("expected 'key = value'", n)
        k, v = line.split(sep, 1)
        key = _ALIASES.get(k.strip().lower())
        if key is None:
            raise ConfigParse("unknown key", n, k.strip())
        if key in out:
            raise ConfigParse("duplicate key", n, k.strip())
        out[key] = _values(v, key, n)
    return out


def apply_overrides(cfg: dict[str, list], overrides: Sequence[str]) -> dict[str, list]:
    cfg = dict(cfg)
    for item in overrides or ():
        if "=" not in item:
            raise ConfigParse(f"override {item!r} must look like key=value")
        k, v = item.split("=", 1)
        key = _ALIASES.get(k.strip().lower())
        if key is None:
            raise ConfigParse("unknown key", None, k.strip())
        cfg[key] = _values(v, key, None)
    return cfg


def _scalar(cfg: dict[str, list], key: str, default=None):
    if key not in cfg:
        if default is None:
            raise ConfigParse("missing required field", None, key)
        return default
    v = cfg[key]
    if len(v) != 1:
        raise ConfigParse("expected a single value", None, key)
    return v[0]


def _as_int(x: float, key: str) -> int:
    if not float(x).is_integer():
        raise ConfigParse(f"expected an integer, got {x}", None, key)
    return int(x)


def params_from_config(cfg: dict[str, list]) -> NetworkParams:
    for key in REQUIRED:
        if key not in cfg:
            raise ConfigParse("missing required field", None, key)
    m = _as_int(_scalar(cfg, "antennas"), "antennas")
    k = _as_int(_scalar(cfg, "streams", m), "streams")
    if "beta" in cfg and "beta_db" in cfg:
        raise ConfigParse("give beta or beta_db, not both", None, "beta")
    beta_kw = ({"beta": _scalar(cfg, "beta")} if "beta" in cfg
               else {"beta_db": _scalar(cfg, "beta_db", 0.0)})
    power_kw = {}
    if "snr_db" in cfg:
        if "power" in cfg or "noise" in cfg:
            raise ConfigParse("snr_db excludes power/noise", None, "snr_db")
        power_kw["snr_db"] = _scalar(cfg, "snr_db")
    else:
        if "power" in cfg:
            power_kw["power"] = _scalar(cfg, "power")
        if "noise" in cfg:
            power_kw["noise"] = _scalar(cfg, "noise")
    return NetworkParams.uniform(_scalar(cfg, "lambda"), _scalar(cfg, "alpha"), m, k,
                                 bits=_scalar(cfg, "bits", math.inf),
                                 dist=_scalar(cfg, "distance", 1.0), **beta_kw, **power_kw)


def load_config(path: str) -> dict[str, list]:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigParse(f"cannot read config: {exc.strerror}") from None


# ------------------------------------------------------------------ output

def fmt(x) -> str:
    """Locale-independent number formatting."""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".10g")


def to_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json_value(x):
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    x = float(x)
    return x if math.isfinite(x) else fmt(x)


def to_json(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    recs = [{h: _json_value(v) for h, v in zip(header, row)} for row in rows]
    return json.dumps(recs, indent=2) + "\n"


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(header, rows, as_json: bool) -> str:
    return to_json(header, rows) if as_json else to_csv(header, rows)


# ----------------------------------------------------------------- figures

@dataclass(frozen=True)
class Variant:
    label: str
    m: int
    bits: float


def _bits_label(b: float) -> str:
    return "Binf" if math.isinf(b) else f"B{int(b)}"


def _variant(m: int, b: float) -> Variant:
    return Variant("siso" if m == 1 else f"M{m}_{_bits_label(b)}", m, b)


@dataclass(frozen=True)
class FigureRecipe:
    name: str
    defaults: dict
    axis: str
    builder: Callable


def _mk(base: dict, m: int, k: int | None = None, bits: float | None = None,
        lam: float | None = None) -> NetworkParams:
    return NetworkParams.uniform(base["lambda"] if lam is None else lam, base["alpha"], m,
                                 m if k is None else k,
                                 bits=base.get("bits", math.inf) if bits is None else bits,
                                 beta_db=base["beta_db"], dist=base["distance"],
                                 snr_db=base["snr_db"])


def _grid(base: dict, key: str, default: Sequence[float]) -> list[float]:
    v = base.get(key)
    if v is None:
        return list(default)
    return list(v) if isinstance(v, list) else [v]


def _mc_cfg(opts) -> mc.SimConfig:
    return mc.SimConfig(trials=opts.trials, seed=opts.seed, workers=opts.workers)


def _fig_outage_or_throughput(base, opts, variants, metric: str):
    lams = _grid(base, "lambda_grid", np.logspace(-4, -1, 25))
    header = ["lambda"] + [v.label for v in variants]
    if opts.mc:
        for v in variants:
            header += [f"mc_{v.label}", f"mc_{v.label}_hw"]
    rows = []
    for lam in lams:
        row = [lam]
        ps = [_mk(base, v.m, bits=v.bits, lam=lam) for v in variants]
        for p in ps:
            row.append(analytics.outage_probability(p) if metric == "outage"
                       else analytics.network_throughput(p))
        if opts.mc:
            cfg = _mc_cfg(opts)
            for p in ps:
                e = mc.estimate(p, cfg, mc.Outage() if metric == "outage" else mc.Throughput())
                row += [e.value, e.half_width]
        rows.append(row)
    return header, rows


def _fig1(base, opts):
    variants = [_variant(1, math.inf), _variant(2, 6), _variant(4, 10), _variant(4, math.inf)]
    return _fig_outage_or_throughput(base, opts, variants, "outage")


def _fig3(base, opts):
    variants = [_variant(1, math.inf), _variant(2, 6), _variant(2, math.inf),
                _variant(4, 10), _variant(4, math.inf)]
    return _fig_outage_or_throughput(base, opts, variants, "throughput")


def _fig5(base, opts):
    eps_grid = _grid(base, "epsilon_grid", np.linspace(0.01, 0.5, 50))
    variants = [_variant(1, math.inf), _variant(2, 10), _variant(2, math.inf),
                _variant(4, 10), _variant(4, math.inf)]
    rows = []
    for eps in eps_grid:
        rows.append([eps] + [analytics.transmission_capacity(_mk(base, v.m, bits=v.bits), eps).capacity
                             for v in variants])
    return ["epsilon"] + [v.label for v in variants], rows


def _fig6(base, opts):
    bits = (5.0, 10.0, 20.0, math.inf)
    eps = base["epsilon"]
    rows = []
    for m in range(1, 13):
        rows.append([m] + [analytics.transmission_capacity(_mk(base, m, bits=b), eps).capacity
                           for b in bits])
    return ["antennas"] + [_bits_label(b) for b in bits], rows


def _fig7(base, opts):
    ms = (3, 4)
    header = ["bits"]
    for m in ms:
        header += [f"M{m}_exact", f"M{m}_holder_single", f"M{m}_holder_double"]
        if opts.mc:
            header += [f"mc_M{m}", f"mc_M{m}_hw"]
    rows = []
    for b in _grid(base, "bits_grid", range(1, 21)):
        row = [b]
        for m in ms:
            p = _mk(base, m, bits=b)
            row += [analytics.ergodic_rate(p), analytics.rate_holder_ub(p),
                    analytics.rate_holder_ub_closed(p)]
            if opts.mc:
                e = mc.estimate(p, _mc_cfg(opts), mc.MeanRate())
                row += [e.value, e.half_width]
        rows.append(row)
    return header, rows


def _fig9(base, opts):
    header = ["snr_db", "exact", "bernoulli_lb", "bernoulli_ub"]
    if opts.mc:
        header += ["mc", "mc_hw"]
    rows = []
    for snr in _grid(base, "snr_grid", range(-10, 61, 5)):
        b = dict(base, snr_db=snr)
        p = _mk(b, base["antennas"], bits=base["bits"])
        bs = analytics.rate_bernoulli_bounds(p)
        row = [snr, bs.exact, bs.lower, bs.upper]
        if opts.mc:
            e = mc.estimate(p, _mc_cfg(opts), mc.MeanRate())
            row += [e.value, e.half_width]
        rows.append(row)
    return header, rows


def _fig10(base, opts):
    m = base["antennas"]
    header = ["lambda"] + [f"K{k}" for k in range(1, m + 1)] + ["adaptive", "adaptive_k"]
    if opts.mc:
        header += [f"mc_K{k}" for k in range(1, m + 1)]
    rows = []
    for lam in _grid(base, "lambda_grid", np.logspace(-4, 0, 33)):
        ps = [_mk(base, m, k, lam=lam) for k in range(1, m + 1)]
        curve = [analytics.network_throughput(p) for p in ps]
        k_ad = design.optimal_streams_throughput(ps[-1], design.StreamMethod.LARGE_K).k_star
        row = [lam] + curve + [curve[k_ad - 1], k_ad]
        if opts.mc:
            row += [mc.estimate(p, _mc_cfg(opts), mc.Throughput()).value for p in ps]
        rows.append(row)
    return header, rows


def _fig11(base, opts):
    m = base["antennas"]
    header = ["epsilon"] + [f"K{k}" for k in range(1, m + 1)] + ["adaptive", "adaptive_k"]
    rows = []
    for eps in _grid(base, "epsilon_grid", np.linspace(0.01, 0.5, 50)):
        ps = [_mk(base, m, k) for k in range(1, m + 1)]
        curve = [analytics.transmission_capacity(p, eps).capacity for p in ps]
        k_ad = design.optimal_streams_tc(ps[-1], eps, design.StreamMethod.LARGE_K).k_star
        rows.append([eps] + curve + [curve[k_ad - 1], k_ad])
    return header, rows


FIGURES: dict[str, FigureRecipe] = {
    "fig1": FigureRecipe("fig1", {"alpha": 4.0, "distance": 1.5, "beta_db": 1.0, "snr_db": 20.0},
                         "lambda", _fig1),
    "fig3": FigureRecipe("fig3", {"alpha": 4.2, "distance": 1.5, "beta_db": 3.0, "snr_db": 15.0},
                         "lambda", _fig3),
    "fig5": FigureRecipe("fig5", {"alpha": 4.5, "distance": 1.0, "beta_db": 1.0, "snr_db": 20.0,
                                  "lambda": 0.01}, "epsilon", _fig5),
    "fig6": FigureRecipe("fig6", {"alpha": 4.0, "epsilon": 0.1, "distance": 1.0, "beta_db": 0.0,
                                  "snr_db": 20.0, "lambda": 0.01}, "antennas", _fig6),
    "fig7": FigureRecipe("fig7", {"alpha": 3.8, "distance": 1.0, "lambda": 0.05, "snr_db": 20.0,
                                  "beta_db": 0.0}, "bits", _fig7),
    "fig9": FigureRecipe("fig9", {"alpha": 4.2, "distance": 1.0, "lambda": 0.05, "antennas": 3,
                                  "bits": 10.0, "beta_db": 0.0, "snr_db": 20.0}, "snr_db", _fig9),
    "fig10": FigureRecipe("fig10", {"alpha": 4.0, "distance": 1.5, "antennas": 4, "bits": 10.0,
                                    "beta_db": 1.0, "snr_db": 15.0}, "lambda", _fig10),
    "fig11": FigureRecipe("fig11", {"alpha": 4.5, "antennas": 4, "bits": 12.0, "beta_db": 1.0,
                                    "snr_db": 20.0, "distance": 1.0, "lambda": 0.01},
                          "epsilon", _fig11),
}

_FIG_KEYS = {"lambda": "lambda", "alpha": "alpha", "distance": "distance", "beta_db": "beta_db",
             "snr_db": "snr_db", "antennas": "antennas", "bits": "bits", "epsilon": "epsilon"}


_AXIS_GRID = {"lambda": "lambda_grid", "epsilon": "epsilon_grid", "bits": "bits_grid",
              "snr_db": "snr_grid"}


def build_figure(name: str, overrides: dict[str, list], opts) -> tuple[list[str], list[list]]:
    """Header and rows of one figure; an override of the swept axis
    replaces its grid, any other override replaces a figure default."""
    recipe = FIGURES.get(name)
    if recipe is None:
        raise UnknownFigure(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")
    base = dict(recipe.defaults)
    for k, v in overrides.items():
        if k not in _FIG_KEYS:
            raise ConfigParse("cannot override this key for figures", None, k)
        if k == recipe.axis and k in _AXIS_GRID:
            base[_AXIS_GRID[k]] = v
        elif k == recipe.axis or len(v) != 1:
            raise ConfigParse("expected a single value", None, k)
        else:
            base[k] = _as_int(v[0], k) if k == "antennas" else v[0]
    base.setdefault("lambda", 0.01)
    return recipe.builder(base, opts)


# ---------------------------------------------------------------- validate

FIG1_GRID = {
    "alpha": [4.0], "distance": [1.5], "beta_db": [1.0], "snr_db": [20.0],
    "lambda": [1e-3, 1e-2, 5e-2],
    "points": [(2, 6.0), (4, 10.0), (4, math.inf), (1, math.inf)],
}
BASE_TOL = {"outage": 1.5e-2, "rate": 5e-2}


def _validation_points(cfg: dict[str, list] | None) -> tuple[str, list[NetworkParams]]:
    if cfg is None:
        g = FIG1_GRID
        pts = []
        for (m, b), lam in itertools.product(g["points"], g["lambda"]):
            pts.append(NetworkParams.uniform(lam, 4.0, m, bits=b, beta_db=1.0, dist=1.5,
                                             snr_db=20.0))
        return "outage", pts
    metric = str(cfg.get("metric", ["outage"])[0]).lower()
    if metric not in BASE_TOL:
        raise ConfigParse(f"metric must be one of {sorted(BASE_TOL)}", None, "metric")
    grid = {k: v for k, v in cfg.items() if k not in ("metric", "quantization", "epsilon")}
    keys = list(grid)
    pts = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        one = {k: [v] for k, v in zip(keys, combo)}
        pts.append(params_from_config(one))
    return metric, pts


def validation_report(cfg: dict[str, list] | None, trials: int, seed: int, workers: int
                      ) -> tuple[str, list[str], list[list], bool]:
    """Monte Carlo vs closed form on a grid.

    Returns (metric, header, rows, all passed). The tolerance of each point
    is max(base, 3 * half-width) so short runs are not failed on noise.
    """
    if trials < 1000:
        raise ConfigParse("validation needs at least 1000 trials", None, "trials")
    metric, pts = _validation_points(cfg)
    scheme = QuantizationScheme.parse(cfg.get("quantization", ["qca"])[0]) if cfg else \
        QuantizationScheme.QCA
    sim = mc.SimConfig(trials=trials, seed=seed, workers=workers, quantization=scheme)
    header = ["point", "lambda", "alpha", "antennas", "streams", "bits", "beta_db", "distance",
              "snr_db", "analytic", "monte_carlo", "half_width", "abs_gap", "rel_gap",
              "tolerance", "status"]
    rows = []
    ok_all = True
    for i, p in enumerate(pts):
        if metric == "outage":
            ref = analytics.outage_probability(p)
            est = mc.estimate(p, sim, mc.Outage())
            gap = abs(est.value - ref)
            tol = max(BASE_TOL["outage"], 3 * est.half_width)
            ok = gap <= tol
        else:
            ref = analytics.ergodic_rate(p)
            est = mc.estimate(p, sim, mc.MeanRate())
            gap = abs(est.value - ref)
            tol = max(BASE_TOL["rate"], 3 * est.half_width / abs(ref))
            ok = gap / abs(ref) <= tol
        ok_all &= ok
        snr_db = math.inf if p.noise == 0 else 10 * math.log10(p.transmit_snr)
        rows.append([i, p.lam, p.alpha, p.m_antennas, p.k_streams, p.bits,
                     10 * math.log10(p.beta), p.d_max, snr_db, ref, est.value, est.half_width,
                     gap, gap / abs(ref) if ref else math.inf, tol, "pass" if ok else "FAIL"])
    return metric, header, rows, ok_all


# -------------------------------------------------------------------- main

def _common_sim_flags(p: argparse.ArgumentParser, seed_default=0):
    p.add_argument("--seed", type=int, default=seed_default)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: $SDMA_NETCAP_WORKERS or 1)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sdma-netcap",
                                 description="Limited-feedback SDMA ad hoc network calculator.")
    sub = ap.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="every closed-form metric for one parameter point")
    ev.add_argument("config")
    ev.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    ev.add_argument("--json", action="store_true")
    ev.add_argument("--out")

    fg = sub.add_parser("figure", help="write the data behind one figure as CSV")
    fg.add_argument("name")
    fg.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    fg.add_argument("--mc", action="store_true", help="add Monte Carlo columns")
    fg.add_argument("--json", action="store_true")
    fg.add_argument("--out")
    _common_sim_flags(fg)

    va = sub.add_parser("validate", help="Monte Carlo vs closed form, with pass/fail")
    va.add_argument("config", nargs="?", help="grid config; default is the outage grid "
                    "alpha=4, d=1.5, beta=1 dB, SNR=20 dB")
    va.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    va.add_argument("--json", action="store_true")
    va.add_argument("--out")
    va.add_argument("--seed", type=int, default=None)
    va.add_argument("--trials", type=int, default=100_000)
    va.add_argument("--workers", type=int, default=None)

    pl = sub.add_parser("plan", help="stream, antenna and feedback planners")
    pl.add_argument("what", choices=("streams", "antennas", "bits"))
    pl.add_argument("--config")
    pl.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    pl.add_argument("--lambda", dest="lam", type=float)
    pl.add_argument("--alpha", type=float)
    pl.add_argument("--antennas", type=int)
    pl.add_argument("--streams", type=int)
    pl.add_argument("--bits", type=str)
    pl.add_argument("--beta-db", type=float)
    pl.add_argument("--distance", type=float)
    pl.add_argument("--snr-db", type=str)
    pl.add_argument("--epsilon", type=float)
    pl.add_argument("--objective", choices=("throughput", "tc"), default="throughput")
    pl.add_argument("--m-max", type=int, default=16)
    g = pl.add_mutually_exclusive_group()
    g.add_argument("--ratio", type=float, help="throughput ratio r (linear)")
    g.add_argument("--ratio-db", type=float, help="throughput ratio in dB")
    g.add_argument("--tc-offset", type=float, help="capacity offset factor c")
    g.add_argument("--rule", choices=("3db",))
    pl.add_argument("--json", action="store_true")
    pl.add_argument("--out")
    return ap


def _workers(arg: int | None) -> int:
    return arg if arg is not None else mc.default_workers()


def _cmd_eval(args) -> int:
    cfg = apply_overrides(load_config(args.config), args.override)
    params = params_from_config(cfg)
    eps = _scalar(cfg, "epsilon", 0.1)
    rec = analytics.evaluate_all(params, eps)
    emit(_render(["metric", "value"], list(rec.items()), args.json), args.out)
    return EXIT_OK


def _cmd_figure(args) -> int:
    args.workers = _workers(args.workers)
    overrides = apply_overrides({}, args.override)
    header, rows = build_figure(args.name, overrides, args)
    emit(_render(header, rows, args.json), args.out)
    return EXIT_OK


def _cmd_validate(args) -> int:
    if args.seed is None:
        if os.environ.get("CI"):
            raise ConfigParse("--seed is mandatory in CI mode", None, "seed")
        args.seed = 0
    cfg = load_config(args.config) if args.config else None
    if args.override:
        if cfg is None:
            raise ConfigParse("--override needs a grid config file")
        cfg = apply_overrides(cfg, args.override)
    metric, header, rows, ok = validation_report(cfg, args.trials, args.seed,
                                                 _workers(args.workers))
    if args.json:
        text = json.dumps({"metric": metric, "trials": args.trials, "seed": args.seed,
                           "passed": ok, "points": json.loads(to_json(header, rows))},
                          indent=2) + "\n"
    else:
        n_ok = sum(r[-1] == "pass" for r in rows)
        text = (f"# metric={metric} trials={args.trials} seed={args.seed}\n"
                + to_csv(header, rows)
                + f"# summary: {n_ok}/{len(rows)} passed\n")
    emit(text, args.out)
    return EXIT_OK if ok else EXIT_VALIDATION


def _plan_params(args) -> tuple[NetworkParams, float]:
    cfg = load_config(args.config) if args.config else {}
    flags = {"lambda": args.lam, "alpha": args.alpha, "antennas": args.antennas,
             "streams": args.streams, "bits": args.bits, "beta_db": args.beta_db,
             "distance": args.distance, "snr_db": args.snr_db, "epsilon": args.epsilon}
    for k, v in flags.items():
        if v is not None:
            cfg[k] = _values(v if isinstance(v, str) else float(v), k, None)
    cfg = apply_overrides(cfg, args.override)
    cfg.setdefault("lambda", [0.01])
    cfg.setdefault("alpha", [4.0])
    if "antennas" not in cfg:
        raise ConfigParse("missing required field", None, "antennas")
    return params_from_config(cfg), _scalar(cfg, "epsilon", 0.1)


def _cmd_plan(args) -> int:
    params, eps = _plan_params(args)
    if args.what == "streams":
        if args.objective == "throughput":
            plans = [design.optimal_streams_throughput(params, meth)
                     for meth in design.StreamMethod]
        else:
            plans = [design.optimal_streams_tc(params, eps, meth) for meth in design.StreamMethod]
        header = ["method", "k_star", "k_continuous"] + [
            f"objective_K{k}" for k in range(1, params.m_antennas + 1)]
        rows = [[p.method.value, p.k_star, p.k_continuous, *p.objective_curve] for p in plans]
    elif args.what == "antennas":
        curve = design.antenna_curve(params, args.m_max)
        header = ["m_star"] + [f"objective_M{m}" for m in range(1, args.m_max + 1)]
        rows = [[design.optimal_antennas_throughput(params, args.m_max), *curve]]
    else:
        if args.rule == "3db":
            plan = design.bits_three_db_rule(params)
            kind, value = "three_db_rule", math.nan
        elif args.tc_offset is not None:
            plan = design.bits_for_tc_offset(params, eps, args.tc_offset)
            kind, value = "tc_gap", args.tc_offset
        elif args.ratio is not None or args.ratio_db is not None:
            r = args.ratio if args.ratio is not None else db_to_linear(args.ratio_db)
            plan = design.bits_for_throughput_ratio(params, r)
            kind, value = "throughput_ratio", r
        else:
            raise ConfigParse("plan bits needs --ratio, --ratio-db, --tc-offset or --rule")
        header = ["bits_required", "offset_kind", "offset_value", "bits_bound"]
        rows = [[plan.bits_required, kind, value, plan.bits_bound]]
    emit(_render(header, rows, args.json), args.out)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"eval": _cmd_eval, "figure": _cmd_figure, "validate": _cmd_validate,
                "plan": _cmd_plan}
    try:
        return handlers[args.command](args)
    except (ConfigParse, UnknownFigure, ValidationError, design.OffsetOutOfRange,
            mc.CodebookTooLarge, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
