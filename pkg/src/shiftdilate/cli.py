"""Command-line experiment runner.

Subcommands: sweep-rho, sweep-bupu, approximate, norm, selftest.
Every config key can come from a plain-text file (``key = value`` lines,
``#`` comments) given with --config, and any value is overridable by a
command-line flag of the same name (the flag wins).

Exit codes: 0 success, 1 usage/config error, 2 budget infeasible,
3 hypothesis violation (zero-mean window).
"""

import argparse
import math
import sys

import numpy as np

from . import selftest as selftest_mod
from . import svgplot
from .bupu import build_regular_bupu
from .convolution import discretized_conv_error, mollify_error
from .errors import (BudgetInfeasible, FunctionSpecError, NormSpecError,
                     ShiftDilateError, WindowZeroMean)
from .pipeline import approximate
from .sampling import Grid, integral, sample
from .spaces import norm, norm_id, parse_norm

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BUDGET = 2
EXIT_HYPOTHESIS = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems with exit code 1."""

    def error(self, message):
        raise _UsageError(message)


def _fmt(value):
    """17-significant-digit decimal for CSV fields."""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def load_config(path):
    config = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise _UsageError(f"{path}:{lineno}: expected 'key = value', got '{raw.strip()}'")
            key, value = line.split("=", 1)
            config[key.strip().replace("-", "_")] = value.strip()
    return config


_DEFAULTS = {
    "dim": 1,
    "extent": 16.0,
    "spacing": 1.0 / 64.0,
    "seed": 0,
    "out": None,
    "plot": False,
    "target": None,
    "window": "gaussian(1)",
    "norm": "lp(1,1)",
    "eps": None,
    "eps_rel": None,
    "margin": None,
    "rho_ladder": "1,0.5,0.25,0.125",
    "delta_ladder": "1,0.5,0.25",
    "tamper": None,
}

_CASTS = {
    "dim": int,
    "extent": float,
    "spacing": float,
    "seed": int,
    "eps": float,
    "eps_rel": float,
    "margin": float,
    "plot": lambda v: str(v).strip().lower() in ("1", "true", "yes", "on"),
}


def _merge_settings(args):
    settings = dict(_DEFAULTS)
    if args.config:
        settings.update(load_config(args.config))
    for key in _DEFAULTS:
        flag_val = getattr(args, key, None)
        if flag_val is not None and flag_val is not False:
            settings[key] = flag_val
    for key, cast in _CASTS.items():
        if settings.get(key) is not None and not isinstance(settings[key], (int, float, bool)):
            try:
                settings[key] = cast(settings[key])
            except ValueError:
                raise _UsageError(f"config key '{key}': cannot parse '{settings[key]}'") from None
    return settings


def _grid(settings):
    try:
        return Grid(settings["dim"], settings["spacing"], settings["extent"])
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _ladder(text):
    text = str(text).strip()
    if not text:
        return []
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise _UsageError(f"cannot parse ladder '{text}'") from None


def _require(settings, key):
    if settings.get(key) is None:
        raise _UsageError(f"missing required setting '{key}' (flag --{key.replace('_', '-')} or config)")
    return settings[key]


def _write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _normalized_window(settings, grid):
    g = sample(_require(settings, "window"), grid)
    mass = integral(g)
    if abs(mass) < 1e-10:
        raise WindowZeroMean(
            f"window '{settings['window']}' has zero mean; the scheme requires a window "
            "with nonvanishing transform at the origin"
        )
    return g * (1.0 / mass)


def cmd_sweep_rho(settings):
    grid = _grid(settings)
    f = sample(_require(settings, "target"), grid)
    g = _normalized_window(settings, grid)
    spec = parse_norm(settings["norm"], grid.dim)
    rows = []
    for rho in sorted(_ladder(settings["rho_ladder"]), reverse=True):
        rows.append((float(rho), mollify_error(f, g, rho, spec)))
    _write_csv(settings["out"], ["rho", "error"], rows)
    return EXIT_OK


def cmd_sweep_bupu(settings):
    grid = _grid(settings)
    f = sample(_require(settings, "target"), grid)
    g = sample(_require(settings, "window"), grid)
    spec = parse_norm(settings["norm"], grid.dim)
    rows = []
    for delta in sorted(_ladder(settings["delta_ladder"]), reverse=True):
        psi = build_regular_bupu(grid, delta)
        rows.append((float(delta), discretized_conv_error(g, f, psi, spec)))
    _write_csv(settings["out"], ["delta", "error"], rows)
    return EXIT_OK


_REPORT_HEADER = ["target", "window", "norm", "eps", "rho", "delta", "nodes",
                  "e_trunc", "e_mollify", "e_disc", "e_total", "wall_ms"]


def _report_row(settings, eps, report):
    return [settings["target"], settings["window"], report.norm_id, float(eps),
            float(report.rho_chosen), float(report.delta_chosen), report.node_count,
            float(report.e_truncate), float(report.e_mollify),
            float(report.e_discretize), float(report.e_total),
            float(report.wall_time * 1000.0)]


def cmd_approximate(settings):
    grid = _grid(settings)
    f = sample(_require(settings, "target"), grid)
    spec = parse_norm(settings["norm"], grid.dim)
    if settings["eps"] is not None and settings["eps_rel"] is not None:
        raise _UsageError("give either eps or eps_rel, not both")
    if settings["eps"] is not None:
        eps = settings["eps"]
    elif settings["eps_rel"] is not None:
        eps = settings["eps_rel"] * norm(f, spec)
    else:
        raise _UsageError("missing tolerance: set eps or eps_rel")
    out = settings["out"] or "approximant.txt"
    report_path = out + ".report.csv"
    try:
        approx, report = approximate(f, settings["window"], eps, spec,
                                     margin=settings["margin"])
    except BudgetInfeasible as exc:
        sys.stderr.write(f"budget infeasible: {exc}\n")
        if exc.partial_report is not None:
            _write_csv(report_path, _REPORT_HEADER,
                       [_report_row(settings, eps, exc.partial_report)])
        return EXIT_BUDGET
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(approx.to_text())
    _write_csv(report_path, _REPORT_HEADER, [_report_row(settings, eps, report)])
    if settings["plot"]:
        if grid.dim != 1:
            raise _UsageError("--plot supports d=1 only")
        h_fn = approx.evaluate(grid)
        svgplot.write_overlay_svg(out + ".svg", grid.axis(),
                                  [("target", f.samples.real),
                                   ("approximant", h_fn.samples.real)])
    print(f"e_total={_fmt(report.e_total)} eps={_fmt(float(eps))} "
          f"rho={_fmt(report.rho_chosen)} delta={_fmt(report.delta_chosen)} "
          f"nodes={report.node_count}")
    return EXIT_OK


def cmd_norm(settings):
    grid = _grid(settings)
    f = sample(_require(settings, "target"), grid)
    spec = parse_norm(settings["norm"], grid.dim)
    print(_fmt(norm(f, spec)))
    return EXIT_OK


def cmd_selftest(settings):
    lines, ok = selftest_mod.run(seed=settings["seed"], tamper=settings["tamper"])
    out = "\n".join(lines) + "\n"
    if settings["out"]:
        with open(settings["out"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK if ok else EXIT_USAGE


def build_parser():
    parser = _Parser(prog="shiftdilate",
                     description="Approximation by finite sums of shifted dilates of a window.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="plain-text key = value config file")
        p.add_argument("--dim", type=int, choices=(1, 2), help="space dimension")
        p.add_argument("--extent", type=float, help="grid half-extent L")
        p.add_argument("--spacing", type=float, help="grid spacing h")
        p.add_argument("--seed", type=int, help="seed for randomized checks")
        p.add_argument("--out", help="output path")
        p.add_argument("--target", help="target function spec, e.g. hat(2)")
        p.add_argument("--window", help="window function spec (default gaussian(1))")
        p.add_argument("--norm", help="norm descriptor, e.g. lp(1,1) or shubin(1)")

    p = sub.add_parser("sweep-rho", help="mollification error over a rho ladder")
    add_common(p)
    p.add_argument("--rho-ladder", dest="rho_ladder", help="comma list, e.g. 1,0.5,0.25")

    p = sub.add_parser("sweep-bupu", help="discretized-convolution error over a delta ladder")
    add_common(p)
    p.add_argument("--delta-ladder", dest="delta_ladder", help="comma list, e.g. 1,0.5,0.25")

    p = sub.add_parser("approximate", help="run the full approximation pipeline")
    add_common(p)
    p.add_argument("--eps", type=float, help="absolute tolerance")
    p.add_argument("--eps-rel", dest="eps_rel", type=float,
                   help="tolerance as a fraction of ||target||")
    p.add_argument("--margin", type=float, help="truncation margin (default L/8)")
    p.add_argument("--plot", action="store_true", default=None,
                   help="write an SVG overlay of target and approximant (d=1)")

    p = sub.add_parser("norm", help="evaluate a norm of a function spec")
    add_common(p)

    p = sub.add_parser("selftest", help="run the deterministic invariant suite")
    add_common(p)
    p.add_argument("--tamper", choices=("weight",),
                   help="test hook: inject a fault and watch the suite catch it")
    return parser


_COMMANDS = {
    "sweep-rho": cmd_sweep_rho,
    "sweep-bupu": cmd_sweep_bupu,
    "approximate": cmd_approximate,
    "norm": cmd_norm,
    "selftest": cmd_selftest,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        settings = _merge_settings(args)
        return _COMMANDS[args.command](settings)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except WindowZeroMean as exc:
        sys.stderr.write(f"hypothesis violation: {exc}\n")
        return EXIT_HYPOTHESIS
    except (FunctionSpecError, NormSpecError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except BudgetInfeasible as exc:
        sys.stderr.write(f"budget infeasible: {exc}\n")
        return EXIT_BUDGET
    except ShiftDilateError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
