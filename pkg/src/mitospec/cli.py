"""Command-line front end.

Four subcommands writing CSV files (17 significant digits, LF endings, one
leading comment line with the run parameters) and SVG figures into the
--out directory:

    eigen      eigen_table.csv, biorthogonality.csv, residuals.csv,
               eigenfunctions.svg
    simulate   snapshots.csv, mass.csv
    expansion  expansion.csv, residual_decay.svg
    spectrum   spectrum.csv

Settings come from flags, which override key=value lines in an optional
--config file.  Exit codes: 0 success, 1 numerical failure, 2 bad
configuration.  Identical inputs produce byte-identical outputs.
"""
from __future__ import annotations

import argparse
import csv
import math
import os
import re
import sys

import numpy as np

from . import __version__
from .asymptotics import residual_series, spectrum_table
from .eigenbasis import (
    ModelParams,
    NumericalError,
    apply_operator,
    combine,
    dual_eigenfunction,
    eigenvalue,
    pairing,
    primal_eigenfunction,
    scale,
)
from .grids import make_grid, sample
from .solver import solve, time_step, total_mass
from .svgplot import line_plot

__all__ = ["main", "ConfigError", "parse_initial_condition"]


class ConfigError(Exception):
    """Bad flag, config line, or parameter value."""


_CONVERTERS = {
    "g": float,
    "b": float,
    "xmax": float,
    "cells": int,
    "dt": float,
    "tol": float,
    "k": int,
    "order": int,
    "ic": str,
    "times": str,
    "a": str,
    "out": str,
}


def _read_config(path: str) -> dict:
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _CONVERTERS:
                raise ConfigError(f"{path}:{lineno}: unknown setting {key!r}")
            try:
                out[key] = _CONVERTERS[key](value)
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mitospec",
        description="Spectral toolkit for the equal-mitosis growth-division equation.",
    )
    parser.add_argument("--version", action="version", version=f"mitospec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    helps = {
        "config": "key=value settings file; flags take precedence",
        "out": "output directory (default: out)",
        "g": "growth speed (default 1)",
        "b": "division rate (default 1)",
        "xmax": "domain length (default 30)",
        "cells": "cell count, odd counts rounded up to even (default 6000)",
        "dt": "time step; must equal h/g, accepted only as confirmation",
        "tol": "series truncation tolerance (default 1e-14)",
        "k": "weight exponent of the residual norm (default order+2)",
        "order": "mode index bound (eigen: tabulate 0..order, default 5; "
                 "expansion: highest removed mode, default 0)",
        "ic": "initial condition: f<m>, gaussian(c,w), indicator(lo,hi), "
              "mode-mix(c0,c1,...), or a CSV path (default per command)",
        "times": "comma-separated snapshot times",
        "a": "comma-separated decay abscissas in (-b, b) (default 0)",
    }

    def add(sp, *names):
        for name in names:
            kind = _CONVERTERS[name] if name in _CONVERTERS else str
            if name in ("config", "out", "ic", "times", "a"):
                sp.add_argument(f"--{name}", help=helps[name])
            else:
                sp.add_argument(f"--{name}", type=kind, help=helps[name])

    sp = sub.add_parser("eigen", help="tabulate eigenfunction pairs and their residuals")
    add(sp, "config", "out", "g", "b", "xmax", "cells", "tol", "order")

    sp = sub.add_parser("simulate", help="run the solver from an initial condition")
    add(sp, "config", "out", "g", "b", "xmax", "cells", "dt", "tol", "ic", "times")

    sp = sub.add_parser("expansion", help="measure remainder decay past the leading modes")
    add(sp, "config", "out", "g", "b", "xmax", "cells", "dt", "tol", "ic", "order", "k", "times")

    sp = sub.add_parser("spectrum", help="bracket decay abscissas in the eigenvalue ladder")
    add(sp, "config", "out", "g", "b", "a")
    return parser


def _merge(args: argparse.Namespace) -> dict:
    cfg = _read_config(args.config) if getattr(args, "config", None) else {}
    merged = dict(cfg)
    for key in _CONVERTERS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    return merged


def _params(s: dict) -> ModelParams:
    return ModelParams(g=s.get("g", 1.0), b=s.get("b", 1.0))


def _grid(s: dict):
    return make_grid(s.get("xmax", 30.0), s.get("cells", 6000))


def _check_dt(s: dict, grid, p: ModelParams):
    if "dt" not in s:
        return
    dt = time_step(grid, p)
    if not math.isclose(s["dt"], dt, rel_tol=1e-9, abs_tol=0.0):
        raise ConfigError(
            f"dt={s['dt']:g} conflicts with the scheme step h/g={dt:.17g}; "
            f"adjust cells or xmax instead of dt"
        )


def _parse_times(text: str):
    try:
        times = [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad times list: {text!r}") from exc
    if not times:
        raise ConfigError(f"times list is empty: {text!r}")
    if any(tb < ta for ta, tb in zip(times, times[1:])):
        raise ConfigError(f"times must be nondecreasing: {text!r}")
    return times


def _parse_abscissas(text: str):
    try:
        values = [float(a) for a in text.split(",") if a.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad abscissa list: {text!r}") from exc
    if not values:
        raise ConfigError(f"abscissa list is empty: {text!r}")
    return values


_IC_CALL = re.compile(r"^([a-z-]+)\(([^)]*)\)$")


def parse_initial_condition(spec: str, grid, p: ModelParams, tol: float = 1e-14):
    """Nodal values for an initial-condition description.

    Forms: f<m> (eigenfunction), gaussian(center,width),
    indicator(lo,hi), mode-mix(c0,c1,...), or a path to a two-column CSV
    (x,u with strictly increasing x; zero outside the tabulated range).
    """
    spec = spec.strip()
    m = re.fullmatch(r"f(\d+)", spec)
    if m:
        return sample(primal_eigenfunction(int(m.group(1)), p, tol), grid)
    call = _IC_CALL.fullmatch(spec)
    if call:
        name, argtext = call.groups()
        try:
            argv = [float(a) for a in argtext.split(",")] if argtext.strip() else []
        except ValueError as exc:
            raise ConfigError(f"bad arguments in initial condition {spec!r}") from exc
        if name == "gaussian":
            if len(argv) != 2 or argv[1] <= 0:
                raise ConfigError("gaussian takes (center, width) with width > 0")
            c, w = argv
            return np.exp(-((grid.nodes - c) ** 2) / (2.0 * w * w))
        if name == "indicator":
            if len(argv) != 2 or argv[1] <= argv[0]:
                raise ConfigError("indicator takes (lo, hi) with hi > lo")
            lo, hi = argv
            return ((grid.nodes >= lo) & (grid.nodes <= hi)).astype(float)
        if name == "mode-mix":
            if not argv:
                raise ConfigError("mode-mix needs at least one coefficient")
            u = np.zeros_like(grid.nodes)
            for i, c in enumerate(argv):
                if c:
                    u += c * sample(primal_eigenfunction(i, p, tol), grid)
            return u
        raise ConfigError(f"unknown initial condition {spec!r}")
    if os.path.isfile(spec):
        return _ic_from_csv(spec, grid)
    raise ConfigError(
        f"unknown initial condition {spec!r} (not a recognized form and not a file)"
    )


def _ic_from_csv(path: str, grid):
    xs, us = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ConfigError(f"{path}:{lineno}: expected two columns x,u")
            try:
                x, u = float(parts[0]), float(parts[1])
            except ValueError as exc:
                if lineno == 1:
                    continue  # header row
                raise ConfigError(f"{path}:{lineno}: non-numeric row") from exc
            xs.append(x)
            us.append(u)
    if len(xs) < 2:
        raise ConfigError(f"{path}: need at least two data rows")
    xs_arr, us_arr = np.array(xs), np.array(us)
    if np.any(np.diff(xs_arr) <= 0):
        raise ConfigError(f"{path}: x column must be strictly increasing")
    return np.interp(grid.nodes, xs_arr, us_arr, left=0.0, right=0.0)


def _g17(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.17g" % float(value)


def _joined(values) -> str:
    return ",".join(_g17(v) for v in values)


def _write_csv(path: str, comment: str, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# {comment}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, str) else _g17(v) for v in row])


def _run_comment(p: ModelParams, grid=None, dt=None, tol=None, extra="") -> str:
    parts = [f"mitospec {__version__}", f"g={_g17(p.g)}", f"b={_g17(p.b)}"]
    if grid is not None:
        parts += [f"h={_g17(grid.h)}", f"x_max={_g17(grid.x_max)}"]
    if dt is not None:
        parts.append(f"dt={_g17(dt)}")
    if tol is not None:
        parts.append(f"tolerance={_g17(tol)}")
    if extra:
        parts.append(extra)
    return " ".join(parts)


def _out_dir(s: dict) -> str:
    out = s.get("out", "out")
    os.makedirs(out, exist_ok=True)
    return out


def _warn_tail_mass(u, grid, label: str):
    # domain-truncation guard: the scheme drops the halving source past
    # x_max/2, which is only valid while the solution lives well inside
    absu = np.abs(np.asarray(u, dtype=float))
    w = grid.trapezoid_weights()
    total = float(w @ absu)
    if total == 0.0:
        return
    tail = float((w * (grid.nodes >= grid.x_max / 2.0)) @ absu)
    if tail > 1e-8 * total:
        print(
            f"warning: {label} carries {tail / total:.2e} of its mass in "
            f"[x_max/2, x_max]; increase xmax for trustworthy results",
            file=sys.stderr,
        )


def cmd_eigen(s: dict) -> int:
    p = _params(s)
    grid = _grid(s)
    tol = s.get("tol", 1e-14)
    order = s.get("order", 5)
    if order < 0:
        raise ConfigError(f"order must be nonnegative, got {order}")
    primals = [primal_eigenfunction(m, p, tol) for m in range(order + 1)]
    duals = [dual_eigenfunction(m, p, primals[m]) for m in range(order + 1)]
    eigs = [eigenvalue(m, p) for m in range(order + 1)]
    out = _out_dir(s)
    comment = _run_comment(p, grid, tol=tol)

    _write_csv(
        os.path.join(out, "eigen_table.csv"),
        comment,
        ["m", "eigenvalue", "series_coefficients", "dual_coefficients"],
        [
            (m, eigs[m], _joined(c for c, _ in primals[m].terms), _joined(duals[m].coeffs))
            for m in range(order + 1)
        ],
    )

    _write_csv(
        os.path.join(out, "biorthogonality.csv"),
        comment,
        ["m"] + [f"f{j}" for j in range(order + 1)],
        [
            (m, *[pairing(duals[m], primals[j]) for j in range(order + 1)])
            for m in range(order + 1)
        ],
    )

    xs = np.geomspace(0.01 * p.g / p.b, 20.0 * p.g / p.b, 200)
    rows = []
    for m in range(order + 1):
        resid = combine(apply_operator(primals[m], p), scale(primals[m], -eigs[m]))
        rvals = np.abs(resid(xs))
        fvals = np.abs(primals[m](xs))
        rows.append((m, rvals.max(), (rvals / np.maximum(1.0, fvals)).max()))
    _write_csv(
        os.path.join(out, "residuals.csv"),
        comment,
        ["m", "sup_residual", "sup_residual_relative"],
        rows,
    )

    shown = min(order, 4)
    line_plot(
        os.path.join(out, "eigenfunctions.svg"),
        [(f"index {m}", grid.nodes, sample(primals[m], grid)) for m in range(shown + 1)],
        title="Primal eigenfunctions",
        xlabel="size x",
        ylabel="f_m(x)",
    )
    print(f"wrote eigen_table.csv, biorthogonality.csv, residuals.csv, eigenfunctions.svg to {out} (indices 0..{order})")
    return 0


def cmd_simulate(s: dict) -> int:
    p = _params(s)
    grid = _grid(s)
    _check_dt(s, grid, p)
    tol = s.get("tol", 1e-14)
    times = _parse_times(s.get("times", "0,1,2"))
    ic = s.get("ic", "f0")
    u0 = parse_initial_condition(ic, grid, p, tol)
    _warn_tail_mass(u0, grid, "the initial condition")
    res = solve(u0, grid, p, t_end=times[-1], snapshot_times=times)
    _warn_tail_mass(res.final, grid, "the final state")
    out = _out_dir(s)
    comment = _run_comment(p, grid, dt=res.dt, tol=tol, extra=f"ic={ic}")

    def snapshot_rows():
        for t, state in zip(res.times, res.states):
            for x, u in zip(grid.nodes, state):
                yield (t, x, u)

    _write_csv(os.path.join(out, "snapshots.csv"), comment, ["t", "x", "u"], snapshot_rows())

    mass0 = total_mass(res.states[0] if len(res.states) else u0, grid)
    rows = []
    for t, state in zip(res.times, res.states):
        mass = total_mass(state, grid)
        expected = mass0 * math.exp(p.b * t)
        rel = abs(mass - expected) / abs(expected) if expected != 0.0 else float("nan")
        rows.append((t, mass, expected, rel))
    _write_csv(
        os.path.join(out, "mass.csv"),
        comment,
        ["t", "total_mass", "expected_mass", "relative_error"],
        rows,
    )
    print(f"wrote snapshots.csv and mass.csv to {out} ({res.n_steps} steps)")
    return 0


def cmd_expansion(s: dict) -> int:
    p = _params(s)
    grid = _grid(s)
    _check_dt(s, grid, p)
    tol = s.get("tol", 1e-14)
    order = s.get("order", 0)
    weight = s.get("k")
    ic = s.get("ic", "gaussian(5,1)")
    u0 = parse_initial_condition(ic, grid, p, tol)
    _warn_tail_mass(u0, grid, "the initial condition")
    if "times" in s:
        times = _parse_times(s["times"])
        t_end, n_snapshots = times[-1], max(len(times), 2)
    else:
        t_end, n_snapshots = 3.0 / p.b, 25
    try:
        report = residual_series(
            u0, grid, p, order=order, t_end=t_end,
            weight=weight, n_snapshots=n_snapshots, tol=tol,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out = _out_dir(s)
    comment = _run_comment(
        p, grid, dt=time_step(grid, p), tol=tol,
        extra=f"ic={ic} window={_g17(report.fit_window[0])}..{_g17(report.fit_window[1])}",
    )
    header = [
        "t", "residual", "M", "k", "fitted_rate", "target_rate",
        "floor_estimate", "inconclusive", "next_coefficient",
        *[f"alpha_{m}" for m in range(order + 1)],
    ]
    rows = [
        (
            t, r, report.order, report.weight, report.fitted_rate,
            report.target_rate, report.floor_estimate, report.inconclusive,
            report.next_coefficient, *report.coefficients,
        )
        for t, r in zip(report.times, report.residuals)
    ]
    _write_csv(os.path.join(out, "expansion.csv"), comment, header, rows)

    series = [("residual", report.times, report.residuals)]
    if math.isfinite(report.floor_estimate) and report.floor_estimate > 0:
        series.append(
            ("floor", report.times, np.full_like(report.times, report.floor_estimate))
        )
    lo = report.fit_window[0]
    window = report.times >= lo
    if window.any() and report.residuals[window][0] > 0:
        t_w = report.times[window]
        r0 = report.residuals[window][0]
        if not report.inconclusive and math.isfinite(report.fitted_rate):
            series.append(
                ("fit", t_w, r0 * np.exp(report.fitted_rate * (t_w - t_w[0])))
            )
        series.append(
            ("target slope", t_w, r0 * np.exp(report.target_rate * (t_w - t_w[0])))
        )
    line_plot(
        os.path.join(out, "residual_decay.svg"),
        series,
        title=f"Remainder past modes 0..{order}",
        xlabel="time",
        ylabel=f"weighted residual (k={report.weight})",
        logy=True,
        markers=True,
    )
    if report.inconclusive:
        verdict = "inconclusive (first retained mode absent from the data)"
    else:
        verdict = f"fitted rate {report.fitted_rate:.4f} vs target {report.target_rate:.4f}"
    print(f"wrote expansion.csv and residual_decay.svg to {out}; {verdict}")
    return 0


def cmd_spectrum(s: dict) -> int:
    p = _params(s)
    a_values = _parse_abscissas(s.get("a", "0"))
    try:
        reports = spectrum_table(a_values, p)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out = _out_dir(s)
    comment = _run_comment(p)
    _write_csv(
        os.path.join(out, "spectrum.csv"),
        comment,
        ["a", "k_a", "m_a", "dominant_eigenvalues"],
        [
            (r.abscissa, r.weight_threshold, r.dominant_index, _joined(r.dominant_eigenvalues))
            for r in reports
        ],
    )
    print(f"wrote spectrum.csv to {out} ({len(reports)} abscissas)")
    return 0


_COMMANDS = {
    "eigen": cmd_eigen,
    "simulate": cmd_simulate,
    "expansion": cmd_expansion,
    "spectrum": cmd_spectrum,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        settings = _merge(args)
        return _COMMANDS[args.command](settings)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
