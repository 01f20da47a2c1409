"""Long-time behaviour: thresholds, expansion coefficients, residual rates.

The eigenvalues (2^(1-m) - 1) b accumulate at -b, and which of them govern
the decay of a solution depends on the polynomial weight of the norm used:
in the x^k-weighted L1 norm, decay at rate `a` past the removed modes is
available precisely when k exceeds

    k_threshold(a) = log2(2 b / (b + a)),

which equals m + 1 exactly when `a` is the m-th eigenvalue.  This module
computes those thresholds, projects grid data onto the dual family to get
expansion coefficients, and measures the decay rate of the remainder after
removing the leading modes from a simulated solution, fitting the rate on
a user-chosen time window and comparing it to the first retained
eigenvalue.

The measured curve bottoms out at the discretization floor of the solver
and quadrature.  residual_series estimates that floor by rerunning the
identical pipeline on a pure leading eigenfunction, whose remainder would
vanish in exact arithmetic, and scales it to the data's leading
coefficient.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .eigenbasis import (
    DualPolynomial,
    ExponentialSum,
    ModelParams,
    NumericalError,
    dual_eigenfunction,
    eigenvalue,
    primal_eigenfunction,
)
from .grids import Grid, inner_product_grid, sample, weighted_l1_norm
from .solver import solve

__all__ = [
    "k_threshold",
    "dominant_count",
    "ThresholdReport",
    "spectrum_table",
    "expansion_coefficients",
    "ExpansionReport",
    "residual_series",
]


def k_threshold(a: float, p: ModelParams) -> float:
    """Weight threshold of a decay abscissa a: log2(2b / (b + a)).

    Defined on the open eigenvalue range (-b, b).  Strictly decreasing in
    a; equals m + 1 exactly when a is the m-th eigenvalue, so dyadic
    abscissas evaluate exactly in floating point.
    """
    if not (-p.b < a < p.b):
        raise ValueError(f"abscissa must lie in (-b, b) = ({-p.b}, {p.b}), got {a}")
    return math.log2(2.0 * p.b / (p.b + a))


def dominant_count(a: float, p: ModelParams) -> int:
    """Index of the slowest eigenvalue still above a (so that count = index + 1).

    Returns the unique m with eigenvalue(m+1) <= a < eigenvalue(m), which
    is ceil(k_threshold(a) - 1); nonnegative on the whole admissible range
    a in (-b, b).  Ties at a dyadic eigenvalue resolve exactly because the
    threshold is then an exact integer in floating point.
    """
    return math.ceil(k_threshold(a, p) - 1)


@dataclass(frozen=True)
class ThresholdReport:
    """Spectral location of an abscissa: which modes dominate it and at what weight."""

    abscissa: float
    weight_threshold: float
    dominant_index: int
    dominant_eigenvalues: tuple

    def __iter__(self):
        return iter(enumerate(self.dominant_eigenvalues))


def spectrum_table(a_values, p: ModelParams) -> list:
    """Bracket each abscissa inside the eigenvalue ladder.

    For every a in a_values (each in (-b, b)) the report carries the
    weight threshold of a, the index of the slowest eigenvalue above a,
    and the strictly decreasing list of eigenvalues above a.
    """
    reports = []
    for a in a_values:
        idx = dominant_count(a, p)
        reports.append(
            ThresholdReport(
                abscissa=float(a),
                weight_threshold=k_threshold(a, p),
                dominant_index=idx,
                dominant_eigenvalues=tuple(eigenvalue(m, p) for m in range(idx + 1)),
            )
        )
    return reports


def _basis(order: int, p: ModelParams, tol: float):
    """Primal/dual pairs 0..order (duals normalized to unit pairing)."""
    primals = [primal_eigenfunction(m, p, tol) for m in range(order + 1)]
    duals = [dual_eigenfunction(m, p, primals[m]) for m in range(order + 1)]
    return primals, duals


def expansion_coefficients(u, grid: Grid, p: ModelParams, order: int, tol: float = 1e-14) -> np.ndarray:
    """Project grid data onto the dual family: coefficients 0..order.

    Coefficient m is the trapezoid pairing of the m-th dual polynomial with
    the data; with the biorthonormal normalization used here the data is
    approximated by sum_m coeff_m * primal_m.  Accuracy is limited by the
    quadrature, so the data should be resolved on the grid and negligible
    at x_max.
    """
    if order < 0:
        raise ValueError(f"expansion order must be nonnegative, got {order}")
    u = np.asarray(u, dtype=float)
    _, duals = _basis(order, p, tol)
    return np.array([inner_product_grid(phi, u, grid) for phi in duals])


@dataclass(frozen=True)
class ExpansionReport:
    """Result of a remainder-decay measurement.

    times/residuals trace the weighted norm of the solution minus its
    leading modes.  fitted_rate is the log-linear slope over fit_window and
    target_rate the eigenvalue of the first retained mode; they should
    agree when the data actually contains that mode, the window sits past
    the transient, and the residual stays above floor_estimate.  When the
    retained mode is absent from the data (tiny next_coefficient) the fit
    says nothing and inconclusive is set.
    """

    order: int
    weight: int
    coefficients: np.ndarray
    times: np.ndarray
    residuals: np.ndarray
    fitted_rate: float
    target_rate: float
    next_coefficient: float
    floor_estimate: float
    inconclusive: bool
    fit_window: tuple


def _residual_curve(u0, grid, p, times, order, weight, primal_grids, duals):
    """Solve from u0 and take the weighted norm of (solution - leading modes)."""
    coeffs = np.array([inner_product_grid(phi, u0, grid) for phi in duals])
    res = solve(u0, grid, p, t_end=times[-1], snapshot_times=times)
    eigs = np.array([eigenvalue(m, p) for m in range(order + 1)])
    out = np.empty(len(res.times))
    for i, (t, u_t) in enumerate(zip(res.times, res.states)):
        recon = (coeffs * np.exp(eigs * t)) @ primal_grids
        out[i] = weighted_l1_norm(u_t - recon, grid, weight)
    return coeffs, res.times, out


def residual_series(
    u0,
    grid: Grid,
    p: ModelParams,
    order: int,
    t_end: float,
    weight: int | None = None,
    fit_window: tuple | None = None,
    n_snapshots: int = 25,
    tol: float = 1e-14,
) -> ExpansionReport:
    """Measure how fast a solution sheds everything past its leading modes.

    Solves from u0 to t_end, removes modes 0..order (with coefficients
    projected from u0), and records the (1+x)^weight-weighted L1 norm of the
    remainder at n_snapshots evenly spaced times.  The decay rate is fitted
    on fit_window (default [1/b, 3/b], clipped to t_end) and reported next
    to the first retained eigenvalue.

    The weight defaults to order + 2, the smallest integer strictly above
    the threshold of the target eigenvalue; weights at or below order + 1
    are accepted but warned about, since decay at the target rate is then
    not guaranteed by the theory.

    Marked inconclusive when the first retained mode is essentially absent
    from u0 (relative coefficient below 1e-8) or the window leaves fewer
    than two usable fit points.
    """
    if order < 0:
        raise ValueError(f"expansion order must be nonnegative, got {order}")
    if n_snapshots < 2:
        raise ValueError(f"need at least 2 snapshots, got {n_snapshots}")
    if weight is None:
        weight = order + 2
    weight = int(weight)
    if weight < 0:
        raise ValueError(f"norm weight must be nonnegative, got {weight}")
    if weight <= order + 1:
        warnings.warn(
            f"weight {weight} is at or below the threshold {order + 1} of the "
            f"target eigenvalue; the fitted rate may fall short of the target",
            stacklevel=2,
        )
    u0 = np.asarray(u0, dtype=float)
    target = eigenvalue(order + 1, p)
    lo, hi = fit_window if fit_window is not None else (1.0 / p.b, 3.0 / p.b)
    if not (0.0 <= lo < hi):
        raise ValueError(f"fit window must satisfy 0 <= lo < hi, got ({lo}, {hi})")
    hi = min(float(hi), float(t_end))
    if hi <= lo:
        raise ValueError(f"fit window ({lo}, {hi}) is empty after clipping to t_end={t_end}")

    primals, duals = _basis(order + 1, p, tol)
    primal_grids = np.array([sample(f, grid) for f in primals[: order + 1]])
    times = np.linspace(0.0, float(t_end), int(n_snapshots))

    coeffs_all = np.array([inner_product_grid(phi, u0, grid) for phi in duals])
    coeffs, real_times, residuals = _residual_curve(
        u0, grid, p, times, order, weight, primal_grids, duals[: order + 1]
    )
    if not np.any(residuals > 0.0):
        raise NumericalError(
            "all residuals are exactly zero; nothing to fit (is the initial "
            "data identically zero?)"
        )
    next_coeff = float(coeffs_all[order + 1])

    # discretization floor: the same pipeline applied to a pure leading
    # mode, whose remainder is zero in exact arithmetic
    f0_grid = primal_grids[0]
    _, _, floor_res = _residual_curve(
        f0_grid, grid, p, times, order, weight, primal_grids, duals[: order + 1]
    )
    in_window = (real_times >= lo) & (real_times <= hi)
    floor_estimate = float(abs(coeffs[0]) * floor_res[in_window].max()) if in_window.any() else float("nan")

    mass_scale = weighted_l1_norm(u0, grid, 0)
    inconclusive = abs(next_coeff) < 1e-8 * mass_scale

    usable = in_window & (residuals > 0.0)
    if usable.sum() < 2:
        inconclusive = True
    fitted = float("nan")
    if not inconclusive:
        fitted = float(np.polyfit(real_times[usable], np.log(residuals[usable]), 1)[0])

    return ExpansionReport(
        order=order,
        weight=weight,
        coefficients=coeffs,
        times=real_times,
        residuals=residuals,
        fitted_rate=fitted,
        target_rate=target,
        next_coefficient=next_coeff,
        floor_estimate=floor_estimate,
        inconclusive=bool(inconclusive),
        fit_window=(float(lo), float(hi)),
    )
