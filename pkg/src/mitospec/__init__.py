"""mitospec: explicit spectral toolkit for the equal-mitosis growth-division model.

Cells grow at speed g and split into two equal halves at rate b.  The
generator of that dynamic has a fully explicit eigenstructure, and this
package exposes it end to end: eigenvalue ladder, primal eigenfunctions as
exact exponential sums, polynomial dual eigenfunctions, a shift-exact
splitting solver for the time-dependent equation, and tooling that checks
the predicted long-time decay rates against simulation.
"""
from .eigenbasis import (
    DualPolynomial,
    ExponentialSum,
    ModelParams,
    NumericalError,
    apply_adjoint,
    apply_operator,
    combine,
    derivative,
    dilate,
    dual_eigenfunction,
    eigenvalue,
    eval_exp_sum,
    moment,
    normalize_mass,
    pairing,
    primal_eigenfunction,
    scale,
)
from .grids import Grid, inner_product_grid, make_grid, sample, weighted_l1_norm
from .solver import SolveResult, solve, step, time_step, total_mass
from .asymptotics import (
    ExpansionReport,
    ThresholdReport,
    dominant_count,
    expansion_coefficients,
    k_threshold,
    residual_series,
    spectrum_table,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ModelParams",
    "NumericalError",
    "ExponentialSum",
    "DualPolynomial",
    "eigenvalue",
    "primal_eigenfunction",
    "eval_exp_sum",
    "derivative",
    "dilate",
    "scale",
    "combine",
    "apply_operator",
    "moment",
    "normalize_mass",
    "dual_eigenfunction",
    "apply_adjoint",
    "pairing",
    "Grid",
    "make_grid",
    "sample",
    "weighted_l1_norm",
    "inner_product_grid",
    "time_step",
    "step",
    "solve",
    "SolveResult",
    "total_mass",
    "k_threshold",
    "dominant_count",
    "ThresholdReport",
    "spectrum_table",
    "expansion_coefficients",
    "ExpansionReport",
    "residual_series",
]
