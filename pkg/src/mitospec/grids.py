"""Uniform dyadic-friendly grids on [0, x_max] and weighted norms on them.

The solver's halving term reads u at 2x, so grid nodes must map onto grid
nodes under doubling of the index: the cell count is forced to be even.
Quadrature is plain trapezoid; the eigenfunctions this library produces are
flat to all orders at x = 0 and decay exponentially, so trapezoid converges
superalgebraically for the integrals that matter here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["Grid", "make_grid", "sample", "weighted_l1_norm", "inner_product_grid"]


@dataclass(frozen=True)
class Grid:
    """Uniform grid: n_cells cells of width h covering [0, x_max], n_cells even."""

    x_max: float
    n_cells: int
    h: float = field(init=False)
    nodes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        h = self.x_max / self.n_cells
        nodes = np.linspace(0.0, self.x_max, self.n_cells + 1)
        nodes.flags.writeable = False
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "nodes", nodes)

    def __len__(self) -> int:
        return self.n_cells + 1

    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(self.n_cells + 1, self.h)
        w[0] = w[-1] = self.h / 2.0
        return w


def make_grid(x_max: float, n_cells: int) -> Grid:
    """Build a uniform grid; an odd n_cells is rounded up to the next even count.

    x_max must be positive and finite, n_cells at least 4.
    """
    if not (x_max > 0.0 and math.isfinite(x_max)):
        raise ValueError(f"domain length must be positive and finite, got {x_max}")
    n = int(n_cells)
    if n != n_cells:
        raise ValueError(f"cell count must be an integer, got {n_cells}")
    if n < 4:
        raise ValueError(f"need at least 4 cells, got {n}")
    if n % 2:
        n += 1
    return Grid(float(x_max), n)


def sample(f, grid: Grid) -> np.ndarray:
    """Values of f on the grid nodes as a fresh float array.

    f may be anything callable on a float array (ExponentialSum, DualPolynomial,
    numpy ufunc, plain function).
    """
    vals = np.asarray(f(grid.nodes), dtype=float)
    if vals.shape != grid.nodes.shape:
        raise ValueError(
            f"sampled values have shape {vals.shape}, expected {grid.nodes.shape}"
        )
    return vals.copy()


def weighted_l1_norm(v, grid: Grid, k: float = 0) -> float:
    """Trapezoid approximation of integral |v(x)| (1+x)^k dx over the grid.

    k is the weight exponent, >= 0; k = 0 gives the plain L1 norm.  Larger
    k penalizes mass far out, which is what the decay-rate theory needs.
    The absolute value is taken node-wise before quadrature.
    """
    if k < 0:
        raise ValueError(f"weight exponent must be nonnegative, got {k}")
    vals = np.asarray(v, dtype=float)
    if vals.shape != grid.nodes.shape:
        raise ValueError(f"values have shape {vals.shape}, expected {grid.nodes.shape}")
    integrand = np.abs(vals) * (1.0 + grid.nodes) ** k
    return float(np.dot(grid.trapezoid_weights(), integrand))


def inner_product_grid(phi, v, grid: Grid) -> float:
    """Trapezoid approximation of integral phi(x) v(x) dx over the grid."""
    vals = np.asarray(v, dtype=float)
    if vals.shape != grid.nodes.shape:
        raise ValueError(f"values have shape {vals.shape}, expected {grid.nodes.shape}")
    pv = np.asarray(phi(grid.nodes), dtype=float)
    return float(np.dot(grid.trapezoid_weights(), pv * vals))
