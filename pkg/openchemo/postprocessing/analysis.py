########################################################################################################################
# Copyright 2024 the authors (see AUTHORS file for full list).                                                         #
#                                                                                                                      #
#                                                                                                                      #
# This file is part of OpenChemo.                                                                                      #
#                                                                                                                      #
#                                                                                                                      #
# OpenChemo is free software: you can redistribute it and/or modify it under the terms of the GNU Lesser General       #
# Public License as published by the Free Software Foundation, either version 2.1 of the License, or (at your option)  #
# any later version.                                                                                                   #
#                                                                                                                      #
# OpenChemo is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY; without even the implied      #
# warranty of MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.                                                     #
# See the GNU Lesser General Public License for more details.                                                          #
#                                                                                                                      #
# You should have received a copy of the GNU Lesser General Public License along with OpenChemo. If not, see           #
# <https://www.gnu.org/licenses/>.                                                                                     #
########################################################################################################################


r"""
Post-processing functions related to measuring the results of a run: discrete L² norms and distances, the refinement
error between two nested grids, observed convergence orders, and the stationarity diagnostic.

All norms use the trapezoid weights: Δx with half-weights at the two boundary nodes for the density,
and additionally the velocity trapezoid weights for the distribution function.
"""

from typing import List, Optional, Sequence

import numpy as np

from ..grids import SpatialGrid, VelocityGrid, bracket
from ..system_solvers import Snapshot


def weighted_l2_norm(u: np.ndarray, x_grid: SpatialGrid, v_grid: Optional[VelocityGrid] = None) -> float:
    """
    Discrete L² norm of a nodal profile (shape `(Nx+1,)`) or of a distribution (shape `(Nx+1, Nv+1)`, needs `v_grid`).
    """
    u = np.asarray(u, dtype=float)
    if u.ndim == 1:
        return float(np.sqrt(x_grid.weights @ u**2))
    if v_grid is None:
        raise ValueError("A velocity grid is needed for the norm of a distribution function.")
    return float(np.sqrt(x_grid.weights @ bracket(u**2, v_grid)))


def relative_l2_distance(u:         np.ndarray,
                         reference: np.ndarray,
                         x_grid:    SpatialGrid,
                         v_grid:    Optional[VelocityGrid] = None) -> float:
    """
    ‖u - reference‖ / ‖reference‖. Returns 0 for two zero profiles and inf if only the reference is zero.
    """
    difference = weighted_l2_norm(np.asarray(u) - np.asarray(reference), x_grid, v_grid)
    scale = weighted_l2_norm(reference, x_grid, v_grid)
    if scale == 0:
        return 0.0 if difference == 0 else np.inf
    return difference / scale


def restrict_to_coarse(u_fine: np.ndarray, fine_grid: SpatialGrid, coarse_grid: SpatialGrid) -> np.ndarray:
    """
    Restrict a nodal array to the coarse grid by keeping every other node.
    Identical grids are allowed and return the input unchanged.

    Raises a ValueError if the fine grid is not the coarse grid with dx halved.
    """
    if fine_grid.Nx == coarse_grid.Nx and np.isclose(fine_grid.x_min, coarse_grid.x_min) \
            and np.isclose(fine_grid.x_max, coarse_grid.x_max):
        return np.asarray(u_fine)
    if not fine_grid.is_refinement_of(coarse_grid):
        raise ValueError(f"{fine_grid} does not nest in {coarse_grid}, refinement errors need Nx doubling.")
    return np.asarray(u_fine)[::2]


def refinement_error(u_fine:        np.ndarray,
                     u_coarse:      np.ndarray,
                     u_coarse_0:    np.ndarray,
                     fine_grid:     SpatialGrid,
                     coarse_grid:   SpatialGrid,
                     v_grid:        Optional[VelocityGrid] = None) -> float:
    """
    e_Δx = ‖u_Δx(t) - u_2Δx(t)‖ / ‖u_2Δx(0)‖ measured on the coarse grid.

    Parameters
    ----------
    * u_fine:       Fine grid result at time t.
    * u_coarse:     Coarse grid result at time t.
    * u_coarse_0:   Coarse grid initial data.
    * fine_grid:    Grid of the fine run.
    * coarse_grid:  Grid of the coarse run.
    * v_grid:       Velocity grid, needed when the arrays are distribution functions.
    """
    restricted = restrict_to_coarse(u_fine, fine_grid, coarse_grid)
    return weighted_l2_norm(restricted - u_coarse, coarse_grid, v_grid) / weighted_l2_norm(u_coarse_0, coarse_grid, v_grid)


def observed_orders(errors: Sequence[float]) -> List[float]:
    """log2(e_{k-1}/e_k) for every entry after the first, NaN for the first entry and where an error is 0."""
    orders = [np.nan]
    for previous, current in zip(errors[:-1], errors[1:]):
        if previous > 0 and current > 0:
            orders.append(float(np.log2(previous / current)))
        else:
            orders.append(np.nan)
    return orders


class ConvergenceReport:
    """
    Refinement errors and observed orders for one ε.

    Row k compares the run on Nx_list[k] with the run on Nx_list[k-1]; the first row only holds the coarsest grid.
    """

    def __init__(self, eps: float, Nx_list: Sequence[int], errors_n: Sequence[float],
                 errors_f: Optional[Sequence[float]] = None) -> None:
        self.eps        = eps
        self.Nx_list    = list(Nx_list)
        """Grid sizes, doubling."""
        self.errors_n   = list(errors_n)
        """Density errors, NaN in the first row."""
        self.errors_f   = None if errors_f is None else list(errors_f)
        """Distribution function errors, if the scheme provides f."""
        self.orders_n   = self._orders(self.errors_n)
        """Observed orders of the density errors, NaN for the first two rows."""
        self.orders_f   = None if errors_f is None else self._orders(self.errors_f)

    @staticmethod
    def _orders(errors: List[float]) -> List[float]:
        if len(errors) < 2:
            return [np.nan] * len(errors)
        return [np.nan] + observed_orders(errors[1:])

    @property
    def rows(self):
        """(Nx, e_Δx(n), order) per grid."""
        return list(zip(self.Nx_list, self.errors_n, self.orders_n))

    def __repr__(self) -> str:
        lines = [f"Convergence for eps = {self.eps}", "Nx, error, order"]
        lines += [f"{Nx}, {error:.6e}, {order:.3f}" for Nx, error, order in self.rows]
        return '\n'.join(lines)


def stationarity_diagnostic(snapshots: Sequence[Snapshot], x_grid: SpatialGrid) -> List[float]:
    """‖n(t_{m+1}) - n(t_m)‖ between consecutive snapshots; empty for fewer than two snapshots."""
    return [weighted_l2_norm(after.n - before.n, x_grid) for before, after in zip(snapshots[:-1], snapshots[1:])]


def is_non_increasing(values: Sequence[float], rtol: float = 1e-12) -> bool:
    """Whether every value is at most the previous one, up to a relative tolerance."""
    return all(current <= previous * (1 + rtol) for previous, current in zip(values[:-1], values[1:]))
