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
Functions related to parsing the inflow boundary data and creating the initial conditions of the test problem.

The initial density is a Gaussian peak normalized to the requested total mass,

    n_0(x) = C_M exp(−80 x²),       Δx Σ' n_0(x_i) = M_tot

(Σ' with half-weights at the boundary nodes), and the initial distribution is

    f_0(x, v) = (n_0(x) + v exp(−v²)/C_M) M(v).

The inflow data f_l(v) (prescribed at x_min for v > 0) and f_r(v) (prescribed at x_max for v < 0) are given in the
config file as expressions of `v`.
"""

from typing import Optional, Tuple

import numpy as np

from ..config_functions import RunConfig, lambdify_config_expression
from ..grids import SpatialGrid, VelocityGrid

PEAK_SHARPNESS = 80.0
"""Coefficient of x² in the exponent of the initial Gaussian."""


class InflowData:
    """
    Incoming distribution at the two ends of the domain, evaluated at the velocity nodes.

    Only f_left at v > 0 and f_right at v < 0 are ever used.
    """

    def __init__(self, v_grid: VelocityGrid, f_left: Optional[np.ndarray] = None, f_right: Optional[np.ndarray] = None) -> None:
        zeros = np.zeros(v_grid.num_nodes)
        self.f_left  = zeros.copy() if f_left  is None else np.broadcast_to(np.asarray(f_left,  dtype=float), zeros.shape).copy()
        """f_l(v_j), used where v_j > 0."""
        self.f_right = zeros.copy() if f_right is None else np.broadcast_to(np.asarray(f_right, dtype=float), zeros.shape).copy()
        """f_r(v_j), used where v_j < 0."""

        if not (np.all(np.isfinite(self.f_left)) and np.all(np.isfinite(self.f_right))):
            raise ValueError("The inflow data must be finite at every velocity node.")

    @property
    def is_vacuum(self) -> bool:
        return not (np.any(self.f_left) or np.any(self.f_right))


def create_inflow_data(run_config: RunConfig, v_grid: VelocityGrid) -> InflowData:
    """
    Parse `MODEL, inflow_left` and `MODEL, inflow_right` and evaluate them at the velocity nodes.
    """
    f_left  = lambdify_config_expression(run_config.inflow_left,  ['v'])(v_grid.nodes)
    f_right = lambdify_config_expression(run_config.inflow_right, ['v'])(v_grid.nodes)
    return InflowData(v_grid, f_left, f_right)


def initial_density(x_grid: SpatialGrid, total_mass: float) -> Tuple[np.ndarray, float]:
    """
    The Gaussian initial density normalized with the trapezoid rule.

    Parameters
    ----------
    * x_grid:       Spatial grid.
    * total_mass:   M_tot > 0.

    Returns
    -------
    * n0:   Density at the spatial nodes.
    * C_M:  The normalization constant, i.e. the peak value at x = 0.
    """
    if not total_mass > 0:
        raise ValueError(f"The total mass must be positive, got {total_mass}.")

    profile = np.exp(-PEAK_SHARPNESS * x_grid.nodes**2)
    C_M = total_mass / np.dot(x_grid.weights, profile)
    return C_M * profile, C_M


def initial_perturbation_profile(v_grid: VelocityGrid, M: np.ndarray, C_M: float) -> np.ndarray:
    """The x independent part of f_0 − M n_0, i.e. v exp(−v²) M(v) / C_M."""
    v = v_grid.nodes
    return v * np.exp(-v**2) * M / C_M


def initial_distribution(x_grid:        SpatialGrid,
                         v_grid:        VelocityGrid,
                         M:             np.ndarray,
                         total_mass:    float,
                         at_equilibrium: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """
    f_0 at the spatial nodes.

    Parameters
    ----------
    * x_grid:           Spatial grid.
    * v_grid:           Velocity grid.
    * M:                Equilibrium at the velocity nodes.
    * total_mass:       M_tot.
    * at_equilibrium:   If True, return the projection M(v) n_0(x) instead.

    Returns
    -------
    * f0: Shape (Nx+1, Nv+1).
    * n0: The initial density.
    """
    n0, C_M = initial_density(x_grid, total_mass)
    f0 = n0[:, np.newaxis] * M[np.newaxis, :]
    if not at_equilibrium:
        f0 = f0 + initial_perturbation_profile(v_grid, M, C_M)[np.newaxis, :]
    return f0, n0
