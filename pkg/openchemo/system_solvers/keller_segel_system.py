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
Finite difference scheme for the Keller-Segel limit

    ∂_t n = ∂_x (D_n ∂_x n - χ n ∂_x S)

with homogeneous Dirichlet conditions for n, which is what the kinetic inflow condition becomes as ε → 0.
The drift uses centered differences of the flux χ n ∂_x S with ∂_x S centered at the nodes and set to 0 at the two
boundary nodes. The diffusion is either explicit or backward Euler (tridiagonal solve of the same 3 point stencil).
"""

from typing import Tuple

import numpy as np

from ..grids import SpatialGrid
from .boundary_and_initial_conditions import initial_density
from .chemo_system import ReactionParams, TridiagonalSystem, chemo_step, thomas_solve
from .helper_functions import SchemeRunner, Snapshot, StepReport
from .kinetic_system import centered_gradient

DIFFUSION_MODES = ('explicit', 'implicit')


def ks_drift(n: np.ndarray, S: np.ndarray, chi: float, dx: float) -> np.ndarray:
    """χ (∂S_{i+1} n_{i+1} - ∂S_{i-1} n_{i-1}) / (2Δx) at the interior nodes."""
    flux = chi * centered_gradient(S, dx) * n
    return (flux[2:] - flux[:-2]) / (2 * dx)


def ks_step(n:              np.ndarray,
            S:              np.ndarray,
            x_grid:         SpatialGrid,
            dt:             float,
            D:              float,
            chi:            float,
            params:         ReactionParams,
            diffusion_mode: str = 'implicit') -> Tuple[np.ndarray, np.ndarray]:
    """
    One step of the Keller-Segel scheme.

    Parameters
    ----------
    * n, S:             Density and chemoattractant at the nodes.
    * x_grid:           Spatial grid.
    * dt:               Time step.
    * D:                Diffusion coefficient D_n.
    * chi:              Chemotactic sensitivity χ.
    * params:           Chemoattractant coefficients.
    * diffusion_mode:   'explicit' or 'implicit'.

    Returns
    -------
    * n_new, S_new
    """
    if diffusion_mode not in DIFFUSION_MODES:
        raise ValueError(f"Unknown diffusion mode {diffusion_mode}, must be one of {DIFFUSION_MODES}.")

    dx = x_grid.dx
    c = dt * D / dx**2
    n_new = np.zeros_like(n)

    rhs = n[1:-1] - dt * ks_drift(n, S, chi, dx)
    if diffusion_mode == 'explicit':
        # n_0 = n_Nx = 0 in the stencil as well
        n_dirichlet = n.copy()
        n_dirichlet[[0, -1]] = 0.0
        n_new[1:-1] = rhs + c * (n_dirichlet[2:] - 2 * n_dirichlet[1:-1] + n_dirichlet[:-2])
    else:
        N = len(rhs)
        system = TridiagonalSystem(np.full(N - 1, -c), np.full(N, 1 + 2*c), np.full(N - 1, -c), rhs)
        n_new[1:-1] = thomas_solve(system)

    return n_new, chemo_step(S, n_new, params, x_grid, dt)


class KellerSegelRunner(SchemeRunner):
    """
    Drives the Keller-Segel scheme for the time loop.

    The scheme has no micro part and no tracked boundary flux, so reports carry max |n| and a NaN flux.
    """

    name = 'keller_segel'

    def __init__(self, n: np.ndarray, S: np.ndarray, x_grid: SpatialGrid, D: float, chi: float,
                 params: ReactionParams, diffusion_mode: str = 'implicit') -> None:
        self.n      = n
        self.S      = S
        self.t      = 0.0
        self.x_grid = x_grid
        self.D      = D
        self.chi    = chi
        self.params = params
        self.diffusion_mode = diffusion_mode

    @property
    def time(self) -> float:
        return self.t

    @time.setter
    def time(self, value: float) -> None:
        self.t = value

    def advance(self, dt: float) -> StepReport:
        mass_before = self.mass()
        self.n, self.S = ks_step(self.n, self.S, self.x_grid, dt, self.D, self.chi, self.params, self.diffusion_mode)
        self.t += dt
        return StepReport(mass_before, self.mass(), float(np.max(np.abs(self.n))), np.nan)

    def snapshot(self) -> Snapshot:
        return Snapshot(self.t, self.x_grid.nodes, self.n, self.S)

    def mass(self) -> float:
        return float(self.x_grid.weights @ self.n)

    def magnitude(self) -> float:
        return float(np.max([np.max(np.abs(self.n)), np.max(np.abs(self.S))]))


def initialize_keller_segel(x_grid: SpatialGrid, total_mass: float) -> Tuple[np.ndarray, np.ndarray]:
    """n_0 of the test problem and S_0 = 0."""
    n0, _ = initial_density(x_grid, total_mass)
    return n0, np.zeros_like(n0)
