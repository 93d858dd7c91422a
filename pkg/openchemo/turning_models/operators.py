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
Discrete turning operators, the inverse of 𝒯_0 on mean-zero profiles, the implicit relaxation solve used by the
micro step, and the macroscopic transport coefficients.

Every function accepts a single velocity profile or a stack of profiles with the velocity index last.
"""

from typing import Optional

import numpy as np
from scipy.linalg import lu_factor, lu_solve, solve

from ..grids import VelocityGrid, bracket, midpoint_average
from .models import TurningModel


def apply_T0(G: np.ndarray, model: TurningModel, grid: Optional[VelocityGrid] = None) -> np.ndarray:
    """
    𝒯_{0,j}(G) = Δv ( Σ_l T_0(v_j, v̄_l) Ḡ_l − G_j Σ_l T_0(v̄_l, v_j) ).

    Parameters
    ----------
    * G:        Velocity profile(s).
    * model:    The turning model providing the tabulated kernel.
    * grid:     Velocity grid, defaults to the model's grid.
    """
    grid = model.grid if grid is None else grid
    G = np.asarray(G, dtype=float)
    gain = grid.dv * np.einsum('jl,...l->...j', model.t0_gain, midpoint_average(G))
    return gain - G * model.t0_loss


def apply_T1(dS, G: np.ndarray, model: TurningModel, grid: Optional[VelocityGrid] = None) -> np.ndarray:
    """
    𝒯_{1,j}(S)(G) = Δv ( Σ_l T_1(S, v_j, v̄_l) Ḡ_l − G_j Σ_l T_1(S, v̄_l, v_j) ).

    The gradient dS is supplied by the caller (one value, or one per profile); it is never computed here.
    """
    grid = model.grid if grid is None else grid
    return model.kernel_T1.apply(dS, np.asarray(G, dtype=float), grid)


def _trapezoid_weights(grid: VelocityGrid) -> np.ndarray:
    w = np.full(grid.num_nodes, grid.dv)
    w[[0, -1]] *= 0.5
    return w


def solve_T0(rhs: np.ndarray, model: TurningModel, grid: Optional[VelocityGrid] = None, tol: float = 1e-10) -> np.ndarray:
    """
    Solve 𝒯_0(G) = rhs with ⟨G⟩ = 0.

    The problem is solvable only for ⟨rhs⟩ = 0. For the relaxation model G = -rhs/σ; otherwise the singular system
    is bordered with the mean-zero constraint and solved directly:

        [ 𝒯_0  M ] [ G ]   [ rhs ]
        [ w^T  0 ] [ λ ] = [  0  ]

    where w are the trapezoid weights.

    Raises
    ------
    * ValueError if |⟨rhs⟩| exceeds `tol` relative to max(1, max|rhs|).
    """
    grid = model.grid if grid is None else grid
    rhs = np.asarray(rhs, dtype=float)

    residual_mean = np.max(np.abs(bracket(rhs, grid)))
    if residual_mean > tol * max(1.0, np.max(np.abs(rhs), initial=0.0)):
        raise ValueError(f"T0 is not invertible for a right hand side with non-zero mean ({residual_mean:.3e}).")

    if model.is_relaxation:
        return -rhs / model.sigma

    n = grid.num_nodes
    bordered = np.zeros((n + 1, n + 1))
    bordered[:n, :n] = model.t0_matrix
    bordered[:n, n]  = model.M
    bordered[n, :n]  = _trapezoid_weights(grid)

    flat = rhs.reshape(-1, n)
    augmented = np.zeros((n + 1, flat.shape[0]))
    augmented[:n] = flat.T
    return solve(bordered, augmented)[:n].T.reshape(rhs.shape)


class ImplicitTurningSolver:
    """
    Solver for (I − c 𝒯_0) G = rhs with a fixed factor c = Δt/ε².

    The operator does not depend on time, so the general kernel path factors it once and reuses the factorization.
    For the relaxation model the solution is

        G = (rhs + cσ⟨rhs⟩M) / (1 + cσ)

    which divides the mean-zero part of rhs by 1 + cσ and keeps its projection onto M.
    """

    def __init__(self, model: TurningModel, factor: float) -> None:
        assert factor >= 0

        self.model  = model
        self.factor = float(factor)

        if model.is_relaxation:
            self._lu = None
        else:
            operator = np.eye(model.grid.num_nodes) - self.factor * model.t0_matrix
            self._lu = lu_factor(operator)

    def __call__(self, rhs: np.ndarray) -> np.ndarray:
        model = self.model
        if self._lu is None:
            c_sigma = self.factor * model.sigma
            return (rhs + c_sigma * bracket(rhs, model.grid)[..., np.newaxis] * model.M) / (1 + c_sigma)

        n = model.grid.num_nodes
        flat = rhs.reshape(-1, n)
        return lu_solve(self._lu, flat.T).T.reshape(rhs.shape)


def diffusion_coefficient(model: TurningModel, grid: Optional[VelocityGrid] = None) -> float:
    """D_n = ⟨v² M⟩ / σ."""
    grid = model.grid if grid is None else grid
    return float(bracket(grid.nodes ** 2 * model.M, grid)) / model.sigma


def drift_coefficient(dS: float, model: TurningModel, grid: Optional[VelocityGrid] = None) -> float:
    """
    α(S) = ⟨v 𝒯_1(S)(M)⟩ / σ for a given gradient dS.

    For the positive part kernel this is χ·dS with χ = ⟨v v⁺ M⟩/σ (1/3 for the test problem).
    """
    grid = model.grid if grid is None else grid
    return float(bracket(grid.nodes * apply_T1(dS, model.M, model, grid), grid)) / model.sigma


def chemotactic_sensitivity(model: TurningModel, grid: Optional[VelocityGrid] = None) -> float:
    """χ = α(S)/∂_x S, evaluated at a unit gradient (exact for kernels linear in the gradient)."""
    return drift_coefficient(1.0, model, grid)
