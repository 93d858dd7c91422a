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
Explicit Euler upwind scheme for the full kinetic equation

    ∂_t f + (v/ε) ∂_x f = (1/ε²) (𝒯_0(f) + ε 𝒯_1(S)(f))

on the spatial nodes. It is a reference solution in the kinetic regime only: the time step has to resolve ε, so the
scheme blows up in the diffusive regime with an ε independent time step.
"""

from typing import Optional, Tuple

import numpy as np

from ..grids import SpatialGrid, bracket
from ..turning_models import TurningModel, apply_T0, apply_T1
from .boundary_and_initial_conditions import InflowData, initial_distribution
from .chemo_system import ReactionParams, chemo_step
from .helper_functions import SchemeRunner, Snapshot, StepReport


class KineticState:
    """
    Distribution function at the nodes with the chemoattractant.
    """

    def __init__(self, f: np.ndarray, S: np.ndarray, t: float, eps: float) -> None:
        self.f      = f
        """f at the nodes, shape (Nx+1, Nv+1)."""
        self.S      = S
        """Chemoattractant at the nodes."""
        self.t      = float(t)
        self.eps    = float(eps)

    def density(self, model: TurningModel) -> np.ndarray:
        """n_i = ⟨f_i⟩."""
        return bracket(self.f, model.grid)


def centered_gradient(u: np.ndarray, dx: float) -> np.ndarray:
    """(u_{i+1} - u_{i-1})/(2Δx) at the interior nodes and 0 at the two boundary nodes."""
    du = np.zeros_like(u)
    du[1:-1] = (u[2:] - u[:-2]) / (2 * dx)
    return du


def initialize_kinetic(eps:             float,
                       x_grid:          SpatialGrid,
                       model:           TurningModel,
                       total_mass:      float,
                       at_equilibrium:  bool = False) -> KineticState:
    """f_0 of the test problem at the nodes (or M n_0 if `at_equilibrium`), S_0 = 0."""
    f0, n0 = initial_distribution(x_grid, model.grid, model.M, total_mass, at_equilibrium)
    return KineticState(f0, np.zeros_like(n0), 0.0, eps)


def _padded(f: np.ndarray, inflow: InflowData) -> np.ndarray:
    """f with one ghost node on each side holding the inflow data."""
    return np.concatenate((inflow.f_left[np.newaxis, :], f, inflow.f_right[np.newaxis, :]), axis=0)


def kinetic_boundary_flux(f: np.ndarray, model: TurningModel, inflow: InflowData, dx: float, dt: float, eps: float) -> float:
    """
    Mass entering the domain in one step, measured with the full-weight sum Δx Σ_i ⟨f_i⟩ the upwind scheme conserves:

        -Δt/ε ⟨v⁺ (f_Nx - f_{-1}) + v⁻ (f_{Nx+1} - f_0)⟩
    """
    grid = model.grid
    incoming = grid.v_plus * (f[-1] - inflow.f_left) + grid.v_minus * (inflow.f_right - f[0])
    return float(-dt / eps * bracket(incoming, grid))


def explicit_kinetic_step(state:    KineticState,
                          x_grid:   SpatialGrid,
                          model:    TurningModel,
                          dt:       float,
                          params:   ReactionParams,
                          inflow:   Optional[InflowData] = None) -> Tuple[KineticState, StepReport]:
    """
    One explicit Euler step,

        f^{k+1}_i = f^k_i - Δt/(εΔx) (v⁺ (f_i - f_{i-1}) + v⁻ (f_{i+1} - f_i))
                    + Δt/ε² (𝒯_0(f^k_i) + ε 𝒯_1(S^k)(f^k_i))

    at all nodes, with f_{-1} = f_l and f_{Nx+1} = f_r. ∂_x S in 𝒯_1 is the centered gradient.
    The chemoattractant is then advanced with the new density.

    Returns
    -------
    * new_state:    State at t + Δt.
    * report:       Mass (full-weight node sum) before and after, max |f|, and the boundary flux.
    """
    eps = state.eps
    dx = x_grid.dx
    grid = model.grid
    inflow = inflow if inflow is not None else InflowData(grid)

    f = state.f
    padded = _padded(f, inflow)
    transport = (grid.v_plus * (f - padded[:-2]) + grid.v_minus * (padded[2:] - f)) / dx

    dS = centered_gradient(state.S, dx)
    collision = apply_T0(f, model) + eps * apply_T1(dS, f, model)

    f_new = f - (dt / eps) * transport + (dt / eps**2) * collision
    n_new = bracket(f_new, grid)

    new_state = KineticState(f_new, chemo_step(state.S, n_new, params, x_grid, dt), state.t + dt, eps)

    report = StepReport(float(dx * np.sum(bracket(f, grid))),
                        float(dx * np.sum(n_new)),
                        float(np.max(np.abs(f_new))),
                        kinetic_boundary_flux(f, model, inflow, dx, dt, eps))
    return new_state, report


class KineticRunner(SchemeRunner):
    """Drives the explicit kinetic scheme for the time loop."""

    name = 'explicit_kinetic'

    def __init__(self, state: KineticState, x_grid: SpatialGrid, model: TurningModel,
                 params: ReactionParams, inflow: InflowData) -> None:
        self.state  = state
        self.x_grid = x_grid
        self.model  = model
        self.params = params
        self.inflow = inflow

    @property
    def time(self) -> float:
        return self.state.t

    @time.setter
    def time(self, value: float) -> None:
        self.state.t = value

    def advance(self, dt: float) -> StepReport:
        self.state, report = explicit_kinetic_step(self.state, self.x_grid, self.model, dt, self.params, self.inflow)
        return report

    def snapshot(self) -> Snapshot:
        return Snapshot(self.state.t, self.x_grid.nodes, self.state.density(self.model), self.state.S, self.state.f)

    def mass(self) -> float:
        return float(self.x_grid.weights @ self.state.density(self.model))

    def magnitude(self) -> float:
        return float(np.max([np.max(np.abs(self.state.f)), np.max(np.abs(self.state.S))]))
