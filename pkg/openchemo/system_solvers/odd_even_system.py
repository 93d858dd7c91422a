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
Odd-even parity scheme.

For v ≥ 0 the distribution is split into its even and (scaled) odd parts

    r(v) = (f(v) + f(-v))/2,        j(v) = (f(v) - f(-v))/(2ε)

so that f = r + εj for v ≥ 0 and f = r - εj for v < 0, and n = 2∫_0^{v_max} r dv.
Each step is a three stage splitting:

1. Collision: the stiff relaxation and chemotactic terms are solved implicitly and pointwise with n frozen at the
   start of the stage. The stiff part β v ∂_x r of the odd equation,
   β = Δt(1 - 1/ε²)/(1 + Δt(σ + εκ)/ε²), is split off and left to the third stage when β < 0.
2. Transport: r_t + v j_x = 0, j_t + v r_x = 0, advanced in the characteristic variables w± = r ± j with the second
   order upwind (Beam-Warming) scheme, first order next to the inflow end.
   The Robin conditions r - εv ∂_x r = 0 at x_min and r + εv ∂_x r = 0 at x_max close the boundary nodes.
3. Diffusion: the r flux of the split off part, -v ∂_x(β v ∂_x r), is taken backward Euler, one tridiagonal solve
   per velocity with the Robin closure folded into the end rows, and j picks up β v ∂_x r at the new r.
   As ε → 0, β → -1/σ and this stage is an implicit discretization of the v²/σ diffusion of r, so Δt ~ Δx is
   stable.
   At ε = 1, β = 0 and the stage does nothing.

The collision stage assumes the relaxation model with a constant equilibrium and the positive part chemotactic
kernel.
"""

from typing import Tuple

import numpy as np

from ..grids import SpatialGrid, VelocityGrid, half_bracket
from ..turning_models import PositivePartKernel, TurningModel
from .boundary_and_initial_conditions import initial_distribution
from .chemo_system import ReactionParams, TridiagonalSystem, chemo_step, thomas_solve
from .helper_functions import SchemeRunner, Snapshot, StepReport
from .kinetic_system import centered_gradient


class ParityState:
    """
    Even and odd parts on the v ≥ 0 velocity nodes, with the chemoattractant.
    """

    def __init__(self, r: np.ndarray, j: np.ndarray, S: np.ndarray, t: float, eps: float) -> None:
        if r.shape != j.shape:
            raise ValueError("r and j must have the same shape.")
        self.r      = r
        """Even part, shape (Nx+1, number of v ≥ 0 nodes)."""
        self.j      = j
        """Odd part divided by ε, same shape as r."""
        self.S      = S
        self.t      = float(t)
        self.eps    = float(eps)

    def density(self, grid: VelocityGrid) -> np.ndarray:
        """n = 2 ∫_0^{v_max} r dv."""
        return 2 * half_bracket(self.r, grid)


def parity_transform(f: np.ndarray, grid: VelocityGrid, eps: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    (r, j) from f, velocity index last.
    """
    positive = grid.half_indices
    negative = grid.mirror[positive]
    r = 0.5 * (f[..., positive] + f[..., negative])
    j = (f[..., positive] - f[..., negative]) / (2 * eps)
    return r, j


def parity_reconstruct(r: np.ndarray, j: np.ndarray, grid: VelocityGrid, eps: float) -> np.ndarray:
    """f from (r, j); the inverse of `parity_transform`."""
    positive = grid.half_indices
    f = np.empty(r.shape[:-1] + (grid.num_nodes,))
    f[..., grid.mirror[positive]] = r - eps * j
    f[..., positive] = r + eps * j
    return f


def check_parity_model(model: TurningModel) -> None:
    """Raise a ValueError if the model is not one the collision stage supports."""
    if not model.is_relaxation:
        raise ValueError("The odd-even scheme needs the relaxation turning model.")
    if not np.allclose(model.M, model.M[0], rtol=1e-12, atol=0):
        raise ValueError("The odd-even scheme needs a constant equilibrium.")
    if not isinstance(model.kernel_T1, PositivePartKernel):
        raise ValueError("The odd-even scheme needs the positive part chemotactic kernel.")


def one_sided_gradient(u: np.ndarray, dx: float) -> np.ndarray:
    """Centered differences along the first axis in the interior, first order one-sided at the two ends."""
    du = np.empty_like(u)
    du[1:-1] = (u[2:] - u[:-2]) / (2 * dx)
    du[0]    = (u[1] - u[0]) / dx
    du[-1]   = (u[-1] - u[-2]) / dx
    return du


def collision_parts(state: ParityState, x_grid: SpatialGrid, model: TurningModel, dt: float) \
        -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Implicit pointwise collision stage without the ∂_x r term of the odd equation,

        r* = (r + Δt/ε² (σM + ε|v ∂_xS|/2) n) / (1 + Δt(σ + εκ)/ε²)
        ĵ  = (j + Δt/ε² (v ∂_xS/2) n) / (1 + Δt(σ + εκ)/ε²)
        β  = Δt (1 - 1/ε²) / (1 + Δt(σ + εκ)/ε²)

    with κ = |∂_x S| ∫_0^{v_max} v dv the loss rate of the chemotactic kernel.
    The full collision update of j is ĵ + β v ∂_x r.

    Returns
    -------
    * r*, ĵ, β
    """
    eps = state.eps
    grid = model.grid
    v = grid.nodes[grid.half_indices][np.newaxis, :]

    n   = state.density(grid)[:, np.newaxis]
    dS  = centered_gradient(state.S, x_grid.dx)[:, np.newaxis]

    kappa = np.abs(dS) * half_bracket(grid.nodes[grid.half_indices], grid)
    denominator = 1 + dt * (model.sigma + eps * kappa) / eps**2

    r_star = (state.r + (dt / eps**2) * (model.sigma * model.M[0] + 0.5 * eps * np.abs(v * dS)) * n) / denominator
    j_hat  = (state.j + (dt / eps**2) * 0.5 * v * dS * n) / denominator
    beta   = np.broadcast_to(dt * (1 - 1 / eps**2) / denominator, state.r.shape)
    return r_star, j_hat, beta


def collision_substep(state: ParityState, x_grid: SpatialGrid, model: TurningModel, dt: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Implicit pointwise collision stage with ∂_x r frozen at the start of the stage,

        j* = (j + Δt/ε² (v ∂_xS/2) n + Δt (1 - 1/ε²) v ∂_x r) / (1 + Δt(σ + εκ)/ε²)

    Returns
    -------
    * r*, j*
    """
    v = model.grid.nodes[model.grid.half_indices][np.newaxis, :]
    r_star, j_hat, beta = collision_parts(state, x_grid, model, dt)
    return r_star, j_hat + beta * v * one_sided_gradient(state.r, x_grid.dx)


def _advect_right(w: np.ndarray, nu: np.ndarray) -> np.ndarray:
    """
    Beam-Warming update of w_t + v w_x = 0 (v ≥ 0) at nodes 1..Nx, first order upwind at node 1.
    Node 0 is left as is for the boundary closure.
    """
    w_new = w.copy()
    w_new[1] = w[1] - nu * (w[1] - w[0])
    w_new[2:] = w[2:] \
        - 0.5 * nu * (3 * w[2:] - 4 * w[1:-1] + w[:-2]) \
        + 0.5 * nu**2 * (w[2:] - 2 * w[1:-1] + w[:-2])
    return w_new


def transport_substep(r: np.ndarray, j: np.ndarray, x_grid: SpatialGrid, grid: VelocityGrid,
                      dt: float, eps: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Transport stage in the characteristic variables w± = r ± j, followed by the Robin closure

        r_0 = εv r_1/(Δx + εv),         j_0 = r_0 - w⁻_0
        r_Nx = εv r_{Nx-1}/(Δx + εv),   j_Nx = w⁺_Nx - r_Nx

    Returns
    -------
    * r, j after transport.
    """
    dx = x_grid.dx
    v = grid.nodes[grid.half_indices]
    nu = v * dt / dx

    w_plus  = _advect_right(r + j, nu)
    w_minus = _advect_right((r - j)[::-1], nu)[::-1]

    r_new = 0.5 * (w_plus + w_minus)
    j_new = 0.5 * (w_plus - w_minus)

    robin = eps * v / (dx + eps * v)
    r_new[0]  = robin * r_new[1]
    j_new[0]  = r_new[0] - w_minus[0]
    r_new[-1] = robin * r_new[-2]
    j_new[-1] = w_plus[-1] - r_new[-1]
    return r_new, j_new


def diffusion_substep(r:        np.ndarray,
                      j:        np.ndarray,
                      beta:     np.ndarray,
                      x_grid:   SpatialGrid,
                      grid:     VelocityGrid,
                      dt:       float,
                      eps:      float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Backward Euler solve of r_t = -v ∂_x(β v ∂_x r) for β ≤ 0, then j += β v ∂_x r at the new r.

    For each velocity, with c_{i+1/2} = -Δt v² (β_i + β_{i+1}) / (2Δx²) ≥ 0, the interior rows read

        (1 + c_{i-1/2} + c_{i+1/2}) r_i - c_{i-1/2} r_{i-1} - c_{i+1/2} r_{i+1} = r_i^*,    i = 1..Nx-1

    and the Robin closure r_0 = ρ r_1, r_Nx = ρ r_{Nx-1}, ρ = εv/(Δx + εv), is substituted into the first and last
    rows.

    Parameters
    ----------
    * r, j: Parity parts after transport.
    * beta: Non-positive coupling coefficient per node and velocity.

    Returns
    -------
    * r, j after the solve.
    """
    if np.any(beta > 0):
        raise ValueError("The implicit diffusion stage needs a non-positive coupling coefficient.")

    dx = x_grid.dx
    v = grid.nodes[grid.half_indices]
    robin = eps * v / (dx + eps * v)

    r_new = r.copy()
    for k in range(len(v)):
        c = -dt * v[k]**2 * 0.5 * (beta[1:, k] + beta[:-1, k]) / dx**2

        diag = 1 + c[:-1] + c[1:]
        diag[0]  -= c[0] * robin[k]
        diag[-1] -= c[-1] * robin[k]

        r_new[1:-1, k] = thomas_solve(TridiagonalSystem(-c[1:-1], diag, -c[1:-1], r[1:-1, k]))
        r_new[0, k]  = robin[k] * r_new[1, k]
        r_new[-1, k] = robin[k] * r_new[-2, k]

    return r_new, j + beta * v * one_sided_gradient(r_new, dx)


def odd_even_step(state:    ParityState,
                  x_grid:   SpatialGrid,
                  model:    TurningModel,
                  dt:       float,
                  params:   ReactionParams) -> ParityState:
    """
    One step of the odd-even scheme: collision, transport, implicit diffusion, then the chemoattractant with the new
    density.
    """
    v = model.grid.nodes[model.grid.half_indices]
    r_star, j_hat, beta = collision_parts(state, x_grid, model, dt)

    # Only the relaxing part (β < 0, i.e. ε < 1) goes to the implicit stage
    beta_implicit = np.minimum(beta, 0.0)
    j_star = j_hat + (beta - beta_implicit) * v * one_sided_gradient(state.r, x_grid.dx)

    r_trans, j_trans = transport_substep(r_star, j_star, x_grid, model.grid, dt, state.eps)
    r_new, j_new = diffusion_substep(r_trans, j_trans, beta_implicit, x_grid, model.grid, dt, state.eps)

    n_new = 2 * half_bracket(r_new, model.grid)
    return ParityState(r_new, j_new, chemo_step(state.S, n_new, params, x_grid, dt), state.t + dt, state.eps)


def initialize_parity(eps:              float,
                      x_grid:           SpatialGrid,
                      model:            TurningModel,
                      total_mass:       float,
                      at_equilibrium:   bool = False) -> ParityState:
    """Parity parts of f_0 (or of M n_0 if `at_equilibrium`), S_0 = 0."""
    f0, n0 = initial_distribution(x_grid, model.grid, model.M, total_mass, at_equilibrium)
    r, j = parity_transform(f0, model.grid, eps)
    return ParityState(r, j, np.zeros_like(n0), 0.0, eps)


class OddEvenRunner(SchemeRunner):
    """Drives the odd-even scheme for the time loop. Reports carry max |f| and a NaN flux."""

    name = 'odd_even'

    def __init__(self, state: ParityState, x_grid: SpatialGrid, model: TurningModel, params: ReactionParams) -> None:
        check_parity_model(model)
        if state.eps > 1:
            print(f"WARNING: the odd-even scheme is meant for eps <= 1, got eps = {state.eps}.")

        self.state  = state
        self.x_grid = x_grid
        self.model  = model
        self.params = params

    @property
    def time(self) -> float:
        return self.state.t

    @time.setter
    def time(self, value: float) -> None:
        self.state.t = value

    def _f(self) -> np.ndarray:
        return parity_reconstruct(self.state.r, self.state.j, self.model.grid, self.state.eps)

    def advance(self, dt: float) -> StepReport:
        mass_before = self.mass()
        self.state = odd_even_step(self.state, self.x_grid, self.model, dt, self.params)
        return StepReport(mass_before, self.mass(), float(np.max(np.abs(self._f()))), np.nan)

    def snapshot(self) -> Snapshot:
        return Snapshot(self.state.t, self.x_grid.nodes, self.state.density(self.model.grid), self.state.S, self._f())

    def mass(self) -> float:
        return float(self.x_grid.weights @ self.state.density(self.model.grid))

    def magnitude(self) -> float:
        return float(np.max([np.max(np.abs(self.state.r)),
                             self.state.eps * np.max(np.abs(self.state.j)),
                             np.max(np.abs(self.state.S))]))
