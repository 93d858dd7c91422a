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
The micro-macro solver.

The distribution is split as f = M(v) n + ε g with ⟨g⟩ = 0.
The density n lives on the spatial nodes x_i and the micro part g on the staggered faces x_{i+1/2}, including one
ghost face beyond each end of the domain.
In the arrays used here row k of g is the face i+1/2 with i = k-1, so rows 1..Nx are the interior faces and
rows 0 and Nx+1 the ghost faces. Node i sits between face rows i and i+1.

One time step is:
1. Micro step: every interior face is advanced with upwind transport, explicit 𝒯_1 and implicit 𝒯_0.
2. Boundary densities n_0, n_Nx from the half cell balance at each end, with the inflow data substituted.
3. Interior densities, either explicitly from the new micro fluxes or implicitly (relaxation model only) through a
   tridiagonal solve that treats the diffusive part of the flux implicitly.
4. Ghost faces from the inflow condition (v entering the domain) or by copying the adjacent face.
5. Chemoattractant update.

Face values of n and S are node averages, and ∂_x n, ∂_x S at a face are the compact differences across it.
"""

from typing import Dict, Optional, Tuple

import numpy as np
from scipy.sparse import block_diag, csr_matrix, lil_matrix
from scipy.sparse.linalg import spsolve

from ..grids import SpatialGrid, VelocityGrid, bracket, project_complement
from ..turning_models import ImplicitTurningSolver, TurningModel, apply_T1
from .boundary_and_initial_conditions import InflowData, initial_density, initial_perturbation_profile
from .chemo_system import ReactionParams, TridiagonalSystem, chemo_step, thomas_solve
from .helper_functions import SchemeRunner, Snapshot, StepReport


class MMState:
    """
    State of the micro-macro solver.
    """

    def __init__(self, n: np.ndarray, g: np.ndarray, S: np.ndarray, t: float, eps: float) -> None:
        if g.shape[0] != n.shape[0] + 1:
            raise ValueError(f"g must have one row per face including the two ghost faces, "
                             f"got {g.shape[0]} rows for {n.shape[0]} nodes.")
        if S.shape != n.shape:
            raise ValueError("n and S must both be given at the spatial nodes.")

        self.n      = n
        """Density at the nodes, shape (Nx+1,)."""
        self.g      = g
        """Micro part on all faces, shape (Nx+2, Nv+1)."""
        self.S      = S
        """Chemoattractant at the nodes, shape (Nx+1,)."""
        self.t      = float(t)
        """Current time."""
        self.eps    = float(eps)
        """ε."""

    def copy(self) -> 'MMState':
        return MMState(self.n.copy(), self.g.copy(), self.S.copy(), self.t, self.eps)

    @property
    def g_interior(self) -> np.ndarray:
        """View of g on the interior faces."""
        return self.g[1:-1]

    def reconstruct_f(self, M: np.ndarray) -> np.ndarray:
        """
        f = M n + ε ḡ at the spatial nodes, where ḡ_i is the mean of the two faces adjacent to node i.

        Returns
        -------
        * f: Shape (Nx+1, Nv+1).
        """
        g_nodes = 0.5 * (self.g[:-1] + self.g[1:])
        return self.n[:, np.newaxis] * M[np.newaxis, :] + self.eps * g_nodes


def face_average(u: np.ndarray) -> np.ndarray:
    """(u_i + u_{i+1})/2 on the Nx interior faces."""
    return 0.5 * (u[:-1] + u[1:])


def face_gradient(u: np.ndarray, dx: float) -> np.ndarray:
    """(u_{i+1} - u_i)/dx on the Nx interior faces."""
    return (u[1:] - u[:-1]) / dx


def initialize(eps:             float,
               x_grid:          SpatialGrid,
               model:           TurningModel,
               total_mass:      float,
               inflow:          Optional[InflowData] = None,
               at_equilibrium:  bool = False) -> MMState:
    """
    Initial state of the test problem.

    n_0 is the normalized Gaussian peak, g_0 = (f_0 - M n_0)/ε = v exp(-v²) M / (C_M ε) on every interior face,
    S_0 = 0, and the ghost faces follow from the boundary condition with n_0.

    Parameters
    ----------
    * eps:              ε > 0.
    * x_grid:           Spatial grid.
    * model:            Turning model, provides M and the velocity grid.
    * total_mass:       M_tot > 0.
    * inflow:           Inflow data, vacuum if None.
    * at_equilibrium:   Start from f_0 = M n_0, i.e. g_0 = 0.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}.")

    v_grid = model.grid
    inflow = inflow if inflow is not None else InflowData(v_grid)

    n0, C_M = initial_density(x_grid, total_mass)

    g = np.zeros((x_grid.Nx + 2, v_grid.num_nodes))
    if not at_equilibrium:
        g[1:-1] = initial_perturbation_profile(v_grid, model.M, C_M)[np.newaxis, :] / eps

    state = MMState(n0, g, np.zeros_like(n0), 0.0, eps)
    apply_ghost_faces(state, n0, model, inflow)
    return state


def micro_step(state:   MMState,
               x_grid:  SpatialGrid,
               model:   TurningModel,
               dt:      float,
               solver:  Optional[ImplicitTurningSolver] = None) -> np.ndarray:
    """
    Advance g on the interior faces by one step.

    Each face solves

        (I - Δt/ε² 𝒯_0) g^{k+1} = g^k - Δt/ε (I - P_M)(v⁺ D⁻g^k + v⁻ D⁺g^k)
                                  + Δt/ε² (𝒯_1(S^k)(M n^k) - vM ∂_x n^k) + Δt/ε 𝒯_1(S^k)(g^k)

    where D⁻ and D⁺ are the backward and forward face differences, which use the ghost faces at the two ends.

    Parameters
    ----------
    * state:    Current state, ghost faces populated.
    * x_grid:   Spatial grid.
    * model:    Turning model.
    * dt:       Time step.
    * solver:   Factorized implicit solve for this dt and ε, built if not given.

    Returns
    -------
    * g_new: Shape (Nx+2, Nv+1). The interior rows hold g^{k+1}, the ghost rows are copied from g^k.
    """
    eps = state.eps
    grid = model.grid
    v = grid.nodes
    M = model.M
    g = state.g
    dx = x_grid.dx

    if solver is None:
        solver = ImplicitTurningSolver(model, dt / eps**2)

    g_int = g[1:-1]
    transport = (grid.v_plus * (g_int - g[:-2]) + grid.v_minus * (g[2:] - g_int)) / dx

    n_face  = face_average(state.n)
    dn      = face_gradient(state.n, dx)
    dS      = face_gradient(state.S, dx)

    Mn = n_face[:, np.newaxis] * M[np.newaxis, :]
    source = apply_T1(dS, Mn, model) - (v * M)[np.newaxis, :] * dn[:, np.newaxis]

    rhs = g_int \
        - (dt / eps) * project_complement(transport, M, grid) \
        + (dt / eps**2) * source \
        + (dt / eps) * apply_T1(dS, g_int, model)

    g_new = g.copy()
    g_new[1:-1] = solver(rhs)
    return g_new


def micro_fluxes(g: np.ndarray, grid: VelocityGrid) -> np.ndarray:
    """⟨v g⟩ on every face row of g."""
    return bracket(grid.nodes * g, grid)


def macro_step_explicit(state: MMState, g_new: np.ndarray, x_grid: SpatialGrid, model: TurningModel, dt: float) -> np.ndarray:
    """
    Explicit density update at the interior nodes,

        n^{k+1}_i = n^k_i - Δt (⟨v g^{k+1}_{i+1/2}⟩ - ⟨v g^{k+1}_{i-1/2}⟩)/Δx,    i = 1..Nx-1

    Returns
    -------
    * n_new: Full length copy of n with the interior updated; the boundary entries are those of state.n.
    """
    F = micro_fluxes(g_new, model.grid)
    n_new = state.n.copy()
    n_new[1:-1] -= dt * (F[2:-1] - F[1:-2]) / x_grid.dx
    return n_new


def implicit_macro_coefficient(eps: float, dt: float, dx: float, model: TurningModel) -> float:
    """α = Δt² ⟨v²M⟩ / ((ε² + σΔt) Δx²), which tends to Δt D_n / Δx² as ε → 0."""
    v2M = float(bracket(model.grid.nodes**2 * model.M, model.grid))
    return dt**2 * v2M / ((eps**2 + model.sigma * dt) * dx**2)


def assemble_implicit_macro_system(state:       MMState,
                                   g_new:       np.ndarray,
                                   x_grid:      SpatialGrid,
                                   model:       TurningModel,
                                   dt:          float,
                                   n_boundary:  Tuple[float, float]) -> TridiagonalSystem:
    """
    Tridiagonal system for the interior densities of the implicit macro update.

    The micro step used ∂_x n^k in its source term. For the relaxation model that contribution to g^{k+1} is exactly
    -Δt/(ε²+σΔt) vM ∂_x n^k, so it is removed,

        ĝ = g^{k+1} + Δt/(ε²+σΔt) vM ∂_x n^k,

    and put back with ∂_x n^{k+1}. This gives

        (1+2α) n^{k+1}_i - α (n^{k+1}_{i-1} + n^{k+1}_{i+1}) = n^k_i - Δt (⟨vĝ_{i+1/2}⟩ - ⟨vĝ_{i-1/2}⟩)/Δx

    with the new boundary densities as Dirichlet data.
    """
    eps = state.eps
    dx  = x_grid.dx
    grid = model.grid

    alpha = implicit_macro_coefficient(eps, dt, dx, model)

    dn = face_gradient(state.n, dx)
    g_hat = g_new[1:-1] + (dt / (eps**2 + model.sigma * dt)) * (grid.nodes * model.M)[np.newaxis, :] * dn[:, np.newaxis]
    F_hat = micro_fluxes(g_hat, grid)   # faces 1/2 .. Nx-1/2

    rhs = state.n[1:-1] - dt * (F_hat[1:] - F_hat[:-1]) / dx
    rhs[0]  += alpha * n_boundary[0]
    rhs[-1] += alpha * n_boundary[1]

    N = len(rhs)
    return TridiagonalSystem(np.full(N - 1, -alpha), np.full(N, 1 + 2*alpha), np.full(N - 1, -alpha), rhs)


def macro_step_implicit(state:      MMState,
                        g_new:      np.ndarray,
                        x_grid:     SpatialGrid,
                        model:      TurningModel,
                        dt:         float,
                        n_boundary: Tuple[float, float]) -> np.ndarray:
    """
    Implicit density update at the interior nodes, see `assemble_implicit_macro_system`.

    Parameters
    ----------
    * n_boundary: (n^{k+1}_0, n^{k+1}_Nx) from `apply_boundary_density`.

    Returns
    -------
    * n_new: Full length density with the given boundary values.
    """
    if not model.is_relaxation:
        raise ValueError("The implicit macro update is only available for the relaxation turning model.")

    system = assemble_implicit_macro_system(state, g_new, x_grid, model, dt, n_boundary)
    n_new = np.empty_like(state.n)
    n_new[0], n_new[-1] = n_boundary
    n_new[1:-1] = thomas_solve(system)
    return n_new


def apply_boundary_density(state:   MMState,
                           g_new:   np.ndarray,
                           x_grid:  SpatialGrid,
                           model:   TurningModel,
                           inflow:  InflowData,
                           dt:      float) -> Tuple[float, float]:
    """
    New densities at the two boundary nodes.

    The half cell balance at x_0 uses the flux at x_0 built from the ghost face rule, which brings in the inflow data
    and the new n_0 itself:

        (1 + 2Δt/(εΔx) ⟨v⁺M⟩) n^{k+1}_0 = n^k_0 - Δt/Δx ⟨(v + v⁺ - v⁻) g^{k+1}_{1/2} - (2v⁺/ε) f_l⟩
        (1 - 2Δt/(εΔx) ⟨v⁻M⟩) n^{k+1}_Nx = n^k_Nx - Δt/Δx ⟨(2v⁻/ε) f_r - (v - v⁺ + v⁻) g^{k+1}_{Nx-1/2}⟩

    Returns
    -------
    * (n^{k+1}_0, n^{k+1}_Nx)
    """
    eps = state.eps
    dx  = x_grid.dx
    grid = model.grid
    v, vp, vm = grid.nodes, grid.v_plus, grid.v_minus

    prefactor_left  = 1 + (2 * dt / (eps * dx)) * bracket(vp * model.M, grid)
    rhs_left        = state.n[0] - (dt / dx) * bracket((v + vp - vm) * g_new[1] - (2 * vp / eps) * inflow.f_left, grid)

    prefactor_right = 1 - (2 * dt / (eps * dx)) * bracket(vm * model.M, grid)
    rhs_right       = state.n[-1] - (dt / dx) * bracket((2 * vm / eps) * inflow.f_right - (v - vp + vm) * g_new[-2], grid)

    return float(rhs_left / prefactor_left), float(rhs_right / prefactor_right)


def apply_ghost_faces(state: MMState, n_new: np.ndarray, model: TurningModel, inflow: InflowData) -> None:
    """
    Fill the ghost faces of state.g in place.

    For velocities entering the domain the ghost value makes the face average at the boundary node equal to the
    inflow data, i.e. n_0 M + (ε/2)(g_{-1/2} + g_{1/2}) = f_l for v > 0 (and the mirrored rule at x_Nx for v < 0).
    All other velocities, v = 0 included, copy the adjacent interior face.
    """
    eps = state.eps
    grid = model.grid
    g = state.g
    M = model.M

    entering_left  = grid.nodes > 0
    entering_right = grid.nodes < 0

    g[0]  = g[1]
    g[-1] = g[-2]
    g[0, entering_left]   = (2 / eps) * (inflow.f_left[entering_left]   - n_new[0]  * M[entering_left])   - g[1, entering_left]
    g[-1, entering_right] = (2 / eps) * (inflow.f_right[entering_right] - n_new[-1] * M[entering_right]) - g[-2, entering_right]


def boundary_flux(g: np.ndarray, grid: VelocityGrid, dt: float) -> float:
    """
    Mass entering the domain in one step: Δt (⟨v g(x_0)⟩ - ⟨v g(x_Nx)⟩) with g at a boundary node taken as the mean
    of its two adjacent faces (one of them a ghost face).
    """
    v = grid.nodes
    left  = bracket(v * 0.5 * (g[0] + g[1]), grid)
    right = bracket(v * 0.5 * (g[-2] + g[-1]), grid)
    return float(dt * (left - right))


def step(state:         MMState,
         x_grid:        SpatialGrid,
         model:         TurningModel,
         dt:            float,
         params:        ReactionParams,
         inflow:        Optional[InflowData] = None,
         macro_mode:    str = 'explicit',
         solver:        Optional[ImplicitTurningSolver] = None) -> Tuple[MMState, StepReport]:
    """
    One full micro-macro time step.

    Parameters
    ----------
    * state:        Current state, left untouched.
    * x_grid:       Spatial grid.
    * model:        Turning model.
    * dt:           Time step.
    * params:       Chemoattractant coefficients.
    * inflow:       Inflow data, vacuum if None.
    * macro_mode:   'explicit' or 'implicit'.
    * solver:       Factorized implicit micro solve for (dt, ε), built if not given.

    Returns
    -------
    * new_state:    The state at t + dt.
    * report:       Mass before and after, max |g|, and the mass that entered through the boundary.
                    In explicit mode mass_after - mass_before equals boundary_flux up to round-off.
    """
    if macro_mode not in ('explicit', 'implicit'):
        raise ValueError(f"Unknown macro mode {macro_mode}, must be explicit or implicit.")
    inflow = inflow if inflow is not None else InflowData(model.grid)

    mass_before = float(x_grid.weights @ state.n)

    g_new = micro_step(state, x_grid, model, dt, solver)
    n_boundary = apply_boundary_density(state, g_new, x_grid, model, inflow, dt)

    if macro_mode == 'explicit':
        n_new = macro_step_explicit(state, g_new, x_grid, model, dt)
        n_new[0], n_new[-1] = n_boundary
    else:
        n_new = macro_step_implicit(state, g_new, x_grid, model, dt, n_boundary)

    new_state = MMState(n_new, g_new, state.S, state.t + dt, state.eps)
    apply_ghost_faces(new_state, n_new, model, inflow)
    new_state.S = chemo_step(state.S, n_new, params, x_grid, dt)

    report = StepReport(mass_before,
                        float(x_grid.weights @ n_new),
                        float(np.max(np.abs(g_new))),
                        boundary_flux(new_state.g, model.grid, dt))
    return new_state, report


def assemble_micro_system(state: MMState, x_grid: SpatialGrid, model: TurningModel, dt: float):
    """
    The micro step written as one sparse linear system over all interior faces,

        A vec(g^{k+1}_interior) = B vec(g^k) + s

    with A = diag(I - Δt/ε² 𝒯_0) per face, B the explicit transport and 𝒯_1 operator acting on every face row
    (ghost rows included), and s the source built from n^k and S^k.
    Used to cross-check `micro_step`, which applies the same operators face by face.

    Returns
    -------
    * A:    Sparse (Nx (Nv+1))² matrix.
    * B:    Sparse Nx (Nv+1) x (Nx+2)(Nv+1) matrix.
    * s:    Vector of length Nx (Nv+1).
    """
    eps     = state.eps
    grid    = model.grid
    Nx, nv  = x_grid.Nx, grid.num_nodes
    dx      = x_grid.dx
    M       = model.M
    v       = grid.nodes

    weights = np.full(nv, grid.dv)
    weights[[0, -1]] *= 0.5
    complement = np.eye(nv) - np.outer(M, weights)

    upwind_self  = complement @ np.diag(grid.v_plus - grid.v_minus)
    upwind_left  = -complement @ np.diag(grid.v_plus)
    upwind_right = complement @ np.diag(grid.v_minus)

    dS = face_gradient(state.S, dx)
    dn = face_gradient(state.n, dx)
    n_face = face_average(state.n)

    B = lil_matrix((Nx * nv, (Nx + 2) * nv))
    s = np.empty(Nx * nv)
    for face in range(Nx):
        k = face + 1
        T1 = apply_T1(dS[face], np.eye(nv), model).T
        rows = slice(face * nv, (face + 1) * nv)

        B[rows, k * nv:(k + 1) * nv]        = np.eye(nv) - (dt / (eps * dx)) * upwind_self + (dt / eps) * T1
        B[rows, (k - 1) * nv:k * nv]        = -(dt / (eps * dx)) * upwind_left
        B[rows, (k + 1) * nv:(k + 2) * nv]  = -(dt / (eps * dx)) * upwind_right

        s[rows] = (dt / eps**2) * (T1 @ (M * n_face[face]) - v * M * dn[face])

    A = block_diag([np.eye(nv) - (dt / eps**2) * model.t0_matrix] * Nx, format='csr')
    return A, csr_matrix(B), s


def solve_assembled_micro_system(state: MMState, x_grid: SpatialGrid, model: TurningModel, dt: float) -> np.ndarray:
    """Interior g^{k+1}, shape (Nx, Nv+1), from the assembled sparse system."""
    A, B, s = assemble_micro_system(state, x_grid, model, dt)
    solution = spsolve(A.tocsc(), B @ state.g.ravel() + s)
    return solution.reshape(x_grid.Nx, model.grid.num_nodes)


class MMRunner(SchemeRunner):
    """
    Drives the micro-macro solver for the time loop.

    The factorized implicit micro solve is cached per time step size since the last step before a snapshot may be
    shortened.
    """

    def __init__(self,
                 state:         MMState,
                 x_grid:        SpatialGrid,
                 model:         TurningModel,
                 params:        ReactionParams,
                 inflow:        InflowData,
                 macro_mode:    str = 'explicit') -> None:
        if macro_mode == 'implicit' and not model.is_relaxation:
            raise ValueError("The implicit macro update is only available for the relaxation turning model.")

        self.name       = f"mm_{macro_mode}"
        self.state      = state
        self.x_grid     = x_grid
        self.model      = model
        self.params     = params
        self.inflow     = inflow
        self.macro_mode = macro_mode
        self._solvers: Dict[float, ImplicitTurningSolver] = {}

    @property
    def time(self) -> float:
        return self.state.t

    @time.setter
    def time(self, value: float) -> None:
        self.state.t = value

    def _solver(self, dt: float) -> ImplicitTurningSolver:
        if dt not in self._solvers:
            self._solvers[dt] = ImplicitTurningSolver(self.model, dt / self.state.eps**2)
        return self._solvers[dt]

    def advance(self, dt: float) -> StepReport:
        self.state, report = step(self.state, self.x_grid, self.model, dt, self.params,
                                  self.inflow, self.macro_mode, self._solver(dt))
        return report

    def snapshot(self) -> Snapshot:
        state = self.state
        return Snapshot(state.t, self.x_grid.nodes, state.n, state.S, state.reconstruct_f(self.model.M), state.g)

    def mass(self) -> float:
        return float(self.x_grid.weights @ self.state.n)

    def magnitude(self) -> float:
        state = self.state
        return float(np.max([np.max(np.abs(state.n)), np.max(np.abs(state.S)), state.eps * np.max(np.abs(state.g))]))
