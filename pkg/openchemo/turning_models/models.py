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
Turning models: the equilibrium M(v), the rate σ, and the two kernels of 𝒯 = 𝒯_0 + ε𝒯_1(S).

The velocity kernels are evaluated once, at construction, on the (node, midpoint) pairs needed by the discrete
operators:

    𝒯_{0,j}(G) = Δv ( Σ_l T_0(v_j, v̄_l) Ḡ_l  −  G_j Σ_l T_0(v̄_l, v_j) )

so applying 𝒯_0 is a matrix product plus a diagonal scaling.
The chemotactic kernel T_1 depends on the local gradient of S and is evaluated on demand by a `ChemotacticKernel`.
"""

from typing import Callable, Optional

import numpy as np

from ..grids import VelocityGrid, bracket, midpoint_average

VelocityKernel = Callable[[np.ndarray, np.ndarray], np.ndarray]
"""T(v, v') -> values, must broadcast over numpy arrays."""
GradientKernel = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
"""T(dS, v, v') -> values, must broadcast over numpy arrays."""


class ChemotacticKernel:
    """
    Generic chemotactic kernel T_1(S, v, v') depending on S only through its gradient dS.

    Applying the discrete operator builds the (faces, Nv+1, Nv) kernel tables, which is fine for desk scale grids.
    """

    def __init__(self, kernel: GradientKernel) -> None:
        self.kernel = kernel
        """The kernel function T_1(dS, v, v')."""

    def __call__(self, dS, v, v_prime) -> np.ndarray:
        dS, v, v_prime = np.broadcast_arrays(np.asarray(dS, dtype=float), v, v_prime)
        return np.broadcast_to(self.kernel(dS, v, v_prime), dS.shape).astype(float)

    def apply(self, dS: np.ndarray, G: np.ndarray, grid: VelocityGrid) -> np.ndarray:
        """
        Discrete 𝒯_1(S)(G) for a gradient per profile.

        Parameters
        ----------
        * dS:   Gradient of S, either a scalar or one value per profile (shape `G.shape[:-1]`).
        * G:    Velocity profile(s), velocity index last.
        * grid: The velocity grid.
        """
        dS = np.broadcast_to(np.asarray(dS, dtype=float), G.shape[:-1])[..., np.newaxis, np.newaxis]
        v, v_bar = grid.nodes, grid.midpoints

        gain_table = self(dS, v[:, np.newaxis], v_bar[np.newaxis, :])   # T_1(v_j, v̄_l)
        loss_table = self(dS, v_bar[np.newaxis, :], v[:, np.newaxis])   # T_1(v̄_l, v_j)

        gain = grid.dv * np.einsum('...jl,...l->...j', gain_table, midpoint_average(G))
        loss = grid.dv * np.sum(loss_table, axis=-1)
        return gain - G * loss


class PositivePartKernel(ChemotacticKernel):
    """
    The kernel T_1(S, v, v') = (v·∂_x S)_+, which only depends on its first velocity argument.

    The discrete operator then reduces to

        𝒯_{1,j}(G) = (v_j dS)_+ ⟨G⟩ − G_j Δv Σ_l (v̄_l dS)_+

    and is evaluated without building kernel tables.
    """

    def __init__(self) -> None:
        super().__init__(lambda dS, v, v_prime: np.maximum(v * dS, 0.0))

    def apply(self, dS: np.ndarray, G: np.ndarray, grid: VelocityGrid) -> np.ndarray:
        dS = np.broadcast_to(np.asarray(dS, dtype=float), G.shape[:-1])[..., np.newaxis]
        gain = np.maximum(grid.nodes * dS, 0.0) * bracket(G, grid)[..., np.newaxis]
        loss = grid.dv * np.sum(np.maximum(grid.midpoints * dS, 0.0), axis=-1, keepdims=True)
        return gain - G * loss


class TurningModel:
    """
    A linear turning model with equilibrium M, rate σ, base kernel T_0 and chemotactic kernel T_1.

    The assumptions the asymptotic analysis needs are checked at the velocity nodes on construction:
    - ⟨M⟩ = 1 and ⟨vM⟩ = 0,
    - T_0(v, v') ≥ σM(v),
    - detailed balance T_0(v', v)M(v) = T_0(v, v')M(v').

    A ValueError is raised if any of them is violated by more than `tol`.
    """

    is_relaxation = False
    """Whether 𝒯_0(g) = -σ(g - ⟨g⟩M), which enables closed form solves."""

    def __init__(self,
                 grid:          VelocityGrid,
                 equilibrium:   Callable[[np.ndarray], np.ndarray],
                 sigma:         float,
                 kernel_T0:     VelocityKernel,
                 kernel_T1:     Optional[ChemotacticKernel] = None,
                 tol:           float = 1e-10) -> None:
        """
        Parameters
        ----------
        * grid:         Velocity grid on which the model is discretized.
        * equilibrium:  M(v), evaluated at the velocity nodes.
        * sigma:        Rate σ > 0 of the lower bound T_0 ≥ σM.
        * kernel_T0:    T_0(v, v'), must broadcast.
        * kernel_T1:    Chemotactic kernel, defaults to the positive part kernel (v·∂_x S)_+.
        * tol:          Tolerance of the construction checks.
        """
        if not sigma > 0:
            raise ValueError(f"The turning rate sigma must be positive, got {sigma}.")

        self.grid       = grid
        """The velocity grid."""
        self.sigma      = float(sigma)
        """σ."""
        self.kernel_T0  = kernel_T0
        """T_0(v, v')."""
        self.kernel_T1  = kernel_T1 if kernel_T1 is not None else PositivePartKernel()
        """T_1(S, v, v') wrapped in a ChemotacticKernel."""
        self.tol        = tol

        self.M = np.broadcast_to(np.asarray(equilibrium(grid.nodes), dtype=float), grid.nodes.shape).copy()
        """Equilibrium at the velocity nodes."""
        self.M.setflags(write=False)
        self.M_bar = midpoint_average(self.M)
        """Equilibrium at the midpoints, using the node average convention."""

        self._tabulate_T0()
        self._check_assumptions()

        self._t0_matrix = None

    def _tabulate_T0(self) -> None:
        v, v_bar = self.grid.nodes, self.grid.midpoints
        self.t0_gain = np.broadcast_to(self.kernel_T0(v[:, np.newaxis], v_bar[np.newaxis, :]),
                                       (len(v), len(v_bar))).astype(float)
        """T_0(v_j, v̄_l), shape (Nv+1, Nv)."""
        self.t0_loss = self.grid.dv * np.sum(np.broadcast_to(self.kernel_T0(v_bar[np.newaxis, :], v[:, np.newaxis]),
                                                             (len(v), len(v_bar))), axis=1)
        """Δv Σ_l T_0(v̄_l, v_j), shape (Nv+1,)."""

    def _node_kernel_T0(self) -> np.ndarray:
        """T_0(v_j, v_k) at the velocity nodes."""
        v = self.grid.nodes
        return np.broadcast_to(self.kernel_T0(v[:, np.newaxis], v[np.newaxis, :]), (len(v), len(v))).astype(float)

    def _check_assumptions(self) -> None:
        v   = self.grid.nodes
        tol = self.tol

        if np.any(self.M <= 0):
            raise ValueError("The equilibrium M(v) must be positive at every velocity node.")

        mass = bracket(self.M, self.grid)
        if abs(mass - 1) > tol:
            raise ValueError(f"The equilibrium is not normalized on the velocity grid, <M> = {mass:.16e}.")

        flux = bracket(v * self.M, self.grid)
        if abs(flux) > tol:
            raise ValueError(f"The equilibrium carries a net flux, <vM> = {flux:.3e}.")

        T0 = self._node_kernel_T0()
        scale = max(1.0, np.max(np.abs(T0)))
        if np.any(T0 < self.sigma * self.M[:, np.newaxis] - tol * scale):
            raise ValueError("The turning kernel violates the lower bound T0(v, v') >= sigma*M(v).")

        balance = T0.T * self.M[:, np.newaxis] - T0 * self.M[np.newaxis, :]
        if np.max(np.abs(balance)) > tol * scale:
            raise ValueError(f"The turning kernel violates detailed balance, max residual {np.max(np.abs(balance)):.3e}.")

    @property
    def t0_matrix(self) -> np.ndarray:
        """The (Nv+1)x(Nv+1) matrix of the discrete 𝒯_0, assembled on first use."""
        if self._t0_matrix is None:
            n = self.grid.num_nodes
            averaging = np.zeros((n - 1, n))
            averaging[np.arange(n - 1), np.arange(n - 1)] = 0.5
            averaging[np.arange(n - 1), np.arange(1, n)]  = 0.5
            self._t0_matrix = self.grid.dv * self.t0_gain @ averaging - np.diag(self.t0_loss)
        return self._t0_matrix

    def __repr__(self) -> str:
        return f"{type(self).__name__}(sigma={self.sigma}, Nv={self.grid.Nv})"


class RelaxationModel(TurningModel):
    """
    The relaxation model T_0(v, v') = σM(v), for which 𝒯_0(G) = -σ(G - ⟨G⟩M).

    The midpoint values of the kernel use the node averaged equilibrium M̄_l, which makes the identity above exact on
    the grid for any equilibrium normalized by the trapezoid rule.
    """

    is_relaxation = True

    def __init__(self,
                 grid:          VelocityGrid,
                 equilibrium:   Callable[[np.ndarray], np.ndarray],
                 sigma:         float,
                 kernel_T1:     Optional[ChemotacticKernel] = None,
                 tol:           float = 1e-10) -> None:
        self._equilibrium = equilibrium
        super().__init__(grid, equilibrium, sigma, self._relaxation_kernel, kernel_T1, tol)

    def _relaxation_kernel(self, v: np.ndarray, v_prime: np.ndarray) -> np.ndarray:
        return self.sigma * np.broadcast_to(np.asarray(self._equilibrium(v), dtype=float), np.broadcast(v, v_prime).shape)

    def _tabulate_T0(self) -> None:
        n = self.grid.num_nodes
        self.t0_gain = np.broadcast_to(self.sigma * self.M[:, np.newaxis], (n, n - 1)).copy()
        self.t0_loss = np.full(n, self.sigma * self.grid.dv * np.sum(self.M_bar))

    def _node_kernel_T0(self) -> np.ndarray:
        n = self.grid.num_nodes
        return np.broadcast_to(self.sigma * self.M[:, np.newaxis], (n, n))


def uniform_equilibrium(grid: VelocityGrid) -> Callable[[np.ndarray], np.ndarray]:
    """M(v) = 1/(2 v_max), the equilibrium of the test problem (1/2 on [-1, 1])."""
    value = 1.0 / (grid.v_max - grid.v_min)
    return lambda v: np.full(np.shape(v), value)
