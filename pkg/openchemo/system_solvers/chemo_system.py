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
Chemoattractant update.

The chemoattractant S solves the diffusion-reaction equation

    ∂S/∂t − ∂_x(D_S ∂_x S) = H(n, S) = a·n − b·S

with homogeneous Neumann boundary conditions.
It is advanced with backward Euler, using the new density n^{k+1} in the production term:

    (1 + 2c_i + bΔt) S^{k+1}_i − c_i (S^{k+1}_{i-1} + S^{k+1}_{i+1}) = S^k_i + aΔt n^{k+1}_i,   c_i = Δt D_{S,i}/Δx²

The Neumann condition is imposed with the mirrored ghost values S_{-1} = S_1 and S_{Nx+1} = S_{Nx-1},
which folds into the first and last rows as the off-diagonal coefficient −2c.
"""

from typing import Union

import numpy as np
from numba import njit

from ..grids import SpatialGrid


class ReactionParams:
    """
    Coefficients of the chemoattractant equation.
    """

    def __init__(self, a: float = 1.0, b: float = 1.0, D_S: Union[float, np.ndarray] = 1.0) -> None:
        """
        Parameters
        ----------
        * a:    Production rate of S by the cells.
        * b:    Decay rate of S.
        * D_S:  Diffusivity of S, a constant or one value per spatial node.
        """
        if b < 0:
            raise ValueError(f"The decay rate b must be non-negative, got {b}.")
        if np.any(np.asarray(D_S) < 0):
            raise ValueError("The diffusivity D_S must be non-negative.")

        self.a      = float(a)
        """Production rate."""
        self.b      = float(b)
        """Decay rate."""
        self.D_S    = D_S
        """Diffusivity, scalar or per node."""

    def H(self, n: np.ndarray, S: np.ndarray) -> np.ndarray:
        """
        Reaction term H(n, S) = a·n − b·S.

        Subclasses may change the dependence on n, but H must stay affine in S,
        H(n, S) = H(n, 0) + (H(0, 1) - H(0, 0))·S, for the backward Euler step to remain a linear solve.
        """
        return self.a * n - self.b * S


class TridiagonalSystem:
    """
    A tridiagonal linear system stored by diagonals.

    Row i reads `sub[i-1]*x[i-1] + diag[i]*x[i] + sup[i]*x[i+1] = rhs[i]`.
    """

    def __init__(self, sub: np.ndarray, diag: np.ndarray, sup: np.ndarray, rhs: np.ndarray) -> None:
        n = len(diag)
        if len(sub) != n - 1 or len(sup) != n - 1 or len(rhs) != n:
            raise ValueError(f"Inconsistent tridiagonal system sizes: sub {len(sub)}, diag {n}, "
                             f"super {len(sup)}, rhs {len(rhs)}.")

        self.sub    = np.asarray(sub,   dtype=float)
        """Sub-diagonal, length n-1."""
        self.diag   = np.asarray(diag,  dtype=float)
        """Diagonal, length n."""
        self.sup    = np.asarray(sup,   dtype=float)
        """Super-diagonal, length n-1."""
        self.rhs    = np.asarray(rhs,   dtype=float)
        """Right hand side, length n."""

    def to_dense(self) -> np.ndarray:
        """The full matrix, for checks and small problems only."""
        return np.diag(self.diag) + np.diag(self.sub, -1) + np.diag(self.sup, 1)

    def is_diagonally_dominant(self) -> bool:
        off = np.zeros_like(self.diag)
        off[1:]  += np.abs(self.sub)
        off[:-1] += np.abs(self.sup)
        return bool(np.all(np.abs(self.diag) > off))


@njit(cache=True)
def _thomas(sub: np.ndarray, diag: np.ndarray, sup: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """
    Thomas algorithm (Gaussian elimination without pivoting) for a tridiagonal system.

    Parameters
    ----------
    * sub:  Sub-diagonal, length n-1.
    * diag: Diagonal, length n.
    * sup:  Super-diagonal, length n-1.
    * rhs:  Right hand side, length n.

    Returns
    -------
    * x: The solution, length n.
    """
    n = len(rhs)
    b = diag.copy()
    d = rhs.copy()

    if b[0] == 0.0:
        raise ZeroDivisionError("Zero pivot in the tridiagonal solve.")
    for k in range(1, n):
        m = sub[k - 1] / b[k - 1]
        b[k] = b[k] - m * sup[k - 1]
        d[k] = d[k] - m * d[k - 1]
        if b[k] == 0.0:
            raise ZeroDivisionError("Zero pivot in the tridiagonal solve.")

    x = np.empty(n)
    x[n - 1] = d[n - 1] / b[n - 1]
    for k in range(n - 2, -1, -1):
        x[k] = (d[k] - sup[k] * x[k + 1]) / b[k]

    return x


def thomas_solve(system: TridiagonalSystem) -> np.ndarray:
    """
    Solve a tridiagonal system with the Thomas algorithm.

    No pivoting is done, which is exact for the diagonally dominant systems assembled in this package.
    A ZeroDivisionError is raised if a zero pivot is met.
    """
    return _thomas(system.sub, system.diag, system.sup, system.rhs)


def assemble_chemo_system(S:        np.ndarray,
                          n_new:    np.ndarray,
                          params:   ReactionParams,
                          grid:     SpatialGrid,
                          dt:       float) -> TridiagonalSystem:
    """
    Assemble A_k S^{k+1} = S^k + F^k for one backward Euler step.

    Parameters
    ----------
    * S:        S^k at the spatial nodes.
    * n_new:    n^{k+1} at the spatial nodes.
    * params:   Reaction coefficients.
    * grid:     Spatial grid.
    * dt:       Time step.

    Returns
    -------
    * system: A_k stored by diagonals together with the right hand side S^k + Δt H(n^{k+1}, 0).
    """
    assert dt > 0

    c = dt * np.broadcast_to(np.asarray(params.D_S, dtype=float), S.shape) / grid.dx**2
    zero = np.zeros_like(S)

    # S coefficient of the affine reaction term
    diag = 1 + 2*c - dt * (params.H(zero, np.ones_like(S)) - params.H(zero, zero))
    sub  = -c[1:].copy()
    sup  = -c[:-1].copy()

    # Mirrored ghosts S_{-1} = S_1 and S_{Nx+1} = S_{Nx-1}
    sup[0]  = -2 * c[0]
    sub[-1] = -2 * c[-1]

    return TridiagonalSystem(sub, diag, sup, S + dt * params.H(n_new, zero))


def chemo_step(S: np.ndarray, n_new: np.ndarray, params: ReactionParams, grid: SpatialGrid, dt: float) -> np.ndarray:
    """
    Advance S by one backward Euler step using the new density.

    Returns
    -------
    * S^{k+1} at the spatial nodes.
    """
    return thomas_solve(assemble_chemo_system(S, n_new, params, grid, dt))
