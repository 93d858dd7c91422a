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
Velocity quadrature.

All velocity integrals use the trapezoid rule, written with the node average Ḡ_l = (G_l + G_{l+1})/2:

    ⟨G⟩ = Δv Σ_{l=0}^{Nv-1} Ḡ_l

The functions below accept a single velocity profile (shape `(Nv+1,)`) or a stack of them,
in which case the velocity index must be the last axis.
"""

import numpy as np

from .phase_space import VelocityGrid


def _check_profile(G: np.ndarray, grid: VelocityGrid) -> np.ndarray:
    G = np.asarray(G, dtype=float)
    if G.shape[-1] != grid.num_nodes:
        raise ValueError(f"Velocity profile has {G.shape[-1]} entries but the grid has {grid.num_nodes} nodes.")
    return G


def midpoint_average(G: np.ndarray) -> np.ndarray:
    """Ḡ_l = (G_l + G_{l+1})/2 along the last axis."""
    return 0.5 * (G[..., :-1] + G[..., 1:])


def bracket(G: np.ndarray, grid: VelocityGrid) -> np.ndarray:
    """
    Trapezoid approximation of ∫ G dv over the velocity grid.

    Parameters
    ----------
    * G:    Velocity profile(s), velocity index last.
    * grid: The velocity grid.

    Returns
    -------
    * The integral, a float for a single profile or an array of the leading shape for a stack.
    """
    G = _check_profile(G, grid)
    return grid.dv * np.sum(midpoint_average(G), axis=-1)


def project_complement(G: np.ndarray, M: np.ndarray, grid: VelocityGrid) -> np.ndarray:
    """
    Apply I - P_M, i.e. return G - M⟨G⟩.

    When ⟨M⟩ = 1 the result has zero bracket.
    """
    G = _check_profile(G, grid)
    M = _check_profile(M, grid)
    return G - M * bracket(G, grid)[..., np.newaxis]


def half_bracket(r: np.ndarray, grid: VelocityGrid) -> np.ndarray:
    """
    Trapezoid approximation of ∫_0^{v_max} r dv for a function r known on the v ≥ 0 nodes (`grid.half_indices`).

    Computed as half of the bracket of the even extension of r, so it is the trapezoid rule on [0, v_max] when
    v = 0 is a node, and stays consistent with `bracket` when it is not.
    """
    r = np.asarray(r, dtype=float)
    if r.shape[-1] != len(grid.half_indices):
        raise ValueError(f"Half profile has {r.shape[-1]} entries but the grid has {len(grid.half_indices)} v ≥ 0 nodes.")
    return 0.5 * bracket(even_extension(r, grid), grid)


def even_extension(r: np.ndarray, grid: VelocityGrid) -> np.ndarray:
    """Extend values on the v ≥ 0 nodes to the whole grid by r(-v) = r(v)."""
    full = np.empty(r.shape[:-1] + (grid.num_nodes,))
    full[..., grid.half_indices] = r
    full[..., grid.mirror[grid.half_indices]] = r
    return full
