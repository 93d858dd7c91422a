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
Uniform spatial and velocity grids.

The spatial grid is node centred (`x_i`, i = 0..Nx) with a staggered set of faces (`x_{i+1/2}`) half way between
consecutive nodes.
The two ghost faces, at indices -1/2 and Nx+1/2, only have their coordinates stored here;
their values are boundary state and live in `openchemo.system_solvers.mm_system.MMState`.
"""

import numpy as np


def _read_only(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class SpatialGrid:
    """
    Uniform node centred spatial grid on [x_min, x_max] with staggered faces.
    """

    def __init__(self, x_min: float, x_max: float, Nx: int) -> None:
        """
        Parameters
        ----------
        * x_min:    Left end of the domain.
        * x_max:    Right end of the domain.
        * Nx:       Number of cells, the grid has Nx+1 nodes.
        """
        if int(Nx) != Nx or Nx < 2:
            raise ValueError(f"Need at least 2 spatial cells, {Nx} were requested.")
        if not x_max > x_min:
            raise ValueError(f"Degenerate spatial interval [{x_min}, {x_max}].")

        self.x_min  = float(x_min)
        """Left end of the domain."""
        self.x_max  = float(x_max)
        """Right end of the domain."""
        self.Nx     = int(Nx)
        """Number of cells."""
        self.dx     = (self.x_max - self.x_min) / self.Nx
        """Node spacing."""

        self.nodes = _read_only(self.x_min + self.dx * np.arange(self.Nx + 1))
        """x_i for i = 0..Nx."""
        self.faces = _read_only(0.5 * (self.nodes[:-1] + self.nodes[1:]))
        """Interior faces x_{i+1/2} for i = 0..Nx-1."""
        self.all_faces = _read_only(np.concatenate(([self.x_min - 0.5 * self.dx],
                                                    self.faces,
                                                    [self.x_max + 0.5 * self.dx])))
        """
        All faces including the two ghost faces, i.e. x_{i+1/2} for i = -1..Nx.
        Index k of this array is the face i+1/2 with i = k-1.
        """

        self.weights = np.full(self.Nx + 1, self.dx)
        self.weights[[0, -1]] *= 0.5
        self.weights = _read_only(self.weights)
        """Trapezoid weights over the nodes (half-weights at the two boundary nodes)."""

    @property
    def num_nodes(self) -> int:
        return self.Nx + 1

    def is_refinement_of(self, other: 'SpatialGrid') -> bool:
        """
        Check whether every node of `other` is a node of this grid, i.e. this grid was obtained by halving dx.
        """
        return np.isclose(self.x_min, other.x_min) \
            and np.isclose(self.x_max, other.x_max) \
            and self.Nx == 2 * other.Nx

    def __repr__(self) -> str:
        return f"SpatialGrid(x_min={self.x_min}, x_max={self.x_max}, Nx={self.Nx})"


class VelocityGrid:
    """
    Uniform velocity grid, symmetric about 0, with the midpoints used by the discrete turning operators.
    """

    def __init__(self, v_min: float, v_max: float, Nv: int) -> None:
        """
        Parameters
        ----------
        * v_min:    Smallest velocity, must equal -v_max.
        * v_max:    Largest velocity.
        * Nv:       Number of velocity cells, the grid has Nv+1 nodes.
        """
        if int(Nv) != Nv or Nv < 2:
            raise ValueError(f"Need at least 2 velocity cells, {Nv} were requested.")
        if not v_max > 0 or not np.isclose(v_min, -v_max, rtol=0, atol=1e-14 * v_max):
            raise ValueError(f"The velocity grid must be symmetric about 0, got [{v_min}, {v_max}].")

        self.v_min  = -float(v_max)
        """Smallest velocity."""
        self.v_max  = float(v_max)
        """Largest velocity."""
        self.Nv     = int(Nv)
        """Number of velocity cells."""
        self.dv     = (self.v_max - self.v_min) / self.Nv
        """Velocity spacing."""

        # Built from the index so that v_j = -v_{Nv-j} holds bit for bit.
        j = np.arange(self.Nv + 1)
        self.nodes = _read_only(self.dv * (j - 0.5 * self.Nv))
        """v_j for j = 0..Nv."""
        self.midpoints = _read_only(self.dv * (j[:-1] + 0.5 - 0.5 * self.Nv))
        """v̄_l = (v_l + v_{l+1})/2 for l = 0..Nv-1."""

        self.v_plus  = _read_only(np.maximum(self.nodes, 0.0))
        """Positive part v⁺ = max(v, 0) at the nodes."""
        self.v_minus = _read_only(np.minimum(self.nodes, 0.0))
        """Negative part v⁻ = min(v, 0) at the nodes."""

        self.half_indices = _read_only(np.nonzero(self.nodes >= -1e-14 * self.v_max)[0])
        """Indices of the nodes with v_j ≥ 0 (the parity grid)."""
        self.mirror = _read_only(self.Nv - np.arange(self.Nv + 1))
        """Index of -v_j, i.e. `nodes[mirror[j]] == -nodes[j]`."""

    @property
    def num_nodes(self) -> int:
        return self.Nv + 1

    def __repr__(self) -> str:
        return f"VelocityGrid(v_min={self.v_min}, v_max={self.v_max}, Nv={self.Nv})"


def build_spatial_grid(x_min: float, x_max: float, Nx: int) -> SpatialGrid:
    """
    Build the uniform spatial grid with Nx cells on [x_min, x_max].

    Raises a ValueError for Nx < 2 or a degenerate interval.
    """
    return SpatialGrid(x_min, x_max, Nx)


def build_velocity_grid(v_min: float, v_max: float, Nv: int) -> VelocityGrid:
    """
    Build the symmetric uniform velocity grid with Nv cells on [v_min, v_max].

    Raises a ValueError for Nv < 2 or for v_min != -v_max.
    """
    return VelocityGrid(v_min, v_max, Nv)
