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


import numpy as np
import pytest

from openchemo.grids import bracket, build_spatial_grid, build_velocity_grid, even_extension, half_bracket, \
                            project_complement


def test_spatial_grid_layout():
    grid = build_spatial_grid(-1.0, 1.0, 8)

    assert grid.num_nodes == 9
    assert grid.dx == pytest.approx(0.25)
    np.testing.assert_allclose(grid.faces, grid.nodes[:-1] + 0.125)
    assert len(grid.all_faces) == grid.Nx + 2
    assert grid.all_faces[0] == pytest.approx(-1.125)
    assert grid.all_faces[-1] == pytest.approx(1.125)
    assert np.sum(grid.weights) == pytest.approx(2.0)


def test_spatial_grid_refinement():
    coarse = build_spatial_grid(-1.0, 1.0, 20)
    fine   = build_spatial_grid(-1.0, 1.0, 40)

    assert fine.is_refinement_of(coarse)
    assert not coarse.is_refinement_of(fine)
    np.testing.assert_allclose(fine.nodes[::2], coarse.nodes)


def test_grids_reject_bad_sizes():
    with pytest.raises(ValueError):
        build_spatial_grid(-1.0, 1.0, 1)
    with pytest.raises(ValueError):
        build_spatial_grid(1.0, -1.0, 10)
    with pytest.raises(ValueError):
        build_velocity_grid(-1.0, 1.0, 1)
    with pytest.raises(ValueError):
        build_velocity_grid(-0.5, 1.0, 10)


@pytest.mark.parametrize('Nv', [4, 5])
def test_velocity_grid_symmetry(Nv):
    grid = build_velocity_grid(-1.0, 1.0, Nv)

    assert np.all(grid.nodes[grid.mirror] == -grid.nodes)
    assert np.all(grid.nodes[grid.half_indices] >= 0)
    expected = Nv // 2 + 1 if Nv % 2 == 0 else (Nv + 1) // 2
    assert len(grid.half_indices) == expected
    np.testing.assert_allclose(grid.v_plus + grid.v_minus, grid.nodes)


def test_bracket_is_exact_for_linear_profiles():
    grid = build_velocity_grid(-2.0, 2.0, 7)

    assert bracket(np.ones(grid.num_nodes), grid) == pytest.approx(4.0)
    assert bracket(3 + grid.nodes, grid) == pytest.approx(12.0)

    stack = np.stack([np.ones(grid.num_nodes), 2 * np.ones(grid.num_nodes)])
    np.testing.assert_allclose(bracket(stack, grid), [4.0, 8.0])

    with pytest.raises(ValueError):
        bracket(np.ones(grid.num_nodes + 1), grid)


def test_project_complement_has_zero_mean():
    np.random.seed(0)
    grid = build_velocity_grid(-1.0, 1.0, 10)
    M = np.full(grid.num_nodes, 0.5)
    G = np.random.rand(6, grid.num_nodes)

    projected = project_complement(G, M, grid)

    np.testing.assert_allclose(bracket(projected, grid), 0.0, atol=1e-14)
    np.testing.assert_allclose(project_complement(projected, M, grid), projected, atol=1e-14)


@pytest.mark.parametrize('Nv', [8, 9])
def test_half_bracket_matches_even_extension(Nv):
    np.random.seed(1)
    grid = build_velocity_grid(-1.0, 1.0, Nv)
    r = np.random.rand(3, len(grid.half_indices))

    extended = even_extension(r, grid)

    np.testing.assert_array_equal(extended[:, grid.half_indices], r)
    np.testing.assert_array_equal(extended, extended[:, grid.mirror])
    np.testing.assert_allclose(2 * half_bracket(r, grid), bracket(extended, grid), rtol=1e-14)


def test_half_bracket_is_trapezoid_on_half_line():
    grid = build_velocity_grid(-1.0, 1.0, 8)
    v = grid.nodes[grid.half_indices]

    # Trapezoid rule on [0, 1] integrates v exactly
    assert half_bracket(v, grid) == pytest.approx(0.5)
