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

from openchemo.grids import build_spatial_grid
from openchemo.system_solvers import ReactionParams, TridiagonalSystem, assemble_chemo_system, chemo_step, thomas_solve


def random_dominant_system(n: int) -> TridiagonalSystem:
    sub  = np.random.rand(n - 1) - 0.5
    sup  = np.random.rand(n - 1) - 0.5
    diag = 1 + np.abs(np.concatenate(([0], sub))) + np.abs(np.concatenate((sup, [0]))) + np.random.rand(n)
    return TridiagonalSystem(sub, diag, sup, np.random.rand(n))


def test_thomas_matches_dense_solve():
    np.random.seed(0)
    for _ in range(20):
        system = random_dominant_system(8)
        assert system.is_diagonally_dominant()
        np.testing.assert_allclose(thomas_solve(system), np.linalg.solve(system.to_dense(), system.rhs),
                                   rtol=1e-12, atol=1e-12)


def test_tridiagonal_system_sizes_are_checked():
    with pytest.raises(ValueError):
        TridiagonalSystem(np.zeros(3), np.ones(3), np.zeros(2), np.ones(3))


def test_constant_state_is_a_fixed_point():
    grid = build_spatial_grid(-1.0, 1.0, 50)
    params = ReactionParams(a=1.0, b=1.0, D_S=1.0)
    n_bar = 2.7
    S = np.full(grid.num_nodes, n_bar)

    for _ in range(10):
        S = chemo_step(S, np.full(grid.num_nodes, n_bar), params, grid, 0.01)

    np.testing.assert_allclose(S, n_bar, rtol=1e-13)


def test_neumann_diffusion_conserves_weighted_sum():
    np.random.seed(1)
    grid = build_spatial_grid(-1.0, 1.0, 40)
    params = ReactionParams(a=0.0, b=0.0, D_S=0.3)
    S = np.random.rand(grid.num_nodes)
    total = grid.weights @ S

    for _ in range(25):
        S = chemo_step(S, np.zeros(grid.num_nodes), params, grid, 0.05)

    assert grid.weights @ S == pytest.approx(total, rel=1e-12)
    # Diffusion flattens the profile
    assert np.ptp(S) < 0.5


def test_chemo_system_is_diagonally_dominant_with_variable_diffusivity():
    grid = build_spatial_grid(0.0, 1.0, 10)
    params = ReactionParams(a=1.0, b=0.5, D_S=np.linspace(0.1, 1.0, grid.num_nodes))
    system = assemble_chemo_system(np.zeros(grid.num_nodes), np.ones(grid.num_nodes), params, grid, 0.1)

    assert system.is_diagonally_dominant()
    np.testing.assert_allclose(system.rhs, 0.1)


def test_reaction_params_are_checked():
    with pytest.raises(ValueError):
        ReactionParams(b=-1.0)
    with pytest.raises(ValueError):
        ReactionParams(D_S=-0.1)
    assert ReactionParams(a=2.0, b=1.0).H(np.array([1.0]), np.array([0.5]))[0] == pytest.approx(1.5)


class SaturatingProduction(ReactionParams):
    def H(self, n, S):
        return self.a * n / (1 + n) - self.b * S + 0.1


def test_assembly_uses_the_reaction_term():
    np.random.seed(2)
    grid = build_spatial_grid(0.0, 1.0, 20)
    params = SaturatingProduction(a=2.0, b=0.5, D_S=0.3)
    S = np.random.rand(grid.num_nodes)
    n_new = 3 * np.random.rand(grid.num_nodes)
    dt = 0.02

    S_new = chemo_step(S, n_new, params, grid, dt)

    # Backward Euler residual with the mirrored Neumann ghosts
    padded = np.concatenate(([S_new[1]], S_new, [S_new[-2]]))
    laplacian = (padded[2:] - 2 * S_new + padded[:-2]) / grid.dx**2
    residual = (S_new - S) / dt - params.D_S * laplacian - params.H(n_new, S_new)
    np.testing.assert_allclose(residual, 0.0, atol=1e-10)


@pytest.mark.parametrize('dt', [1e-3, 0.1, 10.0])
def test_chemo_step_keeps_the_discrete_maximum_principle(dt):
    np.random.seed(5)
    grid = build_spatial_grid(-1.0, 1.0, 30)
    params = ReactionParams(a=1.5, b=0.5, D_S=np.linspace(0.1, 2.0, grid.num_nodes))
    S = np.random.rand(grid.num_nodes)

    for _ in range(10):
        n = 4 * np.random.rand(grid.num_nodes)
        S_new = chemo_step(S, n, params, grid, dt)

        assert np.min(S_new) >= 0.0
        bound = max(np.max(np.abs(S)), params.a / params.b * np.max(np.abs(n)))
        assert np.max(np.abs(S_new)) <= bound * (1 + 1e-12)
        S = S_new
