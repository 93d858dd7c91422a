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

from openchemo import ConfigParser
from openchemo.config_functions import RunConfig
from openchemo.grids import bracket, build_velocity_grid, project_complement
from openchemo.turning_models import ChemotacticKernel, ImplicitTurningSolver, PositivePartKernel, RelaxationModel, \
                                     TurningModel, apply_T0, apply_T1, chemotactic_sensitivity, \
                                     create_turning_model, diffusion_coefficient, drift_coefficient, solve_T0, \
                                     uniform_equilibrium


def relaxation_model(Nv: int = 8, sigma: float = 1.0) -> RelaxationModel:
    grid = build_velocity_grid(-1.0, 1.0, Nv)
    return RelaxationModel(grid, uniform_equilibrium(grid), sigma)


def quartic_model(Nv: int = 8, sigma: float = 1.0) -> TurningModel:
    """Symmetric kernel T0(v, v') = σM(1 + v²v'²), which satisfies every model assumption."""
    grid = build_velocity_grid(-1.0, 1.0, Nv)
    return TurningModel(grid, uniform_equilibrium(grid), sigma, lambda v, vp: sigma * 0.5 * (1 + v**2 * vp**2))


def test_relaxation_operator_closed_form():
    np.random.seed(0)
    model = relaxation_model(sigma=2.0)
    G = np.random.rand(5, model.grid.num_nodes)

    expected = -2.0 * (G - bracket(G, model.grid)[:, np.newaxis] * model.M)
    np.testing.assert_allclose(apply_T0(G, model), expected, atol=1e-13)
    np.testing.assert_allclose(bracket(apply_T0(G, model), model.grid), 0.0, atol=1e-13)


@pytest.mark.parametrize('make_model', [relaxation_model, quartic_model])
def test_t0_matrix_matches_operator(make_model):
    np.random.seed(1)
    model = make_model()
    G = np.random.rand(model.grid.num_nodes)

    np.testing.assert_allclose(model.t0_matrix @ G, apply_T0(G, model), atol=1e-13)


def test_solve_T0_inverts_relaxation():
    np.random.seed(2)
    model = relaxation_model()
    G = project_complement(np.random.rand(4, model.grid.num_nodes), model.M, model.grid)

    np.testing.assert_allclose(solve_T0(apply_T0(G, model), model), G, atol=1e-12)


def test_solve_T0_general_kernel():
    np.random.seed(3)
    model = quartic_model()
    rhs = project_complement(np.random.rand(model.grid.num_nodes), model.M, model.grid)

    G = solve_T0(rhs, model)

    assert abs(bracket(G, model.grid)) < 1e-12
    # T0(G) = rhs up to a multiple of M from the bordering
    multiple = (rhs - apply_T0(G, model)) / model.M
    np.testing.assert_allclose(multiple, multiple[0], atol=1e-12)


def test_solve_T0_rejects_non_zero_mean():
    model = relaxation_model()
    with pytest.raises(ValueError):
        solve_T0(np.ones(model.grid.num_nodes), model)


@pytest.mark.parametrize('make_model', [relaxation_model, quartic_model])
def test_implicit_turning_solver_against_dense_solve(make_model):
    np.random.seed(4)
    model = make_model()
    factor = 37.5
    rhs = np.random.rand(6, model.grid.num_nodes)

    operator = np.eye(model.grid.num_nodes) - factor * model.t0_matrix
    expected = np.linalg.solve(operator, rhs.T).T

    np.testing.assert_allclose(ImplicitTurningSolver(model, factor)(rhs), expected, rtol=1e-12, atol=1e-12)


def test_implicit_turning_solver_keeps_mean_for_relaxation():
    np.random.seed(5)
    model = relaxation_model()
    rhs = project_complement(np.random.rand(3, model.grid.num_nodes), model.M, model.grid)

    solution = ImplicitTurningSolver(model, 1e8)(rhs)

    np.testing.assert_allclose(bracket(solution, model.grid), 0.0, atol=1e-14)


def test_generic_kernel_matches_positive_part_kernel():
    np.random.seed(6)
    grid = build_velocity_grid(-1.0, 1.0, 9)
    G = np.random.rand(4, grid.num_nodes)
    dS = np.array([-1.5, 0.0, 0.3, 2.0])

    generic = ChemotacticKernel(lambda dS, v, vp: np.maximum(v * dS, 0.0))

    np.testing.assert_allclose(generic.apply(dS, G, grid), PositivePartKernel().apply(dS, G, grid), atol=1e-14)


@pytest.mark.parametrize('coefficient', [diffusion_coefficient, chemotactic_sensitivity])
def test_macroscopic_coefficients_converge_at_second_order(coefficient):
    Nv_list = [8, 16, 32, 64]
    errors = [abs(coefficient(relaxation_model(Nv)) - 1 / 3) for Nv in Nv_list]
    orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))

    np.testing.assert_allclose(orders, 2.0, atol=1e-6)
    # The trapezoid rule over-estimates ∫ v² by dv²/6
    assert coefficient(relaxation_model(8)) == pytest.approx(1 / 3 + 0.25**2 / 6, rel=1e-12)


def test_drift_is_linear_in_the_gradient():
    model = relaxation_model(16)
    chi = chemotactic_sensitivity(model)

    assert drift_coefficient(2.5, model) == pytest.approx(2.5 * chi, rel=1e-12)
    assert drift_coefficient(-2.0, model) == pytest.approx(-2.0 * chi, rel=1e-12)
    np.testing.assert_allclose(apply_T1(0.0, model.M, model), 0.0)


def test_model_assumptions_are_checked():
    grid = build_velocity_grid(-1.0, 1.0, 8)

    with pytest.raises(ValueError):
        RelaxationModel(grid, lambda v: np.ones_like(v), 1.0)  # not normalized
    with pytest.raises(ValueError):
        RelaxationModel(grid, uniform_equilibrium(grid), 0.0)
    with pytest.raises(ValueError):
        TurningModel(grid, uniform_equilibrium(grid), 1.0, lambda v, vp: 0.25 + 0 * v * vp)  # below σM
    with pytest.raises(ValueError):
        TurningModel(grid, uniform_equilibrium(grid), 1.0, lambda v, vp: 0.5 * (1 + vp**2) + 0 * v)  # no balance


def test_create_turning_model_from_config():
    run_config = RunConfig(ConfigParser(overrides={'Nv': 8}))
    grid = build_velocity_grid(-1.0, 1.0, 8)

    model = create_turning_model(run_config, grid)
    assert model.is_relaxation
    assert isinstance(model.kernel_T1, PositivePartKernel)

    run_config = RunConfig(ConfigParser(overrides={'turning_kernel': 'sigma*M*(1 + v**2*vp**2)',
                                                   'chemotactic_kernel': 'Max(v*dS, 0)'}))
    model = create_turning_model(run_config, grid)
    assert not model.is_relaxation
    np.testing.assert_allclose(model.t0_matrix, quartic_model().t0_matrix, atol=1e-14)

    np.random.seed(7)
    G = np.random.rand(grid.num_nodes)
    np.testing.assert_allclose(apply_T1(0.7, G, model), PositivePartKernel().apply(0.7, G, grid), atol=1e-14)


def test_unknown_symbols_in_kernel_expression():
    run_config = RunConfig(ConfigParser(overrides={'chemotactic_kernel': 'Max(v*dS*w, 0)'}))
    with pytest.raises(ValueError):
        create_turning_model(run_config, build_velocity_grid(-1.0, 1.0, 8))
