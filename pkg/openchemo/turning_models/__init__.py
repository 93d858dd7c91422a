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
Turning models (equilibrium, turning kernels), their discrete operators, and the macroscopic coefficients
D_n and χ of the Keller-Segel limit.
"""

from ..config_functions import RunConfig, lambdify_config_expression
from ..grids import VelocityGrid
from .models import ChemotacticKernel, PositivePartKernel, RelaxationModel, TurningModel, uniform_equilibrium
from .operators import ImplicitTurningSolver, apply_T0, apply_T1, chemotactic_sensitivity, diffusion_coefficient, \
                       drift_coefficient, solve_T0


def create_turning_model(run_config: RunConfig, grid: VelocityGrid) -> TurningModel:
    """
    Build the turning model described by the MODEL section of the config file.

    - `equilibrium`:        `uniform` or an expression in `v`.
    - `turning_kernel`:     `relaxation` or an expression in `v, vp, sigma, M, Mp` where `M = M(v)` and `Mp = M(vp)`.
    - `chemotactic_kernel`: `positive_part` or an expression in `dS, v, vp`.

    Parameters
    ----------
    * run_config:   Settings of the run.
    * grid:         The velocity grid to discretize the model on.

    Returns
    -------
    * model: The validated turning model.
    """
    if run_config.equilibrium.lower() == 'uniform':
        equilibrium = uniform_equilibrium(grid)
    else:
        equilibrium = lambdify_config_expression(run_config.equilibrium, ['v'])

    if run_config.chemotactic_kernel.lower() == 'positive_part':
        kernel_T1 = PositivePartKernel()
    else:
        kernel_T1 = ChemotacticKernel(lambdify_config_expression(run_config.chemotactic_kernel, ['dS', 'v', 'vp']))

    sigma = run_config.sigma
    if run_config.turning_kernel.lower() == 'relaxation':
        return RelaxationModel(grid, equilibrium, sigma, kernel_T1)

    kernel_expr = lambdify_config_expression(run_config.turning_kernel, ['v', 'vp', 'sigma', 'M', 'Mp'])

    def kernel_T0(v, v_prime):
        return kernel_expr(v, v_prime, sigma, equilibrium(v), equilibrium(v_prime))

    return TurningModel(grid, equilibrium, sigma, kernel_T0, kernel_T1)
