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
All functions related to time stepping the kinetic chemotaxis problem with one of the available schemes.
"""

from ..config_functions import RunConfig
from ..grids import SpatialGrid
from ..turning_models import TurningModel, chemotactic_sensitivity, diffusion_coefficient
from .boundary_and_initial_conditions import InflowData, create_inflow_data, initial_density, initial_distribution
from .chemo_system import ReactionParams, TridiagonalSystem, assemble_chemo_system, chemo_step, thomas_solve
from .helper_functions import BlowUpError, SchemeRunner, Snapshot, StepReport, Trajectory, march
from .keller_segel_system import KellerSegelRunner, initialize_keller_segel, ks_step
from .kinetic_system import KineticRunner, KineticState, explicit_kinetic_step, initialize_kinetic
from .mm_system import MMRunner, MMState, apply_boundary_density, apply_ghost_faces, initialize, \
                       macro_step_explicit, macro_step_implicit, micro_step, step
from .odd_even_system import OddEvenRunner, ParityState, initialize_parity, odd_even_step, parity_reconstruct, \
                             parity_transform


def create_runner(run_config: RunConfig, x_grid: SpatialGrid, model: TurningModel) -> SchemeRunner:
    """
    Wrapper function to clean up call sites.

    Builds the initial state of the scheme selected by `RUN, scheme` and wraps it in the matching runner.

    Parameters
    ----------
    * run_config:   Settings of the run.
    * x_grid:       Spatial grid.
    * model:        Turning model, which also carries the velocity grid.

    Returns
    -------
    * runner: Ready to be passed to `openchemo.system_solvers.helper_functions.march`.
    """
    scheme  = run_config.scheme
    eps     = run_config.eps
    params  = ReactionParams(run_config.a, run_config.b, run_config.D_S)
    inflow  = create_inflow_data(run_config, model.grid)
    project = run_config.project_to_equilibrium

    if scheme in ('mm_explicit', 'mm_implicit'):
        state = initialize(eps, x_grid, model, run_config.total_mass, inflow, project)
        return MMRunner(state, x_grid, model, params, inflow, scheme.split('_')[1])
    elif scheme == 'explicit_kinetic':
        state = initialize_kinetic(eps, x_grid, model, run_config.total_mass, project)
        return KineticRunner(state, x_grid, model, params, inflow)
    elif scheme == 'keller_segel':
        n0, S0 = initialize_keller_segel(x_grid, run_config.total_mass)
        return KellerSegelRunner(n0, S0, x_grid, diffusion_coefficient(model), chemotactic_sensitivity(model), params)
    elif scheme == 'odd_even':
        if not inflow.is_vacuum:
            print('WARNING: the odd-even scheme only supports vacuum inflow, the inflow data is ignored.')
        state = initialize_parity(eps, x_grid, model, run_config.total_mass, project)
        return OddEvenRunner(state, x_grid, model, params)
    else:
        raise ValueError(f"Unknown scheme {scheme}.")
