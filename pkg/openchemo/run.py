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


from os.path import join
from time import perf_counter_ns
from typing import Union

from .config_functions import ConfigParser, RunConfig
from .grids import build_spatial_grid, build_velocity_grid
from .postprocessing import save_trajectory
from .system_solvers import BlowUpError, Trajectory, create_runner, march
from .turning_models import create_turning_model


def run(config_parser_or_file: Union[ConfigParser, str], raise_on_blow_up: bool = False) -> Trajectory:
    """
    The main function of the OpenChemo package. Sequentially goes through each step required to
    build the grids and the turning model, set up the initial state of the selected scheme, march it through the
    snapshot times, and write the results.

    Parameters
    ----------
    * config_parser_or_file:    An OpenChemo ConfigParser or the path to a config file.
    * raise_on_blow_up:         Re-raise the BlowUpError instead of returning the partial trajectory.

    Returns
    -------
    * trajectory:   The snapshots and step reports. If the run blew up, `trajectory.blow_up` holds the error and the
                    snapshots are those recorded before it. `trajectory.timing_dict` maps the name of each step to
                    the time, in ns, that the step took.
    """
    timing_dict = {}

    if type(config_parser_or_file) is ConfigParser:
        config_parser = config_parser_or_file
    else:
        config_parser = ConfigParser(config_parser_or_file)
    if config_parser.need_to_update_paths:
        config_parser.update_paths()

    run_config = RunConfig(config_parser)
    print(f"Start {run_config.scheme} with eps = {run_config.eps:g}, Nx = {run_config.Nx}, Nv = {run_config.Nv}")

    start = perf_counter_ns()
    (x_min, x_max, Nx), (v_min, v_max, Nv) = run_config.grid_bounds()
    x_grid = build_spatial_grid(x_min, x_max, Nx)
    v_grid = build_velocity_grid(v_min, v_max, Nv)
    model  = create_turning_model(run_config, v_grid)
    timing_dict['Create Grids and Model'] = perf_counter_ns() - start

    start = perf_counter_ns()
    runner = create_runner(run_config, x_grid, model)
    timing_dict['Initial Conditions'] = perf_counter_ns() - start

    dt = run_config.time_step()
    start = perf_counter_ns()
    try:
        trajectory = march(runner, dt, run_config.snapshot_times, run_config.blow_up_threshold, run_config.debug)
    except BlowUpError as error:
        if raise_on_blow_up:
            raise
        print(f"WARNING: {error}")
        trajectory = error.trajectory
    timing_dict['March'] = perf_counter_ns() - start

    if run_config.save_to_file:
        start = perf_counter_ns()
        save_trajectory(trajectory, join(run_config.output_folder_path, run_config.csv_file), run_config.include_f)
        timing_dict['Save Results'] = perf_counter_ns() - start

    trajectory.timing_dict = timing_dict
    print(f"Done {run_config.scheme}, {trajectory.num_steps} steps of dt = {dt:.6e}")
    return trajectory
