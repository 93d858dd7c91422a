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


import os

import numpy as np
import pytest

from openchemo import ConfigParser, run
from openchemo.entry_points import EXIT_BLOW_UP, EXIT_CONFIG_ERROR, EXIT_SUCCESS, build_argument_parser, main
from openchemo.grids import build_spatial_grid
from openchemo.system_solvers import BlowUpError, KellerSegelRunner, ReactionParams, initialize_keller_segel, march


def small_config(**overrides) -> ConfigParser:
    options = {'Nx': 20, 'Nv': 4, 'num_cores': 1, 't_end': 0.05}
    options.update(overrides)
    return ConfigParser(overrides=options)


def keller_segel_runner() -> KellerSegelRunner:
    x_grid = build_spatial_grid(-1.0, 1.0, 20)
    n0, S0 = initialize_keller_segel(x_grid, 2 * np.pi)
    return KellerSegelRunner(n0, S0, x_grid, 1 / 3, 1 / 3, ReactionParams())


def test_march_lands_on_snapshot_times():
    runner = keller_segel_runner()

    trajectory = march(runner, 0.03, [0.1, 0.05])

    assert trajectory.times == [0.05, 0.1]
    assert trajectory.num_steps == 4
    assert runner.time == 0.1


def test_march_records_initial_state():
    runner = keller_segel_runner()

    trajectory = march(runner, 0.03, [0.0])

    assert trajectory.times == [0.0]
    assert trajectory.num_steps == 0
    assert trajectory.mass_audit()['mismatch'] == 0.0


def test_march_blow_up():
    runner = keller_segel_runner()

    with pytest.raises(BlowUpError) as error_info:
        march(runner, 0.01, [0.05, 0.1], blow_up_threshold=1e-3)

    error = error_info.value
    assert error.step == 1
    assert error.t == 0.0
    assert error.last_snapshot.t == 0.0
    assert error.trajectory.blow_up is error
    assert error.trajectory.snapshots == []


def test_run_without_steps():
    trajectory = run(small_config(scheme='mm_explicit', t_end=0.0))

    assert trajectory.times == [0.0]
    assert trajectory.num_steps == 0
    assert trajectory.blow_up is None
    assert trajectory.snapshots[0].g.shape == (22, 5)
    assert np.dot(build_spatial_grid(-1.0, 1.0, 20).weights, trajectory.snapshots[0].n) == pytest.approx(2 * np.pi)


@pytest.mark.parametrize('scheme', ['mm_explicit', 'mm_implicit', 'explicit_kinetic', 'keller_segel', 'odd_even'])
def test_run_every_scheme(scheme):
    trajectory = run(small_config(scheme=scheme, eps=0.5))

    assert trajectory.blow_up is None
    assert trajectory.times == [0.05]
    assert np.all(np.isfinite(trajectory.snapshots[-1].n))
    assert set(trajectory.timing_dict) == {'Create Grids and Model', 'Initial Conditions', 'March'}


def test_run_writes_snapshots(tmp_path):
    config_parser = small_config(working_directory=str(tmp_path) + '/', save_to_file=True, include_f=True,
                                 snapshot_times='0, 0.05')

    trajectory = run(config_parser)

    output_folder = os.path.join(str(tmp_path), 'output_chemo')
    assert sorted(os.listdir(output_folder)) == ['density_t0.05.csv', 'density_t0.csv']
    assert 'Save Results' in trajectory.timing_dict
    data = np.loadtxt(os.path.join(output_folder, 'density_t0.05.csv'), delimiter=',', skiprows=1)
    assert data.shape == (21, 3 + 5)
    np.testing.assert_allclose(data[:, 1], trajectory.snapshots[-1].n)


def test_run_from_config_file(tmp_path):
    path = tmp_path / 'config.json'
    path.write_text('{"RUN": {"scheme": "keller_segel", "t_end": 0.02}, "GRID": {"Nx": 10, "Nv": 4}}',
                    encoding='utf-8')

    trajectory = run(str(path))

    assert trajectory.scheme == 'keller_segel'
    assert trajectory.times == [0.02]


def test_run_blow_up_of_the_explicit_kinetic_scheme():
    # Macroscopic steps are far beyond the stability limit of the explicit scheme at small ε.
    config_parser = small_config(scheme='explicit_kinetic', eps=1e-6, dt_policy='macroscopic', t_end=0.2)

    trajectory = run(config_parser)
    assert trajectory.blow_up is not None
    assert trajectory.blow_up.last_snapshot.t == 0.0

    with pytest.raises(BlowUpError):
        run(small_config(scheme='explicit_kinetic', eps=1e-6, dt_policy='macroscopic', t_end=0.2),
            raise_on_blow_up=True)


def test_cli_exit_codes(tmp_path):
    small = ['--Nx', '20', '--Nv', '4', '--num_cores', '1']

    assert main(['run', '--scheme', 'mm_explicit', '--t_end', '0'] + small) == EXIT_SUCCESS
    assert main(['run', '--scheme', 'upwind'] + small) == EXIT_CONFIG_ERROR
    assert main(['run', '--eps', '-1'] + small) == EXIT_CONFIG_ERROR
    assert main(['run', '--config', str(tmp_path / 'missing.ini')] + small) == EXIT_CONFIG_ERROR
    assert main(['run', '--scheme', 'explicit_kinetic', '--eps', '1e-6', '--dt_policy', 'macroscopic',
                 '--t_end', '0.2'] + small) == EXIT_BLOW_UP


def test_cli_reads_ini_config(tmp_path):
    path = tmp_path / 'config'
    path.write_text('[RUN]\nscheme = keller_segel\nt_end = 0.02\n[GRID]\nNx = 10\nNv = 4\n', encoding='utf-8')

    assert main(['run', '--config', str(path), '--t_end', '0.01']) == EXIT_SUCCESS
    assert main(['evolve', '--config', str(path), '--times', '0.01, 0.02', '--num_cores', '1']) == EXIT_SUCCESS


def test_converge_defaults_to_the_diffusive_study_time():
    args = build_argument_parser().parse_args(['converge', '--eps_list', '1e-4, 1e-6', '--Nx_list', '80, 160',
                                               '--dt_policy', 'diffusive_sq'])

    assert args.t == 0.1
    assert args.eps_list == [1e-4, 1e-6]
    assert args.Nx_list == [80, 160]
    assert args.dt_policy == 'diffusive_sq'
