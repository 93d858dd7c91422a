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

from openchemo import ConfigParser, run
from openchemo.experiments import EvolutionResult, convergence_study, evolution_study, regime_sweep, run_all, \
                                  scheme_comparison
from openchemo.grids import build_spatial_grid
from openchemo.postprocessing import relative_l2_distance


def study_config(**overrides) -> ConfigParser:
    options = {'num_cores': 1, 'Nx': 50, 'Nv': 16}
    options.update(overrides)
    return ConfigParser(overrides=options)


def test_run_all_in_parallel_matches_serial():
    configs = [study_config(scheme=scheme, eps=0.5, t_end=0.05, Nx=20, Nv=4) for scheme in ('mm_explicit', 'keller_segel')]

    serial   = run_all(configs, 1)
    parallel = run_all(configs, 2)

    for a, b in zip(serial, parallel):
        assert a.scheme == b.scheme
        np.testing.assert_array_equal(a.snapshots[-1].n, b.snapshots[-1].n)


def test_convergence_study_rejects_grids_which_do_not_double():
    with pytest.raises(ValueError):
        convergence_study(study_config(), 'mm_implicit', [1.0], [20, 30], 0.1)


def test_study_convergence_in_the_diffusive_regime():
    config_parser = study_config(dt_policy='diffusive_sq', Nv=8)

    reports = convergence_study(config_parser, 'mm_implicit', [1e-6], [80, 160, 320], 0.1)

    report = reports[1e-6]
    assert report.errors_f is not None
    assert report.errors_n[2] < report.errors_n[1]
    assert 1.5 <= report.orders_n[-1] <= 2.5


def test_study_implicit_and_explicit_macro_steps_agree():
    x_grid = build_spatial_grid(-1.0, 1.0, 50)
    dt = x_grid.dx**2 / 2
    densities = [run(study_config(scheme=scheme, eps=1e-6, dt_policy='fixed', dt=dt, t_end=0.1)).snapshots[-1].n
                 for scheme in ('mm_explicit', 'mm_implicit')]

    assert relative_l2_distance(densities[0], densities[1], x_grid) <= 1e-2


@pytest.mark.parametrize('eps', [1.0, 2.0**-3, 2.0**-5, 2.0**-7, 2.0**-9])
def test_study_micro_macro_is_stable_across_regimes(eps):
    trajectory = run(study_config(scheme='mm_implicit', eps=eps, Nx=200, t_end=0.5))

    assert trajectory.blow_up is None
    assert np.all(np.isfinite(trajectory.snapshots[-1].n))
    assert np.max(np.abs(trajectory.snapshots[-1].n)) < 1e3


def test_study_odd_even_matches_keller_segel_in_the_diffusive_regime():
    x_grid = build_spatial_grid(-1.0, 1.0, 200)
    odd_even = run(study_config(scheme='odd_even', eps=1e-6, Nx=200, Nv=32, t_end=0.5))
    keller_segel = run(study_config(scheme='keller_segel', eps=1e-6, Nx=200, t_end=0.5, dt_policy='fixed',
                                    dt=x_grid.dx / 40))

    assert odd_even.blow_up is None
    assert odd_even.dt == pytest.approx(x_grid.dx / 40)
    assert relative_l2_distance(odd_even.snapshots[-1].n, keller_segel.snapshots[-1].n, x_grid) <= 5e-2


def test_study_regime_sweep_approaches_keller_segel():
    result = regime_sweep(study_config(Nx=200, Nv=32), [2.0**-9], t_end=0.1)

    assert result.blown_up == []
    assert set(result.profiles) == {'eps=0.00195312', 'keller_segel'}
    assert result.distances['eps=0.00195312_vs_keller_segel'] <= 5e-2


def test_study_scheme_comparison_in_the_kinetic_regime():
    result = scheme_comparison(study_config(Nx=200, Nv=32, project_to_equilibrium=True), 1.0, t_end=0.1)

    assert result.blown_up == []
    assert set(result.profiles) == {'mm_implicit', 'odd_even', 'explicit_kinetic'}
    assert result.distances['mm_implicit_vs_odd_even'] <= 5e-2
    assert all(distance <= 1e-1 for distance in result.distances.values())


def test_study_evolution_settles(tmp_path):
    config_parser = study_config(Nx=100, scheme='mm_implicit', working_directory=str(tmp_path) + '/',
                                 save_to_file=True)

    result = evolution_study(config_parser, 1e-6, [0.5, 1.0, 1.5, 2.0])

    assert result.blown_up == []
    assert result.times == [0.5, 1.0, 1.5, 2.0]
    assert len(result.differences) == 3
    assert result.differences[-1] < result.differences[0]
    assert result.settling
    assert (tmp_path / 'output_chemo' / 'evolution_eps1e-06.csv').exists()


def test_evolution_result_flags_a_rising_trend():
    x = np.linspace(-1.0, 1.0, 5)

    assert EvolutionResult(x, [0, 1, 2, 3, 4], {}, [5.0, 1.0, 0.5, 0.25], {}).settling
    # Only the last three intervals count
    assert EvolutionResult(x, [0, 1, 2, 3, 4], {}, [0.1, 1.0, 0.5, 0.25], {}).settling
    assert not EvolutionResult(x, [0, 1, 2, 3], {}, [1.0, 0.5, 0.6], {}).settling
