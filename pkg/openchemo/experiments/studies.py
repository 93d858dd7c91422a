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
The numerical studies: convergence under grid refinement, the sweep from the kinetic to the diffusive regime,
the comparison of the schemes at one ε, and the long time evolution towards a stationary profile.

Each study derives one configuration per run from a base `ConfigParser` with `ConfigParser.copy_with`.
The runs of a study are independent and are spread over `SETUP, num_cores` processes when more than one core is
allowed. Results are returned and, if `OUTPUT, save_to_file` is set, written as CSV files in the output folder.
"""

from multiprocessing.pool import Pool
from os.path import join
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..config_functions import ConfigParser, RunConfig
from ..grids import build_spatial_grid, build_velocity_grid
from ..postprocessing import ConvergenceReport, is_non_increasing, refinement_error, relative_l2_distance, \
                             save_convergence_table, save_distance_table, save_profiles, stationarity_diagnostic
from ..run import run
from ..system_solvers import Trajectory

REGIME_SWEEP_EPS = (2.0**0, 2.0**-3, 2.0**-5, 2.0**-7, 2.0**-9)
"""ε values of the regime sweep, from the kinetic to the diffusive regime."""


class StudyResult:
    """
    Density profiles of several runs on a common grid with the distances between them.
    """

    def __init__(self, x: np.ndarray, profiles: Dict[str, np.ndarray], distances: Dict[str, float],
                 blown_up: Optional[List[str]] = None) -> None:
        self.x          = x
        """Spatial nodes."""
        self.profiles   = profiles
        """Final density of each run, NaN everywhere for a run which blew up."""
        self.distances  = distances
        """Relative L² distances, keyed by `<run>_vs_<reference>`."""
        self.blown_up   = blown_up or []
        """Names of the runs which blew up."""


class EvolutionResult(StudyResult):
    """
    Density at every snapshot time of one run, with the stationarity diagnostic and the mass audit.
    """

    TREND_INTERVALS = 3
    """Number of trailing snapshot intervals checked for a settling trend."""

    def __init__(self, x: np.ndarray, times: List[float], profiles: Dict[str, np.ndarray],
                 differences: List[float], mass_audit: Dict[str, float], blown_up: Optional[List[str]] = None) -> None:
        super().__init__(x, profiles, {}, blown_up)
        self.times          = times
        """Snapshot times."""
        self.differences    = differences
        """‖n(t_{m+1}) - n(t_m)‖ between consecutive snapshots."""
        self.settling       = is_non_increasing(differences[-self.TREND_INTERVALS:])
        """Whether the differences over the last intervals do not increase."""
        self.mass_audit     = mass_audit
        """See `openchemo.system_solvers.helper_functions.Trajectory.mass_audit`."""


def _run_sections(sections: Dict[str, Dict[str, str]]) -> Trajectory:
    return run(ConfigParser.from_dict(sections, need_to_update_paths=False))


def run_all(config_parsers: Sequence[ConfigParser], num_cores: int = 1) -> List[Trajectory]:
    """
    Run several configurations, in parallel if `num_cores > 1`.
    Results are in the same order as the inputs. Output files are not written by the individual runs.
    """
    jobs = [config_parser.copy_with(save_to_file=False).to_dict() for config_parser in config_parsers]

    if num_cores <= 1 or len(jobs) == 1:
        return [_run_sections(sections) for sections in jobs]

    with Pool(processes=min(num_cores, len(jobs))) as pool:
        results = [pool.apply_async(_run_sections, (sections,)) for sections in jobs]
        return [result.get() for result in results]


def _prepare(config_parser: ConfigParser) -> ConfigParser:
    if config_parser.need_to_update_paths:
        config_parser.update_paths()
    return config_parser


def _final_density(trajectory: Trajectory, num_nodes: int) -> np.ndarray:
    if trajectory.blow_up is not None or not trajectory.snapshots:
        return np.full(num_nodes, np.nan)
    return trajectory.snapshots[-1].n


def _distance(u: np.ndarray, reference: np.ndarray, x_grid) -> float:
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(reference))):
        return np.inf
    return relative_l2_distance(u, reference, x_grid)


def _mm_scheme(config_parser: ConfigParser) -> str:
    scheme = config_parser.get_item(['RUN', 'scheme'], str)
    return scheme if scheme.startswith('mm_') else 'mm_implicit'


def _output_path(config_parser: ConfigParser, file_name: str) -> Optional[str]:
    if not config_parser.get_item(['OUTPUT', 'save_to_file'], bool):
        return None
    return join(config_parser.get_item(['SETUP', 'output_folder_path'], str), file_name)


def convergence_study(config_parser:    ConfigParser,
                      scheme:           str,
                      eps_list:         Sequence[float],
                      Nx_list:          Sequence[int],
                      t:                float) -> Dict[float, ConvergenceReport]:
    """
    Refinement errors e_Δx = ‖u_Δx(t) - u_2Δx(t)‖ / ‖u_2Δx(0)‖ of the density (and of f when the scheme provides it)
    for each ε.

    Parameters
    ----------
    * config_parser:    Base settings; the time step policy is taken from it.
    * scheme:           Scheme to study.
    * eps_list:         ε values.
    * Nx_list:          Grid sizes, each one equal to or twice the previous one.
    * t:                Time at which the errors are measured.

    Returns
    -------
    * reports: One ConvergenceReport per ε.
    """
    for coarse, fine in zip(Nx_list[:-1], Nx_list[1:]):
        if fine not in (coarse, 2 * coarse):
            raise ValueError(f"Grid sizes must double for the refinement error, got {coarse} then {fine}.")

    config_parser = _prepare(config_parser)
    num_cores = config_parser.get_item(['SETUP', 'num_cores'], int)
    x_min = config_parser.get_item(['GRID', 'x_min'], float)
    x_max = config_parser.get_item(['GRID', 'x_max'], float)
    v_max = config_parser.get_item(['GRID', 'v_max'], float)
    v_grid = build_velocity_grid(-v_max, v_max, config_parser.get_item(['GRID', 'Nv'], int))

    print(f"Start convergence study of {scheme}")
    configs = [config_parser.copy_with(scheme=scheme, eps=eps, Nx=Nx, t_end=t, snapshot_times=f"0, {t}")
               for eps in eps_list for Nx in Nx_list]
    trajectories = run_all(configs, num_cores)

    reports = {}
    for k, eps in enumerate(eps_list):
        runs = trajectories[k * len(Nx_list):(k + 1) * len(Nx_list)]
        for trajectory in runs:
            if trajectory.blow_up is not None:
                print(f"WARNING: {trajectory.blow_up}")

        errors_n = [np.nan]
        errors_f = [np.nan] if all(trajectory.snapshots[0].f is not None for trajectory in runs) else None
        for (Nx_coarse, coarse), (Nx_fine, fine) in zip(zip(Nx_list[:-1], runs[:-1]), zip(Nx_list[1:], runs[1:])):
            coarse_grid = build_spatial_grid(x_min, x_max, Nx_coarse)
            fine_grid   = build_spatial_grid(x_min, x_max, Nx_fine)
            if coarse.blow_up is not None or fine.blow_up is not None:
                errors_n.append(np.nan)
                if errors_f is not None:
                    errors_f.append(np.nan)
                continue

            errors_n.append(refinement_error(fine.snapshots[-1].n, coarse.snapshots[-1].n, coarse.snapshots[0].n,
                                             fine_grid, coarse_grid))
            if errors_f is not None:
                errors_f.append(refinement_error(fine.snapshots[-1].f, coarse.snapshots[-1].f, coarse.snapshots[0].f,
                                                 fine_grid, coarse_grid, v_grid))

        report = ConvergenceReport(eps, Nx_list, errors_n, errors_f)
        reports[eps] = report
        print(report)

        path = _output_path(config_parser, f"convergence_{scheme}_eps{eps:g}.csv")
        if path is not None:
            save_convergence_table(path, report, 'n')
            if errors_f is not None:
                save_convergence_table(path.replace('.csv', '_f.csv'), report, 'f')

    print(f"Done convergence study of {scheme}")
    return reports


def regime_sweep(config_parser: ConfigParser,
                 eps_list:      Sequence[float] = REGIME_SWEEP_EPS,
                 t_end:         float = 0.5) -> StudyResult:
    """
    Run the micro-macro scheme for each ε and the Keller-Segel scheme once, and measure the distance of every
    micro-macro density to the Keller-Segel density at t_end.

    The micro-macro variant is the configured scheme if it is one, `mm_implicit` otherwise.

    Returns
    -------
    * result: Profiles keyed `eps=<ε>` and `keller_segel`, distances keyed `eps=<ε>_vs_keller_segel`.
    """
    config_parser = _prepare(config_parser)
    mm_scheme = _mm_scheme(config_parser)
    x_grid = build_spatial_grid(*RunConfig(config_parser).grid_bounds()[0])

    print(f"Start regime sweep with {mm_scheme}")
    configs = [config_parser.copy_with(scheme=mm_scheme, eps=eps, t_end=t_end, snapshot_times='final') for eps in eps_list]
    configs.append(config_parser.copy_with(scheme='keller_segel', t_end=t_end, snapshot_times='final'))
    trajectories = run_all(configs, config_parser.get_item(['SETUP', 'num_cores'], int))

    profiles = {f"eps={eps:g}": _final_density(trajectory, x_grid.num_nodes)
                for eps, trajectory in zip(eps_list, trajectories[:-1])}
    n_ks = _final_density(trajectories[-1], x_grid.num_nodes)
    distances = {f"{name}_vs_keller_segel": _distance(n, n_ks, x_grid) for name, n in profiles.items()}
    profiles['keller_segel'] = n_ks

    for name, distance in distances.items():
        print(f"{name}: {distance:.6e}")
    blown_up = [f"eps={eps:g}" for eps, trajectory in zip(eps_list, trajectories[:-1]) if trajectory.blow_up is not None]
    if trajectories[-1].blow_up is not None:
        blown_up.append('keller_segel')

    path = _output_path(config_parser, 'regime_sweep.csv')
    if path is not None:
        save_profiles(path, x_grid.nodes, profiles)
        save_distance_table(path.replace('.csv', '_distances.csv'), distances)

    print("Done regime sweep")
    return StudyResult(x_grid.nodes, profiles, distances, blown_up)


def scheme_comparison(config_parser: ConfigParser, eps: float, t_end: float = 0.5) -> StudyResult:
    """
    Compare the micro-macro scheme with the odd-even scheme and with the explicit kinetic scheme (kinetic regime,
    ε > σΔx/(2 v_max)) or the Keller-Segel scheme (diffusive regime).

    Whether the comparators start from the projected initial data follows `RUN, project_to_equilibrium`.

    Returns
    -------
    * result: Profiles keyed by scheme name, all pairwise distances keyed `<a>_vs_<b>`.
    """
    config_parser = _prepare(config_parser)
    base = RunConfig(config_parser.copy_with(eps=eps))
    x_grid = build_spatial_grid(*base.grid_bounds()[0])

    kinetic_regime = eps > base.sigma * base.dx / (2 * base.v_max)
    schemes = [_mm_scheme(config_parser), 'odd_even', 'explicit_kinetic' if kinetic_regime else 'keller_segel']

    print(f"Start scheme comparison at eps = {eps:g}")
    configs = [config_parser.copy_with(scheme=scheme, eps=eps, t_end=t_end, snapshot_times='final') for scheme in schemes]
    trajectories = run_all(configs, config_parser.get_item(['SETUP', 'num_cores'], int))

    profiles = {scheme: _final_density(trajectory, x_grid.num_nodes) for scheme, trajectory in zip(schemes, trajectories)}
    distances = {}
    for i, a in enumerate(schemes):
        for b in schemes[i + 1:]:
            distances[f"{a}_vs_{b}"] = _distance(profiles[a], profiles[b], x_grid)
            print(f"{a}_vs_{b}: {distances[f'{a}_vs_{b}']:.6e}")

    path = _output_path(config_parser, f"comparison_eps{eps:g}.csv")
    if path is not None:
        save_profiles(path, x_grid.nodes, profiles)
        save_distance_table(path.replace('.csv', '_distances.csv'), distances)

    print(f"Done scheme comparison at eps = {eps:g}")
    return StudyResult(x_grid.nodes, profiles, distances,
                       [scheme for scheme, trajectory in zip(schemes, trajectories) if trajectory.blow_up is not None])


def evolution_study(config_parser: ConfigParser, eps: float, snapshot_times: Sequence[float]) -> EvolutionResult:
    """
    Record the density of the configured scheme at each snapshot time and the differences between consecutive
    snapshots, which decrease as the density settles to a stationary profile.

    Returns
    -------
    * result: Profiles keyed `t=<t>`, the differences (empty for a single snapshot) and the mass audit.
    """
    config_parser = _prepare(config_parser)
    times = sorted(float(t) for t in snapshot_times)
    config = config_parser.copy_with(eps=eps, t_end=times[-1], snapshot_times=times, save_to_file=False)
    x_grid = build_spatial_grid(*RunConfig(config).grid_bounds()[0])

    print(f"Start evolution study at eps = {eps:g}")
    trajectory = run(config)
    if trajectory.blow_up is not None:
        print(f"WARNING: {trajectory.blow_up}")

    profiles    = {f"t={snapshot.t:g}": snapshot.n for snapshot in trajectory.snapshots}
    differences = stationarity_diagnostic(trajectory.snapshots, x_grid)
    for (t_a, t_b), difference in zip(zip(times[:-1], times[1:]), differences):
        print(f"|n({t_b:g}) - n({t_a:g})| = {difference:.6e}")

    path = _output_path(config_parser, f"evolution_eps{eps:g}.csv")
    if path is not None:
        save_profiles(path, x_grid.nodes, profiles)

    result = EvolutionResult(x_grid.nodes, trajectory.times, profiles, differences, trajectory.mass_audit(),
                             [] if trajectory.blow_up is None else [trajectory.scheme])
    if not result.settling:
        print(f"WARNING: the density differences over the last {EvolutionResult.TREND_INTERVALS} intervals increase.")

    print(f"Done evolution study at eps = {eps:g}")
    return result
