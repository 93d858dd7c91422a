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
Validated, typed view of the settings needed for one run.
"""

from typing import List, Tuple

import numpy as np

from .expanded_config_parser import ConfigParser
from .expressions import evaluate_constant_expression


def select_time_step(policy: str, eps: float, dx: float, sigma: float = 1.0, v_max: float = 1.0,
                     scheme: str = 'mm_implicit', fixed_dt: float = None) -> float:
    """
    Time step for a given policy.

    - diffusive_sq:         dx²/2
    - kinetic:              ε·dx/2
    - macroscopic:          dx/2
    - odd_even_macroscopic: dx/40
    - regime:               kinetic while ε > σ·dx/(2 v_max), otherwise macroscopic
                            (odd_even_macroscopic for the odd-even scheme, diffusive_sq for mm_explicit)
    - fixed:                `fixed_dt`

    Parameters
    ----------
    * policy:   One of the names above.
    * eps:      ε.
    * dx:       Spatial step.
    * sigma:    Turning rate σ, only used by `regime`.
    * v_max:    Largest velocity, only used by `regime`.
    * scheme:   Scheme name, only used by `regime`.
    * fixed_dt: Time step of the `fixed` policy.
    """
    if policy == 'diffusive_sq':
        return dx**2 / 2
    elif policy == 'kinetic':
        return eps * dx / 2
    elif policy == 'macroscopic':
        return dx / 2
    elif policy == 'odd_even_macroscopic':
        return dx / 40
    elif policy == 'regime':
        if eps > sigma * dx / (2 * v_max):
            return eps * dx / 2
        if scheme == 'odd_even':
            return dx / 40
        if scheme == 'mm_explicit':
            return dx**2 / 2
        return dx / 2
    elif policy == 'fixed':
        if fixed_dt is None or not fixed_dt > 0:
            raise ValueError(f"The fixed time step policy needs a positive dt, got {fixed_dt}.")
        return float(fixed_dt)
    else:
        raise ValueError(f"Unknown time step policy {policy}.")


def generate_snapshot_times(config_parser: ConfigParser) -> List[float]:
    """
    Helper function to generate the times at which the state is recorded.

    3 options are available:
    1. 'final':             DEFAULT. Only the state at t_end is recorded.
    2. dt, 'linear':        Linear distribution of points between 0 and t_end with a spacing of dt.
                            0 and t_end are guaranteed to be the first and last point, even if the last interval
                            is not of size dt.
    3. 't1, t2, ..., tn':   Arbitrary time points which are sorted. Only requirements are: t1 >= 0 and tn <= t_end.

    Parameters
    ----------
    * config_parser: The OpenChemo ConfigParser from which to get the snapshot_times string and t_end.

    Returns
    -------
    * ts: Sorted list of snapshot times.
    """
    ts_str = config_parser.get_list(['RUN', 'snapshot_times'], str)
    tf     = config_parser.get_item(['RUN', 't_end'], float)

    if len(ts_str) == 1 and ts_str[0].lower() == 'final':
        return [tf]
    elif len(ts_str) == 2 and 'linear' in ts_str[1].lower():
        dt = float(ts_str[0])
        if not dt > 0:
            raise ValueError('The snapshot spacing must be positive.')
        ts = list(np.arange(0.0, tf, dt))
        if not ts or not np.isclose(ts[-1], tf, rtol=1e-12, atol=1e-14):
            ts.append(tf)
        else:
            ts[-1] = tf
        return [float(t) for t in ts]
    else:
        ts = sorted(float(time) for time in ts_str)
        if ts[0] < 0 or ts[-1] > tf:
            raise ValueError('Invalid snapshot times provided, times must be within [0, t_end].')
        return ts


class RunConfig:
    """
    Helper class holding the validated settings of a single run.
    """

    def __init__(self, config_parser: ConfigParser) -> None:
        self.config_parser = config_parser
        """The parser the settings were read from."""

        self.scheme             = config_parser.get_item(['RUN',    'scheme'],              str)
        """Which scheme to run."""
        self.eps                = config_parser.get_item(['RUN',    'eps'],                 float)
        """ε."""
        self.t_end              = config_parser.get_item(['RUN',    't_end'],               float)
        """Final time."""
        self.dt_policy          = config_parser.get_item(['RUN',    'dt_policy'],           str)
        """Time step policy, see `select_time_step`."""
        dt_str                  = config_parser.get_item(['RUN',    'dt'],                  str)
        self.fixed_dt           = None if dt_str == 'None' else float(dt_str)
        """Time step used by the fixed policy."""
        self.blow_up_threshold  = config_parser.get_item(['RUN',    'blow_up_threshold'],   float)
        """Largest magnitude accepted before a run is flagged as blown up."""

        self.x_min  = config_parser.get_item(['GRID', 'x_min'], float)
        self.x_max  = config_parser.get_item(['GRID', 'x_max'], float)
        self.Nx     = config_parser.get_item(['GRID', 'Nx'],    int)
        self.v_max  = config_parser.get_item(['GRID', 'v_max'], float)
        self.Nv     = config_parser.get_item(['GRID', 'Nv'],    int)

        self.sigma              = config_parser.get_item(['MODEL', 'sigma'],                float)
        """σ."""
        self.equilibrium        = config_parser.get_item(['MODEL', 'equilibrium'],          str)
        self.turning_kernel     = config_parser.get_item(['MODEL', 'turning_kernel'],       str)
        self.chemotactic_kernel = config_parser.get_item(['MODEL', 'chemotactic_kernel'],   str)
        self.total_mass         = evaluate_constant_expression(config_parser.get_item(['MODEL', 'total_mass'], str))
        """Total initial mass M_tot."""
        self.inflow_left        = config_parser.get_item(['MODEL', 'inflow_left'],          str)
        """f_l(v) as an expression of v, prescribed for v > 0 at x_min."""
        self.inflow_right       = config_parser.get_item(['MODEL', 'inflow_right'],         str)
        """f_r(v) as an expression of v, prescribed for v < 0 at x_max."""

        self.D_S    = config_parser.get_item(['CHEMO', 'D_S'],  float)
        self.a      = config_parser.get_item(['CHEMO', 'a'],    float)
        self.b      = config_parser.get_item(['CHEMO', 'b'],    float)

        self.snapshot_times = generate_snapshot_times(config_parser)
        """Times at which the state is recorded."""
        self.save_to_file   = config_parser.get_item(['OUTPUT', 'save_to_file'],    bool)
        self.csv_file       = config_parser.get_item(['OUTPUT', 'csv_file'],        str)
        self.include_f      = config_parser.get_item(['OUTPUT', 'include_f'],       bool)
        self.output_folder_path = config_parser.get_item(['SETUP', 'output_folder_path'], str)
        self.debug          = config_parser.get_item(['SETUP', 'DEBUG'], bool)

        for name in ('eps', 'sigma', 'total_mass', 'v_max', 'blow_up_threshold'):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}.")
        for name in ('D_S', 'a', 'b', 't_end'):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}.")

        projection = config_parser.get_item(['RUN', 'project_to_equilibrium'], str).lower()
        if projection == 'auto':
            dx = (self.x_max - self.x_min) / self.Nx
            kinetic_regime = self.eps > self.sigma * dx / (2 * self.v_max)
            self.project_to_equilibrium = kinetic_regime and self.scheme in ('explicit_kinetic', 'odd_even')
        elif projection in ('true', 'false'):
            self.project_to_equilibrium = projection == 'true'
        else:
            raise ValueError(f"RUN, project_to_equilibrium must be auto, True, or False, got {projection}.")
        """Whether the initial distribution is replaced by M(v)n_0."""

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.Nx

    def time_step(self) -> float:
        """The time step given by the configured policy."""
        return select_time_step(self.dt_policy, self.eps, self.dx, self.sigma, self.v_max, self.scheme, self.fixed_dt)

    def grid_bounds(self) -> Tuple[Tuple[float, float, int], Tuple[float, float, int]]:
        """((x_min, x_max, Nx), (v_min, v_max, Nv))"""
        return (self.x_min, self.x_max, self.Nx), (-self.v_max, self.v_max, self.Nv)
