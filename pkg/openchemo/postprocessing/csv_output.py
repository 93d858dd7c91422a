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
Functions for writing results to CSV files (UTF-8, one header row, comma separated).

- Snapshots: one row per spatial node with the columns `x,n,S` followed by `f_0, ..., f_Nv` if requested.
- Convergence tables: `Nx,error,order`.
- Profiles of several runs on a common grid: `x,<name>,...`.
- Distance tables: `name,distance`.
"""

from os.path import splitext
from typing import Dict, List, Sequence

import numpy as np

from .analysis import ConvergenceReport
from ..system_solvers import Snapshot, Trajectory


def _save(path: str, columns: Sequence[np.ndarray], header: Sequence[str]) -> None:
    data = np.column_stack(columns)
    np.savetxt(path, data, delimiter=',', header=','.join(header), comments='', fmt='%.16e', encoding='utf-8')


def save_snapshot(path: str, snapshot: Snapshot, include_f: bool = False) -> None:
    """
    Write one snapshot.

    Parameters
    ----------
    * path:         File to write.
    * snapshot:     The snapshot.
    * include_f:    Add one column per velocity node with f at the spatial nodes. Ignored if the scheme has no f.
    """
    columns: List[np.ndarray] = [snapshot.x, snapshot.n, snapshot.S]
    header = ['x', 'n', 'S']
    if include_f and snapshot.f is not None:
        columns += [snapshot.f[:, j] for j in range(snapshot.f.shape[1])]
        header  += [f'f_{j}' for j in range(snapshot.f.shape[1])]
    _save(path, columns, header)


def snapshot_file_name(base_path: str, t: float, num_snapshots: int) -> str:
    """`base_path` for a single snapshot, otherwise the time is appended before the extension."""
    if num_snapshots == 1:
        return base_path
    root, ext = splitext(base_path)
    return f"{root}_t{t:.6g}{ext or '.csv'}"


def save_trajectory(trajectory: Trajectory, base_path: str, include_f: bool = False) -> List[str]:
    """
    Write every snapshot of a run.

    Returns
    -------
    * The paths written, in time order.
    """
    paths = []
    for snapshot in trajectory.snapshots:
        path = snapshot_file_name(base_path, snapshot.t, len(trajectory.snapshots))
        save_snapshot(path, snapshot, include_f)
        paths.append(path)
    return paths


def save_convergence_table(path: str, report: ConvergenceReport, quantity: str = 'n') -> None:
    """Write `Nx,error,order` for the density (`quantity='n'`) or the distribution function (`'f'`)."""
    if quantity == 'n':
        errors, orders = report.errors_n, report.orders_n
    elif quantity == 'f' and report.errors_f is not None:
        errors, orders = report.errors_f, report.orders_f
    else:
        raise ValueError(f"No {quantity} errors in the convergence report.")
    _save(path, [np.array(report.Nx_list, dtype=float), np.array(errors), np.array(orders)], ['Nx', 'error', 'order'])


def save_profiles(path: str, x: np.ndarray, profiles: Dict[str, np.ndarray]) -> None:
    """Write `x` followed by one column per named profile."""
    _save(path, [x] + list(profiles.values()), ['x'] + list(profiles.keys()))


def save_distance_table(path: str, distances: Dict[str, float]) -> None:
    """Write `name,distance` rows."""
    with open(path, 'w', encoding='utf-8') as file:
        file.write('name,distance\n')
        for name, distance in distances.items():
            file.write(f'{name},{distance:.16e}\n')
