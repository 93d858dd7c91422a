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
A collection of helper functions and classes shared by all the schemes: the common runner interface,
snapshots and trajectories, blow-up detection, and the time loop that lands exactly on the snapshot times.
"""

from typing import Dict, List, Optional, Sequence

import numpy as np


class Snapshot:
    """
    Copy of the state of a run at one time.
    """

    def __init__(self, t: float, x: np.ndarray, n: np.ndarray, S: np.ndarray,
                 f: Optional[np.ndarray] = None, g: Optional[np.ndarray] = None) -> None:
        self.t = float(t)
        """Time of the snapshot."""
        self.x = x
        """Spatial nodes."""
        self.n = n.copy()
        """Cell density at the nodes."""
        self.S = S.copy()
        """Chemoattractant at the nodes."""
        self.f = None if f is None else f.copy()
        """Distribution function at the nodes, (Nx+1, Nv+1), if the scheme provides it."""
        self.g = None if g is None else g.copy()
        """Micro part on all faces, (Nx+2, Nv+1), for the micro-macro schemes."""

    def __repr__(self) -> str:
        return f"Snapshot(t={self.t}, max_n={np.max(np.abs(self.n)):.6e})"


class StepReport:
    """
    Diagnostics of one time step, used for the mass audit.
    """

    def __init__(self, mass_before: float, mass_after: float, max_abs_g: float, boundary_flux: float) -> None:
        self.mass_before    = mass_before
        """Mass before the step."""
        self.mass_after     = mass_after
        """Mass after the step."""
        self.max_abs_g      = max_abs_g
        """max |g| (or max |f| for schemes without a micro part) after the step."""
        self.boundary_flux  = boundary_flux
        """Net mass that entered the domain through its two ends during the step."""

    def __repr__(self) -> str:
        return f"StepReport(mass_before={self.mass_before}, mass_after={self.mass_after}, " \
               f"max_abs_g={self.max_abs_g}, boundary_flux={self.boundary_flux})"


class BlowUpError(RuntimeError):
    """
    Raised when a run produces non-finite values or values above the blow-up threshold.
    """

    def __init__(self, message: str, last_snapshot: Optional[Snapshot], step: int, t: float) -> None:
        super().__init__(message)
        self.last_snapshot = last_snapshot
        """Last recorded snapshot, all its values finite and below the threshold."""
        self.step = step
        """Index of the step that blew up."""
        self.t = t
        """Time at the start of the step that blew up."""
        self.trajectory = None
        """The partial trajectory recorded before the blow-up, set by `march`."""

    def __reduce__(self):
        return BlowUpError, (str(self), self.last_snapshot, self.step, self.t)


class SchemeRunner:
    """
    Common interface of the time stepping schemes, used by the time loop.

    Subclasses hold their own state and implement `advance`, `snapshot`, `mass` and `magnitude`.
    """

    name = 'scheme'

    @property
    def time(self) -> float:
        raise NotImplementedError

    @time.setter
    def time(self, value: float) -> None:
        raise NotImplementedError

    def advance(self, dt: float) -> StepReport:
        """Advance the state by one step of size dt."""
        raise NotImplementedError

    def snapshot(self) -> Snapshot:
        raise NotImplementedError

    def mass(self) -> float:
        """Total mass of the cells."""
        raise NotImplementedError

    def magnitude(self) -> float:
        """Largest magnitude among the stored physical quantities, NaN if any is not finite."""
        raise NotImplementedError


class Trajectory:
    """
    Result of a run: the snapshots at the requested times and the per-step reports.
    """

    def __init__(self, scheme: str, dt: float) -> None:
        self.scheme     = scheme
        """Name of the scheme."""
        self.dt         = dt
        """Nominal time step."""
        self.snapshots: List[Snapshot] = []
        """Snapshots in increasing time."""
        self.reports: List[StepReport] = []
        """One report per step taken."""
        self.blow_up: Optional[BlowUpError] = None
        """The blow-up error if the run was aborted."""
        self.timing_dict: Dict[str, int] = {}
        """Time, in ns, taken by each stage of the run."""

    @property
    def times(self) -> List[float]:
        return [snapshot.t for snapshot in self.snapshots]

    @property
    def num_steps(self) -> int:
        return len(self.reports)

    def mass_audit(self) -> Dict[str, float]:
        """
        Compare the total mass change over the run with the accumulated boundary flux.

        Returns
        -------
        * Dictionary with the initial and final masses, the accumulated flux and the mismatch between them.
        """
        if not self.reports:
            return {'mass_initial': np.nan, 'mass_final': np.nan, 'boundary_flux': 0.0, 'mismatch': 0.0}

        mass_initial = self.reports[0].mass_before
        mass_final   = self.reports[-1].mass_after
        flux         = float(np.sum([report.boundary_flux for report in self.reports]))
        return {'mass_initial':     mass_initial,
                'mass_final':       mass_final,
                'boundary_flux':    flux,
                'mismatch':         mass_final - mass_initial - flux}


def march(runner:               SchemeRunner,
          dt:                   float,
          snapshot_times:       Sequence[float],
          blow_up_threshold:    float = 1e8,
          debug:                bool = False) -> Trajectory:
    """
    Advance `runner` from its current time through every snapshot time.

    Steps of size dt are taken; the step before each snapshot is shortened so that the snapshot time is hit exactly.
    After every step the state is checked; if it is not finite or exceeds `blow_up_threshold` a `BlowUpError` is
    raised which carries the last recorded snapshot (the initial state if none was recorded yet).

    Parameters
    ----------
    * runner:               The scheme to advance.
    * dt:                   Nominal time step.
    * snapshot_times:       Increasing times at which to record the state.
    * blow_up_threshold:    Largest accepted magnitude.
    * debug:                Print one line per snapshot.

    Returns
    -------
    * trajectory: Snapshots and step reports.
    """
    assert dt > 0

    trajectory = Trajectory(runner.name, dt)
    last_good  = runner.snapshot()
    step       = 0

    for target in sorted(snapshot_times):
        if target < runner.time - 1e-12 * max(1.0, abs(target)):
            raise ValueError(f"Snapshot time {target} is before the current time {runner.time}.")

        while runner.time < target - 1e-12 * max(1.0, target):
            h = min(dt, target - runner.time)
            # Avoid a sliver step right before the snapshot
            if target - runner.time - h < 1e-9 * dt:
                h = target - runner.time
            t_start = runner.time

            report = runner.advance(h)
            trajectory.reports.append(report)
            step += 1

            magnitude = runner.magnitude()
            if not np.isfinite(magnitude) or magnitude > blow_up_threshold:
                error = BlowUpError(f"{runner.name} blew up at step {step} (t = {t_start:.6e}), "
                                    f"magnitude {magnitude:.3e} exceeds {blow_up_threshold:.3e}.",
                                    last_good, step, t_start)
                trajectory.blow_up = error
                error.trajectory = trajectory
                raise error

        runner.time = target
        last_good = runner.snapshot()
        trajectory.snapshots.append(last_good)

        if debug:
            max_g = trajectory.reports[-1].max_abs_g if trajectory.reports else np.nan
            print(f"t = {target:.6e}, mass = {runner.mass():.12e}, max|g| = {max_g:.6e}")

    return trajectory
