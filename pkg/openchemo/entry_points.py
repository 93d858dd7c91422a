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
OpenChemo has two entry points:
1. `openchemo` for running a scheme or one of the numerical studies, invoked as `openchemo SUBCOMMAND [FLAGS]`.
2. `openchemo-tests` for running the provided pytests, invoked as `openchemo-tests`.

Subcommands:
- `run`:        a single run of the configured scheme.
- `converge`:   refinement errors and observed orders for a list of ε and a list of grid sizes.
- `sweep`:      the micro-macro scheme over a range of ε compared with the Keller-Segel scheme.
- `compare`:    the schemes at one ε compared with each other.
- `evolve`:     the density at several times and the distance between consecutive snapshots.

All subcommands accept `--config FILE` (INI or JSON) and the flags listed by `openchemo SUBCOMMAND --help`,
which override the values in the file.

Exit code is 0 on success, 1 if the configuration is invalid, and 2 if a run blew up.
"""

import argparse
import os
import subprocess
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from .config_functions import ConfigParser
from .experiments import REGIME_SWEEP_EPS, convergence_study, evolution_study, regime_sweep, scheme_comparison
from .run import run

EXIT_SUCCESS        = 0
EXIT_CONFIG_ERROR   = 1
EXIT_BLOW_UP        = 2

_RUN_FLAGS = (
    # (option name, type, help)
    ('scheme',                  str,    "mm_explicit, mm_implicit, explicit_kinetic, keller_segel, or odd_even"),
    ('eps',                     float,  "ε, ratio of the mean free path to the domain length"),
    ('t_end',                   float,  "final time"),
    ('dt_policy',               str,    "diffusive_sq, kinetic, macroscopic, odd_even_macroscopic, regime, or fixed"),
    ('dt',                      float,  "time step of the fixed policy"),
    ('snapshot_times',          str,    "'final', 'dt, linear', or 't1, t2, ...'"),
    ('blow_up_threshold',       float,  "largest magnitude accepted before a run is aborted"),
    ('project_to_equilibrium',  str,    "auto, True, or False"),
    ('x_min',                   float,  "left end of the domain"),
    ('x_max',                   float,  "right end of the domain"),
    ('Nx',                      int,    "number of spatial cells"),
    ('v_max',                   float,  "largest velocity"),
    ('Nv',                      int,    "number of velocity cells"),
    ('sigma',                   float,  "turning rate σ"),
    ('total_mass',              str,    "total initial mass, may be an expression such as 2*pi"),
    ('inflow_left',             str,    "f_l(v), prescribed for v > 0 at x_min"),
    ('inflow_right',            str,    "f_r(v), prescribed for v < 0 at x_max"),
    ('D_S',                     float,  "diffusion coefficient of the chemoattractant"),
    ('a',                       float,  "production rate of the chemoattractant"),
    ('b',                       float,  "degradation rate of the chemoattractant"),
    ('num_cores',               int,    "number of processes used by the studies"),
    ('output_folder_path',      str,    "folder the output files are written to"),
    ('save_to_file',            str,    "True or False"),
    ('csv_file',                str,    "name of the output file of a run"),
    ('include_f',               str,    "True or False, write f next to n and S"),
)


def _float_list(value: str) -> List[float]:
    return [float(item) for item in value.replace(',', ' ').split()]


def _int_list(value: str) -> List[int]:
    return [int(item) for item in value.replace(',', ' ').split()]


def build_argument_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='openchemo',
                                     description="Micro-macro and reference schemes for kinetic chemotaxis in 1D.")
    subparsers = parser.add_subparsers(dest='command', required=True)

    def add_common(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--config", help="INI or JSON config file", type=str, default=None)
        for name, val_type, help_str in _RUN_FLAGS:
            sub.add_argument(f"--{name}", help=help_str, type=val_type, default=None)

    add_common(subparsers.add_parser('run', help="run the configured scheme"))

    converge = subparsers.add_parser('converge', help="refinement errors and observed orders")
    add_common(converge)
    converge.add_argument("--eps_list", help="ε values, e.g. '1, 1e-3'", type=_float_list, required=True)
    converge.add_argument("--Nx_list", help="doubling grid sizes, e.g. '50, 100, 200'", type=_int_list, required=True)
    converge.add_argument("--t", help="time at which the errors are measured", type=float, default=0.1)

    sweep = subparsers.add_parser('sweep', help="micro-macro scheme over ε against Keller-Segel")
    add_common(sweep)
    sweep.add_argument("--eps_list", help="ε values", type=_float_list, default=list(REGIME_SWEEP_EPS))

    compare = subparsers.add_parser('compare', help="compare the schemes at one ε")
    add_common(compare)

    evolve = subparsers.add_parser('evolve', help="long time evolution of the density")
    add_common(evolve)
    evolve.add_argument("--times", help="snapshot times, e.g. '0.5, 1, 2'", type=_float_list, required=True)

    return parser


def _overrides(args: argparse.Namespace, skip: tuple = ()) -> Dict[str, Any]:
    return {name: getattr(args, name) for name, _, _ in _RUN_FLAGS
            if name not in skip and getattr(args, name) is not None}


def _study_time(args: argparse.Namespace, config_parser: ConfigParser) -> float:
    return args.t_end if args.t_end is not None else config_parser.get_item(['RUN', 't_end'], float)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse the command line, run the requested subcommand, and return the exit code.

    Parameters
    ----------
    * argv: Command line arguments without the program name. Defaults to `sys.argv[1:]`.
    """
    args = build_argument_parser().parse_args(argv)

    try:
        config_parser = ConfigParser(args.config, _overrides(args))
        config_parser.update_paths()
        eps = config_parser.get_item(['RUN', 'eps'], float)

        if args.command == 'run':
            trajectory = run(config_parser)
            blown_up = trajectory.blow_up is not None
        elif args.command == 'converge':
            scheme = config_parser.get_item(['RUN', 'scheme'], str)
            reports = convergence_study(config_parser, scheme, args.eps_list, args.Nx_list, args.t)
            blown_up = any(np.any(np.isnan(report.errors_n[1:])) for report in reports.values())
        elif args.command == 'sweep':
            result = regime_sweep(config_parser, args.eps_list, _study_time(args, config_parser))
            blown_up = len(result.blown_up) > 0
        elif args.command == 'compare':
            result = scheme_comparison(config_parser, eps, _study_time(args, config_parser))
            blown_up = len(result.blown_up) > 0
        else:
            result = evolution_study(config_parser, eps, args.times)
            blown_up = len(result.blown_up) > 0
    except (ValueError, FileNotFoundError) as e:
        print(f"ERROR: {e}")
        return EXIT_CONFIG_ERROR

    return EXIT_BLOW_UP if blown_up else EXIT_SUCCESS


def run_openchemo():
    """
    Function for running OpenChemo using entry points.
    Invoked as `openchemo SUBCOMMAND [--config CONFIG_FILE_PATH] [FLAGS]`.
    """
    sys.exit(main())


def run_tests():
    """
    Main function for running all unit tests.
    Should only be used for the `openchemo-tests` entry-point.
    """
    print("Starting unit tests, this should take a minute.")

    pyinterp = sys.executable
    tests_dir = os.path.join(Path(__file__).parents[0], 'tests')

    subprocess.call([pyinterp, '-B', '-m', 'pytest', '-v'], cwd=tests_dir)
