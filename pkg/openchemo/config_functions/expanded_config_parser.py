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
This file contains the modified ConfigParser along with any relevant helper functions.
"""

import configparser
import json
from os import cpu_count
from os.path import isfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Type, TypeVar


T = TypeVar('T', bool, str, int, float)
"""Used only for type hints."""

config_defaults: Dict = {
    'SETUP': {'num_cores': max(1, (cpu_count() or 2)//2),
              'DEBUG': False,
              'working_directory': './',
              'output_folder_path': 'output_chemo/'},
    'RUN': {'scheme': 'mm_implicit',
            'eps': 1.0,
            't_end': 0.5,
            'dt_policy': 'regime',
            'dt': 'None',
            'snapshot_times': 'final',
            'blow_up_threshold': 1e8,
            'project_to_equilibrium': 'auto'},
    'GRID': {'x_min': -1.0,
             'x_max': 1.0,
             'Nx': 200,
             'v_max': 1.0,
             'Nv': 64},
    'MODEL': {'sigma': 1.0,
              'equilibrium': 'uniform',
              'turning_kernel': 'relaxation',
              'chemotactic_kernel': 'positive_part',
              'total_mass': '2*pi',
              'inflow_left': '0',
              'inflow_right': '0'},
    'CHEMO': {'D_S': 1.0,
              'a': 1.0,
              'b': 1.0},
    'OUTPUT': {'save_to_file': False,
               'csv_file': 'density.csv',
               'include_f': False},
}
"""
Default values for the various options available in OpenChemo.
If a default is used, OpenChemo outputs a message in the terminal.
"""

SCHEMES = ('mm_explicit', 'mm_implicit', 'explicit_kinetic', 'keller_segel', 'odd_even')
"""The available time stepping schemes."""

DT_POLICIES = ('diffusive_sq', 'kinetic', 'macroscopic', 'odd_even_macroscopic', 'regime', 'fixed')
"""The available time step policies."""


def section_of(key: str) -> str:
    """
    Find the section a (flat) option name belongs to.

    Raises a ValueError for unknown option names.
    """
    for section, options in config_defaults.items():
        if key in options:
            return section
    raise ValueError(f"Unknown option \"{key}\".")


class ConfigParser(configparser.ConfigParser):
    """
    OpenChemo's modified ConfigParser extended to have several useful functions added to it.

    Options are case-sensitive (`Nx` and `D_S` are the names used throughout).
    """

    def __init__(self, config_file_path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> None:
        """
        Parameters
        ----------
        * config_file_path: The path to the config file to load, relative to run directory.
                            INI files are read section by section, `.json` files may either contain sections
                            or flat option names. If None, only defaults and `overrides` are used.
        * overrides:        Flat mapping of option name to value, applied after the file (e.g. command line flags).
        """
        super().__init__()
        self.optionxform = str

        self.need_to_update_paths = True
        """
        Boolean indicating whether the paths need to be updated.
        Path are updated with `update_paths` which can be called manually or will be called automatically
        at the top of `openchemo.run.run`.
        """

        if config_file_path is not None:
            if not isfile(config_file_path):
                raise FileNotFoundError('The given config file \"{}\" does not exist.'.format(config_file_path))

            if config_file_path.lower().endswith('.json'):
                self._read_json(config_file_path)
            else:
                self.read(config_file_path)

        for key, val in (overrides or {}).items():
            if val is None:
                continue
            section = section_of(key)
            if section not in self:
                self.add_section(section)
            self[section][key] = self._to_config_string(val)

        # Load defaults for any default-able values that were not specified
        for key, sub_dict in config_defaults.items():
            if key not in self:
                self.add_section(key)
            for key_sub, val_sub in sub_dict.items():
                if key_sub not in self[key]:
                    print(f'Using the default value of {val_sub} for {key}, {key_sub}.')
                    self[key][key_sub] = str(val_sub)

        # Validate scheme and time step choice
        scheme = self.get_item(['RUN', 'scheme'], str).lower()
        if scheme not in SCHEMES:
            raise ValueError(f"Invalid scheme ({scheme}) specified, must be one of {SCHEMES}.")
        self['RUN']['scheme'] = scheme

        dt_policy = self.get_item(['RUN', 'dt_policy'], str).lower()
        if dt_policy not in DT_POLICIES:
            raise ValueError(f"Invalid dt_policy ({dt_policy}) specified, must be one of {DT_POLICIES}.")
        self['RUN']['dt_policy'] = dt_policy
        if dt_policy == 'fixed' and self['RUN']['dt'] == 'None':
            raise ValueError('A value for RUN, dt is needed when using the fixed time step policy.')

    def _read_json(self, config_file_path: str) -> None:
        with open(config_file_path, 'r', encoding='utf-8') as file:
            try:
                contents = json.load(file)
            except json.JSONDecodeError as e:
                raise ValueError(f"Could not parse the config file \"{config_file_path}\": {e}")

        if not isinstance(contents, dict):
            raise ValueError(f"The config file \"{config_file_path}\" must contain a JSON object.")

        for key, val in contents.items():
            if isinstance(val, dict):
                if key not in self:
                    self.add_section(key)
                for key_sub, val_sub in val.items():
                    self[key][key_sub] = self._to_config_string(val_sub)
            else:
                section = section_of(key)
                if section not in self:
                    self.add_section(section)
                self[section][key] = self._to_config_string(val)

    @staticmethod
    def _to_config_string(val: Any) -> str:
        if isinstance(val, (list, tuple)):
            return ', '.join(str(item) for item in val)
        return str(val)

    def update_paths(self) -> None:
        """
        OpenChemo is run from a given directory (folder). This folder is referred to as the running directory.

        The config file specifies a path to the "working directory" (default is the running directory) which
        is the directory where outputs are placed.
        This method converts the output paths to be relative to the running directory and creates the output folder.
        """
        working_directory = self['SETUP']['working_directory']
        self['SETUP']['output_folder_path'] = working_directory + self['SETUP']['output_folder_path']

        if self.get_item(['OUTPUT', 'save_to_file'], bool):
            Path(self['SETUP']['output_folder_path']).mkdir(parents=True, exist_ok=True)

        self.need_to_update_paths = False

    def copy_with(self, **overrides: Any) -> 'ConfigParser':
        """
        Return an independent copy of this parser with some options replaced.
        Used by the experiments to derive one run configuration per scheme, ε, or grid.

        Parameters
        ----------
        * overrides: Flat option names and their new values.
        """
        new = ConfigParser.from_dict(self.to_dict(), self.need_to_update_paths)
        for key, val in overrides.items():
            new[section_of(key)][key] = self._to_config_string(val)
        return new

    def to_dict(self) -> Dict[str, Dict[str, str]]:
        """All sections as plain dictionaries, e.g. to send the settings to a worker process."""
        return {section: dict(self[section]) for section in self.sections()}

    @classmethod
    def from_dict(cls, sections: Dict[str, Dict[str, str]], need_to_update_paths: bool = True) -> 'ConfigParser':
        """
        Rebuild a parser from `to_dict` output without re-applying the defaults or printing anything.
        """
        new = cls.__new__(cls)
        configparser.ConfigParser.__init__(new)
        new.optionxform = str
        new.read_dict(sections)
        new.need_to_update_paths = need_to_update_paths
        return new

    def get_list(self, config_keys: List[str], val_type: Type[T]) -> List[T]:
        """
        Function to load a list of parameters from the config file.

        Parameters
        ----------
        * config_keys:  The keys needed to access the parameters from the config file.
        * val_type:     The type that each parameter is supposed to be, and to which it will be converted.

        Returns
        -------
        * List of the parameters from the config file, converted to the specified type.
        """
        section, key = config_keys
        try:
            params_tmp = self[section][key].split(',')
        except KeyError:
            raise ValueError(f"Need to specify a value for {section}, {key}")

        ret_list = []
        for param in params_tmp:
            param = param.strip()
            if val_type == bool:
                ret_list.append(param.lower() == 'true')
            else:
                ret_list.append(val_type(param))

        return ret_list

    def get_item(self, config_keys: List[str], val_type: Type[T]) -> T:
        """
        Function to load a parameter from the config file.

        Parameters
        ----------
        * config_keys:  The keys needed to access the parameters from the config file.
        * val_type:     The type that the parameter is supposed to be, and to which it will be converted.

        Returns
        -------
        * The parameter from the config file converted to the specified type.
        """
        section, key = config_keys
        try:
            param = self[section][key]
        except KeyError:
            raise ValueError(f"Need to specify a value for {section}, {key}")

        if val_type == bool:
            return param.lower() == 'true'
        elif val_type == int:
            as_float = float(param)
            if as_float != int(as_float):
                raise ValueError(f"{section}, {key} must be an integer, got {param}.")
            return int(as_float)
        else:
            try:
                return val_type(param)
            except ValueError:
                raise ValueError(f"Could not convert {section}, {key} = {param} to {val_type.__name__}.")
