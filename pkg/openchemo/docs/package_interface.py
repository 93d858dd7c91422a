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

# Package Interface

`openchemo` can be interfaced with in two different ways:

1. Configuration file method
    *   Parameters are specified in a configuration file (INI or JSON) which is then given to the `openchemo` package
        through either the `openchemo` command line entry point, or through importing `openchemo.run.run` and passing
        the configuration file location to it.
        Every option can also be given as a command line flag, e.g. `openchemo run --config CONFIG --eps 1e-3`,
        in which case the flag overrides the value in the file.
2. Python interface method
    *   The more traditional approach of writing your own python scripts and calling the different functions
        that `openchemo` provides, e.g. `openchemo.system_solvers.mm_system.step` for a single micro-macro step.

# Example Config File

Below is an example config file showing all of the available options for OpenChemo as well as a description of
each option's function.
    .. include:: ../../CONFIG

The same options can be given in a JSON file, either grouped by section or as a flat object:

```json
{"scheme": "mm_implicit", "eps": 0.001, "Nx": 200, "Nv": 64, "t_end": 0.5}
```
"""
