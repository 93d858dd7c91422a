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
OpenChemo extends python's ConfigParser to have several useful functionalities,
and wraps the settings of a single run into a `RunConfig`.
"""

from .expanded_config_parser import ConfigParser, DT_POLICIES, SCHEMES
from .expressions import evaluate_constant_expression, lambdify_config_expression
from .run_config import RunConfig, generate_snapshot_times, select_time_step
