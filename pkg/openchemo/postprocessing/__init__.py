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
Post-processing of the runs: error metrics and CSV output.
Plotting is left to external tools which consume the CSV files.
"""

from .analysis import ConvergenceReport, is_non_increasing, observed_orders, refinement_error, \
                      relative_l2_distance, restrict_to_coarse, stationarity_diagnostic, weighted_l2_norm
from .csv_output import save_convergence_table, save_distance_table, save_profiles, save_snapshot, save_trajectory, \
                        snapshot_file_name
