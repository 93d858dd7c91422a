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

# Numerical Studies

Four studies are provided in `openchemo.experiments`, each available as a subcommand of the `openchemo` entry point.
All of them start from the same base configuration and change only the options listed below.

## Convergence
`openchemo converge --config CONFIG --scheme mm_implicit --eps_list "1e-4, 1e-6" --dt_policy diffusive_sq --Nx_list "80, 160, 320, 640" --t 0.1`

Each grid size is run up to `t` and compared with the next coarser grid,
$e_{\Delta x} = \| u_{\Delta x}(t) - u_{2\Delta x}(t) \| / \| u_{2\Delta x}(0) \|$,
where the finer solution is restricted to the coarse nodes.
The observed order is $\log_2(e_{2\Delta x} / e_{\Delta x})$.
With Δt = Δx²/2 the density converges at second order in the diffusive regime (about 2.0 at ε = 1e-4 and 1e-6).
In the kinetic regime the errors decrease under refinement; no order is targeted there.

## Regime sweep
`openchemo sweep --config CONFIG --eps_list "1, 0.125, 0.03125"`

The micro-macro density at each ε is compared with the Keller-Segel density.
The distance decreases as ε decreases.

## Scheme comparison
`openchemo compare --config CONFIG --eps 1e-3`

The micro-macro scheme is compared with the odd-even scheme and, depending on the regime,
with the explicit kinetic scheme (kinetic regime) or the Keller-Segel scheme (diffusive regime).

## Evolution
`openchemo evolve --config CONFIG --eps 1e-3 --times "0.5, 1, 2, 4"`

The density is recorded at each time. The differences between consecutive snapshots decrease as the
density approaches a stationary profile.
"""
