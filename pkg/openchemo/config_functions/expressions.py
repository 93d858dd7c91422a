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
Parsing of the mathematical expressions allowed in the config file (equilibrium, kernels, inflow data, total mass).

Expressions are parsed with sympy and turned into numpy functions with `sympy.lambdify`.
Only the symbols listed by the caller may appear; anything else is rejected with a ValueError.
"""

from tokenize import TokenError
from typing import Callable, Dict, Sequence

import numpy as np
import sympy as sp

_LAMBDIFY_MODULES = [{'Max': np.maximum, 'Min': np.minimum, 'Heaviside': lambda x, h=0.5: np.heaviside(x, h)}, 'numpy']
"""Element-wise replacements for the sympy functions whose default numpy translation reduces over arrays."""


def parse_config_expression(expression: str, allowed_symbols: Sequence[str]) -> sp.Expr:
    """
    Parse `expression` and check that it only uses `allowed_symbols`.

    Parameters
    ----------
    * expression:       The string from the config file, e.g. `Max(v*dS, 0)`.
    * allowed_symbols:  Names of the free symbols that may appear.

    Returns
    -------
    * The sympy expression.
    """
    local_dict: Dict[str, sp.Symbol] = {name: sp.Symbol(name, real=True) for name in allowed_symbols}
    try:
        expr = sp.parse_expr(expression, local_dict=local_dict)
    except (SyntaxError, TokenError, TypeError, sp.SympifyError) as e:
        raise ValueError(f"Could not parse the expression \"{expression}\": {e}")

    unknown = {str(symbol) for symbol in expr.free_symbols} - set(allowed_symbols)
    if unknown:
        raise ValueError(f"Expression \"{expression}\" uses unknown symbol(s) {sorted(unknown)}, "
                         f"only {list(allowed_symbols)} are allowed.")
    return expr


def lambdify_config_expression(expression: str, arguments: Sequence[str]) -> Callable[..., np.ndarray]:
    """
    Parse `expression` and return a numpy function of `arguments` (in that order).

    The returned function always produces an array of the broadcast shape of its arguments,
    including for constant expressions such as `1/2`.
    """
    expr = parse_config_expression(expression, arguments)
    symbols = [sp.Symbol(name, real=True) for name in arguments]
    func = sp.lambdify(symbols, expr, modules=_LAMBDIFY_MODULES)

    def evaluate(*values):
        values = [np.asarray(value, dtype=float) for value in values]
        shape = np.broadcast(*values).shape if values else ()
        return np.broadcast_to(np.asarray(func(*values), dtype=float), shape).copy()

    return evaluate


def evaluate_constant_expression(expression: str) -> float:
    """Evaluate an expression without free symbols, e.g. `2*pi`."""
    expr = parse_config_expression(expression, [])
    return float(expr.evalf())
