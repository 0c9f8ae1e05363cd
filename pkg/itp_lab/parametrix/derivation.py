# SPDX-License-Identifier: GPL-3.0-or-later
"""
Symbolic derivation of the boundary symbols straight from the polar Laplacian.

Nothing here reuses the closed forms of :mod:`itp_lab.parametrix.symbols`: the collar
coefficients, the eikonal and the transport expressions are all obtained by conjugating
``-h**2 Delta`` with ``exp(i phi / h)`` and expanding in ``h`` and ``x1``.
"""
from functools import lru_cache
import logging

import sympy as sp

from itp_lab.exceptions import ComputationError

log = logging.getLogger(__name__)

x1 = sp.Symbol('x1', real=True)
xi = sp.Symbol('xi', positive=True)
h = sp.Symbol('h', positive=True)
_r = sp.Symbol('r', positive=True)
_theta = sp.Symbol('theta', real=True)


def _conjugated_laplacian(phase, amplitude):
    """
    Return ``exp(-i psi / h) (-h**2 Delta) exp(i psi / h) a`` in the collar coordinate.

    ``psi = phase(x1) - theta xi`` so that the tangential frequency is ``xi / h``.
    """
    in_r = {x1: 1 - _r}
    psi = sp.sympify(phase).subs(in_r) - _theta * xi
    u = sp.exp(sp.I * psi / h) * sp.sympify(amplitude).subs(in_r)
    laplacian = sp.diff(u, _r, 2) + sp.diff(u, _r) / _r + sp.diff(u, _theta, 2) / _r ** 2
    conjugated = sp.powsimp(sp.expand(-h ** 2 * laplacian * sp.exp(-sp.I * psi / h)))
    return sp.expand(conjugated.subs(_r, 1 - x1))


def _series_coefficients(expr, order):
    series = sp.series(expr, x1, 0, order + 1).removeO()
    return [sp.simplify(series.coeff(x1, k)) for k in range(order + 1)]


@lru_cache(maxsize=1)
def disc_geometry():
    """
    Derive the collar coefficients of the disc Laplacian.

    :return: ``R0``, ``R0_sharp``, ``R1_sharp`` (Taylor coefficients of ``R``) and ``Q1_0``,
        ``Q1_1`` (Taylor coefficients of the first order term ``Q1``)
    :rtype: dict
    """
    g = sp.Function('g')
    wave = sp.exp(sp.I * _theta * xi / h)
    u = g(_r) * wave
    laplacian = sp.diff(u, _r, 2) + sp.diff(u, _r) / _r + sp.diff(u, _theta, 2) / _r ** 2
    operator = sp.expand(sp.powsimp(-h ** 2 * laplacian / wave))

    tangential = sp.simplify(operator.coeff(g(_r)) / xi ** 2).subs(_r, 1 - x1)
    # d/dr = -d/dx1 and h Q1 D_x1 g = -i h**2 Q1 dg/dx1
    first_order = -operator.coeff(sp.Derivative(g(_r), _r))
    q1 = sp.simplify(first_order / (-sp.I * h ** 2)).subs(_r, 1 - x1)
    r_coefficients = _series_coefficients(tangential, 2)
    q_coefficients = _series_coefficients(q1, 1)
    return {
        'R0': r_coefficients[0],
        'R0_sharp': r_coefficients[1],
        'R1_sharp': r_coefficients[2],
        'Q1_0': q_coefficients[0],
        'Q1_1': q_coefficients[1],
    }


def _solve_single(equation, unknown):
    solutions = sp.solve(equation, unknown)
    if len(solutions) != 1:
        raise ComputationError(f'Expected one solution for {unknown}, got {solutions}')
    return sp.simplify(solutions[0])


@lru_cache(maxsize=1)
def derived_symbols():
    """
    Derive the phase and amplitude coefficients for the principal root ``rho = i xi``.

    The h**0 part of the conjugated Laplacian is the eikonal expression and its h**1 part the
    transport expression; each is solved order by order in ``x1``.

    :return: sympy expressions in ``xi`` for ``phi2``, ``phi3``, ``a10``, ``a2`` and ``q``
    :rtype: dict
    """
    p2, p3, a1, a2 = sp.symbols('phi2 phi3 a1 a2')
    rho = sp.I * xi
    phase = x1 * rho + x1 ** 2 * p2 + x1 ** 3 * p3
    amplitude = 1 + x1 * a1 + x1 ** 2 * a2

    eikonal = _conjugated_laplacian(phase, 1).coeff(h, 0)
    transport = _conjugated_laplacian(phase, amplitude).coeff(h, 1)

    eikonal_terms = _series_coefficients(eikonal, 2)
    if sp.simplify(eikonal_terms[0]) != 0:
        raise ComputationError(f'The principal root leaves an eikonal defect {eikonal_terms[0]}')
    phi2_value = _solve_single(eikonal_terms[1], p2)
    phi3_value = _solve_single(eikonal_terms[2].subs(p2, phi2_value), p3)

    transport = transport.subs({p2: phi2_value, p3: phi3_value})
    transport_terms = _series_coefficients(transport, 1)
    a10_value = _solve_single(transport_terms[0], a1)
    a2_value = _solve_single(transport_terms[1].subs(a1, a10_value), a2)
    log.debug('Derived phi2=%s phi3=%s a10=%s a2=%s', phi2_value, phi3_value, a10_value, a2_value)
    return {
        'phi2': phi2_value,
        'phi3': phi3_value,
        'a10': a10_value,
        'a2': a2_value,
        'q': sp.simplify(-sp.I * a10_value),
    }


def evaluate(name, value):
    """
    Evaluate a derived symbol at a positive frequency.

    :param str name: a key of :func:`derived_symbols`
    :param float value: the frequency ``xi > 0``
    :rtype: complex
    """
    return complex(sp.N(derived_symbols()[name].subs(xi, value)))
