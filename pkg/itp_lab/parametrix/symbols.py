# SPDX-License-Identifier: GPL-3.0-or-later
"""
Closed-form boundary symbols of the Dirichlet-to-Neumann parametrix on the unit disc.

In the collar coordinate ``x1 = 1 - r`` the Laplacian reads::

    -h**2 Delta = D_x1**2 + R(x1) D_theta**2 + h Q1(x1) D_x1,    D = -i h d
    R(x1) = (1 - x1)**-2 = 1 + 2 x1 + 3 x1**2 + ...
    Q1(x1) = i / (1 - x1) = i + i x1 + ...

The phase ``phi = -x xi + x1 rho + x1**2 phi2 + x1**3 phi3`` and the amplitude
``1 + x1 a1 + x1**2 a2`` are fixed order by order in ``x1`` with the principal root
``rho = i |xi|``.
"""
from dataclasses import dataclass
import logging

import numpy as np

from itp_lab.exceptions import DomainError
from itp_lab.spectral import sqrt_upper

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiscGeometry:
    """Taylor coefficients at the boundary of the collar form of the disc Laplacian."""

    R0: float = 1.0
    R0_sharp: float = 2.0
    R1_sharp: float = 3.0
    Q1_0: complex = 1j
    Q1_1: complex = 1j
    Qtilde_0: complex = 0.0


DISC = DiscGeometry()


@dataclass(frozen=True)
class BoundarySymbolContext:
    """The spectral parameter and the boundary value of n/c of one medium."""

    z: complex
    ntilde0: float

    @staticmethod
    def r0(xi):
        """Return the principal symbol ``xi**2`` of the boundary Laplacian."""
        return np.square(xi)


def _elliptic(xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(xi == 0):
        raise DomainError('The symbol is only defined for xi != 0')
    return np.abs(xi)


def _scalar(value):
    value = np.asarray(value)
    return complex(value) if value.ndim == 0 else value


def rho(xi, ctx):
    """
    Return the normal symbol ``sqrt(-xi**2 + z ntilde0)`` on the upper branch.

    :param xi: the tangential frequency, scalar or array
    :param BoundarySymbolContext ctx: the spectral context
    """
    return sqrt_upper(-np.square(xi) + ctx.z * ctx.ntilde0)


def phi2(xi, geometry=DISC):
    """
    Return the second order phase coefficient, the root of ``4 i |xi| phi2 + R0# xi**2 = 0``.

    :raises DomainError: if ``xi == 0``
    """
    a = _elliptic(xi)
    return _scalar(-geometry.R0_sharp * a ** 2 / (4j * a))


def phi3(xi, geometry=DISC):
    """
    Return the third order phase coefficient.

    It is the root of ``6 i |xi| phi3 + 4 phi2**2 + R1# xi**2 = 0``.

    :raises DomainError: if ``xi == 0``
    """
    a = _elliptic(xi)
    p2 = phi2(xi, geometry)
    return _scalar(-(4 * np.square(p2) + geometry.R1_sharp * a ** 2) / (6j * a))


def eikonal_coefficients(xi, p2, p3, geometry=DISC):
    """Return the x1 and x1**2 coefficients of the principal eikonal defect."""
    a = _elliptic(xi)
    big_phi0 = 4j * a * p2 + geometry.R0_sharp * a ** 2
    big_phi1 = 6j * a * p3 + 4 * np.square(p2) + geometry.R1_sharp * a ** 2
    return _scalar(big_phi0), _scalar(big_phi1)


@dataclass(frozen=True)
class FirstAmplitude:
    """The first order amplitude coefficient and its tangential-gradient part."""

    a10: complex
    a11: complex


def a1_symbol(xi, geometry=DISC):
    """
    Return the first order amplitude coefficient.

    It is the root of ``2 |xi| a1 - 2 i phi2 + i Q1_0 |xi| - <Qtilde, xi> = 0``. ``a11``
    collects the terms carrying the gradient of the chart cutoff, which is constant on the
    circle.

    :raises DomainError: if ``xi == 0``
    """
    a = _elliptic(xi)
    a10 = 1j * phi2(xi, geometry) / a - 0.5j * geometry.Q1_0 + 0.5 * geometry.Qtilde_0 * np.sign(xi)
    return FirstAmplitude(a10=_scalar(a10), a11=_scalar(np.zeros_like(a, dtype=complex)))


def q_symbol(xi, geometry=DISC):
    """
    Return the order-h boundary symbol ``q = -i a10`` of the improved parametrix.

    It depends on neither z nor n.

    :raises DomainError: if ``xi == 0``
    """
    return _scalar(-1j * np.asarray(a1_symbol(xi, geometry).a10))


def a2_symbol(xi, geometry=DISC):
    """
    Return the second order amplitude coefficient.

    It is the root of the x1 coefficient of the transport expression::

        4 |xi| a2 - 6 i phi2 a1 - 6 i phi3 + 2 Q1_0 phi2 + i Q1_0 |xi| a1 + i Q1_1 |xi| = 0

    :raises DomainError: if ``xi == 0``
    """
    a = _elliptic(xi)
    a1 = np.asarray(a1_symbol(xi, geometry).a10)
    p2, p3 = phi2(xi, geometry), phi3(xi, geometry)
    numerator = (
        6j * p2 * a1
        + 6j * p3
        - 2 * geometry.Q1_0 * p2
        - 1j * geometry.Q1_0 * a * a1
        - 1j * geometry.Q1_1 * a
    )
    return _scalar(numerator / (4 * a))


def transport_defect(xi, a1=None, a2=None, geometry=DISC):
    """
    Return the x1**0 and x1**1 coefficients of the transport expression.

    Both vanish for the amplitudes of :func:`a1_symbol` and :func:`a2_symbol`, the defaults.
    """
    a = _elliptic(xi)
    a1 = np.asarray(a1_symbol(xi, geometry).a10 if a1 is None else a1)
    a2 = np.asarray(a2_symbol(xi, geometry) if a2 is None else a2)
    p2, p3 = phi2(xi, geometry), phi3(xi, geometry)
    order0 = 2 * a * a1 - 2j * p2 + 1j * geometry.Q1_0 * a
    order1 = (
        4 * a * a2
        - 6j * p2 * a1
        - 6j * p3
        + 2 * geometry.Q1_0 * p2
        + 1j * geometry.Q1_0 * a * a1
        + 1j * geometry.Q1_1 * a
    )
    return _scalar(order0), _scalar(order1)


def eikonal_defect(xi, x1, ctx, improved=True):
    """
    Evaluate ``(d phi/dx1)**2 + R(x1) xi**2 - z ntilde0`` at collar depth ``x1``.

    The basic phase stops at ``x1 rho``; the improved one adds ``x1**2 phi2 + x1**3 phi3``.
    With the principal root (``z = 0``) the basic defect is ``2 x1 xi**2 + O(x1**2)`` and the
    improved one is ``O(x1**3)``.

    :param float xi: the tangential frequency, non-zero
    :param x1: the collar depth in [0, 1), scalar or array
    :param BoundarySymbolContext ctx: the spectral context
    :param bool improved: whether to include the corrections
    """
    x1 = np.asarray(x1, dtype=float)
    slope = rho(xi, ctx) + 0 * x1
    if improved:
        slope = slope + 2 * x1 * phi2(xi) + 3 * x1 ** 2 * phi3(xi)
    value = np.square(slope) + xi ** 2 / (1 - x1) ** 2 - ctx.z * ctx.ntilde0
    return _scalar(value)


@dataclass(frozen=True)
class PairSymbols:
    """The symbols of the factorized transmission boundary operator."""

    a1: complex
    a2: complex
    m: float
    A1: complex
    A2: complex


def pair_symbols(bd, xi, z):
    """
    Return the symbols of the factorization of ``c1 rho1 - c2 rho2`` for a medium pair.

    :param itp_lab.profiles.BoundaryData bd: the boundary values
    :param float xi: the tangential frequency
    :param complex z: the normalized spectral parameter
    :rtype: PairSymbols
    :raises DomainError: if ``c1(1) == c2(1)`` or ``r0 == z m``
    """
    if bd.c1 == bd.c2:
        raise DomainError('m is undefined when c1 = c2 on the boundary')
    r0 = float(xi) ** 2
    rho1 = rho(xi, BoundarySymbolContext(z, bd.ntilde1))
    rho2 = rho(xi, BoundarySymbolContext(z, bd.ntilde2))
    m = (bd.c1 * bd.n1 - bd.c2 * bd.n2) / (bd.c1 ** 2 - bd.c2 ** 2)
    shifted = r0 - z * m
    if shifted == 0:
        raise DomainError(f'r0 - z m vanishes at xi = {xi}, z = {z}')
    return PairSymbols(
        a1=(r0 + 1) ** -0.5 * (bd.c1 * rho1 + bd.c2 * rho2),
        a2=bd.c1 * rho1 - bd.c2 * rho2,
        m=m,
        A1=(r0 + 1) / shifted,
        A2=(r0 + 1) ** -0.5 * shifted,
    )


def factorization_identity_check(bd, xi, z):
    """
    Return ``|(c1 rho1 + c2 rho2)(c1 rho1 - c2 rho2) + (c1**2 - c2**2) r0 - z (c1 n1 - c2 n2)|``.

    :param itp_lab.profiles.BoundaryData bd: the boundary values
    :param float xi: the tangential frequency
    :param complex z: the normalized spectral parameter
    :rtype: float
    """
    r0 = float(xi) ** 2
    rho1 = rho(xi, BoundarySymbolContext(z, bd.ntilde1))
    rho2 = rho(xi, BoundarySymbolContext(z, bd.ntilde2))
    lhs = (bd.c1 * rho1 + bd.c2 * rho2) * (bd.c1 * rho1 - bd.c2 * rho2)
    rhs = -(bd.c1 ** 2 - bd.c2 ** 2) * r0 + z * (bd.c1 * bd.n1 - bd.c2 * bd.n2)
    return float(abs(lhs - rhs))


_TABLE = {
    'rho': lambda xi, ctx: rho(xi, ctx),
    'phi2': lambda xi, ctx: phi2(xi),
    'phi3': lambda xi, ctx: phi3(xi),
    'a10': lambda xi, ctx: a1_symbol(xi).a10,
    'a2': lambda xi, ctx: a2_symbol(xi),
    'q': lambda xi, ctx: q_symbol(xi),
}


def symbol_table(name, xi_values, ctx):
    """
    Tabulate a symbol for export.

    :param str name: one of ``rho``, ``phi2``, ``phi3``, ``a10``, ``a2``, ``q``
    :param xi_values: the frequencies
    :param BoundarySymbolContext ctx: the spectral context, used by ``rho``
    :return: rows ``(xi, re, im)``
    :rtype: list
    :raises DomainError: for an unknown symbol name
    """
    if name not in _TABLE:
        raise DomainError(f'Unknown symbol "{name}"; choose from {sorted(_TABLE)}')
    rows = []
    for xi in xi_values:
        value = complex(_TABLE[name](float(xi), ctx))
        rows.append((float(xi), value.real, value.imag))
    return rows
