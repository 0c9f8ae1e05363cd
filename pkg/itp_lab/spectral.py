# SPDX-License-Identifier: GPL-3.0-or-later
"""Conventions for the spectral parameter and the upper square-root branch."""
from dataclasses import dataclass
import enum
import logging
import math

import numpy as np

from itp_lab.exceptions import DomainError

log = logging.getLogger(__name__)


class Zone(str, enum.Enum):
    """The half of the unit circle that z belongs to."""

    PLUS = 'ZPlus'
    MINUS = 'ZMinus'


@dataclass(frozen=True)
class SpectralPoint:
    """The spectral parameter with its semiclassical normalization."""

    lam: complex
    h: float
    z: complex
    zone: Zone
    theta: float
    tau: float


def _check_finite(value, name):
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise DomainError(f'{name} must be finite, got {value}')
    return value


def spectral_point(lam):
    """
    Build the spectral point for ``lam``.

    :param complex lam: the spectral parameter
    :return: the point with ``h = 1/|lam|`` and ``z = (h*lam)**2``
    :rtype: SpectralPoint
    :raises DomainError: if ``lam`` is zero or not finite
    """
    lam = _check_finite(lam, 'lambda')
    if lam == 0:
        raise DomainError('lambda must be non-zero')

    h = 1.0 / abs(lam)
    z = (h * lam) ** 2
    if z.real >= 0:
        zone = Zone.PLUS
        theta, tau = abs(z.imag), 1.0
    else:
        zone = Zone.MINUS
        theta, tau = 1.0, abs(z.imag)
    return SpectralPoint(lam=lam, h=h, z=z, zone=zone, theta=theta, tau=tau)


def lambda_from_hz(h, z):
    """
    Invert the normalization: the spectral parameter with ``Re >= 0`` for given ``h`` and ``z``.

    :param float h: the semiclassical parameter, positive
    :param complex z: the normalized parameter
    :rtype: complex
    :raises DomainError: if ``h`` is not positive
    """
    if not h > 0:
        raise DomainError(f'h must be positive, got {h}')
    z = _check_finite(z, 'z')
    return complex(np.sqrt(z)) / h


def sqrt_upper(w):
    """
    Return the square root with non-negative imaginary part.

    On the positive real axis the positive root is returned. Accepts scalars or arrays.

    :param w: the radicand
    :return: ``s`` with ``s**2 == w``, ``Im s >= 0`` and ``Re s > 0`` when ``Im s == 0``
    """
    root = np.sqrt(np.asarray(w, dtype=complex))
    flip = (root.imag < 0) | ((root.imag == 0) & (root.real < 0))
    root = np.where(flip, -root, root)
    if root.ndim == 0:
        return complex(root)
    return root
