# SPDX-License-Identifier: GPL-3.0-or-later
"""
Semiclassical pseudodifferential operators on the circle.

A symbol ``a(x, xi)`` is sampled at ``xi = h k`` for the integer modes ``|k| <= k_max`` and on a
periodic x-grid. Its left quantization acts on ``f = sum_k f_k e^{ikx}`` by
``Op_h(a) f = sum_k a(x, hk) f_k e^{ikx}``.
"""
from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy import integrate

from itp_lab.config import get_config
from itp_lab.exceptions import ConvergenceError, DomainError, ValidationError

log = logging.getLogger(__name__)

_BUMP_POINTS = 129
# Remainders below this are rounding noise
_ROUNDING_LEVEL = 1e-13


@dataclass(frozen=True, eq=False)
class SymbolGrid:
    """Samples ``values[j, i] = a(2 pi j / n_x, h (i - k_max))``."""

    n_x: int
    h: float
    k_max: int
    values: np.ndarray

    def __post_init__(self):
        if self.n_x < 2 * self.k_max + 1 or self.n_x & (self.n_x - 1):
            raise ValidationError(
                f'n_x must be a power of 2 of at least 2 k_max + 1 = {2 * self.k_max + 1}, '
                f'got {self.n_x}'
            )
        if not self.h > 0:
            raise ValidationError(f'h must be positive, got {self.h}')
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.n_x, 2 * self.k_max + 1):
            raise ValidationError(
                f'values must have shape {(self.n_x, 2 * self.k_max + 1)}, got {values.shape}'
            )
        if not np.all(np.isfinite(values)):
            raise ValidationError('The symbol samples must be finite')
        object.__setattr__(self, 'values', values)

    @property
    def modes(self):
        """Return the integer modes ``-k_max..k_max``."""
        return np.arange(-self.k_max, self.k_max + 1)

    @property
    def x(self):
        """Return the periodic x-grid."""
        return 2 * np.pi * np.arange(self.n_x) / self.n_x

    def with_values(self, values):
        """Return a grid with the same parameters and new samples."""
        return SymbolGrid(self.n_x, self.h, self.k_max, values)

    def __mul__(self, other):
        _check_compatible(self, other)
        return self.with_values(self.values * other.values)

    def __add__(self, other):
        _check_compatible(self, other)
        return self.with_values(self.values + other.values)

    def scaled(self, factor):
        """Return the grid of ``factor * a``."""
        return self.with_values(factor * self.values)


@dataclass(frozen=True, eq=False)
class CircleOperator:
    """A matrix in the Fourier basis ``e^{ikx}``, ``|k| <= k_max``."""

    matrix: np.ndarray
    h: float

    @property
    def k_max(self):
        """Return the mode cutoff."""
        return (self.matrix.shape[0] - 1) // 2

    def __matmul__(self, other):
        return CircleOperator(self.matrix @ other.matrix, self.h)

    def __sub__(self, other):
        return CircleOperator(self.matrix - other.matrix, self.h)


def _check_compatible(a1, a2):
    if (a1.n_x, a1.k_max) != (a2.n_x, a2.k_max) or not math.isclose(a1.h, a2.h):
        raise DomainError(
            f'Symbol grids differ: (n_x, h, k_max) = {(a1.n_x, a1.h, a1.k_max)} '
            f'and {(a2.n_x, a2.h, a2.k_max)}'
        )


def grid_size(k_max, minimum=64):
    """Return the smallest admissible power-of-two x-grid for ``k_max``."""
    return max(minimum, 1 << int(math.ceil(math.log2(2 * k_max + 1))))


def sample_symbol(func, h, k_max, n_x=None):
    """
    Sample a symbol on the grid of ``(x, h k)``.

    :param callable func: ``func(x, xi)`` broadcasting over arrays
    :param float h: the semiclassical parameter
    :param int k_max: the mode cutoff
    :param int n_x: the x-grid size; defaults to :func:`grid_size`
    :rtype: SymbolGrid
    """
    n_x = n_x or grid_size(k_max)
    x = 2 * np.pi * np.arange(n_x) / n_x
    xi = h * np.arange(-k_max, k_max + 1)
    values = np.broadcast_to(func(x[:, None], xi[None, :]), (n_x, 2 * k_max + 1))
    return SymbolGrid(n_x, h, k_max, np.array(values, dtype=complex))


def quantize(a):
    """
    Return the left quantization of a sampled symbol.

    ``M[j, k]`` is the x-Fourier coefficient of order ``j - k`` of ``a(., hk)``; orders not
    resolved by the grid are dropped.

    :param SymbolGrid a: the symbol
    :rtype: CircleOperator
    """
    coefficients = np.fft.fft(a.values, axis=0) / a.n_x
    modes = a.modes
    offset = modes[:, None] - modes[None, :]
    columns = np.broadcast_to(np.arange(modes.size)[None, :], offset.shape)
    matrix = coefficients[offset % a.n_x, columns]
    matrix[np.abs(offset) > (a.n_x - 1) // 2] = 0
    return CircleOperator(matrix, a.h)


def japanese(xi):
    """Return ``(1 + xi**2) ** (1/2)``."""
    return np.sqrt(1.0 + np.square(xi))


def h_sobolev_norm(f, k, h):
    """
    Return the semiclassical Sobolev norm of a trigonometric polynomial.

    :param f: the coefficients of the modes ``-K..K``
    :param float k: the order
    :param float h: the semiclassical parameter
    :rtype: float
    """
    f = np.asarray(f, dtype=complex)
    modes = np.arange(f.size) - (f.size - 1) // 2
    weights = japanese(h * modes) ** (2 * k)
    return float(np.sqrt(np.sum(weights * np.abs(f) ** 2)))


def _weighted(A, k_from, k_to):
    modes = np.arange(A.matrix.shape[0]) - A.k_max
    weights = japanese(A.h * modes)
    return (weights[:, None] ** k_to) * A.matrix * (weights[None, :] ** -k_from)


def op_norm(A, k_from=0.0, k_to=0.0, rtol=1e-8, max_iter=None, seed=0):
    """
    Return the norm of ``A`` from the H_h^k_from space to the H_h^k_to space.

    The norm is the largest singular value of ``W_to A W_from^-1`` with the diagonal weights
    ``<hm>^k``, found by power iteration on the normal matrix.

    :param CircleOperator A: the operator
    :param float k_from: the order of the source space
    :param float k_to: the order of the target space
    :param float rtol: the relative change of the estimate at convergence
    :param int max_iter: the iteration budget; defaults to ``itp_lab_power_iteration_max``
    :param int seed: the seed of the starting vector
    :rtype: float
    :raises ConvergenceError: if the estimate has not settled after ``max_iter`` iterations
    """
    max_iter = max_iter or get_config().itp_lab_power_iteration_max
    B = _weighted(A, k_from, k_to)
    if not np.any(B):
        return 0.0

    rng = np.random.default_rng(seed)
    x = np.ones(B.shape[1], dtype=complex) + 0.1 * rng.standard_normal(B.shape[1])
    x /= np.linalg.norm(x)
    estimate = 0.0
    gap = math.inf
    for iteration in range(1, max_iter + 1):
        y = B.conj().T @ (B @ x)
        value = float(np.sqrt(np.real(np.vdot(x, y))))
        norm_y = np.linalg.norm(y)
        if norm_y == 0:
            return 0.0
        x = y / norm_y
        gap = abs(value - estimate)
        if gap <= rtol * value:
            log.debug('Power iteration settled after %d steps at %.12g', iteration, value)
            return value
        estimate = value
    raise ConvergenceError(
        f'Power iteration did not settle after {max_iter} steps (last change {gap:.3e})', gap=gap
    )


def bump(w):
    """Return the unnormalized bump ``exp(-1/(1 - w**2))`` on (-1, 1), zero elsewhere."""
    w = np.asarray(w, dtype=float)
    inside = np.abs(w) < 1
    out = np.zeros_like(w)
    out[inside] = np.exp(-1.0 / (1.0 - w[inside] ** 2))
    return out


def _bump_quadrature():
    nodes = np.linspace(-1.0, 1.0, _BUMP_POINTS)
    weights = bump(nodes)
    mass = integrate.simpson(weights, x=nodes)
    return nodes, weights / mass


def mollifier_multiplier(modes, t):
    """
    Return the factor applied to the x-Fourier coefficient of each mode by :func:`mollify`.

    It is ``int phi0(w) exp(i m t w) dw`` by 129-point Simpson quadrature; real since the bump is
    even.
    """
    nodes, density = _bump_quadrature()
    modes = np.asarray(modes, dtype=float)
    integrand = density[None, :] * np.cos(modes[:, None] * t * nodes[None, :])
    return integrate.simpson(integrand, x=nodes, axis=1)


def mollify(a, t):
    """
    Average a symbol in x against the bump of width ``t``.

    :param SymbolGrid a: the symbol
    :param float t: the width, in (0, 1]
    :rtype: SymbolGrid
    :raises DomainError: if ``t`` is outside (0, 1]
    """
    if not 0 < t <= 1:
        raise DomainError(f't must lie in (0, 1], got {t}')
    frequencies = np.fft.fftfreq(a.n_x, d=1.0 / a.n_x)
    factor = mollifier_multiplier(frequencies, t)
    coefficients = np.fft.fft(a.values, axis=0) * factor[:, None]
    return a.with_values(np.fft.ifft(coefficients, axis=0))


def composition_remainder(a1, a2, k=0.0):
    """
    Return the norm of ``Op(a1) Op(a2) - Op(a1 a2)`` from H_h^k to L2.

    :param SymbolGrid a1: the left symbol
    :param SymbolGrid a2: the right symbol
    :param float k: the order of the source space
    :rtype: float
    :raises DomainError: if the grids differ
    """
    _check_compatible(a1, a2)
    remainder = quantize(a1) @ quantize(a2) - quantize(a1 * a2)
    # the Frobenius norm bounds the operator norm; power iteration on rounding noise stalls
    frobenius = float(np.linalg.norm(_weighted(remainder, k, 0.0)))
    if frobenius <= _ROUNDING_LEVEL:
        return frobenius
    return op_norm(remainder, k_from=k)


def smoothstep(s):
    """Return the quintic smoothstep ``6 s**5 - 15 s**4 + 10 s**3`` clipped to [0, 1]."""
    s = np.clip(s, 0.0, 1.0)
    return s ** 3 * (10.0 - 15.0 * s + 6.0 * s ** 2)


def eta(xi, C0):
    """
    Return the glancing cutoff: 1 for ``xi**2 <= C0``, 0 for ``xi**2 >= 2 C0``.

    :raises DomainError: if ``C0`` is not positive
    """
    if not C0 > 0:
        raise DomainError(f'C0 must be positive, got {C0}')
    return 1.0 - smoothstep((np.square(xi) - C0) / C0)


def eta_cutoff(C0, h, k_max, n_x=None):
    """
    Sample the glancing cutoff as a symbol constant in x.

    :param float C0: the inner edge of the transition in ``xi**2``
    :param float h: the semiclassical parameter
    :param int k_max: the mode cutoff
    :param int n_x: the x-grid size
    :rtype: SymbolGrid
    """
    return sample_symbol(lambda x, xi: eta(xi, C0) + 0 * x, h, k_max, n_x)
