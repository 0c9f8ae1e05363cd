# SPDX-License-Identifier: GPL-3.0-or-later
"""
Per-mode radial integration for the transmission problem.

A mode of degree ``ell`` of ``(div c grad + lam**2 n) u = 0`` in the unit ball of dimension ``d``
reduces, with the flux ``p = c v'``, to the first order system::

    v' = p / c
    p' = -(d - 1)/r p - (lam**2 n - c L / r**2) v,    L = ell (ell + d - 2)

which needs no derivative of ``c``. The regular solution is started from the Frobenius series
``v = r**ell (1 + alpha r**2)`` and normalized so that its growth lives in ``log_scale``.
"""
from dataclasses import dataclass
import logging
import math

import numpy as np
from scipy import integrate, sparse, special

from itp_lab.config import get_config
from itp_lab.dogpile_cache import batch_should_use_cache, create_dogpile_region, dogpile_cache
from itp_lab.exceptions import (
    DomainError,
    DtNPoleError,
    IntegrationError,
    NearSingularSolveError,
    ValidationError,
)
from itp_lab.profiles import max_index_ratio

log = logging.getLogger(__name__)
dogpile_cache_region = create_dogpile_region()

# The logarithmic derivative is integrated while lam**2 n/c r**2 stays below this share of L
_RICCATI_SWITCH = 0.5
# Bound on |alpha| r_start**2 so the two-term series stays accurate
_SERIES_BOUND = 0.1
_CHUNK_MAX = 0.05
_CHUNK_WAVES = 20.0
# Condition estimate above which the Dirichlet problem counts as singular
_SINGULAR_CONDITION = 1e10
# scipy integrators that accept only a real state
_REAL_ONLY_METHODS = frozenset({'Radau', 'LSODA'})


@dataclass(frozen=True)
class ModeProblem:
    """One angular mode of one medium at a spectral parameter."""

    c: object
    n: object
    d: int
    ell: int
    lam: complex

    def __post_init__(self):
        if int(self.ell) != self.ell or self.ell < 0:
            raise ValidationError(f'The mode degree must be a non-negative integer, got {self.ell}')
        if self.d < 2:
            raise ValidationError(f'The dimension must be at least 2, got {self.d}')


@dataclass(frozen=True)
class ModeTrace:
    """Boundary data of the regular solution; both values carry the factor exp(-log_scale)."""

    v1: complex
    dv1: complex
    log_scale: float

    @property
    def ratio(self):
        """Return v'(1)/v(1), which does not depend on ``log_scale``."""
        if self.v1 == 0:
            raise DtNPoleError('The boundary value vanishes; v\'(1)/v(1) is not defined')
        return self.dv1 / self.v1


@dataclass(frozen=True)
class InhomogeneousSolution:
    """Boundary flux of the Dirichlet solution and the norm of its source."""

    g: complex
    v_norm: float


def _alpha(lam2, c0, n0, ell, d):
    return -lam2 * n0 / (c0 * (4 * ell + 2 * d))


def start_radius(ell, alpha_abs):
    """
    Return the radius where the Frobenius series hands over to the integrator.

    :param int ell: the mode degree
    :param float alpha_abs: the largest ``|alpha|`` of the batch
    :rtype: float
    """
    r_start = max(1e-6, ell * 1e-4)
    if alpha_abs > 0:
        r_start = min(r_start, math.sqrt(_SERIES_BOUND / alpha_abs))
    return r_start


def _mesh(c, n, r_start, r_end, wavenumber):
    """Return the mandatory step boundaries: breakpoints, chunk ends and a geometric start."""
    chunk = min(_CHUNK_MAX, _CHUNK_WAVES / max(wavenumber, 1e-300))
    count = max(1, int(math.ceil((r_end - r_start) / chunk)))
    points = [np.linspace(r_start, r_end, count + 1), c.breakpoints, n.breakpoints]
    geometric = r_start * 10.0 ** np.arange(1, 7)
    points.append(geometric)
    mesh = np.unique(np.concatenate([np.asarray(p, dtype=float) for p in points]))
    return mesh[(mesh >= r_start) & (mesh <= r_end)]


def _split_complex(fun, jac):
    """Return the real form of a holomorphic system, the state stacked as (re y, im y)."""

    def real_fun(r, x):
        half = x.size // 2
        dy = fun(r, x[:half] + 1j * x[half:])
        return np.concatenate([dy.real, dy.imag])

    if jac is None:
        return real_fun, None

    def real_jac(r, x):
        half = x.size // 2
        block = sparse.csc_matrix(jac(r, x[:half] + 1j * x[half:]))
        return sparse.bmat([[block.real, -block.imag], [block.imag, block.real]], format='csc')

    return real_fun, real_jac


def _solve_segment(fun, a, b, y, method, tol, jac=None):
    real_state = method in _REAL_ONLY_METHODS
    if real_state:
        fun, jac = _split_complex(fun, jac)
        y = np.concatenate([y.real, y.imag])
    options = {'rtol': tol, 'atol': tol * 1e-2}
    if jac is not None:
        options['jac'] = jac
    try:
        sol = integrate.solve_ivp(fun, (a, b), y, method=method, **options)
    except (ArithmeticError, ValueError, np.linalg.LinAlgError) as error:
        raise IntegrationError(
            f'The integrator failed on [{a:.6g}, {b:.6g}]: {error}', radius=float(a)
        ) from error
    if not sol.success:
        raise IntegrationError(
            f'The integrator stopped at r = {sol.t[-1]:.6g}: {sol.message}', radius=float(sol.t[-1])
        )
    end = sol.y[:, -1]
    if not np.all(np.isfinite(end)):
        raise IntegrationError(f'The state is not finite at r = {b:.6g}', radius=float(b))
    if real_state:
        half = end.size // 2
        return end[:half] + 1j * end[half:]
    return end


def _riccati_phase(c, n, d, ell, lam2, r_start, r_end, tol):
    """Integrate q = c v'/v and sigma = log v - ell log r from ``r_start`` to ``r_end``."""
    size = lam2.size
    L = ell * (ell + d - 2)
    c0, n0 = c.interp(0.0), n.interp(0.0)
    alpha = _alpha(lam2, c0, n0, ell, d)
    series = 1 + alpha * r_start ** 2
    cs = c.interp(r_start)
    q0 = cs * (ell / r_start + 2 * alpha * r_start / series)
    y0 = np.concatenate([q0, np.log(series)]).astype(complex)

    def fun(r, y):
        q = y[:size]
        cr, nr = c.interp(r), n.interp(r)
        dq = -(d - 1) / r * q - (lam2 * nr - cr * L / r ** 2) - q * q / cr
        return np.concatenate([dq, q / cr - ell / r])

    def jac(r, y):
        q = y[:size]
        cr = c.interp(r)
        zero = sparse.csc_matrix((size, size), dtype=complex)
        dq_dq = sparse.diags(-(d - 1) / r - 2 * q / cr)
        ds_dq = sparse.identity(size, format='csc', dtype=complex) / cr
        return sparse.bmat([[dq_dq, zero], [ds_dq, zero]], format='csc', dtype=complex)

    mesh = _mesh(c, n, r_start, r_end, 0.0)
    y = y0
    for a, b in zip(mesh[:-1], mesh[1:]):
        y = _solve_segment(fun, a, b, y, 'Radau', tol, jac=jac)
    return y[:size], y[size:]


def _linear_phase(c, n, d, ell, lam2, v, p, log_scale, r_start, wavenumber, tol):
    """Integrate (v, p) from ``r_start`` to 1, renormalizing into ``log_scale`` at each step."""
    size = lam2.size
    L = ell * (ell + d - 2)

    def fun(r, y):
        vv, pp = y[:size], y[size:]
        cr, nr = c.interp(r), n.interp(r)
        return np.concatenate([pp / cr, -(d - 1) / r * pp - (lam2 * nr - cr * L / r ** 2) * vv])

    mesh = _mesh(c, n, r_start, 1.0, wavenumber)
    y = np.concatenate([v, p]).astype(complex)
    log_scale = np.array(log_scale, dtype=float)
    for a, b in zip(mesh[:-1], mesh[1:]):
        y = _solve_segment(fun, a, b, y, 'DOP853', tol)
        scale = np.maximum(np.abs(y[:size]), np.abs(y[size:]))
        scale = np.where(scale > 0, scale, 1.0)
        y = y / np.concatenate([scale, scale])
        log_scale = log_scale + np.log(scale)
    log.debug('Integrated %d segments for ell=%d', len(mesh) - 1, ell)
    return y[:size], y[size:], log_scale


@dogpile_cache(dogpile_cache_region, batch_should_use_cache)
def shoot(c, n, d, ell, lams, tol):
    """
    Integrate the regular solution of mode ``ell`` for a batch of spectral parameters.

    :param itp_lab.profiles.RadialProfile c: the coefficient c(r)
    :param itp_lab.profiles.RadialProfile n: the coefficient n(r)
    :param int d: the dimension
    :param int ell: the mode degree
    :param numpy.ndarray lams: the spectral parameters
    :param float tol: the relative local error bound
    :return: arrays ``(v1, dv1, log_scale)`` with ``v(1) = v1 exp(log_scale)``
    :rtype: tuple
    :raises DomainError: if a spectral parameter is not finite or ``tol`` is not positive
    :raises IntegrationError: if the integrator fails
    """
    if not tol > 0:
        raise DomainError(f'The tolerance must be positive, got {tol}')
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    if not np.all(np.isfinite(lams)):
        raise DomainError('The spectral parameters must be finite')

    lam2 = lams ** 2
    c0, n0 = c.interp(0.0), n.interp(0.0)
    alpha = _alpha(lam2, c0, n0, ell, d)
    r_start = start_radius(ell, float(np.max(np.abs(alpha))))
    ratio = max_index_ratio(c, n)
    wavenumber = float(np.max(np.abs(lams))) * ratio
    L = ell * (ell + d - 2)

    r_switch = r_start
    if ell > get_config().itp_lab_ell_threshold:
        reach = float(np.max(np.abs(lam2))) * ratio ** 2
        r_switch = 1.0 if reach == 0 else min(1.0, math.sqrt(_RICCATI_SWITCH * L / reach))
        r_switch = max(r_switch, r_start)

    if r_switch > r_start:
        q, sigma = _riccati_phase(c, n, d, ell, lam2, r_start, r_switch, tol)
        log_scale = ell * math.log(r_switch) + sigma.real
        v = np.exp(1j * sigma.imag)
        p = q * v
        if r_switch >= 1.0:
            return v, p / c.interp(1.0), log_scale
    else:
        series = 1 + alpha * r_start ** 2
        scale = np.maximum(np.abs(series), 1e-300)
        v = series / scale
        p = c.interp(r_start) * (ell / r_start * series + 2 * alpha * r_start) / scale
        log_scale = ell * math.log(r_start) + np.log(scale)

    v, p, log_scale = _linear_phase(c, n, d, ell, lam2, v, p, log_scale, r_switch, wavenumber, tol)
    return v, p / c.interp(1.0), log_scale


def integrate_mode(problem, tol):
    """
    Integrate one mode of one medium to the boundary.

    :param ModeProblem problem: the mode
    :param float tol: the relative local error bound
    :rtype: ModeTrace
    :raises IntegrationError: if the integrator fails
    """
    v1, dv1, log_scale = shoot(problem.c, problem.n, problem.d, problem.ell, problem.lam, tol)
    return ModeTrace(complex(v1[0]), complex(dv1[0]), float(log_scale[0]))


def dtn_eigenvalue(trace, h):
    """
    Return the eigenvalue ``i h v'(1)/v(1)`` of the semiclassical Dirichlet-to-Neumann map.

    :param ModeTrace trace: the boundary data of the mode
    :param float h: the semiclassical parameter
    :rtype: complex
    :raises DtNPoleError: if ``v(1) = 0``
    """
    return 1j * h * trace.ratio


def itp_characteristic(lam, ell, pair, tol):
    """
    Evaluate the transmission determinant of mode ``ell``.

    ``W = c1(1) v1'(1) v2(1) - c2(1) v2'(1) v1(1)`` with both solutions Frobenius-normalized. It
    is entire in ``lam`` and vanishes at the transmission eigenvalues of the mode.

    :param lam: the spectral parameter, scalar or array
    :param int ell: the mode degree
    :param itp_lab.profiles.MediumPair pair: the two media
    :param float tol: the relative local error bound
    :return: the determinant, with the shape of ``lam``
    """
    lams = np.asarray(lam, dtype=complex)
    batch = np.atleast_1d(lams)
    v_a, dv_a, ls_a = shoot(pair.c1, pair.n1, pair.d, ell, batch, tol)
    v_b, dv_b, ls_b = shoot(pair.c2, pair.n2, pair.d, ell, batch, tol)
    c1, c2 = pair.c1.boundary_value, pair.c2.boundary_value
    w = (c1 * dv_a * v_b - c2 * dv_b * v_a) * np.exp(ls_a + ls_b)
    if lams.ndim == 0:
        return complex(w[0])
    return w


def transmission_symbol(lam, ell, pair, tol):
    """
    Return ``c1 nu1 - c2 nu2``, the per-mode symbol of the transmission boundary operator.

    It vanishes exactly where :func:`itp_characteristic` does, away from Dirichlet poles.

    :raises DtNPoleError: if one of the boundary values vanishes
    """
    lams = np.atleast_1d(np.asarray(lam, dtype=complex))
    v_a, dv_a, _ = shoot(pair.c1, pair.n1, pair.d, ell, lams, tol)
    v_b, dv_b, _ = shoot(pair.c2, pair.n2, pair.d, ell, lams, tol)
    if np.any(v_a == 0) or np.any(v_b == 0):
        raise DtNPoleError('A boundary value vanishes; the transmission symbol has a pole')
    h = 1.0 / np.abs(lams)
    symbol = 1j * h * (pair.c1.boundary_value * dv_a / v_a - pair.c2.boundary_value * dv_b / v_b)
    if np.ndim(lam) == 0:
        return complex(symbol[0])
    return symbol


def bessel_ratio(ell, lam, d=2):
    """
    Return ``v'(1)/v(1)`` for the constant medium ``c = n = 1`` from Bessel functions.

    The regular solution is ``r**(1 - d/2) J_nu(lam r)`` with ``nu = ell + d/2 - 1``. Scaled
    Bessel functions keep the ratio finite for large ``|Im lam|``; the result is NaN when the
    scaled values underflow.

    :param int ell: the mode degree
    :param complex lam: the spectral parameter
    :param int d: the dimension
    :rtype: complex
    """
    nu = ell + d / 2.0 - 1.0
    lam = complex(lam)
    if lam.real == 0 and lam.imag > 0:
        kappa = lam.imag
        num = special.ive(nu - 1, kappa) + special.ive(nu + 1, kappa)
        den = 2 * special.ive(nu, kappa)
        core = kappa * num / den if den != 0 else complex('nan')
    else:
        num = special.jve(nu - 1, lam) - special.jve(nu + 1, lam)
        den = 2 * special.jve(nu, lam)
        core = lam * num / den if den != 0 else complex('nan')
    return complex(1 - d / 2.0 + core)


def _rhs_callable(rhs):
    if callable(rhs):
        return rhs
    radii, values = rhs
    radii = np.asarray(radii, dtype=float)
    values = np.asarray(values, dtype=complex)

    def sampled(r):
        return np.interp(r, radii, values.real) + 1j * np.interp(r, radii, values.imag)

    return sampled


def _weighted_norm(rhs, d, breakpoints):
    def density(r):
        return abs(complex(rhs(r))) ** 2 * r ** (d - 1)

    inner = [r for r in breakpoints if 0 < r < 1]
    value, _ = integrate.quad(density, 0.0, 1.0, points=inner or None, limit=200)
    return math.sqrt(value)


def inhomogeneous_mode_solve(problem, rhs, tol):
    """
    Solve one mode of ``(h**2 div c grad + z n) u = h v`` with ``u = 0`` on the boundary.

    ``h`` and ``z`` come from ``problem.lam``. The solution is the particular solution started at
    rest near the origin minus the multiple of the regular solution that cancels it at r = 1.

    :param ModeProblem problem: the mode
    :param rhs: the radial profile of ``v``, a callable of r or a pair ``(radii, values)``
    :param float tol: the relative local error bound
    :return: ``g = -h u'(1)`` and the norm of ``v`` in L2 of the ball restricted to the mode
    :rtype: InhomogeneousSolution
    :raises NearSingularSolveError: if ``lam`` is too close to a Dirichlet eigenvalue
    """
    lam = complex(problem.lam)
    if lam == 0:
        raise DomainError('The spectral parameter must be non-zero')
    h = 1.0 / abs(lam)
    lam2 = lam * lam
    c, n, d, ell = problem.c, problem.n, problem.d, problem.ell
    L = ell * (ell + d - 2)
    source = _rhs_callable(rhs)
    v_norm = _weighted_norm(source, d, sorted(set(c.breakpoints) | set(n.breakpoints)))

    alpha = _alpha(lam2, c.interp(0.0), n.interp(0.0), ell, d)
    r_start = start_radius(ell, abs(alpha))
    series = 1 + alpha * r_start ** 2
    y = np.array(
        [series, c.interp(r_start) * (ell / r_start * series + 2 * alpha * r_start), 0.0, 0.0],
        dtype=complex,
    )

    def fun(r, state):
        y1, p1, up, pp = state
        cr, nr = c.interp(r), n.interp(r)
        potential = lam2 * nr - cr * L / r ** 2
        return np.array(
            [
                p1 / cr,
                -(d - 1) / r * p1 - potential * y1,
                pp / cr,
                -(d - 1) / r * pp - potential * up + complex(source(r)) / h,
            ]
        )

    mesh = _mesh(c, n, r_start, 1.0, abs(lam) * max_index_ratio(c, n))
    for a, b in zip(mesh[:-1], mesh[1:]):
        y = _solve_segment(fun, a, b, y, 'DOP853', tol)
        scale = max(abs(y[0]), abs(y[1]))
        y[:2] /= scale
        # remove the homogeneous component from the particular solution
        beta = (np.conj(y[0]) * y[2] + np.conj(y[1]) * y[3]) / (abs(y[0]) ** 2 + abs(y[1]) ** 2)
        y[2:] -= beta * y[:2]

    y1, p1, up, pp = y
    c1 = c.interp(1.0)
    condition = max(abs(y1), abs(p1) / c1) / abs(y1) if y1 != 0 else math.inf
    if condition > _SINGULAR_CONDITION:
        raise NearSingularSolveError(
            f'lambda = {lam} is within reach of a Dirichlet eigenvalue of mode {ell} '
            f'(condition estimate {condition:.3g})',
            condition=condition,
        )

    du1 = (pp - up / y1 * p1) / c1
    return InhomogeneousSolution(g=complex(-h * du1), v_norm=v_norm)
