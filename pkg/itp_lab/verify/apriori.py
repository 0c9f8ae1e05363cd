# SPDX-License-Identifier: GPL-3.0-or-later
"""The boundary flux bound ``||g|| <= K h**(1/2) theta**(-1/2) ||v||`` for radial media."""
import functools
import logging
import math

from itp_lab.config import get_config
from itp_lab.exceptions import ComputationError, DomainError
from itp_lab.pool import parallel_map
from itp_lab.radial import ModeProblem, inhomogeneous_mode_solve
from itp_lab.spectral import lambda_from_hz, spectral_point
from itp_lab.verify.fitting import sweep_result

log = logging.getLogger(__name__)

DEFAULT_MODES = tuple(range(11))


def unit_source(r):
    """Return 1."""
    return 1.0


def zero_source(r):
    """Return 0."""
    return 0.0


def ramp_source(r):
    """Return r."""
    return r


SOURCES = {'one': unit_source, 'zero': zero_source, 'ramp': ramp_source}


def z_with_theta(theta):
    """Return the point of the upper unit semicircle in Z+ with ``|Im z| = theta``."""
    if not 0 < theta <= 1:
        raise DomainError(f'theta must lie in (0, 1], got {theta}')
    return complex(math.sqrt(1.0 - theta * theta), theta)


def _mode_ratio(medium, lam, ell, rhs, tol, scale):
    problem = ModeProblem(medium.c, medium.n, medium.d, ell, lam)
    solution = inhomogeneous_mode_solve(problem, rhs, tol)
    if solution.v_norm == 0:
        return 0.0
    return abs(solution.g) / (scale * solution.v_norm)


def _ratio_point(h, medium, z, rhs, modes, tol):
    lam = lambda_from_hz(h, z)
    point = spectral_point(lam)
    if point.theta < h:
        return h, point.theta, None, f'theta = {point.theta:.3g} is below h'
    scale = math.sqrt(h / point.theta)
    try:
        ratios = [_mode_ratio(medium, lam, ell, rhs, tol, scale) for ell in modes]
    except ComputationError as error:
        log.warning('Skipping h=%g, z=%s: %s', h, z, error)
        return h, point.theta, None, str(error)
    return h, point.theta, max(ratios), None


def _collect(outcomes):
    points, skipped = [], []
    for h, theta, ratio, reason in outcomes:
        if ratio is None:
            skipped.append((h, reason))
        else:
            points.append((h, theta, ratio))
    return points, skipped


def _growth(points):
    if not points or points[0][2] == 0:
        return 1.0
    return max(p[2] for p in points) / points[0][2]


def apriori_sweep(medium, z, rhs, h_list, modes=DEFAULT_MODES, tol=None, jobs=1):
    """
    Tabulate the largest ratio ``||g|| / (h**(1/2) theta**(-1/2) ||v||)`` over a set of modes.

    The h values are visited from the coarsest. ``metrics['growth']`` is the largest ratio divided
    by the ratio at the coarsest h; boundedness means that it stays of order one.

    :param itp_lab.profiles.MediumProfile medium: the radial medium
    :param complex z: the normalized spectral parameter, on the unit circle
    :param callable rhs: the radial source profile ``v(r)``, picklable when ``jobs > 1``
    :param list h_list: the semiclassical parameters
    :param tuple modes: the mode degrees
    :param float tol: the integration tolerance; defaults to ``itp_lab_default_tol``
    :param int jobs: the number of worker processes
    :rtype: itp_lab.verify.fitting.SweepResult
    """
    tol = tol or get_config().itp_lab_default_tol
    h_list = sorted(h_list, reverse=True)
    log.info('Starting the a priori sweep at z=%s over %d values of h', z, len(h_list))
    task = functools.partial(
        _ratio_point, medium=medium, z=complex(z), rhs=rhs, modes=tuple(modes), tol=tol
    )
    points, skipped = _collect(parallel_map(task, h_list, jobs))
    metrics = {
        'max_ratio': max((p[2] for p in points), default=0.0),
        'growth': _growth(points),
        'modes': list(modes),
    }
    return sweep_result(
        'apriori-h', points, skipped=skipped, metrics=metrics, value_name='ratio'
    )


def theta_sweep(medium, h, thetas, rhs, modes=DEFAULT_MODES, tol=None, jobs=1):
    """
    Tabulate the same ratio at a fixed ``h`` as ``theta`` decreases.

    ``metrics['growth']`` is the largest ratio divided by the ratio at the largest theta.

    :param itp_lab.profiles.MediumProfile medium: the radial medium
    :param float h: the semiclassical parameter
    :param list thetas: values in (0, 1]
    :param callable rhs: the radial source profile
    :param tuple modes: the mode degrees
    :param float tol: the integration tolerance
    :param int jobs: the number of worker processes
    :rtype: itp_lab.verify.fitting.SweepResult
    """
    tol = tol or get_config().itp_lab_default_tol
    thetas = sorted(thetas, reverse=True)
    zs = [z_with_theta(theta) for theta in thetas]
    log.info('Starting the theta sweep at h=%g over %d values of theta', h, len(thetas))
    outcomes = parallel_map(
        functools.partial(_theta_point, h=h, medium=medium, rhs=rhs, modes=tuple(modes), tol=tol),
        zs,
        jobs,
    )
    points, skipped = _collect(outcomes)
    metrics = {
        'max_ratio': max((p[2] for p in points), default=0.0),
        'growth': _growth(points),
        'h': h,
    }
    return sweep_result(
        'apriori-theta', points, skipped=skipped, metrics=metrics, x_index=1, value_name='ratio'
    )


def _theta_point(z, h, medium, rhs, modes, tol):
    return _ratio_point(h, medium, z, rhs, modes, tol)
