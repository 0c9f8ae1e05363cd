# SPDX-License-Identifier: GPL-3.0-or-later
"""Accuracy of the boundary parametrix against the per-mode Dirichlet-to-Neumann eigenvalues."""
import functools
import logging
import math

import numpy as np

from itp_lab.config import get_config
from itp_lab.exceptions import ComputationError, DomainError
from itp_lab.parametrix.symbols import BoundarySymbolContext, q_symbol, rho
from itp_lab.pool import parallel_map
from itp_lab.psido import eta, japanese
from itp_lab.radial import ModeProblem, bessel_ratio, dtn_eigenvalue, integrate_mode
from itp_lab.spectral import lambda_from_hz, spectral_point
from itp_lab.verify.fitting import sweep_result

log = logging.getLogger(__name__)

COUPLED = 'coupled'
_COUPLING_EXPONENT = 0.4


def coupled_z(h):
    """Return the point of the upper unit semicircle with ``theta = h**(2/5)``."""
    theta = h ** _COUPLING_EXPONENT
    return complex(math.sqrt(max(0.0, 1.0 - theta * theta)), theta)


def _resolve_z(z_rule, h):
    if isinstance(z_rule, str):
        if z_rule != COUPLED:
            raise DomainError(f'Unknown z rule "{z_rule}"; use a complex number or "{COUPLED}"')
        return coupled_z(h)
    z = complex(z_rule)
    if not math.isclose(abs(z), 1.0, rel_tol=1e-9):
        raise DomainError(f'z must lie on the unit circle, got |z| = {abs(z)}')
    return z


def _glancing_edge(medium, z):
    return 2.0 * max(1.0, abs(z) * medium.ntilde0)


def _is_unit_medium(medium):
    return medium.c.is_identically_one and medium.n.is_identically_one


def _mode_error(medium, z, h, ell, tol):
    """
    Return the errors of the basic and the improved symbol for one mode, and ``nu``.

    :raises ComputationError: if the mode cannot be integrated or ``v(1) = 0``
    """
    lam = lambda_from_hz(h, z)
    trace = integrate_mode(ModeProblem(medium.c, medium.n, medium.d, ell, lam), tol)
    nu = dtn_eigenvalue(trace, h)
    xi = h * ell
    basic = rho(xi, BoundarySymbolContext(z, medium.ntilde0))
    improved = basic
    if ell > 0:
        improved = basic + h * (1.0 - eta(xi, _glancing_edge(medium, z))) * q_symbol(xi)
    return abs(nu - basic), abs(nu - improved), nu


def _sweep_point(h, medium, z_rule, xi_fixed, with_q, tol):
    z = _resolve_z(z_rule, h)
    ell = int(round(xi_fixed / h))
    theta = spectral_point(lambda_from_hz(h, z)).theta
    try:
        basic, improved, nu = _mode_error(medium, z, h, ell, tol)
    except ComputationError as error:
        log.warning('Skipping h=%g (ell=%d): %s', h, ell, error)
        return h, None, str(error)

    oracle_gap = math.nan
    if _is_unit_medium(medium):
        reference = 1j * h * bessel_ratio(ell, lambda_from_hz(h, z), medium.d)
        oracle_gap = abs(nu - reference)
    error = improved if with_q else basic
    return h, ((h, theta, error), (ell, h * ell, nu.real, nu.imag, oracle_gap)), None


def dtn_parametrix_sweep(medium, z_rule, h_list, xi_fixed, with_q=False, tol=None, jobs=1):
    """
    Tabulate ``|nu_ell - (rho + [with_q] h q)(h ell)|`` for ``h ell`` close to ``xi_fixed``.

    :param itp_lab.profiles.MediumProfile medium: the radial medium
    :param z_rule: a fixed ``z`` on the unit circle or :data:`COUPLED` for
        ``theta = h**(2/5)``
    :param list h_list: the semiclassical parameters
    :param float xi_fixed: the tangential frequency, non-negative
    :param bool with_q: whether to add the order-h boundary symbol
    :param float tol: the integration tolerance; defaults to ``itp_lab_default_tol``
    :param int jobs: the number of worker processes
    :return: points ``(h, theta, error)`` with the columns ``ell, xi, nu_re, nu_im, oracle_gap``;
        ``oracle_gap`` compares with Bessel functions for the unit medium and is NaN otherwise
    :rtype: itp_lab.verify.fitting.SweepResult
    """
    if xi_fixed < 0:
        raise DomainError(f'xi_fixed must be non-negative, got {xi_fixed}')
    tol = tol or get_config().itp_lab_default_tol
    h_list = sorted(h_list, reverse=True)
    label = 'dtn-improved' if with_q else 'dtn-basic'
    log.info('Starting the %s sweep at xi=%g over %d values of h', label, xi_fixed, len(h_list))

    task = functools.partial(
        _sweep_point, medium=medium, z_rule=z_rule, xi_fixed=xi_fixed, with_q=with_q, tol=tol
    )
    points, extra, skipped = [], [], []
    for h, outcome, reason in parallel_map(task, h_list, jobs):
        if outcome is None:
            skipped.append((h, reason))
            continue
        points.append(outcome[0])
        extra.append(outcome[1])

    return sweep_result(
        label,
        points,
        skipped=skipped,
        columns=('ell', 'xi', 'nu_re', 'nu_im', 'oracle_gap'),
        value_name='error',
        extra=extra,
        metrics={'xi_fixed': xi_fixed, 'with_q': with_q, 'z_rule': str(z_rule)},
    )


def _sampled_modes(ell_max, samples):
    ells = np.unique(np.round(np.linspace(0, ell_max, samples)).astype(int))
    weights = np.gradient(ells.astype(float)) if ells.size > 1 else np.ones(1)
    # modes +ell and -ell share one eigenvalue
    weights = weights * np.where(ells == 0, 1.0, 2.0)
    return ells, weights


def _aggregate_task(task, medium, z_rule, tol):
    h, ell = task
    z = _resolve_z(z_rule, h)
    try:
        basic, improved, _ = _mode_error(medium, z, h, ell, tol)
    except ComputationError as error:
        log.warning('Skipping h=%g, ell=%d in the aggregate: %s', h, ell, error)
        return None
    return basic, improved


def dtn_aggregate_sweep(medium, z_rule, h_list, xi_max=4.0, samples=64, tol=None, jobs=1):
    """
    Compare the mode-weighted errors of the basic and the improved parametrix.

    For the test vector ``f_ell = <h ell>**-1`` over ``|h ell| <= xi_max`` the basic error is
    weighted by ``<h ell>**2`` and the improved one by ``<h ell>**-2``; both are divided by the
    H_h^1 norm of ``f``. The modes are subsampled to about ``samples`` degrees with Riemann
    weights.

    :param itp_lab.profiles.MediumProfile medium: the radial medium
    :param z_rule: a fixed ``z`` on the unit circle or :data:`COUPLED`
    :param list h_list: the semiclassical parameters
    :param float xi_max: the largest tangential frequency
    :param int samples: the number of sampled degrees per h
    :param float tol: the integration tolerance
    :param int jobs: the number of worker processes
    :return: the basic and the improved sweeps; ``metrics['ordered']`` of the improved sweep is
        true when it never exceeds the basic one
    :rtype: tuple
    """
    tol = tol or get_config().itp_lab_default_tol
    h_list = sorted(h_list, reverse=True)
    plan = {h: _sampled_modes(int(math.floor(xi_max / h)), samples) for h in h_list}
    tasks = [(h, int(ell)) for h in h_list for ell in plan[h][0]]
    log.info('Starting the aggregate sweep with %d mode integrations', len(tasks))
    outcomes = parallel_map(
        functools.partial(_aggregate_task, medium=medium, z_rule=z_rule, tol=tol), tasks, jobs
    )
    by_task = dict(zip(tasks, outcomes))

    basic_points, improved_points, skipped = [], [], []
    for h in h_list:
        ells, weights = plan[h]
        theta = spectral_point(lambda_from_hz(h, _resolve_z(z_rule, h))).theta
        errors = [by_task[(h, int(ell))] for ell in ells]
        keep = np.array([e is not None for e in errors])
        if not keep.any():
            skipped.append((h, 'every sampled mode failed'))
            continue
        bracket = japanese(h * ells[keep])
        w = weights[keep]
        f_hat = bracket ** -1
        basic = np.array([e[0] for e in errors if e is not None])
        improved = np.array([e[1] for e in errors if e is not None])
        norm = np.sum(w * bracket ** 2 * f_hat ** 2)
        basic_points.append(
            (h, theta, math.sqrt(np.sum(w * bracket ** 2 * basic ** 2 * f_hat ** 2) / norm))
        )
        improved_points.append(
            (h, theta, math.sqrt(np.sum(w * bracket ** -2 * improved ** 2 * f_hat ** 2) / norm))
        )

    ordered = all(i[2] <= b[2] for b, i in zip(basic_points, improved_points))
    if not ordered:
        log.warning('The improved aggregate exceeds the basic one at some h')
    common = {'xi_max': xi_max, 'samples': samples, 'z_rule': str(z_rule)}
    basic = sweep_result(
        'dtn-aggregate-h1',
        basic_points,
        skipped=skipped,
        metrics=common,
        value_name='aggregate_error',
    )
    improved = sweep_result(
        'dtn-aggregate-improved',
        improved_points,
        skipped=skipped,
        metrics=dict(common, ordered=ordered),
        value_name='aggregate_error',
    )
    return basic, improved
