# SPDX-License-Identifier: GPL-3.0-or-later
"""Scaling of the circle symbol calculus: compositions, mollification and L2 bounds."""
import functools
import logging
import math

import numpy as np

from itp_lab.exceptions import DomainError
from itp_lab.pool import parallel_map
from itp_lab.psido import (
    composition_remainder,
    grid_size,
    japanese,
    mollify,
    op_norm,
    quantize,
    sample_symbol,
)
from itp_lab.verify.fitting import sweep_result

log = logging.getLogger(__name__)

# Symbols are sampled for |xi| <= _XI_CUTOFF, where exp(-xi**2) is below 1.3e-4
_XI_CUTOFF = 3.0


def _gauss(xi):
    return np.exp(-np.square(xi))


def _smooth_left(x, xi):
    return _gauss(xi) * (1.0 + 0.5 * np.cos(x))


def _smooth_right(x, xi):
    return (1.0 + 0.5 * np.sin(x)) * np.exp(-0.5 * np.square(xi))


def _multiplier_left(x, xi):
    return _gauss(xi) + 0 * x


def _multiplier_right(x, xi):
    return 1.0 / (1.0 + np.square(xi)) + 0 * x


def _rough(x, xi):
    # twice continuously differentiable in x, the third derivative jumps
    return 1.0 + 0.5 * np.abs(np.sin(x)) ** 3 + 0 * xi


def _x_only(x, xi):
    return 1.0 + 0.5 * np.cos(x) + 0 * xi


# (left, right) pairs; 'reversed' puts the x-dependence on the left, where left quantization
# composes exactly
FAMILIES = {
    'smooth': (_smooth_left, _smooth_right),
    'multiplier': (_multiplier_left, _multiplier_right),
    'rough': (_multiplier_left, _rough),
    'reversed': (_x_only, _multiplier_left),
}
DEFAULT_FAMILIES = ('smooth', 'multiplier', 'rough')


def mode_cutoff(h):
    """Return the number of modes ``K = ceil(3 / h)`` that resolve ``|xi| <= 3``."""
    return int(math.ceil(_XI_CUTOFF / h))


def _composition_point(h, family, k):
    left, right = FAMILIES[family]
    k_max = mode_cutoff(h)
    n_x = grid_size(k_max)
    a1 = sample_symbol(left, h, k_max, n_x)
    a2 = sample_symbol(right, h, k_max, n_x)
    return h, composition_remainder(a1, a2, k)


def composition_sweep(family, h_list, k=0.0, jobs=1):
    """
    Tabulate ``||Op(a1) Op(a2) - Op(a1 a2)||`` from H_h^k to L2 for a family of symbol pairs.

    :param str family: one of :data:`FAMILIES`
    :param list h_list: the semiclassical parameters
    :param float k: the order of the source space
    :param int jobs: the number of worker processes
    :rtype: itp_lab.verify.fitting.SweepResult
    :raises DomainError: for an unknown family
    """
    if family not in FAMILIES:
        raise DomainError(f'Unknown symbol family "{family}"; choose from {sorted(FAMILIES)}')
    h_list = sorted(h_list, reverse=True)
    log.info('Starting the %s composition sweep over %d values of h', family, len(h_list))
    outcomes = parallel_map(
        functools.partial(_composition_point, family=family, k=k), h_list, jobs
    )
    points = [(h, math.nan, remainder) for h, remainder in outcomes]
    return sweep_result(
        f'composition-{family}',
        points,
        metrics={'family': family, 'k': k},
        value_name='remainder_norm',
    )


def _smooth_profile(x, xi):
    return np.sin(x) * _gauss(xi)


def _c2_profile(x, xi):
    return np.abs(np.sin(x)) ** 3 * _gauss(xi)


MOLLIFICATION_SYMBOLS = {'smooth': _smooth_profile, 'rough': _c2_profile}


def mollification_sweep(t_list, h=2.0 ** -4, symbol='rough'):
    """
    Tabulate ``sup |a - a_t|`` as the mollifier width ``t`` shrinks.

    The ``rough`` symbol ``|sin x|**3 exp(-xi**2)`` is twice continuously differentiable in x,
    so the error decays like ``t**2``.

    :param list t_list: widths in (0, 1]
    :param float h: the semiclassical parameter of the grid
    :param str symbol: one of :data:`MOLLIFICATION_SYMBOLS`
    :rtype: itp_lab.verify.fitting.SweepResult
    :raises DomainError: for an unknown symbol
    """
    if symbol not in MOLLIFICATION_SYMBOLS:
        raise DomainError(
            f'Unknown symbol "{symbol}"; choose from {sorted(MOLLIFICATION_SYMBOLS)}'
        )
    k_max = mode_cutoff(h)
    a = sample_symbol(MOLLIFICATION_SYMBOLS[symbol], h, k_max)
    points = []
    for t in sorted(t_list, reverse=True):
        error = float(np.max(np.abs(a.values - mollify(a, t).values)))
        log.debug('Mollification error at t=%g: %.6g', t, error)
        points.append((t, math.nan, error))
    return sweep_result(
        f'mollification-{symbol}', points, x_name='t', value_name='sup_error'
    )


def lipschitz_profile(seed, nodes=16):
    """
    Return a random periodic piecewise linear function with values in [0.5, 1.5].

    :param int seed: the seed of the node values
    :param int nodes: the number of equally spaced nodes on the circle
    :rtype: callable
    """
    rng = np.random.default_rng(seed)
    knots = 1.0 + rng.uniform(-0.5, 0.5, nodes)
    grid = 2 * np.pi * np.arange(nodes + 1) / nodes
    closed = np.append(knots, knots[0])

    def profile(x):
        return np.interp(np.mod(x, 2 * np.pi), grid, closed)

    return profile


def _log_bound_point(h, order, k_from, seed):
    profile = lipschitz_profile(seed)
    k_max = mode_cutoff(h)
    a = sample_symbol(lambda x, xi: profile(x) * japanese(xi) ** order, h, k_max)
    return h, op_norm(quantize(a), k_from=k_from)


def log_bound_sweep(h_list, order=-1.0, k_from=-0.5, seed=0, jobs=1):
    """
    Tabulate ``||Op(a)||`` from H_h^k_from to L2 against ``log(1 + 1/h)``.

    The symbol is ``L(x) <xi>**order`` with a random Lipschitz ``L``. ``metrics['spread']`` is the
    largest ratio ``||Op(a)|| / log(1 + 1/h)`` over its median; a spread of at most 10 means the
    norm grows no faster than the logarithm.

    :param list h_list: the semiclassical parameters
    :param float order: the order of the symbol in xi, negative
    :param float k_from: the order of the source space, above ``order``
    :param int seed: the seed of ``L``
    :param int jobs: the number of worker processes
    :rtype: itp_lab.verify.fitting.SweepResult
    :raises DomainError: if ``order`` is not negative or ``k_from <= order``
    """
    if not order < 0 or not k_from > order:
        raise DomainError(f'Need order < 0 and k_from > order, got {order} and {k_from}')
    h_list = sorted(h_list, reverse=True)
    outcomes = parallel_map(
        functools.partial(_log_bound_point, order=order, k_from=k_from, seed=seed), h_list, jobs
    )
    points = [(h, math.nan, norm) for h, norm in outcomes]
    ratios = [norm / math.log(1 + 1 / h) for h, norm in outcomes]
    extra = [(ratio,) for ratio in ratios]
    spread = max(ratios) / float(np.median(ratios)) if ratios else math.nan
    return sweep_result(
        'log-bound',
        points,
        value_name='norm',
        columns=('log_ratio',),
        extra=extra,
        metrics={'spread': spread, 'order': order, 'k_from': k_from},
    )


def _boundedness_point(h):
    k_max = mode_cutoff(h)
    a = sample_symbol(lambda x, xi: _rough(x, xi) * _gauss(xi), h, k_max)
    return h, op_norm(quantize(a)), float(np.max(np.abs(a.values)))


def boundedness_sweep(h_list, jobs=1):
    """
    Compare ``||Op(a)||`` on L2 with ``sup |a|`` for a symbol of limited x-regularity.

    ``metrics['excess_constant']`` is the largest ``(||Op(a)|| - sup |a|) / h**(1/2)``; it
    stays bounded when the norm exceeds the supremum by at most ``K h**(1/2)``.

    :param list h_list: the semiclassical parameters
    :param int jobs: the number of worker processes
    :rtype: itp_lab.verify.fitting.SweepResult
    """
    h_list = sorted(h_list, reverse=True)
    log.info('Starting the boundedness sweep over %d values of h', len(h_list))
    outcomes = parallel_map(_boundedness_point, h_list, jobs)
    points = [(h, math.nan, norm) for h, norm, _ in outcomes]
    extra = [(sup,) for _, _, sup in outcomes]
    excess = max((max(0.0, norm - sup) / math.sqrt(h) for h, norm, sup in outcomes), default=0.0)
    return sweep_result(
        'boundedness',
        points,
        value_name='norm',
        columns=('sup',),
        extra=extra,
        metrics={'excess_constant': excess},
    )
