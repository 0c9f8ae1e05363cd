# SPDX-License-Identifier: GPL-3.0-or-later
"""Eigenvalue-free regions in the spectral plane and their threshold functions."""
from dataclasses import dataclass
from fractions import Fraction
import logging
import math

import numpy as np

from itp_lab.exceptions import DomainError, UnsupportedCaseError, ValidationError
from itp_lab.profiles import CaseTag
from itp_lab.spectral import Zone

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RegionExponents:
    """The exponents of the free-region inequalities; p3 and p4 only for AnisoNegative."""

    p1: Fraction
    p2: Fraction
    p3: Fraction = None
    p4: Fraction = None


@dataclass(frozen=True)
class RegionSpec:
    """A free region: case, regularity, dimension, constant and exponents."""

    case: CaseTag
    mu: object
    d: int
    C: float
    exponents: RegionExponents
    epsilon: float = 0.1

    def __post_init__(self):
        if not self.C > 2:
            raise ValidationError(f'The region constant C must exceed 2, got {self.C}')
        if not 0 < self.epsilon < 0.5:
            raise ValidationError(f'epsilon must lie in (0, 1/2), got {self.epsilon}')


@dataclass(frozen=True)
class Thresholds:
    """The threshold functions of the three cases at a given h."""

    theta1: float
    theta2: float
    tau3: float


@dataclass(frozen=True)
class ErrorBudget:
    """A remainder envelope and whether its side condition holds."""

    value: float
    admissible: bool


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    return Fraction(str(value))


def _check_mu_d(mu, d):
    if mu < 2:
        raise DomainError(f'mu must be at least 2, got {mu}')
    if d < 2:
        raise DomainError(f'd must be at least 2, got {d}')


def exponents(case, mu, d):
    """
    Return the exact exponents of the free region for a case.

    :param CaseTag case: the boundary case
    :param mu: the interior regularity, an integer (any real >= 2 is accepted)
    :param int d: the dimension
    :rtype: RegionExponents
    :raises UnsupportedCaseError: for the Degenerate case
    """
    _check_mu_d(mu, d)
    mu = _as_fraction(mu)
    d = Fraction(int(d))

    if case in (CaseTag.ISOTROPIC, CaseTag.ANISO_NEGATIVE):
        if mu <= 2 * d - 1:
            p1, p2 = mu / (2 * mu + 2 * d - 1), Fraction(2) / (2 * mu + 2 * d - 1)
        elif mu <= 4 * d:
            p1, p2 = (mu + 2) / (2 * mu + 2 * d + 5), Fraction(2) / (2 * mu + 2 * d + 5)
        else:
            p1, p2 = Fraction(2, 5), Fraction(0)
        if case == CaseTag.ISOTROPIC:
            return RegionExponents(p1, p2)
        return RegionExponents(
            p1, p2, mu / (2 * mu + 2 * d + 2), Fraction(1) / (mu + d + 1)
        )

    if case == CaseTag.ANISO_POSITIVE:
        if mu <= Fraction(4, 3) * (d + 1):
            return RegionExponents(mu / (2 * mu + 2 * d + 2), Fraction(1) / (mu + d + 1))
        return RegionExponents(Fraction(2, 7), Fraction(0))

    raise UnsupportedCaseError(f'No free region is defined for the {case.value} case')


def radial_exponents(case, epsilon=0.1):
    """
    Return the exponents of the radial regions, the limit of :func:`exponents` as mu grows.

    :param CaseTag case: the boundary case
    :param float epsilon: the loss in the real-part inequality of the AnisoNegative case
    :rtype: RegionExponents
    :raises UnsupportedCaseError: for the Degenerate case
    """
    if case == CaseTag.ISOTROPIC:
        return RegionExponents(Fraction(2, 5), Fraction(0))
    if case == CaseTag.ANISO_NEGATIVE:
        return RegionExponents(
            Fraction(2, 5), Fraction(0), Fraction(1, 2) - _as_fraction(epsilon), Fraction(0)
        )
    if case == CaseTag.ANISO_POSITIVE:
        return RegionExponents(Fraction(2, 7), Fraction(0))
    raise UnsupportedCaseError(f'No free region is defined for the {case.value} case')


def region_spec(case, mu, d, C, epsilon=0.1):
    """Build the :class:`RegionSpec` of a case with its exact exponents."""
    return RegionSpec(case, mu, d, C, exponents(case, mu, d), epsilon)


def _envelope(abs_lam, C, p, q):
    # C |lam|^(1-p) (log |lam|)^q
    log_abs = np.log(abs_lam)
    if q == 0:
        return C * abs_lam ** (1.0 - float(p))
    return C * abs_lam ** (1.0 - float(p)) * np.maximum(log_abs, 0.0) ** float(q)


def _member(lam, C, exps, c_re=None):
    lam = np.asarray(lam, dtype=complex)
    abs_lam = np.abs(lam)
    inside = abs_lam >= C
    with np.errstate(divide='ignore', invalid='ignore'):
        inside &= np.abs(lam.imag) >= _envelope(abs_lam, C, exps.p1, exps.p2)
        if exps.p3 is not None:
            c_re = C if c_re is None else c_re
            inside &= lam.real >= _envelope(abs_lam, c_re, exps.p3, exps.p4)
    if inside.ndim == 0:
        return bool(inside)
    return inside


def in_free_region(lam, spec):
    """
    Test membership of the free region described by ``spec``.

    :param lam: the spectral parameter, scalar or array
    :param RegionSpec spec: the region
    :return: true when ``|lam| >= C`` and all the case's inequalities hold
    """
    return _member(lam, spec.C, spec.exponents)


def radial_free_region(lam, case, C, epsilon=0.1, c_eps=None):
    """
    Test membership of the radial free region of a case.

    :param lam: the spectral parameter, scalar or array
    :param CaseTag case: the boundary case
    :param float C: the region constant
    :param float epsilon: the loss in the real-part exponent (AnisoNegative only)
    :param float c_eps: the constant of the real-part inequality; defaults to ``C``
    :raises UnsupportedCaseError: for the Degenerate case
    """
    return _member(lam, C, radial_exponents(case, epsilon), c_eps)


def boundary_curve(spec, abs_range, n):
    """
    Sample the curve ``|Im lam| = C |lam|^(1-p1) (log |lam|)^p2``.

    :param RegionSpec spec: the region
    :param tuple abs_range: the interval ``(a, b)`` of ``|lam|`` with ``a >= C``
    :param int n: the number of samples, at least 2
    :return: rows ``(abs_lambda, re_lambda, im_lambda_plus, im_lambda_minus)``; ``re_lambda`` is
        NaN where the curve leaves the circle of radius ``abs_lambda``
    :rtype: list
    :raises DomainError: if ``a < C`` or ``n < 2``
    """
    a, b = abs_range
    if a < spec.C:
        raise DomainError(f'The curve starts at |lambda| = {a}, below C = {spec.C}')
    if b < a:
        raise DomainError(f'The range [{a}, {b}] is empty')
    if n < 2:
        raise DomainError(f'At least two samples are needed, got {n}')

    abs_values = np.linspace(a, b, n)
    im_values = _envelope(abs_values, spec.C, spec.exponents.p1, spec.exponents.p2)
    rows = []
    for s, im in zip(abs_values, im_values):
        re = math.sqrt(s * s - im * im) if im <= s else math.nan
        rows.append((float(s), re, float(im), -float(im)))
    return rows


def _theta_core(h, mu):
    # h^(mu/2) log(1/h)
    return h ** (mu / 2.0) * math.log(1.0 / h)


def _check_h(h):
    if not 0 < h < 1:
        raise DomainError(f'h must lie in (0, 1), got {h}')


def thresholds(h, mu, d):
    """
    Return the threshold functions theta1, theta2, tau3 at ``h``.

    :param float h: the semiclassical parameter in (0, 1)
    :param mu: the interior regularity
    :param int d: the dimension
    :rtype: Thresholds
    :raises DomainError: if ``h`` is outside (0, 1)
    """
    _check_h(h)
    _check_mu_d(mu, d)
    mu = float(mu)
    core = _theta_core(h, mu)

    if mu <= 2 * d - 1:
        theta1 = core ** (1.0 / (d + mu - 0.5))
    elif mu <= 4 * d:
        theta1 = (h * core) ** (1.0 / (d + mu + 2.5))
    else:
        theta1 = h ** 0.4

    if mu <= 4.0 * (d + 1) / 3.0:
        theta2 = core ** (1.0 / (d + mu + 1))
    else:
        theta2 = h ** (2.0 / 7.0)

    tau3 = core ** (1.0 / (d + mu + 1))
    return Thresholds(theta1=theta1, theta2=theta2, tau3=tau3)


def error_budget(h, theta, mu, d, case):
    """
    Evaluate the remainder envelope whose smallness defines the threshold of a case.

    For AnisoNegative in the negative half plane ``theta`` is read as tau.

    :param float h: the semiclassical parameter in (0, 1)
    :param float theta: the distance parameter theta (or tau)
    :param mu: the interior regularity
    :param int d: the dimension
    :param CaseTag case: ISOTROPIC uses the theta1 envelope, ANISO_POSITIVE the theta2 envelope
        and ANISO_NEGATIVE the tau3 envelope
    :rtype: ErrorBudget
    """
    _check_h(h)
    if not theta > 0:
        raise DomainError(f'theta must be positive, got {theta}')
    mu = float(mu)
    core = _theta_core(h, mu)

    if case == CaseTag.ISOTROPIC:
        value = h * theta ** -2.5 * (1 + core * theta ** (-d - mu)) + core * theta ** (
            0.5 - d - mu
        )
        return ErrorBudget(value, core * theta ** (0.5 - d - mu) <= 1)
    if case == CaseTag.ANISO_POSITIVE:
        value = h * theta ** -3.5 + core * theta ** (-d - mu - 1)
        return ErrorBudget(value, core * theta ** (-d - mu) <= 1)
    if case == CaseTag.ANISO_NEGATIVE:
        value = h * theta ** -2 + core * theta ** (-d - mu - 1)
        return ErrorBudget(value, theta >= h ** 0.5 and core * theta ** (-d - mu) <= 1)
    raise UnsupportedCaseError(f'No error budget is defined for the {case.value} case')


def in_theta_free_region(point, case, mu, d, K=1.0):
    """
    Test the normalized form of the free region at a spectral point.

    :param itp_lab.spectral.SpectralPoint point: the spectral point, with ``h < 1``
    :param CaseTag case: the boundary case
    :param mu: the interior regularity
    :param int d: the dimension
    :param float K: the multiple of the threshold required
    :rtype: bool
    """
    limits = thresholds(point.h, mu, d)
    if case == CaseTag.ISOTROPIC:
        return point.zone == Zone.PLUS and point.theta >= K * limits.theta1
    if case == CaseTag.ANISO_POSITIVE:
        return point.zone == Zone.PLUS and point.theta >= K * limits.theta2
    if case == CaseTag.ANISO_NEGATIVE:
        if point.zone == Zone.PLUS:
            return point.theta >= K * limits.theta1
        return point.tau >= K * limits.tau3
    raise UnsupportedCaseError(f'No free region is defined for the {case.value} case')
