# SPDX-License-Identifier: GPL-3.0-or-later
from dataclasses import dataclass, field
import enum
import logging
import math

import numpy as np

from itp_lab.exceptions import DomainError, ValidationError

log = logging.getLogger(__name__)

# Relative tolerance used when deciding that a boundary product or contrast vanishes
_SIGN_TOL = 1e-12


class CaseTag(str, enum.Enum):
    """The boundary case of a medium pair."""

    ISOTROPIC = 'Isotropic'
    ANISO_NEGATIVE = 'AnisoNegative'
    ANISO_POSITIVE = 'AnisoPositive'
    DEGENERATE = 'Degenerate'


@dataclass(frozen=True)
class Violation:
    """A single rule broken by a profile."""

    index: int
    rule: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    """The outcome of :func:`validate`."""

    violations: tuple = ()

    @property
    def ok(self):
        """Return true when no rule is broken."""
        return not self.violations

    def __str__(self):
        if self.ok:
            return 'ok'
        return '; '.join(f'{v.rule} at breakpoint {v.index}: {v.message}' for v in self.violations)


@dataclass(frozen=True)
class RadialProfile:
    """
    A piecewise-linear radial coefficient on [0, 1].

    The profile is not checked on construction; use :func:`validate` or build a
    :class:`MediumPair`, which validates its members.
    """

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, 'breakpoints', tuple(float(r) for r in self.breakpoints))
        object.__setattr__(self, 'values', tuple(float(v) for v in self.values))

    def eval(self, r):
        """
        Evaluate the interpolant.

        :param r: a radius in [0, 1], or an array of radii
        :return: the value(s), exact at breakpoints
        :raises DomainError: if a radius lies outside [0, 1]
        """
        radii = np.asarray(r, dtype=float)
        if np.any(~np.isfinite(radii)) or np.any(radii < 0.0) or np.any(radii > 1.0):
            raise DomainError(f'The radius must lie in [0, 1], got {r}')
        result = np.interp(radii, self.breakpoints, self.values)
        if result.ndim == 0:
            return float(result)
        return result

    def interp(self, r):
        """Evaluate without the domain check; for the integrators' inner loops."""
        return np.interp(r, self.breakpoints, self.values)

    @property
    def is_identically_one(self):
        """Return true when every breakpoint value equals 1."""
        return all(v == 1.0 for v in self.values)

    @property
    def boundary_value(self):
        """Return the value at r = 1."""
        return self.values[-1]

    @property
    def minimum(self):
        """Return the minimum of the profile, attained at a breakpoint."""
        return min(self.values)


def constant_profile(value):
    """
    Build the constant profile ``value`` on [0, 1].

    :param float value: the constant
    :rtype: RadialProfile
    """
    return RadialProfile((0.0, 1.0), (value, value))


def validate(profile, b0):
    """
    Check a profile against the representation rules and a lower bound.

    :param RadialProfile profile: the profile to check
    :param float b0: the declared lower bound
    :return: the report listing every broken rule
    :rtype: ValidationReport
    """
    violations = []
    rs, vs = profile.breakpoints, profile.values
    if len(rs) != len(vs):
        violations.append(
            Violation(-1, 'length mismatch', f'{len(rs)} breakpoints but {len(vs)} values')
        )
        return ValidationReport(tuple(violations))
    if len(rs) < 2:
        violations.append(Violation(0, 'domain incomplete', 'at least two breakpoints are needed'))
        return ValidationReport(tuple(violations))

    for i, (r, v) in enumerate(zip(rs, vs)):
        if not (math.isfinite(r) and math.isfinite(v)):
            violations.append(Violation(i, 'non-finite', f'breakpoint ({r}, {v}) is not finite'))

    if rs[0] != 0.0:
        violations.append(Violation(0, 'domain incomplete', f'first breakpoint is {rs[0]}, not 0'))
    if rs[-1] != 1.0:
        violations.append(
            Violation(len(rs) - 1, 'domain incomplete', f'last breakpoint is {rs[-1]}, not 1')
        )

    for i in range(1, len(rs)):
        if not rs[i] > rs[i - 1]:
            violations.append(
                Violation(i, 'not increasing', f'breakpoint {rs[i]} follows {rs[i - 1]}')
            )

    for i, v in enumerate(vs):
        if v < b0:
            violations.append(Violation(i, 'below lower bound', f'value {v} is below b0 = {b0}'))

    return ValidationReport(tuple(violations))


def max_index_ratio(c, n):
    """
    Return the supremum of sqrt(n/c) over [0, 1].

    On each piece n/c is a ratio of linear functions with positive denominator, hence monotone,
    so the supremum is attained at a breakpoint of either profile.
    """
    radii = np.union1d(c.breakpoints, n.breakpoints)
    return float(np.sqrt(np.max(n.interp(radii) / c.interp(radii))))


@dataclass(frozen=True)
class MediumProfile:
    """A single medium with coefficients c(r), n(r)."""

    c: RadialProfile
    n: RadialProfile
    d: int = 2
    b0: float = field(default=None)

    def __post_init__(self):
        _check_dimension(self.d)
        b0 = self.b0 if self.b0 is not None else min(self.c.minimum, self.n.minimum)
        object.__setattr__(self, 'b0', float(b0))
        _raise_on_violations({'c': self.c, 'n': self.n}, self.b0)

    @property
    def ntilde0(self):
        """Return the boundary value of n/c."""
        return self.n.boundary_value / self.c.boundary_value


@dataclass(frozen=True)
class BoundaryData:
    """Boundary values of a medium pair and the two reduced indices."""

    c1: float
    n1: float
    c2: float
    n2: float
    ntilde1: float
    ntilde2: float


@dataclass(frozen=True)
class MediumPair:
    """The two media of the transmission problem, in dimension ``d``."""

    c1: RadialProfile
    n1: RadialProfile
    c2: RadialProfile
    n2: RadialProfile
    d: int = 2
    b0: float = field(default=None)

    def __post_init__(self):
        _check_dimension(self.d)
        profiles = {'c1': self.c1, 'n1': self.n1, 'c2': self.c2, 'n2': self.n2}
        b0 = self.b0
        if b0 is None:
            b0 = min(p.minimum for p in profiles.values())
        object.__setattr__(self, 'b0', float(b0))
        _raise_on_violations(profiles, self.b0)

    @property
    def media(self):
        """Return the two media as :class:`MediumProfile` objects."""
        return (
            MediumProfile(self.c1, self.n1, self.d, self.b0),
            MediumProfile(self.c2, self.n2, self.d, self.b0),
        )

    def swapped(self):
        """Return the pair with the two media exchanged."""
        return MediumPair(self.c2, self.n2, self.c1, self.n1, self.d, self.b0)


def _check_dimension(d):
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise ValidationError(f'The dimension must be an integer >= 2, got {d}')


def _raise_on_violations(profiles, b0):
    if not b0 > 0:
        raise ValidationError(f'The lower bound b0 must be positive, got {b0}')
    problems = []
    for name, profile in profiles.items():
        report = validate(profile, b0)
        if not report.ok:
            problems.append(f'{name}: {report}')
    if problems:
        raise ValidationError('Invalid profiles: ' + ' | '.join(problems))


def boundary_data(pair):
    """
    Return the boundary values of the four profiles and the reduced indices n/c.

    :param MediumPair pair: the validated pair
    :rtype: BoundaryData
    """
    c1, n1 = pair.c1.boundary_value, pair.n1.boundary_value
    c2, n2 = pair.c2.boundary_value, pair.n2.boundary_value
    return BoundaryData(c1=c1, n1=n1, c2=c2, n2=n2, ntilde1=n1 / c1, ntilde2=n2 / c2)


def classify(pair):
    """
    Classify the boundary case of a pair.

    :param MediumPair pair: the validated pair
    :return: the case; Degenerate when the defining contrast vanishes
    :rtype: CaseTag
    """
    bd = boundary_data(pair)
    if pair.c1.is_identically_one and pair.c2.is_identically_one:
        if abs(bd.n1 - bd.n2) <= _SIGN_TOL * max(bd.n1, bd.n2):
            return CaseTag.DEGENERATE
        return CaseTag.ISOTROPIC

    dc = bd.c1 - bd.c2
    dcn = bd.c1 * bd.n1 - bd.c2 * bd.n2
    if abs(dc) <= _SIGN_TOL * max(bd.c1, bd.c2) or abs(dcn) <= _SIGN_TOL * max(
        bd.c1 * bd.n1, bd.c2 * bd.n2
    ):
        return CaseTag.DEGENERATE
    if dc * dcn < 0:
        return CaseTag.ANISO_NEGATIVE
    return CaseTag.ANISO_POSITIVE
