# SPDX-License-Identifier: GPL-3.0-or-later
"""Checks that computed eigenvalues avoid the free region of their case."""
from dataclasses import dataclass
import logging
import math

import numpy as np

from itp_lab.regions import RegionSpec, exponents, in_free_region, radial_exponents

log = logging.getLogger(__name__)

C_GRID = tuple(round(0.1 * i, 1) for i in range(21, 201))


@dataclass(frozen=True)
class ConsistencyReport:
    """
    The outcome of :func:`region_consistency`.

    ``calibrated_C`` is None when no constant of the grid clears the spectrum; ``vacuous`` marks
    an empty spectrum.
    """

    violations: tuple
    calibrated_C: float
    case: object
    checked_C: float
    roots: int
    vacuous: bool = False

    @property
    def calibration_failed(self):
        """Return true when no grid constant clears the spectrum."""
        return self.calibrated_C is None

    def summary(self):
        """Return the JSON-ready digest of the report."""
        return {
            'case': self.case.value,
            'calibrated_C': 'calibration failed' if self.calibration_failed else self.calibrated_C,
            'checked_C': self.checked_C,
            'roots': self.roots,
            'vacuous': self.vacuous,
            'violations': [
                {'lambda_re': v[0].lam.real, 'lambda_im': v[0].lam.imag, 'ell': v[0].ell}
                for v in self.violations
            ],
        }


def _spec(case, C, mu, d, epsilon):
    if mu is None or math.isinf(mu):
        exps = radial_exponents(case, epsilon)
        mu = math.inf
    else:
        exps = exponents(case, mu, d)
    return RegionSpec(case, mu, d, C, exps, epsilon)


def _violations(roots, spec, box):
    inside = [root for root in roots if box.contains(root.lam)]
    if not inside:
        return ()
    member = np.atleast_1d(in_free_region(np.array([root.lam for root in inside]), spec))
    return tuple((root, spec) for root, hit in zip(inside, member) if hit)


def region_consistency(spectrum, case, search_box, C=None, mu=None, d=2, epsilon=0.1):
    """
    Calibrate the region constant against a computed spectrum.

    ``calibrated_C`` is the smallest C of :data:`C_GRID` for which no root in the box lies in the
    free region. The violations are listed for ``C`` when it is given, else for the calibrated
    constant.

    :param spectrum: the roots, an iterable of :class:`itp_lab.rootfinder.Root`
    :param itp_lab.profiles.CaseTag case: the boundary case
    :param itp_lab.rootfinder.SearchBox search_box: the box the spectrum was computed on
    :param float C: the constant to check, greater than 2
    :param mu: the interior regularity; None uses the radial exponents
    :param int d: the dimension
    :param float epsilon: the real-part loss of the AnisoNegative case
    :rtype: ConsistencyReport
    :raises UnsupportedCaseError: for the Degenerate case
    """
    roots = tuple(spectrum)
    if not roots:
        log.info('The spectrum is empty; the region check is vacuous')
        checked = C if C is not None else C_GRID[0]
        return ConsistencyReport((), C_GRID[0], case, checked, 0, vacuous=True)

    calibrated = None
    for candidate in C_GRID:
        if not _violations(roots, _spec(case, candidate, mu, d, epsilon), search_box):
            calibrated = candidate
            break
    if calibrated is None:
        log.warning('No constant up to %g clears the %d roots', C_GRID[-1], len(roots))

    checked = C if C is not None else calibrated
    violations = ()
    if checked is not None:
        violations = _violations(roots, _spec(case, checked, mu, d, epsilon), search_box)
    log.info(
        'Calibrated C=%s for %d roots; %d violations at C=%s',
        calibrated,
        len(roots),
        len(violations),
        checked,
    )
    return ConsistencyReport(violations, calibrated, case, checked, len(roots))
