# SPDX-License-Identifier: GPL-3.0-or-later
"""Log-log slope fits and the container shared by all sweeps."""
from dataclasses import dataclass, field
import logging
import math

import numpy as np

from itp_lab.exceptions import DomainError

log = logging.getLogger(__name__)

_MIN_POINTS = 4
# Values at or below this level count as exact zeros
EXACT_LEVEL = 1e-12


@dataclass(frozen=True)
class SlopeFit:
    """The least-squares line through ``(log x, log y)``."""

    slope: float
    r2: float
    intercept: float = 0.0

    @property
    def prefactor(self):
        """Return ``exp(intercept)``, the constant in ``y = K x**slope``."""
        return math.exp(self.intercept)


def fit_slope(points):
    """
    Fit ``log y = slope log x + b`` by least squares.

    :param list points: pairs ``(x, y)`` with positive entries, at least four
    :return: the slope, the coefficient of determination and the intercept; ``r2`` is 1 when the
        data have no spread
    :rtype: SlopeFit
    :raises DomainError: if there are fewer than four points or an entry is not positive
    """
    if len(points) < _MIN_POINTS:
        raise DomainError(f'At least {_MIN_POINTS} points are needed for a fit, got {len(points)}')
    data = np.asarray(points, dtype=float)
    if not np.all(np.isfinite(data)) or np.any(data <= 0):
        raise DomainError('Slope fits need finite positive data')

    x, y = np.log(data[:, 0]), np.log(data[:, 1])
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(residual ** 2)) / ss_tot
    return SlopeFit(slope=float(slope), r2=r2, intercept=float(intercept))


@dataclass(frozen=True)
class SweepResult:
    """
    The tabulated points of one experiment.

    ``points`` holds ``(h, theta, value)`` rows; ``skipped`` holds ``(h, reason)`` rows. When every
    value is at or below :data:`EXACT_LEVEL` no fit is attempted and ``exact`` is true.
    """

    label: str
    points: tuple
    fitted_slope: float = math.nan
    fit_r2: float = math.nan
    prefactor: float = math.nan
    exact: bool = False
    skipped: tuple = ()
    columns: tuple = ()
    extra: tuple = ()
    metrics: dict = field(default_factory=dict)
    x_name: str = 'h'
    value_name: str = 'value'

    @property
    def values(self):
        """Return the measured values in point order."""
        return [point[2] for point in self.points]

    def rows(self):
        """Return the CSV rows: ``h, theta, value, fitted_slope`` and the extra columns."""
        rows = []
        for i, point in enumerate(self.points):
            extra = list(self.extra[i]) if self.extra else []
            head = [float(point[0]), float(point[1]), float(point[2]), self.fitted_slope]
            rows.append(head + extra)
        return rows

    def header(self):
        """Return the CSV header."""
        return [self.x_name, 'theta', self.value_name, 'fitted_slope'] + list(self.columns)

    def summary(self):
        """Return the JSON-ready digest of the sweep."""
        return {
            'label': self.label,
            'slope': None if math.isnan(self.fitted_slope) else self.fitted_slope,
            'r2': None if math.isnan(self.fit_r2) else self.fit_r2,
            'prefactor': None if math.isnan(self.prefactor) else self.prefactor,
            'exact': self.exact,
            'points': len(self.points),
            'skipped': [[float(h), reason] for h, reason in self.skipped],
            'metrics': dict(self.metrics),
        }


def sweep_result(
    label,
    points,
    skipped=(),
    columns=(),
    extra=(),
    metrics=None,
    x_index=0,
    x_name='h',
    value_name='value',
):
    """
    Build a :class:`SweepResult` and fit the slope of the value against column ``x_index``.

    :param str label: the name of the sweep
    :param list points: rows ``(h, theta, value)``
    :param list skipped: rows ``(h, reason)``
    :param tuple columns: names of the extra CSV columns
    :param list extra: one tuple of extra values per point
    :param dict metrics: extra summary values
    :param int x_index: 0 fits against the first column, 1 against theta
    :param str x_name: the name of the first column
    :param str value_name: the name of the value column
    :rtype: SweepResult
    """
    points = tuple(tuple(point) for point in points)
    values = [point[2] for point in points]
    common = dict(
        label=label,
        points=points,
        skipped=tuple(skipped),
        columns=tuple(columns),
        extra=tuple(tuple(e) for e in extra),
        metrics=dict(metrics or {}),
        x_name=x_name,
        value_name=value_name,
    )
    if values and max(values) <= EXACT_LEVEL:
        log.info('The %s sweep is exact; no fit', label)
        return SweepResult(exact=True, **common)

    positive = [(point[x_index], point[2]) for point in points if point[2] > 0]
    if len(positive) < _MIN_POINTS:
        log.warning('The %s sweep has %d usable points; no fit', label, len(positive))
        return SweepResult(**common)

    fit = fit_slope(positive)
    log.info('The %s sweep fits slope %.3f (r2 %.4f)', label, fit.slope, fit.r2)
    return SweepResult(
        fitted_slope=fit.slope, fit_r2=fit.r2, prefactor=fit.prefactor, **common
    )
