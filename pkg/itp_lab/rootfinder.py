# SPDX-License-Identifier: GPL-3.0-or-later
"""Zeros of analytic functions in rectangles by the argument principle."""
from dataclasses import dataclass, field, replace
import functools
import logging
import math

import numpy as np

from itp_lab.config import get_config
from itp_lab.exceptions import (
    ComputationError,
    ContourProximityError,
    UnsupportedCaseError,
    ValidationError,
)
from itp_lab.pool import parallel_map
from itp_lab.profiles import CaseTag, classify, max_index_ratio
from itp_lab.radial import itp_characteristic

log = logging.getLogger(__name__)

# Off-centre split fractions, tried in turn when a split line passes too close to a zero
_SPLIT_FRACTIONS = (0.4871, 0.5361, 0.4519, 0.5183)
_MAX_ARG_STEP = math.pi / 2
_PROXIMITY = 1e-12
_JITTER = 0.017
_JITTER_ATTEMPTS = 3
_MAX_SAMPLES = 1 << 16
_NEWTON_STEPS = 60


@dataclass(frozen=True)
class SearchBox:
    """A closed rectangle of the complex plane."""

    re_range: tuple
    im_range: tuple
    min_size: float = 1e-6

    def __post_init__(self):
        (a, b), (c, e) = self.re_range, self.im_range
        if not (a < b and c < e):
            raise ValidationError(f'The box {self.re_range} x {self.im_range} is empty')
        if not self.min_size > 0:
            raise ValidationError(f'min_size must be positive, got {self.min_size}')
        object.__setattr__(self, 're_range', (float(a), float(b)))
        object.__setattr__(self, 'im_range', (float(c), float(e)))

    @property
    def corners(self):
        """Return the corners in counter-clockwise order from the lower left."""
        (a, b), (c, e) = self.re_range, self.im_range
        return (complex(a, c), complex(b, c), complex(b, e), complex(a, e))

    @property
    def center(self):
        """Return the centre of the box."""
        return complex(sum(self.re_range) / 2, sum(self.im_range) / 2)

    @property
    def size(self):
        """Return the longer side."""
        return max(self.re_range[1] - self.re_range[0], self.im_range[1] - self.im_range[0])

    def contains(self, point, margin=0.0):
        """Return true when ``point`` lies in the box grown by ``margin`` on every side."""
        (a, b), (c, e) = self.re_range, self.im_range
        return a - margin <= point.real <= b + margin and c - margin <= point.imag <= e + margin

    def expanded(self, fraction):
        """Return the box grown by ``fraction`` of its sides."""
        (a, b), (c, e) = self.re_range, self.im_range
        dx, dy = (b - a) * fraction / 2, (e - c) * fraction / 2
        return replace(self, re_range=(a - dx, b + dx), im_range=(c - dy, e + dy))

    def split(self, fraction):
        """Return the four sub-boxes cut at ``fraction`` of each side."""
        (a, b), (c, e) = self.re_range, self.im_range
        xm, ym = a + (b - a) * fraction, c + (e - c) * fraction
        return [
            replace(self, re_range=(a, xm), im_range=(c, ym)),
            replace(self, re_range=(xm, b), im_range=(c, ym)),
            replace(self, re_range=(xm, b), im_range=(ym, e)),
            replace(self, re_range=(a, xm), im_range=(ym, e)),
        ]


@dataclass(frozen=True)
class Root:
    """A zero of a mode's characteristic function."""

    lam: complex
    ell: int
    residual: float
    winding: int
    ells: tuple = field(default=())


@dataclass(frozen=True)
class SearchResult:
    """The zeros found in a box, with the modes whose search failed."""

    roots: tuple
    incomplete: bool = False
    failures: tuple = ()


class _Sampler(object):
    """Memoized vectorized evaluation of ``f``."""

    __slots__ = ('f', 'values', 'calls')

    def __init__(self, f):
        self.f = f
        self.values = {}
        self.calls = 0

    def __call__(self, points):
        points = np.asarray(points, dtype=complex)
        missing = [p for p in dict.fromkeys(points.tolist()) if p not in self.values]
        if missing:
            self.calls += 1
            computed = np.asarray(self.f(np.array(missing, dtype=complex)), dtype=complex)
            computed = np.broadcast_to(computed, (len(missing),))
            self.values.update(zip(missing, computed.tolist()))
        return np.array([self.values[p] for p in points.tolist()], dtype=complex)


def _edge_points(start, end, count):
    # sample from the lexicographically smaller end so shared edges reuse the same points
    forward = (start.real, start.imag) <= (end.real, end.imag)
    a, b = (start, end) if forward else (end, start)
    points = a + (b - a) * np.linspace(0.0, 1.0, count + 1)
    return points if forward else points[::-1]


def _contour(box, samples_per_unit):
    corners = box.corners
    pieces = []
    for start, end in zip(corners, corners[1:] + corners[:1]):
        count = max(8, int(math.ceil(abs(end - start) * samples_per_unit)))
        pieces.append(_edge_points(start, end, count)[:-1])
    pieces.append(np.array([corners[0]]))
    return np.concatenate(pieces)


def _argument_change(sampler, box, samples_per_unit, quad_tol):
    """Return the winding of ``f`` around ``box`` and the median modulus on the contour."""
    points = _contour(box, samples_per_unit)
    values = sampler(points)
    refinements = 0
    while True:
        if not np.all(np.isfinite(values)):
            raise ComputationError(f'The function is not finite on the contour of {box}')
        steps = np.angle(values[1:] / values[:-1]) if np.all(values != 0) else None
        modulus = np.abs(values)
        median = float(np.median(modulus))
        threshold = _PROXIMITY * median
        if steps is None or modulus.min() < threshold:
            raise ContourProximityError(
                f'A zero lies on or near the contour of {box}', float(modulus.min()), threshold
            )
        coarse = np.abs(steps) > _MAX_ARG_STEP
        total = float(np.sum(steps)) / (2 * math.pi)
        winding = int(round(total))
        if not coarse.any() and abs(total - winding) <= quad_tol:
            return winding, median

        if len(points) > _MAX_SAMPLES:
            raise ContourProximityError(
                f'The argument of f around {box} does not resolve', float(modulus.min()), threshold
            )
        if not coarse.any():
            # the increments are small yet the total is not an integer: refine everywhere
            coarse[:] = True
        refinements += 1
        mids = (points[:-1][coarse] + points[1:][coarse]) / 2
        new_points = np.insert(points, np.nonzero(coarse)[0] + 1, mids)
        new_values = np.insert(values, np.nonzero(coarse)[0] + 1, sampler(mids))
        points, values = new_points, new_values
        log.debug('Refined the contour of %s to %d points', box, len(points))


def winding_number(f, box, quad_tol=0.25, samples_per_unit=8.0):
    """
    Count the zeros of ``f`` inside ``box`` with multiplicity.

    The argument of ``f`` is tracked along the boundary, bisecting every segment whose increment
    exceeds a quarter turn, until the total turns round to an integer within ``quad_tol``.

    :param callable f: a vectorized analytic function
    :param SearchBox box: the rectangle
    :param float quad_tol: the distance to the nearest integer accepted for the total
    :param float samples_per_unit: the initial sampling density of the contour
    :rtype: int
    :raises ContourProximityError: if the minimum of ``|f|`` on the contour is below
        ``1e-12`` times its median
    """
    sampler = f if isinstance(f, _Sampler) else _Sampler(f)
    winding, _ = _argument_change(sampler, box, samples_per_unit, quad_tol)
    return winding


def _newton(sampler, start, multiplicity, scale, tol):
    """Damped Newton with a central difference derivative; returns the iterate and |f|."""
    x = complex(start)
    fx = complex(sampler([x])[0])
    for _ in range(_NEWTON_STEPS):
        # stop two decades below the acceptance residual
        if abs(fx) <= 1e-2 * tol * scale:
            break
        delta = 1e-6 * max(1.0, abs(x))
        fp, fm = sampler([x + delta, x - delta])
        derivative = (fp - fm) / (2 * delta)
        if derivative == 0:
            break
        step = multiplicity * fx / derivative
        for _ in range(12):
            candidate = x - step
            fc = complex(sampler([candidate])[0])
            if abs(fc) < abs(fx):
                break
            step /= 2
        else:
            break
        x, fx = candidate, fc
        log.debug('Newton step to %s with |f| = %.3e', x, abs(fx))
        if abs(step) <= 1e-15 * max(1.0, abs(x)):
            break
    return x, abs(fx)


def _search(sampler, box, tol, budget, samples_per_unit, ell):
    roots = []
    stack = [(box, None)]
    visits = 0
    incomplete = False
    while stack:
        current, known = stack.pop()
        visits += 1
        if visits > budget:
            log.warning('The root search for ell=%d ran out of budget at %s', ell, current)
            incomplete = True
            break
        if known is None:
            known = _argument_change(sampler, current, samples_per_unit, 0.25)
        winding, median = known
        if winding <= 0:
            continue

        small = current.size <= current.min_size
        if winding == 1 or small:
            lam, residual = _newton(sampler, current.center, winding, median, tol)
            if current.contains(lam, margin=current.size * 1e-3) and residual <= tol * median:
                roots.append(
                    Root(lam=lam, ell=ell, residual=residual, winding=winding, ells=(ell,))
                )
                continue
            if small:
                log.warning('Reporting the centre of %s with winding %d', current, winding)
                roots.append(
                    Root(
                        lam=current.center,
                        ell=ell,
                        residual=float(abs(sampler([current.center])[0])),
                        winding=winding,
                        ells=(ell,),
                    )
                )
                continue

        children = None
        for fraction in _SPLIT_FRACTIONS:
            try:
                candidate = current.split(fraction)
                counted = [
                    _argument_change(sampler, child, samples_per_unit, 0.25) for child in candidate
                ]
            except ContourProximityError:
                log.debug('Split of %s at %.4f touches a zero; trying another', current, fraction)
                continue
            children = list(zip(candidate, counted))
            break
        if children is None:
            raise ContourProximityError(
                f'Every split of {current} passes through a zero', 0.0, 0.0
            )
        # depth first, lower-left child first
        stack.extend(reversed(children))

    return roots, incomplete


def find_roots(f, box, tol, budget=None, samples_per_unit=8.0, ell=0):
    """
    Locate the zeros of ``f`` in ``box``.

    The box is quadrisected until each piece holds at most one zero or reaches ``box.min_size``;
    simple zeros are refined by damped Newton to ``|f| <= tol`` relative to the contour median.
    If the outer contour passes too close to a zero the box is grown by 1.7 % up to three times.

    :param callable f: a vectorized analytic function
    :param SearchBox box: the search window
    :param float tol: the relative residual target
    :param int budget: the number of boxes that may be visited
    :param float samples_per_unit: the initial sampling density of contours
    :param int ell: the mode label stored in the roots
    :rtype: SearchResult
    :raises ContourProximityError: if the box cannot be cleared of zeros on its contour
    """
    budget = budget or get_config().itp_lab_root_budget
    sampler = _Sampler(f)
    current = box
    for attempt in range(_JITTER_ATTEMPTS + 1):
        try:
            _argument_change(sampler, current, samples_per_unit, 0.25)
            break
        except ContourProximityError:
            if attempt == _JITTER_ATTEMPTS:
                raise
            log.warning('A zero lies on the contour of %s; growing the box', current)
            current = current.expanded(_JITTER)

    roots, incomplete = _search(sampler, current, tol, budget, samples_per_unit, ell)
    log.debug('Evaluated f in %d batches for ell=%d', sampler.calls, ell)
    roots.sort(key=lambda root: (root.lam.real, root.lam.imag))
    return SearchResult(roots=tuple(roots), incomplete=incomplete)


def default_ell_max(pair, box):
    """
    Return the number of modes needed to cover ``box``.

    :param itp_lab.profiles.MediumPair pair: the two media
    :param SearchBox box: the search window
    :rtype: int
    """
    lam_max = max(abs(corner) for corner in box.corners)
    ratio = max(max_index_ratio(pair.c1, pair.n1), max_index_ratio(pair.c2, pair.n2))
    return int(math.ceil(1.5 * lam_max * ratio)) + 10


def _mode_roots(ell, pair, box, tol, samples_per_unit):
    f = functools.partial(itp_characteristic, ell=ell, pair=pair, tol=tol)
    try:
        result = find_roots(f, box, tol, samples_per_unit=samples_per_unit, ell=ell)
    except ComputationError as error:
        log.warning('The search for ell=%d failed: %s', ell, error)
        return ell, (), True, str(error)
    return ell, result.roots, result.incomplete, None


def _merge(roots, tol):
    merged = []
    for root in roots:
        for i, kept in enumerate(merged):
            if abs(kept.lam - root.lam) <= 10 * tol * max(1.0, abs(kept.lam)):
                merged[i] = replace(kept, ells=kept.ells + root.ells)
                break
        else:
            merged.append(root)
    return merged


def itp_spectrum(pair, box, ell_max=None, tol=1e-10, jobs=1):
    """
    Compute the transmission eigenvalues of a pair in a box.

    :param itp_lab.profiles.MediumPair pair: the two media
    :param SearchBox box: the search window
    :param int ell_max: the largest mode degree; see :func:`default_ell_max`
    :param float tol: the integration tolerance and the relative residual of refined zeros
    :param int jobs: the number of worker processes
    :return: the merged zeros in the order of their real parts, with per-mode failures
    :rtype: SearchResult
    :raises UnsupportedCaseError: if the pair is Degenerate
    """
    case = classify(pair)
    if case == CaseTag.DEGENERATE:
        raise UnsupportedCaseError('The pair is Degenerate; its determinant vanishes identically')
    if ell_max is None:
        ell_max = default_ell_max(pair, box)
    if ell_max < 0:
        raise ValidationError(f'ell_max must be non-negative, got {ell_max}')

    ratio = max(max_index_ratio(pair.c1, pair.n1), max_index_ratio(pair.c2, pair.n2))
    samples_per_unit = max(8.0, 4.0 * ratio)
    log.info('Searching %s over ell = 0..%d (%s)', box, ell_max, case.value)
    task = functools.partial(
        _mode_roots, pair=pair, box=box, tol=tol, samples_per_unit=samples_per_unit
    )
    outcomes = parallel_map(task, range(ell_max + 1), jobs)

    found, failures, incomplete = [], [], False
    for ell, roots, mode_incomplete, error in outcomes:
        found.extend(roots)
        incomplete = incomplete or mode_incomplete
        if error:
            failures.append((ell, error))

    roots = _merge(sorted(found, key=lambda root: (root.ell, root.lam.real, root.lam.imag)), tol)
    roots.sort(key=lambda root: (root.lam.real, root.lam.imag, root.ell))
    log.info('Found %d eigenvalues in %s', len(roots), box)
    return SearchResult(roots=tuple(roots), incomplete=incomplete, failures=tuple(failures))
