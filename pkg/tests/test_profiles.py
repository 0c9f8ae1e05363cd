# SPDX-License-Identifier: GPL-3.0-or-later
import numpy as np
import pytest

from itp_lab import profiles
from itp_lab.exceptions import DomainError, ValidationError
from itp_lab.profiles import CaseTag, MediumPair, RadialProfile, constant_profile


@pytest.mark.parametrize(
    'breakpoints, values, r, expected',
    (
        ((0, 1), (4, 4), 0.3, 4.0),
        ((0, 1), (1, 2), 0.5, 1.5),
        ((0, 0.9, 1), (1, 1, 3), 0.95, 2.0),
        ((0, 0.9, 1), (1, 1, 3), 0.9, 1.0),
        ((0, 0.9, 1), (1, 1, 3), 1.0, 3.0),
    ),
)
def test_eval(breakpoints, values, r, expected):
    assert RadialProfile(breakpoints, values).eval(r) == pytest.approx(expected)


def test_eval_array(kink_profile):
    np.testing.assert_allclose(kink_profile.eval([0.0, 0.45, 0.95]), [1.0, 1.0, 2.0])


@pytest.mark.parametrize('r', (-0.1, 1.5, float('nan')))
def test_eval_outside(kink_profile, r):
    with pytest.raises(DomainError, match='The radius must lie in'):
        kink_profile.eval(r)


def test_eval_continuous_and_monotone_on_pieces():
    rng = np.random.default_rng(3)
    for _ in range(20):
        inner = np.sort(rng.uniform(0.01, 0.99, 4))
        breakpoints = np.concatenate([[0.0], inner, [1.0]])
        values = rng.uniform(0.5, 3.0, 6)
        profile = RadialProfile(breakpoints, values)
        slope = np.max(np.abs(np.diff(values)) / np.diff(breakpoints))
        for a, b in zip(breakpoints[:-1], breakpoints[1:]):
            samples = profile.eval(np.linspace(a, b, 50))
            steps = np.diff(samples)
            assert np.all(steps >= -1e-12) or np.all(steps <= 1e-12)
        # no jumps across breakpoints; a kink moves the value by at most 2e-9 slope
        for r in inner:
            gap = abs(profile.eval(r - 1e-9) - profile.eval(r + 1e-9))
            assert gap <= 2e-9 * slope * (1 + 1e-6) + 1e-14


def test_validate_ok():
    report = profiles.validate(constant_profile(1.0), 0.5)
    assert report.ok
    assert str(report) == 'ok'


def test_validate_below_bound():
    report = profiles.validate(RadialProfile((0, 0.5, 1), (1, 0.1, 1)), 0.5)
    assert not report.ok
    assert [(v.index, v.rule) for v in report.violations] == [(1, 'below lower bound')]


def test_validate_domain_incomplete():
    report = profiles.validate(RadialProfile((0, 0.8), (1, 1)), 0.5)
    assert [(v.index, v.rule) for v in report.violations] == [(1, 'domain incomplete')]
    assert 'last breakpoint is 0.8, not 1' in str(report)


def test_validate_several_rules():
    report = profiles.validate(RadialProfile((0.1, 0.5, 0.5, 1), (1, 1, 0.2, 1)), 0.5)
    rules = {v.rule for v in report.violations}
    assert rules == {'domain incomplete', 'not increasing', 'below lower bound'}


def test_validate_length_mismatch():
    report = profiles.validate(RadialProfile((0, 1), (1, 1, 1)), 0.5)
    assert report.violations[0].rule == 'length mismatch'


def test_max_index_ratio(kink_profile):
    assert profiles.max_index_ratio(constant_profile(1.0), kink_profile) == pytest.approx(3 ** 0.5)
    assert profiles.max_index_ratio(constant_profile(4.0), constant_profile(1.0)) == 0.5


def test_medium_profile():
    medium = profiles.MediumProfile(constant_profile(2.0), constant_profile(1.0))
    assert medium.b0 == 1.0
    assert medium.ntilde0 == 0.5


def test_medium_profile_invalid():
    with pytest.raises(ValidationError, match='n: below lower bound'):
        profiles.MediumProfile(constant_profile(1.0), constant_profile(0.2), b0=0.5)


def test_medium_pair_invalid():
    with pytest.raises(ValidationError, match='Invalid profiles: c2: domain incomplete'):
        MediumPair(
            constant_profile(1.0),
            constant_profile(1.0),
            RadialProfile((0, 0.5), (1, 1)),
            constant_profile(1.0),
        )


@pytest.mark.parametrize('d', (1, 2.5))
def test_medium_pair_dimension(d):
    one = constant_profile(1.0)
    with pytest.raises(ValidationError, match='The dimension must be an integer >= 2'):
        MediumPair(one, one, one, one, d=d)


def test_medium_pair_lower_bound():
    one = constant_profile(1.0)
    with pytest.raises(ValidationError, match='The lower bound b0 must be positive'):
        MediumPair(one, one, one, one, b0=0)


def test_boundary_data(isotropic_pair):
    bd = profiles.boundary_data(isotropic_pair)
    assert (bd.c1, bd.n1, bd.c2, bd.n2) == (1, 1, 1, 4)
    assert (bd.ntilde1, bd.ntilde2) == (1, 4)


def test_boundary_data_ramp():
    one = constant_profile(1.0)
    pair = MediumPair(constant_profile(2.0), RadialProfile((0, 1), (1, 3)), one, one)
    bd = profiles.boundary_data(pair)
    assert bd.n1 == 3
    assert bd.ntilde1 == 1.5
    assert profiles.boundary_data(MediumPair(constant_profile(2.0), one, one, one)).ntilde1 == 0.5


def test_classify(isotropic_pair, aniso_negative_pair, aniso_positive_pair):
    assert profiles.classify(isotropic_pair) == CaseTag.ISOTROPIC
    assert profiles.classify(aniso_negative_pair) == CaseTag.ANISO_NEGATIVE
    assert profiles.classify(aniso_positive_pair) == CaseTag.ANISO_POSITIVE


def test_classify_degenerate():
    one, two = constant_profile(1.0), constant_profile(2.0)
    assert profiles.classify(MediumPair(one, two, one, two)) == CaseTag.DEGENERATE
    # c1 n1 = c2 n2 on the boundary
    assert profiles.classify(MediumPair(two, one, one, two)) == CaseTag.DEGENERATE
    # equal boundary values of c
    assert profiles.classify(MediumPair(two, one, two, two)) == CaseTag.DEGENERATE


def test_classify_needs_identically_one():
    ramp = RadialProfile((0, 0.5, 1), (2, 1, 1))
    one, four = constant_profile(1.0), constant_profile(4.0)
    # c1 = c2 = 1 on the boundary but not inside: the anisotropic rule applies and c1 = c2 there
    assert profiles.classify(MediumPair(ramp, one, one, four)) == CaseTag.DEGENERATE


def test_classify_swap_symmetry(isotropic_pair, aniso_negative_pair, aniso_positive_pair):
    one, two = constant_profile(1.0), constant_profile(2.0)
    degenerate = MediumPair(one, two, one, two)
    for pair in (isotropic_pair, aniso_negative_pair, aniso_positive_pair, degenerate):
        assert profiles.classify(pair.swapped()) == profiles.classify(pair)
