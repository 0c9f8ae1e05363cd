# SPDX-License-Identifier: GPL-3.0-or-later
from fractions import Fraction as F
import math

import numpy as np
import pytest

from itp_lab import regions
from itp_lab.exceptions import DomainError, UnsupportedCaseError, ValidationError
from itp_lab.profiles import CaseTag
from itp_lab.spectral import lambda_from_hz, spectral_point

ISO = CaseTag.ISOTROPIC
NEG = CaseTag.ANISO_NEGATIVE
POS = CaseTag.ANISO_POSITIVE

# (mu, d) -> (p1, p2) of the Isotropic and AnisoNegative cases
ISOTROPIC_EXPONENTS = {
    (2, 2): (F(2, 7), F(2, 7)),
    (3, 2): (F(1, 3), F(2, 9)),
    (4, 2): (F(6, 17), F(2, 17)),
    (5, 2): (F(7, 19), F(2, 19)),
    (6, 2): (F(8, 21), F(2, 21)),
    (7, 2): (F(9, 23), F(2, 23)),
    (8, 2): (F(2, 5), F(2, 25)),
    (9, 2): (F(2, 5), F(0)),
    (10, 2): (F(2, 5), F(0)),
    (2, 3): (F(2, 9), F(2, 9)),
    (3, 3): (F(3, 11), F(2, 11)),
    (4, 3): (F(4, 13), F(2, 13)),
    (5, 3): (F(1, 3), F(2, 15)),
    (6, 3): (F(8, 23), F(2, 23)),
    (7, 3): (F(9, 25), F(2, 25)),
    (8, 3): (F(10, 27), F(2, 27)),
    (9, 3): (F(11, 29), F(2, 29)),
    (10, 3): (F(12, 31), F(2, 31)),
}

# (mu, d) -> (p1, p2) of the AnisoPositive case
POSITIVE_EXPONENTS = {
    (2, 2): (F(1, 5), F(1, 5)),
    (3, 2): (F(1, 4), F(1, 6)),
    (4, 2): (F(2, 7), F(1, 7)),
    (5, 2): (F(2, 7), F(0)),
    (10, 2): (F(2, 7), F(0)),
    (2, 3): (F(1, 6), F(1, 6)),
    (4, 3): (F(1, 4), F(1, 8)),
    (5, 3): (F(5, 18), F(1, 9)),
    (6, 3): (F(2, 7), F(0)),
}


@pytest.mark.parametrize('mu, d', sorted(ISOTROPIC_EXPONENTS))
def test_exponents_isotropic(mu, d):
    exps = regions.exponents(ISO, mu, d)
    assert (exps.p1, exps.p2) == ISOTROPIC_EXPONENTS[(mu, d)]
    assert exps.p3 is None and exps.p4 is None


@pytest.mark.parametrize('mu, d', sorted(ISOTROPIC_EXPONENTS))
def test_exponents_aniso_negative(mu, d):
    exps = regions.exponents(NEG, mu, d)
    assert (exps.p1, exps.p2) == ISOTROPIC_EXPONENTS[(mu, d)]
    assert exps.p3 == F(mu, 2 * mu + 2 * d + 2)
    assert exps.p4 == F(1, mu + d + 1)


@pytest.mark.parametrize('mu, d', sorted(POSITIVE_EXPONENTS))
def test_exponents_aniso_positive(mu, d):
    exps = regions.exponents(POS, mu, d)
    assert (exps.p1, exps.p2) == POSITIVE_EXPONENTS[(mu, d)]


@pytest.mark.parametrize('case', (ISO, NEG, POS))
@pytest.mark.parametrize('d', (2, 3))
def test_exponents_bounds_and_monotone_in_mu(case, d):
    previous = F(0)
    for mu in range(2, 11):
        exps = regions.exponents(case, mu, d)
        assert 0 < exps.p1 <= F(2, 5)
        assert exps.p2 >= 0
        assert exps.p1 >= previous
        previous = exps.p1


def test_exponents_non_integer_mu():
    assert regions.exponents(ISO, 2.5, 2).p1 == F(5, 2) / (5 + 4 - 1)


def test_exponents_degenerate():
    with pytest.raises(UnsupportedCaseError, match='Degenerate'):
        regions.exponents(CaseTag.DEGENERATE, 2, 2)


@pytest.mark.parametrize('mu, d', ((1, 2), (2, 1)))
def test_exponents_out_of_range(mu, d):
    with pytest.raises(DomainError, match='must be at least 2'):
        regions.exponents(ISO, mu, d)


def test_radial_exponents():
    assert regions.radial_exponents(ISO) == regions.RegionExponents(F(2, 5), F(0))
    assert regions.radial_exponents(POS) == regions.RegionExponents(F(2, 7), F(0))
    neg = regions.radial_exponents(NEG, epsilon=0.1)
    assert (neg.p1, neg.p3, neg.p4) == (F(2, 5), F(2, 5), F(0))


def test_region_spec_constant():
    with pytest.raises(ValidationError, match='C must exceed 2'):
        regions.region_spec(ISO, 2, 2, 2.0)
    with pytest.raises(ValidationError, match='epsilon must lie in'):
        regions.region_spec(ISO, 2, 2, 3.0, epsilon=0.5)


@pytest.mark.parametrize(
    'case, mu, lam, expected',
    (
        (ISO, 2, 2, False),
        (ISO, 9, 100 + 100j, True),
        (ISO, 9, 100 + 10j, False),
        (NEG, 9, 100j, False),
        (NEG, 9, 100 + 100j, True),
        (POS, 9, 100 + 100j, False),
        (POS, 9, 1000 + 1000j, True),
    ),
)
def test_in_free_region(case, mu, lam, expected):
    assert regions.in_free_region(lam, regions.region_spec(case, mu, 2, 3.0)) is expected


def test_in_free_region_array():
    spec = regions.region_spec(ISO, 9, 2, 3.0)
    np.testing.assert_array_equal(
        regions.in_free_region(np.array([2, 100 + 100j, 100 - 100j]), spec), [False, True, True]
    )


def test_in_free_region_monotone_in_C():
    rng = np.random.default_rng(11)
    lams = 10 ** rng.uniform(0, 4, 2000) * np.exp(1j * rng.uniform(-math.pi, math.pi, 2000))
    for case in (ISO, NEG, POS):
        for C, smaller in zip(rng.uniform(2.01, 20, 20), rng.uniform(0, 1, 20)):
            C_prime = min(C, 2.0 + (C - 2.0) * smaller + 1e-9)
            member = regions.in_free_region(lams, regions.region_spec(case, 9, 2, C))
            weaker = regions.in_free_region(lams, regions.region_spec(case, 9, 2, C_prime))
            assert np.all(weaker[member])


def test_in_free_region_shrinks_with_p1():
    rng = np.random.default_rng(12)
    lams = 10 ** rng.uniform(0.5, 4, 2000) * np.exp(1j * rng.uniform(-math.pi, math.pi, 2000))
    lams = lams[np.abs(lams) >= math.e]
    rough = regions.region_spec(ISO, 2, 2, 3.0)
    smooth = regions.region_spec(ISO, 9, 2, 3.0)
    assert rough.exponents.p1 <= smooth.exponents.p1
    assert rough.exponents.p2 >= smooth.exponents.p2
    member = regions.in_free_region(lams, rough)
    assert member.any()
    assert np.all(regions.in_free_region(lams, smooth)[member])


@pytest.mark.parametrize(
    'case, lam, C, expected',
    (
        (ISO, 10 + 10j, 2.0, True),
        (POS, 10 + 10j, 2.0, False),
        (ISO, 1, 2.0, False),
        (POS, 1, 2.0, False),
        (NEG, 1, 2.0, False),
        (NEG, 1000 + 800j, 2.0, True),
    ),
)
def test_radial_free_region(case, lam, C, expected):
    assert regions.radial_free_region(lam, case, C) is expected


def test_radial_free_region_real_part_constant():
    lam = 1000 + 800j
    # Re lam = 1000 against C_eps |lam|**0.6 ~ 73.2 C_eps
    assert regions.radial_free_region(lam, NEG, 2.0, c_eps=13.0)
    assert not regions.radial_free_region(lam, NEG, 2.0, c_eps=14.0)


def test_radial_free_region_degenerate():
    with pytest.raises(UnsupportedCaseError):
        regions.radial_free_region(10j, CaseTag.DEGENERATE, 3.0)


def test_boundary_curve_two_points():
    spec = regions.region_spec(ISO, 2, 2, 3.0)
    rows = regions.boundary_curve(spec, (10, 10), 2)
    expected = 3.0 * 10 ** (5 / 7) * math.log(10) ** (2 / 7)
    assert len(rows) == 2
    for abs_lambda, re, im_plus, im_minus in rows:
        assert abs_lambda == 10
        assert im_plus == pytest.approx(expected)
        assert im_minus == -im_plus


def test_boundary_curve_on_the_circle():
    spec = regions.region_spec(ISO, 9, 2, 3.0)
    ((abs_lambda, re, im_plus, _),) = regions.boundary_curve(spec, (100, 100), 2)[:1]
    assert im_plus == pytest.approx(3.0 * 100 ** 0.6)
    assert re ** 2 + im_plus ** 2 == pytest.approx(abs_lambda ** 2)


def test_boundary_curve_power_law_and_monotone():
    spec = regions.region_spec(ISO, 9, 2, 3.0)
    rows = regions.boundary_curve(spec, (3, 1000), 50)
    im = np.array([row[2] for row in rows])
    abs_values = np.array([row[0] for row in rows])
    np.testing.assert_allclose(im, 3.0 * abs_values ** 0.6)
    assert np.all(np.diff(im) > 0)


def test_boundary_curve_leaves_the_circle():
    spec = regions.region_spec(ISO, 2, 2, 3.0)
    rows = regions.boundary_curve(spec, (3, 4), 2)
    # the envelope exceeds |lambda| right above C
    assert math.isnan(rows[0][1])


@pytest.mark.parametrize(
    'abs_range, n, error',
    (((2, 10), 5, 'below C'), ((10, 5), 5, 'is empty'), ((10, 20), 1, 'At least two samples')),
)
def test_boundary_curve_invalid(abs_range, n, error):
    with pytest.raises(DomainError, match=error):
        regions.boundary_curve(regions.region_spec(ISO, 2, 2, 3.0), abs_range, n)


def test_thresholds():
    limits = regions.thresholds(1e-3, 9, 2)
    assert limits.theta1 == pytest.approx(0.0631, abs=1e-4)
    assert limits.theta2 == pytest.approx(0.1389, abs=1e-4)
    # mu = 2, d = 2: tau3 = (h log(1/h))**(1/5)
    expected = (1e-3 * math.log(1e3)) ** (1 / 5)
    assert regions.thresholds(1e-3, 2, 2).tau3 == pytest.approx(expected, rel=1e-12)


def test_thresholds_branches():
    h = 1e-4
    core = h ** (3 / 2) * math.log(1 / h)
    # mu = 3 <= 2d - 1
    assert regions.thresholds(h, 3, 2).theta1 == pytest.approx(core ** (1 / 4.5))
    core = h ** 3 * math.log(1 / h)
    # 2d - 1 < mu = 6 <= 4d
    assert regions.thresholds(h, 6, 2).theta1 == pytest.approx((h * core) ** (1 / 10.5))
    core = h * math.log(1 / h)
    # mu = 2 <= 4
    assert regions.thresholds(h, 2, 2).theta2 == pytest.approx(core ** (1 / 5))


@pytest.mark.parametrize('h', (0, 1, 2))
def test_thresholds_invalid(h):
    with pytest.raises(DomainError, match='h must lie in'):
        regions.thresholds(h, 2, 2)


def test_error_budget():
    assert regions.error_budget(1e-4, 0.5, 9, 2, NEG).admissible
    assert not regions.error_budget(1e-4, 1e-3, 9, 2, NEG).admissible
    budget = regions.error_budget(1e-4, 0.5, 9, 2, POS)
    assert budget.admissible
    assert budget.value == pytest.approx(1e-4 * 0.5 ** -3.5, rel=1e-6)
    assert regions.error_budget(1e-4, 0.5, 9, 2, ISO).value > 0
    with pytest.raises(UnsupportedCaseError):
        regions.error_budget(1e-4, 0.5, 9, 2, CaseTag.DEGENERATE)
    with pytest.raises(DomainError, match='theta must be positive'):
        regions.error_budget(1e-4, 0.0, 9, 2, ISO)


def test_in_theta_free_region():
    h = 1e-3
    assert regions.in_theta_free_region(spectral_point(lambda_from_hz(h, 1j)), ISO, 9, 2)
    near_real = spectral_point(lambda_from_hz(h, np.exp(0.01j)))
    assert not regions.in_theta_free_region(near_real, ISO, 9, 2)
    negative = spectral_point(lambda_from_hz(h, -1 + 0j))
    assert not regions.in_theta_free_region(negative, POS, 9, 2)
    # tau = 0 on the negative axis
    assert not regions.in_theta_free_region(negative, NEG, 9, 2)
    tilted = spectral_point(lambda_from_hz(h, np.exp(2.0j)))
    assert regions.in_theta_free_region(tilted, NEG, 9, 2)


def test_theta_region_agrees_with_lambda_region():
    # points of the lambda-plane region sit well above the theta threshold
    rng = np.random.default_rng(5)
    spec = regions.region_spec(ISO, 9, 2, 3.0)
    lams = 10 ** rng.uniform(2, 5, 500) * np.exp(1j * rng.uniform(0, math.pi / 4, 500))
    for lam in lams[regions.in_free_region(lams, spec)]:
        point = spectral_point(lam)
        assert regions.in_theta_free_region(point, ISO, 9, 2, K=1.0)
