# SPDX-License-Identifier: GPL-3.0-or-later
import math

import numpy as np
import pytest

from itp_lab.exceptions import DomainError
from itp_lab.verify import composition

DYADIC = [2.0 ** -j for j in range(3, 7)]
WIDTHS = [2.0 ** -j for j in range(1, 6)]


@pytest.mark.parametrize('h, expected', ((0.5, 6), (0.25, 12), (2.0 ** -6, 192)))
def test_mode_cutoff(h, expected):
    assert composition.mode_cutoff(h) == expected


def test_composition_sweep_smooth():
    result = composition.composition_sweep('smooth', DYADIC)
    assert result.label == 'composition-smooth'
    assert result.fitted_slope >= 0.9
    assert result.value_name == 'remainder_norm'


@pytest.mark.parametrize('family', ('multiplier', 'reversed'))
def test_composition_sweep_exact(family):
    result = composition.composition_sweep(family, DYADIC)
    assert result.exact
    assert max(result.values) <= 1e-12
    assert result.summary()['exact'] is True


def test_composition_sweep_rough():
    result = composition.composition_sweep('rough', DYADIC)
    assert result.fitted_slope >= 0.4


def test_composition_sweep_unknown_family():
    with pytest.raises(DomainError, match='Unknown symbol family "wavy"'):
        composition.composition_sweep('wavy', DYADIC)


@pytest.mark.parametrize('symbol', ('smooth', 'rough'))
def test_mollification_sweep(symbol):
    result = composition.mollification_sweep(WIDTHS, symbol=symbol)
    assert result.label == f'mollification-{symbol}'
    assert result.header()[:3] == ['t', 'theta', 'sup_error']
    assert [point[0] for point in result.points] == sorted(WIDTHS, reverse=True)
    assert result.fitted_slope == pytest.approx(2.0, abs=0.3)


def test_mollification_sweep_unknown_symbol():
    with pytest.raises(DomainError, match='Unknown symbol "jagged"'):
        composition.mollification_sweep(WIDTHS, symbol='jagged')


def test_lipschitz_profile():
    profile = composition.lipschitz_profile(5)
    x = np.linspace(0, 2 * np.pi, 101)
    values = profile(x)
    assert np.all((values >= 0.5) & (values <= 1.5))
    assert profile(0.0) == pytest.approx(profile(2 * np.pi))
    np.testing.assert_array_equal(composition.lipschitz_profile(5)(x), values)


def test_log_bound_sweep():
    result = composition.log_bound_sweep(DYADIC)
    assert result.label == 'log-bound'
    assert result.columns == ('log_ratio',)
    for (h, _, norm), (ratio,) in zip(result.points, result.extra):
        assert ratio == pytest.approx(norm / math.log(1 + 1 / h))
    assert result.metrics['spread'] <= 10


@pytest.mark.parametrize('order, k_from', ((0.0, 1.0), (1.0, 2.0), (-1.0, -1.0), (-1.0, -2.0)))
def test_log_bound_sweep_invalid(order, k_from):
    with pytest.raises(DomainError, match='Need order < 0 and k_from > order'):
        composition.log_bound_sweep(DYADIC, order=order, k_from=k_from)


def test_boundedness_sweep():
    result = composition.boundedness_sweep(DYADIC)
    assert result.columns == ('sup',)
    for (_, _, norm), (sup,) in zip(result.points, result.extra):
        assert sup == pytest.approx(1.5, abs=0.01)
        assert 1.0 < norm <= sup + 1e-3
    assert result.metrics['excess_constant'] <= 1.0
