# SPDX-License-Identifier: GPL-3.0-or-later
import pytest
import sympy as sp

from itp_lab.parametrix import derivation, symbols
from itp_lab.parametrix.derivation import xi


def test_disc_geometry():
    geometry = derivation.disc_geometry()
    assert geometry == {'R0': 1, 'R0_sharp': 2, 'R1_sharp': 3, 'Q1_0': sp.I, 'Q1_1': sp.I}


def test_disc_geometry_matches_closed_forms():
    geometry = derivation.disc_geometry()
    for name, value in geometry.items():
        assert complex(value) == getattr(symbols.DISC, name)


@pytest.mark.parametrize(
    'name, expected',
    (
        ('phi2', sp.I * xi / 2),
        ('phi3', sp.I * xi / 3),
        ('a10', 0),
        ('a2', 0),
        ('q', 0),
    ),
)
def test_derived_symbols(name, expected):
    assert sp.simplify(derivation.derived_symbols()[name] - expected) == 0


@pytest.mark.parametrize('value', (0.5, 1.0, 7.25))
def test_evaluate_matches_closed_forms(value):
    assert derivation.evaluate('phi2', value) == pytest.approx(symbols.phi2(value))
    assert derivation.evaluate('phi3', value) == pytest.approx(symbols.phi3(value))
    assert derivation.evaluate('a2', value) == pytest.approx(0, abs=1e-15)
