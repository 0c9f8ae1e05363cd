# SPDX-License-Identifier: GPL-3.0-or-later
import os

import pytest

os.environ.setdefault('ITP_LAB_TESTING', 'true')

from itp_lab import config  # noqa: E402
from itp_lab.profiles import (  # noqa: E402
    MediumPair,
    MediumProfile,
    RadialProfile,
    constant_profile,
)

MEDIA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'media')


@pytest.fixture(autouse=True)
def testing_config(monkeypatch):
    """Give every test a fresh testing configuration."""
    monkeypatch.setenv('ITP_LAB_TESTING', 'true')
    monkeypatch.delenv('ITP_LAB_DEV', raising=False)
    monkeypatch.delenv('ITP_LAB_JOBS', raising=False)
    conf = config.configure()
    yield conf
    config._config = None


@pytest.fixture()
def unit_medium():
    """Return the medium c = n = 1 in the disc."""
    return MediumProfile(constant_profile(1.0), constant_profile(1.0))


@pytest.fixture()
def isotropic_pair():
    """Return c1 = c2 = 1, n1 = 1, n2 = 4 in the disc."""
    one = constant_profile(1.0)
    return MediumPair(one, one, one, constant_profile(4.0))


@pytest.fixture()
def aniso_negative_pair():
    """Return c1 = 1, n1 = 3, c2 = 2, n2 = 1."""
    return MediumPair(
        constant_profile(1.0), constant_profile(3.0), constant_profile(2.0), constant_profile(1.0)
    )


@pytest.fixture()
def aniso_positive_pair():
    """Return c1 = 2, n1 = 3, c2 = 1, n2 = 1."""
    return MediumPair(
        constant_profile(2.0), constant_profile(3.0), constant_profile(1.0), constant_profile(1.0)
    )


@pytest.fixture()
def kink_profile():
    """Return the profile (0, 0.9, 1) -> (1, 1, 3)."""
    return RadialProfile((0.0, 0.9, 1.0), (1.0, 1.0, 3.0))


@pytest.fixture()
def media_dir():
    """Return the directory of the sample medium files."""
    return MEDIA_DIR
