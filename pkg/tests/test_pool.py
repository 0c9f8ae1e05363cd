# SPDX-License-Identifier: GPL-3.0-or-later
from unittest import mock

import pytest

from itp_lab import pool
from itp_lab.config import get_config
from itp_lab.exceptions import ConfigError


def test_resolve_jobs_explicit(monkeypatch):
    monkeypatch.setenv('ITP_LAB_JOBS', '5')
    assert pool.resolve_jobs(3) == 3


def test_resolve_jobs_environment(monkeypatch):
    monkeypatch.setenv('ITP_LAB_JOBS', '5')
    assert pool.resolve_jobs() == 5


def test_resolve_jobs_config():
    get_config().itp_lab_jobs = 7
    assert pool.resolve_jobs() == 7


@mock.patch('os.sched_getaffinity', create=True, return_value={0, 1, 2, 3})
def test_resolve_jobs_processors(mock_affinity):
    get_config().itp_lab_jobs = None
    assert pool.resolve_jobs() == 4


@pytest.mark.parametrize(
    'value, error',
    (('many', 'ITP_LAB_JOBS, many, is not an integer'), ('0', 'must be a positive integer')),
)
def test_resolve_jobs_bad_environment(monkeypatch, value, error):
    monkeypatch.setenv('ITP_LAB_JOBS', value)
    with pytest.raises(ConfigError, match=error):
        pool.resolve_jobs()


@mock.patch('itp_lab.pool.ProcessPoolExecutor')
def test_parallel_map_in_process(mock_executor):
    assert pool.parallel_map(abs, [-1, 2, -3], jobs=1) == [1, 2, 3]
    assert pool.parallel_map(abs, [-4], jobs=8) == [4]
    mock_executor.assert_not_called()


@mock.patch('itp_lab.pool.ProcessPoolExecutor')
def test_parallel_map_workers(mock_executor):
    executor = mock_executor.return_value.__enter__.return_value
    executor.map.side_effect = lambda fn, items: map(fn, items)

    assert pool.parallel_map(abs, [-1, 2, -3], jobs=8) == [1, 2, 3]
    mock_executor.assert_called_once_with(max_workers=3)
