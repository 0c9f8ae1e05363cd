# SPDX-License-Identifier: GPL-3.0-or-later
from concurrent.futures import ProcessPoolExecutor
import logging
import os

from itp_lab.config import get_config
from itp_lab.exceptions import ConfigError

log = logging.getLogger(__name__)


def resolve_jobs(jobs=None):
    """
    Determine the size of the worker pool.

    The explicit value wins, then ``ITP_LAB_JOBS``, then ``itp_lab_jobs`` and finally the number
    of available processors.

    :param int jobs: the value given on the command line, if any
    :return: the number of workers
    :rtype: int
    :raises ConfigError: if ``ITP_LAB_JOBS`` is not a positive integer
    """
    if jobs:
        return int(jobs)

    env_jobs = os.getenv('ITP_LAB_JOBS')
    if env_jobs:
        try:
            value = int(env_jobs)
        except ValueError:
            raise ConfigError(f'ITP_LAB_JOBS, {env_jobs}, is not an integer')
        if value < 1:
            raise ConfigError('ITP_LAB_JOBS must be a positive integer')
        return value

    configured = get_config().itp_lab_jobs
    if configured:
        return configured

    if hasattr(os, 'sched_getaffinity'):
        return len(os.sched_getaffinity(0))
    return os.cpu_count() or 1


def parallel_map(fn, items, jobs=1):
    """
    Apply ``fn`` to every item, possibly in worker processes.

    The results are returned in the order of ``items`` whatever the number of workers.

    :param callable fn: a picklable function of one argument
    :param iterable items: the arguments
    :param int jobs: the number of workers; 1 runs in the calling process
    :return: the results
    :rtype: list
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    workers = min(jobs, len(items))
    log.debug('Dispatching %d tasks to %d workers', len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
