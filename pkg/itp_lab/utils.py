# SPDX-License-Identifier: GPL-3.0-or-later
import csv
import functools
import inspect
import json
import logging
import os

from itp_lab.config import get_config
from itp_lab.exceptions import ItpLabError

log = logging.getLogger(__name__)


def artifact_path(out_dir, command, name, extension):
    """
    Return the path of a result file.

    :param str out_dir: the output directory
    :param str command: the command that produced the file
    :param str name: the run name
    :param str extension: ``csv`` or ``json``
    :rtype: str
    """
    return os.path.join(out_dir, f'{command}-{name}.{extension}')


def write_csv(path, header, rows):
    """
    Write rows with a header line.

    Floats are written with ``repr`` so the file only depends on the values.

    :param str path: the destination
    :param list header: the column names
    :param iterable rows: the rows, each as long as ``header``
    """
    os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
    log.info('Wrote %s', path)


def _cell(value):
    if isinstance(value, float):
        return repr(value)
    return value


def write_json(path, payload):
    """
    Write a JSON document with sorted keys.

    :param str path: the destination
    :param dict payload: the document
    """
    os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
    with open(path, 'w') as f:
        json.dump(payload, f, indent=2, sort_keys=True, default=str)
        f.write('\n')
    log.info('Wrote %s', path)


def run_logger(func):
    """
    Log messages of the current run to a dedicated file.

    If ``itp_lab_run_logs_dir`` is set, a temporary log handler writing to
    ``<dir>/<command>-<name>.log`` is added before the decorated function is invoked. It's removed
    once the decorated function completes execution.

    :param function func: the function to be decorated. It must take the ``config`` parameter,
        an object with ``command`` and ``name`` attributes.
    :return: the decorated function
    :rtype: function
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        conf = get_config()
        log_dir = conf.itp_lab_run_logs_dir
        run_log_handler = None
        logger = logging.getLogger()
        if log_dir:
            config = _get_function_arg_value('config', func, args, kwargs)
            if config is None:
                raise ItpLabError(f'Unable to get "config" from {func.__name__}')

            os.makedirs(log_dir, exist_ok=True)
            log_file_path = os.path.join(log_dir, f'{config.command}-{config.name}.log')
            run_log_handler = logging.FileHandler(log_file_path)
            run_log_handler.setLevel(conf.itp_lab_run_logs_level)
            run_log_handler.setFormatter(logging.Formatter(conf.itp_lab_log_format))
            logger.addHandler(run_log_handler)
        try:
            return func(*args, **kwargs)
        finally:
            if run_log_handler:
                logger.removeHandler(run_log_handler)
                run_log_handler.close()

    return wrapper


def _get_function_arg_value(arg_name, func, args, kwargs):
    """Return the value of the given argument name."""
    original_func = func
    while getattr(original_func, '__wrapped__', None):
        original_func = original_func.__wrapped__
    argspec = inspect.getfullargspec(original_func).args

    arg_index = argspec.index(arg_name)
    arg_value = kwargs.get(arg_name, None)
    if arg_value is None and len(args) > arg_index:
        arg_value = args[arg_index]
    return arg_value
