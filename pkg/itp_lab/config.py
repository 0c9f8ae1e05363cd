# SPDX-License-Identifier: GPL-3.0-or-later
import configparser
import logging
import os

from itp_lab.exceptions import ConfigError

log = logging.getLogger(__name__)

CONFIG_SECTION = 'itp_lab'


class Config(object):
    """The base itp-lab configuration."""

    # Configuration for dogpile.cache
    # Disabled by default (by using 'dogpile.cache.null').
    # To persist shooting results between runs set 'dogpile.cache.dbm' as backend.
    itp_lab_dogpile_arguments = {}
    itp_lab_dogpile_backend = 'dogpile.cache.null'
    itp_lab_dogpile_expiration_time = 86400
    itp_lab_default_tol = 1e-10
    # Modes above this index are integrated through the logarithmic derivative
    itp_lab_ell_threshold = 40
    itp_lab_jobs = None
    itp_lab_log_format = '%(asctime)s %(name)s %(levelname)s %(module)s.%(funcName)s %(message)s'
    itp_lab_log_level = 'INFO'
    itp_lab_power_iteration_max = 5000
    # Box visits allowed per mode before a search is reported incomplete
    itp_lab_root_budget = 4000
    itp_lab_run_logs_dir = None
    itp_lab_run_logs_level = 'DEBUG'


class ProductionConfig(Config):
    """The production itp-lab configuration."""


class DevelopmentConfig(Config):
    """The development itp-lab configuration."""

    itp_lab_dogpile_backend = 'dogpile.cache.memory'
    itp_lab_log_level = 'DEBUG'


class TestingConfig(DevelopmentConfig):
    """The testing itp-lab configuration."""

    itp_lab_jobs = 1
    itp_lab_run_logs_dir = None
    # disable dogpile cache for tests
    itp_lab_dogpile_backend = 'dogpile.cache.null'


_config = None


def _coerce(key, raw, current):
    """
    Convert a raw string from a config file to the type of the current value.

    :param str key: the name of the configuration key
    :param str raw: the raw value read from the file
    :param current: the default value of the key, used to pick the type
    :return: the converted value
    :raises ConfigError: if the value cannot be converted
    """
    if raw.lower() in ('none', ''):
        return None
    try:
        if isinstance(current, bool):
            if raw.lower() not in ('true', 'false'):
                raise ValueError(raw)
            return raw.lower() == 'true'
        if isinstance(current, int):
            return int(raw)
        if isinstance(current, float):
            return float(raw)
    except ValueError:
        raise ConfigError(f'The value "{raw}" of {key} is not a valid {type(current).__name__}')
    if key == 'itp_lab_jobs':
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f'The value "{raw}" of {key} is not a valid int')
    if isinstance(current, dict):
        pairs = [item.split('=', 1) for item in raw.split(',') if item.strip()]
        if any(len(pair) != 2 for pair in pairs):
            raise ConfigError(f'{key} must be a comma separated list of key=value pairs')
        return {k.strip(): v.strip() for k, v in pairs}
    return raw


def read_config_file(path):
    """
    Read an INI configuration file.

    :param str path: the path to the file
    :return: a dictionary mapping section names to dictionaries of raw string values
    :rtype: dict
    :raises ConfigError: if the file cannot be parsed
    """
    parser = configparser.ConfigParser(interpolation=None)
    # flag names such as C are case sensitive
    parser.optionxform = str
    try:
        with open(path, 'r') as config_file:
            parser.read_file(config_file)
    except (OSError, configparser.Error) as error:
        raise ConfigError(f'The configuration file {path} could not be read: {error}')

    return {section: dict(parser.items(section)) for section in parser.sections()}


def configure(file_values=None):
    """
    Select and populate the active configuration.

    ``ITP_LAB_DEV`` and ``ITP_LAB_TESTING`` select the development and testing classes. Otherwise
    the production defaults are used and the ``[itp_lab]`` section of ``file_values`` overrides
    them.

    :param dict file_values: the parsed configuration file, see :func:`read_config_file`
    :return: the configuration object
    :rtype: Config
    :raises ConfigError: if the file contains unknown keys or invalid values
    """
    global _config

    if os.getenv('ITP_LAB_DEV', '').lower() == 'true':
        config = DevelopmentConfig()
    elif os.getenv('ITP_LAB_TESTING', 'false').lower() == 'true':
        config = TestingConfig()
    else:
        config = ProductionConfig()

    for key, raw in ((file_values or {}).get(CONFIG_SECTION) or {}).items():
        attr = f'itp_lab_{key}'
        if not hasattr(Config, attr):
            raise ConfigError(f'Unknown configuration key "{key}" in section [{CONFIG_SECTION}]')
        setattr(config, attr, _coerce(attr, raw, getattr(Config, attr)))

    validate_config(config)
    logging.getLogger('itp_lab').setLevel(str(config.itp_lab_log_level).upper())
    _config = config
    return config


def validate_config(conf):
    """
    Perform basic validation on the configuration.

    :param Config conf: the configuration to validate
    :raises itp_lab.exceptions.ConfigError: if the configuration is invalid
    """
    if logging.getLevelName(str(conf.itp_lab_log_level).upper()) not in range(0, 51):
        raise ConfigError(f'itp_lab_log_level, {conf.itp_lab_log_level}, is not a log level')

    jobs = conf.itp_lab_jobs
    if jobs is not None and (not isinstance(jobs, int) or jobs < 1):
        raise ConfigError('itp_lab_jobs must be a positive integer')

    if not conf.itp_lab_default_tol or conf.itp_lab_default_tol <= 0:
        raise ConfigError('itp_lab_default_tol must be positive')

    for key in ('itp_lab_ell_threshold', 'itp_lab_power_iteration_max', 'itp_lab_root_budget'):
        value = getattr(conf, key)
        if not isinstance(value, int) or value < 1:
            raise ConfigError(f'{key} must be a positive integer')

    if not isinstance(conf.itp_lab_dogpile_arguments, dict):
        raise ConfigError('itp_lab_dogpile_arguments must be a dictionary')

    run_logs_dir = conf.itp_lab_run_logs_dir
    if run_logs_dir:
        if not os.path.isdir(run_logs_dir):
            raise ConfigError(
                f'itp_lab_run_logs_dir, {run_logs_dir}, must exist and be a directory'
            )
        if not os.access(run_logs_dir, os.W_OK):
            raise ConfigError(f'itp_lab_run_logs_dir, {run_logs_dir}, is not writable!')


def get_config():
    """Return the active configuration, configuring the defaults on first use."""
    if _config is None:
        return configure()
    return _config
