# SPDX-License-Identifier: GPL-3.0-or-later
import pytest

from itp_lab import config
from itp_lab.exceptions import ConfigError


def test_configure_testing():
    conf = config.configure()
    assert isinstance(conf, config.TestingConfig)
    assert conf.itp_lab_jobs == 1
    assert conf.itp_lab_dogpile_backend == 'dogpile.cache.null'
    assert config.get_config() is conf


def test_configure_development(monkeypatch):
    monkeypatch.setenv('ITP_LAB_DEV', 'true')
    conf = config.configure()
    assert isinstance(conf, config.DevelopmentConfig)
    assert conf.itp_lab_dogpile_backend == 'dogpile.cache.memory'
    assert conf.itp_lab_log_level == 'DEBUG'


def test_configure_production(monkeypatch):
    monkeypatch.setenv('ITP_LAB_TESTING', 'false')
    conf = config.configure()
    assert type(conf) is config.ProductionConfig
    assert conf.itp_lab_jobs is None


def test_configure_with_file_values():
    conf = config.configure(
        {
            'itp_lab': {
                'root_budget': '10',
                'default_tol': '1e-8',
                'log_level': 'warning',
                'dogpile_arguments': 'filename=/tmp/cache.dbm, lock_factory=none',
                'jobs': '3',
            },
            'spectrum': {'ell_max': '5'},
        }
    )
    assert conf.itp_lab_root_budget == 10
    assert conf.itp_lab_default_tol == 1e-8
    assert conf.itp_lab_log_level == 'warning'
    assert conf.itp_lab_dogpile_arguments == {
        'filename': '/tmp/cache.dbm',
        'lock_factory': 'none',
    }
    assert conf.itp_lab_jobs == 3


def test_configure_file_values_do_not_leak():
    config.configure({'itp_lab': {'root_budget': '10'}})
    assert config.configure().itp_lab_root_budget == 4000


@pytest.mark.parametrize(
    'values, error',
    (
        ({'spam': '1'}, 'Unknown configuration key "spam" in section \\[itp_lab\\]'),
        ({'root_budget': 'many'}, 'The value "many" of itp_lab_root_budget is not a valid int'),
        ({'default_tol': 'small'}, 'The value "small" of itp_lab_default_tol is not a valid'),
        ({'jobs': 'all'}, 'The value "all" of itp_lab_jobs is not a valid int'),
        ({'dogpile_arguments': 'filename'}, 'must be a comma separated list of key=value pairs'),
    ),
)
def test_configure_with_bad_file_values(values, error):
    with pytest.raises(ConfigError, match=error):
        config.configure({'itp_lab': values})


def test_read_config_file(tmpdir):
    path = tmpdir.join('itp-lab.ini')
    path.write('[itp_lab]\nroot_budget = 12\n\n[dtn-verify]\nh_list = 2^-4:2^-6\n')
    assert config.read_config_file(str(path)) == {
        'itp_lab': {'root_budget': '12'},
        'dtn-verify': {'h_list': '2^-4:2^-6'},
    }


@pytest.mark.parametrize('content', (None, 'root_budget = 12\n'))
def test_read_config_file_failure(tmpdir, content):
    path = tmpdir.join('itp-lab.ini')
    if content is not None:
        path.write(content)
    with pytest.raises(ConfigError, match='could not be read'):
        config.read_config_file(str(path))


def test_validate_config():
    config.validate_config(config.ProductionConfig())


@pytest.mark.parametrize(
    'attr, value, error',
    (
        ('itp_lab_log_level', 'LOUD', 'itp_lab_log_level, LOUD, is not a log level'),
        ('itp_lab_jobs', 0, 'itp_lab_jobs must be a positive integer'),
        ('itp_lab_default_tol', -1.0, 'itp_lab_default_tol must be positive'),
        ('itp_lab_ell_threshold', 0, 'itp_lab_ell_threshold must be a positive integer'),
        ('itp_lab_root_budget', 2.5, 'itp_lab_root_budget must be a positive integer'),
        ('itp_lab_dogpile_arguments', 'x', 'itp_lab_dogpile_arguments must be a dictionary'),
    ),
)
def test_validate_config_failure(attr, value, error):
    conf = config.ProductionConfig()
    setattr(conf, attr, value)
    with pytest.raises(ConfigError, match=error):
        config.validate_config(conf)


def test_validate_config_run_logs_dir_missing(tmpdir):
    conf = config.ProductionConfig()
    conf.itp_lab_run_logs_dir = str(tmpdir.join('missing'))
    with pytest.raises(ConfigError, match='must exist and be a directory'):
        config.validate_config(conf)


def test_validate_config_run_logs_dir(tmpdir):
    conf = config.ProductionConfig()
    conf.itp_lab_run_logs_dir = str(tmpdir)
    config.validate_config(conf)
