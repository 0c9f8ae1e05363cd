# SPDX-License-Identifier: GPL-3.0-or-later
from dataclasses import dataclass, field, replace
from fractions import Fraction
import logging
import math
import re
import sys

import click

from itp_lab.config import CONFIG_SECTION, configure, get_config, read_config_file
from itp_lab.exceptions import ComputationError, ConfigError, ItpLabError, UsageError
from itp_lab.pool import resolve_jobs
from itp_lab.profiles import (
    CaseTag,
    MediumPair,
    MediumProfile,
    RadialProfile,
    classify,
    constant_profile,
    validate,
)
from itp_lab.regions import boundary_curve, exponents, radial_exponents, RegionSpec
from itp_lab.rootfinder import SearchBox, itp_spectrum
from itp_lab.utils import artifact_path, run_logger, write_csv, write_json
from itp_lab.verify import apriori, composition, dtn
from itp_lab.verify.consistency import region_consistency

log = logging.getLogger(__name__)

_PAIR_SECTIONS = ('c1', 'n1', 'c2', 'n2')
_MEDIUM_SECTIONS = ('c', 'n')
_CASES = {
    'isotropic': CaseTag.ISOTROPIC,
    'aniso-positive': CaseTag.ANISO_POSITIVE,
    'aniso-negative': CaseTag.ANISO_NEGATIVE,
}
_SLOPE_TOLERANCE = 0.3


@dataclass(frozen=True)
class RunConfig:
    """A parsed command line: the command, where to write and the command's options."""

    command: str
    name: str
    out: str
    jobs: int
    options: dict = field(default_factory=dict)


def read_medium_file(path):
    """
    Read a medium description.

    The file holds optional ``d = ...`` and ``b0 = ...`` lines followed by sections ``[c]``,
    ``[n]`` (one medium) or ``[c1]``, ``[n1]``, ``[c2]``, ``[n2]`` (a pair). Each section lists
    ``r value`` lines. ``#`` starts a comment.

    :param str path: the file
    :return: ``(header, sections)`` with the header values and a profile per section
    :rtype: tuple
    :raises UsageError: if the file is malformed
    """
    header, sections, current = {}, {}, None
    with open(path, 'r') as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            where = f'{path}:{lineno}'
            if line.startswith('['):
                if not line.endswith(']'):
                    raise UsageError(f'{where}: unterminated section header')
                current = line[1:-1].strip()
                if current not in _PAIR_SECTIONS + _MEDIUM_SECTIONS:
                    raise UsageError(f'{where}: unknown section [{current}]')
                if current in sections:
                    raise UsageError(f'{where}: duplicate section [{current}]')
                sections[current] = []
                continue
            if '=' in line:
                key, value = (part.strip() for part in line.split('=', 1))
                if current is not None or key not in ('d', 'b0'):
                    raise UsageError(f'{where}: unexpected setting "{key}"')
                header[key] = _number(value, where, int if key == 'd' else float)
                continue
            parts = line.split()
            if current is None or len(parts) != 2:
                raise UsageError(f'{where}: expected "r value" inside a section')
            sections[current].append(tuple(_number(p, where, float) for p in parts))

    profiles = {}
    for name, rows in sections.items():
        if not rows:
            raise UsageError(f'{path}: section [{name}] is empty')
        radii, values = zip(*rows)
        profiles[name] = RadialProfile(radii, values)
    return header, profiles


def _number(text, where, kind):
    try:
        return kind(text)
    except ValueError:
        raise UsageError(f'{where}: malformed number "{text}"')


def load_pair(path):
    """Read a medium pair file; see :func:`read_medium_file`."""
    header, profiles = read_medium_file(path)
    if set(profiles) != set(_PAIR_SECTIONS):
        raise UsageError(f'{path}: a pair needs the sections {", ".join(_PAIR_SECTIONS)}')
    return MediumPair(*(profiles[name] for name in _PAIR_SECTIONS), **header)


def load_medium(path):
    """Read a single medium file; see :func:`read_medium_file`."""
    header, profiles = read_medium_file(path)
    if set(profiles) != set(_MEDIUM_SECTIONS):
        raise UsageError(f'{path}: a medium needs the sections c, n')
    return MediumProfile(profiles['c'], profiles['n'], **header)


def _parse_real(text):
    text = text.strip()
    if '^' in text:
        base, power = text.split('^', 1)
        return float(base) ** float(Fraction(power))
    return float(text)


class FloatList(click.ParamType):
    """Comma separated reals, or a dyadic range ``2^-4:2^-10`` (both ends included)."""

    name = 'float-list'

    def convert(self, value, param, ctx):
        """Parse a list of reals or expand a dyadic range."""
        if isinstance(value, (list, tuple)):
            return [float(v) for v in value]
        try:
            if ':' in value:
                first, last = (_parse_real(part) for part in value.split(':', 1))
                if first <= 0 or last <= 0:
                    raise ValueError(value)
                a, b = math.log2(first), math.log2(last)
                if a != round(a) or b != round(b):
                    raise ValueError(value)
                step = 1 if b >= a else -1
                return [2.0 ** e for e in range(int(a), int(b) + step, step)]
            return [_parse_real(part) for part in value.split(',') if part.strip()]
        except ValueError:
            self.fail(f'{value!r} is not a list of numbers', param, ctx)


class ComplexParam(click.ParamType):
    """A complex number written the Python way; ``i`` stands for ``1j``."""

    name = 'complex'

    def convert(self, value, param, ctx):
        """Parse a complex number."""
        if isinstance(value, complex):
            return value
        text = str(value).strip().replace(' ', '').replace('i', 'j')
        # a bare j, as in 1+i, has the coefficient 1
        text = re.sub(r'(?<![\d.])j', '1j', text)
        try:
            return complex(text)
        except ValueError:
            self.fail(f'{value!r} is not a complex number', param, ctx)


class ZRule(ComplexParam):
    """A complex ``z`` or the word ``coupled``."""

    name = 'z-rule'

    def convert(self, value, param, ctx):
        """Return the keyword unchanged or parse a complex number."""
        if str(value).strip() == dtn.COUPLED:
            return dtn.COUPLED
        return super().convert(value, param, ctx)


class Ranges(click.ParamType):
    """Colon separated reals of a fixed count, such as ``1:15:-0.5:0.5``."""

    name = 'ranges'

    def __init__(self, count):
        self.count = count

    def convert(self, value, param, ctx):
        """Split the value into exactly ``count`` reals."""
        if isinstance(value, tuple):
            return value
        try:
            parts = tuple(float(part) for part in value.split(':'))
        except ValueError:
            self.fail(f'{value!r} contains a malformed number', param, ctx)
        if len(parts) != self.count:
            self.fail(f'{value!r} needs {self.count} colon separated numbers', param, ctx)
        return parts


class MediumFile(click.Path):
    """An existing medium file, parsed on conversion."""

    def __init__(self, loader):
        super().__init__(exists=True, dir_okay=False)
        self.loader = loader

    def convert(self, value, param, ctx):
        """Check the path and load the medium it names."""
        if not isinstance(value, str):
            return value
        path = super().convert(value, param, ctx)
        try:
            return self.loader(path)
        except ItpLabError as error:
            self.fail(str(error), param, ctx)


def _check_config_sections(file_values):
    for section, values in file_values.items():
        if section == CONFIG_SECTION:
            continue
        command = cli.commands.get(section)
        if command is None:
            raise click.UsageError(f'Unknown section [{section}] in the configuration file')
        known = {p.name for p in command.params}
        unknown = sorted(set(values) - known)
        if unknown:
            raise click.UsageError(
                f'Unknown keys in section [{section}]: {", ".join(unknown)}'
            )


def _setup_logging(level):
    conf = get_config()
    logger = logging.getLogger('itp_lab')
    for handler in list(logger.handlers):
        if getattr(handler, '_itp_lab_cli', False):
            logger.removeHandler(handler)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(conf.itp_lab_log_format))
    handler._itp_lab_cli = True
    logger.addHandler(handler)
    logger.setLevel((level or conf.itp_lab_log_level).upper())


@click.group()
@click.option(
    '--config',
    'config_path',
    type=click.Path(exists=True, dir_okay=False),
    envvar='ITP_LAB_CONFIG',
    help='INI file: an [itp_lab] section and one section of flag defaults per command.',
)
@click.option('--jobs', type=click.IntRange(min=1), help='Worker processes (ITP_LAB_JOBS).')
@click.option(
    '--log-level',
    type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False),
    help='Overrides itp_lab_log_level.',
)
@click.pass_context
def cli(ctx, config_path, jobs, log_level):
    """Compute and check interior transmission eigenvalues of radial media."""
    try:
        file_values = read_config_file(config_path) if config_path else {}
        configure(file_values)
        _check_config_sections(file_values)
        jobs = resolve_jobs(jobs)
    except ConfigError as error:
        raise click.UsageError(str(error))
    _setup_logging(log_level)
    ctx.default_map = {
        section: values for section, values in file_values.items() if section != CONFIG_SECTION
    }
    ctx.obj = {'jobs': jobs}


def _output_options(func):
    func = click.option('--name', default='default', show_default=True, help='Run name.')(func)
    func = click.option(
        '--out', default='.', show_default=True, type=click.Path(file_okay=False), help='Output.'
    )(func)
    return func


def _run_config(command, name, out, options):
    return RunConfig(
        command=command,
        name=name,
        out=out,
        jobs=click.get_current_context().obj['jobs'],
        options=options,
    )


@cli.command()
@click.option('--case', required=True, type=click.Choice(sorted(_CASES)), help='Boundary case.')
@click.option('--mu', type=float, help='Interior regularity; omit for the radial exponents.')
@click.option('--d', default=2, show_default=True, type=click.IntRange(min=2), help='Dimension.')
@click.option('--C', 'C', default=3.0, show_default=True, type=float, help='Region constant.')
@click.option('--epsilon', default=0.1, show_default=True, type=float, help='Real-part loss.')
@click.option('--abs-range', required=True, type=Ranges(2), help='|lambda| range, a:b.')
@click.option('--samples', default=200, show_default=True, type=click.IntRange(min=2))
@_output_options
def regions(case, mu, d, C, epsilon, abs_range, samples, out, name):
    """Sample the boundary curve of a free region."""
    if C <= 2:
        raise click.BadParameter('must exceed 2', param_hint='--C')
    return _run_config(
        'regions',
        name,
        out,
        {
            'case': _CASES[case],
            'mu': mu,
            'd': d,
            'C': C,
            'epsilon': epsilon,
            'abs_range': abs_range,
            'samples': samples,
        },
    )


@cli.command()
@click.option('--pair', required=True, type=MediumFile(load_pair), help='Medium pair file.')
@click.option('--box', required=True, type=Ranges(4), help='re0:re1:im0:im1.')
@click.option('--ell-max', type=click.IntRange(min=0), help='Largest mode degree.')
@click.option('--tol', type=float, help='Integration and residual tolerance.')
@click.option('--C', 'C', type=float, help='Region constant to check the roots against.')
@_output_options
def spectrum(pair, box, ell_max, tol, C, out, name):
    """
    Compute the transmission eigenvalues of a pair in a box.

    The CSV columns are re_lambda, im_lambda, ell, residual, winding and ells, the space
    separated degrees of every mode that has the root.
    """
    return _run_config(
        'spectrum',
        name,
        out,
        {'pair': pair, 'box': box, 'ell_max': ell_max, 'tol': tol, 'C': C},
    )


def _unit_medium():
    return MediumProfile(constant_profile(1.0), constant_profile(1.0))


@cli.command(name='dtn-verify')
@click.option('--medium', type=MediumFile(load_medium), help='Medium file; default c = n = 1.')
@click.option('--z', 'z_rule', default='-1', show_default=True, type=ZRule(), help='z or coupled.')
@click.option('--h-list', default='2^-4:2^-10', show_default=True, type=FloatList())
@click.option('--xi', default='0,1,3', show_default=True, type=FloatList(), help='Frequencies.')
@click.option('--with-q/--without-q', default=False, show_default=True)
@click.option('--aggregate/--no-aggregate', default=True, show_default=True)
@click.option('--tol', type=float, help='Integration tolerance.')
@_output_options
def dtn_verify(medium, z_rule, h_list, xi, with_q, aggregate, tol, out, name):
    """Check the boundary parametrix against the per-mode DtN eigenvalues."""
    return _run_config(
        'dtn-verify',
        name,
        out,
        {
            'medium': medium or _unit_medium(),
            'z_rule': z_rule,
            'h_list': h_list,
            'xi': xi,
            'with_q': with_q,
            'aggregate': aggregate,
            'tol': tol,
        },
    )


@cli.command(name='psido-verify')
@click.option(
    '--families',
    default=','.join(composition.DEFAULT_FAMILIES),
    show_default=True,
    help='Comma separated symbol families.',
)
@click.option('--h-list', default='2^-3:2^-7', show_default=True, type=FloatList())
@click.option('--k', default=0.0, show_default=True, type=float, help='Source Sobolev order.')
@click.option('--t-list', default='0.5,0.25,0.125,0.0625,0.03125', type=FloatList())
@click.option('--boundedness/--no-boundedness', default=True, show_default=True)
@_output_options
def psido_verify(families, h_list, k, t_list, boundedness, out, name):
    """Check the scaling of the symbol calculus on the circle."""
    chosen = [family.strip() for family in families.split(',') if family.strip()]
    unknown = sorted(set(chosen) - set(composition.FAMILIES))
    if unknown:
        raise click.BadParameter(f'unknown families {", ".join(unknown)}', param_hint='--families')
    return _run_config(
        'psido-verify',
        name,
        out,
        {
            'families': chosen,
            'h_list': h_list,
            'k': k,
            't_list': t_list,
            'boundedness': boundedness,
        },
    )


@cli.command(name='apriori-verify')
@click.option('--medium', type=MediumFile(load_medium), help='Medium file; default c = n = 1.')
@click.option('--z', 'z', default='i', show_default=True, type=ComplexParam())
@click.option('--h-list', default='2^-4:2^-9', show_default=True, type=FloatList())
@click.option(
    '--source', default='one', show_default=True, type=click.Choice(sorted(apriori.SOURCES))
)
@click.option('--modes', default='0:10', show_default=True, type=Ranges(2), help='ell range.')
@click.option('--thetas', default='1,0.3,0.1', show_default=True, type=FloatList())
@click.option('--theta-h', default=2.0 ** -7, show_default=True, type=float)
@click.option('--tol', type=float, help='Integration tolerance.')
@_output_options
def apriori_verify(medium, z, h_list, source, modes, thetas, theta_h, tol, out, name):
    """Check the boundedness of the normalized boundary flux."""
    first, last = (int(m) for m in modes)
    return _run_config(
        'apriori-verify',
        name,
        out,
        {
            'medium': medium or _unit_medium(),
            'z': z,
            'h_list': h_list,
            'source': source,
            'modes': tuple(range(first, last + 1)),
            'thetas': thetas,
            'theta_h': theta_h,
            'tol': tol,
        },
    )


@cli.command(name='profile-validate')
@click.option('--profile', required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--b0', required=True, type=float, help='The positive lower bound.')
@_output_options
def profile_validate(profile, b0, out, name):
    """Check every profile of a medium file against the admissibility rules."""
    try:
        _, profiles = read_medium_file(profile)
    except UsageError as error:
        raise click.BadParameter(str(error), param_hint='--profile')
    return _run_config('profile-validate', name, out, {'profiles': profiles, 'b0': b0})


def parse_config(argv=None):
    """
    Parse a command line into a :class:`RunConfig`.

    Flags override the command's section of the configuration file.

    :param list argv: the arguments without the program name; defaults to ``sys.argv[1:]``
    :return: the run configuration, or an exit code when click handled the call (``--help``)
    :raises UsageError: for unknown flags or keys, missing files and malformed numbers
    """
    try:
        return cli.main(args=argv, prog_name='itp-lab', standalone_mode=False)
    except click.ClickException as error:
        raise UsageError(error.format_message())
    except click.Abort:
        raise UsageError('Aborted')


def _fraction_text(value):
    return None if value is None else str(value)


def _run_regions(config):
    opts = config.options
    case, mu, d = opts['case'], opts['mu'], opts['d']
    exps = radial_exponents(case, opts['epsilon']) if mu is None else exponents(case, mu, d)
    spec = RegionSpec(case, math.inf if mu is None else mu, d, opts['C'], exps, opts['epsilon'])
    rows = boundary_curve(spec, opts['abs_range'], opts['samples'])
    write_csv(
        artifact_path(config.out, config.command, config.name, 'csv'),
        ['abs_lambda', 're_lambda', 'im_lambda_plus', 'im_lambda_minus'],
        rows,
    )
    exponent_values = {
        key: _fraction_text(getattr(exps, key)) for key in ('p1', 'p2', 'p3', 'p4')
    }
    write_json(
        artifact_path(config.out, config.command, config.name, 'json'),
        {
            'experiment': 'regions',
            'params': {
                'case': case.value,
                'mu': 'radial' if mu is None else mu,
                'd': d,
                'C': opts['C'],
                'abs_range': list(opts['abs_range']),
            },
            'exponents': exponent_values,
            'pass': True,
        },
    )
    return 0


def _run_spectrum(config):
    opts = config.options
    pair = opts['pair']
    re0, re1, im0, im1 = opts['box']
    box = SearchBox((re0, re1), (im0, im1))
    tol = opts['tol'] or get_config().itp_lab_default_tol
    result = itp_spectrum(pair, box, ell_max=opts['ell_max'], tol=tol, jobs=config.jobs)
    rows = [
        (
            root.lam.real,
            root.lam.imag,
            root.ell,
            root.residual,
            root.winding,
            ' '.join(str(ell) for ell in (root.ells or (root.ell,))),
        )
        for root in result.roots
    ]
    write_csv(
        artifact_path(config.out, config.command, config.name, 'csv'),
        ['re_lambda', 'im_lambda', 'ell', 'residual', 'winding', 'ells'],
        rows,
    )
    case = classify(pair)
    report = region_consistency(result.roots, case, box, C=opts['C'])
    ok = not result.failures and not report.violations
    if result.incomplete:
        log.warning('The search budget ran out; the spectrum may be incomplete')
    write_json(
        artifact_path(config.out, config.command, config.name, 'json'),
        {
            'experiment': 'spectrum',
            'params': {'box': list(opts['box']), 'ell_max': opts['ell_max'], 'tol': tol},
            'case': case.value,
            'count': len(result.roots),
            'incomplete': result.incomplete,
            'failures': [{'ell': ell, 'error': error} for ell, error in result.failures],
            'consistency': report.summary(),
            'pass': ok,
        },
    )
    return 0 if not result.failures else 1


def _write_sweeps(config, sweeps, params, passed):
    for sweep in sweeps:
        write_csv(
            artifact_path(config.out, config.command, f'{config.name}-{sweep.label}', 'csv'),
            sweep.header(),
            sweep.rows(),
        )
    write_json(
        artifact_path(config.out, config.command, config.name, 'json'),
        {
            'experiment': config.command,
            'params': params,
            'sweeps': [dict(sweep.summary(), **{'pass': passed[sweep.label]}) for sweep in sweeps],
            'slope': sweeps[0].summary()['slope'] if sweeps else None,
            'r2': sweeps[0].summary()['r2'] if sweeps else None,
            'pass': all(passed.values()),
        },
    )


def _slope_near(sweep, target):
    if math.isnan(sweep.fitted_slope):
        return False
    return abs(sweep.fitted_slope - target) <= _SLOPE_TOLERANCE


def _run_dtn(config):
    opts = config.options
    medium, z_rule = opts['medium'], opts['z_rule']
    sweeps, passed = [], {}
    for xi in opts['xi']:
        sweep = dtn.dtn_parametrix_sweep(
            medium, z_rule, opts['h_list'], xi, opts['with_q'], opts['tol'], config.jobs
        )
        sweep = replace(sweep, label=f'{sweep.label}-xi{xi:g}')
        ok = _slope_near(sweep, 1.0)
        if xi == 0 and z_rule != dtn.COUPLED and complex(z_rule) == -1:
            # the leading correction of the DtN eigenvalue is h / (2 (xi**2 + 1))
            ok = ok and abs(sweep.prefactor - 0.5) <= 0.1
        sweeps.append(sweep)
        passed[sweep.label] = ok
    if opts['aggregate']:
        basic, improved = dtn.dtn_aggregate_sweep(
            medium, z_rule, opts['h_list'], tol=opts['tol'], jobs=config.jobs
        )
        decaying = all(s.fitted_slope > 0 for s in (basic, improved))
        sweeps.extend([basic, improved])
        passed[basic.label] = decaying
        passed[improved.label] = decaying and improved.metrics['ordered']
    params = {
        'z': str(z_rule),
        'h_list': opts['h_list'],
        'xi': opts['xi'],
        'with_q': opts['with_q'],
    }
    _write_sweeps(config, sweeps, params, passed)
    return 0


def _run_psido(config):
    opts = config.options
    sweeps, passed = [], {}
    for family in opts['families']:
        sweep = composition.composition_sweep(family, opts['h_list'], opts['k'], config.jobs)
        if family in ('multiplier', 'reversed'):
            ok = sweep.exact
        else:
            minimum = 0.9 if family == 'smooth' else 0.4
            ok = sweep.fitted_slope >= minimum
        sweeps.append(sweep)
        passed[sweep.label] = ok
    for symbol in sorted(composition.MOLLIFICATION_SYMBOLS):
        mollification = composition.mollification_sweep(opts['t_list'], symbol=symbol)
        sweeps.append(mollification)
        passed[mollification.label] = _slope_near(mollification, 2.0)
    if opts['boundedness']:
        bounded = composition.boundedness_sweep(opts['h_list'], config.jobs)
        sweeps.append(bounded)
        passed[bounded.label] = math.isfinite(bounded.metrics['excess_constant'])
        log_bound = composition.log_bound_sweep(opts['h_list'], jobs=config.jobs)
        sweeps.append(log_bound)
        passed[log_bound.label] = log_bound.metrics['spread'] <= 10.0
    params = {'families': opts['families'], 'h_list': opts['h_list'], 'k': opts['k']}
    _write_sweeps(config, sweeps, params, passed)
    return 0


def _run_apriori(config):
    opts = config.options
    rhs = apriori.SOURCES[opts['source']]
    by_h = apriori.apriori_sweep(
        opts['medium'], opts['z'], rhs, opts['h_list'], opts['modes'], opts['tol'], config.jobs
    )
    by_theta = apriori.theta_sweep(
        opts['medium'],
        opts['theta_h'],
        opts['thetas'],
        rhs,
        opts['modes'],
        opts['tol'],
        config.jobs,
    )
    passed = {sweep.label: sweep.metrics['growth'] < 3.0 for sweep in (by_h, by_theta)}
    params = {
        'z': str(opts['z']),
        'h_list': opts['h_list'],
        'source': opts['source'],
        'modes': list(opts['modes']),
        'thetas': opts['thetas'],
    }
    _write_sweeps(config, [by_h, by_theta], params, passed)
    return 0


def _run_profile_validate(config):
    rows, report = [], {}
    for section, profile in sorted(config.options['profiles'].items()):
        result = validate(profile, config.options['b0'])
        report[section] = str(result)
        for violation in result.violations:
            rows.append((section, violation.index, violation.rule, violation.message))
            click.echo(
                f'[{section}] {violation.rule} at breakpoint {violation.index}: '
                f'{violation.message}',
                err=True,
            )
    write_csv(
        artifact_path(config.out, config.command, config.name, 'csv'),
        ['section', 'index', 'rule', 'message'],
        rows,
    )
    write_json(
        artifact_path(config.out, config.command, config.name, 'json'),
        {
            'experiment': 'profile-validate',
            'b0': config.options['b0'],
            'report': report,
            'pass': not rows,
        },
    )
    return 1 if rows else 0


_RUNNERS = {
    'regions': _run_regions,
    'spectrum': _run_spectrum,
    'dtn-verify': _run_dtn,
    'psido-verify': _run_psido,
    'apriori-verify': _run_apriori,
    'profile-validate': _run_profile_validate,
}


@run_logger
def run(config):
    """
    Execute a parsed command and write its artifacts.

    :param RunConfig config: the parsed command line
    :return: 0 on success, 1 on a computation failure or a failed check of the input, 2 on a
        usage error
    :rtype: int
    """
    log.info('Running %s (%s)', config.command, config.name)
    try:
        code = _RUNNERS[config.command](config)
    except UsageError as error:
        log.error('%s', error)
        return error.exit_code
    except ComputationError as error:
        log.error('The %s run failed: %s', config.command, error)
        write_json(
            artifact_path(config.out, config.command, config.name, 'json'),
            {'experiment': config.command, 'error': str(error), 'partial': True, 'pass': False},
        )
        return 1
    except ItpLabError as error:
        log.error('The %s run stopped: %s', config.command, error)
        return 1
    log.info('Finished %s (%s) with exit code %d', config.command, config.name, code)
    return code


def cli_main(argv=None):
    """Entry point of the ``itp-lab`` console script."""
    try:
        config = parse_config(argv)
    except UsageError as error:
        click.echo(f'Error: {error}', err=True)
        sys.exit(error.exit_code)
    if isinstance(config, int):
        sys.exit(config)
    sys.exit(run(config))
