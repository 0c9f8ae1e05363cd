# SPDX-License-Identifier: GPL-3.0-or-later
import functools
import hashlib

from dogpile.cache import make_region
from dogpile.cache.api import NO_VALUE
import numpy as np

from itp_lab.config import get_config


def batch_should_use_cache(*args, **kwargs):
    """Return true when the call integrates a batch of spectral parameters."""
    lams = kwargs.get('lams', args[4] if len(args) > 4 else None)
    return lams is not None and np.size(lams) > 1


def dogpile_cache(dogpile_region, should_use_cache_fn):
    """
    Memoize a mode integration in a dogpile region.

    :param dogpile_region: the region, configured on the first cached call
    :param should_use_cache_fn: a predicate on the call arguments; false bypasses the region
    """

    def cache_decorator(func):
        @functools.wraps(func)
        def inner(*args, **kwargs):
            should_cache = should_use_cache_fn(*args, **kwargs)

            if should_cache:
                configure_dogpile_region(dogpile_region)
                cache_key = generate_cache_key(func.__name__, *args, **kwargs)
                output_cache = dogpile_region.get(cache_key)
                if output_cache is not NO_VALUE:
                    return output_cache

            output = func(*args, **kwargs)

            if should_cache:
                dogpile_region.set(cache_key, output)

            return output

        return inner

    return cache_decorator


def _key_part(arg):
    if isinstance(arg, np.ndarray):
        digest = hashlib.sha256(np.ascontiguousarray(arg).tobytes()).hexdigest()
        return f'ndarray[{arg.dtype},{arg.shape}]:{digest}'
    return repr(arg)


def generate_cache_key(fn, *args, **kwargs):
    """Generate key that is used in dogpile cache."""
    arguments = '|'.join(
        [_key_part(arg) for arg in args]
        + [f'{kwarg}={_key_part(kwargs[kwarg])}' for kwarg in sorted(kwargs)]
    )
    return f'{fn}|{arguments}'


def create_dogpile_region():
    """
    Create a dogpile region.

    The backend is configured on first use so that it follows the configuration file of the run.
    """
    return make_region()


def configure_dogpile_region(region):
    """Configure ``region`` from the active configuration unless it already is."""
    if region.is_configured:
        return region
    conf = get_config()
    return region.configure(
        conf.itp_lab_dogpile_backend,
        expiration_time=conf.itp_lab_dogpile_expiration_time,
        arguments=conf.itp_lab_dogpile_arguments,
    )
