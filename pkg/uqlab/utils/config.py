"""
Environment configuration for uqlab
"""

import os

from uqlab._core.errors import ConfigError

DEFAULT_MAX_THREADS = 8


def thread_count() -> int:
    """
    Worker cap for internal parallelism

    Reads UQLAB_THREADS; 0 or unset falls back to min(8, cpu count).
    """
    raw = os.getenv('UQLAB_THREADS', '').strip()
    if raw in ('', '0'):
        return max(1, min(DEFAULT_MAX_THREADS, os.cpu_count() or 1))
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f'UQLAB_THREADS must be an integer, got {raw!r}') from None
    if value < 0:
        raise ConfigError(f'UQLAB_THREADS must be nonnegative, got {value}')
    return value
