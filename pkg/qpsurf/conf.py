"""
Settings accessor for qpsurf.

Reads QPSURF_* values from Django settings and falls back to the
defaults below when no project is configured (library use).
"""

from django.conf import settings

DEFAULTS = {
    'QPSURF_DEFAULT_TRUNCATION': 12,
    'QPSURF_DEFAULT_SEED': 7,
    'QPSURF_VERIFY_CASES': 500,
    'QPSURF_REDUCTION_MAX_MOVES': 20000,
    'QPSURF_REDUCTION_ROUNDS': 8,
    'QPSURF_THETA_MAX_PATHS': 400000,
}


def get_setting(name):
    """
    Look up a qpsurf setting.

    Args:
        name: One of the keys of DEFAULTS

    Returns:
        The configured value, or the default when Django is not configured
    """
    default = DEFAULTS[name]
    if not settings.configured:
        return default
    return getattr(settings, name, default)
