"""Global comparison tolerance.

All sign tests and coordinate comparisons in the package go through a single
epsilon. The default (1e-9) suits desk-scale instances with moderate
coordinates; the CLI lets the TERRAVIS_EPS environment variable override it.
"""

import os

DEFAULT_EPS = 1e-9

_eps = DEFAULT_EPS


def get_epsilon() -> float:
    return _eps


def set_epsilon(value: float) -> None:
    global _eps
    if value <= 0:
        raise ValueError("epsilon must be positive")
    _eps = value


def epsilon_from_env() -> float:
    """Read TERRAVIS_EPS if set, install it as the global epsilon, return it."""
    raw = os.environ.get("TERRAVIS_EPS")
    if raw is not None:
        set_epsilon(float(raw))
    return _eps
