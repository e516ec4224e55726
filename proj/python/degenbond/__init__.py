"""Fitted finite-volume solver for the degenerate zero-coupon bond equation.

Every solver entry point takes the text of a config file. ``make_config`` writes one
from keyword arguments for the common cases::

    cfg = degenbond.make_config("example1", steps=1000, xi=0.5)
    table = degenbond.sweep(cfg, nodes=[21, 41, 81])
"""

from ._degenbond import (
    ConfigError,
    DegenbondError,
    NumericalError,
    assemble,
    compare,
    parse_config,
    run,
    sweep,
)

__all__ = [
    "ConfigError",
    "DegenbondError",
    "NumericalError",
    "assemble",
    "compare",
    "make_config",
    "parse_config",
    "run",
    "sweep",
]


def _format(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ", ".join(str(v) for v in value)
    return str(value)


def make_config(problem="example1", **settings):
    """Config text for a built-in problem; keys follow the config file names (N, M, xi, T, ...)."""
    lines = [f"problem = {problem}"]
    lines += [f"{key} = {_format(value)}" for key, value in settings.items() if value is not None]
    return "\n".join(lines) + "\n"
