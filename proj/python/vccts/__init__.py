"""Workbench for value-passing CCS over trees of located processes.

    >>> import vccts
    >>> m = vccts.Module("symbol f/1; process P = ~f(1).(*) | f(x).(*);")
    >>> m.reachable("P")["status"]
    'complete'
"""

from ._vccts import (
    EvalError,
    GraphError,
    GuardError,
    Module,
    ParseError,
    SyntaxError,
    VcctsError,
    abp_delivers,
)

__all__ = [
    "EvalError",
    "GraphError",
    "GuardError",
    "Module",
    "ParseError",
    "SyntaxError",
    "VcctsError",
    "abp_delivers",
    "load",
]


def load(path):
    """Module read from a definition file."""
    return Module.from_file(str(path))
