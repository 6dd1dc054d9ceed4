"""Directional sensitivity analysis of parametric set-constrained programs.

Thin wrapper over the compiled core: every function loads a problem file,
runs one analysis stage, and returns the machine report parsed into a
dict. The report schema is identical to ``dirval --format machine``.
"""

import json as _json

from ._core import (
    ProblemFileError,
    __version__,
    evaluate_expression,
    print_expression,
)
from . import _core


def analyze(path, x=None, direction=None, seed=42):
    """Full directional analysis of the value function."""
    return _json.loads(_core.analyze_report(path, x or [], direction or [], seed))


def value(path, x=None, seed=42):
    """Solve the inner problem at x (default: the file's base point)."""
    return _json.loads(_core.value_report(path, x or [], seed))


def multipliers(path, x=None, y=None, direction=None, seed=42):
    """Clarke and limiting multiplier sets at (x, y)."""
    return _json.loads(
        _core.multipliers_report(path, x or [], y or [], direction or [], seed)
    )


def cq(path, x=None, y=None, seed=42):
    """Constraint qualifications at (x, y)."""
    return _json.loads(_core.cq_report(path, x or [], y or [], seed))


def rs(path, x=None, y=None, direction=None, seed=42):
    """Directional stability certificate and numeric probe at (x, y)."""
    return _json.loads(_core.rs_report(path, x or [], y or [], direction or [], seed))


def validate(path):
    """Validate a problem file; the result carries the diagnostics."""
    return _json.loads(_core.validate_report(path))


__all__ = [
    "ProblemFileError",
    "__version__",
    "analyze",
    "cq",
    "evaluate_expression",
    "multipliers",
    "print_expression",
    "rs",
    "validate",
    "value",
]
