"""Numerical tolerances shared across the package.

Defaults are module constants; :func:`override` swaps them for the
duration of a ``with`` block (the CLI uses this for ``--tol-unit`` and
``--tol-hull``).
"""
from __future__ import annotations

import contextlib
import contextvars
import dataclasses


@dataclasses.dataclass(frozen=True)
class Tolerances:
    unit: float = 1e-10    # |x|^2 slack for unit vectors
    rank: float = 1e-9     # smallest / largest singular value
    hull: float = 1e-9     # supporting-hyperplane slack
    orth: float = 1e-8     # max |y_i . y_j| for an orthonormal basis
    zero: float = 1e-14    # norms at or below this are treated as zero


DEFAULT = Tolerances()

_current: contextvars.ContextVar[Tolerances] = contextvars.ContextVar(
    "crosscover_tolerances", default=DEFAULT)


def get() -> Tolerances:
    """Return the tolerances currently in effect."""
    return _current.get()


@contextlib.contextmanager
def override(**changes):
    """Temporarily replace some tolerances.

    >>> with override(hull=1e-6):
    ...     get().hull
    1e-06
    """
    token = _current.set(dataclasses.replace(_current.get(), **changes))
    try:
        yield _current.get()
    finally:
        _current.reset(token)
