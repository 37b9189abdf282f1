"""Potential functions of the dot product.

A potential ``f`` of the squared distance ``u = |x - y|^2`` in ``[0, 4]`` is
used through ``g(t) = f(2 - 2t)`` with ``t = x . y`` in ``[-1, 1]``.
``g(1)`` may be ``+inf``. ``h(t) = g(t) + g(-t)`` is the contribution of an
antipodal pair.
"""
from __future__ import annotations

import dataclasses
import enum
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline


class Kind(enum.Enum):
    RIESZ = "riesz"
    LOG = "log"
    GAUSS = "gauss"
    GRID = "grid"
    CUSTOM = "custom"


FD_STEP = 1e-5
CERT_POINTS = 2049
CERT_SLACK = 1e-8


@dataclasses.dataclass(frozen=True, eq=False)
class PotentialFunction:
    """Evaluable ``g`` on ``[-1, 1]`` with derivative access.

    Use the constructors :meth:`riesz`, :meth:`log`, :meth:`gauss`,
    :meth:`grid`, :meth:`from_callable` or :func:`parse`.
    """

    kind: Kind
    param: Optional[float]
    _g: Callable = dataclasses.field(repr=False)
    _dg: Optional[Callable] = dataclasses.field(default=None, repr=False)
    label: str = ""
    _d2g: Optional[Callable] = dataclasses.field(default=None, repr=False)

    # -- constructors ------------------------------------------------------
    @classmethod
    def riesz(cls, s: float) -> "PotentialFunction":
        """``f(u) = u^(-s/2)`` for ``s > 0`` and ``-u^(-s/2)`` for ``s < 0``."""
        if s == 0:
            raise ValueError("Riesz exponent must be non-zero (use log)")
        sign = 1.0 if s > 0 else -1.0

        def g(t):
            u = 2.0 - 2.0 * t
            with np.errstate(divide="ignore"):
                return sign * np.power(u, -s / 2.0)

        def dg(t):
            u = 2.0 - 2.0 * t
            with np.errstate(divide="ignore"):
                return abs(s) * np.power(u, -s / 2.0 - 1.0)

        def d2g(t):
            u = 2.0 - 2.0 * t
            with np.errstate(divide="ignore"):
                return abs(s) * (s + 2.0) * np.power(u, -s / 2.0 - 2.0)

        return cls(Kind.RIESZ, float(s), g, dg, f"riesz:{s:g}", d2g)

    @classmethod
    def log(cls) -> "PotentialFunction":
        """``f(u) = (1/2) ln(1/u)``, i.e. ``g(t) = -(1/2) ln(2 - 2t)``."""

        def g(t):
            with np.errstate(divide="ignore"):
                return -0.5 * np.log(2.0 - 2.0 * t)

        def dg(t):
            with np.errstate(divide="ignore"):
                return 1.0 / (2.0 - 2.0 * t)

        def d2g(t):
            with np.errstate(divide="ignore"):
                return 2.0 / (2.0 - 2.0 * t) ** 2

        return cls(Kind.LOG, None, g, dg, "log", d2g)

    @classmethod
    def gauss(cls, alpha: float) -> "PotentialFunction":
        """``g(t) = exp(alpha t)``."""
        if not alpha > 0:
            raise ValueError("Gauss parameter must be positive")
        return cls(Kind.GAUSS, float(alpha), lambda t: np.exp(alpha * t),
                   lambda t: alpha * np.exp(alpha * t), f"gauss:{alpha:g}",
                   lambda t: alpha * alpha * np.exp(alpha * t))

    @classmethod
    def grid(cls, values) -> "PotentialFunction":
        """Tabulated ``g`` on an equispaced grid of ``[-1, 1]`` (cubic spline)."""
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or len(values) < 4:
            raise ValueError("need at least 4 grid values")
        spline = CubicSpline(np.linspace(-1.0, 1.0, len(values)), values)
        return cls(Kind.GRID, None, lambda t: spline(np.clip(t, -1.0, 1.0)),
                   None, "grid")

    @classmethod
    def from_callable(cls, g: Callable, dg: Callable | None = None,
                      label: str = "custom") -> "PotentialFunction":
        """Wrap a vectorized ``g``; ``dg`` defaults to central differences."""
        return cls(Kind.CUSTOM, None, g, dg, label)

    # -- evaluation --------------------------------------------------------
    def __call__(self, t):
        t = np.clip(np.asarray(t, dtype=float), -1.0, 1.0)
        return self._g(t)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        if self._dg is not None:
            return self._dg(np.clip(t, -1.0, 1.0))
        hs = FD_STEP
        lo = np.clip(t - hs, -1.0, 1.0)
        hi = np.clip(t + hs, -1.0, 1.0)
        with np.errstate(invalid="ignore"):
            return (self(hi) - self(lo)) / (hi - lo)

    def second_derivative(self, t):
        t = np.asarray(t, dtype=float)
        if self._d2g is not None:
            return self._d2g(np.clip(t, -1.0, 1.0))
        hs = FD_STEP
        lo = np.clip(t - hs, -1.0, 1.0)
        hi = np.clip(t + hs, -1.0, 1.0)
        return (self.derivative(hi) - self.derivative(lo)) / (hi - lo)

    def h(self, t):
        t = np.asarray(t, dtype=float)
        return self(t) + self(-t)

    def dh(self, t):
        t = np.asarray(t, dtype=float)
        return self.derivative(t) - self.derivative(-t)

    def d2h(self, t):
        t = np.asarray(t, dtype=float)
        return self.second_derivative(t) + self.second_derivative(-t)

    def f(self, u):
        """The same potential as a function of squared distance."""
        return self(1.0 - np.asarray(u, dtype=float) / 2.0)

    # -- hypotheses --------------------------------------------------------
    def second_derivative_grid(self, n: int = CERT_POINTS):
        """Midpoints and first differences of ``g'`` on the interior of an
        ``n``-point grid of ``[-1, 1]``: a sampled ``g''``."""
        t = np.linspace(-1.0, 1.0, n)[1:-1]
        dg = self.derivative(t)
        return 0.5 * (t[1:] + t[:-1]), np.diff(dg) / np.diff(t)

    def certificate(self, strict: bool = False) -> bool:
        """Numerical check that ``g'' >= 0`` (``> 0`` if ``strict``) and that
        ``g''`` is convex on ``(-1, 1)``.

        Differences are compared against ``1e-8`` times the local magnitude,
        since ``g''`` of singular potentials grows without bound near 1.
        Without a closed-form ``g'`` the rounding noise of the central
        differences is added to the slack.
        """
        t, g2 = self.second_derivative_grid()
        if not np.all(np.isfinite(g2)):
            return False
        scale = np.maximum(1.0, np.abs(g2))
        if self._dg is None:
            spacing = t[1] - t[0]
            noise = 8 * np.finfo(float).eps * np.abs(self(t)) / (FD_STEP * spacing)
            scale = scale + noise / CERT_SLACK
        if strict:
            if np.any(g2 <= CERT_SLACK * scale):
                return False
        elif np.any(g2 < -CERT_SLACK * scale):
            return False
        second = g2[:-2] - 2.0 * g2[1:-1] + g2[2:]
        local = np.maximum(np.maximum(scale[:-2], scale[1:-1]), scale[2:])
        return bool(np.all(second >= -CERT_SLACK * local))

    def __str__(self):
        return self.label or self.kind.value


def parse(text: str) -> PotentialFunction:
    """``"riesz:2"``, ``"log"``, ``"gauss:1"`` -> :class:`PotentialFunction`."""
    name, _, arg = text.strip().lower().partition(":")
    if name == "riesz":
        return PotentialFunction.riesz(float(arg))
    if name == "log":
        return PotentialFunction.log()
    if name == "gauss":
        return PotentialFunction.gauss(float(arg) if arg else 1.0)
    raise ValueError(f"unknown potential {text!r}")


def builtin_potentials():
    """The five built-ins used throughout the checks."""
    return [PotentialFunction.riesz(1), PotentialFunction.riesz(2),
            PotentialFunction.riesz(3), PotentialFunction.log(),
            PotentialFunction.gauss(1)]


