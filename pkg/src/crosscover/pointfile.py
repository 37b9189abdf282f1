"""Plain-text point-set files.

Layout::

    # antipodal-representatives      (optional marker line)
    d N
    x_11 ... x_1d
    ...
    x_N1 ... x_Nd

Numbers are written with 17 significant digits so a round trip is exact.
With the marker line, ``N == d`` and the rows are the representatives of
an antipodal configuration.
"""
from __future__ import annotations

import io
import os

import numpy as np

from .errors import PointFileError
from .geometry import AntipodalConfig

ANTIPODAL_MARKER = "# antipodal-representatives"


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def dumps(cfg) -> str:
    if isinstance(cfg, AntipodalConfig):
        pts = cfg.representatives
        header = ANTIPODAL_MARKER + "\n"
    else:
        pts = np.atleast_2d(np.asarray(cfg, dtype=float))
        header = ""
    n, d = pts.shape
    out = io.StringIO()
    out.write(header)
    out.write(f"{d} {n}\n")
    for row in pts:
        out.write(" ".join(format_float(v) for v in row) + "\n")
    return out.getvalue()


def loads(text: str):
    """Parse a point file; returns an :class:`AntipodalConfig` when the
    marker line is present, otherwise an ``(N, d)`` array."""
    antipodal = False
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.split() == ANTIPODAL_MARKER.split():
                antipodal = True
            continue
        try:
            rows.append([float(tok) for tok in line.split()])
        except ValueError as exc:
            raise PointFileError(f"line {lineno}: {exc}") from None
    if not rows:
        raise PointFileError("empty point file")
    header, body = rows[0], rows[1:]
    if len(header) != 2 or any(v != int(v) for v in header):
        raise PointFileError("first data line must be 'd N'")
    d, n = int(header[0]), int(header[1])
    if len(body) != n:
        raise PointFileError(f"expected {n} points, found {len(body)}")
    if any(len(r) != d for r in body):
        raise PointFileError(f"every point must have {d} coordinates")
    pts = np.array(body, dtype=float).reshape(n, d)
    if antipodal:
        if n != d:
            raise PointFileError("antipodal file needs exactly d representatives")
        return AntipodalConfig(pts)
    return pts


def read(path: str | os.PathLike):
    with open(path, encoding="ascii") as fh:
        return loads(fh.read())


def write(path: str | os.PathLike, cfg) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps(cfg))
