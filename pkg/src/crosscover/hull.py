"""Facets of the convex hull of an antipodal configuration.

If ``y_1, ..., y_d`` span R^d, the hull of ``{+-y_i}`` has exactly ``2^d``
simplicial facets, one per sign vector ``sigma``: the simplex on
``sigma_1 y_1, ..., sigma_d y_d``. Its hyperplane ``{x : x . w = 1}``
satisfies ``(sigma_i y_i) . w = 1``, i.e. ``Y w = sigma``, so a single LU
factorization of ``Y`` gives every facet. ``w_{-sigma} = -w_sigma``, so
only half the sign vectors are solved.

Sign vectors are indexed by a bitmask whose bit ``d-1-i`` is set iff
``sigma_i = +1``; sorting by bitmask is lexicographic order on ``sigma``
with ``-1 < +1``.
"""
from __future__ import annotations

import csv
import dataclasses
import io
from typing import List

import numpy as np
from scipy import linalg

from . import config
from .errors import NotGeneralPosition, NumericalDegeneracy
from .geometry import AntipodalConfig, is_general_position, uniform_sphere
from .pointfile import format_float


def sign_vectors(d: int) -> np.ndarray:
    """All ``2^d`` sign vectors as rows, ordered by bitmask."""
    masks = np.arange(2 ** d)
    bits = (masks[:, None] >> np.arange(d - 1, -1, -1)[None, :]) & 1
    return np.where(bits == 1, 1.0, -1.0)


def sigma_bitmask(sigma) -> int:
    m = 0
    for s in sigma:
        m = (m << 1) | (1 if s > 0 else 0)
    return m


@dataclasses.dataclass(frozen=True, eq=False)
class Facet:
    sigma: tuple
    normal: np.ndarray
    offset: float

    @property
    def bitmask(self) -> int:
        return sigma_bitmask(self.sigma)

    def vertices(self, cfg: AntipodalConfig) -> np.ndarray:
        return np.asarray(self.sigma)[:, None] * cfg.representatives


@dataclasses.dataclass(frozen=True, eq=False)
class HullStructure:
    """All ``2^d`` facets, stored as parallel arrays sorted by bitmask."""

    config: AntipodalConfig
    sigmas: np.ndarray     # (2^d, d) entries +-1
    normals: np.ndarray    # (2^d, d) outward unit normals z_sigma
    offsets: np.ndarray    # (2^d,)  distances a_sigma from the origin

    def __len__(self):
        return len(self.offsets)

    @property
    def facets(self) -> List[Facet]:
        return [Facet(tuple(int(v) for v in s), z, float(a))
                for s, z, a in zip(self.sigmas, self.normals, self.offsets)]

    def facet(self, sigma) -> Facet:
        k = sigma_bitmask(sigma)
        return Facet(tuple(int(v) for v in self.sigmas[k]),
                     self.normals[k], float(self.offsets[k]))

    def to_csv(self) -> str:
        d = self.config.dim
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["sigma_bitmask", "a_sigma"] + [f"z_{i + 1}" for i in range(d)])
        for k, (z, a) in enumerate(zip(self.normals, self.offsets)):
            w.writerow([k, format_float(a)] + [format_float(v) for v in z])
        return out.getvalue()


def enumerate_facets(cfg: AntipodalConfig) -> HullStructure:
    """Enumerate the ``2^d`` facets of the hull of ``{+-y_i}``.

    Raises
    ------
    NotGeneralPosition
        If the representatives are rank deficient.
    NumericalDegeneracy
        If some offset is not a positive finite number.
    """
    if not is_general_position(cfg):
        raise NotGeneralPosition("representatives do not span R^d")
    d = cfg.dim
    sig = sign_vectors(d)
    half = 2 ** (d - 1)
    # Y w = sigma for the half with sigma_1 = -1; the rest mirrors
    lu = linalg.lu_factor(cfg.representatives)
    w_half = linalg.lu_solve(lu, sig[:half].T).T
    w = np.concatenate([w_half, -w_half[::-1]])
    norms = np.linalg.norm(w, axis=1)
    offsets = 1.0 / norms
    if not np.all(np.isfinite(offsets)) or np.any(offsets <= 0.0):
        raise NumericalDegeneracy("non-positive facet offset")
    normals = w * offsets[:, None]
    for a in (sig, normals, offsets):
        a.setflags(write=False)
    return HullStructure(cfg, sig, normals, offsets)


def boundary_cover_counts(h: HullStructure, n_samples: int, rng_seed: int,
                          chunk: int = 1 << 15) -> dict:
    """Tally how random directions fall into the facet cones.

    For each sample ``x`` the coordinates ``c`` with ``x = sum c_i y_i``
    pick the cone ``sigma = sign(c)``; ``x / sum|c_i|`` must then lie on
    that facet's hyperplane and inside every other supporting half-space.
    """
    tol = config.get().hull
    cfg = h.config
    d = cfg.dim
    rng = np.random.default_rng(rng_seed)
    lu = linalg.lu_factor(cfg.representatives.T)
    stats = dict(samples=0, uncovered=0, off_facet=0, outside=0, multiple=0)
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        x = uniform_sphere(m, d, rng)
        c = linalg.lu_solve(lu, x.T).T
        sigma = np.where(c >= 0.0, 1.0, -1.0)
        sc = c * sigma
        stats["uncovered"] += int(np.sum(np.any(sc < -tol, axis=1)))
        # strict membership: all sigma_i c_i > tol; count how many tau fit
        strict = np.prod((c > tol).astype(int) + (c < -tol).astype(int), axis=1)
        stats["multiple"] += int(np.sum(strict > 1))
        p = x / sc.sum(axis=1, keepdims=True)
        masks = ((sigma > 0).astype(np.int64)
                 << np.arange(d - 1, -1, -1)).sum(axis=1)
        on = np.einsum("ij,ij->i", p, h.normals[masks]) - h.offsets[masks]
        stats["off_facet"] += int(np.sum(np.abs(on) > tol))
        slack = p @ h.normals.T - h.offsets[None, :]
        stats["outside"] += int(np.sum(slack.max(axis=1) > tol))
        stats["samples"] += m
        done += m
    return stats


def verify_boundary_cover(h: HullStructure, n_samples: int, rng_seed: int) -> bool:
    """Check by sampling that the facet cones tile the sphere.

    Every sample must land in exactly one cone, and its radial image on the
    hull boundary must sit on that cone's facet.
    """
    if not is_general_position(h.config):
        raise NotGeneralPosition("representatives do not span R^d")
    s = boundary_cover_counts(h, n_samples, rng_seed)
    return s["uncovered"] == s["off_facet"] == s["outside"] == s["multiple"] == 0
