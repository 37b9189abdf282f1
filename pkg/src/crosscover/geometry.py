"""Unit vectors, antipodal configurations and their basic predicates."""
from __future__ import annotations

import dataclasses
from typing import Union

import numpy as np

from . import config
from .errors import BadDimension, ZeroVector


def normalize(v) -> np.ndarray:
    """Radially project ``v`` onto the unit sphere.

    Raises
    ------
    ZeroVector
        If ``|v|`` does not exceed the zero tolerance (1e-14 by default).
    """
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if not n > config.get().zero:
        raise ZeroVector(f"cannot normalize vector of norm {n:g}")
    out = v / n
    out.setflags(write=False)
    return out


def normalize_rows(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    n = np.linalg.norm(a, axis=-1, keepdims=True)
    if np.any(n <= config.get().zero):
        raise ZeroVector("cannot normalize a zero row")
    return a / n


def is_unit(x, tol: float | None = None) -> bool:
    tol = config.get().unit if tol is None else tol
    return abs(float(np.dot(x, x)) - 1.0) <= tol


def relative_smallest_singular_value(m) -> float:
    s = np.linalg.svd(np.asarray(m, dtype=float), compute_uv=False)
    if s[0] == 0.0:
        return 0.0
    return float(s[-1] / s[0])


@dataclasses.dataclass(frozen=True, eq=False)
class AntipodalConfig:
    """``2d`` points ``{+-y_1, ..., +-y_d}`` on the sphere, stored by their
    ``d`` representatives (rows of :attr:`representatives`).

    Negations are implicit, so antipodality cannot be broken. Degenerate
    (rank-deficient or repeated) representatives are accepted here;
    algorithms that need general position check for it themselves.
    """

    representatives: np.ndarray

    def __post_init__(self):
        y = np.array(self.representatives, dtype=float)
        if y.ndim != 2 or y.shape[0] != y.shape[1]:
            raise BadDimension(
                f"need d representatives in R^d, got shape {y.shape}")
        if y.shape[0] < 2:
            raise BadDimension("d must be at least 2")
        y = normalize_rows(y)
        y.setflags(write=False)
        object.__setattr__(self, "representatives", y)

    @property
    def dim(self) -> int:
        return self.representatives.shape[0]

    @property
    def points(self) -> np.ndarray:
        """All ``2d`` points: the representatives followed by their negations."""
        y = self.representatives
        return np.concatenate([y, -y])

    @property
    def general_position(self) -> bool:
        return is_general_position(self)

    def gram(self) -> np.ndarray:
        y = self.representatives
        return y @ y.T

    def max_abs_offdiagonal(self) -> float:
        """``max_{i != j} |y_i . y_j|``; zero exactly for a cross-polytope."""
        g = np.abs(self.gram())
        np.fill_diagonal(g, 0.0)
        return float(g.max())

    def is_cross_polytope(self, tol: float | None = None) -> bool:
        tol = config.get().orth if tol is None else tol
        return self.max_abs_offdiagonal() <= tol

    def rotated(self, q) -> "AntipodalConfig":
        """Apply the orthogonal matrix ``q`` to every point."""
        return AntipodalConfig(self.representatives @ np.asarray(q).T)

    def __repr__(self):
        return f"AntipodalConfig(d={self.dim})"


PointSet = Union[AntipodalConfig, np.ndarray]


def as_points(cfg: PointSet) -> np.ndarray:
    """Full ``(N, d)`` point array of an antipodal config or a plain point set."""
    if isinstance(cfg, AntipodalConfig):
        return cfg.points
    pts = np.atleast_2d(np.asarray(cfg, dtype=float))
    if pts.shape[1] < 2:
        raise BadDimension("points must live in R^d with d >= 2")
    return pts


def is_general_position(cfg: AntipodalConfig, tol: float | None = None) -> bool:
    """True iff the representatives span R^d.

    For an antipodal set any containing hyperplane must pass through the
    origin, so this is the same as the ``2d`` points not lying in a
    hyperplane. Uses the singular value ratio so the test is scale free.
    """
    tol = config.get().rank if tol is None else tol
    return relative_smallest_singular_value(cfg.representatives) > tol


def cross_polytope(d: int) -> AntipodalConfig:
    if d < 2:
        raise BadDimension(f"d must be at least 2, got {d}")
    return AntipodalConfig(np.eye(d))


def random_antipodal(d: int, rng_seed: int) -> AntipodalConfig:
    """``d`` independent uniform representatives (normalized Gaussians)."""
    if d < 2:
        raise BadDimension(f"d must be at least 2, got {d}")
    rng = np.random.default_rng(rng_seed)
    return AntipodalConfig(rng.standard_normal((d, d)))


def perturbed_cross_polytope(d: int, theta: float) -> AntipodalConfig:
    """Cross-polytope with the last basis vector tilted by ``theta`` toward e_1.

    ``theta = 0`` gives the regular cross-polytope back.
    """
    y = np.eye(d)
    y[-1] = 0.0
    y[-1, -1] = np.cos(theta)
    y[-1, 0] = np.sin(theta)
    return AntipodalConfig(y)


def uniform_sphere(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` pseudo-uniform points on S^{d-1} (normalized Gaussians)."""
    x = rng.standard_normal((n, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def random_orthogonal(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix via QR with sign correction."""
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


def tangent_project(x, g):
    """Remove the component of ``g`` along ``x`` (row-wise for 2-D input)."""
    return g - np.sum(g * x, axis=-1, keepdims=True) * x
