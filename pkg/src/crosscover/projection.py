"""Spherical measure of simplicial cones, and simplices inscribed in a cap rim.

The radial projection of a simplex with vertices ``v_1, ..., v_d`` onto
S^{d-1} is ``cone(v_1, ..., v_d) ∩ S^{d-1}``; its (d-1)-volume is what the
functions here call the projected volume. A direction ``x`` is in the cone
iff the solution of ``V^T c = x`` is non-negative, which is independent of
the lengths of the generators.
"""
from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np
from scipy import linalg

from . import config
from .errors import DegenerateCone
from .geometry import relative_smallest_singular_value, uniform_sphere


class VolumeMethod(enum.Enum):
    MONTE_CARLO = "monte-carlo"
    EXACT_D3 = "exact-d3"


@dataclasses.dataclass(frozen=True)
class SolidAngleEstimate:
    value: float
    stderr: float
    method: VolumeMethod
    n_samples: int


def sphere_area(d: int) -> float:
    """(d-1)-volume of S^{d-1}: ``2 pi^(d/2) / Gamma(d/2)``."""
    return 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)


def _generators(s) -> np.ndarray:
    if isinstance(s, CapSimplex):
        return s.vertices
    if hasattr(s, "vertices") and hasattr(s, "sigma"):
        raise TypeError("pass facet.vertices(cfg) for a hull facet")
    v = np.atleast_2d(np.asarray(s, dtype=float))
    if v.shape[0] != v.shape[1]:
        raise DegenerateCone(f"need d generators in R^d, got shape {v.shape}")
    return v


def _check_cone(v: np.ndarray):
    if relative_smallest_singular_value(v) <= config.get().rank:
        raise DegenerateCone("cone generators are linearly dependent")


def cone_hits(v: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Boolean mask of which rows of ``x`` lie in ``cone(rows of v)``."""
    c = linalg.solve(v.T, x.T, check_finite=False)
    return np.all(c >= 0.0, axis=0)


def projected_volume_mc(s, n_samples: int = 100_000, rng_seed: int = 0,
                        chunk: int = 1 << 15) -> SolidAngleEstimate:
    """Monte Carlo spherical volume of the cone over ``s``.

    ``s`` is a :class:`CapSimplex` or a ``(d, d)`` array of generators.
    The standard error is the binomial one, scaled by the sphere area.
    """
    if n_samples < 1000:
        raise ValueError("n_samples must be at least 1000")
    v = _generators(s)
    _check_cone(v)
    d = v.shape[0]
    rng = np.random.default_rng(rng_seed)
    hits = 0
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        hits += int(cone_hits(v, uniform_sphere(m, d, rng)).sum())
        done += m
    p = hits / n_samples
    area = sphere_area(d)
    return SolidAngleEstimate(p * area, area * math.sqrt(p * (1 - p) / n_samples),
                              VolumeMethod.MONTE_CARLO, n_samples)


def projected_volume_exact_d3(s) -> float:
    """Area of the spherical triangle cut out by a cone in R^3.

    Girard: area = alpha + beta + gamma - pi, with the triangle's angles
    measured between tangent vectors at each vertex.
    """
    v = _generators(s)
    if v.shape != (3, 3):
        raise DegenerateCone("exact formula is for three generators in R^3")
    _check_cone(v)
    u = v / np.linalg.norm(v, axis=1, keepdims=True)
    total = 0.0
    for i in range(3):
        a, b, c = u[i], u[(i + 1) % 3], u[(i + 2) % 3]
        tb = b - (a @ b) * a
        tc = c - (a @ c) * a
        cosang = tb @ tc / (np.linalg.norm(tb) * np.linalg.norm(tc))
        total += math.acos(min(1.0, max(-1.0, cosang)))
    return total - math.pi


# -- simplices on the rim of a cap -------------------------------------------

@dataclasses.dataclass(frozen=True, eq=False)
class CapSimplex:
    """``d`` unit vectors with last coordinate ``cap_height``.

    The vertices lie on the (d-2)-sphere where the hyperplane
    ``x_d = cap_height`` meets S^{d-1}.
    """

    dim: int
    cap_height: float
    vertices: np.ndarray

    @classmethod
    def from_directions(cls, a: float, dirs) -> "CapSimplex":
        """Build from ``d`` unit vectors ``u_k`` in R^{d-1}:
        vertex ``k`` is ``(sqrt(1 - a^2) u_k, a)``."""
        u = np.asarray(dirs, dtype=float)
        u = u / np.linalg.norm(u, axis=1, keepdims=True)
        d = u.shape[1] + 1
        if u.shape[0] != d:
            raise ValueError(f"need {d} directions in R^{d - 1}")
        verts = np.hstack([math.sqrt(1.0 - a * a) * u, np.full((d, 1), a)])
        verts.setflags(write=False)
        return cls(d, a, verts)

    @classmethod
    def from_angles(cls, d: int, a: float, angles) -> "CapSimplex":
        """``angles`` has shape ``(d, d-2)``: hyperspherical coordinates of
        each vertex on the rim."""
        return cls.from_directions(a, rim_directions(np.asarray(angles, float)))

    def edge_lengths(self) -> np.ndarray:
        v = self.vertices
        i, j = np.triu_indices(self.dim, 1)
        return np.linalg.norm(v[i] - v[j], axis=1)

    def regularity_defect(self) -> float:
        """``max |edge - mean edge| / mean edge``; zero iff regular."""
        e = self.edge_lengths()
        return float(np.max(np.abs(e - e.mean())) / e.mean())


def rim_directions(angles: np.ndarray) -> np.ndarray:
    """Hyperspherical coordinates -> unit vectors.

    ``angles[..., k]`` for ``k < m-1`` are polar angles and the last one is
    the azimuth; output lives in R^{m+1}.
    """
    angles = np.atleast_2d(angles)
    n, m = angles.shape
    out = np.ones((n, m + 1))
    s = np.ones(n)
    for k in range(m):
        out[:, k] = s * np.cos(angles[:, k])
        s = s * np.sin(angles[:, k])
    out[:, m] = s
    return out


def rim_angles(dirs: np.ndarray) -> np.ndarray:
    """Inverse of :func:`rim_directions` for unit vectors in R^{m+1}."""
    dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
    n, m1 = dirs.shape
    m = m1 - 1
    ang = np.zeros((n, m))
    for k in range(m - 1):
        tail = np.linalg.norm(dirs[:, k:], axis=1)
        ang[:, k] = np.arccos(np.clip(dirs[:, k] / np.where(tail > 0, tail, 1), -1, 1))
    ang[:, m - 1] = np.arctan2(dirs[:, m], dirs[:, m - 1])
    return ang


def regular_simplex_directions(n: int) -> np.ndarray:
    """``n`` unit vectors in R^{n-1} with all pairwise dots ``-1/(n-1)``."""
    e = np.eye(n) - 1.0 / n
    # orthonormal basis of the hyperplane sum(x) = 0
    q, _ = np.linalg.qr(e[:, :-1])
    u = e @ q
    return u / np.linalg.norm(u, axis=1, keepdims=True)


def regular_cap_simplex(d: int, a: float) -> CapSimplex:
    return CapSimplex.from_directions(a, regular_simplex_directions(d))


@dataclasses.dataclass(frozen=True, eq=False)
class CapSearchResult:
    best: CapSimplex
    volume: SolidAngleEstimate
    regularity_defect: float
    n_improvements: int


class _CapObjective:
    """Projected volume of a rim simplex as a function of its angles.

    Exact at d = 3. Otherwise the hit fraction over one fixed sample set
    (common random numbers), so that candidate comparisons are consistent.
    """

    def __init__(self, d, a, n_samples, rng):
        self.d, self.a = d, a
        self.exact = d == 3
        if not self.exact:
            x = uniform_sphere(n_samples, d, rng)
            # the projection of a rim simplex never leaves the cap x_d >= a
            self.x = x[x[:, -1] >= a]
            self.scale = sphere_area(d) / n_samples

    def __call__(self, angles) -> float:
        s = CapSimplex.from_angles(self.d, self.a, angles)
        if relative_smallest_singular_value(s.vertices) <= config.get().rank:
            return 0.0
        if self.exact:
            return projected_volume_exact_d3(s)
        return self.scale * float(cone_hits(s.vertices, self.x).sum())


def _coordinate_ascent(obj, theta, step, min_step):
    f = obj(theta)
    moves = 0
    while step >= min_step:
        improved = False
        for idx in np.ndindex(theta.shape):
            for sgn in (1.0, -1.0):
                trial = theta.copy()
                trial[idx] += sgn * step
                ft = obj(trial)
                if ft > f + 1e-15 * abs(f):
                    theta, f = trial, ft
                    improved = True
                    moves += 1
                    break
        if not improved:
            step *= 0.5
    return theta, f, moves


def maximize_cap_simplex(d: int, a: float, restarts: int = 8, rng_seed: int = 0,
                         n_samples: int = 200_000, initial: CapSimplex | None = None,
                         min_step: float | None = None) -> CapSearchResult:
    """Search for the rim simplex whose radial projection is largest.

    Multistart coordinate ascent over the hyperspherical angles of the
    vertices. The global rotation about the x_d axis is left free; the
    regularity defect does not depend on it. With ``initial`` the first
    restart begins there; ``n_improvements`` counts accepted moves of the
    winning run.
    """
    if not 0.0 < a < 1.0:
        raise ValueError("cap height must lie in (0, 1)")
    if d < 3:
        raise ValueError("rim simplices need d >= 3")
    rng = np.random.default_rng(rng_seed)
    if min_step is None:
        min_step = 1e-8 if d == 3 else 2e-3
    best = None
    for r in range(restarts):
        obj = _CapObjective(d, a, n_samples, rng)
        if r == 0 and initial is not None:
            dirs = initial.vertices[:, :-1]
        else:
            dirs = uniform_sphere(d, d - 1, rng)
        theta = rim_angles(dirs)
        theta, f, moves = _coordinate_ascent(obj, theta, 0.25, min_step)
        if best is None or f > best[1]:
            best = (theta, f, moves)
    theta, f, moves = best
    simplex = CapSimplex.from_angles(d, a, theta)
    if d == 3:
        vol = SolidAngleEstimate(projected_volume_exact_d3(simplex), 0.0,
                                 VolumeMethod.EXACT_D3, 0)
    else:
        # fresh samples so the reported value is not biased by the search
        vol = projected_volume_mc(simplex, n_samples,
                                  int(rng.integers(2 ** 63)))
    return CapSearchResult(simplex, vol, simplex.regularity_defect(), moves)


def cap_monotonicity_check(d: int, a1: float, a2: float,
                           n_samples: int = 200_000, rng_seed: int = 0) -> bool:
    """Does the regular rim simplex at height ``a1`` project to strictly more
    area than the one at ``a2``?

    Exact at d = 3; otherwise a paired Monte Carlo comparison on shared
    samples, declared strict only beyond three standard errors.
    """
    if not (0.0 < a1 < 1.0 and 0.0 < a2 < 1.0):
        raise ValueError("cap heights must lie in (0, 1)")
    s1, s2 = regular_cap_simplex(d, a1), regular_cap_simplex(d, a2)
    if d == 3:
        return projected_volume_exact_d3(s1) > projected_volume_exact_d3(s2)
    x = uniform_sphere(n_samples, d, np.random.default_rng(rng_seed))
    diff = (cone_hits(s1.vertices, x).astype(float)
            - cone_hits(s2.vertices, x).astype(float))
    mean = diff.mean()
    se = diff.std(ddof=1) / math.sqrt(n_samples)
    return bool(mean > 3.0 * se)
