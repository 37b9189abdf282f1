"""Covering quantities: ``eta = min_x max_i x . x_i`` and the mesh norm.

On the unit sphere ``|x - x_i|^2 = 2 - 2 x . x_i``, so the mesh norm is
``rho = sqrt(2 - 2 eta)`` and maximizing ``eta`` is the same as minimizing
``rho``.
"""
from __future__ import annotations

import dataclasses
import enum

import numpy as np
from scipy import optimize

from .errors import NotGeneralPosition, WitnessNotFound
from .geometry import (AntipodalConfig, as_points, is_general_position,
                       normalize, tangent_project, uniform_sphere)
from .hull import enumerate_facets


class Method(enum.Enum):
    EXACT_FACET = "exact"
    SAMPLED = "sampled"


@dataclasses.dataclass(frozen=True, eq=False)
class CoveringReport:
    eta: float
    rho: float
    witness: np.ndarray
    method: Method
    tolerance: float


def rho_from_eta(eta: float) -> float:
    return float(np.sqrt(max(2.0 - 2.0 * eta, 0.0)))


def max_dot(points: np.ndarray, x: np.ndarray) -> float:
    return float(np.max(points @ x))


def eta_exact(cfg: AntipodalConfig) -> CoveringReport:
    """Exact ``eta`` of a general-position antipodal configuration.

    Any unit ``x`` lies in some facet cone: ``x = sum c_i sigma_i y_i`` with
    ``c_i >= 0``. Dotting with ``z_sigma`` gives ``sum c_i = x . z_sigma /
    a_sigma <= 1 / a_sigma``, and dotting with ``x`` gives ``1 <= sum c_i *
    max_i x . (sigma_i y_i)``, so ``max_i x . x_i >= a_sigma``. The normal
    ``z_sigma`` attains ``a_sigma`` because its hyperplane supports the
    hull. Hence ``eta = min_sigma a_sigma`` with witness ``z_sigma``.

    Ties (all offsets agree for the cross-polytope) go to the
    lexicographically smallest sign vector.
    """
    if not is_general_position(cfg):
        raise NotGeneralPosition(
            "eta_exact needs general position; use eta_sampled")
    h = enumerate_facets(cfg)
    eta = float(h.offsets.min())
    k = int(np.flatnonzero(h.offsets <= eta + 1e-12)[0])
    witness = h.normals[k].copy()
    witness.setflags(write=False)
    return CoveringReport(eta, rho_from_eta(eta), witness, Method.EXACT_FACET, 0.0)


def _min_norm_in_hull(g: np.ndarray) -> np.ndarray:
    """Smallest vector in the convex hull of the rows of ``g``."""
    if len(g) == 1:
        return g[0]
    big = 1e3
    a = np.vstack([g.T, big * np.ones((1, len(g)))])
    b = np.concatenate([np.zeros(g.shape[1]), [big]])
    lam, _ = optimize.nnls(a, b)
    s = lam.sum()
    if s <= 0:
        return g[0]
    return (lam / s) @ g


def _refine_minimax(points: np.ndarray, x: np.ndarray, iters: int,
                    step: float = 0.05):
    """Local descent on ``F(x) = max_i x . x_i`` over the sphere.

    Direction: minus the least-norm element of the hull of the tangent
    gradients of all near-active points (``F - x.x_i <= step``). When
    exactly ``d`` points are near-active, also try the point equidistant
    from them. A move is kept only if it lowers ``F``; otherwise the step
    halves. Returns ``(x, F(x), final step)``.
    """
    d = points.shape[1]
    f = max_dot(points, x)
    for _ in range(iters):
        if step < 1e-15:
            break
        v = points @ x
        order = np.argsort(-v, kind="stable")
        active = order[v[order] >= f - step]
        improved = False
        if len(active) >= d:
            sub = points[active[:d]]
            if np.linalg.matrix_rank(sub) == d:
                w = np.linalg.solve(sub, np.ones(d))
                for cand in (w, -w):
                    c = cand / np.linalg.norm(cand)
                    fc = max_dot(points, c)
                    if fc < f:
                        x, f, improved = c, fc, True
        if not improved:
            g = tangent_project(x, points[active])
            dvec = _min_norm_in_hull(g)
            nd = np.linalg.norm(dvec)
            if nd > 1e-300:
                cand = x - step * dvec / nd
                cand /= np.linalg.norm(cand)
                fc = max_dot(points, cand)
                if fc < f:
                    x, f, improved = cand, fc, True
        step = min(step * 1.5, 0.5) if improved else step * 0.5
    return x, f, step


def _injected_candidates(cfg) -> np.ndarray | None:
    if not isinstance(cfg, AntipodalConfig):
        return None
    if is_general_position(cfg):
        return np.array(enumerate_facets(cfg).normals)
    # a degenerate antipodal set lies in a hyperplane through the origin;
    # its normal has zero dot product with every point
    _, _, vt = np.linalg.svd(cfg.representatives)
    return np.array([vt[-1], -vt[-1]])


def eta_sampled(cfg, n_samples: int = 100_000, refine_iters: int = 300,
                rng_seed: int = 0, inject: bool = True, n_refine: int = 8,
                chunk: int = 1 << 15) -> CoveringReport:
    """Estimate ``eta`` by sampling the sphere and refining the best holes.

    The result is an upper bound for the true ``eta`` up to rounding: every
    reported value is ``max_i x . x_i`` at an actual unit vector ``x``.
    For antipodal configurations the facet normals (or, when degenerate,
    the normal of the containing hyperplane) are added as candidates
    unless ``inject=False``.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    points = as_points(cfg)
    d = points.shape[1]
    rng = np.random.default_rng(rng_seed)
    cands = []
    vals = []
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        x = uniform_sphere(m, d, rng)
        f = (x @ points.T).max(axis=1)
        keep = np.argsort(f, kind="stable")[:n_refine]
        cands.append(x[keep])
        vals.append(f[keep])
        done += m
    extra = _injected_candidates(cfg) if inject else None
    if extra is not None:
        cands.insert(0, extra)
        vals.insert(0, (extra @ points.T).max(axis=1))
    cands = np.concatenate(cands)
    vals = np.concatenate(vals)
    best = None
    for k in np.argsort(vals, kind="stable")[:n_refine]:
        x, f, step = _refine_minimax(points, cands[k], refine_iters)
        if best is None or f < best[1]:
            best = (x, f, step)
    x, f, step = best
    witness = normalize(x)
    return CoveringReport(f, rho_from_eta(f), witness, Method.SAMPLED, step)


def mesh_norm_sampled(cfg, n_samples: int = 100_000, rng_seed: int = 0,
                      n_refine: int = 8, chunk: int = 1 << 15) -> tuple:
    """Direct estimate of ``rho = max_x min_i |x - x_i|``.

    Works with distances only (no dot-product reformulation): sampling,
    then an SLSQP polish of ``max s`` subject to ``|x - x_i|^2 >= s`` and
    ``|x| = 1`` from the best few samples. Returns ``(rho, x)``.
    """
    points = as_points(cfg)
    d = points.shape[1]
    rng = np.random.default_rng(rng_seed)

    def mindist(x):
        return float(np.min(np.linalg.norm(points - x, axis=1)))

    cands, vals = [], []
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        x = uniform_sphere(m, d, rng)
        sq = ((x[:, None, :] - points[None, :, :]) ** 2).sum(axis=2).min(axis=1)
        keep = np.argsort(-sq, kind="stable")[:n_refine]
        cands.append(x[keep])
        vals.append(sq[keep])
        done += m
    cands = np.concatenate(cands)
    vals = np.concatenate(vals)
    cons = [
        {"type": "ineq",
         "fun": lambda z: ((z[:d] - points) ** 2).sum(axis=1) - z[d],
         "jac": lambda z: np.hstack([2 * (z[:d] - points),
                                     -np.ones((len(points), 1))])},
        {"type": "eq",
         "fun": lambda z: np.array([z[:d] @ z[:d] - 1.0]),
         "jac": lambda z: np.concatenate([2 * z[:d], [0.0]])[None, :]},
    ]
    best_r, best_x = -1.0, None
    for k in np.argsort(-vals, kind="stable")[:n_refine]:
        x0 = cands[k]
        z0 = np.concatenate([x0, [vals[k]]])
        res = optimize.minimize(lambda z: -z[d], z0,
                                jac=lambda z: np.concatenate([np.zeros(d), [-1.0]]),
                                constraints=cons, method="SLSQP",
                                options={"ftol": 1e-15, "maxiter": 200})
        x = x0
        if np.linalg.norm(res.x[:d]) > 0.5:
            xr = res.x[:d] / np.linalg.norm(res.x[:d])
            if mindist(xr) > mindist(x0):
                x = xr
        r = mindist(x)
        if r > best_r:
            best_r, best_x = r, x
    return best_r, best_x


@dataclasses.dataclass(frozen=True)
class BoundCheck:
    eta: float
    bound: float
    satisfied: bool
    is_cross_polytope: bool


def check_covering_bound(cfg: AntipodalConfig) -> BoundCheck:
    """Compare ``eta`` with ``1/sqrt(d)`` and test for orthonormal representatives."""
    d = cfg.dim
    if is_general_position(cfg):
        eta = eta_exact(cfg).eta
    else:
        eta = eta_sampled(cfg, n_samples=20_000).eta
    bound = 1.0 / np.sqrt(d)
    return BoundCheck(eta, bound, eta <= bound + 1e-9, cfg.is_cross_polytope())


def is_centered_witness(cfg: AntipodalConfig) -> np.ndarray:
    """A unit ``y`` with ``|y . x_i| <= 1/sqrt(d)`` for all ``2d`` points.

    Uses the deepest hole: its largest dot product is ``eta <= 1/sqrt(d)``
    and, the set being antipodal, its smallest is ``-eta``.
    """
    d = cfg.dim
    bound = 1.0 / np.sqrt(d) + 1e-9
    if is_general_position(cfg):
        y = eta_exact(cfg).witness
    else:
        y = eta_sampled(cfg, n_samples=20_000).witness
    if np.max(np.abs(cfg.representatives @ y)) > bound:
        raise WitnessNotFound("no witness certified within tolerance")
    return y


__all__ = [
    "Method", "CoveringReport", "eta_exact", "eta_sampled", "mesh_norm_sampled",
    "rho_from_eta", "check_covering_bound", "BoundCheck", "is_centered_witness",
]
