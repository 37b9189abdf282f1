"""Polarization: the minimum over the sphere of a configuration's potential,
the cross-polytope closed form, and the even Hermite lower bound."""
from __future__ import annotations

import dataclasses
import enum

import numpy as np

from .errors import CertificateFailed, NonFiniteEverywhere
from .geometry import (AntipodalConfig, as_points, is_general_position,
                       tangent_project, uniform_sphere)
from .hull import enumerate_facets
from .potentials import PotentialFunction


class PolarizationMethod(enum.Enum):
    CANDIDATE_EXACT = "candidate"
    MULTISTART_DESCENT = "descent"


@dataclasses.dataclass(frozen=True, eq=False)
class PolarizationReport:
    value: float
    minimizer: np.ndarray
    method: PolarizationMethod
    gap_to_bound: float


def _batch_value(cfg, g: PotentialFunction, x: np.ndarray) -> np.ndarray:
    if isinstance(cfg, AntipodalConfig):
        return g.h(x @ cfg.representatives.T).sum(axis=-1)
    return g(x @ as_points(cfg).T).sum(axis=-1)


def _batch_gradient(cfg, g: PotentialFunction, x: np.ndarray) -> np.ndarray:
    """Tangential gradient of the potential at each row of ``x``."""
    if isinstance(cfg, AntipodalConfig):
        y = cfg.representatives
        amb = g.dh(x @ y.T) @ y
    else:
        p = as_points(cfg)
        amb = g.derivative(x @ p.T) @ p
    return tangent_project(x, amb)


def potential_at(cfg, g: PotentialFunction, x) -> float:
    """``sum_i g(x . x_i)``; ``+inf`` when ``x`` hits a singularity of ``g``.

    Antipodal configurations are summed pairwise as ``sum_i h(x . y_i)``.
    """
    x = np.asarray(x, dtype=float)
    with np.errstate(invalid="ignore"):
        v = float(_batch_value(cfg, g, x[None, :])[0])
    return np.inf if np.isnan(v) else v


def potential_gradient(cfg, g: PotentialFunction, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return _batch_gradient(cfg, g, x[None, :])[0]


def cross_polytope_closed_form(d: int, g: PotentialFunction) -> float:
    """``d (g(1/sqrt d) + g(-1/sqrt d))``: the minimum of the cross-polytope
    potential, attained at the vertices of the dual cube."""
    if d < 2:
        raise ValueError("d must be at least 2")
    t = 1.0 / np.sqrt(d)
    return float(d * (g(t) + g(-t)))


def _batch_newton(cfg, g, x, tol, iters):
    """Riemannian Newton steps on all rows of ``x``.

    Each step solves the bordered system ``[A - (x.grad f) I, x; x^T, 0]``
    (``A`` the ambient Hessian) for a tangent direction. A row keeps a step
    only if the tangent Hessian is positive along it, the gradient shrinks
    and the value does not rise beyond rounding; otherwise the row is
    frozen. Returns the new points and a mask of rows below ``tol``.
    """
    m, d = x.shape
    if isinstance(cfg, AntipodalConfig):
        pts, w1, w2 = cfg.representatives, g.dh, g.d2h
    else:
        pts, w1, w2 = as_points(cfg), g.derivative, g.second_derivative
    x = x.copy()
    f = _batch_value(cfg, g, x)
    grad = _batch_gradient(cfg, g, x)
    gn = np.linalg.norm(grad, axis=1)
    live = np.isfinite(f) & (gn >= tol)
    for _ in range(iters):
        idx = np.flatnonzero(live)
        if idx.size == 0:
            break
        xi = x[idx]
        t = xi @ pts.T
        amb = w1(t) @ pts
        hess = np.einsum("mk,ki,kj->mij", w2(t), pts, pts)
        hess -= np.sum(xi * amb, axis=1)[:, None, None] * np.eye(d)
        kkt = np.zeros((idx.size, d + 1, d + 1))
        kkt[:, :d, :d] = hess
        kkt[:, :d, d] = xi
        kkt[:, d, :d] = xi
        rhs = np.concatenate([-grad[idx], np.zeros((idx.size, 1))], axis=1)
        with np.errstate(all="ignore"):
            try:
                v = np.linalg.solve(kkt, rhs[..., None])[..., 0][:, :d]
            except np.linalg.LinAlgError:
                live[idx] = False
                break
            curv = np.einsum("mi,mij,mj->m", v, hess, v)
            xn = xi + v
            xn /= np.linalg.norm(xn, axis=1, keepdims=True)
            fn = _batch_value(cfg, g, xn)
            gradn = _batch_gradient(cfg, g, xn)
        gnn = np.linalg.norm(gradn, axis=1)
        ok = ((curv > 0) & np.isfinite(fn) & (gnn < gn[idx])
              & (fn <= f[idx] + 1e-12 * (1.0 + np.abs(f[idx]))))
        acc = idx[ok]
        x[acc], f[acc], grad[acc], gn[acc] = xn[ok], fn[ok], gradn[ok], gnn[ok]
        live[idx[~ok]] = False
        live[acc[gn[acc] < tol]] = False
    return x, gn < tol


def _gradient_phase(cfg, g, x, f, stop, max_iter):
    """Projected gradient descent with per-row Armijo backtracking, run on
    all rows at once; retraction is renormalization. Rows leave when their
    gradient norm drops below ``stop`` or the step underflows."""
    m = len(x)
    step = np.full(m, 0.1)
    active = np.isfinite(f)
    it = 0
    while it < max_iter:
        it += 1
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        grad = _batch_gradient(cfg, g, x[idx])
        gn2 = np.sum(grad * grad, axis=1)
        conv = gn2 < stop * stop
        active[idx[conv]] = False
        idx, grad, gn2 = idx[~conv], grad[~conv], gn2[~conv]
        if idx.size == 0:
            break
        trial = x[idx] - step[idx, None] * grad
        trial /= np.linalg.norm(trial, axis=1, keepdims=True)
        with np.errstate(invalid="ignore"):
            ft = _batch_value(cfg, g, trial)
        ok = (ft < f[idx]) & (ft <= f[idx] - 1e-4 * step[idx] * gn2)
        acc = idx[ok]
        x[acc] = trial[ok]
        f[acc] = ft[ok]
        step[acc] *= 2.0
        rej = idx[~ok]
        step[rej] *= 0.5
        active[rej[step[rej] < 1e-14]] = False
    return it


def _descend(cfg, g, x, tol=1e-10, max_iter=10_000, switch=3e-2):
    """Gradient descent down to gradient norm ``switch``, then Newton.
    Rows Newton cannot finish go back to gradient descent with the full
    tolerance, followed by one more Newton pass."""
    x = x.copy()
    f = _batch_value(cfg, g, x)
    used = _gradient_phase(cfg, g, x, f, switch, max_iter)
    x, done = _batch_newton(cfg, g, x, tol, 30)
    with np.errstate(invalid="ignore"):
        f = _batch_value(cfg, g, x)
    rest = np.flatnonzero(~done & np.isfinite(f))
    if rest.size:
        xr, fr = x[rest], f[rest]
        _gradient_phase(cfg, g, xr, fr, tol, max(0, max_iter - used))
        xr, _ = _batch_newton(cfg, g, xr, tol, 30)
        x[rest] = xr
        with np.errstate(invalid="ignore"):
            f[rest] = _batch_value(cfg, g, xr)
    return x, f


def _candidate_starts(cfg) -> np.ndarray:
    if isinstance(cfg, AntipodalConfig) and is_general_position(cfg):
        # facet normals: the dual-cube vertices for the cross-polytope and
        # the deepest covering holes in general
        return np.array(enumerate_facets(cfg).normals)
    return np.zeros((0, as_points(cfg).shape[1]))


def polarization_value(cfg, g: PotentialFunction, n_starts: int = 16,
                       rng_seed: int = 0, extra_starts=None,
                       tol: float = 1e-10, max_iter: int = 10_000) -> PolarizationReport:
    """Minimize ``x -> sum_i g(x . x_i)`` over the sphere.

    Multistart projected gradient descent from ``n_starts`` random points
    plus injected candidates (facet normals of antipodal configurations and
    any ``extra_starts``). Not a certified global minimum.

    Raises
    ------
    NonFiniteEverywhere
        If the potential is infinite at every (jittered) start.
    """
    if n_starts < 1:
        raise ValueError("n_starts must be at least 1")
    pts = as_points(cfg)
    d = pts.shape[1]
    rng = np.random.default_rng(rng_seed)
    injected = [_candidate_starts(cfg)]
    if extra_starts is not None:
        injected.append(np.atleast_2d(np.asarray(extra_starts, dtype=float)))
    injected = np.concatenate(injected)
    n_inj = len(injected)
    x0 = np.concatenate([injected, uniform_sphere(n_starts, d, rng)])
    x0 /= np.linalg.norm(x0, axis=1, keepdims=True)
    with np.errstate(invalid="ignore"):
        f0 = _batch_value(cfg, g, x0)
    bad = ~np.isfinite(f0)
    if bad.any():
        # nudge starts sitting on a singularity by a tiny tangential jitter
        jit = tangent_project(x0[bad], rng.standard_normal((bad.sum(), d)))
        jit /= np.linalg.norm(jit, axis=1, keepdims=True)
        x0[bad] = x0[bad] + 1e-6 * jit
        x0[bad] /= np.linalg.norm(x0[bad], axis=1, keepdims=True)
    x, f = _descend(cfg, g, x0, tol=tol, max_iter=max_iter)
    f = np.where(np.isfinite(f), f, np.inf)
    if not np.isfinite(f).any():
        raise NonFiniteEverywhere("potential is infinite at every start")
    k = int(np.argmin(f))
    xmin = x[k].copy()
    xmin.setflags(write=False)
    value = potential_at(cfg, g, xmin)
    method = (PolarizationMethod.CANDIDATE_EXACT if k < n_inj
              else PolarizationMethod.MULTISTART_DESCENT)
    n = len(pts)
    gap = (cross_polytope_closed_form(n // 2, g) - value
           if n % 2 == 0 and n // 2 == d else float("nan"))
    return PolarizationReport(value, xmin, method, gap)


@dataclasses.dataclass(frozen=True)
class HermiteBound:
    a: float
    b: float
    min_defect: float


def hermite_even_quadratic(g: PotentialFunction, d: int,
                           n_grid: int = 10_000) -> HermiteBound:
    """The even quadratic ``p(t) = a t^2 + b`` matching ``h`` and ``h'`` at
    ``+-1/sqrt(d)``, and ``min (h - p)`` over a grid of ``[-1, 1]`` pulled
    in by ``1e-6`` at both ends.

    ``h`` is even, so its cubic Hermite interpolant at symmetric nodes is
    even and therefore a quadratic.
    """
    t0 = 1.0 / np.sqrt(d)
    a = float(np.sqrt(d) / 2.0 * g.dh(t0))
    b = float(g.h(t0) - a / d)
    t = np.linspace(-1.0 + 1e-6, 1.0 - 1e-6, n_grid)
    defect = g.h(t) - (a * t * t + b)
    return HermiteBound(a, b, float(np.min(defect)))


@dataclasses.dataclass(frozen=True)
class ChainCheck:
    lhs: float
    rhs: float
    holds: bool
    equality: bool
    is_cross_polytope: bool


def verify_polarization_chain(cfg: AntipodalConfig, g: PotentialFunction,
                              n_starts: int = 16, rng_seed: int = 0) -> ChainCheck:
    """Compare the polarization of ``cfg`` with the cross-polytope value.

    Raises
    ------
    CertificateFailed
        If ``g`` fails the numerical ``g'' >= 0``, ``g''`` convex check.
    """
    if not g.certificate():
        raise CertificateFailed(f"{g}: g'' not certified non-negative and convex")
    lhs = polarization_value(cfg, g, n_starts=n_starts, rng_seed=rng_seed).value
    rhs = cross_polytope_closed_form(cfg.dim, g)
    return ChainCheck(lhs, rhs, lhs <= rhs + 1e-8, abs(lhs - rhs) <= 1e-6,
                      cfg.is_cross_polytope())
