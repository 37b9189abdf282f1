"""Multistart search over antipodal configurations for the best covering
(largest ``eta``) and the best polarization."""
from __future__ import annotations

import dataclasses
from typing import List, Tuple

import numpy as np
from scipy import optimize

from . import config
from .covering import eta_exact
from .errors import CertificateFailed
from .geometry import (AntipodalConfig, normalize_rows,
                       relative_smallest_singular_value, uniform_sphere)
from .hull import sign_vectors
from .polarization import cross_polytope_closed_form, polarization_value
from .potentials import PotentialFunction


@dataclasses.dataclass(frozen=True, eq=False)
class SearchResult:
    best: AntipodalConfig
    objective: float
    trace: List[Tuple[int, float]]
    converged: bool
    distance_to_cross_polytope: float


def _offsets(y: np.ndarray, sig_half: np.ndarray) -> np.ndarray:
    """Facet offsets of ``{+-y_i}`` for half the sign vectors (the other
    half repeats them)."""
    w = np.linalg.solve(y, sig_half.T)
    return 1.0 / np.linalg.norm(w, axis=0)


def _softmin(a: np.ndarray, beta: float) -> float:
    m = a.min()
    return float(m - np.log(np.exp(-beta * (a - m)).sum()) / beta)


def _tangent_bases(y: np.ndarray) -> np.ndarray:
    """``(d, d, d-1)``: for each row ``y_i``, an orthonormal basis of its
    tangent space as columns."""
    return np.stack([np.linalg.svd(row[None, :])[2][1:].T for row in y])


def _move(y, q, coef):
    return normalize_rows(y + np.einsum("ijk,ik->ij", q, coef))


def _too_degenerate(y) -> bool:
    return relative_smallest_singular_value(y) < 10 * config.get().rank


def _softmin_ascent(y, sig_half, beta, iters, fd=1e-6):
    """Gradient ascent of the softmin of facet offsets; finite-difference
    gradient in tangent coordinates of each representative."""
    d = len(y)
    step = 0.1

    def obj(yy):
        return _softmin(_offsets(yy, sig_half), beta)

    f = obj(y)
    for _ in range(iters):
        q = _tangent_bases(y)
        grad = np.zeros((d, d - 1))
        for i in range(d):
            for k in range(d - 1):
                e = np.zeros((d, d - 1))
                e[i, k] = fd
                grad[i, k] = (obj(_move(y, q, e)) - obj(_move(y, q, -e))) / (2 * fd)
        gn = np.linalg.norm(grad)
        if gn < 1e-12:
            break
        while step > 1e-12:
            cand = _move(y, q, step * grad / gn)
            if _too_degenerate(cand):
                step *= 0.5
                continue
            fc = obj(cand)
            if fc > f:
                y, f = cand, fc
                step *= 1.5
                break
            step *= 0.5
        else:
            break
    return y


def _polish_min_offset(y, sig_half):
    """SLSQP on ``max s`` subject to every facet offset ``>= s`` and unit
    representatives."""
    d = len(y)

    def unpack(z):
        return z[:-1].reshape(d, d)

    def offs(z):
        return _offsets(normalize_rows(unpack(z)), sig_half) - z[-1]

    def unit(z):
        return np.sum(unpack(z) ** 2, axis=1) - 1.0

    z0 = np.concatenate([y.ravel(), [_offsets(y, sig_half).min()]])
    with np.errstate(all="ignore"):
        res = optimize.minimize(
            lambda z: -z[-1], z0,
            jac=lambda z: np.concatenate([np.zeros(d * d), [-1.0]]),
            constraints=[{"type": "ineq", "fun": offs},
                         {"type": "eq", "fun": unit}],
            method="SLSQP", options={"ftol": 1e-16, "maxiter": 500})
    cand = unpack(res.x)
    if not np.all(np.isfinite(cand)) or np.any(np.linalg.norm(cand, axis=1) < 0.5):
        return y
    cand = normalize_rows(cand)
    if _too_degenerate(cand):
        return y
    return cand if _offsets(cand, sig_half).min() > _offsets(y, sig_half).min() else y


def maximize_eta(d: int, restarts: int = 16, rng_seed: int = 0,
                 stage_iters: int = 60) -> SearchResult:
    """Search antipodal configurations for the largest ``eta``.

    Each restart anneals a softmin of the facet offsets (``beta`` = 10,
    100, 1e3, 1e4) and then polishes the true minimum offset with SLSQP.
    The objective and trace values are exact ``eta`` from the covering
    module. Restarts are compared by ``(eta, restart index)``.
    """
    if not 2 <= d <= 8:
        raise ValueError("maximize_eta supports 2 <= d <= 8")
    rng = np.random.default_rng(rng_seed)
    sig_half = sign_vectors(d)[: 2 ** (d - 1)]
    target = 1.0 / np.sqrt(d)
    best = None
    it = 0
    for _ in range(restarts):
        y = uniform_sphere(d, d, rng)
        while _too_degenerate(y):
            y = uniform_sphere(d, d, rng)
        trace = [(it, eta_exact(AntipodalConfig(y)).eta)]
        for beta in (10.0, 1e2, 1e3, 1e4):
            y = _softmin_ascent(y, sig_half, beta, stage_iters)
            it += 1
            trace.append((it, eta_exact(AntipodalConfig(y)).eta))
        y = _polish_min_offset(y, sig_half)
        it += 1
        cfg = AntipodalConfig(y)
        eta = eta_exact(cfg).eta
        trace.append((it, eta))
        if best is None or eta > best[1]:
            best = (cfg, eta, trace)
    cfg, eta, trace = best
    return SearchResult(cfg, eta, trace, bool(eta >= target - 1e-6),
                        cfg.max_abs_offdiagonal())


def _rotate(y, i, j, k, angle):
    out = y.copy()
    c, s = np.cos(angle), np.sin(angle)
    a, b = y[i, j], y[i, k]
    out[i, j] = c * a - s * b
    out[i, k] = s * a + c * b
    return out


def maximize_polarization(d: int, g: PotentialFunction, restarts: int = 8,
                          rng_seed: int = 0, min_step: float = 1e-6,
                          n_starts: int = 4, max_evals: int = 4000) -> SearchResult:
    """Search antipodal configurations for the largest polarization.

    Outer loop: rotate one representative at a time in a coordinate plane
    by ``+-step``, repeating a rotation while it improves; when a full sweep
    fails, try a few random tangent moves before halving the step. Inner loop: :func:`polarization_value`,
    warm-started from the previous minimizers.

    Raises
    ------
    CertificateFailed
        If ``g`` fails its ``g''`` certificate.
    """
    if not 2 <= d <= 6:
        raise ValueError("maximize_polarization supports 2 <= d <= 6")
    if not g.certificate():
        raise CertificateFailed(f"{g}: g'' not certified non-negative and convex")
    rng = np.random.default_rng(rng_seed)
    target = cross_polytope_closed_form(d, g)
    planes = [(i, j, k) for i in range(d) for j in range(d) for k in range(j + 1, d)]
    best = None
    it = 0
    for _ in range(restarts):
        seed = int(rng.integers(2 ** 63))
        y = uniform_sphere(d, d, rng)
        while _too_degenerate(y):
            y = uniform_sphere(d, d, rng)
        warm = None
        evals = 0

        def value(yy):
            nonlocal evals
            evals += 1
            rep = polarization_value(AntipodalConfig(yy), g, n_starts=n_starts,
                                     rng_seed=seed, extra_starts=warm,
                                     max_iter=1000)
            return rep.value, rep.minimizer

        f, xm = value(y)
        warm = xm[None, :]
        trace = [(it, f)]
        step = 0.2
        start = 0
        while step >= min_step and evals < max_evals:
            improved = False
            moves = [(p, s) for p in planes for s in (step, -step)]
            for n in range(len(moves)):
                m = (start + n) % len(moves)
                (i, j, k), ang = moves[m]
                # repeat a successful rotation while it keeps paying off
                while evals < max_evals:
                    cand = _rotate(y, i, j, k, ang)
                    if _too_degenerate(cand):
                        break
                    fc, xc = value(cand)
                    if not fc > f:
                        break
                    y, f, improved = cand, fc, True
                    warm = np.vstack([xc, warm])[:8]
                if improved:
                    start = m
                    break
            if not improved:
                q = _tangent_bases(y)
                for _ in range(len(planes)):
                    coef = np.zeros((d, d - 1))
                    coef[rng.integers(d)] = rng.standard_normal(d - 1)
                    coef *= step / np.linalg.norm(coef)
                    cand = _move(y, q, coef)
                    if _too_degenerate(cand):
                        continue
                    fc, xc = value(cand)
                    if fc > f:
                        y, f, improved = cand, fc, True
                        warm = np.vstack([xc, warm])[:8]
                        break
            it += 1
            trace.append((it, f))
            if not improved:
                step *= 0.5
        if best is None or f > best[1]:
            best = (AntipodalConfig(y), f, trace)
    cfg, f, trace = best
    # report the objective from a full-strength evaluation
    f = polarization_value(cfg, g, rng_seed=rng_seed).value
    return SearchResult(cfg, f, trace, bool(f >= target - 1e-5),
                        cfg.max_abs_offdiagonal())
