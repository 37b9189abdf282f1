"""Acceptance suite: one test per criterion, each at its stated tolerance.

Every test records a one-line PASS/FAIL verdict; pytest prints them in a
section at the end of the run, and ``python3 tests/test_acceptance.py``
runs the whole suite as a script and prints them directly.
"""
import math
import subprocess
import sys
import time

import numpy as np

from crosscover.covering import (eta_exact, eta_sampled, is_centered_witness,
                                 mesh_norm_sampled, rho_from_eta)
from crosscover.geometry import (AntipodalConfig, cross_polytope, is_general_position,
                                 perturbed_cross_polytope, random_antipodal,
                                 uniform_sphere)
from crosscover.hull import enumerate_facets, verify_boundary_cover
from crosscover.polarization import (cross_polytope_closed_form, hermite_even_quadratic,
                                     polarization_value, verify_polarization_chain)
from crosscover.potentials import PotentialFunction, builtin_potentials
from crosscover.projection import (maximize_cap_simplex, projected_volume_exact_d3,
                                   projected_volume_mc, sphere_area)
from crosscover.search import maximize_eta

RESULTS = {}
N_RANDOM = 200


def record(n, title, ok, detail):
    RESULTS[n] = (bool(ok), title, detail)
    line = summary_line(n)
    print(line)
    return ok


def summary_line(n):
    ok, title, detail = RESULTS[n]
    return f"{'PASS' if ok else 'FAIL'}  [{n:2d}] {title}: {detail}"


def summary_lines():
    return [summary_line(n) for n in sorted(RESULTS)]


def random_configs(d, count=N_RANDOM, offset=0):
    out = []
    for s in range(offset, offset + count):
        cfg = random_antipodal(d, s)
        assert is_general_position(cfg), (d, s)
        out.append(cfg)
    return out


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def test_01_cross_polytope_eta():
    with Timer() as t:
        err = max(abs(eta_exact(cross_polytope(d)).eta - 1 / math.sqrt(d))
                  for d in range(2, 9))
    ok = err <= 1e-12 and t.elapsed < 1
    assert record(1, "cross-polytope eta = 1/sqrt(d), d=2..8", ok,
                  f"max error {err:.3g} (tol 1e-12), {t.elapsed:.2f}s (< 1s)")


def test_02_covering_bound():
    with Timer() as t:
        worst, bad = -math.inf, 0
        for d in (3, 4, 5, 6):
            for cfg in random_configs(d):
                excess = eta_exact(cfg).eta - 1 / math.sqrt(d)
                worst = max(worst, excess)
                bad += excess > 1e-9
    ok = bad == 0 and t.elapsed < 30
    assert record(2, "eta <= 1/sqrt(d) on 4 x 200 random configs", ok,
                  f"{bad} violations, largest eta - 1/sqrt(d) = {worst:.3g}, {t.elapsed:.1f}s (< 30s)")


def test_03_facet_structure():
    with Timer() as t:
        bad = 0
        for d in (3, 4, 5, 6):
            for s, cfg in enumerate(random_configs(d)):
                h = enumerate_facets(cfg)
                good = (len(h) == 2 ** d and bool(np.all(h.offsets > 0))
                        and verify_boundary_cover(h, 10_000, s))
                bad += not good
    ok = bad == 0 and t.elapsed < 300
    assert record(3, "2^d facets, positive offsets, boundary cover (800 configs)", ok,
                  f"{800 - bad}/800 pass, {t.elapsed:.1f}s (< 300s)")


def test_04_exact_vs_sampled():
    # sampling without facet-normal injection, so the two paths are independent
    with Timer() as t:
        errs = []
        for d in (3, 4):
            for s, cfg in enumerate(random_configs(d, 50, offset=1000)):
                ex = eta_exact(cfg).eta
                sa = eta_sampled(cfg, n_samples=200_000, rng_seed=s, inject=False).eta
                errs.append(abs(ex - sa))
    err = max(errs)
    ok = err <= 1e-4 and t.elapsed < 300
    assert record(4, "|eta_exact - eta_sampled| on 2 x 50 configs, d=3,4", ok,
                  f"max {err:.3g} (tol 1e-4), {t.elapsed:.1f}s (< 300s)")


def test_05_rho_eta_consistency():
    errs = []
    for k in range(20):
        d = 3 + k % 3
        cfg = random_antipodal(d, 2000 + k)
        rho, _ = mesh_norm_sampled(cfg, n_samples=100_000, rng_seed=k)
        errs.append(abs(rho - rho_from_eta(eta_exact(cfg).eta)))
    err = max(errs)
    assert record(5, "sampled mesh norm vs sqrt(2 - 2 eta), 20 configs", err <= 2e-4,
                  f"max {err:.3g} (tol 2e-4)")


def _grid_min_riesz2_cross_polytope3(n=1201):
    g = PotentialFunction.riesz(2)
    th = np.linspace(0, np.pi, n)
    ph = np.linspace(0, 2 * np.pi, 2 * n)
    T, P = np.meshgrid(th, ph)
    x = np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], -1)
    with np.errstate(all="ignore"):
        v = g(x.reshape(-1, 3) @ cross_polytope(3).points.T).sum(axis=1)
    return float(np.nanmin(v))


def test_06_cross_polytope_polarization():
    with Timer() as t:
        verr, xerr = 0.0, 0.0
        for d in range(2, 7):
            for g in builtin_potentials():
                rep = polarization_value(cross_polytope(d), g)
                verr = max(verr, abs(rep.value - cross_polytope_closed_form(d, g)))
                xerr = max(xerr, float(np.max(np.abs(np.abs(rep.minimizer) - 1 / math.sqrt(d)))))
        g2 = PotentialFunction.riesz(2)
        anchor = polarization_value(cross_polytope(3), g2).value
        closed = cross_polytope_closed_form(3, g2)
        grid = _grid_min_riesz2_cross_polytope3()
    ok = (verr <= 1e-8 and xerr <= 1e-4 and abs(anchor - 4.5) <= 1e-8
          and abs(closed - 4.5) <= 1e-12 and abs(grid - 4.5) <= 1e-4 and t.elapsed < 120)
    assert record(6, "cross-polytope polarization = closed form, d=2..6 x 5 potentials", ok,
                  f"value err {verr:.3g} (1e-8), minimizer coord err {xerr:.3g} (1e-4), "
                  f"Riesz-2 d=3: {anchor!r}, grid {grid:.8f}, {t.elapsed:.1f}s (< 120s)")


def test_07_hermite_bound():
    with Timer() as t:
        worst = min(hermite_even_quadratic(g, d, 10_000).min_defect
                    for d in range(2, 7) for g in builtin_potentials())
    ok = worst >= -1e-12 and t.elapsed < 10
    assert record(7, "h - p >= 0 on a 1e4 grid, d=2..6 x 5 potentials", ok,
                  f"min defect {worst:.3g} (>= -1e-12), {t.elapsed:.2f}s (< 10s)")


def test_08_polarization_bound():
    with Timer() as t:
        bad, bad_eq, worst = 0, 0, -math.inf
        for d in (3, 4, 5):
            for cfg in random_configs(d):
                for g in builtin_potentials():
                    c = verify_polarization_chain(cfg, g)
                    worst = max(worst, c.lhs - c.rhs)
                    bad += not c.holds
                    bad_eq += c.equality and not c.is_cross_polytope
        # equality case: exactly orthonormal vs slightly perturbed
        eq_ok = True
        for d in (3, 4, 5):
            for g in builtin_potentials():
                c = verify_polarization_chain(cross_polytope(d), g)
                eq_ok &= c.holds and c.equality and c.is_cross_polytope
                for theta in (1e-2, 1e-1):
                    c = verify_polarization_chain(perturbed_cross_polytope(d, theta), g)
                    eq_ok &= c.holds and not c.equality and not c.is_cross_polytope
    ok = bad == 0 and bad_eq == 0 and eq_ok and t.elapsed < 600
    assert record(8, "polarization <= cross-polytope value, 3 x 200 configs x 5 potentials", ok,
                  f"{bad} violations (max lhs - rhs {worst:.3g}), {bad_eq} non-orthonormal "
                  f"equalities, equality case {'ok' if eq_ok else 'WRONG'}, {t.elapsed:.1f}s (< 600s)")


def test_09_centered_witness():
    with Timer() as t:
        configs = [cfg for d in (2, 3, 4, 5, 6) for cfg in random_configs(d)]
        configs += [cross_polytope(d) for d in range(2, 9)]
        configs += [perturbed_cross_polytope(d, th) for d in (3, 4, 5) for th in (1e-3, 1e-2, 1e-1)]
        configs += [AntipodalConfig([[1, 0, 0], [0, 1, 0], [1, 1, 0]]),
                    AntipodalConfig([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 1, 1, 0]])]
        fails = 0
        for cfg in configs:
            try:
                y = is_centered_witness(cfg)
                fails += np.max(np.abs(cfg.representatives @ y)) > 1 / math.sqrt(cfg.dim) + 1e-9
            except Exception:
                fails += 1
    ok = fails == 0 and t.elapsed < 60
    assert record(9, "centered witness found", ok,
                  f"{len(configs) - fails}/{len(configs)} configs, {t.elapsed:.1f}s (< 60s)")


def test_10_rim_simplex_volume():
    with Timer() as t:
        defects = [maximize_cap_simplex(3, a, restarts=8, rng_seed=0).regularity_defect
                   for a in (0.3, 1 / math.sqrt(3), 0.7, 0.9)]
        rng = np.random.default_rng(10)
        agree = 0
        for k in range(20):
            v = uniform_sphere(3, 3, rng)
            est = projected_volume_mc(v, 100_000, rng_seed=k)
            agree += abs(est.value - projected_volume_exact_d3(v)) <= 3 * est.stderr
        facet_ok = []
        for d in (3, 4, 5):
            est = projected_volume_mc(np.eye(d), 200_000, rng_seed=d)
            facet_ok.append(abs(est.value - sphere_area(d) / 2 ** d) <= 3 * est.stderr)
    ok = max(defects) < 1e-2 and agree == 20 and all(facet_ok) and t.elapsed < 600
    assert record(10, "regular rim simplex maximizes projected volume; MC checks", ok,
                  f"max defect {max(defects):.3g} (< 1e-2), MC vs exact {agree}/20 within 3 SE, "
                  f"facet cone d=3,4,5 {sum(facet_ok)}/3, {t.elapsed:.1f}s (< 600s)")


def test_11_search_reproduction():
    with Timer() as t:
        gaps, dists = [], []
        for d in (2, 3, 4):
            res = maximize_eta(d, restarts=16, rng_seed=0)
            gaps.append(abs(res.objective - 1 / math.sqrt(d)))
            dists.append(res.distance_to_cross_polytope)
    ok = max(gaps) <= 1e-5 and max(dists) < 1e-3 and t.elapsed < 600
    assert record(11, "maximize_eta reaches the cross-polytope, d=2,3,4", ok,
                  f"max |eta - 1/sqrt(d)| {max(gaps):.3g} (1e-5), max |y_i . y_j| "
                  f"{max(dists):.3g} (< 1e-3), {t.elapsed:.1f}s (< 600s)")


COMMANDS = [
    ["eta", "--cross-polytope", "4", "--exact"],
    ["verify-covering", "--d", "4", "--trials", "200", "--seed", "3", "--csv", "{out}"],
    ["verify-facets", "--d", "4", "--trials", "50", "--seed", "1", "--csv", "{out}"],
    ["verify-polarization", "--d", "3", "--trials", "20", "--potential", "log", "--csv", "{out}"],
    ["eta", "--input", "{pts}", "--sampled", "50000", "--seed", "5", "--csv", "{out}"],
    ["solid-angle", "--cone", "{pts}", "--samples", "50000", "--seed", "2", "--csv", "{out}"],
    ["lemma-p", "--d", "3", "--a", "0.7", "--restarts", "2", "--seed", "4", "--csv", "{out}"],
    ["search", "--objective", "eta", "--d", "3", "--restarts", "2", "--seed", "6",
     "--trace", "{out}"],
]


def test_12_determinism(tmp_path):
    from crosscover import pointfile
    pts = tmp_path / "pts.txt"
    pointfile.write(pts, random_antipodal(3, 77))
    mismatched = []
    for i, argv in enumerate(COMMANDS):
        runs = []
        for k in range(2):
            out = tmp_path / f"c{i}_{k}.csv"
            args = [a.format(out=out, pts=pts) for a in argv]
            r = subprocess.run([sys.executable, "-m", "crosscover", *args],
                               capture_output=True)
            csv = out.read_bytes() if out.exists() else b""
            runs.append((r.returncode, r.stdout, csv))
        if runs[0] != runs[1] or runs[0][0] != 0:
            mismatched.append(argv[0])
    ok = not mismatched
    assert record(12, "byte-identical stdout and CSV on CLI reruns", ok,
                  f"{len(COMMANDS) - len(mismatched)}/{len(COMMANDS)} commands identical"
                  + (f" (differs: {', '.join(mismatched)})" if mismatched else ""))


if __name__ == "__main__":
    import pathlib
    import tempfile

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for fn in tests:
        try:
            if fn is test_12_determinism:
                with tempfile.TemporaryDirectory() as d:
                    fn(pathlib.Path(d))
            else:
                fn()
        except AssertionError:
            pass
    print()
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for ok, _, _ in RESULTS.values()) else 1)
