"""Command-line front end.

Exit codes: 0 success, 1 usage or I/O error (message on stderr), 2 a
mathematical check found a violation. Every number is printed with 17
significant digits, and output depends only on (arguments, input files,
seed).
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys

import numpy as np

from . import config, pointfile
from .covering import check_covering_bound, eta_exact, eta_sampled
from .errors import CrossCoverError
from .geometry import (AntipodalConfig, as_points, cross_polytope,
                       is_general_position, random_antipodal)
from .hull import enumerate_facets, verify_boundary_cover
from .polarization import (cross_polytope_closed_form, polarization_value,
                           verify_polarization_chain)
from .potentials import parse as parse_potential
from .projection import (maximize_cap_simplex, projected_volume_exact_d3,
                         projected_volume_mc)
from .search import maximize_eta, maximize_polarization

EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 1, 2
EQUALITY_TOL = 1e-6
SLACK = 1e-8


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad arguments; 2 is reserved for failed checks
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def fmt(x) -> str:
    """17 significant digits; floats keep a decimal point (``1.0``)."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    s = format(float(x), ".17g")
    if s.lstrip("-").isdigit():
        s += ".0"
    return s


def fmt_vec(v) -> str:
    return " ".join(fmt(c) for c in v)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(c) if not isinstance(c, str) else c for c in r])
    return buf.getvalue()


def _write_csv(path, header, rows):
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(_csv_text(header, rows))


def _append_csv(path, header, row):
    fresh = not os.path.exists(path) or os.path.getsize(path) == 0
    text = _csv_text(header, [row])
    if not fresh:
        text = text.split("\n", 1)[1]
    with open(path, "a", encoding="ascii", newline="") as fh:
        fh.write(text)


def _trial_seeds(seed: int, trials: int):
    return np.random.default_rng(seed).integers(2 ** 63, size=trials)


def _load(args):
    if getattr(args, "cross_polytope", None) is not None:
        return cross_polytope(args.cross_polytope)
    if not args.input:
        raise UsageError("one of --input or --cross-polytope is required")
    return pointfile.read(args.input)


# -- subcommands ---------------------------------------------------------------

def cmd_eta(args, out):
    cfg = _load(args)
    exact = args.exact or (args.sampled is None and isinstance(cfg, AntipodalConfig)
                           and is_general_position(cfg))
    if exact:
        if not isinstance(cfg, AntipodalConfig):
            raise UsageError("--exact needs an antipodal point file")
        rep = eta_exact(cfg)
    else:
        rep = eta_sampled(cfg, n_samples=args.sampled or args.samples,
                          rng_seed=args.seed)
    d = rep.witness.shape[0]
    n = 2 * d if isinstance(cfg, AntipodalConfig) else len(cfg)
    print(f"eta={fmt(rep.eta)}", file=out)
    print(f"rho={fmt(rep.rho)}", file=out)
    print(f"witness={fmt_vec(rep.witness)}", file=out)
    print(f"method={rep.method.value}", file=out)
    if args.csv:
        _append_csv(args.csv, ["d", "N", "method", "eta", "rho", "seed"],
                    [d, n, rep.method.value, rep.eta, rep.rho, args.seed])
    return EXIT_OK


def cmd_polarize(args, out):
    cfg = _load(args)
    g = parse_potential(args.potential)
    rep = polarization_value(cfg, g, n_starts=args.starts, rng_seed=args.seed)
    print(f"potential={g}", file=out)
    print(f"value={fmt(rep.value)}", file=out)
    print(f"minimizer={fmt_vec(rep.minimizer)}", file=out)
    print(f"method={rep.method.value}", file=out)
    if not math.isnan(rep.gap_to_bound):
        print(f"bound={fmt(rep.value + rep.gap_to_bound)}", file=out)
        print(f"margin={fmt(rep.gap_to_bound)}", file=out)
    if args.csv:
        _append_csv(args.csv, ["d", "N", "potential", "value", "seed"],
                    [rep.minimizer.shape[0], len(as_points(cfg)), str(g),
                     rep.value, args.seed])
    if not math.isnan(rep.gap_to_bound) and rep.gap_to_bound < -SLACK:
        return EXIT_CHECK
    return EXIT_OK


def cmd_solid_angle(args, out):
    cone = pointfile.read(args.cone)
    v = cone.representatives if isinstance(cone, AntipodalConfig) else cone
    est = projected_volume_mc(v, n_samples=args.samples, rng_seed=args.seed)
    print(f"volume={fmt(est.value)}", file=out)
    print(f"stderr={fmt(est.stderr)}", file=out)
    if v.shape == (3, 3):
        print(f"exact_d3={fmt(projected_volume_exact_d3(v))}", file=out)
    if args.csv:
        _write_csv(args.csv, ["d", "samples", "seed", "volume", "stderr"],
                   [[v.shape[0], args.samples, args.seed, est.value, est.stderr]])
    return EXIT_OK


def cmd_lemma_p(args, out):
    if not 0.0 < args.a < 1.0:
        raise UsageError("--a must lie in (0, 1)")
    if args.d < 3:
        raise UsageError("--d must be at least 3")
    res = maximize_cap_simplex(args.d, args.a, restarts=args.restarts,
                               rng_seed=args.seed, n_samples=args.samples)
    print(f"volume={fmt(res.volume.value)}", file=out)
    print(f"stderr={fmt(res.volume.stderr)}", file=out)
    print(f"regularity_defect={fmt(res.regularity_defect)}", file=out)
    if args.csv:
        d = args.d
        _write_csv(args.csv, ["vertex"] + [f"v_{i + 1}" for i in range(d)],
                   [[k, *row] for k, row in enumerate(res.best.vertices)])
    return EXIT_OK


def cmd_search(args, out):
    if args.objective == "eta":
        if not 2 <= args.d <= 8:
            raise UsageError("--d must lie in 2..8 for the eta search")
        res = maximize_eta(args.d, restarts=args.restarts, rng_seed=args.seed)
        bound = 1.0 / math.sqrt(args.d)
    else:
        if not 2 <= args.d <= 6:
            raise UsageError("--d must lie in 2..6 for the polarization search")
        g = parse_potential(args.potential)
        res = maximize_polarization(args.d, g, restarts=args.restarts,
                                    rng_seed=args.seed)
        bound = cross_polytope_closed_form(args.d, g)
    print(f"objective={fmt(res.objective)}", file=out)
    print(f"bound={fmt(bound)}", file=out)
    print(f"margin={fmt(bound - res.objective)}", file=out)
    print(f"converged={fmt(res.converged)}", file=out)
    print(f"distance_to_cross_polytope={fmt(res.distance_to_cross_polytope)}", file=out)
    for row in res.best.representatives:
        print(f"y={fmt_vec(row)}", file=out)
    if args.trace:
        _write_csv(args.trace, ["iteration", "objective"], res.trace)
    worst = max(v for _, v in res.trace)
    return EXIT_CHECK if max(worst, res.objective) > bound + SLACK else EXIT_OK


def cmd_verify_covering(args, out):
    bound = 1.0 / math.sqrt(args.d)
    rows, worst, bad = [], -math.inf, 0
    for t, s in enumerate(_trial_seeds(args.seed, args.trials)):
        chk = check_covering_bound(random_antipodal(args.d, int(s)))
        rows.append([t, chk.eta, bound, bound - chk.eta, chk.satisfied])
        worst = max(worst, chk.eta)
        bad += not chk.satisfied
    print(f"bound={fmt(bound)}", file=out)
    print(f"value={fmt(worst)}", file=out)
    print(f"margin={fmt(bound - worst)}", file=out)
    print(f"violations={bad}/{args.trials}", file=out)
    if args.csv:
        _write_csv(args.csv, ["trial", "eta", "bound", "margin", "satisfied"], rows)
    return EXIT_CHECK if bad else EXIT_OK


def cmd_verify_polarization(args, out):
    g = parse_potential(args.potential)
    rows, worst, bad, eq = [], -math.inf, 0, 0
    rhs = cross_polytope_closed_form(args.d, g)
    for t, s in enumerate(_trial_seeds(args.seed, args.trials)):
        chk = verify_polarization_chain(random_antipodal(args.d, int(s)), g,
                                        n_starts=args.starts, rng_seed=args.seed)
        rows.append([t, chk.lhs, chk.rhs, chk.holds, chk.equality])
        worst = max(worst, chk.lhs)
        bad += not chk.holds
        # equality is only allowed for orthonormal representatives
        eq += chk.equality and not chk.is_cross_polytope
    print(f"potential={g}", file=out)
    print(f"bound={fmt(rhs)}", file=out)
    print(f"value={fmt(worst)}", file=out)
    print(f"margin={fmt(rhs - worst)}", file=out)
    print(f"violations={bad}/{args.trials}", file=out)
    print(f"equalities={eq}/{args.trials}", file=out)
    if args.csv:
        _write_csv(args.csv, ["trial", "lhs", "rhs", "holds", "equality"], rows)
    return EXIT_CHECK if bad or eq else EXIT_OK


def cmd_verify_facets(args, out):
    if args.input or args.cross_polytope is not None:
        cfg = _load(args)
        if not isinstance(cfg, AntipodalConfig):
            raise UsageError("verify-facets needs an antipodal point file")
        configs = [cfg]
    else:
        if args.d is None or args.d < 2:
            raise UsageError("give --d (>= 2), --input or --cross-polytope")
        configs = [random_antipodal(args.d, int(s))
                   for s in _trial_seeds(args.seed, args.trials)]
    expected = 2 ** configs[0].dim
    rows, good, min_off = [], 0, math.inf
    for t, cfg in enumerate(configs):
        h = enumerate_facets(cfg)
        cover = verify_boundary_cover(h, args.samples, args.seed + t)
        ok = len(h) == expected and bool(np.all(h.offsets > 0)) and cover
        good += ok
        min_off = min(min_off, float(h.offsets.min()))
        rows.append([t, len(h), float(h.offsets.min()), cover])
    print(f"bound={expected} facets per configuration", file=out)
    print(f"value={good}/{len(configs)} configs with {expected} facets and a verified boundary cover", file=out)
    print(f"margin={fmt(min_off)} (smallest facet offset, must be > 0)", file=out)
    if args.csv:
        if len(configs) == 1:
            with open(args.csv, "w", encoding="ascii", newline="") as fh:
                fh.write(enumerate_facets(configs[0]).to_csv())
        else:
            _write_csv(args.csv, ["trial", "n_facets", "min_offset", "cover_ok"], rows)
    return EXIT_OK if good == len(configs) else EXIT_CHECK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--threads", type=int, default=1,
                        help="worker cap; computations run single-threaded")
    common.add_argument("--tol-unit", type=float, default=None,
                        help="unit-norm slack (default 1e-10)")
    common.add_argument("--tol-hull", type=float, default=None,
                        help="supporting-hyperplane slack (default 1e-9)")
    common.add_argument("--csv", default=None, help="CSV output path")

    p = _Parser(prog="crosscover",
                description="Covering and polarization of antipodal sphere configurations.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help, epilog=None):
        sp = sub.add_parser(name, parents=[common], help=help, epilog=epilog,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.set_defaults(func=func)
        return sp

    def source(sp):
        sp.add_argument("--input", help="point file")
        sp.add_argument("--cross-polytope", type=int, metavar="D",
                        help="use the regular cross-polytope in R^D")

    sp = add("eta", cmd_eta, "covering value eta and mesh norm rho",
             "CSV (--csv, appended): d,N,method,eta,rho,seed")
    source(sp)
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--exact", action="store_true", help="facet enumeration")
    grp.add_argument("--sampled", type=int, metavar="N", help="sample N points")
    sp.add_argument("--samples", type=int, default=100_000,
                    help="samples when falling back to the sampled path")

    sp = add("polarize", cmd_polarize, "polarization of a configuration",
             "CSV (--csv, appended): d,N,potential,value,seed")
    source(sp)
    sp.add_argument("--potential", default="riesz:2", help="riesz:S, log or gauss:A")
    sp.add_argument("--starts", type=int, default=16, help="random descent starts")

    sp = add("solid-angle", cmd_solid_angle, "spherical measure of a simplicial cone",
             "CSV (--csv): d,samples,seed,volume,stderr")
    sp.add_argument("--cone", required=True, help="point file with d generators")
    sp.add_argument("--samples", type=int, default=100_000)

    sp = add("lemma-p", cmd_lemma_p, "largest projected rim simplex in a cap",
             "CSV (--csv): vertex,v_1..v_d of the best simplex")
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--a", type=float, required=True, help="cap height in (0, 1)")
    sp.add_argument("--restarts", type=int, default=8)
    sp.add_argument("--samples", type=int, default=200_000)

    sp = add("search", cmd_search, "optimize eta or polarization over configurations",
             "CSV (--trace): iteration,objective")
    sp.add_argument("--objective", choices=["eta", "polarization"], default="eta")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--potential", default="riesz:2")
    sp.add_argument("--restarts", type=int, default=16)
    sp.add_argument("--trace", default=None, help="trace CSV path")

    sp = add("verify-covering", cmd_verify_covering,
             "check eta <= 1/sqrt(d) on random configurations",
             "CSV (--csv): trial,eta,bound,margin,satisfied")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--trials", type=int, default=100)

    sp = add("verify-polarization", cmd_verify_polarization,
             "check polarization <= cross-polytope value on random configurations",
             "CSV (--csv): trial,lhs,rhs,holds,equality")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--potential", default="riesz:2")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--starts", type=int, default=16)

    sp = add("verify-facets", cmd_verify_facets,
             "check the 2^d facet decomposition of the hull boundary",
             "CSV (--csv): trial,n_facets,min_offset,cover_ok for random trials;\n"
             "sigma_bitmask,a_sigma,z_1..z_d for a single --input configuration")
    source(sp)
    sp.add_argument("--d", type=int, default=None)
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--samples", type=int, default=10_000,
                    help="boundary-cover samples per configuration")
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        if args.command is None:
            raise UsageError("a subcommand is required (see --help)")
        if args.threads < 1:
            raise UsageError("--threads must be positive")
        tol = {}
        if args.tol_unit is not None:
            tol["unit"] = args.tol_unit
        if args.tol_hull is not None:
            tol["hull"] = args.tol_hull
        with config.override(**tol):
            return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except (OSError, ValueError, CrossCoverError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
