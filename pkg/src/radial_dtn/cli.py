"""Command-line front end: one subcommand per experiment, CSV or JSON out.

Exit codes: 0 success, 1 usage or domain error, 2 a property check failed,
3 an iterative solve did not converge.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import analysis, bessel, dtn, oracle
from .exceptions import ConvergenceError, DomainError

EXIT_OK, EXIT_DOMAIN, EXIT_PROPERTY, EXIT_CONVERGENCE = 0, 1, 2, 3
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


class Table:
    """Rows plus column names; ``status`` carries a property-check verdict."""

    def __init__(self, columns, rows, status=EXIT_OK):
        self.columns = list(columns)
        self.rows = [list(r) for r in rows]
        self.status = status


def _plain(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    return v


def _cell(v):
    v = _plain(v)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    # float repr is the shortest round-trip form, at most 17 significant digits
    return repr(v) if isinstance(v, float) else str(v)


def render(table: Table, fmt: str) -> str:
    if fmt == "json":
        records = [{c: _plain(v) for c, v in zip(table.columns, row)} for row in table.rows]
        return json.dumps(records, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _floats(text):
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text):
    return [int(t) for t in text.split(",") if t.strip()]


# -- subcommands ------------------------------------------------------------

def cmd_spectrum(a):
    p = dtn.Potential(a.gamma, a.b)
    s = dtn.spectrum(p, a.nmax)
    return Table(["n", "c_n"], [(n, c) for n, c in enumerate(s.coefficients)])


def cmd_distance(a):
    p1, p2 = dtn.Potential(a.gamma1, a.b1), dtn.Potential(a.gamma2, a.b2)
    d = dtn.dtn_distance(p1, p2, a.tol, a.nmax)
    return Table(["dtn_dist", "n_at_sup", "tail_bound", "n_scanned", "linf_dist", "l1_dist"],
                 [(d.value, d.n_at_sup, d.tail_bound, d.n_scanned,
                   dtn.potential_distance_linf(p1, p2), dtn.potential_distance_l1(p1, p2, a.measure))])


def cmd_stability_scan(a):
    g = analysis.GridSpec(a.grid_n)
    reports = analysis.stability_scan(g, a.metric, a.fixed_b, a.b_min, a.b0, a.measure, a.workers)
    rows = [(r.base.b, r.base.gamma, r.constant, r.argmax_partner.b, r.argmax_partner.gamma,
             r.n_excluded, r.bound_violations) for r in reports]
    bad = any(r.bound_violations for r in reports)
    return Table(["b", "gamma", "c2", "partner_b", "partner_gamma", "n_excluded", "bound_violations"],
                 rows, EXIT_PROPERTY if bad else EXIT_OK)


def cmd_stability_curves(a):
    g = analysis.GridSpec(a.grid_n)
    bs = [g.snap(b) for b in a.bs]
    return Table(["b", "c2_min", "c2_max"], analysis.stability_curves(g, bs, a.workers))


def cmd_ranges(a):
    g = analysis.GridSpec(a.grid_n)
    return Table(["n", "range"], analysis.coefficient_ranges(g, a.nlist))


def cmd_gradients(a):
    recs = analysis.gradient_norms(a.n, a.gammas, a.bs, a.step)
    return Table(["n", "gamma", "b", "grad_norm"], [(r.n, r.gamma, r.b, r.grad_norm) for r in recs])


def cmd_range_map(a):
    pts = analysis.range_map(analysis.GridSpec(a.grid_n))
    return Table(["b", "gamma", "c0", "c1"], [(p.b, p.gamma, p.c0, p.c1) for p in pts])


def cmd_boundary_curves(a):
    curves = analysis.boundary_curves(a.samples)
    rows = [(cid, *row) for cid in ("low", "up") for row in curves[cid]]
    return Table(["curve_id", "parameter", "c0", "c1"], rows)


def cmd_injectivity(a):
    r = analysis.injectivity_check(analysis.GridSpec(a.grid_n), a.tol)
    p, q = r.closest_pair
    return Table(["n_points", "collisions", "min_separation", "b1", "gamma1", "b2", "gamma2"],
                 [(r.n_points, r.collisions, r.min_separation, p.b, p.gamma, q.b, q.gamma)],
                 EXIT_OK if r.injective else EXIT_PROPERTY)


def cmd_invert(a):
    p = analysis.invert(a.c0, a.c1, a.tol)
    s = dtn.spectrum(p, 1)
    return Table(["gamma", "b", "c0", "c1"], [(p.gamma, p.b, s[0], s[1])])


def cmd_instability(a):
    rows = analysis.instability_sequence(a.b0, a.gamma, a.kmax, a.null_base)
    cols = ["k", "b_k", "linf_dist", "l1_dist", "dtn_dist", "tail_bound"]
    return Table(cols, [[r[c] for c in cols] for r in rows])


def cmd_level_sets(a):
    rows = analysis.level_sets(analysis.GridSpec(a.grid_n), a.thresholds, a.workers)
    cols = ["b", "gamma", "c0", "c1", "c2", "region_label"]
    return Table(cols, [[r[c] for c in cols] for r in rows])


def verify_bounds(samples: int, seed: int, oracle_points: int = 5):
    """Run every grid-free property suite on random samples.

    Returns a list of (check, cases, failures).
    """
    rng = np.random.default_rng(seed)
    out = []

    rs = rng.uniform(1e-6, 1.0 - 1e-6, samples)
    fails = cases = 0
    for n in range(11):
        for r in rs:
            rep = bessel.check_lemma1_bounds(n, float(r))
            cases += 1
            fails += not rep.passed
    out.append(("bessel_small_argument_bounds", cases, fails))

    fails = cases = 0
    pairs = np.sort(rng.uniform(1e-3, 1.0 - 1e-6, (samples, 2)), axis=1)
    for r, s in pairs:
        for n in (0, 2):
            cases += 1
            fails += not bessel.check_lemma2_integrals(float(r), float(s), n).passed
    out.append(("cosine_integral_bounds", cases, fails))

    d = bessel.c0_denominator(rng.uniform(0.0, 1.0, samples))
    out.append(("c0_denominator_bound", samples, int(np.count_nonzero(d < 0.75 - bessel.BOUND_SLACK))))

    fails = 0
    for _ in range(samples):
        b = float(rng.uniform(0.05, 0.95))
        g1, g2 = rng.uniform(0.0, 1.0, 2)
        p1, p2 = dtn.Potential(float(g1), b), dtn.Potential(float(g2), b)
        lhs = dtn.potential_distance_linf(p1, p2)
        fails += lhs > analysis.fixed_radius_constant(b) * dtn.dtn_distance(p1, p2).value * (1 + 1e-12)
    out.append(("fixed_radius_lipschitz", samples, int(fails)))

    fails = 0
    for _ in range(samples):
        gamma = float(rng.uniform(0.05, 1.0))
        b1, b2 = rng.uniform(0.1, 0.95, 2)
        p1, p2 = dtn.Potential(gamma, float(b1)), dtn.Potential(gamma, float(b2))
        rhs = analysis.fixed_height_constant(gamma, min(b1, b2)) * dtn.dtn_distance(p1, p2).value
        fails += abs(b1 - b2) > rhs * (1 + 1e-12)
    out.append(("fixed_height_lipschitz", samples, int(fails)))

    rows = oracle_table(oracle_points, 8, 1e-7)
    out.append(("oracle_equivalence", len(rows), sum(1 for r in rows if not r[-1])))
    return out


def oracle_table(points: int, n_max: int, tol: float, steps: int = 20000):
    vals = np.linspace(0.1, 0.9, points)
    cfg = oracle.IntegratorConfig(step_count=steps)
    ns = np.arange(n_max + 1)
    rows = []
    for g in vals:
        for b in vals:
            closed = dtn.spectrum_array(g, b, n_max)
            ode = oracle.solve_radial_batch(g, float(b), ns, cfg)
            for n in ns:
                diff = abs(closed[n] - ode[n])
                rows.append((float(g), float(b), int(n), float(closed[n]), float(ode[n]), diff, diff <= tol))
    return rows


def cmd_verify_bounds(a):
    rows = verify_bounds(a.samples, a.seed)
    bad = any(r[2] for r in rows)
    return Table(["check", "cases", "failures"], rows, EXIT_PROPERTY if bad else EXIT_OK)


def cmd_oracle_check(a):
    rows = oracle_table(a.points, a.nmax, a.tol, a.steps)
    bad = any(not r[-1] for r in rows)
    return Table(["gamma", "b", "n", "closed_form", "oracle", "abs_diff", "passed"], rows,
                 EXIT_PROPERTY if bad else EXIT_OK)


# -- parser -----------------------------------------------------------------

DEFAULT_BS = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="radial-dtn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, grid=False, workers=False):
        p = sub.add_parser(name)
        p.set_defaults(func=fn)
        p.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        if grid:
            p.add_argument("--grid-n", type=int, default=100, help="grid has step h = 1/N")
        if workers:
            p.add_argument("--workers", type=int, default=1)
        return p

    p = add("spectrum", cmd_spectrum)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--nmax", type=int, default=16)

    p = add("distance", cmd_distance)
    for k in ("gamma1", "b1", "gamma2", "b2"):
        p.add_argument(f"--{k}", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--nmax", type=int, default=dtn.DEFAULT_N_CAP)
    p.add_argument("--measure", choices=("area", "radial"), default="area")

    p = add("stability-scan", cmd_stability_scan, grid=True, workers=True)
    p.add_argument("--metric", choices=("linf", "l1"), default="linf")
    p.add_argument("--fixed-b", type=float, default=None)
    p.add_argument("--b-min", type=float, default=None, help="smallest base radius")
    p.add_argument("--b0", type=float, default=None, help="smallest partner radius")
    p.add_argument("--measure", choices=("area", "radial"), default="area")

    p = add("stability-curves", cmd_stability_curves, grid=True, workers=True)
    p.add_argument("--bs", type=_floats, default=_floats(DEFAULT_BS))

    p = add("ranges", cmd_ranges, grid=True)
    p.add_argument("--nlist", type=_ints, default=_ints("0,1,2,3,4,5"))

    p = add("gradients", cmd_gradients)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gammas", type=_floats, default=_floats("0.1,0.34,0.67,0.99"))
    p.add_argument("--bs", type=_floats, default=[round(0.01 * i, 2) for i in range(1, 100)])
    p.add_argument("--step", type=float, default=1e-5)

    add("range-map", cmd_range_map, grid=True)

    p = add("boundary-curves", cmd_boundary_curves)
    p.add_argument("--samples", type=int, default=101)

    p = add("injectivity", cmd_injectivity, grid=True)
    p.add_argument("--tol", type=float, default=1e-12)

    p = add("invert", cmd_invert)
    p.add_argument("--c0", type=float, required=True)
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-12)

    p = add("instability", cmd_instability)
    p.add_argument("--b0", type=float, default=0.5)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--kmax", type=int, default=100)
    p.add_argument("--null-base", action="store_true")

    p = add("level-sets", cmd_level_sets, grid=True, workers=True)
    p.add_argument("--thresholds", type=_floats, default=_floats("1e3,1e4,1e5,1e6,1e7"))

    p = add("verify-bounds", cmd_verify_bounds)
    p.add_argument("--samples", type=int, default=200)

    p = add("oracle-check", cmd_oracle_check)
    p.add_argument("--points", type=int, default=9)
    p.add_argument("--nmax", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--steps", type=int, default=20000)
    return parser


def _validate(a):
    for name in ("samples", "kmax", "nmax", "points"):
        v = getattr(a, name, None)
        if v is not None and v < 1:
            raise DomainError(f"--{name} must be positive")
    for name in ("tol", "step"):
        v = getattr(a, name, None)
        if v is not None and not (v > 0 and math.isfinite(v)):
            raise DomainError(f"--{name} must be positive")
    if getattr(a, "grid_n", None) is not None:
        analysis.GridSpec(a.grid_n)
    if getattr(a, "workers", None) is not None and a.workers < 1:
        raise DomainError("--workers must be positive")


def run(argv=None) -> int:
    try:
        a = build_parser().parse_args(argv)
        _validate(a)
        table = a.func(a)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_DOMAIN
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"no convergence: {exc} (best={exc.best})", file=sys.stderr)
        return EXIT_CONVERGENCE
    text = render(table, a.format)
    if a.output:
        with open(a.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return table.status


def main():
    sys.exit(run())
