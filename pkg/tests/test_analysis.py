import math

import numpy as np
import pytest

from radial_dtn import analysis
from radial_dtn.analysis import (
    GridSpec,
    boundary_curves,
    coefficient_ranges,
    gradient_norms,
    in_range_region,
    injectivity_check,
    instability_sequence,
    invert,
    level_sets,
    range_map,
    region_label,
    stability_constant,
    stability_curves,
    stability_scan,
)
from radial_dtn.dtn import ZERO, Potential, dtn_distance, potential_distance_l1, potential_distance_linf, spectrum_array
from radial_dtn.exceptions import ConvergenceError, DomainError

G = GridSpec(20)


def brute_constant(base, partners, metric="linf"):
    best, arg = -1.0, None
    for q in partners:
        d = dtn_distance(base, q, tol=1e-15).value
        if d < analysis.RATIO_FLOOR:
            continue
        num = potential_distance_linf(base, q) if metric == "linf" else potential_distance_l1(base, q)
        if num / d > best:
            best, arg = num / d, q
    return best, arg


# -- grid -------------------------------------------------------------------

def test_grid_layout():
    pots = analysis.grid_potentials(G)
    assert pots[0] == ZERO
    assert len(pots) == G.size == 1 + 20 * 19
    assert pots[1] == Potential(0.05, 0.05) and pots[2] == Potential(0.05, 0.1)
    assert G.h == 0.05
    assert G.snap(0.3) == 0.3
    with pytest.raises(DomainError):
        G.snap(0.33)
    with pytest.raises(DomainError):
        GridSpec(1)
    assert G.contains(Potential(0.0, 0.123)) and not G.contains(Potential(0.33, 0.5))


def test_grid_table_read_only():
    t = analysis.grid_table(G)
    assert t.spectra.shape == (G.size, t.n_cap + 1)
    with pytest.raises(ValueError):
        t.spectra[0, 0] = 1.0
    assert t.index(Potential(0.35, 0.6)) == t.potentials.index(Potential(0.35, 0.6))


# -- stability ----------------------------------------------------------------

@pytest.mark.parametrize("base", [Potential(0.5, 0.5), Potential(1.0, 0.1), Potential(0.05, 0.95), ZERO])
@pytest.mark.parametrize("metric", ["linf", "l1"])
def test_branch_and_bound_equals_brute_force(base, metric):
    pots = [q for q in analysis.grid_potentials(G) if q != base.canonical()]
    ref, arg = brute_constant(base, pots, metric)
    rep = stability_constant(base, G, metric)
    assert rep.constant == pytest.approx(ref, rel=1e-12)
    assert rep.argmax_partner == arg
    assert rep.n_partners == len(pots)


def test_fixed_b_partner_set():
    rep = stability_constant(Potential(0.5, 0.5), G, fixed_b=0.5)
    partners = [Potential(j / 20, 0.5) for j in range(1, 20) if j != 10]
    ref, _ = brute_constant(Potential(0.5, 0.5), partners)
    assert rep.n_partners == 18
    assert rep.constant == pytest.approx(ref, rel=1e-12)
    assert rep.bound_violations == 0 and rep.bound_checks == 18
    with pytest.raises(DomainError):
        stability_constant(Potential(0.5, 0.4), G, fixed_b=0.5)


def test_off_grid_base_rejected():
    with pytest.raises(DomainError):
        stability_constant(Potential(0.33, 0.5), G)
    with pytest.raises(DomainError):
        stability_constant(Potential(0.5, 0.5), G, metric="l2")


def test_lipschitz_bounds_during_scan():
    reps = stability_scan(G, "linf")
    assert sum(r.bound_checks for r in reps) > 0
    assert all(r.bound_violations == 0 for r in reps)


def test_scan_independent_of_workers():
    a = stability_scan(G, "l1", partner_b_min=0.1, base_b_min=0.2, workers=1)
    b = stability_scan(G, "l1", partner_b_min=0.1, base_b_min=0.2, workers=3)
    assert [r.constant for r in a] == [r.constant for r in b]
    assert all(r.base.b >= 0.2 - 1e-12 for r in a)


def test_stability_curves_trend():
    rows = stability_curves(G, [0.1, 0.5, 0.9])
    assert [r[0] for r in rows] == [0.1, 0.5, 0.9]
    assert all(lo <= hi for _, lo, hi in rows)
    assert rows[0][2] > rows[1][2] > rows[2][2]


# -- sensitivity ------------------------------------------------------------

def test_coefficient_ranges_decrease():
    rows = coefficient_ranges(G, range(6))
    vals = [v for _, v in rows]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    t = analysis.grid_table(G)
    assert vals[1] == pytest.approx(np.ptp(t.spectra[:, 1]))


def test_gradient_norms():
    recs = gradient_norms(0, [0.5, 1.0], [0.5, 0.99])
    assert [(r.gamma, r.b) for r in recs] == [(0.5, 0.5), (0.5, 0.99), (1.0, 0.5), (1.0, 0.99)]
    # cross-check against central differences with a coarser step
    h = 1e-3
    f = lambda g, b: spectrum_array(g, b, 1)[0]
    dg = (f(0.5 + h, 0.5) - f(0.5 - h, 0.5)) / (2 * h)
    db = (f(0.5, 0.5 + h) - f(0.5, 0.5 - h)) / (2 * h)
    assert recs[0].grad_norm == pytest.approx(math.hypot(dg, db), rel=1e-5)
    assert all(math.isfinite(r.grad_norm) for r in recs)


def test_gradient_decays_with_n():
    norms = [gradient_norms(n, [0.67], [0.9])[0].grad_norm for n in range(5)]
    assert all(a > b for a, b in zip(norms, norms[1:]))


# -- range geometry ---------------------------------------------------------

def test_range_map_inside_region():
    pts = range_map(G)
    xy = np.array([[p.c0, p.c1] for p in pts])
    assert np.all(in_range_region(xy, tol=1e-6))
    assert pts[0].c0 == 0.0 and pts[0].c1 == 1.0


def test_boundary_curves_meet():
    c = boundary_curves(11)
    low, up = c["low"], c["up"]
    assert low[0, 1:].tolist() == [0.0, 1.0] and up[0, 1:].tolist() == [0.0, 1.0]
    np.testing.assert_allclose(low[-1, 1:], up[-1, 1:], atol=1e-15)
    assert np.all(np.diff(low[:, 1]) < 0)


def test_points_outside_region():
    assert not in_range_region([[0.1, 0.5]])[0]
    assert not in_range_region([[-0.3, 1.0]])[0]


def test_injectivity_matches_brute_force():
    g = GridSpec(12)
    rep = injectivity_check(g)
    pts = np.array([[p.c0, p.c1] for p in range_map(g)])
    diff = np.max(np.abs(pts[:, None, :] - pts[None, :, :]), axis=-1)
    np.fill_diagonal(diff, np.inf)
    assert rep.min_separation == pytest.approx(diff.min(), rel=1e-12)
    assert rep.collisions == 0 and rep.injective and rep.n_points == g.size


# -- inversion --------------------------------------------------------------

@pytest.mark.parametrize("gamma,b", [(0.5, 0.5), (0.13, 0.87), (1.0, 0.3), (0.9, 0.05), (0.05, 0.05)])
@pytest.mark.parametrize("method", ["newton", "bisection"])
def test_invert_round_trip(gamma, b, method):
    s = spectrum_array(gamma, b, 1)
    p = invert(s[0], s[1], method=method)
    assert abs(p.gamma - gamma) < 1e-6 and abs(p.b - b) < 1e-6


def test_invert_zero_and_outside():
    assert invert(0.0, 1.0) == ZERO
    with pytest.raises(DomainError):
        invert(0.1, 0.9)
    with pytest.raises(DomainError):
        invert(-0.3, 1.0)
    with pytest.raises(ValueError):
        invert(-0.14, 0.97, method="secant")


def test_convergence_error_carries_best():
    err = ConvergenceError("x", best=(0.1, 0.2), residual=1.0)
    assert err.best == (0.1, 0.2) and err.residual == 1.0


# -- instability --------------------------------------------------------------

def test_first_admissible_k():
    assert analysis.first_admissible_k(0.5) == 3
    assert analysis.first_admissible_k(0.1) == 2
    assert analysis.first_admissible_k(0.9) == 11


def test_instability_sequence():
    rows = instability_sequence(0.5, 1.0, 30)
    assert [r["k"] for r in rows] == list(range(1, 31))
    assert all(r["linf_dist"] == 1.0 for r in rows)
    d = [r["dtn_dist"] for r in rows]
    assert all(a > b for a, b in zip(d, d[1:]))
    assert all(r["dtn_dist"] <= 2 * (r["b_k"] - 0.5) for r in rows)
    assert all(r["b_k"] < 1.0 for r in rows)


def test_null_base_quadratic_decay():
    rows = instability_sequence(0.5, 1.0, 60, null_base=True)
    assert rows[0]["k"] == 2
    c = np.array([r["dtn_dist"] * r["k"] ** 2 for r in rows if r["k"] >= 20])
    assert c.std() / c.mean() < 0.01


def test_instability_domain():
    with pytest.raises(DomainError):
        instability_sequence(0.5, 0.0, 10)
    with pytest.raises(DomainError):
        instability_sequence(1.0, 1.0, 10)


# -- level sets ---------------------------------------------------------------

def test_region_labels():
    assert region_label(2e7, [1e6, 1e7]) == "I"
    assert region_label(5e6, [1e6, 1e7]) == "II"
    assert region_label(10.0, [1e6, 1e7]) == "III"


def test_level_sets_consistent():
    rows = level_sets(G, [1e3, 1e4])
    assert len(rows) == G.size
    pots = analysis.grid_potentials(G)
    for i in (5, 100, 300):
        p = pots[i]
        others = [q for q in pots if q != p]
        assert rows[i]["c2"] == pytest.approx(brute_constant(p, others)[0], rel=1e-12)
        assert rows[i]["region_label"] == region_label(rows[i]["c2"], [1e3, 1e4])
    with pytest.raises(DomainError):
        level_sets(G, [1e4, 1e3])


# -- grid invariants at N = 100 ---------------------------------------------

def test_l1_constant_tame_away_from_zero():
    g = GridSpec(100)
    reps = stability_scan(g, "l1", base_b_min=0.2, partner_b_min=0.1)
    at_half = [r.constant for r in reps if abs(r.base.b - 0.5) < 1e-12]
    # strictest reading: compare against the smallest constant on the b = 0.5 line
    assert max(r.constant for r in reps) <= 10 * min(at_half)
    assert all(r.bound_violations == 0 for r in reps)


@pytest.mark.parametrize("gamma", [0.01, 0.3, 1.0])
def test_c0_coordinate_line_monotone(gamma):
    b = np.linspace(0.01, 0.99, 100)
    c0 = spectrum_array(gamma, b, 1)[:, 0]
    assert np.all(np.diff(c0) < 0)


# -- documented cases -------------------------------------------------------

def test_grid_counts():
    assert analysis.grid_potentials(GridSpec(2)) == [ZERO, Potential(0.5, 0.5), Potential(1.0, 0.5)]
    assert len(analysis.grid_potentials(GridSpec(3))) == 7
    assert GridSpec(100).size == len(analysis.grid_potentials(GridSpec(100))) == 9901
    assert injectivity_check(GridSpec(2)).collisions == 0


def test_n100_stability_baselines():
    g = GridSpec(100)
    zero = stability_constant(ZERO, g)
    assert zero.constant == pytest.approx(19999.951448298034, rel=1e-12)
    assert zero.n_excluded == 0
    fixed = stability_constant(Potential(0.5, 0.5), g, fixed_b=0.5)
    assert fixed.constant <= analysis.fixed_radius_constant(0.5)
    assert stability_constant(Potential(1.0, 0.1), g).constant > stability_constant(Potential(1.0, 0.9), g).constant
    (_, lo, hi), = stability_curves(g, [0.5])
    assert hi / lo > 1


def test_documented_gradients():
    assert gradient_norms(5, [0.5], [0.05])[0].grad_norm < gradient_norms(0, [0.5], [0.05])[0].grad_norm
    norms = [r.grad_norm for r in gradient_norms(1, [0.99], [0.9, 0.6, 0.3, 0.1, 0.05])]
    assert all(a > b for a, b in zip(norms, norms[1:]))
    # on gamma = 0 the spectrum does not see b, so the b-partial vanishes
    b = np.linspace(0.01, 0.99, 50)
    assert np.all(analysis.cn_values(0.0, b, 1) == 1.0)


def test_range_point_invariants():
    pts = range_map(GridSpec(30))
    assert all(p.c0 <= 0 and 0 < p.c1 <= 1 for p in pts)


def test_lower_curve_end_is_bessel_expression():
    from scipy import special
    end = boundary_curves(3)["low"][-1]
    j0, j1, j2 = special.jv([0, 1, 2], 1.0)
    assert end[1] == pytest.approx(-j1 / j0, rel=1e-14)
    assert end[2] == pytest.approx((j0 - j2) / (j0 + j2), rel=1e-14)


def test_level_sets_n100_geometry():
    rows = level_sets(GridSpec(100), [1e6, 1e7])
    labels = {r["region_label"] for r in rows}
    assert labels <= {"I", "II", "III"}
    top = [r["b"] for r in rows if r["region_label"] == "I"]
    assert top and np.mean(top) < 0.1
    nonzero = [r for r in rows if r["gamma"] > 0]
    assert min(nonzero, key=lambda r: r["c2"])["b"] >= 0.9
