"""Numerical experiments on the discrete family of one-step potentials.

The grid F_h holds b = i/N (i = 1..N-1) and gamma = j/N (j = 0..N), with
every gamma = 0 entry collapsed into the single zero potential.  Spectra
for a grid are computed once and cached; scans over it are read-only and
may be spread over a thread pool without changing any result.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.spatial import cKDTree

from .dtn import (
    DEFAULT_N_CAP,
    ZERO,
    Potential,
    c0_values,
    cn_values,
    dtn_distance,
    potential_distance_l1,
    potential_distance_linf,
    ratio_terms,
    spectrum_array,
    tail_bound,
)
from .exceptions import ConvergenceError, DomainError

RATIO_FLOOR = 1e-14
FIXED_RADIUS_FACTOR = 4.8765 ** 2
FIXED_HEIGHT_FACTOR = 7.5  # 15 / 2


@dataclass(frozen=True)
class GridSpec:
    n_divisions: int

    def __post_init__(self):
        if int(self.n_divisions) != self.n_divisions or self.n_divisions < 2:
            raise DomainError("n_divisions must be an integer >= 2")

    @property
    def h(self) -> float:
        return 1.0 / self.n_divisions

    @property
    def size(self) -> int:
        n = self.n_divisions
        return n * (n - 1) + 1

    def b_values(self) -> np.ndarray:
        n = self.n_divisions
        return np.arange(1, n) / n

    def gamma_values(self) -> np.ndarray:
        n = self.n_divisions
        return np.arange(0, n + 1) / n

    def snap(self, value: float) -> float:
        """Nearest grid coordinate i/N, or DomainError if off-grid."""
        n = self.n_divisions
        i = round(value * n)
        if abs(value * n - i) > 1e-9:
            raise DomainError(f"{value!r} is not a multiple of 1/{n}")
        return i / n

    def contains(self, p: Potential) -> bool:
        if p.is_zero:
            return True
        try:
            self.snap(p.gamma)
            self.snap(p.b)
        except DomainError:
            return False
        return True


@dataclass(frozen=True)
class RangePoint:
    b: float
    gamma: float
    c0: float
    c1: float


@dataclass(frozen=True)
class StabilityReport:
    """Worst-case ratio of potential distance to DtN distance for one base."""

    base: Potential
    constant: float
    metric: str
    argmax_partner: Potential
    grid: GridSpec
    fixed_b: float | None = None
    n_partners: int = 0
    n_excluded: int = 0
    tail_bound: float = 0.0
    bound_checks: int = 0
    bound_violations: int = 0


@dataclass(frozen=True)
class GradientRecord:
    n: int
    b: float
    gamma: float
    grad_norm: float


@dataclass(frozen=True)
class InjectivityReport:
    n_points: int
    collisions: int
    min_separation: float
    closest_pair: tuple[Potential, Potential]

    @property
    def injective(self) -> bool:
        return self.collisions == 0


# -- grid tables ------------------------------------------------------------

def grid_potentials(g: GridSpec) -> list[Potential]:
    """Zero potential first, then gamma-major, b-minor."""
    n = g.n_divisions
    out = [ZERO]
    for j in range(1, n + 1):
        for i in range(1, n):
            out.append(Potential(j / n, i / n))
    return out


@dataclass(frozen=True)
class GridTable:
    grid: GridSpec
    potentials: tuple[Potential, ...]
    gamma: np.ndarray
    b: np.ndarray
    spectra: np.ndarray
    weighted: np.ndarray = field(repr=False)
    support: np.ndarray = field(repr=False)

    @property
    def n_cap(self) -> int:
        return self.spectra.shape[1] - 1

    def index(self, p: Potential) -> int:
        if p.is_zero:
            return 0
        n = self.grid.n_divisions
        j = round(self.grid.snap(p.gamma) * n)
        i = round(self.grid.snap(p.b) * n)
        return 1 + (j - 1) * (n - 1) + (i - 1)


@lru_cache(maxsize=8)
def grid_table(g: GridSpec, n_cap: int = DEFAULT_N_CAP) -> GridTable:
    pots = tuple(grid_potentials(g))
    gam = np.array([p.gamma for p in pots])
    bb = np.array([p.b for p in pots])
    spec = spectrum_array(gam, bb, n_cap)
    weighted = spec / (1.0 + np.arange(n_cap + 1))
    support = np.where(gam > 0, bb, 0.0)
    for arr in (gam, bb, spec, weighted, support):
        arr.setflags(write=False)
    return GridTable(g, pots, gam, bb, spec, weighted, support)


def _linf_arrays(g1, b1, g2, b2):
    outer_gamma = np.where(b1 >= b2, g1, g2)
    return np.where(b1 == b2, np.abs(g1 - g2), np.maximum(np.abs(g1 - g2), outer_gamma))


def _l1_arrays(g1, b1, g2, b2, measure="area"):
    b_in = np.minimum(b1, b2)
    b_out = np.maximum(b1, b2)
    outer_gamma = np.where(b1 >= b2, g1, g2)
    dg = np.abs(g1 - g2)
    if measure == "area":
        return math.pi * (b_in ** 2 * dg + (b_out ** 2 - b_in ** 2) * outer_gamma)
    if measure == "radial":
        return b_in * dg + (b_out - b_in) * outer_gamma
    raise ValueError(f"unknown measure {measure!r}")


def potential_distances(metric, g1, b1, g2, b2, measure="area"):
    """Vectorised L^inf or L^1 distance between one-step potentials."""
    if metric == "linf":
        return _linf_arrays(g1, b1, g2, b2)
    if metric == "l1":
        return _l1_arrays(g1, b1, g2, b2, measure)
    raise ValueError(f"unknown metric {metric!r}")


def fixed_radius_constant(b: float) -> float:
    """Lipschitz constant for equal radii: 4.8765^2 / b^4."""
    return FIXED_RADIUS_FACTOR / b ** 4


def fixed_height_constant(gamma: float, b_min: float) -> float:
    """Constant bounding |b1 - b2| for equal heights: 15 / (2 gamma b_min^3)."""
    return FIXED_HEIGHT_FACTOR / (gamma * b_min ** 3)


HEAD_MODES = 4


def _max_ratio(table, base_idx, partner_idx, metric, measure, floor):
    """max over partners of distance / dtn_distance, by branch and bound.

    The first HEAD_MODES+1 modes give a lower bound ``acc`` on each DtN
    distance and the analytic tail bound an upper bound, so only partners
    whose ratio could still beat the best guaranteed ratio get their full
    spectrum compared.  The result equals the exhaustive maximum.

    Returns (constant, partner index, number excluded by the floor).
    """
    head = table.weighted[:, :HEAD_MODES + 1]
    acc = np.max(np.abs(head[partner_idx] - head[base_idx]), axis=1)
    num = potential_distances(metric, table.gamma[base_idx], table.b[base_idx],
                              table.gamma[partner_idx], table.b[partner_idx], measure)
    if table.n_cap > HEAD_MODES:
        b_max = np.maximum(table.support[partner_idx], table.support[base_idx])
        upper = np.maximum(acc, b_max ** (2 * HEAD_MODES + 4) / (HEAD_MODES + 2) ** 2)
        with np.errstate(divide="ignore"):
            guaranteed = np.where(acc >= floor, num / upper, -np.inf)
            optimistic = np.where(acc > 0, num / acc, np.inf)
        best = np.max(guaranteed)
        refine = np.flatnonzero((optimistic >= best) | (acc < floor))
        dtn = np.max(np.abs(table.weighted[partner_idx[refine]] - table.weighted[base_idx]), axis=1)
        num = num[refine]
        cand = partner_idx[refine]
    else:
        dtn, cand = acc, partner_idx
    ok = dtn >= floor
    ratio = np.where(ok, num / np.where(ok, dtn, 1.0), -np.inf)
    k = int(np.argmax(ratio))
    return float(ratio[k]), int(cand[k]), int(np.count_nonzero(~ok))


def _exact_dtn(table, base_idx, idx):
    return np.max(np.abs(table.weighted[idx] - table.weighted[base_idx]), axis=1)


def _partner_indices(table, base_idx, fixed_b, partner_b_min):
    n = table.grid.n_divisions
    if fixed_b is not None:
        i = round(table.grid.snap(fixed_b) * n)
        # the fixed-radius family excludes gamma in {0, 1}
        idx = np.array([1 + (j - 1) * (n - 1) + (i - 1) for j in range(1, n)])
    else:
        idx = np.arange(len(table.potentials))
        if partner_b_min is not None:
            keep = (table.b >= partner_b_min - 1e-12) | (table.gamma == 0.0)
            idx = idx[keep]
    return idx[idx != base_idx]


def stability_constant(base: Potential, g: GridSpec, metric: str = "linf",
                       fixed_b: float | None = None, partner_b_min: float | None = None,
                       measure: str = "area", floor: float = RATIO_FLOOR,
                       n_cap: int = DEFAULT_N_CAP) -> StabilityReport:
    """Discrete stability constant C_2 at ``base``.

    Maximises ||base - q|| / ||Lambda_base - Lambda_q|| over grid partners
    q != base.  With ``fixed_b`` the partners are (j/N, fixed_b) for
    j = 1..N-1 and ``base`` must share that radius; ``partner_b_min``
    restricts the full-grid partner set to radii >= that value (the
    zero potential is always kept).  Partners whose DtN distance is below
    ``floor`` are skipped and counted in ``n_excluded``.

    Equal-radius partners are checked against 4.8765^2/b^4 and equal-height
    partners against 15/(2 gamma b_min^3) while scanning; failures are
    counted in ``bound_violations``.
    """
    if metric not in ("linf", "l1"):
        raise DomainError(f"unknown metric {metric!r}")
    if not g.contains(base):
        raise DomainError("base potential is not on the grid")
    table = grid_table(g, n_cap)
    base_idx = table.index(base)
    if fixed_b is not None and (base.is_zero or abs(base.b - fixed_b) > 1e-12):
        raise DomainError("base must have radius fixed_b")
    partners = _partner_indices(table, base_idx, fixed_b, partner_b_min)
    if partners.size == 0:
        raise DomainError("empty partner set")

    constant, k, excluded = _max_ratio(table, base_idx, partners, metric, measure, floor)

    gb, bb = table.gamma[base_idx], table.b[base_idx]
    gp, bp = table.gamma[partners], table.b[partners]
    checks = violations = 0
    if gb > 0:
        same_b = partners[(bp == bb) & (gp > 0)]
        lhs = np.abs(table.gamma[same_b] - gb)
        rhs = fixed_radius_constant(bb) * _exact_dtn(table, base_idx, same_b)
        checks += lhs.size
        violations += int(np.count_nonzero(lhs > rhs * (1 + 1e-12)))
        same_g = partners[(gp == gb) & (bp != bb)]
        lhs = np.abs(table.b[same_g] - bb)
        b_min = np.minimum(table.b[same_g], bb)
        rhs = fixed_height_constant(gb, 1.0) / b_min ** 3 * _exact_dtn(table, base_idx, same_g)
        checks += lhs.size
        violations += int(np.count_nonzero(lhs > rhs * (1 + 1e-12)))

    b_max = float(max(bb if gb > 0 else 0.0, np.max(np.where(gp > 0, bp, 0.0))))
    return StabilityReport(
        base=base.canonical(), constant=constant, metric=metric,
        argmax_partner=table.potentials[k], grid=g, fixed_b=fixed_b,
        n_partners=int(partners.size), n_excluded=excluded,
        tail_bound=tail_bound(b_max, table.n_cap),
        bound_checks=checks, bound_violations=violations,
    )


def _pool_map(fn, items, workers):
    items = list(items)
    if workers is None or workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def stability_scan(g: GridSpec, metric: str = "linf", fixed_b: float | None = None,
                   base_b_min: float | None = None, partner_b_min: float | None = None,
                   measure: str = "area", workers: int | None = None) -> list[StabilityReport]:
    """:func:`stability_constant` for every admissible base, in grid order.

    With ``fixed_b`` the bases are (j/N, fixed_b), j = 1..N-1.  Otherwise
    all nonzero grid potentials with b >= ``base_b_min``.
    """
    if fixed_b is not None:
        n = g.n_divisions
        bases = [Potential(j / n, g.snap(fixed_b)) for j in range(1, n)]
    else:
        lo = -math.inf if base_b_min is None else base_b_min - 1e-12
        bases = [p for p in grid_potentials(g)[1:] if p.b >= lo]
    grid_table(g)
    return _pool_map(
        lambda p: stability_constant(p, g, metric, fixed_b, partner_b_min, measure), bases, workers)


def stability_curves(g: GridSpec, bs, workers: int | None = None) -> list[tuple[float, float, float]]:
    """(b, C2_min(b), C2_max(b)) over the fixed-radius families."""
    rows = []
    for b in bs:
        consts = [r.constant for r in stability_scan(g, "linf", fixed_b=b, workers=workers)]
        rows.append((g.snap(b), min(consts), max(consts)))
    return rows


def coefficient_ranges(g: GridSpec, n_list) -> list[tuple[int, float]]:
    """max - min of c_n over the grid for each requested n."""
    n_list = list(n_list)
    table = grid_table(g, max(DEFAULT_N_CAP, max(n_list)))
    return [(int(n), float(np.ptp(table.spectra[:, n]))) for n in n_list]


def _coefficient(n, gamma, b):
    return c0_values(gamma, b) if n == 0 else cn_values(gamma, b, n)


def gradient_norms(n: int, gammas, bs, step: float = 1e-5) -> list[GradientRecord]:
    """Finite-difference gradient norms |grad_(b, gamma) c_n|.

    Central differences, switched to one-sided within one step of the
    parameter box edges.
    """
    out = []
    for gamma in gammas:
        for b in bs:
            if gamma - step >= 0.0 and gamma + step <= 1.0:
                dg = (_coefficient(n, gamma + step, b) - _coefficient(n, gamma - step, b)) / (2 * step)
            elif gamma - step < 0.0:
                dg = (_coefficient(n, gamma + step, b) - _coefficient(n, gamma, b)) / step
            else:
                dg = (_coefficient(n, gamma, b) - _coefficient(n, gamma - step, b)) / step
            if b - step > 0.0 and b + step < 1.0:
                db = (_coefficient(n, gamma, b + step) - _coefficient(n, gamma, b - step)) / (2 * step)
            elif b - step <= 0.0:
                db = (_coefficient(n, gamma, b + step) - _coefficient(n, gamma, b)) / step
            else:
                db = (_coefficient(n, gamma, b) - _coefficient(n, gamma, b - step)) / step
            out.append(GradientRecord(int(n), float(b), float(gamma), math.hypot(db, dg)))
    return out


def range_map(g: GridSpec) -> list[RangePoint]:
    table = grid_table(g)
    return [RangePoint(float(b), float(gm), float(c[0]), float(c[1]))
            for gm, b, c in zip(table.gamma, table.b, table.spectra)]


def coordinate_lines(values, fixed: str = "gamma", samples: int = 100) -> list[np.ndarray]:
    """Images in the (c0, c1) plane of lines with constant gamma or constant b.

    Each entry has shape (samples, 2); the free parameter runs over
    (0, 1) for b and [0, 1] for gamma.
    """
    free = np.linspace(0.0, 1.0, samples + 2)[1:-1] if fixed == "gamma" else np.linspace(0.0, 1.0, samples)
    lines = []
    for v in values:
        gamma, b = (np.full_like(free, v), free) if fixed == "gamma" else (free, np.full_like(free, v))
        c0 = c0_values(gamma, b)
        c1 = cn_values(gamma, b, 1)
        lines.append(np.column_stack([c0, c1]))
    return lines


# -- range region -----------------------------------------------------------

def boundary_curves(samples: int = 201) -> dict[str, np.ndarray]:
    """The two curves bounding the (c0, c1) range.

    ``"low"``: b = 1, gamma from 0 to 1.  ``"up"``: gamma = 1, b from 0
    to 1.  Rows are (parameter, c0, c1); both start at (0, 1) and end at
    the image of (gamma, b) = (1, 1).  The endpoints b = 0 and b = 1 use
    the continuous extension of the closed forms.
    """
    if samples < 2:
        raise DomainError("need at least two samples")
    t = np.linspace(0.0, 1.0, samples)
    ones = np.ones_like(t)
    low = np.column_stack([t, c0_values(t, ones, True), cn_values(t, ones, 1, True)])
    up = np.column_stack([t, c0_values(ones, t, True), cn_values(ones, t, 1, True)])
    return {"low": low, "up": up}


@lru_cache(maxsize=4)
def _region_polygon(samples: int = 4001) -> np.ndarray:
    curves = boundary_curves(samples)
    # closed loop: along r_low out to (1, 1), back along r_up
    poly = np.vstack([curves["low"][:, 1:], curves["up"][::-1, 1:][1:]])
    poly.setflags(write=False)
    return poly


def _segment_distance(points, poly):
    a = poly[:-1]
    d = poly[1:] - a
    len2 = np.maximum(np.sum(d * d, axis=1), 1e-300)
    out = np.empty(len(points))
    for s in range(0, len(points), 256):
        p = points[s:s + 256, None, :]
        t = np.clip(np.sum((p - a) * d, axis=2) / len2, 0.0, 1.0)
        proj = a + t[..., None] * d
        out[s:s + 256] = np.sqrt(np.min(np.sum((p - proj) ** 2, axis=2), axis=1))
    return out


def _inside_polygon(points, poly):
    x, y = points[:, 0][:, None], points[:, 1][:, None]
    x0, y0 = poly[:-1, 0], poly[:-1, 1]
    x1, y1 = poly[1:, 0], poly[1:, 1]
    crosses = (y0 > y) != (y1 > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
    return np.count_nonzero(crosses & (x < xint), axis=1) % 2 == 1


def region_distance(points, samples: int = 4001) -> np.ndarray:
    """0 for points inside the range region, else distance to its boundary."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    poly = _region_polygon(samples)
    inside = _inside_polygon(pts, poly)
    dist = np.zeros(len(pts))
    if np.any(~inside):
        dist[~inside] = _segment_distance(pts[~inside], poly)
    return dist


def in_range_region(points, tol: float = 1e-6) -> np.ndarray:
    return region_distance(points) <= tol


def injectivity_check(g: GridSpec, tol: float = 1e-12) -> InjectivityReport:
    """Search for grid potentials whose (c0, c1) images nearly coincide.

    Distances are in the max-norm.  A collision is a reported finding,
    not an error.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    table = grid_table(g)
    pts = table.spectra[:, :2]
    tree = cKDTree(pts)
    d, nn = tree.query(pts, k=2, p=np.inf)
    i = int(np.argmin(d[:, 1]))
    j = int(nn[i, 1])
    pair = tuple(sorted((i, j)))
    collisions = len(tree.query_pairs(tol, p=np.inf))
    return InjectivityReport(len(pts), collisions, float(d[i, 1]),
                             (table.potentials[pair[0]], table.potentials[pair[1]]))


# -- inversion --------------------------------------------------------------

_B_EPS = 1e-12


def _forward(gamma, b):
    """(c0, 1 - c1); the deficit 1 - c1 = 2 t_1 / (1 + t_1) keeps full
    relative precision near the zero potential."""
    c0 = c0_values(gamma, b)
    t1 = float(ratio_terms(gamma, b, 1)[0])
    return np.array([c0, 2.0 * t1 / (1.0 + t1)])


def _scaled_residual(x, target, scale):
    return (_forward(x[0], x[1]) - target) / scale


def _fd_jacobian(x, target, scale, step):
    f0 = _scaled_residual(x, target, scale)
    jac = np.empty((2, 2))
    for k in range(2):
        hi = 1.0 if k == 0 else 1.0 - _B_EPS
        xp = x.copy()
        if x[k] + step <= hi:
            xp[k] += step
            jac[:, k] = (_scaled_residual(xp, target, scale) - f0) / step
        else:
            xp[k] -= step
            jac[:, k] = (f0 - _scaled_residual(xp, target, scale)) / step
    return f0, jac


def _clip(x):
    return np.array([min(max(x[0], 0.0), 1.0), min(max(x[1], _B_EPS), 1.0 - _B_EPS)])


@lru_cache(maxsize=1)
def _coarse_cache():
    table = grid_table(GridSpec(64), 1)
    feat = np.column_stack([table.spectra[:, 0], 1.0 - table.spectra[:, 1]])
    return table, feat


def _initial_guess(target):
    table, feat = _coarse_cache()
    # compare on a log scale so the crowded corner near (0, 1) is resolved
    with np.errstate(divide="ignore"):
        lf = np.log(np.abs(feat[1:]))
        lt = np.log(np.abs(target))
    k = 1 + int(np.argmin(np.max(np.abs(lf - lt), axis=1)))
    return np.array([table.gamma[k], table.b[k]])


def _newton(target, scale, x, tol, max_iter, fd_step):
    f, jac = _fd_jacobian(x, target, scale, fd_step)
    for _ in range(max_iter):
        norm = np.linalg.norm(f)
        if norm < tol:
            return x, True
        try:
            dx = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return x, False
        lam = 1.0
        for _ in range(31):
            xn = _clip(x + lam * dx)
            fn = _scaled_residual(xn, target, scale)
            if np.linalg.norm(fn) < norm:
                break
            lam *= 0.5
        else:
            return x, False
        if np.max(np.abs(xn - x)) < 1e-15:
            return xn, np.linalg.norm(fn) < math.sqrt(tol)
        x = xn
        f, jac = _fd_jacobian(x, target, scale, fd_step)
    return x, np.linalg.norm(f) < tol


def _bisect(fn, lo, hi, iters=200):
    """Root of a monotone function on [lo, hi]; fn(lo), fn(hi) must differ in sign."""
    flo = fn(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = fn(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _coordinate_bisection(target):
    """Nested bisection: for each gamma pick b on the c0 level line
    (c0 decreases in b), then move gamma until 1 - c1 matches."""
    c0_t, d1_t = target

    def b_on_level(gamma):
        return _bisect(lambda b: c0_values(gamma, b, True) - c0_t, 0.0, 1.0)

    def mismatch(gamma):
        b = min(max(b_on_level(gamma), _B_EPS), 1.0 - _B_EPS)
        return _forward(gamma, b)[1] - d1_t

    # smallest height whose c0 level line still reaches b < 1
    g_lo = _bisect(lambda gm: c0_values(gm, 1.0, True) - c0_t, 0.0, 1.0)
    gamma = _bisect(mismatch, min(g_lo + 1e-15, 1.0), 1.0)
    b = min(max(b_on_level(gamma), _B_EPS), 1.0 - _B_EPS)
    return np.array([gamma, b])


def invert(c0_target: float, c1_target: float, tol: float = 1e-12, max_iter: int = 100,
           method: str = "newton", fd_step: float = 1e-7) -> Potential:
    """Recover (gamma, b) from the first two DtN eigenvalues.

    Starts from the nearest point of a coarse N = 64 grid and runs a damped
    Newton iteration with a forward-difference Jacobian on the relative
    residual in (c0, 1 - c1).  If Newton stalls the solve falls back to
    bisection along the c0 coordinate lines.  ``method="bisection"`` skips
    Newton.

    Raises
    ------
    DomainError
        The target lies outside the region bounded by the two range curves.
    ConvergenceError
        Neither method met ``tol``; ``best`` holds the best iterate.
    """
    target = np.array([c0_target, 1.0 - c1_target])
    if abs(target[0]) <= tol and abs(target[1]) <= tol:
        return ZERO
    if region_distance([[c0_target, c1_target]])[0] > 1e-9 or target[0] >= 0 or target[1] <= 0:
        raise DomainError("target is outside the range of the map")
    scale = np.abs(target)

    def accept(x):
        c = _forward(x[0], x[1])
        return max(abs(c[0] - target[0]), abs(c[1] - target[1])) <= tol

    best = None
    if method == "newton":
        x, ok = _newton(target, scale, _initial_guess(target), 1e-13, max_iter, fd_step)
        best = x
        if ok and accept(x):
            return Potential(float(x[0]), float(x[1]))
    elif method != "bisection":
        raise ValueError(f"unknown method {method!r}")
    x = _coordinate_bisection(target)
    if accept(x):
        return Potential(float(x[0]), float(x[1]))
    if best is None or np.linalg.norm(_scaled_residual(x, target, scale)) < \
            np.linalg.norm(_scaled_residual(best, target, scale)):
        best = x
    raise ConvergenceError("inversion did not converge", best=tuple(best),
                           residual=float(np.linalg.norm(_scaled_residual(best, target, scale))))


# -- instability sequence ---------------------------------------------------

def first_admissible_k(b0: float) -> int:
    """Smallest positive integer k with b0 + 1/k < 1."""
    k = max(1, math.floor(1.0 / (1.0 - b0)))
    while b0 + 1.0 / k >= 1.0:
        k += 1
    while k > 1 and b0 + 1.0 / (k - 1) < 1.0:
        k -= 1
    return k


def instability_sequence(b0: float, gamma: float, k_max: int, null_base: bool = False,
                         tol: float = 1e-14) -> list[dict]:
    """Potentials (gamma, b_k) drifting towards (gamma, b0).

    b_k = b0 + 1/(k(b0) + k).  Their sup-norm distance to the base stays
    gamma while the DtN distance shrinks.  With ``null_base`` the base is
    the zero potential and b_k = 1/k (k >= 2, so that b_k < 1).
    """
    if not 0.0 < gamma <= 1.0:
        raise DomainError("gamma must lie in (0, 1]")
    if null_base:
        base = ZERO
        ks = range(2, k_max + 1)
        radii = [1.0 / k for k in ks]
    else:
        if not 0.0 < b0 < 1.0:
            raise DomainError("b0 must lie in (0, 1)")
        base = Potential(gamma, b0)
        k0 = first_admissible_k(b0)
        ks = range(1, k_max + 1)
        radii = [b0 + 1.0 / (k0 + k) for k in ks]
    rows = []
    for k, bk in zip(ks, radii):
        qk = Potential(gamma, bk)
        d = dtn_distance(base, qk, tol)
        rows.append({
            "k": k, "b_k": bk,
            "linf_dist": potential_distance_linf(base, qk),
            "l1_dist": potential_distance_l1(base, qk),
            "dtn_dist": d.value, "tail_bound": d.tail_bound,
        })
    return rows


# -- level sets -------------------------------------------------------------

def _roman(k: int) -> str:
    numerals = [(10, "X"), (9, "IX"), (5, "V"), (4, "IV"), (1, "I")]
    out = ""
    for v, s in numerals:
        while k >= v:
            out += s
            k -= v
    return out


def region_label(value: float, thresholds) -> str:
    """'I' above the largest threshold, 'II' in the next band down, etc."""
    thresholds = list(thresholds)
    above = sum(1 for t in thresholds if value > t)
    return _roman(len(thresholds) - above + 1)


def level_sets(g: GridSpec, thresholds, workers: int | None = None) -> list[dict]:
    """C_2 (sup-norm, full-grid partners) and its band label for every grid potential."""
    thresholds = list(thresholds)
    if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
        raise DomainError("thresholds must be strictly increasing")
    table = grid_table(g)
    all_idx = np.arange(len(table.potentials))

    def one(i):
        partners = all_idx[all_idx != i]
        return _max_ratio(table, i, partners, "linf", "area", RATIO_FLOOR)[0]

    consts = _pool_map(one, range(len(table.potentials)), workers)
    rows = []
    for p, c, spec in zip(table.potentials, consts, table.spectra):
        rows.append({"b": p.b, "gamma": p.gamma, "c0": float(spec[0]), "c1": float(spec[1]),
                     "c2": c, "region_label": region_label(c, thresholds)})
    return rows
