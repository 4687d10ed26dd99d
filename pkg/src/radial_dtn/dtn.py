"""Spectrum of the Dirichlet-to-Neumann map for one-step radial potentials.

For q(r) = gamma on r < b and 0 on b < r < 1 the DtN map of
Delta u + q u = 0 on the unit disk is diagonal in e^{in theta} with

    c_0 = -x J_1(x) / (log(b) x J_1(x) + J_0(x)),
    c_n = n (1 - t_n) / (1 + t_n),   t_n = b^{2n} J_{n+1}(x) / J_{n-1}(x),

where x = sqrt(gamma) b and c_{-n} = c_n.  Both are evaluated through the
normalised Bessel series so that gamma = 0 and large n need no special
casing: t_n is exactly 0 there and c_n = n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bessel import bessel_j_scaled_table
from .exceptions import DomainError

DEFAULT_N_CAP = 64
ZERO_B = 0.5


@dataclass(frozen=True)
class Potential:
    """One-step radial potential ``gamma * chi_(0,b)(|x|)``.

    With ``gamma == 0`` it is the zero potential; ``b`` is kept but no
    observable depends on it.
    """

    gamma: float
    b: float

    def __post_init__(self):
        if not (0.0 <= self.gamma <= 1.0):
            raise DomainError(f"gamma must lie in [0, 1], got {self.gamma!r}")
        if not (0.0 < self.b < 1.0):
            raise DomainError(f"b must lie in (0, 1), got {self.b!r}")

    @property
    def is_zero(self) -> bool:
        return self.gamma == 0.0

    def canonical(self) -> "Potential":
        return ZERO if self.is_zero else self

    def __call__(self, r):
        """Pointwise value at radius ``r``."""
        return np.where(np.asarray(r) < self.b, self.gamma, 0.0)


ZERO = Potential(0.0, ZERO_B)


@dataclass(frozen=True)
class Spectrum:
    """DtN eigenvalues c_0..c_{n_max}; negative indices follow by symmetry."""

    n_max: int
    coefficients: np.ndarray

    def __getitem__(self, n):
        return self.coefficients[abs(n)]

    def __len__(self):
        return self.n_max + 1


@dataclass(frozen=True)
class SpectralDistance:
    """sup_n |c_n(p1) - c_n(p2)| / (1 + n) evaluated over n <= n_scanned.

    ``tail_bound`` bounds every term with n > n_scanned, so the true
    supremum lies in [value, max(value, tail_bound)].
    """

    value: float
    n_at_sup: int
    tail_bound: float
    n_scanned: int


# -- array kernels ----------------------------------------------------------

def _as_params(gamma, b, allow_closed=False):
    g = np.asarray(gamma, dtype=float)
    bb = np.asarray(b, dtype=float)
    if np.any(g < 0.0) or np.any(g > 1.0):
        raise DomainError("gamma must lie in [0, 1]")
    lo_ok = bb >= 0.0 if allow_closed else bb > 0.0
    hi_ok = bb <= 1.0 if allow_closed else bb < 1.0
    if not (np.all(lo_ok) and np.all(hi_ok)):
        raise DomainError("b out of range")
    return np.broadcast_arrays(g, bb)


def c0_values(gamma, b, allow_closed: bool = False):
    """Vectorised c_0(gamma, b).

    ``allow_closed`` admits b in {0, 1}, where the closed form is continued
    by its limits (used for the boundary curves of the range region).
    """
    g, bb = _as_params(gamma, b, allow_closed)
    x2 = g * bb * bb
    f = bessel_j_scaled_table(1, np.sqrt(x2))
    xj1 = 0.5 * x2 * f[1]
    with np.errstate(divide="ignore", invalid="ignore"):
        logb = np.log(np.where(bb > 0.0, bb, 1.0))
    # + 0.0 turns -0.0 into 0.0 for the zero potential
    out = -xj1 / (logb * xj1 + f[0]) + 0.0
    return float(out) if out.ndim == 0 else out


def ratio_terms(gamma, b, n_max: int, allow_closed: bool = False):
    """t_n = b^{2n} J_{n+1}(x)/J_{n-1}(x) for n = 1..n_max, on a leading axis."""
    g, bb = _as_params(gamma, b, allow_closed)
    x2 = g * bb * bb
    f = bessel_j_scaled_table(n_max + 1, np.sqrt(x2))
    n = np.arange(1, n_max + 1, dtype=float).reshape((-1,) + (1,) * g.ndim)
    # J_{n+1}/J_{n-1} = (x^2/4) F_{n+1} / (n (n+1) F_{n-1})
    with np.errstate(under="ignore"):
        b2n = (bb * bb)[None, ...] ** n
    return b2n * (x2[None, ...] / 4.0) * f[2:] / (n * (n + 1.0) * f[:-2])


def cn_values(gamma, b, n: int, allow_closed: bool = False):
    """Vectorised c_n(gamma, b) for a single n >= 1."""
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    t = ratio_terms(gamma, b, int(n), allow_closed)[-1]
    out = n * (1.0 - t) / (1.0 + t)
    return float(out) if out.ndim == 0 else out


def spectrum_array(gamma, b, n_max: int, allow_closed: bool = False) -> np.ndarray:
    """c_0..c_{n_max} for arrays of parameters; shape (..., n_max + 1)."""
    if int(n_max) != n_max or n_max < 1:
        raise DomainError("n_max must be an integer >= 1")
    n_max = int(n_max)
    c0 = np.asarray(c0_values(gamma, b, allow_closed))
    t = ratio_terms(gamma, b, n_max, allow_closed)
    n = np.arange(1, n_max + 1, dtype=float).reshape((-1,) + (1,) * c0.ndim)
    cn = n * (1.0 - t) / (1.0 + t)
    return np.moveaxis(np.concatenate([c0[None, ...], cn], axis=0), 0, -1)


def tail_bound(b_max: float, n_scanned: int) -> float:
    """Bound on |c_n(p1) - c_n(p2)|/(1+n) for every n > n_scanned.

    From lower/upper power bounds on J_{n-1}, J_{n+1}: 0 <= n - c_n <=
    b^{2n+2}/(n+1), so each term is at most b_max^{2n+2}/(n+1)^2, which is
    decreasing in n.
    """
    m = n_scanned + 1
    return b_max ** (2 * m + 2) / (m + 1) ** 2


def distance_rows(base: np.ndarray, others: np.ndarray):
    """Row-wise sup_n |c_n - c_n'|/(1+n) between spectrum arrays.

    Returns (values, argmax indices).
    """
    weights = 1.0 / (1.0 + np.arange(base.shape[-1], dtype=float))
    scaled = np.abs(others - base) * weights
    idx = np.argmax(scaled, axis=-1)
    return np.take_along_axis(scaled, idx[..., None], axis=-1)[..., 0], idx


# -- scalar API -------------------------------------------------------------

def eigenvalue_c0(p: Potential) -> float:
    """c_0 for potential ``p``; the denominator is >= 3/4 on the whole family."""
    return c0_values(p.gamma, p.b)


def eigenvalue_cn(p: Potential, n: int) -> float:
    """c_n for n >= 1; exactly n when gamma * b^2 == 0."""
    return cn_values(p.gamma, p.b, n)


def spectrum(p: Potential, n_max: int) -> Spectrum:
    return Spectrum(int(n_max), spectrum_array(p.gamma, p.b, n_max))


def dtn_distance(p1: Potential, p2: Potential, tol: float = 1e-12,
                 n_cap: int = DEFAULT_N_CAP) -> SpectralDistance:
    """Distance between two DtN maps in the diagonal H^{1/2} -> H^{-1/2} norm.

    Scans n = 0..N with N the smallest index whose tail bound drops below
    ``tol``, capped at ``n_cap``.  When the cap binds, the achieved tail
    bound is reported instead of raising.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    b_max = max(_support_radius(p1), _support_radius(p2))
    n_scan = 1
    while n_scan < n_cap and tail_bound(b_max, n_scan) >= tol:
        n_scan += 1
    s1 = spectrum_array(p1.gamma, p1.b, n_scan)
    s2 = spectrum_array(p2.gamma, p2.b, n_scan)
    value, idx = distance_rows(s1, s2)
    return SpectralDistance(float(value), int(idx), tail_bound(b_max, n_scan), n_scan)


def operator_norm(p: Potential, n_scan: int = DEFAULT_N_CAP) -> float:
    """||Lambda_q|| = sup_n |c_n|/(1+n).

    The terms |c_n|/(1+n) tend to 1 from below, so the supremum is the
    larger of the finite scan and that limit; for this family it is 1.
    """
    s = spectrum_array(p.gamma, p.b, n_scan)
    return max(float(np.max(np.abs(s) / (1.0 + np.arange(n_scan + 1)))), 1.0)


def _support_radius(p: Potential) -> float:
    return 0.0 if p.is_zero else p.b


def _ordered(p1: Potential, p2: Potential):
    inner, outer = (p1, p2) if p1.b <= p2.b else (p2, p1)
    return inner, outer


def potential_distance_linf(p1: Potential, p2: Potential) -> float:
    """Exact sup-norm distance between two one-step potentials."""
    if p1.b == p2.b:
        return abs(p1.gamma - p2.gamma)
    inner, outer = _ordered(p1, p2)
    return max(abs(p1.gamma - p2.gamma), outer.gamma)


def potential_distance_l1(p1: Potential, p2: Potential, measure: str = "area") -> float:
    """Exact L^1 distance.

    ``measure="area"`` integrates over the unit disk with the planar
    measure; ``measure="radial"`` integrates |q1 - q2| dr over (0, 1).
    """
    inner, outer = _ordered(p1, p2)
    dg = abs(p1.gamma - p2.gamma)
    if measure == "area":
        return math.pi * (inner.b ** 2 * dg + (outer.b ** 2 - inner.b ** 2) * outer.gamma)
    if measure == "radial":
        return inner.b * dg + (outer.b - inner.b) * outer.gamma
    raise ValueError(f"unknown measure {measure!r}")
