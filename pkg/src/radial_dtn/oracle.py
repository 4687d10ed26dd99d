"""Brute-force DtN eigenvalues from the radial ODE.

Each Fourier mode a_n(r) e^{in theta} of a solution of Delta u + q u = 0
satisfies r^2 a'' + r a' + (r^2 q(r) - n^2) a = 0.  With s = log r this is
the constant-free form a_ss = (n^2 - q(e^s) e^{2s}) a, which is integrated
with classical RK4 from r_start to 1 on two uniform s-meshes that meet at
r = b, so the jump in q always falls on a node.  The eigenvalue is the
logarithmic derivative a'(1)/a(1) = a_s/a at s = 0.

Nothing here touches Bessel functions; it is the independent check on the
closed forms in :mod:`radial_dtn.dtn`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dtn import Potential
from .exceptions import ConvergenceError, DomainError

RESCALE_AT = 1e150
MAX_RESCALES = 50


@dataclass(frozen=True)
class IntegratorConfig:
    r_start: float = 1e-6
    step_count: int = 20000
    scheme_order: int = 4

    def __post_init__(self):
        if not self.r_start > 0:
            raise ValueError("r_start must be positive")
        if self.step_count < 1000:
            raise ValueError("step_count must be at least 1000")
        if self.scheme_order != 4:
            raise ValueError("only the fourth-order scheme is available")


DEFAULT_CONFIG = IntegratorConfig()


def split_steps(cfg: IntegratorConfig, b: float) -> tuple[int, int]:
    """Steps on [log r_start, log b] and [log b, 0], proportional to length."""
    inner = math.log(b) - math.log(cfg.r_start)
    outer = -math.log(b)
    n_inner = max(1, round(cfg.step_count * inner / (inner + outer)))
    n_outer = max(1, cfg.step_count - n_inner)
    return n_inner, n_outer


def mesh(cfg: IntegratorConfig, b: float) -> np.ndarray:
    """Radial nodes; r = b is always one of them."""
    n_inner, n_outer = split_steps(cfg, b)
    s_b = math.log(b)
    inner = np.linspace(math.log(cfg.r_start), s_b, n_inner + 1)
    outer = np.linspace(s_b, 0.0, n_outer + 1)
    return np.exp(np.concatenate([inner, outer[1:]]))


def _rk4_segment(a, da, s0, s1, steps, n2, q, counter):
    """RK4 for y = (a, a_s) with y' = (a_s, (n^2 - q e^{2s}) a).

    ``a``, ``da``, ``n2`` and ``q`` may be floats or broadcastable arrays.
    """
    h = (s1 - s0) / steps
    for i in range(steps):
        s = s0 + i * h
        w0 = n2 - q * math.exp(2.0 * s)
        wm = n2 - q * math.exp(2.0 * (s + 0.5 * h))
        w1 = n2 - q * math.exp(2.0 * (s + h))
        k1a, k1d = da, w0 * a
        k2a, k2d = da + 0.5 * h * k1d, wm * (a + 0.5 * h * k1a)
        k3a, k3d = da + 0.5 * h * k2d, wm * (a + 0.5 * h * k2a)
        k4a, k4d = da + h * k3d, w1 * (a + h * k3a)
        a = a + h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        da = da + h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
        if i % 64 == 63 and np.max(np.abs(a)) > RESCALE_AT:
            # linear equation: the log-derivative is scale-free
            a, da = a / RESCALE_AT, da / RESCALE_AT
            counter[0] += 1
            if counter[0] > MAX_RESCALES:
                raise ConvergenceError("solution overflowed too many times")
    return a, da


def _check_modes(n):
    arr = np.asarray(n)
    if np.any(arr < 0) or np.any(arr != np.round(arr)):
        raise DomainError("n must be a nonnegative integer")
    if np.any(arr > 16):
        raise DomainError("mode index above 16 is outside the oracle's range")


def solve_radial(p: Potential, n: int, cfg: IntegratorConfig = DEFAULT_CONFIG,
                 initial_scale: float = 1.0) -> float:
    """c_n from direct integration of the mode-n radial equation.

    Starts from the regular Frobenius behaviour a = r^n (a = 1 for n = 0)
    at ``r_start``; ``initial_scale`` multiplies the initial data and must
    not change the answer.
    """
    _check_modes(n)
    return float(solve_radial_batch(p.gamma, p.b, int(n), cfg, initial_scale))


def solve_radial_batch(gamma, b: float, n, cfg: IntegratorConfig = DEFAULT_CONFIG,
                       initial_scale: float = 1.0):
    """Vectorised :func:`solve_radial` over heights and modes sharing one ``b``.

    ``gamma`` and ``n`` broadcast against each other.
    """
    _check_modes(n)
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0.0) or np.any(g > 1.0) or not 0.0 < b < 1.0:
        raise DomainError("potential parameters out of range")
    if not cfg.r_start < b:
        raise DomainError("r_start must lie inside the support radius b")
    n_inner, n_outer = split_steps(cfg, b)
    s_start, s_b = math.log(cfg.r_start), math.log(b)
    nf = np.asarray(n, dtype=float)
    g, nf = np.broadcast_arrays(g, nf)
    if g.ndim == 0:
        g, nf = float(g), float(nf)

    # a = r^n, r a' = n r^n; the common factor r_start^n is dropped
    a = initial_scale * np.ones_like(nf) if np.ndim(nf) else initial_scale
    da = nf * initial_scale
    counter = [0]
    a, da = _rk4_segment(a, da, s_start, s_b, n_inner, nf * nf, g, counter)
    a, da = _rk4_segment(a, da, s_b, 0.0, n_outer, nf * nf, 0.0, counter)
    return da / a


def convergence_study(p: Potential, n: int, steps, r_start: float = 1e-6):
    """Values at increasing resolution with Richardson error estimates.

    Returns a list of dicts with keys ``step_count``, ``value``,
    ``error_estimate`` (|v_k - v_{k-1}| / (2^4 - 1), None for the first
    row) and ``observed_order`` (log2 of successive difference ratios,
    None where fewer than three values are available or the differences
    vanish).
    """
    steps = list(steps)
    if any(b <= a for a, b in zip(steps, steps[1:])):
        raise DomainError("step counts must be strictly increasing")
    values = [solve_radial(p, n, IntegratorConfig(r_start=r_start, step_count=s)) for s in steps]
    rows = []
    for i, (s, v) in enumerate(zip(steps, values)):
        err = None
        order = None
        if i >= 1:
            ratio = steps[i] / steps[i - 1]
            err = abs(v - values[i - 1]) / (ratio ** 4 - 1.0)
        if i >= 2:
            d1 = abs(values[i - 1] - values[i - 2])
            d2 = abs(v - values[i - 1])
            if d1 > 0 and d2 > 0:
                order = math.log(d1 / d2) / math.log(steps[i - 1] / steps[i - 2])
        rows.append({"step_count": s, "value": v, "error_estimate": err, "observed_order": order})
    return rows
