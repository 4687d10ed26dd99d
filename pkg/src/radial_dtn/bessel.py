"""Bessel functions of the first kind on small arguments, and executable
versions of the elementary bounds used by the stability estimates.

Everything here is evaluated from the ascending power series

    J_n(x) = (x/2)^n / n! * F_n(x),
    F_n(x) = sum_{m>=0} (-1)^m (x^2/4)^m / (m! (n+1)(n+2)...(n+m)),

which is alternating with decreasing terms whenever x <= 1.5, so the first
omitted term bounds the truncation error.  The normalised factor ``F_n`` is
exposed because ratios such as J_{n+1}/J_{n-1} stay exact even when the
functions themselves underflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exceptions import DomainError

X_MAX = 1.5
BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class SeriesTolerance:
    """Truncation control for the power series.

    The series stops once the next term of ``F_n`` is below ``abs_tol``.
    Since the leading factor (x/2)^n/n! never exceeds 1 on the supported
    range, this bounds both the absolute error of J_n and the relative
    error of ``F_n``.
    """

    abs_tol: float = 1e-15
    max_terms: int = 40

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_terms < 5:
            raise ValueError("max_terms must be at least 5")


DEFAULT_TOLERANCE = SeriesTolerance()


def _check_order(n, minimum=0):
    if int(n) != n or n < minimum:
        raise DomainError(f"order must be an integer >= {minimum}, got {n!r}")
    return int(n)


def _check_argument(x, upper=X_MAX):
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > upper):
        raise DomainError(f"argument must lie in [0, {upper}]")
    return arr


def _unwrap(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def factorial(n: int) -> float:
    out = 1.0
    for k in range(2, n + 1):
        out *= k
    return out


def gamma_half_integer(n: int) -> float:
    """Gamma(n + 1/2) for integer n >= 0, by upward recurrence from sqrt(pi)."""
    out = math.sqrt(math.pi)
    for k in range(n):
        out *= k + 0.5
    return out


def leading_term(n, x):
    """The first series term x^n / (2^n n!)."""
    n = _check_order(n)
    arr = _check_argument(x)
    return _unwrap((arr / 2.0) ** n / factorial(n))


def _series_tail(orders, x2q, tol):
    """Tail F_n - 1 of the normalised series, for an array of orders against
    an array of x^2/4.

    ``orders`` broadcasts against ``x2q``.  Returns (tail, first omitted term).
    """
    orders = np.asarray(orders, dtype=float)
    term = np.ones(np.broadcast(orders, x2q).shape)
    tail = np.zeros_like(term)
    for m in range(1, tol.max_terms):
        term = -term * x2q / (m * (orders + m))
        if np.max(np.abs(term), initial=0.0) < tol.abs_tol:
            return tail, np.abs(term)
        tail = tail + term
    term = -term * x2q / (tol.max_terms * (orders + tol.max_terms))
    return tail, np.abs(term)


def _series_factor(orders, x2q, tol):
    tail, omitted = _series_tail(orders, x2q, tol)
    return 1.0 + tail, omitted


def bessel_j_scaled(n, x, tol: SeriesTolerance = DEFAULT_TOLERANCE):
    """``F_n(x) = J_n(x) * 2^n n! / x^n``; equals 1 at x = 0."""
    n = _check_order(n)
    arr = _check_argument(x)
    total, _ = _series_factor(n, arr * arr / 4.0, tol)
    return _unwrap(total)


def bessel_j_scaled_table(n_max: int, x, tol: SeriesTolerance = DEFAULT_TOLERANCE):
    """Array of F_k(x) for k = 0..n_max, stacked along a new leading axis."""
    n_max = _check_order(n_max)
    arr = _check_argument(x)
    orders = np.arange(n_max + 1, dtype=float).reshape((-1,) + (1,) * arr.ndim)
    total, _ = _series_factor(orders, (arr * arr / 4.0)[None, ...], tol)
    return total


def bessel_j_with_bound(n, x, tol: SeriesTolerance = DEFAULT_TOLERANCE):
    """J_n(x) together with a rigorous bound on its truncation error."""
    n = _check_order(n)
    arr = _check_argument(x)
    lead = (arr / 2.0) ** n / factorial(n)
    total, omitted = _series_factor(n, arr * arr / 4.0, tol)
    return _unwrap(lead * total), _unwrap(lead * omitted)


def bessel_j(n, x, tol: SeriesTolerance = DEFAULT_TOLERANCE):
    """Bessel function of the first kind J_n(x) for 0 <= x <= 1.5.

    Parameters
    ----------
    n : int
        Nonnegative integer order.
    x : float or array_like
        Argument(s) in [0, 1.5].  Larger arguments raise ``DomainError``.
    tol : SeriesTolerance
        Series truncation control.

    Returns
    -------
    float or numpy.ndarray
    """
    value, _ = bessel_j_with_bound(n, x, tol)
    return value


def bessel_j_prime(n, x, tol: SeriesTolerance = DEFAULT_TOLERANCE):
    """J_n'(x) = (J_{n-1}(x) - J_{n+1}(x)) / 2 for n >= 1."""
    n = _check_order(n, minimum=1)
    return _unwrap((np.asarray(bessel_j(n - 1, x, tol)) - bessel_j(n + 1, x, tol)) / 2.0)


def remainder_s(n, x, tol: SeriesTolerance = DEFAULT_TOLERANCE):
    """S_n(x) = J_n(x) - x^n / (2^n n!), for x in [0, 1].

    Summed from the series tail directly, so there is no cancellation
    against the leading term.
    """
    n = _check_order(n)
    arr = _check_argument(x, upper=1.0)
    lead = (arr / 2.0) ** n / factorial(n)
    tail, _ = _series_tail(n, arr * arr / 4.0, tol)
    return _unwrap(lead * tail)


def c0_denominator(r):
    """r J_1(r) log r + J_0(r), continued by its limit 1 at r = 0."""
    arr = _check_argument(r, upper=1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_term = np.where(arr > 0.0, arr * np.log(np.where(arr > 0.0, arr, 1.0)), 0.0)
    return _unwrap(log_term * bessel_j(1, arr) + bessel_j(0, arr))


# -- quadrature -------------------------------------------------------------

def simpson(f: Callable, a: float, b: float, panels: int) -> float:
    """Composite Simpson rule with an even number of panels."""
    if panels % 2:
        panels += 1
    x = np.linspace(a, b, panels + 1)
    y = f(x)
    h = (b - a) / panels
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))


def simpson_doubling(f: Callable, a: float, b: float, tol: float = 1e-10,
                     start_panels: int = 8, max_panels: int = 2 ** 22) -> float:
    """Composite Simpson, doubling the panel count until two successive
    estimates agree to ``tol``."""
    panels = start_panels
    prev = simpson(f, a, b, panels)
    while panels < max_panels:
        panels *= 2
        cur = simpson(f, a, b, panels)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    raise RuntimeError("Simpson refinement did not converge")


def weight_integral(power_half: float, tol: float = 1e-10) -> float:
    """int_0^1 (1 - t^2)^p dt for half-integer p, via t = sin(theta)."""
    return simpson_doubling(lambda th: np.cos(th) ** (2.0 * power_half + 1.0),
                            0.0, math.pi / 2.0, tol)


# -- bound predicates -------------------------------------------------------

@dataclass(frozen=True)
class BoundCheck:
    name: str
    lower: float
    value: float
    upper: float
    slack: float = BOUND_SLACK

    @property
    def passed(self) -> bool:
        return (self.value >= self.lower - self.slack) and (self.value <= self.upper + self.slack)

    @property
    def margin(self) -> float:
        """Smallest distance to a violated side; negative means failure."""
        return min(self.value - self.lower, self.upper - self.value)


@dataclass(frozen=True)
class BoundReport:
    checks: tuple[BoundCheck, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[BoundCheck]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> BoundCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self) -> list[str]:
        return [c.name for c in self.checks]


def check_lemma1_bounds(n: int, r: float, tol: SeriesTolerance = DEFAULT_TOLERANCE) -> BoundReport:
    """Evaluate the two-sided small-argument bounds on J_n, J_{n+1}', S_n.

    Checks, for 0 < r < 1:

    * ``j_n``:        r^n/(2^{n+1} n!) <= J_n(r) <= r^n/(2^n n!)
    * ``j_prime``:    r^n/(2^{n+2} n!) <= J_{n+1}'(r) <= r^n/(2^{n+1} n!)
    * ``s_n``:        -K <= S_n(r) <= -K cos r with
      K = r^{n+2} I_n / (2^{n+1} Gamma(n+3/2) sqrt(pi)),
      I_n = int_0^1 (1-t^2)^{n+1/2} dt evaluated by quadrature
    * ``s_0_explicit`` (n = 0): -r^2/4 <= S_0(r) <= -r^2 cos(r)/4 <= 0
    * ``s_2_explicit`` (n = 2): -0.4909 r^4/(15 pi) <= S_2(r) <= -0.4909 r^4 cos(r)/(15 pi)
    * ``c0_denominator``: r J_1(r) log r + J_0(r) >= 3/4
    """
    n = _check_order(n)
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must lie in (0, 1), got {r!r}")
    if n > 12:
        raise DomainError("bounds are only checked for n <= 12")

    fact = factorial(n)
    lead = r ** n / (2.0 ** n * fact)
    checks = [
        BoundCheck("j_n", lead / 2.0, bessel_j(n, r, tol), lead),
        BoundCheck("j_prime", lead / 4.0, bessel_j_prime(n + 1, r, tol), lead / 2.0),
    ]

    s_n = remainder_s(n, r, tol)
    k = (r ** (n + 2) * weight_integral(n + 0.5)
         / (2.0 ** (n + 1) * gamma_half_integer(n + 1) * math.sqrt(math.pi)))
    checks.append(BoundCheck("s_n", -k, s_n, -k * math.cos(r)))
    if n == 0:
        checks.append(BoundCheck("s_0_explicit", -r * r / 4.0, s_n, min(-r * r * math.cos(r) / 4.0, 0.0)))
    if n == 2:
        c = 0.4909 / (15.0 * math.pi)
        checks.append(BoundCheck("s_2_explicit", -c * r ** 4, s_n, -c * r ** 4 * math.cos(r)))
    checks.append(BoundCheck("c0_denominator", 0.75, c0_denominator(r), math.inf))
    return BoundReport(tuple(checks))


def check_lemma2_integrals(r: float, s: float, n: int, quad_tol: float = 1e-10) -> BoundReport:
    """Check the two cosine-difference integral inequalities for n in {0, 2}.

    * ``one_minus_cos``: int_0^1 (1 - cos rt)(1-t^2)^{n-1/2} dt <= pi r^2/(28n+8)
    * ``cos_difference``: int_0^1 (cos rt - cos st)(1-t^2)^{n-1/2} dt <= pi(s^2-r^2)/(28n+8)

    Both integrals use t = sin(theta), which turns the weight into
    cos^{2n}(theta) and removes the endpoint singularity at t = 1 for n = 0.
    """
    if n not in (0, 2):
        raise DomainError("n must be 0 or 2")
    if not (0.0 < r <= s < 1.0):
        raise DomainError(f"need 0 < r <= s < 1, got r={r!r}, s={s!r}")

    w = 2 * n
    first = simpson_doubling(
        lambda th: (1.0 - np.cos(r * np.sin(th))) * np.cos(th) ** w, 0.0, math.pi / 2.0, quad_tol)
    second = simpson_doubling(
        lambda th: (np.cos(r * np.sin(th)) - np.cos(s * np.sin(th))) * np.cos(th) ** w,
        0.0, math.pi / 2.0, quad_tol)
    denom = 28.0 * n + 8.0
    return BoundReport((
        BoundCheck("one_minus_cos", -math.inf, first, math.pi * r * r / denom),
        BoundCheck("cos_difference", -math.inf, second, math.pi * (s * s - r * r) / denom),
    ))
