"""F and studentized-range distributions.

The F survival function goes through a continued-fraction evaluation of the
regularized incomplete beta function. The studentized-range CDF is a nested
integral: the inner one gives the distribution of the range of ``k``
standard normals, the outer one mixes it over the chi/sqrt(df) scale.
Both levels use adaptive Simpson quadrature.
"""

from __future__ import annotations

import math
from functools import lru_cache

from scipy.optimize import brentq

QUAD_TOL = 1e-5
_TINY = 1e-300


def _log_beta(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _beta_cf(a: float, b: float, x: float, max_iter: int = 500, eps: float = 1e-15) -> float:
    """Modified Lentz evaluation of the incomplete-beta continued fraction."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > _TINY else _TINY)
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > _TINY else _TINY)
        c = 1.0 + aa / c
        c = c if abs(c) > _TINY else _TINY
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > _TINY else _TINY)
        c = 1.0 + aa / c
        c = c if abs(c) > _TINY else _TINY
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc_regularized(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = a * math.log(x) + b * math.log1p(-x) - _log_beta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_cf(a, b, x) / a
    return 1.0 - math.exp(log_front) * _beta_cf(b, a, 1.0 - x) / b


def f_sf(f: float, df1: float, df2: float) -> float:
    """P(F > f) for the F(df1, df2) distribution."""
    if f <= 0:
        return 1.0
    if math.isinf(f):
        return 0.0
    # complementary form avoids cancellation for large f
    return betainc_regularized(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f))


def adaptive_simpson(fn, a: float, b: float, tol: float = QUAD_TOL, max_depth: int = 40) -> float:
    """Adaptive Simpson integration with the Richardson-corrected error test."""
    if b <= a:
        return 0.0
    fa, fb = fn(a), fn(b)
    m = 0.5 * (a + b)
    fm = fn(m)
    whole = (b - a) / 6.0 * (fa + 4 * fm + fb)
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        a, b, fa, fm, fb, whole, eps, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = fn(lm), fn(rm)
        left = (m - a) / 6.0 * (fa + 4 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4 * frm + fb)
        diff = left + right - whole
        if depth >= max_depth or abs(diff) <= 15 * eps:
            total += left + right + diff / 15.0
        else:
            stack.append((a, m, fa, flm, fm, left, eps / 2, depth + 1))
            stack.append((m, b, fm, frm, fb, right, eps / 2, depth + 1))
    return total


def _panels(fn, edges, tol):
    per = tol / (len(edges) - 1)
    return sum(adaptive_simpson(fn, lo, hi, per) for lo, hi in zip(edges, edges[1:]))


def _phi(z: float) -> float:
    return math.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)


def _Phi(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2))


def range_cdf(w: float, k: int, tol: float = 1e-8) -> float:
    """P(range of k iid N(0,1) <= w)."""
    if w <= 0:
        return 0.0

    def integrand(z):
        inner = _Phi(z) - _Phi(z - w)
        return _phi(z) * inner ** (k - 1) if inner > 0 else 0.0

    edges = [-8.0 + i for i in range(17 + int(math.ceil(w)))]
    val = k * _panels(integrand, edges, tol)
    return min(max(val, 0.0), 1.0)


def _log_scale_density(s: float, df: float) -> float:
    # density of sqrt(chi2_df / df)
    if s <= 0:
        return -math.inf
    h = df / 2.0
    return (math.log(2.0) + h * math.log(h) - math.lgamma(h)
            + (df - 1) * math.log(s) - h * s * s)


LARGE_DF = 1e5


def studentized_range_cdf(q: float, k: int, df: float, tol: float = QUAD_TOL) -> float:
    """P(Q <= q) for the studentized range with k groups and df error degrees of freedom."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if q <= 0:
        return 0.0
    if math.isinf(df) or df >= LARGE_DF:
        return range_cdf(q, k)

    def integrand(s):
        if s <= 0:
            return 0.0
        return math.exp(_log_scale_density(s, df)) * range_cdf(q * s, k, tol=tol * 1e-2)

    if df >= 10:
        sd = 1.0 / math.sqrt(2.0 * df)
        lo, hi = max(0.0, 1.0 - 10 * sd), 1.0 + 10 * sd
    else:
        lo, hi = 0.0, 8.0
    edges = [lo + (hi - lo) * i / 16 for i in range(17)]
    return min(max(_panels(integrand, edges, tol), 0.0), 1.0)


@lru_cache(maxsize=256)
def studentized_range_critical(k: int, df: float, alpha: float) -> float:
    """Upper-alpha critical value q* with P(Q > q*) = alpha."""
    target = 1.0 - alpha
    hi = 4.0
    while studentized_range_cdf(hi, k, df) < target:
        hi *= 2.0
    return brentq(lambda q: studentized_range_cdf(q, k, df) - target, 0.0, hi, xtol=1e-6)
