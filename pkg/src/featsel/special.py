"""Regularized incomplete beta/gamma functions and F / chi-square quantiles.

Continued fractions use the modified Lentz method.
"""

from __future__ import annotations

import math

_EPS = 1e-15
_TINY = 1e-300
_MAX_ITER = 10_000


def _beta_cf(a, b, x):
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > _TINY else _TINY)
    h = d
    for m in range(1, _MAX_ITER + 1):
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
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def reg_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b), the regularized incomplete beta function."""
    if not (a > 0 and b > 0):
        raise ValueError(f"a and b must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return min(1.0, front * _beta_cf(a, b, x) / a)
    return max(0.0, 1.0 - front * _beta_cf(b, a, 1.0 - x) / b)


def _gamma_series(s, x):
    term = total = 1.0 / s
    ap = s
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + s * math.log(x) - math.lgamma(s))
    raise ArithmeticError(f"incomplete gamma series did not converge (s={s}, x={x})")


def _gamma_cf(s, x):
    """Upper regularized Q(s, x) by continued fraction."""
    b = x + 1.0 - s
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        d = 1.0 / (d if abs(d) > _TINY else _TINY)
        c = b + an / c
        c = c if abs(c) > _TINY else _TINY
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return math.exp(-x + s * math.log(x) - math.lgamma(s)) * h
    raise ArithmeticError(f"incomplete gamma continued fraction did not converge (s={s}, x={x})")


def reg_incomplete_gamma_p(s: float, x: float) -> float:
    """P(s, x), the regularized lower incomplete gamma function."""
    if not s > 0:
        raise ValueError(f"s must be positive, got {s}")
    if not x >= 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < s + 1.0:
        return min(1.0, _gamma_series(s, x))
    return max(0.0, 1.0 - _gamma_cf(s, x))


def f_cdf(x: float, d1: float, d2: float) -> float:
    if x <= 0:
        return 0.0
    return reg_incomplete_beta(d1 / 2.0, d2 / 2.0, d1 * x / (d1 * x + d2))


def chi2_cdf(x: float, df: float) -> float:
    if x <= 0:
        return 0.0
    return reg_incomplete_gamma_p(df / 2.0, x / 2.0)


def _upper_quantile(cdf, alpha, tol):
    """Bisection for the x whose upper-tail probability is ``alpha``."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    target = 1.0 - alpha
    lo, hi = 0.0, 1.0
    while cdf(hi) < target:
        lo, hi = hi, hi * 2.0
        if hi > 1e12:
            raise ArithmeticError("quantile bracket diverged")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # bracket is already adjacent floats
        if cdf(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def f_critical_value(d1: int, d2: int, alpha: float, tol: float = 1e-10) -> float:
    """Upper-``alpha`` critical value of the F(d1, d2) distribution."""
    if d1 < 1 or d2 < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got ({d1}, {d2})")
    return _upper_quantile(lambda x: f_cdf(x, d1, d2), alpha, tol)


def chi2_critical_value(df: int, alpha: float, tol: float = 1e-10) -> float:
    """Upper-``alpha`` critical value of the chi-square distribution."""
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    return _upper_quantile(lambda x: chi2_cdf(x, df), alpha, tol)
