"""Small statistics helpers for sampler diagnostics.

Only what the tests and CLI need: a chi-square goodness-of-fit statistic
and its survival function.  The regularized incomplete gamma is computed
with the usual series / continued fraction pair (Lentz's method), which
is plenty accurate for the p-values used here.
"""

from __future__ import annotations

import math

_MAX_ITER = 500
_EPS = 3e-14
_TINY = 1e-300


def _gamma_p_series(a: float, x: float) -> float:
    # P(a, x) by the power series, good for x < a + 1
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_contfrac(a: float, x: float) -> float:
    # Q(a, x) by continued fraction, good for x >= a + 1
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def gammainc_upper_regularized(a: float, x: float) -> float:
    """Q(a, x) = Gamma(a, x) / Gamma(a) for a > 0, x >= 0."""
    if a <= 0:
        raise ValueError("a must be positive")
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x)
    return _gamma_q_contfrac(a, x)


def chi2_sf(x: float, df: int) -> float:
    """Chi-square survival function P(X >= x) with df degrees of freedom."""
    if df < 1:
        raise ValueError("df must be >= 1")
    if x <= 0:
        return 1.0
    return gammainc_upper_regularized(df / 2.0, x / 2.0)


def chi2_statistic(observed: dict, expected: dict) -> tuple[float, int]:
    """Pearson statistic and df over the union of categories.

    expected values must be positive; observed categories missing from
    expected raise, since that means the sampler produced something the
    model says is impossible.
    """
    bad = set(observed) - set(expected)
    if bad:
        raise ValueError(f"observed categories outside support: {sorted(bad)[:5]}")
    stat = 0.0
    for key, exp in expected.items():
        if exp <= 0:
            raise ValueError("expected counts must be positive")
        obs = observed.get(key, 0)
        stat += (obs - exp) ** 2 / exp
    return stat, len(expected) - 1


def uniformity_pvalue(observed: dict, support_size: int, total: int) -> float:
    """p-value for 'observed counts are uniform over a support of this size'."""
    if support_size < 2:
        raise ValueError("support must have at least two categories")
    exp = total / support_size
    stat = sum((c - exp) ** 2 / exp for c in observed.values())
    stat += (support_size - len(observed)) * exp  # categories never seen
    return chi2_sf(stat, support_size - 1)
