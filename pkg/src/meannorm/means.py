"""Scalar special functions: generalized logarithmic means, power-sum ratios
and the difference weights ``k**alpha - (k-1)**alpha``.

Everything here is binary64. The branches avoid the obvious cancellations
(``a**r - b**r`` for close ``a, b``; ``k**alpha - (k-1)**alpha`` for large ``k``).
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

# below this distance from 0 or 1 the general formula is replaced by its limit
SPECIAL_BRANCH_EPS = 1e-9
# the general formula divides by r - 1; closer than this to 1 a series is used
NEAR_ONE_SERIES = 0.05
SERIES_TERMS = 16


def _log_ratio(a: float, b: float) -> float:
    """ln(a/b) for positive a, b without losing digits when a ~ b."""
    d = (a - b) / b
    if abs(d) < 0.5:
        return math.log1p(d)
    return math.log(a) - math.log(b)


def _log_mean_near_one(r: float, a: float, b: float) -> float:
    """``ln L_r(a, b)`` for ``r`` close to 1.

    With ``a > b`` and ``W`` uniform on ``[b/a, 1]``, ``ln L_r - ln a`` is
    ``K(r-1)/(r-1)`` for the cumulant generating function ``K`` of ``ln W``.
    The cumulants of ``ln W`` grow at most like those of an exponential
    variable, ``(k-1)!``, so the series converges with ratio ``|r-1|``.
    """
    hi, lo = (a, b) if a > b else (b, a)
    x = lo / hi
    lx = _log_ratio(lo, hi)
    span = -math.expm1(lx)
    # moments from int_x^1 ln^m w dw = -x ln^m x - m * (same with m-1)
    integral = span
    moments = [1.0]
    for m in range(1, SERIES_TERMS + 1):
        integral = -x * lx ** m - m * integral
        moments.append(integral / span)
    # the identric form of the first moment avoids the cancellation above
    moments[1] = lo * _log_ratio(hi, lo) / (hi - lo) - 1.0
    kappa = [0.0]
    for n in range(1, SERIES_TERMS + 1):
        acc = moments[n]
        for k in range(1, n):
            acc -= math.comb(n - 1, k - 1) * kappa[k] * moments[n - k]
        kappa.append(acc)
    e = r - 1.0
    total = 0.0
    # smallest terms first
    for n in range(SERIES_TERMS, 0, -1):
        total += kappa[n] * e ** (n - 1) / math.factorial(n)
    return math.log(hi) + total


def log_mean_general(r: float, a: float, b: float) -> float:
    """Generalized logarithmic mean ``L_r(a, b)``.

    ``r = 0`` gives the logarithmic mean, ``r = 1`` the identric mean and
    ``r = 2`` the arithmetic mean. ``b = 0`` is accepted for ``r > 0`` as the
    limit ``b -> 0+``: ``a * r**(-1/(r-1))``, and ``a/e`` at ``r = 1``.

    >>> log_mean_general(2.0, 2.0, 1.0)
    1.5
    """
    r = float(r)
    a = float(a)
    b = float(b)
    if not (a > 0.0) or not (b >= 0.0):
        raise DomainError(f"L_r needs a > 0 and b >= 0, got a={a!r}, b={b!r}")
    if a == b:
        raise DomainError("L_r(a, b) is undefined for a == b")
    near_zero = abs(r) < SPECIAL_BRANCH_EPS
    near_one = abs(r - 1.0) < SPECIAL_BRANCH_EPS

    if b == 0.0:
        if r <= 0.0 or near_zero:
            raise DomainError("L_r(a, 0) is only defined for r > 0")
        if near_one:
            return a / math.e
        return a * math.exp(-math.log(r) / (r - 1.0))

    if near_zero:
        return (a - b) / _log_ratio(a, b)
    if near_one:
        # (a ln a - b ln b)/(a - b) - 1, rearranged to avoid cancellation
        return math.exp(math.log(a) + b * _log_ratio(a, b) / (a - b) - 1.0)
    if abs(r - 1.0) < NEAR_ONE_SERIES:
        return math.exp(_log_mean_near_one(r, a, b))

    u = _log_ratio(b, a)
    # (a^r - b^r) / (r (a - b)) = a^r * (-expm1(r u)) / (r (a - b))
    part = -math.expm1(r * u) / (r * (a - b))
    return math.exp((r * math.log(a) + math.log(part)) / (r - 1.0))


def power_sum_ratio(n: int, r: float) -> float:
    """``P_n(r)``: ratio of the r-th power means of ``1..n`` and ``1..n+1``."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not r > 0:
        raise DomainError(f"r must be positive, got {r!r}")
    n = int(n)
    powers = [float(i) ** r for i in range(1, n + 2)]
    head = math.fsum(powers[:n]) / n
    full = math.fsum(powers) / (n + 1)
    return (head / full) ** (1.0 / r)


def alpha_weight(k: int, alpha: float) -> float:
    """``k**alpha - (k-1)**alpha`` without cancellation for large ``k``."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    if k == 1 or alpha == 1.0:
        return 1.0
    k = float(k)
    return math.exp(alpha * math.log(k)) * -math.expm1(alpha * math.log1p(-1.0 / k))


def alpha_weights(n: int, alpha: float) -> np.ndarray:
    """Vector of ``alpha_weight(k, alpha)`` for ``k = 1..n``."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    k = np.arange(1, n + 1, dtype=np.float64)
    out = np.ones(n, dtype=np.float64)
    if n > 1 and alpha != 1.0:
        kk = k[1:]
        out[1:] = np.exp(alpha * np.log(kk)) * -np.expm1(alpha * np.log1p(-1.0 / kk))
    return out


def copson_factors(alpha: float, n: int, s: float | None = None) -> np.ndarray:
    """``L_s(i, i-1)**(alpha-1)`` for ``i = 1..n``; ``s`` defaults to ``2*alpha - 1``.

    The ``i = 1`` entry uses the ``b = 0`` convention of :func:`log_mean_general`.
    """
    if s is None:
        s = 2.0 * alpha - 1.0
    e = alpha - 1.0
    return np.array(
        [log_mean_general(s, float(i), float(i - 1)) ** e for i in range(1, n + 1)],
        dtype=np.float64,
    )
