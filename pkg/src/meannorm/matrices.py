"""Constructors for the weighted-mean, Copson, Hilbert-type and large-sieve
matrix families, plus the explicit similarity transforms relating them.

Matrices are dense ``float64`` numpy arrays with 1-based mathematical
indices mapped to 0-based array positions. Symmetric constructors build the
matrix from a symmetric formula (``np.minimum.outer`` etc.) so ``A == A.T``
holds exactly.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._backend import kernels
from .errors import DomainError
from .means import alpha_weights, copson_factors

MAX_DIMENSION = 8192


class KernelOrder(enum.Enum):
    """Distinguished exponent for power-mean kernels: the ``r -> +inf`` limit."""

    INF = "inf"


INF = KernelOrder.INF


def _check_n(n: int) -> int:
    if int(n) != n or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n!r}")
    return int(n)


def _indices(n: int) -> np.ndarray:
    return np.arange(1, n + 1, dtype=np.float64)


def prefix_sums(values) -> np.ndarray:
    """Compensated running sums."""
    return kernels.neumaier_cumsum(np.ascontiguousarray(values, dtype=np.float64))


def tail_sums(values) -> np.ndarray:
    """``out[k] = sum(values[k:])``, accumulated from the last entry backwards."""
    v = np.ascontiguousarray(np.asarray(values, dtype=np.float64)[::-1])
    return kernels.neumaier_cumsum(v)[::-1].copy()


@dataclass(frozen=True, eq=False)
class WeightSequence:
    """Weights ``lam`` and their prefix sums ``Lam`` of a weighted mean matrix."""

    lam: np.ndarray
    Lam: np.ndarray

    def __post_init__(self):
        if self.lam.ndim != 1 or len(self.lam) == 0:
            raise DomainError("weights must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(self.lam)):
            raise DomainError("weights must be finite")
        if not self.lam[0] > 0:
            raise DomainError("the first weight must be positive")
        if np.any(self.lam < 0):
            raise DomainError("weights must be nonnegative")

    @classmethod
    def from_weights(cls, lam: Sequence[float]) -> "WeightSequence":
        lam = np.array(lam, dtype=np.float64)
        if lam.ndim != 1 or len(lam) == 0:
            raise DomainError("weights must be a non-empty 1-d sequence")
        lam.setflags(write=False)
        Lam = prefix_sums(lam)
        Lam.setflags(write=False)
        return cls(lam, Lam)

    @classmethod
    def ones(cls, n: int) -> "WeightSequence":
        """Cesàro weights."""
        return cls.from_weights(np.ones(_check_n(n)))

    @classmethod
    def bennett7(cls, n: int, alpha: float) -> "WeightSequence":
        """``k**alpha - (k-1)**alpha``; the prefix sums are ``k**alpha``."""
        return cls.from_weights(alpha_weights(_check_n(n), alpha))

    @classmethod
    def bennett8(cls, n: int, alpha: float) -> "WeightSequence":
        """``k**(alpha-1)``."""
        return cls.from_weights(_indices(_check_n(n)) ** (alpha - 1.0))

    def __len__(self) -> int:
        return len(self.lam)

    def truncate(self, n: int) -> "WeightSequence":
        n = _check_n(n)
        if n > len(self):
            raise DomainError(f"weight sequence has {len(self)} terms, {n} requested")
        return WeightSequence(self.lam[:n], self.Lam[:n])

    def scaled(self, factor: float) -> "WeightSequence":
        return WeightSequence.from_weights(self.lam * factor)

    @property
    def is_nonincreasing(self) -> bool:
        return bool(np.all(np.diff(self.lam) <= 0))

    @property
    def is_nondecreasing(self) -> bool:
        return bool(np.all(np.diff(self.lam) >= 0))


@dataclass(frozen=True, eq=False)
class SpacedSequence:
    """Strictly increasing positive points with gaps at least ``delta``."""

    values: np.ndarray
    delta: float

    def __post_init__(self):
        v = self.values
        if v.ndim != 1 or len(v) == 0:
            raise DomainError("need at least one point")
        if np.any(v <= 0) or not np.all(np.isfinite(v)):
            raise DomainError("points must be positive and finite")
        if not self.delta > 0:
            raise DomainError("delta must be positive")
        if len(v) > 1 and np.min(np.diff(v)) < self.delta:
            raise DomainError("consecutive gaps must be >= delta")

    @classmethod
    def from_values(cls, values: Sequence[float], delta: float | None = None) -> "SpacedSequence":
        """``delta`` defaults to the smallest gap (1 for a single point)."""
        v = np.array(values, dtype=np.float64)
        v.setflags(write=False)
        if delta is None:
            delta = float(np.min(np.diff(v))) if len(v) > 1 else 1.0
        return cls(v, float(delta))

    @classmethod
    def integers(cls, count: int) -> "SpacedSequence":
        """``1, 2, ..., count`` with ``delta = 1``."""
        return cls.from_values(_indices(_check_n(count)), 1.0)

    def __len__(self) -> int:
        return len(self.values)


def weighted_mean_matrix(w: WeightSequence) -> np.ndarray:
    """Lower-triangular ``B`` with ``B[i, j] = lam_j / Lam_i`` for ``j <= i``."""
    b = np.tril(np.outer(1.0 / w.Lam, w.lam))
    return b


def gram_beta(w: WeightSequence, n: int | None = None) -> np.ndarray:
    """``beta_ij = lam_i lam_j sum_{k >= max(i,j)}^N Lam_k**-2``, equal to ``B.T @ B``."""
    if n is not None:
        w = w.truncate(n)
    n = len(w)
    tails = tail_sums(1.0 / (w.Lam * w.Lam))
    idx = np.arange(n)
    return np.outer(w.lam, w.lam) * tails[np.maximum.outer(idx, idx)]


def gram_gamma(w: WeightSequence, n: int | None = None) -> np.ndarray:
    """``gamma_ij = (sum_{k <= min(i,j)} lam_k**2) / (Lam_i Lam_j)``."""
    if n is not None:
        w = w.truncate(n)
    n = len(w)
    squares = prefix_sums(w.lam * w.lam)
    idx = np.arange(n)
    # one rounding: for unit weights this is exactly 1/max(i, j)
    return squares[np.minimum.outer(idx, idx)] / np.outer(w.Lam, w.Lam)


def _check_alpha_half(alpha: float) -> float:
    alpha = float(alpha)
    if not alpha > 0.5:
        raise DomainError(f"alpha must exceed 1/2, got {alpha!r}")
    if alpha > 1.5:
        warnings.warn(
            f"alpha={alpha} lies outside (1/2, 3/2]; the integral comparison "
            "behind the M(alpha) bound no longer applies",
            stacklevel=3,
        )
    return alpha


def m_alpha_matrix(alpha: float, n: int) -> np.ndarray:
    """``m_ij = alpha**2 min(i,j)**(2 alpha - 1) / ((2 alpha - 1) i**alpha j**alpha)``."""
    alpha = _check_alpha_half(alpha)
    n = _check_n(n)
    i = _indices(n)
    lo = np.minimum.outer(i, i) ** (2.0 * alpha - 1.0)
    # at alpha = 1 every step but the division is exact, giving 1/max(i, j)
    return (alpha * alpha / (2.0 * alpha - 1.0)) * lo / np.outer(i, i) ** alpha


def n_alpha_matrix(alpha: float, n: int) -> np.ndarray:
    """``n_ij = alpha**2 l_i l_j sum_{k >= max(i,j)}^N k**(-2 alpha)``
    with ``l_i = L_{2 alpha - 1}(i, i-1)**(alpha - 1)``."""
    alpha = _check_alpha_half(alpha)
    n = _check_n(n)
    ell = copson_factors(alpha, n)
    tails = tail_sums(_indices(n) ** (-2.0 * alpha))
    idx = np.arange(n)
    return alpha * alpha * np.outer(ell, ell) * tails[np.maximum.outer(idx, idx)]


def copson_L_matrix(alpha: float, n: int, s: float | None = None) -> np.ndarray:
    """Upper-triangular ``C[n, i] = alpha L_s(n, n-1)**(alpha-1) / i**alpha`` for ``i >= n``.

    With the default ``s = 2 alpha - 1``, ``C.T @ C`` telescopes to ``M(alpha)``
    and ``C @ C.T`` is ``N(alpha)``.
    """
    alpha = _check_alpha_half(alpha)
    n = _check_n(n)
    ell = copson_factors(alpha, n, s)
    return np.triu(alpha * np.outer(ell, _indices(n) ** -alpha))


def _check_order(r) -> float | KernelOrder:
    if r is INF:
        return r
    if isinstance(r, str) and r.lower() in ("inf", "infinity"):
        return INF
    if isinstance(r, float) and math.isinf(r):
        raise DomainError("use matrices.INF for the r -> infinity kernel")
    r = float(r)
    if not r >= 1.0:
        raise DomainError(f"kernel order r must be >= 1, got {r!r}")
    return r


def _inverse_power_mean(x: np.ndarray, y: np.ndarray, r) -> np.ndarray:
    """``1 / P_r(x, y)``; scaled by the larger argument so large ``r`` cannot overflow."""
    hi = np.maximum(x, y)
    if r is INF:
        return 1.0 / hi
    lo = np.minimum(x, y)
    return 1.0 / (hi * ((1.0 + (lo / hi) ** r) / 2.0) ** (1.0 / r))


def power_mean_kernel(r, n: int) -> np.ndarray:
    """Entries ``P_r(i, j)**-1`` with ``P_r(i, j) = ((i**r + j**r)/2)**(1/r)``.

    ``r = 1`` is twice the Hilbert matrix; ``r = INF`` gives ``1/max(i, j)``.
    """
    r = _check_order(r)
    i = _indices(_check_n(n))
    x = np.add.outer(i, np.zeros_like(i))
    return _inverse_power_mean(x, x.T, r)


def generalized_kernel(r, alpha: float, n: int) -> np.ndarray:
    """Entries ``P_r(i**a j**(1-a), i**(1-a) j**a)**-1`` with ``a = alpha``."""
    r = _check_order(r)
    alpha = float(alpha)
    li = np.log(_indices(_check_n(n)))
    x = np.exp(np.add.outer(alpha * li, (1.0 - alpha) * li))
    # the second argument is the transpose of the first, so the result is symmetric
    return _inverse_power_mean(x, x.T, r)


def hilbert_matrix(n: int) -> np.ndarray:
    """``1 / (i + j)``."""
    i = _indices(_check_n(n))
    return 1.0 / np.add.outer(i, i)


def _power_difference(s: SpacedSequence, alpha: float) -> np.ndarray:
    """``lam_r**alpha - lam_s**alpha`` (antisymmetric, zero diagonal)."""
    v = s.values
    if alpha == 1.0:
        return np.subtract.outer(v, v)
    lr = v[:, None]
    ls = v[None, :]
    # lam_s^a * expm1(a * ln(lam_r/lam_s)) keeps digits when lam_r ~ lam_s
    diff = ls ** alpha * np.expm1(alpha * np.log1p((lr - ls) / ls))
    diff = 0.5 * (diff - diff.T)
    np.fill_diagonal(diff, 0.0)
    return diff


def _check_alpha_ge1(alpha: float) -> float:
    alpha = float(alpha)
    if not alpha >= 1.0:
        raise DomainError(f"alpha must be >= 1, got {alpha!r}")
    return alpha


def mv_skew_matrix(s: SpacedSequence, alpha: float) -> np.ndarray:
    """Skew matrix ``(lam_r lam_s)**((alpha-1)/2) / (lam_r**alpha - lam_s**alpha)``, zero diagonal."""
    alpha = _check_alpha_ge1(alpha)
    v = s.values
    geo = np.outer(v, v) ** ((alpha - 1.0) / 2.0)
    diff = _power_difference(s, alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = geo / diff
    np.fill_diagonal(k, 0.0)
    upper = np.triu(k, 1)
    return upper - upper.T


def schur_x_matrix(s: SpacedSequence, alpha: float) -> np.ndarray:
    """``X_rs = (lam_r - lam_s)(lam_r lam_s)**((alpha-1)/2) / (lam_r**alpha - lam_s**alpha)``,
    diagonal ``1/alpha``."""
    alpha = _check_alpha_ge1(alpha)
    v = s.values
    geo = np.outer(v, v) ** ((alpha - 1.0) / 2.0)
    diff = _power_difference(s, alpha)
    gaps = np.subtract.outer(v, v)
    with np.errstate(divide="ignore", invalid="ignore"):
        x = gaps * geo / diff
    upper = np.triu(x, 1)
    x = upper + upper.T
    np.fill_diagonal(x, 1.0 / alpha)
    return x


def hadamard_product(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Entrywise (Schur) product."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DomainError(f"shape mismatch: {x.shape} vs {y.shape}")
    return x * y


def similarity_factors_n_alpha(alpha: float, n: int):
    """``(E, E_inv, F)`` with ``E`` lower bidiagonal (``i**a`` / ``-(i-1)**a``),
    ``E_inv[i, j] = i**-a`` for ``j <= i`` and ``F`` diagonal
    ``(i**(2a-1) - (i-1)**(2a-1))**-1/2``."""
    alpha = _check_alpha_half(alpha)
    n = _check_n(n)
    i = _indices(n)
    e = np.diag(i ** alpha)
    e[np.arange(1, n), np.arange(n - 1)] = -(i[:-1] ** alpha)
    e_inv = np.tril(np.outer(i ** -alpha, np.ones(n)))
    f = np.diag(alpha_weights(n, 2.0 * alpha - 1.0) ** -0.5)
    return e, e_inv, f


def conjugate_n_alpha(alpha: float, n: int) -> np.ndarray:
    """``F E M(alpha) E^-1 F^-1`` from the closed-form factors; equals ``N(alpha)``."""
    e, e_inv, f = similarity_factors_n_alpha(alpha, n)
    f_inv = np.diag(1.0 / np.diag(f))
    return f @ e @ m_alpha_matrix(alpha, n) @ e_inv @ f_inv


def similarity_factors_gamma(w: WeightSequence, n: int | None = None):
    """``(H, H_inv, G)``: ``H[i, j] = lam_j`` for ``j <= i``; ``H_inv`` lower
    bidiagonal ``1/lam_i``, ``-1/lam_i``; ``G`` diagonal ``Lam_1 / Lam_i``."""
    if n is not None:
        w = w.truncate(n)
    n = len(w)
    if np.any(w.lam <= 0):
        raise DomainError("the explicit inverse of H needs every weight positive")
    h = np.tril(np.outer(np.ones(n), w.lam))
    h_inv = np.diag(1.0 / w.lam)
    h_inv[np.arange(1, n), np.arange(n - 1)] = -1.0 / w.lam[1:]
    g = np.diag(w.Lam[0] / w.Lam)
    return h, h_inv, g


def conjugate_gamma(w: WeightSequence, n: int | None = None) -> np.ndarray:
    """``G H A H^-1 G^-1`` with ``A = gram_beta(w, n)``; equals ``gram_gamma(w, n)``."""
    if n is not None:
        w = w.truncate(n)
    h, h_inv, g = similarity_factors_gamma(w)
    g_inv = np.diag(1.0 / np.diag(g))
    return g @ h @ gram_beta(w) @ h_inv @ g_inv


def format_csv(matrix: np.ndarray) -> str:
    """Row per line, comma separated, 17 significant digits (binary64 round-trip)."""
    m = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    return "".join(",".join(format(float(v), ".17g") for v in row) + "\n" for row in m)


def parse_csv(text: str) -> np.ndarray:
    rows = [line for line in text.splitlines() if line.strip()]
    return np.array([[float(v) for v in line.split(",")] for line in rows], dtype=np.float64)
