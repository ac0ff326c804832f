"""Schur-test certificates.

``schur_test`` turns test sequences ``c, d`` into the row/column constants
``U1, U2`` and the bound ``U1**(1/q) * U2**(1/p)``. The named certificates
reproduce the Hardy (``lambda_k = 1``) and ``M(alpha)`` cases with
``c = d = 1/i`` and keep the computed row sums next to the integral bound
they are supposed to respect.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .errors import DomainError
from .matrices import WeightSequence, gram_gamma, m_alpha_matrix

# absolute slack, scaled by max(1, bound), for row sums against integral bounds
ROW_SLACK = 1e-12


@dataclass
class SchurCertificate:
    c: np.ndarray
    d: np.ndarray
    p: float
    U1: float
    U2: float
    bound: float
    row_values: np.ndarray = field(repr=False)
    col_values: np.ndarray = field(repr=False)
    family: str = "custom"
    alpha: float | None = None
    analytic_bound: float | None = None
    violated: bool = False
    violations: list[int] = field(default_factory=list)

    @property
    def N(self) -> int:
        return len(self.c)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "alpha": self.alpha,
            "N": self.N,
            "p": self.p,
            "U1": self.U1,
            "U2": self.U2,
            "bound": self.bound,
            "analytic_bound": self.analytic_bound,
            "violated": self.violated,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def _sorted_rowsums(terms: np.ndarray) -> np.ndarray:
    # smallest terms first, then compensated accumulation
    return kernels.neumaier_rowsums(np.ascontiguousarray(np.sort(terms, axis=1)))


def schur_test(a, c, d, p: float = 2.0) -> SchurCertificate:
    """Evaluate Schur's test for a nonnegative matrix.

    ``U1 = max_i sum_j a_ij c_j**(1/p) / d_i**(1/p)`` and
    ``U2 = max_j sum_i a_ij d_i**(1/q) / c_j**(1/q)``; then
    ``||A||_{p,p} <= U1**(1/q) U2**(1/p)``.
    """
    a = np.asarray(a, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    d = np.asarray(d, dtype=np.float64)
    p = float(p)
    if not p > 1.0:
        raise DomainError(f"p must exceed 1, got {p!r}")
    if a.ndim != 2 or a.shape != (len(d), len(c)):
        raise DomainError(f"shape mismatch: A {a.shape}, d {d.shape}, c {c.shape}")
    if np.any(c <= 0) or np.any(d <= 0):
        raise DomainError("test sequences c and d must be strictly positive")
    if np.any(a < 0):
        raise DomainError("Schur's test needs a nonnegative matrix")
    q = p / (p - 1.0)
    rows = _sorted_rowsums(a * c ** (1.0 / p)) / d ** (1.0 / p)
    cols = _sorted_rowsums(a.T * d ** (1.0 / q)) / c ** (1.0 / q)
    u1 = float(np.max(rows))
    u2 = float(np.max(cols))
    return SchurCertificate(
        c=c,
        d=d,
        p=p,
        U1=u1,
        U2=u2,
        bound=u1 ** (1.0 / q) * u2 ** (1.0 / p),
        row_values=rows,
        col_values=cols,
    )


def hardy_row_bound(n: int) -> float:
    """Integral majorant ``4 - 2/sqrt(N)`` of the Hardy certificate's row sums."""
    return 4.0 - 2.0 / math.sqrt(n)


def m_alpha_limit(alpha: float) -> float:
    """``alpha**2 / (alpha - 1/2)**2``."""
    return alpha * alpha / (alpha - 0.5) ** 2


def m_alpha_row_bound(alpha: float, n: int) -> float:
    """``alpha**2/(alpha - 1/2)**2 * (1 - 1/(2 sqrt N))``, the advertised row bound."""
    return m_alpha_limit(alpha) * (1.0 - 1.0 / (2.0 * math.sqrt(n)))


def m_alpha_row_majorants(alpha: float, n: int) -> np.ndarray:
    """Per-row integral majorants for ``M(alpha)`` with ``c = 1/i``.

    Row ``i`` is a right Riemann sum of the decreasing function
    ``t**(alpha-3/2) / max(1, t**(2 alpha-1))`` over ``(0, N/i]``, so it is
    at most ``alpha**2/(alpha-1/2)**2 * (1 - (N/i)**(1/2-alpha) / 2)``.
    """
    i = np.arange(1, n + 1, dtype=np.float64)
    return m_alpha_limit(alpha) * (1.0 - (n / i) ** (0.5 - alpha) / 2.0)


def _attach(cert: SchurCertificate, family: str, alpha, analytic: float, limit: float):
    scale = max(1.0, abs(analytic))
    bad = np.nonzero(cert.row_values > analytic + ROW_SLACK * scale)[0]
    cert.family = family
    cert.alpha = alpha
    cert.analytic_bound = analytic
    cert.bound = limit
    cert.violations = [int(k) + 1 for k in bad]
    cert.violated = bool(len(bad))
    return cert


def _reciprocals(n: int) -> np.ndarray:
    return 1.0 / np.arange(1, n + 1, dtype=np.float64)


def hardy_certificate(n: int) -> SchurCertificate:
    """``c = d = 1/i`` against ``gamma = 1/max(i, j)``.

    ``analytic_bound`` is ``4 - 2/sqrt(N)``; ``bound`` is the limiting
    constant 4 (the squared Hardy constant at p = 2). ``violated`` flags any
    row sum above the integral bound.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"N must be a positive integer, got {n!r}")
    c = _reciprocals(n)
    cert = schur_test(gram_gamma(WeightSequence.ones(n)), c, c, 2.0)
    return _attach(cert, "hardy", 1.0, hardy_row_bound(n), 4.0)


def m_alpha_certificate(alpha: float, n: int) -> SchurCertificate:
    """``c = d = 1/i`` against ``M(alpha)``, ``1/2 < alpha <= 3/2``."""
    alpha = float(alpha)
    if not 0.5 < alpha <= 1.5:
        raise DomainError(f"the M(alpha) certificate needs 1/2 < alpha <= 3/2, got {alpha!r}")
    if int(n) != n or n < 1:
        raise DomainError(f"N must be a positive integer, got {n!r}")
    c = _reciprocals(n)
    cert = schur_test(m_alpha_matrix(alpha, n), c, c, 2.0)
    return _attach(cert, "m_alpha", alpha, m_alpha_row_bound(alpha, n), m_alpha_limit(alpha))


def hardy_row_sums_streaming(n: int, chunk: int = 512) -> np.ndarray:
    """Hardy certificate row sums ``sum_j (i/j)**(1/2) / max(i, j)`` without
    materialising the N x N matrix (for N beyond the dense limit)."""
    j = np.arange(1, n + 1, dtype=np.float64)
    out = np.empty(n)
    for start in range(0, n, chunk):
        i = j[start:start + chunk, None]
        terms = np.sqrt(i / j[None, :]) / np.maximum(i, j[None, :])
        out[start:start + chunk] = _sorted_rowsums(terms)
    return out
