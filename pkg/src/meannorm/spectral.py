"""Operator norms and eigenvalues.

Power iteration gives lower estimates (Rayleigh quotients of actual
vectors); the cyclic Jacobi solver is the brute-force oracle they are
checked against. ``operator_norm_p`` is the nonlinear power method for
nonnegative matrices.

Anything supporting ``A @ v`` and ``A.T`` (ndarrays, scipy LinearOperators)
can be passed to the iterative routines.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from ._backend import kernels
from .errors import ConvergenceError, DomainError, SizeLimitError

JACOBI_MAX_DIMENSION = 2048
JACOBI_MAX_SWEEPS = 64
JACOBI_REL_TOL = 1e-15

# consecutive non-improving iterations before the start vector is perturbed
STALL_WINDOW = 32


@dataclass(frozen=True)
class IterationConfig:
    tolerance: float = 1e-12
    max_iterations: int = 100_000

    def __post_init__(self):
        if not self.tolerance > 0:
            raise DomainError(f"tolerance must be positive, got {self.tolerance!r}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise DomainError(f"max_iterations must be >= 1, got {self.max_iterations!r}")


DEFAULT_CONFIG = IterationConfig()


@dataclass(frozen=True)
class NormEstimate:
    """An operator-norm value plus how the iteration that produced it ended."""

    value: float
    iterations: int
    residual: float
    converged: bool

    def to_dict(self) -> dict:
        return asdict(self)


class PSDWitness(NamedTuple):
    is_psd: bool
    min_eigenvalue: float


class JacobiResult(NamedTuple):
    eigenvalues: np.ndarray
    sweeps: int
    off_norm: float
    frobenius: float


def _power_iteration(matvec, n: int, cfg: IterationConfig):
    """Returns (theta, iterations, residual, converged) for a symmetric operator.

    The iterate follows power iteration on ``A**2``, whose dominant eigenspace
    is that of the largest ``|lambda|`` even when ``lambda`` and ``-lambda``
    nearly tie (plain iteration on ``A`` then creeps or cycles). The reported
    value is the Rayleigh-Ritz value of largest magnitude on ``span{v, Av}``,
    which separates such a pair. Convergence is only accepted from a directly
    computed residual ``||A v - theta v||``.
    """
    tol = cfg.tolerance
    v = np.full(n, 1.0 / math.sqrt(n))
    bump = 1.0 / (3.0 + np.arange(n))
    mu_prev = None
    res_prev = math.inf
    stall = 0
    mu, ritz_res = 0.0, math.inf
    for it in range(1, cfg.max_iterations + 1):
        w = np.asarray(matvec(v), dtype=np.float64).ravel()
        theta = float(v @ w)
        r = w - theta * v
        residual = float(np.linalg.norm(r))
        if residual <= tol * max(1.0, abs(theta)):
            return theta, it, residual, True
        q = r / residual
        z = np.asarray(matvec(q), dtype=np.float64).ravel()
        t = np.array([[theta, residual], [residual, float(q @ z)]])
        vals, vecs = np.linalg.eigh(t)
        # ties go to the positive value (eigh sorts ascending)
        k = 1 if abs(vals[1]) >= abs(vals[0]) else 0
        c0, c1 = vecs[0, k], vecs[1, k]
        mu = float(vals[k])
        y = c0 * v + c1 * q
        ritz_res = float(np.linalg.norm(c0 * w + c1 * z - mu * y))
        scale = max(1.0, abs(mu))
        if ritz_res <= tol * scale:
            # confirmed by a fresh product on the next pass
            v = y / np.linalg.norm(y)
            continue
        if mu_prev is not None and abs(mu - mu_prev) < tol * scale and ritz_res >= 0.999 * res_prev:
            stall += 1
        else:
            stall = 0
        mu_prev = mu
        res_prev = ritz_res
        if stall >= STALL_WINDOW:
            v = v + bump
            v /= np.linalg.norm(v)
            stall = 0
            mu_prev = None
            res_prev = math.inf
            continue
        a2v = theta * w + residual * z
        v = a2v / np.linalg.norm(a2v)
    return mu, cfg.max_iterations, ritz_res, False


def spectral_norm_sym(a, cfg: IterationConfig = DEFAULT_CONFIG) -> NormEstimate:
    """Largest eigenvalue magnitude of a symmetric matrix by power iteration.

    Starts from the normalized all-ones vector; ``converged`` is set once
    ``||A v - theta v|| <= tol * max(1, |theta|)``.
    """
    n = a.shape[0]
    if a.shape != (n, n):
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    if isinstance(a, np.ndarray) and not np.all(np.isfinite(a)):
        raise DomainError("matrix has non-finite entries")
    theta, it, res, ok = _power_iteration(lambda v: a @ v, n, cfg)
    return NormEstimate(abs(theta), it, res, ok)


def operator_norm_2(b, cfg: IterationConfig = DEFAULT_CONFIG) -> NormEstimate:
    """``||B||_2`` as the square root of the top eigenvalue of ``B^T B``.

    The residual reported is that of the Gram eigen-equation.
    """
    if isinstance(b, np.ndarray) and not np.all(np.isfinite(b)):
        raise DomainError("matrix has non-finite entries")
    bt = b.T
    theta, it, res, ok = _power_iteration(lambda v: bt @ (b @ v), b.shape[1], cfg)
    return NormEstimate(math.sqrt(max(theta, 0.0)), it, res, ok)


def max_singular_value(k, cfg: IterationConfig = DEFAULT_CONFIG) -> NormEstimate:
    """Largest singular value; for a skew matrix this is the bilinear-form bound."""
    return operator_norm_2(k, cfg)


def operator_norm_p(b, p: float, cfg: IterationConfig = DEFAULT_CONFIG) -> NormEstimate:
    """``||B||_{p,p}`` of a nonnegative matrix by the nonlinear power method.

    Each step maps ``x -> (B^T (B x)^(p-1))^(q-1)`` and renormalizes in the
    p-norm; for nonnegative ``B`` the values ``||B x||_p`` never decrease.
    The residual is the max-norm change of the iterate.
    """
    p = float(p)
    if not p > 1.0:
        raise DomainError(f"p must exceed 1, got {p!r}")
    b = np.asarray(b, dtype=np.float64)
    if not np.all(np.isfinite(b)):
        raise DomainError("matrix has non-finite entries")
    if np.any(b < 0):
        raise DomainError("the nonlinear power method needs nonnegative entries")
    q = p / (p - 1.0)
    n = b.shape[1]
    tol = cfg.tolerance

    def pnorm(v):
        return float(np.sum(v ** p) ** (1.0 / p))

    x = np.full(n, n ** (-1.0 / p))
    value = pnorm(b @ x)
    residual = math.inf
    for it in range(1, cfg.max_iterations + 1):
        y = b @ x
        z = b.T @ (y ** (p - 1.0))
        if not np.any(z > 0):
            return NormEstimate(0.0, it, 0.0, True)
        x_new = z ** (q - 1.0)
        x_new /= pnorm(x_new)
        residual = float(np.max(np.abs(x_new - x)))
        x = x_new
        value = max(value, pnorm(b @ x))
        if residual <= tol:
            return NormEstimate(value, it, residual, True)
    return NormEstimate(value, cfg.max_iterations, residual, False)


def _as_symmetric(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix has non-finite entries")
    asym = np.max(np.abs(a - a.T)) if a.size else 0.0
    if asym > 1e-12 * max(1.0, float(np.max(np.abs(a)))):
        raise DomainError(f"matrix is not symmetric (max asymmetry {asym:.3g})")
    return np.ascontiguousarray(0.5 * (a + a.T))


def jacobi_diagonalize(a) -> JacobiResult:
    """Threshold Jacobi with round-robin pair ordering; eigenvalues ascending plus sweep diagnostics."""
    a = _as_symmetric(a)
    n = a.shape[0]
    if n > JACOBI_MAX_DIMENSION:
        raise SizeLimitError(f"Jacobi oracle supports n <= {JACOBI_MAX_DIMENSION}, got {n}")
    frob = float(np.linalg.norm(a))
    sweeps, off = kernels.jacobi_eigenvalues(a, JACOBI_MAX_SWEEPS, JACOBI_REL_TOL)
    if sweeps < 0:
        raise ConvergenceError(
            f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (off-norm {off:.3g})"
        )
    return JacobiResult(np.sort(np.diag(a).copy()), int(sweeps), float(off), frob)


def eig_sym_all(a) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, ascending."""
    return jacobi_diagonalize(a).eigenvalues


def is_positive_semidefinite(a, tol: float = 1e-10) -> PSDWitness:
    """PSD verdict with the minimum eigenvalue as witness."""
    lo = float(eig_sym_all(a)[0])
    return PSDWitness(lo >= -tol, lo)
