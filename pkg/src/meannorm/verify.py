"""Seeded, reproducible checks of the inequalities and identities.

Every check returns a :class:`CheckReport`. Margins are ``bound - value``
scaled by ``max(1, |bound|)``; a report passes iff its worst margin is
``>= -slack``. Random trials draw coordinates uniform on [0, 1) from a
:class:`~meannorm.rng.TrialRng` and normalize them in the relevant p-norm.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Iterable

import numpy as np
from scipy.integrate import simpson

from . import means
from .certificates import hardy_certificate, hardy_row_bound, m_alpha_certificate
from .errors import DomainError
from .matrices import (
    INF,
    SpacedSequence,
    WeightSequence,
    conjugate_gamma,
    conjugate_n_alpha,
    copson_L_matrix,
    gram_beta,
    gram_gamma,
    hilbert_matrix,
    m_alpha_matrix,
    mv_skew_matrix,
    n_alpha_matrix,
    power_mean_kernel,
    schur_x_matrix,
    weighted_mean_matrix,
)
from .rng import TrialRng
from .spectral import (
    eig_sym_all,
    is_positive_semidefinite,
    max_singular_value,
    operator_norm_2,
    operator_norm_p,
    spectral_norm_sym,
)

# slack ladder, relative to max(1, magnitude)
POINTWISE = 1e-13
TRIAL = 1e-12
ENTRYWISE = 1e-10
SPECTRAL = 1e-9


@dataclass(frozen=True)
class CheckReport:
    suite: str
    passed: bool
    worst_margin: float
    witness: str
    instances_tested: int
    slack: float
    asserted: bool = True

    @property
    def ok(self) -> bool:
        """Whether the report counts as a pass for the run (exploratory ones always do)."""
        return self.passed or not self.asserted

    def to_dict(self) -> dict:
        return asdict(self)


def _report(suite, margins, witnesses, slack, asserted=True) -> CheckReport:
    margins = np.asarray(margins, dtype=np.float64).ravel()
    k = int(np.argmin(margins))
    worst = float(margins[k])
    return CheckReport(
        suite=suite,
        passed=bool(worst >= -slack),
        worst_margin=worst,
        witness=witnesses(k) if callable(witnesses) else str(witnesses[k]),
        instances_tested=int(margins.size),
        slack=slack,
        asserted=asserted,
    )


def _scaled(bound, value):
    bound = np.asarray(bound, dtype=np.float64)
    return (bound - value) / np.maximum(1.0, np.abs(bound))


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def random_unit_vectors(rng: TrialRng, count: int, n: int, p: float = 2.0) -> np.ndarray:
    """``count`` nonnegative rows of length ``n`` with unit p-norm."""
    a = rng.uniforms(count * n).reshape(count, n)
    norms = np.sum(a ** p, axis=1) ** (1.0 / p)
    return a / norms[:, None]


def _norm_estimate(b: np.ndarray, p: float):
    return operator_norm_2(b) if p == 2.0 else operator_norm_p(b, p)


def bennett8_is_open(alpha: float, p: float) -> bool:
    """``lambda_k = k**(alpha-1)`` with ``1 < alpha < 2`` is unproven, except at ``alpha = 1 + 1/p``."""
    return 1.0 < alpha < 2.0 and not math.isclose(alpha, 1.0 + 1.0 / p, rel_tol=0, abs_tol=1e-12)


def verify_hardy_type(family: str, alpha: float, p: float, n: int, trials: int,
                      rng: TrialRng) -> CheckReport:
    """Random trials of the weighted-mean inequality with constant ``(alpha p/(alpha p - 1))**p``.

    Also compares ``norm**p`` against the constant and runs the single-spike
    instance ``a = e_1``. Open cases of the ``bennett8`` family are recorded
    with ``asserted=False``.
    """
    alpha = float(alpha)
    p = float(p)
    if not p > 1.0 or not alpha > 0.0 or not alpha * p > 1.0:
        raise DomainError(f"need p > 1, alpha > 0 and alpha p > 1; got alpha={alpha!r}, p={p!r}")
    if family == "bennett7":
        w = WeightSequence.bennett7(n, alpha)
    elif family == "bennett8":
        w = WeightSequence.bennett8(n, alpha)
    else:
        raise DomainError(f"unknown family {family!r}")
    const = (alpha * p / (alpha * p - 1.0)) ** p
    b = weighted_mean_matrix(w)
    a = random_unit_vectors(rng, trials, n, p)
    lhs = np.sum((a @ b.T) ** p, axis=1)
    spike = float(np.sum((w.lam[0] / w.Lam) ** p))
    est = _norm_estimate(b, p)
    values = np.concatenate([lhs, [spike, est.value ** p]])
    labels = [f"trial {k}" for k in range(trials)] + ["spike e_1", "norm estimate"]
    asserted = not (family == "bennett8" and bennett8_is_open(alpha, p))
    return _report(
        f"verify_hardy_type[{family},alpha={alpha:g},p={p:g},N={n}]",
        _scaled(const, values),
        lambda k: f"{labels[k]}: value {_fmt(values[k])} vs constant {_fmt(const)}",
        TRIAL,
        asserted,
    )


def _entry_witness(diff: np.ndarray, what: str):
    def describe(k):
        i, j = np.unravel_index(k, diff.shape)
        return f"{what} at (i={i + 1}, j={j + 1}), margin {_fmt(diff[i, j])}"
    return describe


def check_gamma_le_m(alpha: float, n: int) -> CheckReport:
    """``gamma <= M(alpha)`` entrywise for ``lambda_k = k**alpha - (k-1)**alpha``."""
    alpha = float(alpha)
    if not 0.5 < alpha <= 1.5:
        raise DomainError(f"need 1/2 < alpha <= 3/2, got {alpha!r}")
    gamma = gram_gamma(WeightSequence.bennett7(n, alpha))
    m = m_alpha_matrix(alpha, n)
    margins = _scaled(m, gamma)
    return _report(f"check_gamma_le_m[alpha={alpha:g},N={n}]", margins,
                   _entry_witness(margins, "gamma vs m"), POINTWISE)


def check_gamma_ge_maxinv(w: WeightSequence, n: int | None = None, label: str = "custom") -> CheckReport:
    """For nonincreasing weights, ``gamma >= 1/max(i, j)`` entrywise and in spectral norm."""
    n = len(w) if n is None else int(n)
    w = w.truncate(n)
    if not w.is_nonincreasing:
        raise DomainError("weights must be nonincreasing")
    gamma = gram_gamma(w)
    kernel = power_mean_kernel(INF, n)
    entry = _scaled(gamma, kernel)
    g_norm = spectral_norm_sym(gamma).value
    k_norm = spectral_norm_sym(kernel).value
    spec = (g_norm - k_norm) / max(1.0, k_norm)
    margins = np.concatenate([entry.ravel(), [spec]])

    def describe(k):
        if k == margins.size - 1:
            return f"spectral norms {_fmt(g_norm)} vs {_fmt(k_norm)}"
        return _entry_witness(entry, "gamma vs 1/max")(k)

    return _report(f"check_gamma_ge_maxinv[{label},N={n}]", margins, describe, POINTWISE)


def majorization_margins(alpha: float, n: int) -> np.ndarray:
    """``(k/m)**alpha - S_k/S_m`` for all ``k <= m <= n`` (lower triangle; NaN above)."""
    i = np.arange(1, n + 1, dtype=np.float64)
    s = np.cumsum(i ** (alpha - 1.0))
    k = i[None, :]
    m = i[:, None]
    out = (k / m) ** alpha - s[None, :] / s[:, None]
    out[np.triu_indices(n, 1)] = np.nan
    return out


def check_majorization(alpha: float, n: int) -> CheckReport:
    """``sum_{i<=k} i**(alpha-1) / sum_{i<=n} i**(alpha-1) <= (k/n)**alpha``, all ``k <= n``."""
    alpha = float(alpha)
    if not 0.5 < alpha <= 1.0:
        raise DomainError(f"need 1/2 < alpha <= 1, got {alpha!r}")
    full = majorization_margins(alpha, n)
    rows, cols = np.tril_indices(n)
    margins = full[rows, cols]
    return _report(
        f"check_majorization[alpha={alpha:g},n={n}]",
        margins,
        lambda k: f"k={cols[k] + 1}, n={rows[k] + 1}, margin {_fmt(margins[k])}",
        POINTWISE,
    )


def scalar_grid(points: int = 200) -> np.ndarray:
    """``t`` with ``t - 1`` log-spaced from ``2**-10`` to ``999``."""
    return 1.0 + np.geomspace(2.0 ** -10, 999.0, points)


def scalar_14_t_form(alpha: float, t: np.ndarray) -> np.ndarray:
    """Left side of the two-variable inequality times ``(t - 1)**2`` (with ``lambda_s = 1``)."""
    u = np.asarray(t, dtype=np.float64) - 1.0
    lt = np.log1p(u)
    g = np.exp((alpha - 1.0) * lt)
    h = np.exp(0.5 * (alpha - 1.0) * lt)
    ratio = u / np.expm1(alpha * lt)
    return (g + h * (g + 1.0)) * ratio * ratio


def scalar_14_y_form(alpha: float, t: np.ndarray):
    """Both sides of the ``y = t**(alpha-1)`` form; returns (lhs, rhs)."""
    beta = 1.0 / (alpha - 1.0)
    ly = (alpha - 1.0) * np.log1p(np.asarray(t, dtype=np.float64) - 1.0)
    lhs = np.exp(0.5 * ly) * (np.exp(ly) + 1.0) / 2.0
    rhs = (beta / (1.0 + beta) * np.expm1((1.0 + beta) * ly) / np.expm1(beta * ly)) ** 2
    return lhs, rhs


# the y-form is false beyond this alpha (it fails near t = 1)
Y_FORM_MAX_ALPHA = 5.0


def check_scalar_14(alpha: float, t=None, form: str = "both") -> CheckReport:
    """The scalar inequalities behind the weighted skew-Hilbert bound.

    ``form`` selects the two-variable ``t`` form, the stronger ``y`` form
    (needs ``alpha > 1``), or both. The ``y`` form only holds for
    ``alpha <= 5``; beyond that it is recorded with ``asserted=False``.
    At ``alpha = 1`` the t-form is an identity and the y-form is skipped.
    """
    alpha = float(alpha)
    if alpha < 1.0:
        raise DomainError(f"need alpha >= 1, got {alpha!r}")
    if form not in ("t", "y", "both"):
        raise DomainError(f"form must be 't', 'y' or 'both', got {form!r}")
    t = scalar_grid() if t is None else np.asarray(t, dtype=np.float64)
    if np.any(t <= 1.0):
        raise DomainError("grid points must exceed 1")
    use_y = form != "t" and alpha > 1.0
    if form == "y" and not use_y:
        raise DomainError("the y-form needs alpha > 1")
    margins, labels = [], []
    if form != "y":
        margins.append(_scaled(3.0 / alpha ** 2, scalar_14_t_form(alpha, t)))
        labels += [("t-form", tk) for tk in t]
    if use_y:
        lhs, rhs = scalar_14_y_form(alpha, t)
        margins.append(_scaled(rhs, lhs))
        labels += [("y-form", tk) for tk in t]
    margins = np.concatenate(margins)
    tag = "" if form == "both" else f",{form}-form"
    return _report(
        f"check_scalar_14[alpha={alpha:g}{tag}]",
        margins,
        lambda k: f"{labels[k][0]} at t={_fmt(labels[k][1])}, margin {_fmt(margins[k])}",
        TRIAL,
        asserted=not (use_y and alpha > Y_FORM_MAX_ALPHA),
    )


def simpson_average(h: Callable, a: float, b: float, panels: int = 1024):
    """Mean of ``h`` on ``[a, b]`` by composite Simpson, with a Richardson error estimate."""
    if panels < 2 or panels % 2:
        raise DomainError("panels must be an even integer >= 2")

    def rule(m):
        x = np.linspace(a, b, m + 1)
        return float(simpson(h(x), x=x)) / (b - a)

    fine = rule(2 * panels)
    coarse = rule(panels)
    return fine, abs(fine - coarse) / 15.0


def check_hadamard_midpoint(h: Callable, a: float, b: float, panels: int = 1024,
                            label: str = "h") -> CheckReport:
    """``h((a+b)/2) <= mean of h on [a, b] <= (h(a) + h(b))/2`` for convex ``h``."""
    a = float(a)
    b = float(b)
    if not b > a:
        raise DomainError("need a < b")
    avg, err = simpson_average(h, a, b, panels)
    mid = float(h(np.array([0.5 * (a + b)]))[0])
    ends = float(np.mean(h(np.array([a, b]))))
    margins = np.array([_scaled(avg, mid), _scaled(ends, avg)], dtype=np.float64)
    slack = max(POINTWISE, err)
    names = ["midpoint <= mean", "mean <= endpoint average"]
    return _report(
        f"check_hadamard_midpoint[{label},a={a:g},b={b:g}]",
        margins,
        lambda k: f"{names[k]}: mid {_fmt(mid)}, mean {_fmt(avg)}, ends {_fmt(ends)}",
        slack,
    )


def verify_mv_bound(s: SpacedSequence, alpha: float, label: str = "custom") -> CheckReport:
    """Largest singular value of the weighted skew-Hilbert matrix against ``pi/(alpha delta)``."""
    est = max_singular_value(mv_skew_matrix(s, alpha))
    bound = math.pi / (float(alpha) * s.delta)
    margin = _scaled(bound, est.value)
    return _report(
        f"verify_mv_bound[{label},R={len(s)},alpha={float(alpha):g}]",
        [margin],
        [f"singular value {_fmt(est.value)} vs {_fmt(bound)} ({est.iterations} iterations)"],
        SPECTRAL,
    )


def check_x_psd(s: SpacedSequence, alpha: float, label: str = "custom") -> CheckReport:
    """``X`` is positive semidefinite with diagonal exactly ``1/alpha``."""
    alpha = float(alpha)
    x = schur_x_matrix(s, alpha)
    witness = is_positive_semidefinite(x, ENTRYWISE)
    diag_dev = float(np.max(np.abs(np.diag(x) - 1.0 / alpha)))
    # a non-exact diagonal is a hard failure, not a rounding question
    diag_margin = 0.0 if diag_dev == 0.0 else -1.0
    margins = [witness.min_eigenvalue, diag_margin]
    texts = [
        f"min eigenvalue {_fmt(witness.min_eigenvalue)}",
        f"diagonal deviation from 1/alpha {_fmt(diag_dev)}",
    ]
    return _report(f"check_x_psd[{label},R={len(s)},alpha={alpha:g}]", margins, texts, ENTRYWISE)


SIMILARITY_TOLERANCES = {"n_alpha": 1e-9, "gamma": 1e-10, "spectra": 1e-8}


def check_similarity_suite(alpha: float, n: int) -> CheckReport:
    """Similarity identities: ``N(alpha)`` from ``M(alpha)``, ``gamma`` from ``A``, equal spectra.

    Each margin is ``tolerance - error``, so the declared slack is zero.
    """
    alpha = float(alpha)
    err_n = float(np.max(np.abs(conjugate_n_alpha(alpha, n) - n_alpha_matrix(alpha, n))))
    w = WeightSequence.bennett7(n, alpha)
    err_g = float(np.max(np.abs(conjugate_gamma(w) - gram_gamma(w))))
    spec_m = eig_sym_all(m_alpha_matrix(alpha, n))
    spec_n = eig_sym_all(n_alpha_matrix(alpha, n))
    err_s = float(np.max(np.abs(spec_m - spec_n)))
    errors = {"n_alpha": err_n, "gamma": err_g, "spectra": err_s}
    names = list(errors)
    margins = [SIMILARITY_TOLERANCES[k] - errors[k] for k in names]
    return _report(
        f"check_similarity_suite[alpha={alpha:g},N={n}]",
        margins,
        lambda k: f"{names[k]} identity error {_fmt(errors[names[k]])}",
        0.0,
    )


def final_L_s_interval(alpha: float):
    lo, hi = sorted((2.0 * alpha - 1.0, alpha))
    return lo, hi


def final_L_s_lhs(alpha: float, s: float, a: np.ndarray) -> np.ndarray:
    """Trial left sides ``sum_n (sum_{i<=n} alpha L_s(i,i-1)**(alpha-1) n**-alpha a_i)**2`` (rows of ``a``)."""
    t = copson_L_matrix(alpha, a.shape[1], s).T
    return np.sum((a @ t.T) ** 2, axis=1)


def check_final_L_s(alpha: float, s: float, n: int, trials: int, rng: TrialRng) -> CheckReport:
    """Random-trial check of the closing Copson-type inequality with constant ``alpha**2/(alpha-1/2)**2``."""
    alpha = float(alpha)
    s = float(s)
    if not 0.5 < alpha <= 1.5:
        raise DomainError(f"need 1/2 < alpha <= 3/2, got {alpha!r}")
    lo, hi = final_L_s_interval(alpha)
    if not lo - 1e-15 <= s <= hi + 1e-15:
        raise DomainError(f"s must lie in [{lo!r}, {hi!r}], got {s!r}")
    bound = alpha * alpha / (alpha - 0.5) ** 2
    a = random_unit_vectors(rng, trials, n)
    lhs = final_L_s_lhs(alpha, s, a)
    est = operator_norm_2(copson_L_matrix(alpha, n, s))
    values = np.concatenate([lhs, [est.value ** 2]])
    labels = [f"trial {k}" for k in range(trials)] + ["norm estimate squared"]
    return _report(
        f"check_final_L_s[alpha={alpha:g},s={s:g},N={n}]",
        _scaled(bound, values),
        lambda k: f"{labels[k]}: {_fmt(values[k])} vs {_fmt(bound)}",
        TRIAL,
    )


def check_bennett_increasing(w: WeightSequence, p: float, n: int, trials: int, rng: TrialRng,
                             label: str = "custom") -> CheckReport:
    """For nondecreasing weights the weighted mean matrix has ``l^p`` norm at most ``q``."""
    p = float(p)
    if not p > 1.0:
        raise DomainError(f"p must exceed 1, got {p!r}")
    w = w.truncate(n)
    if not w.is_nondecreasing:
        raise DomainError("weights must be nondecreasing")
    q = p / (p - 1.0)
    b = weighted_mean_matrix(w)
    a = random_unit_vectors(rng, trials, n, p)
    lhs = np.sum((a @ b.T) ** p, axis=1)
    est = _norm_estimate(b, p)
    margins = np.concatenate([_scaled(q ** p, lhs), [_scaled(q, est.value)]])
    labels = [f"trial {k}: {_fmt(v)} vs {_fmt(q ** p)}" for k, v in enumerate(lhs)]
    labels.append(f"norm estimate {_fmt(est.value)} vs {_fmt(q)}")
    return _report(f"check_bennett_increasing[{label},p={p:g},N={n}]", margins, labels, SPECTRAL)


# checks beyond the named inequalities


def check_alzer(n_max: int, rs: Iterable[float]) -> CheckReport:
    """``P_n(r) > n/(n+1)`` for all ``n <= n_max``."""
    cases = [(n, float(r)) for r in rs for n in range(1, n_max + 1)]
    margins = [_scaled(means.power_sum_ratio(n, r), n / (n + 1.0)) for n, r in cases]
    margins = np.asarray(margins, dtype=np.float64)
    report = _report(
        f"check_alzer[n<={n_max}]",
        margins,
        lambda k: f"n={cases[k][0]}, r={cases[k][1]:g}, margin {_fmt(margins[k])}",
        0.0,
    )
    # strict inequality
    if report.worst_margin <= 0.0:
        return CheckReport(**{**report.to_dict(), "passed": False})
    return report


MEAN_R_GRID = tuple(np.round(np.linspace(-5.0, 5.0, 21), 12))


def check_log_mean_monotone(pairs: int, rng: TrialRng) -> CheckReport:
    """``L_r(a, b)`` strictly increasing over the 21-point ``r`` grid for random ``a != b``."""
    u = rng.uniforms(2 * pairs).reshape(pairs, 2)
    a = 0.1 + 9.9 * u[:, 0]
    b = 0.1 + 9.9 * u[:, 1]
    margins, labels = [], []
    for x, y in zip(a, b):
        vals = np.array([means.log_mean_general(r, x, y) for r in MEAN_R_GRID])
        steps = np.diff(vals) / np.maximum(1.0, np.abs(vals[1:]))
        k = int(np.argmin(steps))
        margins.append(steps[k])
        labels.append(f"a={_fmt(x)}, b={_fmt(y)}, r={MEAN_R_GRID[k]:g}->{MEAN_R_GRID[k + 1]:g}")
    report = _report(f"check_log_mean_monotone[pairs={pairs}]", margins, labels, 0.0)
    if report.worst_margin <= 0.0:
        return CheckReport(**{**report.to_dict(), "passed": False})
    return report


def check_hardy_gram(sizes: Iterable[int]) -> CheckReport:
    """Top eigenvalue of the Cesaro Gram matrix below 4 and strictly increasing in ``N``."""
    sizes = list(sizes)
    vals = [spectral_norm_sym(gram_beta(WeightSequence.ones(n))).value for n in sizes]
    margins = [_scaled(4.0, v) for v in vals]
    labels = [f"N={n}: {_fmt(v)}" for n, v in zip(sizes, vals)]
    for k in range(1, len(vals)):
        margins.append(vals[k] - vals[k - 1])
        labels.append(f"increase N={sizes[k - 1]}->{sizes[k]}: {_fmt(vals[k] - vals[k - 1])}")
    return _report("check_hardy_gram", margins, labels, 0.0)


def check_hilbert(sizes: Iterable[int]) -> CheckReport:
    """Spectral norm of the Hilbert matrix ``1/(i+j)`` below ``pi`` and increasing in ``N``."""
    sizes = list(sizes)
    vals = [spectral_norm_sym(hilbert_matrix(n)).value for n in sizes]
    margins = [_scaled(math.pi, v) for v in vals]
    labels = [f"N={n}: {_fmt(v)}" for n, v in zip(sizes, vals)]
    for k in range(1, len(vals)):
        margins.append(vals[k] - vals[k - 1])
        labels.append(f"increase N={sizes[k - 1]}->{sizes[k]}")
    return _report("check_hilbert", margins, labels, 0.0)


def check_hardy_certificate(n: int) -> CheckReport:
    """Row sums of the Hardy certificate below ``4 - 2/sqrt(N)``."""
    cert = hardy_certificate(n)
    margins = _scaled(hardy_row_bound(n), cert.row_values)
    return _report(
        f"check_hardy_certificate[N={n}]",
        margins,
        lambda k: f"row {k + 1}: {_fmt(cert.row_values[k])} vs {_fmt(cert.analytic_bound)}",
        TRIAL,
    )


def check_m_alpha_sandwich(alpha: float, n: int) -> CheckReport:
    """Power-iteration estimate of ``M(alpha)`` at most the Schur bound, which is at most the limit."""
    cert = m_alpha_certificate(alpha, n)
    est = spectral_norm_sym(m_alpha_matrix(alpha, n)).value
    schur = cert.U1 ** 0.5 * cert.U2 ** 0.5
    margins = [_scaled(schur, est), _scaled(cert.bound, schur)]
    labels = [
        f"estimate {_fmt(est)} vs Schur bound {_fmt(schur)}",
        f"Schur bound {_fmt(schur)} vs limit {_fmt(cert.bound)}",
    ]
    return _report(f"check_m_alpha_sandwich[alpha={float(alpha):g},N={n}]", margins, labels, SPECTRAL)


def check_final_L_s_order(alpha: float, n: int, trials: int, rng: TrialRng) -> CheckReport:
    """Trial left sides are monotone in ``s`` over the endpoints and midpoint of the interval.

    ``L_s`` increases with ``s``, so ``L_s**(alpha-1)`` and the left sides
    increase for ``alpha > 1`` and decrease for ``alpha < 1``.
    """
    alpha = float(alpha)
    lo, hi = final_L_s_interval(alpha)
    a = random_unit_vectors(rng, trials, n)
    grid = [lo, 0.5 * (lo + hi), hi]
    vals = [final_L_s_lhs(alpha, s, a) for s in grid]
    sign = 1.0 if alpha >= 1.0 else -1.0
    diffs = np.concatenate(
        [sign * (vals[k + 1] - vals[k]) / np.maximum(1.0, vals[k + 1]) for k in range(2)]
    )
    return _report(
        f"check_final_L_s_order[alpha={alpha:g},N={n}]",
        diffs,
        lambda k: f"s step {k // trials}, trial {k % trials}: {_fmt(diffs[k])}",
        TRIAL,
    )


# default instances, keyed by base name; each takes a seed


def _seeded_spaced(seed: int, count: int = 12) -> SpacedSequence:
    rng = TrialRng.derive(seed, "spaced-sequence")
    gaps = 0.5 + 2.0 * rng.uniforms(count - 1)
    return SpacedSequence.from_values(np.concatenate([[1.0], 1.0 + np.cumsum(gaps)]))


def _hardy_type(seed):
    cases = [("bennett7", 0.6, 2.0), ("bennett7", 1.0, 2.0), ("bennett7", 1.5, 2.0),
             ("bennett8", 0.6, 2.0), ("bennett8", 1.0, 2.0),
             ("bennett7", 1.0, 3.0), ("bennett8", 1.5, 3.0)]
    out = []
    for fam, alpha, p in cases:
        rng = TrialRng.derive(seed, f"hardy-type/{fam}/{alpha}/{p}")
        out.append(verify_hardy_type(fam, alpha, p, 256, 500, rng))
    return out


def _hadamard(seed):
    y, beta = 3.0, 2.0
    return [
        check_hadamard_midpoint(np.square, 0.0, 2.0, label="x^2"),
        check_hadamard_midpoint(lambda x: -np.log(x), 1.0, 3.0, label="-ln x"),
        check_hadamard_midpoint(np.exp, 0.0, 1.0, label="e^x"),
        check_hadamard_midpoint(lambda x: math.log(y) * y ** x, 0.0, beta, label="ln3*3^x"),
    ]


def _mv(seed):
    powers = SpacedSequence.from_values([2.0 ** k for k in range(16)], 1.0)
    out = [verify_mv_bound(SpacedSequence.integers(64), a, "r") for a in (1.0, 2.0, 3.0)]
    out.append(verify_mv_bound(powers, 2.0, "2^k"))
    out.append(verify_mv_bound(_seeded_spaced(seed), 1.5, "seeded"))
    return out


def _x_psd(seed):
    fib = SpacedSequence.from_values([1.0, 2.0, 3.0, 5.0, 8.0])
    rand = _seeded_spaced(seed)
    return [check_x_psd(s, a, lab) for a in (1.0, 1.5, 2.0, 3.0)
            for s, lab in ((fib, "1,2,3,5,8"), (rand, "seeded"))]


def _final_L_s(seed):
    out = []
    for alpha in (0.75, 1.0, 1.25, 1.5):
        lo, hi = final_L_s_interval(alpha)
        for s in sorted({lo, 0.5 * (lo + hi), hi}):
            rng = TrialRng.derive(seed, f"final-L-s/{alpha}/{s}")
            out.append(check_final_L_s(alpha, s, 128, 200, rng))
        if hi > lo:
            out.append(check_final_L_s_order(alpha, 128, 200, TrialRng.derive(seed, f"order/{alpha}")))
    return out


def _bennett_increasing(seed):
    cases = [("ones", WeightSequence.ones(256), 2.0, 256),
             ("k", WeightSequence.from_weights(np.arange(1, 257)), 2.0, 256),
             ("k^2", WeightSequence.from_weights(np.arange(1, 65) ** 2), 3.0, 64)]
    return [check_bennett_increasing(w, p, n, 200, TrialRng.derive(seed, f"increasing/{lab}/{p}"), lab)
            for lab, w, p, n in cases]


SUITES: dict[str, Callable[[int], list[CheckReport]]] = {
    "verify_hardy_type": _hardy_type,
    "check_gamma_le_m": lambda seed: [check_gamma_le_m(a, 200) for a in (0.6, 0.9, 1.2, 1.5)],
    "check_gamma_ge_maxinv": lambda seed: [
        check_gamma_ge_maxinv(WeightSequence.from_weights(1.0 / np.arange(1, 65)), 64, "1/k"),
        check_gamma_ge_maxinv(WeightSequence.from_weights(2.0 ** -np.arange(1, 65)), 64, "2^-k"),
        check_gamma_ge_maxinv(WeightSequence.ones(64), 64, "ones"),
    ],
    "check_majorization": lambda seed: [check_majorization(a, 100) for a in (0.51, 0.75, 1.0)],
    "check_scalar_14": lambda seed: (
        [check_scalar_14(a, form="t") for a in (1.0, 1.5, 2.0, 4.0, 8.0)]
        + [check_scalar_14(a, form="y") for a in (1.5, 2.0, 4.0, 8.0)]
    ),
    "check_hadamard_midpoint": _hadamard,
    "verify_mv_bound": _mv,
    "check_x_psd": _x_psd,
    "check_similarity_suite": lambda seed: [check_similarity_suite(a, 16) for a in (0.75, 1.0, 1.5)],
    "check_final_L_s": _final_L_s,
    "check_bennett_increasing": _bennett_increasing,
    "check_alzer": lambda seed: [check_alzer(50, (0.1, 0.5, 1.0, 2.0, 5.0, 10.0))],
    "check_log_mean_monotone": lambda seed: [
        check_log_mean_monotone(50, TrialRng.derive(seed, "log-mean"))
    ],
    "check_hardy_gram": lambda seed: [check_hardy_gram((4, 16, 64, 256, 1024))],
    "check_hilbert": lambda seed: [check_hilbert((8, 32, 128, 512))],
    "check_hardy_certificate": lambda seed: [check_hardy_certificate(n) for n in (10, 100, 1000)],
    "check_m_alpha_sandwich": lambda seed: [
        check_m_alpha_sandwich(a, 128) for a in (0.6, 0.75, 1.0, 1.25, 1.5)
    ],
}


def resolve_suites(names: Iterable[str]) -> list[str]:
    """Expand ``all`` and validate suite names, keeping registry order."""
    names = list(names)
    if not names or "all" in names:
        return list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise DomainError(f"unknown suite(s): {', '.join(unknown)}")
    return [n for n in SUITES if n in names]


def run_suites(names: Iterable[str], seed: int = 0, jobs: int = 1) -> list[CheckReport]:
    """Run the named suites (possibly concurrently); reports come back in registry order."""
    selected = resolve_suites(names)
    if jobs <= 1:
        results = [SUITES[n](seed) for n in selected]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda n: SUITES[n](seed), selected))
    return [r for group in results for r in group]


def reports_to_json(reports: Iterable[CheckReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


def format_table(reports: Iterable[CheckReport]) -> str:
    rows = []
    for r in reports:
        status = ("PASS" if r.passed else "FAIL") if r.asserted else "INFO"
        rows.append((status, r.suite, f"{r.worst_margin:.3e}", str(r.instances_tested), r.witness))
    header = ("status", "suite", "worst_margin", "n", "witness")
    widths = [max(len(x[i]) for x in rows + [header]) for i in range(4)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header[:4], widths)) + "  " + header[4]]
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row[:4], widths)) + "  " + row[4])
    return "\n".join(lines)
