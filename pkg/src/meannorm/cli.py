"""``meannorm`` command line: norm, cert, verify, sweep, dump.

Exit codes: 0 all checks pass, 1 a mathematical bound was violated,
2 usage or validation error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import verify
from .certificates import hardy_certificate, m_alpha_certificate
from .errors import DomainError
from .matrices import (
    INF,
    MAX_DIMENSION,
    SpacedSequence,
    WeightSequence,
    _inverse_power_mean,
    _check_order,
    format_csv,
    generalized_kernel,
    hilbert_matrix,
    m_alpha_matrix,
    mv_skew_matrix,
    n_alpha_matrix,
    weighted_mean_matrix,
)
from .spectral import IterationConfig, max_singular_value, operator_norm_2, operator_norm_p, spectral_norm_sym

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

FAMILIES = ("cesaro", "bennett7", "bennett8", "m_alpha", "n_alpha", "hilbert", "kernel_r", "mv_skew")
SWEEP_HEADER = "family,alpha,N,p,norm_estimate,analytic_bound,ratio,iterations,converged"
BOUND_SLACK = 1e-9
DEFAULT_N = 256


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Problem:
    """One (family, alpha, N, p) instance ready to evaluate."""

    family: str
    alpha: float
    n: int
    p: float = 2.0
    r: object = INF
    lam: tuple | None = None


@dataclass
class Outcome:
    problem: Problem
    value: float
    iterations: int
    residual: float
    converged: bool
    bound: float | None
    asserted: bool

    @property
    def ratio(self) -> float | None:
        return None if self.bound is None else self.value / self.bound

    @property
    def violated(self) -> bool:
        if self.bound is None or not self.asserted:
            return False
        return self.value > self.bound + BOUND_SLACK * max(1.0, abs(self.bound))

    def to_dict(self) -> dict:
        pr = self.problem
        return {
            "family": pr.family,
            "alpha": pr.alpha,
            "N": pr.n,
            "p": pr.p,
            "value": self.value,
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
            "analytic_bound": self.bound,
            "ratio": self.ratio,
            "bound_asserted": self.asserted,
        }


def kernel_constant(r, alpha: float) -> float:
    """``int_0^inf K(1, t) t**-1/2 dt`` for the homogeneous kernel of order ``r``."""
    r = _check_order(r)

    def f(t):
        x = np.array([t ** alpha])
        y = np.array([t ** (1.0 - alpha)])
        return float(_inverse_power_mean(x, y, r)[0]) / math.sqrt(t)

    head = quad(f, 0.0, 1.0, limit=200)[0]
    tail = quad(f, 1.0, math.inf, limit=200)[0]
    return head + tail


def _lambda_values(problem: Problem) -> SpacedSequence:
    if problem.lam is None:
        return SpacedSequence.integers(problem.n)
    return SpacedSequence.from_values(problem.lam)


def validate(problem: Problem) -> None:
    """Family/parameter compatibility, raised as :class:`UsageError`."""
    fam, a, n, p = problem.family, problem.alpha, problem.n, problem.p
    if fam not in FAMILIES:
        raise UsageError(f"unknown family {fam!r}; choose from {', '.join(FAMILIES)}")
    if not 1 <= n <= MAX_DIMENSION:
        raise UsageError(f"N must lie in [1, {MAX_DIMENSION}], got {n}")
    if not (math.isfinite(p) and p > 1.0):
        raise UsageError(f"p must be a finite number > 1, got {p}")
    if not math.isfinite(a):
        raise UsageError(f"alpha must be finite, got {a}")
    if fam in ("m_alpha", "n_alpha", "hilbert", "kernel_r", "mv_skew") and p != 2.0:
        raise UsageError(f"family {fam} is only defined for p = 2")
    if fam in ("bennett7", "bennett8") and not (a > 0 and a * p > 1):
        raise UsageError(f"{fam} needs alpha > 0 and alpha p > 1")
    if fam in ("m_alpha", "n_alpha") and not a > 0.5:
        raise UsageError(f"{fam} needs alpha > 1/2")
    if fam == "mv_skew" and not a >= 1.0:
        raise UsageError("mv_skew needs alpha >= 1")
    if fam == "kernel_r":
        if a == 0.5:
            raise UsageError("kernel_r is unbounded at alpha = 1/2")
        try:
            _check_order(problem.r)
        except DomainError as exc:
            raise UsageError(str(exc)) from None


def build_matrix(problem: Problem) -> np.ndarray:
    fam, a, n = problem.family, problem.alpha, problem.n
    if fam == "cesaro":
        return weighted_mean_matrix(WeightSequence.ones(n))
    if fam == "bennett7":
        return weighted_mean_matrix(WeightSequence.bennett7(n, a))
    if fam == "bennett8":
        return weighted_mean_matrix(WeightSequence.bennett8(n, a))
    if fam == "m_alpha":
        return m_alpha_matrix(a, n)
    if fam == "n_alpha":
        return n_alpha_matrix(a, n)
    if fam == "hilbert":
        return hilbert_matrix(n)
    if fam == "kernel_r":
        return generalized_kernel(problem.r, a, n)
    if fam == "mv_skew":
        return mv_skew_matrix(_lambda_values(problem), a)
    raise UsageError(f"unknown family {fam!r}")


def analytic_bound(problem: Problem):
    """(bound, asserted) in the units of the reported value, or (None, False)."""
    fam, a, p = problem.family, problem.alpha, problem.p
    if fam == "cesaro":
        return p / (p - 1.0), True
    if fam in ("bennett7", "bennett8"):
        open_case = fam == "bennett8" and verify.bennett8_is_open(a, p)
        return a * p / (a * p - 1.0), not open_case
    if fam in ("m_alpha", "n_alpha"):
        # eigenvalue units; the constant is proved for 1/2 < alpha <= 3/2
        return a * a / (a - 0.5) ** 2, a <= 1.5
    if fam == "hilbert":
        return math.pi, True
    if fam == "kernel_r":
        # the integral majorises the Schur row sums only when K(1, t) decreases
        return kernel_constant(problem.r, a), 0.0 < a <= 1.0
    if fam == "mv_skew":
        return math.pi / (a * _lambda_values(problem).delta), True
    return None, False


def evaluate(problem: Problem, cfg: IterationConfig) -> Outcome:
    validate(problem)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        m = build_matrix(problem)
    if problem.family in ("m_alpha", "n_alpha", "hilbert", "kernel_r"):
        est = spectral_norm_sym(m, cfg)
    elif problem.family == "mv_skew":
        est = max_singular_value(m, cfg)
    elif problem.p == 2.0:
        est = operator_norm_2(m, cfg)
    else:
        est = operator_norm_p(m, problem.p, cfg)
    bound, asserted = analytic_bound(problem)
    return Outcome(problem, est.value, est.iterations, est.residual, est.converged, bound, asserted)


# argument helpers


def _read_lambda_file(path: str) -> tuple:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.split("#", 1)[0].strip() for ln in fh]
    except OSError as exc:
        raise UsageError(f"cannot read lambda file: {exc}") from None
    try:
        return tuple(float(x) for x in lines if x)
    except ValueError as exc:
        raise UsageError(f"bad value in lambda file: {exc}") from None


def _parse_r(text: str):
    if text.strip().lower() in ("inf", "infinity"):
        return INF
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"--r must be a number >= 1 or 'inf', got {text!r}") from None


def _config(args) -> IterationConfig:
    try:
        return IterationConfig(tolerance=args.tol, max_iterations=args.max_iter)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _default_jobs() -> int:
    raw = os.environ.get("MEANNORM_JOBS")
    if raw is None or not raw.strip():
        return 1
    try:
        jobs = int(raw)
    except ValueError:
        raise UsageError(f"MEANNORM_JOBS must be a positive integer, got {raw!r}") from None
    if jobs < 1:
        raise UsageError(f"MEANNORM_JOBS must be a positive integer, got {raw!r}")
    return jobs


def atomic_write(path: str, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".meannorm-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: str | None) -> None:
    if out:
        atomic_write(out, text)
    else:
        sys.stdout.write(text)


def _g(x) -> str:
    return "" if x is None else format(float(x), ".17g")


# subcommands


def cmd_norm(args) -> int:
    problem = Problem(
        family=args.family,
        alpha=1.0 if args.alpha is None else args.alpha,
        n=args.n,
        p=args.p,
        r=_parse_r(args.r),
        lam=_read_lambda_file(args.lambda_file) if args.lambda_file else None,
    )
    if problem.lam is not None:
        problem = Problem(problem.family, problem.alpha, len(problem.lam), problem.p, problem.r, problem.lam)
    out = evaluate(problem, _config(args))
    if args.json:
        print(json.dumps(out.to_dict()))
    else:
        for key, val in out.to_dict().items():
            print(f"{key}: {val}")
    return EXIT_VIOLATION if out.violated else EXIT_OK


def cmd_cert(args) -> int:
    try:
        if args.family == "hardy":
            cert = hardy_certificate(args.n)
        else:
            alpha = 1.0 if args.alpha is None else args.alpha
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                cert = m_alpha_certificate(alpha, args.n)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        print(cert.to_json())
    else:
        for key, val in cert.to_dict().items():
            print(f"{key}: {val}")
        if cert.violations:
            print(f"violating rows: {cert.violations}")
    return EXIT_VIOLATION if cert.violated else EXIT_OK


def cmd_verify(args) -> int:
    names = [n for chunk in args.suite for n in chunk.split(",") if n]
    try:
        verify.resolve_suites(names)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    reports = verify.run_suites(names, seed=args.seed, jobs=jobs)
    table = verify.format_table(reports)
    if args.json:
        print(verify.reports_to_json(reports))
        print(table, file=sys.stderr)
    else:
        print(table)
    failed = [r for r in reports if not r.ok]
    if not args.json:
        info = sum(1 for r in reports if not r.asserted)
        line = f"{len(reports) - len(failed) - info}/{len(reports) - info} asserted reports pass"
        print(line + (f", {info} informational" if info else ""))
    return EXIT_VIOLATION if failed else EXIT_OK


@dataclass
class SweepSpec:
    family: str
    alpha_min: float
    alpha_max: float
    alpha_step: float
    n_list: list = field(default_factory=list)
    p: float = 2.0
    seed: int = 0
    out: str | None = None
    r: object = INF
    lam: tuple | None = None

    def alphas(self) -> list[float]:
        if not self.alpha_step > 0:
            raise UsageError(f"alpha step must be positive, got {self.alpha_step}")
        if self.alpha_max < self.alpha_min:
            raise UsageError("alpha max is below alpha min")
        count = int(math.floor((self.alpha_max - self.alpha_min) / self.alpha_step + 1e-9)) + 1
        # rounding keeps 0.1 steps on the decimal grid
        return [round(self.alpha_min + k * self.alpha_step, 12) for k in range(count)]

    def problems(self) -> list[Problem]:
        if not self.n_list:
            raise UsageError("the N list is empty")
        if self.lam is not None and self.family != "mv_skew":
            raise UsageError("--lambda-file only applies to mv_skew")
        probs = [Problem(self.family, a, n, self.p, self.r, self.lam)
                 for a in self.alphas() for n in sorted(self.n_list)]
        for pr in probs:
            validate(pr)
        return probs


CONFIG_KEYS = {
    "family": str,
    "alpha_min": float,
    "alpha_max": float,
    "alpha_step": float,
    "n": str,
    "p": float,
    "seed": int,
    "out": str,
    "r": str,
    "tol": float,
    "max_iter": int,
    "jobs": int,
    "lambda_file": str,
}


def parse_config(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        try:
            out[key] = CONFIG_KEYS[key](value)
        except ValueError:
            raise UsageError(f"config line {lineno}: bad value for {key}: {value!r}") from None
    return out


def _parse_n_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"bad N list {text!r}") from None


def _sweep_spec(args) -> tuple[SweepSpec, IterationConfig, int]:
    conf = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                conf = parse_config(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None

    def pick(name, default=None):
        val = getattr(args, name, None)
        return val if val is not None else conf.get(name, default)

    family = pick("family")
    if family is None:
        raise UsageError("sweep needs a family (--family or config)")
    a_min = pick("alpha_min", 1.0)
    spec = SweepSpec(
        family=family,
        alpha_min=a_min,
        alpha_max=pick("alpha_max", a_min),
        alpha_step=pick("alpha_step", 0.1),
        n_list=_parse_n_list(pick("n", str(DEFAULT_N))),
        p=pick("p", 2.0),
        seed=pick("seed", 0),
        out=pick("out"),
        r=_parse_r(pick("r", "inf")),
    )
    lam_file = pick("lambda_file")
    if lam_file:
        spec.lam = _read_lambda_file(lam_file)
    try:
        cfg = IterationConfig(tolerance=pick("tol", 1e-12), max_iterations=pick("max_iter", 100_000))
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    jobs = pick("jobs")
    jobs = _default_jobs() if jobs is None else jobs
    if jobs < 1:
        raise UsageError("--jobs must be positive")
    return spec, cfg, jobs


def sweep_rows(spec: SweepSpec, cfg: IterationConfig, jobs: int = 1) -> list[Outcome]:
    problems = spec.problems()
    if spec.lam is not None:
        problems = [Problem(p.family, p.alpha, len(spec.lam), p.p, p.r, p.lam) for p in problems]
    if jobs <= 1:
        return [evaluate(p, cfg) for p in problems]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        # map preserves submission order, whatever the completion order
        return list(pool.map(lambda p: evaluate(p, cfg), problems))


def format_sweep(rows: list[Outcome]) -> str:
    lines = [SWEEP_HEADER]
    for o in rows:
        pr = o.problem
        lines.append(",".join([
            pr.family, _g(pr.alpha), str(pr.n), _g(pr.p), _g(o.value), _g(o.bound),
            _g(o.ratio), str(o.iterations), "true" if o.converged else "false",
        ]))
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    spec, cfg, jobs = _sweep_spec(args)
    rows = sweep_rows(spec, cfg, jobs)
    _emit(format_sweep(rows), spec.out)
    return EXIT_VIOLATION if any(o.violated for o in rows) else EXIT_OK


def cmd_dump(args) -> int:
    problem = Problem(
        family=args.family,
        alpha=1.0 if args.alpha is None else args.alpha,
        n=args.n,
        p=2.0,
        r=_parse_r(args.r),
        lam=_read_lambda_file(args.lambda_file) if args.lambda_file else None,
    )
    if problem.lam is not None:
        problem = Problem(problem.family, problem.alpha, len(problem.lam), 2.0, problem.r, problem.lam)
    validate(problem)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        matrix = build_matrix(problem)
    _emit(format_csv(matrix), args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="meannorm", description="l2 norms of weighted mean matrices")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def iteration_flags(p):
        p.add_argument("--tol", type=float, default=1e-12)
        p.add_argument("--max-iter", type=int, default=100_000)

    p = sub.add_parser("norm", help="estimate an operator norm")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--alpha", type=float)
    p.add_argument("--n", type=int, default=DEFAULT_N)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--r", default="inf", help="kernel order for kernel_r (number >= 1 or 'inf')")
    p.add_argument("--lambda-file", help="mv_skew sequence, one value per line")
    p.add_argument("--json", action="store_true")
    iteration_flags(p)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("cert", help="evaluate a Schur-test certificate")
    p.add_argument("--family", required=True, choices=("hardy", "m_alpha"))
    p.add_argument("--alpha", type=float)
    p.add_argument("--n", type=int, default=DEFAULT_N)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cert)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", nargs="+", default=["all"], help="'all' or suite names")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="norm estimates over an (alpha, N) grid as CSV")
    p.add_argument("--config", help="file of 'key = value' lines")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--alpha-min", type=float)
    p.add_argument("--alpha-max", type=float)
    p.add_argument("--alpha-step", type=float)
    p.add_argument("--n", help="comma-separated N values")
    p.add_argument("--p", type=float)
    p.add_argument("--r")
    p.add_argument("--lambda-file")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--out")
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iter", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("dump", help="write a matrix as CSV")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--alpha", type=float)
    p.add_argument("--n", type=int, default=DEFAULT_N)
    p.add_argument("--r", default="inf")
    p.add_argument("--lambda-file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dump)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"meannorm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
