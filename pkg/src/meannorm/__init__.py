"""Operator norms of weighted mean matrices: constructions, estimates, certificates, checks."""
from ._backend import BACKEND
from .certificates import SchurCertificate, hardy_certificate, m_alpha_certificate, schur_test
from .errors import ConvergenceError, DomainError, SizeLimitError
from .matrices import (
    INF,
    SpacedSequence,
    WeightSequence,
    copson_L_matrix,
    generalized_kernel,
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
from .means import alpha_weights, log_mean_general, power_sum_ratio
from .rng import TrialRng
from .spectral import (
    IterationConfig,
    NormEstimate,
    eig_sym_all,
    is_positive_semidefinite,
    max_singular_value,
    operator_norm_2,
    operator_norm_p,
    spectral_norm_sym,
)
from .verify import CheckReport, run_suites

__version__ = "0.1.0"
