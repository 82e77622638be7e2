"""Exact truncated-series engine and identity verifiers."""

from .branches import (
    BranchCoeffs,
    coeffs_b,
    coeffs_c,
    oracle_b,
    oracle_c,
    series_K,
    series_u,
    series_v,
    series_w0,
    stirling_coeffs,
    verify_K_functional,
    verify_K_integral,
    verify_b_family,
    verify_c_family,
    verify_w0,
    w0_by_reversion,
)
from .exact import Rational, bernoulli, double_factorial, factorial, rational, rational_str
from .flows import (
    LAW_EVEN,
    LAW_STANDARD,
    FlowCoeffs,
    flow_apply,
    flow_solve,
    series_E,
    series_F,
    series_F_H_E,
    series_H,
    series_f,
    series_f_plus,
    series_h,
    series_h_y_fplus,
    series_mu,
    series_theta,
    series_y,
    verify_flow_laws,
    verify_fplus_functional,
    verify_iden,
    verify_lemma_yk,
    verify_nz_identity,
    verify_prop_hy,
)
from .report import FAIL, PASS, SKIPPED, Mismatch, VerificationReport
from .series import (
    ASCENDING,
    DESCENDING,
    DirectionMismatchError,
    GradedSeries,
    LeadingTermError,
    PoleError,
    SeriesError,
    SubstitutionError,
    TruncationError,
    cosh,
    coth,
    csch,
    hyperbolic,
    sinh,
)
from .virasoro import (
    LinearOp,
    QPoly,
    check_grading,
    check_heisenberg_commutator,
    check_virasoro_commutator,
    commutator,
    corpus_monomials,
    default_corpus,
    exp_op_apply,
    kw_residual,
    load_fk_fixture,
    make_L,
    make_alpha,
    make_d,
    verify_factorization,
    verify_kw_constraints,
)

__all__ = [
    "ASCENDING",
    "DESCENDING",
    "BranchCoeffs",
    "DirectionMismatchError",
    "FAIL",
    "FlowCoeffs",
    "GradedSeries",
    "LAW_EVEN",
    "LAW_STANDARD",
    "LeadingTermError",
    "LinearOp",
    "Mismatch",
    "PASS",
    "PoleError",
    "QPoly",
    "Rational",
    "SKIPPED",
    "SeriesError",
    "SubstitutionError",
    "TruncationError",
    "VerificationReport",
    "bernoulli",
    "check_grading",
    "check_heisenberg_commutator",
    "check_virasoro_commutator",
    "coeffs_b",
    "coeffs_c",
    "commutator",
    "corpus_monomials",
    "cosh",
    "coth",
    "csch",
    "default_corpus",
    "double_factorial",
    "exp_op_apply",
    "factorial",
    "flow_apply",
    "flow_solve",
    "hyperbolic",
    "kw_residual",
    "load_fk_fixture",
    "make_L",
    "make_alpha",
    "make_d",
    "oracle_b",
    "oracle_c",
    "rational",
    "rational_str",
    "series_E",
    "series_F",
    "series_F_H_E",
    "series_H",
    "series_K",
    "series_f",
    "series_f_plus",
    "series_h",
    "series_h_y_fplus",
    "series_mu",
    "series_theta",
    "series_u",
    "series_v",
    "series_w0",
    "series_y",
    "sinh",
    "stirling_coeffs",
    "verify_K_functional",
    "verify_K_integral",
    "verify_b_family",
    "verify_c_family",
    "verify_factorization",
    "verify_flow_laws",
    "verify_fplus_functional",
    "verify_iden",
    "verify_kw_constraints",
    "verify_lemma_yk",
    "verify_nz_identity",
    "verify_prop_hy",
    "verify_w0",
    "w0_by_reversion",
]
