"""Achievable secure net bit rates for a basis-encoded direct-communication
model under symmetric individual attacks, with Monte Carlo session checks."""

from ._version import __version__
from .attack import (
    AttackSpec,
    feasible_lambdas,
    lambdas,
    sample_pauli,
    sample_pauli_array,
    t_interval,
)
from .bits import (
    BitString,
    ProbDist,
    binary_entropy,
    binomial,
    hamming_weight,
    shannon_entropy,
)
from .disclosure import (
    Announcement,
    DisclosureScheme,
    ExcessBits,
    FullOutcome,
    Parity,
    Weight,
    all_announcements,
    make_scheme,
)
from .operators import (
    HermitianOperator,
    assemble_block_diagonal,
    eig_hermitian,
    entropy_from_eigs,
    von_neumann_entropy,
)
from .rates import (
    CSV_HEADER,
    ModelConfig,
    RateResult,
    achievable_rate,
    announcement_classes,
    chi_B,
    chi_E,
    csv_row,
    engine_settings_comment,
    format_csv_float,
    p_bob_given_alice,
    rho_E,
    sweep,
)
from .simulate import (
    QberEstimate,
    SessionConfig,
    SessionReport,
    analytic_decode_error,
    ensemble_imbalance_stats,
    estimate_qber,
    report_to_kv,
    run_cdm06,
    run_model,
    run_session,
    simulate_epr_round,
)

__all__ = [
    "__version__",
    "AttackSpec",
    "feasible_lambdas",
    "lambdas",
    "sample_pauli",
    "sample_pauli_array",
    "t_interval",
    "BitString",
    "ProbDist",
    "binary_entropy",
    "binomial",
    "hamming_weight",
    "shannon_entropy",
    "Announcement",
    "DisclosureScheme",
    "ExcessBits",
    "FullOutcome",
    "Parity",
    "Weight",
    "all_announcements",
    "make_scheme",
    "HermitianOperator",
    "assemble_block_diagonal",
    "eig_hermitian",
    "entropy_from_eigs",
    "von_neumann_entropy",
    "CSV_HEADER",
    "ModelConfig",
    "RateResult",
    "achievable_rate",
    "announcement_classes",
    "chi_B",
    "chi_E",
    "csv_row",
    "engine_settings_comment",
    "format_csv_float",
    "p_bob_given_alice",
    "rho_E",
    "sweep",
    "QberEstimate",
    "SessionConfig",
    "SessionReport",
    "analytic_decode_error",
    "ensemble_imbalance_stats",
    "estimate_qber",
    "report_to_kv",
    "run_cdm06",
    "run_model",
    "run_session",
    "simulate_epr_round",
]
