"""Growth rates of random full-history linear recursions.

Simulation (exact integer, renormalized float, normalized chain), growth
exponent estimation with confidence intervals, and numerical verification
of the contraction constants, tail bounds, and limit laws that govern
these recursions.
"""

__version__ = "0.1.0"

from .bounds import AlphaResult, LoResult, alpha_bound, lo_max_atom, moment_tail_bound, verify_alpha_mc
from .chain import (
    ChainRun,
    NormalizedState,
    WeightParameter,
    apply_step,
    initial_state,
    run_chain,
    weighted_norm,
)
from .estimators import (
    GrowthEstimate,
    Method,
    RateComparison,
    compare_rates,
    gamma_from_increments,
    gamma_from_last_coordinate,
    pool_estimates,
)
from .gaussian import CouplingTrace, EtaResult, contraction_f, couple, eta, expected_f, gaussian_log_moments
from .laws import BERNOULLI, GAUSSIAN, CoefficientLaw, LawKind, RngStream, law_from_name, law_moments, sample, sample_row
from .recursion import ExactTrajectory, FloatTrajectory, run_exact, run_exact_float, run_fibonacci, run_vt

__all__ = [
    "__version__",
    "AlphaResult",
    "LoResult",
    "alpha_bound",
    "lo_max_atom",
    "moment_tail_bound",
    "verify_alpha_mc",
    "ChainRun",
    "NormalizedState",
    "WeightParameter",
    "apply_step",
    "initial_state",
    "run_chain",
    "weighted_norm",
    "GrowthEstimate",
    "Method",
    "RateComparison",
    "compare_rates",
    "gamma_from_increments",
    "gamma_from_last_coordinate",
    "pool_estimates",
    "CouplingTrace",
    "EtaResult",
    "contraction_f",
    "couple",
    "eta",
    "expected_f",
    "gaussian_log_moments",
    "BERNOULLI",
    "GAUSSIAN",
    "CoefficientLaw",
    "LawKind",
    "RngStream",
    "law_from_name",
    "law_moments",
    "sample",
    "sample_row",
    "ExactTrajectory",
    "FloatTrajectory",
    "run_exact",
    "run_exact_float",
    "run_fibonacci",
    "run_vt",
]
