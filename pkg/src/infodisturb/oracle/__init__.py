"""Independent checks: Monte Carlo, state-vector reversal, finite differences, exact identities."""
from .finite_diff import FiniteDifferenceError, finite_diff, one_sided_derivative
from .identities import IDENTITIES, check_identity, laurent_J, regime_consistent, taylor_coefficients_a
from .montecarlo import (
    MIN_SAMPLES,
    McEstimate,
    McQuantities,
    PureState,
    haar_amplitudes,
    haar_probabilities,
    jackknife_std_errors,
    mc_estimate_many,
    mc_estimate_quantities,
    sample_haar_state,
    substream,
)
from .reversal import ReversalOutcome, mc_recovery, reversing_measurement, simulate_reversal

__all__ = [
    "FiniteDifferenceError", "finite_diff", "one_sided_derivative",
    "IDENTITIES", "check_identity", "laurent_J", "regime_consistent", "taylor_coefficients_a",
    "MIN_SAMPLES", "McEstimate", "McQuantities", "PureState", "haar_amplitudes",
    "haar_probabilities", "jackknife_std_errors", "mc_estimate_many", "mc_estimate_quantities",
    "sample_haar_state", "substream",
    "ReversalOutcome", "mc_recovery", "reversing_measurement", "simulate_reversal",
]
