"""State-vector simulation of the measurement and its optimal reversal."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..quantities import MeasurementSpec
from .montecarlo import McEstimate, PureState, _check_n, _ratio, _se, haar_probabilities


@dataclass(frozen=True)
class ReversalOutcome:
    p_outcome: float
    recovery_prob: float
    recovered_overlap: float


def _check_invertible(spec):
    if not spec.invertible:
        raise ValueError(f"operator not invertible: need k+l == d, got k+l={spec.k + spec.l}, d={spec.d}")
    if spec.lam == 0.0:
        raise ValueError("operator not invertible: lambda = 0 has no bounded inverse")


def measurement_operator(spec: MeasurementSpec) -> np.ndarray:
    return np.diag(np.asarray(spec.diagonal(), dtype=complex))


def reversing_measurement(spec: MeasurementSpec):
    """``(R0, R1)`` with ``R0 ∝ M^-1`` as large as allowed and ``R0^dag R0 + R1^dag R1 = 1``."""
    _check_invertible(spec)
    m = measurement_operator(spec)
    lmin = float(np.linalg.eigvalsh(m.conj().T @ m).min())
    r0 = math.sqrt(lmin) * np.linalg.inv(m)
    rest = np.eye(spec.d) - r0.conj().T @ r0
    w, v = np.linalg.eigh(rest)
    r1 = v @ np.diag(np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return r0, r1


def simulate_reversal(spec: MeasurementSpec, state: PureState) -> ReversalOutcome:
    """Measure ``state``, then apply the optimal reversing measurement.

    Returns the outcome probability, the probability that the reversal hits
    its preferred outcome, and the fidelity of the recovered state.
    """
    _check_invertible(spec)
    if state.dim != spec.d:
        raise ValueError(f"state dimension {state.dim} does not match d={spec.d}")
    psi = state.amplitudes
    m = measurement_operator(spec)
    post = m @ psi
    p = float(np.vdot(post, post).real)
    post = post / math.sqrt(p)
    r0, _ = reversing_measurement(spec)
    back = r0 @ post
    prob = float(np.vdot(back, back).real)
    back = back / math.sqrt(prob)
    overlap = float(abs(np.vdot(psi, back)) ** 2)
    return ReversalOutcome(p, prob, overlap)


def mc_recovery(spec: MeasurementSpec, n_samples: int, seed: int, workers: int = 1) -> McEstimate:
    """Posterior-weighted average recovery probability over Haar states."""
    _check_invertible(spec)
    _check_n(n_samples)
    probs = haar_probabilities(spec.d, n_samples, seed, workers)
    p, rec = kernels.reversal(probs, np.asarray(spec.diagonal()))
    r, z = _ratio(p * rec, p)
    return McEstimate(float(r), _se(z), n_samples)
