import math
import os
import subprocess
import sys

import mpmath as mp
import numpy as np
import pytest

from infodisturb import derivatives as dv
from infodisturb import kernels
from infodisturb._accel import HAVE_NUMBA
from infodisturb.oracle import (
    FiniteDifferenceError,
    McEstimate,
    PureState,
    check_identity,
    finite_diff,
    haar_probabilities,
    jackknife_std_errors,
    mc_estimate_many,
    mc_estimate_quantities,
    mc_recovery,
    reversing_measurement,
    sample_haar_state,
    simulate_reversal,
    substream,
)
from infodisturb.oracle.montecarlo import estimates_from_features
from infodisturb.quantities import MeasurementSpec, eval_G, eval_J, eval_R, projective_point


def S(*args):
    return MeasurementSpec(*args)


# -- Haar sampling -------------------------------------------------------------------

def test_haar_state_reproducible_and_normalized():
    a = sample_haar_state(2, substream(7))
    b = sample_haar_state(2, substream(7))
    assert np.array_equal(a.amplitudes, b.amplitudes)
    assert np.linalg.norm(a.amplitudes) == pytest.approx(1.0, abs=1e-15)


def test_pure_state_rejects_unnormalized():
    with pytest.raises(ValueError):
        PureState(np.array([1.0, 1.0], dtype=complex))


@pytest.mark.parametrize("d", [2, 3, 5])
def test_haar_moments(d):
    p = haar_probabilities(d, 1_000_000, seed=11)[:, 0]
    se1 = p.std(ddof=1) / math.sqrt(p.size)
    assert abs(p.mean() - 1 / d) <= 3 * se1
    p2 = p ** 2
    se2 = p2.std(ddof=1) / math.sqrt(p.size)
    assert abs(p2.mean() - 2 / (d * (d + 1))) <= 3 * se2


def test_fourth_moment_by_bloch_quadrature():
    # d = 2: |<1|psi>|**2 = cos(theta/2)**2 with measure sin(theta)/2 on the sphere
    val = mp.quad(lambda t: mp.cos(t / 2) ** 4 * mp.sin(t) / 2, [0, mp.pi])
    assert float(val) == pytest.approx(2 / (2 * 3), rel=1e-15)


def test_worker_determinism():
    a = haar_probabilities(3, 50_000, seed=5, workers=3)
    b = haar_probabilities(3, 50_000, seed=5, workers=3)
    assert np.array_equal(a, b)
    assert a.shape == (50_000, 3)
    c = haar_probabilities(3, 50_000, seed=5, workers=1)
    assert np.array_equal(c, haar_probabilities(3, 50_000, seed=5))


# -- Monte Carlo quantities -----------------------------------------------------------

def test_mc_spot_checks():
    est = mc_estimate_quantities(S(4, 1, 3, 0.5), 1_000_000, seed=3)
    assert est.info_estimation.agrees(0.314285714285714285)
    ident = mc_estimate_quantities(S(4, 1, 3, 1.0), 1_000_000, seed=3)
    assert ident.fidelity.agrees(1.0) and ident.info_shannon.agrees(0.0)
    for l in (1, 2, 3):
        rank1 = mc_estimate_quantities(S(4, 1, l, 0.0), 1_000_000, seed=3)
        assert rank1.info_shannon.agrees(projective_point(4, 1).info_shannon)


def test_mc_many_matches_single():
    specs = [S(3, 1, 1, 0.5), S(3, 1, 2, 0.25)]
    many = mc_estimate_many(specs, 20_000, seed=9)
    for spec, est in zip(specs, many):
        single = mc_estimate_quantities(spec, 20_000, seed=9)
        assert single == est
    with pytest.raises(ValueError, match="single dimension"):
        mc_estimate_many([S(3, 1, 1, 0.5), S(4, 1, 1, 0.5)], 20_000, seed=9)


def test_mc_rejects_small_samples():
    with pytest.raises(ValueError, match="below minimum"):
        mc_estimate_quantities(S(3, 1, 1, 0.5), 1000, seed=1)


def test_mc_estimates_deterministic():
    a = mc_estimate_quantities(S(5, 2, 2, 0.3), 30_000, seed=21)
    b = mc_estimate_quantities(S(5, 2, 2, 0.3), 30_000, seed=21)
    assert a == b


def test_mc_estimate_z_score():
    e = McEstimate(1.0, 0.1, 10_000)
    assert e.z_score(1.25) == pytest.approx(2.5)
    assert e.agrees(1.25) and not e.agrees(1.35)
    zero = McEstimate(1.0, 0.0, 10_000)
    assert zero.agrees(1.0 + 1e-13)


def test_jackknife_matches_delta_method():
    spec = S(4, 2, 1, 0.5)
    probs = haar_probabilities(4, 200_000, seed=8)
    feats = kernels.mc_features(probs, np.asarray(spec.diagonal()))
    delta = estimates_from_features(feats, 0.0)
    jack = jackknife_std_errors(feats, 0.0)
    for a, b in zip(list(delta.as_dict().values())[:3], list(jack.as_dict().values())[:3]):
        assert a.mean == b.mean
        assert b.std_error == pytest.approx(a.std_error, rel=0.25)


# -- kernels ---------------------------------------------------------------------------

def test_numba_and_numpy_kernels_agree():
    probs = haar_probabilities(5, 20_000, seed=2)
    diag = np.asarray(S(5, 2, 2, 0.37).diagonal())
    assert np.allclose(kernels.mc_features_numba(probs, diag), kernels.mc_features_numpy(probs, diag),
                       rtol=1e-12, atol=1e-15)
    diag = np.asarray(S(5, 2, 3, 0.37).diagonal())
    for a, b in zip(kernels.reversal_numba(probs, diag), kernels.reversal_numpy(probs, diag)):
        assert np.allclose(a, b, rtol=1e-12, atol=1e-15)


def test_zero_probability_rows_are_safe():
    probs = np.array([[0.0, 0.0, 1.0], [0.5, 0.5, 0.0]])
    diag = np.array([1.0, 0.5, 0.0])
    for fn in (kernels.mc_features_numpy, kernels.mc_features_numba):
        out = fn(probs, diag)
        assert np.all(np.isfinite(out))
        assert out[0, 1] == 0.0


def test_env_flag_selects_numpy_path():
    code = "import infodisturb._accel as a, infodisturb.kernels as k; print(a.HAVE_NUMBA, k.mc_features is k.mc_features_numpy)"
    env = dict(os.environ, INFODISTURB_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "True"]


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba disabled")
def test_default_path_uses_numba():
    assert kernels.mc_features is kernels.mc_features_numba


# -- reversal -------------------------------------------------------------------------

def test_simulate_reversal_examples():
    spec = S(4, 1, 3, 0.5)
    e0 = np.zeros(4, dtype=complex)
    e0[0] = 1
    out = simulate_reversal(spec, PureState(e0))
    assert out.p_outcome == pytest.approx(1.0) and out.recovery_prob == pytest.approx(0.25)
    rng = substream(4)
    for _ in range(20):
        psi = sample_haar_state(4, rng)
        ident = simulate_reversal(spec.with_lam(1.0), psi)
        assert ident.p_outcome == pytest.approx(1.0) and ident.recovery_prob == pytest.approx(1.0)
        assert simulate_reversal(spec, psi).recovered_overlap == pytest.approx(1.0, abs=1e-12)


def test_reversing_measurement_is_complete():
    r0, r1 = reversing_measurement(S(4, 2, 2, 0.3))
    total = r0.conj().T @ r0 + r1.conj().T @ r1
    assert np.allclose(total, np.eye(4), atol=1e-14)


def test_reversal_rejects_noninvertible():
    with pytest.raises(ValueError, match="not invertible"):
        reversing_measurement(S(4, 1, 2, 0.5))
    with pytest.raises(ValueError, match="not invertible"):
        reversing_measurement(S(4, 1, 3, 0.0))


def test_mc_recovery_matches_eval_R():
    spec = S(3, 1, 2, 0.6)
    est = mc_recovery(spec, 300_000, seed=12)
    assert est.agrees(eval_R(spec))


# -- finite differences ---------------------------------------------------------------

def test_finite_diff_examples():
    spec = S(4, 1, 3, 0.5)
    g = lambda x: eval_G(spec.with_lam(math.sqrt(x)))
    assert finite_diff(g, 0.25, 1) == pytest.approx(-(3 / 5) / 1.75 ** 2, abs=1e-8)
    assert finite_diff(lambda x: 3.0, 0.4, 1) == 0.0
    assert finite_diff(lambda x: 3.0, 0.4, 2) == 0.0
    j = lambda x: eval_J(1, 3, math.sqrt(x))
    assert finite_diff(j, 0.25, 1) == pytest.approx(dv.dJ_dlam2(1, 3, 0.5), rel=1e-6)


def test_finite_diff_errors():
    with pytest.raises(ValueError):
        finite_diff(math.sin, 0.5, order=3)
    with pytest.raises(ValueError):
        finite_diff(math.sin, 0.5, h0=0.6)
    with pytest.raises(FiniteDifferenceError):
        finite_diff(lambda x: math.sin(1e4 * x), 0.5, h0=0.1)


# -- identities --------------------------------------------------------------------------

def test_identity_examples():
    assert check_identity("A1", 3, 2)
    assert check_identity("B1", 2, 4)
    assert check_identity("B_general", 2, 2, 3)


def test_identity_errors():
    with pytest.raises(ValueError):
        check_identity("C7", 1, 1)
    with pytest.raises(ValueError):
        check_identity("A2", 1, 3)
    with pytest.raises(ValueError):
        check_identity("B_general", 1, 1)
    with pytest.raises(ValueError):
        check_identity("A1", 0, 1)
