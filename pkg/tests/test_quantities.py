import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from infodisturb.combinatorics import LN2
from infodisturb.quantities import (
    SEAM_EPS,
    MeasurementSpec,
    closed_form_J,
    eval_F,
    eval_G,
    eval_I,
    eval_J,
    eval_R,
    evaluate,
    projective_point,
    series_I,
    series_J,
)

# J(k=1, l=3, lam=0.5), frozen from the quadrature oracle below at 40 digits
J_1_3_HALF = 0.77987982490121076339


def info_quadrature(d, k, l, lam, dps=30):
    """I = E[q log2 q] with the grouped weights of a Haar state ~ Dirichlet(k, l, d-k-l)."""
    with mp.workdps(dps):
        x = mp.mpf(lam) ** 2
        mean = (k + l * x) / d

        def f(p):
            q = p / mean
            return q * mp.log(q) / mp.log(2) if q > 0 else mp.mpf(0)

        r = d - k - l
        if r == 0:
            b = mp.beta(k, l)
            return float(mp.quad(lambda u: f(u + x * (1 - u)) * u ** (k - 1) * (1 - u) ** (l - 1) / b, [0, 1]))
        c = mp.gamma(d) / (mp.gamma(k) * mp.gamma(l) * mp.gamma(r))
        inner = lambda u: mp.quad(lambda v: f(u + x * v) * v ** (l - 1) * (1 - u - v) ** (r - 1), [0, 1 - u])
        return float(mp.quad(lambda u: c * u ** (k - 1) * inner(u), [0, 1]))


@pytest.mark.parametrize("args, message", [
    ((1, 1, 1, 0.5), "d out of range"),
    ((4, 5, 1, 0.5), "k out of range"),
    ((4, 0, 1, 0.5), "k out of range"),
    ((4, 2, 3, 0.5), "l out of range"),
    ((4, 1, 1, 1.5), "lambda out of range"),
    ((4, 1, 1, -0.1), "lambda out of range"),
])
def test_spec_validation(args, message):
    with pytest.raises(ValueError, match=message):
        MeasurementSpec(*args)


def test_diagonal():
    assert MeasurementSpec(5, 2, 2, 0.5).diagonal() == [1.0, 1.0, 0.5, 0.5, 0.0]


def test_eval_J_spot_values():
    assert eval_J(1, 3, 1.0) == pytest.approx((13 / 3) / LN2, rel=1e-15)
    assert eval_J(2, 1, 0.0) == pytest.approx(1 / LN2, rel=1e-15)
    assert eval_J(1, 3, 0.5) == pytest.approx(J_1_3_HALF, rel=1e-14)


def test_eval_I_spot_values():
    assert eval_I(MeasurementSpec(4, 1, 3, 1.0)) == pytest.approx(0.0, abs=1e-15)
    for l in (1, 2, 3):
        assert eval_I(MeasurementSpec(4, 1, l, 0.0)) == pytest.approx(2 - (13 / 12) / LN2, rel=1e-14)
    assert eval_I(MeasurementSpec(4, 2, 1, 0.0)) == pytest.approx(1 - (7 / 12) / LN2, rel=1e-14)


@pytest.mark.parametrize("args", [(4, 1, 3, 0.5), (4, 2, 1, 0.3), (5, 2, 2, 0.75), (3, 1, 1, 0.9), (2, 1, 1, 0.2)])
def test_eval_I_matches_quadrature(args):
    assert eval_I(MeasurementSpec(*args)) == pytest.approx(info_quadrature(*args), rel=1e-12)


def test_G_F_R_spot_values():
    s = MeasurementSpec(4, 1, 3, 0.5)
    assert eval_G(s) == pytest.approx((1 + 1 / 1.75) / 5, rel=1e-15)
    assert eval_F(s) == pytest.approx((1 + 6.25 / 1.75) / 5, rel=1e-15)
    assert eval_R(s) == pytest.approx(1 / 1.75, rel=1e-15)
    assert eval_G(s.with_lam(0.0)) == pytest.approx(0.4)
    assert eval_G(s.with_lam(1.0)) == pytest.approx(0.25)
    assert eval_F(s.with_lam(0.0)) == pytest.approx(0.4)
    assert eval_F(s.with_lam(1.0)) == pytest.approx(1.0)
    assert eval_R(s.with_lam(1.0)) == pytest.approx(1.0)
    assert eval_R(MeasurementSpec(4, 1, 2, 0.7)) == 0.0


def test_projective_point():
    top = projective_point(4, 4)
    assert (top.info_shannon, top.info_estimation, top.fidelity, top.reversibility) == pytest.approx((0, 0.25, 1, 1))
    p1 = projective_point(4, 1)
    assert p1.info_shannon == pytest.approx(2 - (13 / 12) / LN2)
    assert (p1.info_estimation, p1.fidelity, p1.reversibility) == pytest.approx((0.4, 0.4, 0))
    p2 = projective_point(4, 2)
    assert (p2.info_estimation, p2.fidelity) == pytest.approx((0.3, 0.6))
    with pytest.raises(ValueError):
        projective_point(4, 5)


@pytest.mark.parametrize("d", [2, 3, 5, 8])
def test_endpoints_glue_to_projectors(d):
    for k in range(1, d):
        for l in range(1, d - k + 1):
            for lam, rank in ((0.0, k), (1.0, k + l)):
                got = evaluate(MeasurementSpec(d, k, l, lam))
                want = projective_point(d, rank)
                assert got.info_shannon == pytest.approx(want.info_shannon, abs=1e-13)
                assert got.info_estimation == pytest.approx(want.info_estimation, rel=1e-14)
                assert got.fidelity == pytest.approx(want.fidelity, rel=1e-14)
                if lam == 1.0 or k + l != d:
                    assert got.reversibility == want.reversibility
            # continuity into the endpoints
            near0 = evaluate(MeasurementSpec(d, k, l, 1e-6))
            assert near0.info_shannon == pytest.approx(projective_point(d, k).info_shannon, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 12).flatmap(lambda d: st.tuples(
    st.just(d), st.integers(1, d - 1)).flatmap(lambda dk: st.tuples(
        st.just(dk[0]), st.just(dk[1]), st.integers(1, dk[0] - dk[1]), st.floats(0.0, 1.0)))))
def test_bounds(args):
    d, k, l, lam = args
    q = evaluate(MeasurementSpec(d, k, l, lam))
    tol = 1e-12
    assert -tol <= q.info_shannon <= projective_point(d, 1).info_shannon + tol
    assert 1 / d - tol <= q.info_estimation <= 2 / (d + 1) + tol
    assert 2 / (d + 1) - tol <= q.fidelity <= 1 + tol
    assert 0.0 <= q.reversibility <= 1 + tol


@pytest.mark.parametrize("d, k, l", [(4, 1, 3), (5, 2, 1), (6, 3, 3), (8, 1, 1)])
def test_monotone_in_lambda(d, k, l):
    lams = np.linspace(0, 1, 201)
    q = np.array([[*vars(evaluate(MeasurementSpec(d, k, l, float(x)))).values()] for x in lams])
    assert np.all(np.diff(q[:, 0]) <= 1e-14)
    assert np.all(np.diff(q[:, 1]) < 0)
    assert np.all(np.diff(q[:, 2]) > 0)
    if k + l == d:
        assert np.all(np.diff(q[:, 3]) > 0)


@pytest.mark.parametrize("k, l", [(1, 1), (1, 3), (3, 1), (5, 7), (10, 10), (1, 19)])
def test_seam_window_agreement(k, l):
    for eps in np.linspace(0.02, 0.05, 13):
        lam = math.sqrt(1 - eps)
        cf = closed_form_J(k, l, lam)
        sr = series_J(k, l, 1 - lam * lam)
        for a, b in zip(cf, sr):
            assert a == pytest.approx(b, rel=1e-10)


def test_series_I_matches_closed_form_at_seam():
    for k, l, d in ((1, 3, 4), (2, 2, 5), (4, 1, 6)):
        lam = math.sqrt(1 - SEAM_EPS * 1.2)
        s = MeasurementSpec(d, k, l, lam)
        top = projective_point(d, k + l).info_shannon
        assert eval_I(s) == pytest.approx(top + series_I(k, l, 1 - lam * lam)[0], rel=1e-11)


def test_eval_I_continuous_across_seam():
    for k, l, d in ((1, 3, 4), (2, 5, 8), (7, 1, 8)):
        lam_seam = math.sqrt(1 - SEAM_EPS)
        below = eval_I(MeasurementSpec(d, k, l, np.nextafter(lam_seam, 0)))
        above = eval_I(MeasurementSpec(d, k, l, np.nextafter(lam_seam, 1)))
        assert below == pytest.approx(above, rel=1e-12)


def test_closed_form_rejects_endpoints():
    with pytest.raises(ValueError):
        closed_form_J(1, 1, 1.0)
    with pytest.raises(ValueError):
        series_J(1, 1, 1.0)
