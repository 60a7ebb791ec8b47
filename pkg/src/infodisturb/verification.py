"""Verification suites shared by ``infodisturb verify`` and the test suite.

Each suite returns a list of :class:`Check` records; a suite passes when all
of its checks pass.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import derivatives as dv
from .oracle import (
    FiniteDifferenceError,
    check_identity,
    finite_diff,
    haar_amplitudes,
    jackknife_std_errors,
    mc_estimate_many,
    mc_recovery,
    regime_consistent,
    simulate_reversal,
    substream,
)
from .oracle.montecarlo import PureState
from .quantities import MeasurementSpec, eval_F, eval_G, eval_I, eval_R, evaluate
from .tradeoff import Plane, curvature, slope

MC_LAMBDAS = (0.0, 0.25, 0.5, 0.75, 1.0)
FD_LAMBDAS = tuple(round(0.1 * i, 1) for i in range(1, 10))
MC_ATOL = 1e-12


@dataclass
class Check:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: measured={self.measured:.3e} tol={self.tolerance:.1e} {self.detail}".rstrip()


def all_kl(d):
    return [(k, l) for k in range(1, d) for l in range(1, d - k + 1)]


def rel_err(got, want):
    if got == want:
        return 0.0
    if not (math.isfinite(got) and math.isfinite(want)):
        return math.inf
    return abs(got - want) / max(abs(want), 1e-300)


# -- Monte Carlo ----------------------------------------------------------------

def mc_suite(dims=(2, 3, 4, 5), lambdas=MC_LAMBDAS, n_samples=1_000_000, seed=2024,
             workers=1, nsigma=3.0):
    checks = []
    for d in dims:
        specs = [MeasurementSpec(d, k, l, lam) for k, l in all_kl(d) for lam in lambdas]
        for spec, est in zip(specs, mc_estimate_many(specs, n_samples, seed, workers)):
            exact = evaluate(spec)
            zs = {
                "I": est.info_shannon.z_score(exact.info_shannon, MC_ATOL),
                "G": est.info_estimation.z_score(exact.info_estimation, MC_ATOL),
                "F": est.fidelity.z_score(exact.fidelity, MC_ATOL),
                "R": est.reversibility.z_score(exact.reversibility, MC_ATOL),
            }
            worst = max(zs, key=zs.get)
            checks.append(Check(
                f"mc d={d} k={spec.k} l={spec.l} lambda={spec.lam}",
                zs[worst] <= nsigma, zs[worst], nsigma,
                f"(worst {worst}, in standard errors)"))
    return checks


def jackknife_suite(n_samples=200_000, seed=2024):
    """Delta-method and jackknife standard errors agree at one grid point."""
    from . import kernels
    from .oracle.montecarlo import estimates_from_features, haar_probabilities

    spec = MeasurementSpec(4, 1, 3, 0.5)
    probs = haar_probabilities(spec.d, n_samples, seed)
    feats = kernels.mc_features(probs, np.asarray(spec.diagonal()))
    lmin = spec.lam ** 2 if spec.invertible else 0.0
    delta = estimates_from_features(feats, lmin)
    jack = jackknife_std_errors(feats, lmin)
    checks = []
    for name, a, b in zip("IGFR", delta.as_dict().values(), jack.as_dict().values()):
        if a.std_error == 0.0:
            continue
        ratio = b.std_error / a.std_error
        checks.append(Check(f"jackknife/delta se ratio {name} d=4 k=1 l=3 lambda=0.5",
                            0.8 <= ratio <= 1.25, ratio, 0.25))
    return checks


def reversal_suite(d=4, lambdas=(0.25, 0.5, 1.0), n_samples=1_000_000, seed=2024,
                   n_states=1000, workers=1, nsigma=3.0):
    checks = []
    worst_overlap = 0.0
    for k in range(1, d):
        l = d - k
        for lam in lambdas:
            spec = MeasurementSpec(d, k, l, lam)
            est = mc_recovery(spec, n_samples, seed, workers)
            z = est.z_score(eval_R(spec), MC_ATOL)
            checks.append(Check(f"reversal mean d={d} k={k} l={l} lambda={lam}", z <= nsigma, z, nsigma,
                                "(in standard errors)"))
            amps = haar_amplitudes(d, n_states, substream(seed, 99))
            for psi in amps:
                out = simulate_reversal(spec, PureState(psi))
                worst_overlap = max(worst_overlap, abs(out.recovered_overlap - 1.0))
    checks.append(Check("reversal recovered overlap == 1", worst_overlap <= 1e-12, worst_overlap, 1e-12))
    return checks


# -- finite differences -------------------------------------------------------------

def _in_lam2(fn, spec):
    return lambda x: fn(spec.with_lam(math.sqrt(x)))


def _fd_pairs(spec):
    x = spec.lam ** 2
    out = []
    for label, f, d1, d2 in (
        ("I", eval_I, dv.dI_dlam2, dv.d2I_dlam2),
        ("G", eval_G, dv.dG_dlam2, dv.d2G_dlam2),
        ("F", eval_F, dv.dF_dlam2, dv.d2F_dlam2),
        ("R", eval_R, dv.dR_dlam2, dv.d2R_dlam2),
    ):
        g = _in_lam2(f, spec)
        for order, analytic in ((1, d1), (2, d2)):
            try:
                numeric = finite_diff(g, x, order)
            except FiniteDifferenceError:
                numeric = math.nan
            out.append((f"d{order}{label}", analytic(spec), numeric))
    return out


def fd_suite(dmax=6, lambdas=FD_LAMBDAS, rtol=1e-6):
    checks = []
    for d in range(2, dmax + 1):
        for k, l in all_kl(d):
            worst, where = 0.0, ""
            for lam in lambdas:
                spec = MeasurementSpec(d, k, l, lam)
                for name, analytic, numeric in _fd_pairs(spec):
                    err = rel_err(analytic, numeric)
                    if not err <= worst:
                        worst, where = err, f"{name} at lambda={lam}"
            checks.append(Check(f"finite differences d={d} k={k} l={l}", worst <= rtol, worst, rtol, where))
    return checks


# -- endpoint limits --------------------------------------------------------------

def tabulated_limits(d, k, l):
    """Every (name, end, limit value, function of lam) pair with a tabulated limit."""
    def at(fn):
        return lambda lam: fn(MeasurementSpec(d, k, l, lam))

    entries = [
        ("J'", at(lambda s: dv.dJ_dlam2(s.k, s.l, s.lam))),
        ("J''", at(lambda s: dv.d2J_dlam2(s.k, s.l, s.lam))),
        ("I'", at(dv.dI_dlam2)),
        ("I''", at(dv.d2I_dlam2)),
        ("F'", at(dv.dF_dlam2)),
        ("F''", at(dv.d2F_dlam2)),
    ]
    for plane in Plane:
        if plane.disturbance_axis == "R" and k + l != d:
            continue
        entries.append((f"slope {plane.label}", at(lambda s, p=plane: slope(p, s))))
        entries.append((f"curvature {plane.label}", at(lambda s, p=plane: curvature(p, s))))
    out = []
    for name, fn in entries:
        out.append((name, 0, fn(0.0), fn))
        out.append((name, 1, fn(1.0), fn))
    return out


def _approach_point(end, offset):
    return offset if end == 0 else 1.0 - offset


def _scale(fn):
    vals = [abs(fn(lam)) for lam in (0.25, 0.5, 0.75)]
    return max([v for v in vals if math.isfinite(v)] + [1.0])


def limits_suite(dmax=6, offset=1e-4, rtol=1e-3, big=1e6, literal_infinity=True):
    """Generic formulas near each endpoint approach the dispatched limits.

    Finite limits must be matched within ``rtol``; a zero limit is matched
    within ``rtol`` times the magnitude of the same function mid-curve.  With ``literal_infinity`` an infinite limit needs ``|value| > big``
    with the right sign at ``offset``; otherwise it needs the right sign and a
    magnitude that keeps growing over offsets 1e-2, 1e-3, ``offset``.
    """
    checks = []
    for d in range(2, dmax + 1):
        for k, l in all_kl(d):
            for name, end, limit, fn in tabulated_limits(d, k, l):
                near = fn(_approach_point(end, offset))
                label = f"limit {name} lambda->{end} d={d} k={k} l={l}"
                if math.isfinite(limit):
                    if limit == 0.0:
                        err, tol = abs(near) / _scale(fn), rtol
                    else:
                        err, tol = rel_err(near, limit), rtol
                    checks.append(Check(label, err <= tol, err, tol, f"(limit {limit:.6g}, near {near:.6g})"))
                elif literal_infinity:
                    ok = math.copysign(1.0, near) == math.copysign(1.0, limit) and abs(near) > big
                    checks.append(Check(label, ok, abs(near), big, f"(limit {limit}, near {near:.6g})"))
                else:
                    seq = [fn(_approach_point(end, h)) for h in (1e-2, 1e-3, offset)]
                    same_sign = all(math.copysign(1.0, v) == math.copysign(1.0, limit) for v in seq)
                    growing = abs(seq[0]) < abs(seq[1]) < abs(seq[2])
                    checks.append(Check(label, same_sign and growing, abs(seq[-1]), 0.0,
                                        f"(limit {limit}, approach {', '.join(f'{v:.4g}' for v in seq)})"))
    return checks


# -- sign tables -------------------------------------------------------------------

DERIVATIVE_SIGNS = {"dI": -1, "d2I": 1, "dG": -1, "d2G": 1, "dF": 1, "d2F": -1, "dR": 1, "d2R": -1}


def _sign_ok(value, want, strict):
    if not math.isfinite(value):
        return True
    if want < 0:
        return value < 0 if strict else value <= 0
    return value > 0 if strict else value >= 0


def signs_suite(dmax=8, grid=1001):
    """Derivative signs and slope/curvature signs at every finite grid value."""
    lams = np.linspace(0.0, 1.0, grid)
    checks = []
    for d in range(2, dmax + 1):
        for k, l in all_kl(d):
            bad = []
            for lam in lams:
                spec = MeasurementSpec(d, k, l, float(lam))
                b = dv.derivative_bundle(spec)
                interior = 0.0 < lam < 1.0
                # non-strict at the endpoints where the first derivative vanishes or diverges, and where R is 0
                strict = {"dI": interior, "d2I": True, "dG": True, "d2G": True,
                          "dF": interior, "d2F": True,
                          "dR": spec.invertible, "d2R": spec.invertible}
                for key, want in DERIVATIVE_SIGNS.items():
                    if not _sign_ok(getattr(b, key), want, strict[key]):
                        bad.append(f"{key}@{lam:.3f}")
                for plane in Plane:
                    s = slope(plane, spec)
                    if math.isfinite(s) and s > 0:
                        bad.append(f"slope {plane.label}@{lam:.3f}")
                    c = curvature(plane, spec)
                    if not math.isfinite(c):
                        continue
                    degenerate = plane.disturbance_axis == "R" and not spec.invertible
                    if plane is Plane.GF and not c < 0:
                        bad.append(f"curv gf@{lam:.3f}")
                    elif (plane is Plane.GR or degenerate) and c != 0:
                        bad.append(f"curv {plane.label}@{lam:.3f}")
                    elif plane is Plane.IR and not degenerate and not c > 0:
                        bad.append(f"curv ir@{lam:.3f}")
                    elif plane is Plane.IF and k >= l and not c < 0:
                        bad.append(f"curv if@{lam:.3f}")
            checks.append(Check(f"sign tables d={d} k={k} l={l}", not bad, float(len(bad)), 0.0,
                                ", ".join(bad[:5])))
    return checks


# -- exact identities --------------------------------------------------------------

def identity_suite(bound=20, general_bound=12, general_order=6, regime_bound=30):
    checks = []
    for ident in ("A1", "A2", "B1", "B2"):
        failures = [(k, l) for k in range(2 if ident == "A2" else 1, bound)
                    for l in range(1, bound - k + 1) if not check_identity(ident, k, l)]
        checks.append(Check(f"identity {ident}, k+l <= {bound}", not failures, float(len(failures)), 0.0,
                            str(failures[:5]) if failures else ""))
    failures = [(k, l, n) for k in range(1, general_bound) for l in range(1, general_bound - k + 1)
                for n in range(general_order + 1) if not check_identity("B_general", k, l, n)]
    checks.append(Check(f"identity B_general n <= {general_order}, k+l <= {general_bound}",
                        not failures, float(len(failures)), 0.0, str(failures[:5]) if failures else ""))
    bad = [j for j in range(1, regime_bound + 1) if not regime_consistent(j)]
    checks.append(Check(f"a(j, j+1) regimes agree, j <= {regime_bound}", not bad, float(len(bad)), 0.0))
    return checks


SUITES = ("mc", "jackknife", "reversal", "fd", "limits", "signs", "identities")
