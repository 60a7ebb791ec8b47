"""Derivatives of J, I, G, F, R with respect to ``lam**2``.

Endpoint inputs (``lam < ENDPOINT_TOL`` or ``1 - lam < ENDPOINT_TOL``) are
answered from the limit formulas; infinities are ordinary return values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import LN2, LogRational, _a_rho
from .quantities import SEAM_EPS, MeasurementSpec, eval_J, j_functions, jn_rho, one_minus_lam2, series_I

ENDPOINT_TOL = 1e-12

INF = math.inf


def at_zero(lam: float) -> bool:
    return lam < ENDPOINT_TOL


def at_one(lam: float) -> bool:
    return 1.0 - lam < ENDPOINT_TOL


def _a(j, n):
    return float(_a_rho(j, n)) / LN2


@dataclass(frozen=True)
class DerivativeBundle:
    dI: float
    d2I: float
    dG: float
    d2G: float
    dF: float
    d2F: float
    dR: float
    d2R: float
    J: float
    dJ: float
    d2J: float


@dataclass(frozen=True)
class Alpha:
    value: float


def _j_triplet(k, l, lam):
    if at_zero(lam):
        d2 = l * (l + 1) * _a(k - 2, k - 1) if k >= 2 else INF
        return _a(k, k - 1), l * _a(k - 1, k - 1), d2
    if at_one(lam):
        j = k + l
        return _a(j, j - 1), l * _a(j, j), l * (l + 1) * _a(j, j + 1)
    return j_functions(k, l, lam)


def dJ_dlam2(k: int, l: int, lam: float) -> float:
    return _j_triplet(k, l, lam)[1]


def d2J_dlam2(k: int, l: int, lam: float) -> float:
    return _j_triplet(k, l, lam)[2]


def _dI_pair(spec: MeasurementSpec):
    k, l, lam = spec.k, spec.l, spec.lam
    if at_zero(lam):
        d1 = -l / (k * k * LN2)
        d2 = l * (k * k + 3 * k * l - 2 * l) / (k ** 3 * (k - 1) * LN2) if k >= 2 else INF
        return d1, d2
    if at_one(lam):
        j = k + l
        return 0.0, k * l / (j * j * (j + 1) * LN2)
    eps = one_minus_lam2(lam)
    if eps < SEAM_EPS:
        _, d1, d2 = series_I(k, l, eps)
        return d1, d2
    J, dJ, d2J = j_functions(k, l, lam)
    w = k + l * lam * lam
    d1 = -l / (w * LN2) - l * J / w ** 2 + dJ / w
    d2 = l * l / (w * w * LN2) + 2 * l * l * J / w ** 3 - 2 * l * dJ / w ** 2 + d2J / w
    return d1, d2


def dI_dlam2(spec: MeasurementSpec) -> float:
    return _dI_pair(spec)[0]


def d2I_dlam2(spec: MeasurementSpec) -> float:
    return _dI_pair(spec)[1]


def dG_dlam2(spec: MeasurementSpec) -> float:
    w = spec.k + spec.l * spec.lam ** 2
    return -spec.l / ((spec.d + 1) * w * w)


def d2G_dlam2(spec: MeasurementSpec) -> float:
    w = spec.k + spec.l * spec.lam ** 2
    return 2 * spec.l ** 2 / ((spec.d + 1) * w ** 3)


def dF_dlam2(spec: MeasurementSpec) -> float:
    d, k, l, lam = spec.d, spec.k, spec.l, spec.lam
    if at_zero(lam):
        return INF
    if at_one(lam):
        return 0.0
    w = k + l * lam * lam
    return k * l / (d + 1) * (1 - lam) * (k + l * lam) / (lam * w * w)


def d2F_dlam2(spec: MeasurementSpec) -> float:
    d, k, l, lam = spec.d, spec.k, spec.l, spec.lam
    if at_zero(lam):
        return -INF
    x = lam * lam
    w = k + l * x
    num = w * w + 4 * l * x * (1 - lam) * (k + l * lam)
    return -k * l / (2 * (d + 1)) * num / (lam ** 3 * w ** 3)


def dR_dlam2(spec: MeasurementSpec) -> float:
    if not spec.invertible:
        return 0.0
    w = spec.k + spec.l * spec.lam ** 2
    return spec.k * spec.d / (w * w)


def d2R_dlam2(spec: MeasurementSpec) -> float:
    if not spec.invertible:
        return 0.0
    w = spec.k + spec.l * spec.lam ** 2
    return -2 * spec.k * spec.l * spec.d / w ** 3


def derivative_bundle(spec: MeasurementSpec) -> DerivativeBundle:
    """All first and second ``lam**2`` derivatives at one operator."""
    J, dJ, d2J = _j_triplet(spec.k, spec.l, spec.lam)
    if not (at_zero(spec.lam) or at_one(spec.lam)):
        J = eval_J(spec.k, spec.l, spec.lam)
    dI, d2I = _dI_pair(spec)
    return DerivativeBundle(
        dI=dI, d2I=d2I,
        dG=dG_dlam2(spec), d2G=d2G_dlam2(spec),
        dF=dF_dlam2(spec), d2F=d2F_dlam2(spec),
        dR=dR_dlam2(spec), d2R=d2R_dlam2(spec),
        J=J, dJ=dJ, d2J=d2J,
    )


def alpha(spec: MeasurementSpec) -> Alpha:
    """Constant with ``R' = alpha G'`` and ``R'' = alpha G''``."""
    if not spec.invertible:
        return Alpha(0.0)
    return Alpha(-spec.k * spec.d * (spec.d + 1) / spec.l)


def jn_coefficient(k: int, l: int, n: int) -> LogRational:
    """Coefficient ``j_n`` of ``J = sum_n j_n (-eps)**n`` with ``eps = 1 - lam**2``."""
    return LogRational(Fraction(jn_rho(k, l, n)))


def d3_at1(spec: MeasurementSpec):
    """Third ``lam**2`` derivatives of I and F at ``lam = 1``."""
    d, k, l = spec.d, spec.k, spec.l
    j = k + l
    d3I = -2 * k * l * (3 * k * l + 3 * l * l + k + 5 * l) / (j ** 3 * (j + 1) * (j + 2) * LN2)
    d3F = 3 * k * l * (k + 3 * l) / (4 * (d + 1) * j * j)
    return d3I, d3F


def d4_at1_keql(spec: MeasurementSpec):
    """Fourth ``lam**2`` derivatives of I and F at ``lam = 1``, only for ``k == l``."""
    if spec.k != spec.l:
        raise ValueError(f"fourth derivatives at lambda=1 need k == l, got k={spec.k}, l={spec.l}")
    d, k = spec.d, spec.k
    d4I = 3 * (12 * k + 19) / (8 * (2 * k + 1) * (2 * k + 3) * LN2)
    d4F = -39 * k / (16 * (d + 1))
    return d4I, d4F
