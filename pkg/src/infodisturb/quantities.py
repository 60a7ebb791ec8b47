"""Information and disturbance of the diagonal measurement ``M(d, k, l, lam)``.

The operator has ``k`` diagonal entries equal to 1, ``l`` equal to ``lam`` and
the remaining ``d - k - l`` equal to 0.  ``lam = 0`` is the rank-``k``
projector and ``lam = 1`` the rank-``(k + l)`` projector.

The Shannon term needs the alternating sum ``J``.  Its two partial sums carry
powers ``(1 - lam**2)**-(k+l-n-1)`` whose poles cancel at ``lam = 1``, so:

* away from ``lam = 1`` the sums are accumulated with gmpy2 ``mpfr`` at a
  working precision large enough to absorb the cancellation;
* for ``1 - lam**2 < SEAM_EPS`` the Taylor series ``J = sum j_n (-eps)**n`` is
  used instead, where every term past ``n = 1`` has the same sign.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2

from .combinatorics import LN2, _a_rho, binomial, harmonic

SEAM_EPS = 0.05
SERIES_RTOL = 1e-16
_SERIES_MAX_TERMS = 4000


@dataclass(frozen=True)
class MeasurementSpec:
    """One operator ``M(d, k, l, lam)`` of the diagonal family."""

    d: int
    k: int
    l: int
    lam: float

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"d out of range: need d >= 2, got d={self.d}")
        if not 1 <= self.k <= self.d - 1:
            raise ValueError(f"k out of range: need 1 <= k <= d-1, got k={self.k}, d={self.d}")
        if not 1 <= self.l <= self.d - self.k:
            raise ValueError(f"l out of range: need 1 <= l <= d-k, got l={self.l}, d-k={self.d - self.k}")
        if not (0.0 <= self.lam <= 1.0):
            raise ValueError(f"lambda out of range: need 0 <= lambda <= 1, got {self.lam}")

    @property
    def invertible(self) -> bool:
        return self.k + self.l == self.d

    def diagonal(self):
        """Diagonal of the operator as a list of floats."""
        return [1.0] * self.k + [self.lam] * self.l + [0.0] * (self.d - self.k - self.l)

    def with_lam(self, lam: float) -> "MeasurementSpec":
        return MeasurementSpec(self.d, self.k, self.l, lam)


@dataclass(frozen=True)
class QuantityBundle:
    info_shannon: float
    info_estimation: float
    fidelity: float
    reversibility: float


def _check_kl(k: int, l: int):
    if k < 1 or l < 1:
        raise ValueError(f"need k >= 1 and l >= 1, got k={k}, l={l}")


# -- closed form -------------------------------------------------------------

@lru_cache(maxsize=None)
def _rho_table(j: int):
    return tuple(gmpy2.mpq(r.numerator, r.denominator) for r in (_a_rho(j, n) for n in range(j + 1)))


def _working_bits(j: int, eps: float) -> int:
    bits = 96 + 3 * j
    if eps < 1.0:
        bits += int((j + 3) * math.log2(1.0 / eps)) + 1
    return bits


def closed_form_J(k: int, l: int, lam: float, order: int = 2):
    """``(J, J', J'')`` from the alternating sums, primes meaning d/d(lam**2).

    Only valid for ``0 < lam < 1``; entries above ``order`` are returned as None.
    """
    _check_kl(k, l)
    if not 0.0 < lam < 1.0:
        raise ValueError(f"closed form needs 0 < lambda < 1, got {lam}")
    j = k + l
    eps = one_minus_lam2(lam)
    with gmpy2.context(gmpy2.get_context(), precision=_working_bits(j, eps)):
        lm = gmpy2.mpfr(lam)
        x = lm * lm
        u = 1 - x
        logx = gmpy2.log(x)
        rho = [gmpy2.mpfr(r) for r in _rho_table(j)]
        # c_n without the 1/ln2 factor, n = 0..j
        xp = [gmpy2.mpfr(1)] * (j + 1)
        for p in range(1, j + 1):
            xp[p] = xp[p - 1] * x
        c = [xp[j - n] * (binomial(j, n) * logx + rho[n]) for n in range(j + 1)]
        inv_u = 1 / u
        up = [gmpy2.mpfr(1)] * (j + 3)
        for p in range(1, j + 3):
            up[p] = up[p - 1] * inv_u

        def over_xm1(m):
            # 1 / (x - 1)**m
            return -up[m] if m % 2 else up[m]

        sl = -1 if l % 2 else 1
        sk = -1 if k % 2 else 1

        s = gmpy2.mpfr(0)
        for n in range(k):
            s += binomial(j - n - 2, l - 1) * rho[n] * over_xm1(j - n - 1)
        t = gmpy2.mpfr(0)
        for n in range(l):
            t += binomial(j - n - 2, k - 1) * c[n] * up[j - n - 1]
        J = sl * s + sk * t
        out = [float(J / gmpy2.const_log2())]

        if order >= 1:
            s = gmpy2.mpfr(0)
            for n in range(k):
                s += binomial(j - n - 1, l) * (-l) * rho[n] * over_xm1(j - n)
            t = gmpy2.mpfr(0)
            for n in range(l):
                t += binomial(j - n - 1, k) * k * c[n] * up[j - n]
                t += binomial(j - n - 2, k - 1) * (n + 1) * c[n + 1] * up[j - n - 1]
            dJ = sl * s + sk * t
            out.append(float(dJ / gmpy2.const_log2()))
        else:
            out.append(None)

        if order >= 2:
            s = gmpy2.mpfr(0)
            for n in range(k):
                s += binomial(j - n, l + 1) * l * (l + 1) * rho[n] * over_xm1(j - n + 1)
            t = gmpy2.mpfr(0)
            for n in range(l):
                t += binomial(j - n, k + 1) * k * (k + 1) * c[n] * up[j - n + 1]
                t += binomial(j - n - 1, k) * 2 * k * (n + 1) * c[n + 1] * up[j - n]
                t += binomial(j - n - 2, k - 1) * (n + 2) * (n + 1) * c[n + 2] * up[j - n - 1]
            d2J = sl * s + sk * t
            out.append(float(d2J / gmpy2.const_log2()))
        else:
            out.append(None)
    return tuple(out)


# -- series around lam = 1 -----------------------------------------------------

@lru_cache(maxsize=None)
def jn_rho(k: int, l: int, n: int) -> Fraction:
    """Rational part of ``j_n = C(l-1+n, l-1) a(k+l, k+l-1+n)``."""
    _check_kl(k, l)
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    return binomial(l - 1 + n, l - 1) * _a_rho(k + l, k + l - 1 + n)


@lru_cache(maxsize=None)
def _jn_eps_floats(k: int, l: int, count: int):
    # coefficients of eps**n in J
    return tuple((-1) ** n * float(jn_rho(k, l, n)) / LN2 for n in range(count))


@lru_cache(maxsize=None)
def _info_eps_floats(k: int, l: int, count: int):
    # coefficients of eps**m in I(lam) - I(1); the m = 0 term vanishes
    j = k + l
    r = Fraction(l, j)
    out = [0.0]
    for m in range(1, count):
        c = r ** m / m + sum((-1) ** n * jn_rho(k, l, n) * r ** (m - n) for n in range(m + 1)) / j
        out.append(float(c) / LN2)
    return tuple(out)


def _sum_eps_series(table, k, l, eps, deriv):
    """``d^deriv/d(lam**2)^deriv`` of ``sum_n b_n eps**n`` with ``eps = 1 - lam**2``."""
    total = 0.0
    n = deriv
    count = 64
    coeffs = table(k, l, count)
    while True:
        if n >= count:
            if count >= _SERIES_MAX_TERMS:
                raise ArithmeticError(f"series failed to converge at eps={eps}")
            count *= 2
            coeffs = table(k, l, count)
        term = math.perm(n, deriv) * coeffs[n] * eps ** (n - deriv)
        total += term
        if eps == 0.0 or (n > deriv + 1 and abs(term) < SERIES_RTOL * abs(total)):
            break
        n += 1
    return -total if deriv % 2 else total


def series_J(k: int, l: int, eps: float, order: int = 2):
    """``(J, J', J'')`` at ``lam**2 = 1 - eps`` from the Taylor series in ``eps``.

    Each sum stops once the next term drops below ``SERIES_RTOL`` of the
    running total (in magnitude).
    """
    _check_kl(k, l)
    if not 0.0 <= eps < 1.0:
        raise ValueError(f"series needs 0 <= eps < 1, got {eps}")
    return tuple(_sum_eps_series(_jn_eps_floats, k, l, eps, r) if r <= order else None for r in range(3))


def series_I(k: int, l: int, eps: float, order: int = 2):
    """``(I - I(1), I', I'')`` near ``lam = 1`` from the Taylor series of I itself.

    The constant term cancels exactly, so small values keep full relative
    precision instead of coming out of a difference of O(1) terms.
    """
    _check_kl(k, l)
    if not 0.0 <= eps < 1.0:
        raise ValueError(f"series needs 0 <= eps < 1, got {eps}")
    return tuple(_sum_eps_series(_info_eps_floats, k, l, eps, r) if r <= order else None for r in range(3))


def one_minus_lam2(lam: float) -> float:
    """``1 - lam**2`` without the rounding error of forming ``lam**2`` first."""
    return (1.0 - lam) * (1.0 + lam)


@lru_cache(maxsize=1 << 16)
def _j_all(k, l, lam):
    eps = one_minus_lam2(lam)
    if eps < SEAM_EPS:
        return series_J(k, l, eps)
    return closed_form_J(k, l, lam)


def j_functions(k: int, l: int, lam: float, order: int = 2):
    """``(J, J', J'')`` at any interior ``lam``, choosing closed form or series."""
    return _j_all(k, l, float(lam))


def eval_J(k: int, l: int, lam: float) -> float:
    _check_kl(k, l)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda out of range: {lam}")
    if lam == 0.0:
        return float(_a_rho(k, k - 1)) / LN2
    if lam == 1.0:
        return float(_a_rho(k + l, k + l - 1)) / LN2
    return j_functions(k, l, lam, order=0)[0]


# -- the four measures ---------------------------------------------------------

def _info_offset(d: int) -> float:
    return math.log2(d) - float(harmonic(d) - 1) / LN2


def eval_I(spec: MeasurementSpec) -> float:
    """Shannon information gain in bits."""
    eps = one_minus_lam2(spec.lam)
    if eps < SEAM_EPS:
        top = projective_point(spec.d, spec.k + spec.l).info_shannon
        return top + series_I(spec.k, spec.l, eps, order=0)[0]
    w = spec.k + spec.l * spec.lam ** 2
    return _info_offset(spec.d) - math.log2(w) + eval_J(spec.k, spec.l, spec.lam) / w


def eval_G(spec: MeasurementSpec) -> float:
    w = spec.k + spec.l * spec.lam ** 2
    return (1.0 + 1.0 / w) / (spec.d + 1)


def eval_F(spec: MeasurementSpec) -> float:
    w = spec.k + spec.l * spec.lam ** 2
    return (1.0 + (spec.k + spec.l * spec.lam) ** 2 / w) / (spec.d + 1)


def eval_R(spec: MeasurementSpec) -> float:
    if not spec.invertible:
        return 0.0
    lam2 = spec.lam ** 2
    return spec.d * lam2 / (spec.k + spec.l * lam2)


def evaluate(spec: MeasurementSpec) -> QuantityBundle:
    return QuantityBundle(eval_I(spec), eval_G(spec), eval_F(spec), eval_R(spec))


def projective_point(d: int, r: int) -> QuantityBundle:
    """Quantities for the rank-``r`` projector onto the first ``r`` basis states."""
    if d < 2:
        raise ValueError(f"d out of range: need d >= 2, got {d}")
    if not 1 <= r <= d:
        raise ValueError(f"rank out of range: need 1 <= r <= d, got r={r}")
    info = math.log2(d / r) - float(harmonic(d) - harmonic(r)) / LN2
    return QuantityBundle(
        info_shannon=info,
        info_estimation=(1.0 + 1.0 / r) / (d + 1),
        fidelity=(1.0 + r) / (d + 1),
        reversibility=1.0 if r == d else 0.0,
    )
