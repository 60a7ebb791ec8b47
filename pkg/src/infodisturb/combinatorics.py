"""Exact harmonic numbers, binomials and the log-coefficient families.

Every closed form in the package is assembled from

* ``a(j, n)``: the coefficients of ``(1 + e)**j * log2(1 + e) = sum_n a(j, n) e**n``,
* ``c(j, n, lam) = lam**(2(j-n)) * (C(j, n) * log2(lam**2) + a(j, n))``.

``a(j, n)`` is always a rational multiple of ``1/ln 2``, so it is stored exactly
as a :class:`LogRational` and only turned into a float at the boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

LN2 = math.log(2.0)

# Parameter cap covered by the test suite; larger values still evaluate.
MAX_SUPPORTED = 64


@lru_cache(maxsize=None)
def harmonic(n: int) -> Fraction:
    """Harmonic number ``1 + 1/2 + ... + 1/n`` (0 for ``n == 0``)."""
    if n < 0:
        raise ValueError(f"harmonic number needs n >= 0, got {n}")
    if n == 0:
        return Fraction(0)
    return harmonic(n - 1) + Fraction(1, n)


def binomial(n: int, r: int) -> int:
    """``C(n, r)`` with the convention ``C(n, r) = 0`` outside ``0 <= r <= n``."""
    if n < 0:
        raise ValueError(f"binomial needs n >= 0, got {n}")
    if r < 0 or r > n:
        return 0
    return math.comb(n, r)


@dataclass(frozen=True)
class LogRational:
    """The exact real number ``rho / ln 2``."""

    rho: Fraction

    def __float__(self) -> float:
        return float(self.rho) / LN2

    def __add__(self, other):
        if isinstance(other, LogRational):
            return LogRational(self.rho + other.rho)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, LogRational):
            return LogRational(self.rho - other.rho)
        return NotImplemented

    def __neg__(self):
        return LogRational(-self.rho)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LogRational(self.rho * other)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"LogRational({self.rho}/ln2)"


@lru_cache(maxsize=4096)
def _a_rho(j: int, n: int) -> Fraction:
    if n <= j:
        return binomial(j, n) * (harmonic(j) - harmonic(j - n))
    sign = -1 if (n - j - 1) % 2 else 1
    return Fraction(sign * math.factorial(j) * math.factorial(n - j - 1), math.factorial(n))


def coeff_a(j: int, n: int) -> LogRational:
    """Taylor coefficient of ``e**n`` in ``(1 + e)**j * log2(1 + e)``.

    For ``n <= j`` this is ``C(j, n) (H_j - H_{j-n}) / ln 2``; beyond that the
    coefficients alternate as ``(-1)**(n-j-1) j! (n-j-1)! / (n! ln 2)``.
    """
    if j < 1:
        raise ValueError(f"coeff_a needs j >= 1, got {j}")
    if n < 0:
        raise ValueError(f"coeff_a needs n >= 0, got {n}")
    return LogRational(_a_rho(j, n))


def log2_sq(lam: float) -> float:
    """``log2(lam**2)`` computed from one natural log."""
    return 2.0 * math.log(lam) / LN2


def coeff_c(j: int, n: int, lam: float) -> float:
    """``lam**(2(j-n)) * (C(j, n) log2 lam**2 + a(j, n))``.

    At ``lam == 0`` this is 0 for ``n < j`` and ``-inf`` for ``n == j``.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    if not 0 <= n <= j:
        raise ValueError(f"coeff_c needs 0 <= n <= j, got n={n}, j={j}")
    if lam == 0.0:
        return -math.inf if n == j else 0.0
    return lam ** (2 * (j - n)) * (binomial(j, n) * log2_sq(lam) + float(coeff_a(j, n)))
