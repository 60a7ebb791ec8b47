"""Exact checks of the binomial/log identities behind the endpoint limits.

Everything here is rational arithmetic on the ``rho`` parts (the common
``1/ln 2`` factor is dropped).  ``B_general`` expands the closed form of
``J`` as a Laurent series in ``eps = 1 - lam**2`` from scratch, so it does not
reuse the coefficient formula it is checking.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from ..combinatorics import _a_rho, binomial
from ..quantities import jn_rho

IDENTITIES = ("A1", "A2", "B1", "B2", "B_general")


def _sign(p):
    return -1 if p % 2 else 1


def identity_A1(k, l):
    lhs = sum(binomial(k + l - n - 1, l) * _sign(k - n - 1) * _a_rho(k + l, n) for n in range(k))
    return lhs == _a_rho(k - 1, k - 1)


def identity_A2(k, l):
    lhs = sum(binomial(k + l - n, l + 1) * _sign(k - n - 1) * _a_rho(k + l, n) for n in range(k))
    return lhs == _a_rho(k - 2, k - 1)


def identity_B1(k, l):
    lhs = sum(_sign(l - n - 1) * binomial(k + l - n - 2, k - 1) * binomial(k + l, n) for n in range(l))
    return lhs == l


def identity_B2(k, l):
    lhs = sum(_sign(l - n - 1) * binomial(k + l - n - 2, k - 1) * binomial(k + l + 1, n) for n in range(l))
    return 2 * lhs == l * (l + 1)


def _poly_mul(a, b, top):
    out = [Fraction(0)] * (top + 1)
    for i, x in enumerate(a[: top + 1]):
        if x:
            for j, y in enumerate(b[: top + 1 - i]):
                out[i + j] += x * y
    return out


def laurent_J(k: int, l: int, top: int) -> dict:
    """Coefficients of ``eps**p`` (``p <= top``, possibly negative) in ``J ln 2``.

    Built term by term from the alternating-sum closed form with
    ``lam**2 = 1 - eps`` and ``ln(1 - eps) = -sum eps**q / q``.
    """
    j = k + l
    coeffs = {}

    def add(p, v):
        if p <= top:
            coeffs[p] = coeffs.get(p, Fraction(0)) + v

    # first sum: a_n / (lam**2 - 1)**m = a_n (-1)**m eps**-m
    for n in range(k):
        m = j - n - 1
        add(-m, _sign(l) * binomial(j - n - 2, l - 1) * _a_rho(j, n) * _sign(m))
    # second sum: c_n / (1 - lam**2)**m
    for n in range(l):
        m = j - n - 1
        depth = top + m
        power = [Fraction(binomial(j - n, i) * _sign(i)) for i in range(depth + 1)]  # (1-eps)**(j-n)
        log = [Fraction(0)] + [Fraction(-1, q) for q in range(1, depth + 1)]
        plog = _poly_mul(power, log, depth)
        weight = _sign(k) * binomial(j - n - 2, k - 1)
        for i in range(depth + 1):
            c_i = binomial(j, n) * plog[i] + _a_rho(j, n) * power[i]
            if c_i:
                add(i - m, weight * c_i)
    return coeffs


def identity_B_general(k, l, n):
    """Laurent expansion has no poles and its ``eps**n`` term matches ``j_n``."""
    series = laurent_J(k, l, n)
    if any(v != 0 for p, v in series.items() if p < 0):
        return False
    got = series.get(n, Fraction(0))
    want = _sign(n) * jn_rho(k, l, n)
    # n! j_n = (l-1+n)!/(l-1)! a(k+l, k+l-1+n)
    closed = Fraction(factorial(l - 1 + n), factorial(l - 1)) * _a_rho(k + l, k + l - 1 + n)
    return got == want and factorial(n) * jn_rho(k, l, n) == closed


def check_identity(identity_id: str, k: int, l: int, n: int = None) -> bool:
    """Exact verification of one identity at ``(k, l)`` (and order ``n``)."""
    if identity_id not in IDENTITIES:
        raise ValueError(f"unknown identity {identity_id!r}; expected one of {IDENTITIES}")
    if k < 1 or l < 1:
        raise ValueError(f"need k >= 1 and l >= 1, got k={k}, l={l}")
    if identity_id == "A1":
        return identity_A1(k, l)
    if identity_id == "A2":
        if k < 2:
            raise ValueError(f"A2 needs k >= 2, got k={k}")
        return identity_A2(k, l)
    if identity_id == "B1":
        return identity_B1(k, l)
    if identity_id == "B2":
        return identity_B2(k, l)
    if n is None or n < 0:
        raise ValueError("B_general needs an order n >= 0")
    return identity_B_general(k, l, n)


def taylor_coefficients_a(j: int, top: int) -> list:
    """Coefficients of ``(1 + e)**j ln(1 + e)`` up to ``e**top`` by polynomial product."""
    power = [Fraction(binomial(j, i)) for i in range(top + 1)]
    log = [Fraction(0)] + [Fraction(_sign(q + 1), q) for q in range(1, top + 1)]
    return _poly_mul(power, log, top)


def regime_consistent(j: int) -> bool:
    """Both formulas for ``a(j, j+1)`` give ``1/(j+1)``."""
    alternating = Fraction(factorial(j) * factorial(0), factorial(j + 1))
    return _a_rho(j, j + 1) == alternating == Fraction(1, j + 1)
