"""Finite-difference derivatives with Richardson extrapolation."""
from __future__ import annotations

import math

import numpy as np

_EPS = np.finfo(float).eps


class FiniteDifferenceError(ArithmeticError):
    """Extrapolation levels disagree; the step is wrong for this function."""


def _central(fn, x, h, order, f0):
    if order == 1:
        return (fn(x + h) - fn(x - h)) / (2 * h)
    return (fn(x + h) - 2 * f0 + fn(x - h)) / (h * h)


def finite_diff(fn, x: float, order: int = 1, h0: float = None, domain=(0.0, 1.0),
                rtol: float = 1e-4, levels: int = 3) -> float:
    """Central difference of ``fn`` at ``x`` refined by Richardson extrapolation.

    Steps ``h0, h0/2, ...`` (``levels`` of them) feed a tableau that removes
    one power of ``h**2`` per column.  ``h0`` defaults to
    ``0.1 * min(x - lo, hi - x)`` for ``domain = (lo, hi)``; the stencil must
    stay strictly inside the domain.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    if levels < 2:
        raise ValueError(f"need at least 2 levels, got {levels}")
    if h0 is None:
        if domain is None:
            raise ValueError("h0 is required without a domain")
        h0 = 0.1 * min(x - domain[0], domain[1] - x)
    if h0 <= 0:
        raise ValueError(f"step must be positive, got h0={h0}")
    if domain is not None and not (domain[0] < x - h0 and x + h0 < domain[1]):
        raise ValueError(f"[x-h0, x+h0] = [{x - h0}, {x + h0}] leaves the domain {domain}")
    f0 = fn(x)
    table = []
    for m in range(levels):
        row = [_central(fn, x, h0 / 2 ** m, order, f0)]
        for c in range(1, m + 1):
            f = 4 ** c
            row.append((f * row[c - 1] - table[m - 1][c - 1]) / (f - 1))
        table.append(row)
    best, prev = table[-1][-1], table[-1][-2]
    # roundoff floor of the finest difference
    floor = 64 * _EPS * max(abs(f0), 1e-300) / (h0 / 2 ** (levels - 1)) ** order
    if abs(best - prev) > rtol * abs(best) + floor:
        raise FiniteDifferenceError(
            f"Richardson levels disagree at x={x}: {prev!r} vs {best!r}")
    return best


def one_sided_derivative(fn, x: float, order: int, h0: float, levels: int = 4) -> float:
    """``order``-th derivative from the left by backward differences.

    The backward difference has an error series in every power of ``h``, so
    the tableau halves the step ``levels - 1`` times and removes one power
    per column.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    table = []
    for m in range(levels):
        h = h0 / 2 ** m
        diff = sum((-1) ** i * math.comb(order, i) * fn(x - i * h) for i in range(order + 1))
        row = [diff / h ** order]
        for c in range(1, m + 1):
            f = 2 ** c
            row.append((f * row[c - 1] - table[m - 1][c - 1]) / (f - 1))
        table.append(row)
    return table[-1][-1]
