"""Slopes and curvatures of the (k, l) lines in the four trade-off planes.

A plane pairs an information axis (Shannon ``I`` or estimation ``G``) with a
disturbance axis (operation fidelity ``F`` or reversibility ``R``).  Slope and
curvature are taken with ``lam`` as the curve parameter::

    df/dg = f'/g'        d2f/dg2 = (f'' g' - f' g'') / g'**3

The ``I`` planes are ``0/0`` at ``lam = 1``; those endpoints come from the
closed L'Hopital limits instead of the quotient.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import derivatives as dv
from .combinatorics import LN2
from .quantities import MeasurementSpec, eval_F, eval_G, eval_I, eval_R

INF = math.inf
SHAPE_GRID = 1001
ZERO_RTOL = 1e-9


class Plane(enum.Enum):
    GF = ("G", "F")
    GR = ("G", "R")
    IF = ("I", "F")
    IR = ("I", "R")

    @property
    def info_axis(self) -> str:
        return self.value[0]

    @property
    def disturbance_axis(self) -> str:
        return self.value[1]

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text) -> "Plane":
        if isinstance(text, Plane):
            return text
        key = str(text).upper().replace("-", "").replace("–", "").replace("_", "")
        try:
            return cls[key]
        except KeyError:
            raise ValueError(f"unknown plane {text!r}; expected one of gf, gr, if, ir") from None


class ShapeError(ValueError):
    """Curvature sign pattern matches no known shape."""


class NoRootError(ValueError):
    """The I-F curvature has no sign change on (0, 1)."""


@dataclass(frozen=True)
class CurveSample:
    lam: float
    info: float
    disturbance: float
    slope: float
    curvature: float


@dataclass(frozen=True)
class ShapeClass:
    tag: str
    degenerate: bool = False


@dataclass(frozen=True)
class CurveDescriptor:
    k: int
    l: int
    role: str  # "upper" or "lower"
    start_rank: int
    end_rank: int


def _degenerate(plane: Plane, spec: MeasurementSpec) -> bool:
    return plane.disturbance_axis == "R" and not spec.invertible


def _info_pair(plane, spec):
    if plane.info_axis == "G":
        return dv.dG_dlam2(spec), dv.d2G_dlam2(spec)
    return dv._dI_pair(spec)


def _dist_pair(plane, spec):
    if plane.disturbance_axis == "F":
        return dv.dF_dlam2(spec), dv.d2F_dlam2(spec)
    return dv.dR_dlam2(spec), dv.d2R_dlam2(spec)


def slope(plane, spec: MeasurementSpec) -> float:
    """First derivative of disturbance with respect to information."""
    plane = Plane.parse(plane)
    d, k, l, lam = spec.d, spec.k, spec.l, spec.lam
    if _degenerate(plane, spec):
        return 0.0
    if plane is Plane.GF:
        if dv.at_zero(lam):
            return -INF
        if dv.at_one(lam):
            return 0.0
        return -k * (1 - lam) * (k + l * lam) / lam
    if plane is Plane.GR:
        return -k * d * (d + 1) / l
    if plane is Plane.IF:
        if dv.at_zero(lam):
            return -INF
        if dv.at_one(lam):
            j = k + l
            return -j * (j + 1) * LN2 / (2 * (d + 1))
    else:  # IR
        if dv.at_zero(lam):
            return -k * d * LN2 / l
        if dv.at_one(lam):
            return -INF
    g1, _ = _info_pair(plane, spec)
    f1, _ = _dist_pair(plane, spec)
    return f1 / g1


def curvature(plane, spec: MeasurementSpec) -> float:
    """Second derivative of disturbance with respect to information."""
    plane = Plane.parse(plane)
    d, k, l, lam = spec.d, spec.k, spec.l, spec.lam
    if _degenerate(plane, spec) or plane is Plane.GR:
        return 0.0
    if plane is Plane.GF:
        if dv.at_zero(lam):
            return -INF
        return -k * (d + 1) * (k + l * lam * lam) ** 3 / (2 * l * lam ** 3)
    if plane is Plane.IF:
        if dv.at_zero(lam):
            return -INF
        if dv.at_one(lam):
            if k < l:
                return INF
            if k > l:
                return -INF
            return -k * (2 * k + 1) ** 3 * LN2 ** 2 / ((2 * k + 3) * (d + 1))
    else:  # IR
        if dv.at_zero(lam):
            if k == 1:
                return INF
            return k ** 3 / (k - 1) * (d * LN2 / l) ** 2
        if dv.at_one(lam):
            return INF
    g1, g2 = _info_pair(plane, spec)
    f1, f2 = _dist_pair(plane, spec)
    return (f2 * g1 - f1 * g2) / g1 ** 3


def _coords(plane, spec):
    info = eval_G(spec) if plane.info_axis == "G" else eval_I(spec)
    dist = eval_F(spec) if plane.disturbance_axis == "F" else eval_R(spec)
    return info, dist


def _check_grid(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a non-empty 1-d sequence of lambda values")
    if not np.all(np.isfinite(grid)) or grid[0] < 0.0 or grid[-1] > 1.0:
        raise ValueError("grid values must lie in [0, 1]")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    return grid


def sample_curve(plane, d: int, k: int, l: int, grid: Sequence[float]) -> list[CurveSample]:
    """Evaluate the (k, l) line of ``plane`` at every ``lam`` in ``grid``."""
    plane = Plane.parse(plane)
    grid = _check_grid(grid)
    out = []
    for lam in grid:
        spec = MeasurementSpec(d, k, l, float(lam))
        info, dist = _coords(plane, spec)
        out.append(CurveSample(float(lam), info, dist, slope(plane, spec), curvature(plane, spec)))
    return out


def is_degenerate(plane, d: int, k: int, l: int) -> bool:
    return Plane.parse(plane).disturbance_axis == "R" and k + l != d


def _sign_pattern(values):
    finite = [abs(v) for v in values if math.isfinite(v)]
    scale = float(np.median(finite)) if finite else 0.0
    tol = ZERO_RTOL * (1.0 + scale)
    signs = []
    for v in values:
        if math.isnan(v):
            raise ShapeError("curvature evaluated to nan")
        signs.append(0 if abs(v) < tol else (1 if v > 0 else -1))
    return signs


def classify_shape(plane, d: int, k: int, l: int) -> ShapeClass:
    """Classify the (k, l) line by the signs of its curvature along ``lam``."""
    plane = Plane.parse(plane)
    MeasurementSpec(d, k, l, 0.0)  # validates (d, k, l)
    if is_degenerate(plane, d, k, l):
        return ShapeClass("straight_decreasing", degenerate=True)
    lams = [0.0] + [i / (SHAPE_GRID + 1) for i in range(1, SHAPE_GRID + 1)] + [1.0]
    signs = _sign_pattern([curvature(plane, MeasurementSpec(d, k, l, lam)) for lam in lams])
    uniq = set(signs)
    if uniq == {-1}:
        return ShapeClass("convex_decreasing")
    if uniq == {0}:
        return ShapeClass("straight_decreasing")
    if uniq == {1}:
        return ShapeClass("concave_decreasing")
    if 0 not in uniq:
        changes = [i for i in range(1, len(signs)) if signs[i] != signs[i - 1]]
        if len(changes) == 1 and signs[0] == -1 and signs[-1] == 1:
            return ShapeClass("s_shaped_decreasing")
    raise ShapeError(f"unclassifiable curvature pattern for plane {plane.label}, (d,k,l)=({d},{k},{l})")


def find_inflection(d: int, k: int, l: int, tol: float = 1e-10, scan: int = 2000) -> float:
    """``lam`` in (0, 1) where the I-F curvature turns from negative to positive."""
    MeasurementSpec(d, k, l, 0.0)
    if k >= l:
        raise NoRootError(f"I-F curvature keeps its sign for k >= l (k={k}, l={l})")

    def curv(lam):
        return curvature(Plane.IF, MeasurementSpec(d, k, l, lam))

    lams = np.linspace(0.0, 1.0, scan + 1)[1:-1]
    prev_lam, prev = None, None
    bracket = None
    for lam in lams:
        c = curv(float(lam))
        if prev is not None and prev < 0 <= c:
            bracket = (prev_lam, float(lam))
            break
        prev_lam, prev = float(lam), c
    if bracket is None:
        # the sign change may sit in the last scan cell before lam = 1
        lo, hi = float(lams[-1]), 1.0
        if not (curv(lo) < 0):
            raise NoRootError(f"no sign change of I-F curvature found for (d,k,l)=({d},{k},{l})")
        bracket = (lo, hi)
    lo, hi = bracket
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if curv(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def boundary_set(d: int, plane=None) -> list[CurveDescriptor]:
    """Lines forming the upper and lower boundaries of the allowed region.

    The same lines bound all four planes, so ``plane`` only gets validated.
    """
    if plane is not None:
        Plane.parse(plane)
    if d < 2:
        raise ValueError(f"d out of range: need d >= 2, got {d}")
    upper = [CurveDescriptor(1, d - 1, "upper", 1, d)]
    lower = [CurveDescriptor(k, 1, "lower", k, k + 1) for k in range(1, d)]
    return upper + lower
