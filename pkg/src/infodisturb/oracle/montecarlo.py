"""Haar-measure Monte Carlo estimates of I, G, F and R for one outcome.

With ``p(a) = <psi_a|M^dag M|psi_a>`` and the posterior weight
``q(a) = p(a) / E[p]``, the four measures are ratio estimators::

    I = E[q log2 q]           G = E[p |<1|psi>|**2] / E[p]
    F = E[<psi|M|psi>**2] / E[p]      R = lambda_min(M^dag M) / E[p]

Standard errors come from the delta method (sample variance of the
linearised estimator).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..quantities import MeasurementSpec

MIN_SAMPLES = 10_000
_CHUNK = 262_144
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size < 2:
            raise ValueError("a pure state needs a 1-d amplitude vector of length >= 2")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > 1e-12:
            raise ValueError(f"state is not normalised: |psi|^2 = {norm2}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_samples: int

    def z_score(self, value: float, atol: float = 0.0) -> float:
        """Distance to ``value`` in standard errors, after an absolute slack ``atol``."""
        gap = max(abs(self.mean - value) - atol, 0.0)
        if gap == 0.0:
            return 0.0
        return gap / self.std_error if self.std_error > 0 else math.inf

    def agrees(self, value: float, nsigma: float = 3.0, atol: float = 1e-12) -> bool:
        return self.z_score(value, atol) <= nsigma


@dataclass(frozen=True)
class McQuantities:
    info_shannon: McEstimate
    info_estimation: McEstimate
    fidelity: McEstimate
    reversibility: McEstimate

    def as_dict(self):
        return {"I": self.info_shannon, "G": self.info_estimation,
                "F": self.fidelity, "R": self.reversibility}


def substream(seed: int, worker: int = 0) -> np.random.Generator:
    """Generator for worker ``worker`` of a run seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(worker,)))


def _haar_probs(rng, d, n):
    g = rng.standard_normal((n, d, 2))
    probs = np.einsum("ndk,ndk->nd", g, g)
    probs /= probs.sum(axis=1, keepdims=True)
    return probs


def sample_haar_state(d: int, rng: np.random.Generator) -> PureState:
    """One unitarily invariant random pure state (normalised complex Gaussian)."""
    if d < 2:
        raise ValueError(f"d out of range: need d >= 2, got {d}")
    g = rng.standard_normal((d, 2))
    z = g[:, 0] + 1j * g[:, 1]
    return PureState(z / np.linalg.norm(z))


def haar_amplitudes(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` random states as rows; same stream layout as :func:`sample_haar_state`."""
    g = rng.standard_normal((n, d, 2))
    z = g[..., 0] + 1j * g[..., 1]
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _split(n, parts):
    base, extra = divmod(n, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


def haar_probabilities(d: int, n: int, seed: int, workers: int = 1) -> np.ndarray:
    """``(n, d)`` array of ``|<i|psi>|**2`` over ``n`` Haar-random states.

    Worker ``w`` draws its share from :func:`substream` ``(seed, w)``; the
    shares are concatenated in worker order, so the result only depends on
    ``(d, n, seed, workers)``.
    """
    if d < 2:
        raise ValueError(f"d out of range: need d >= 2, got {d}")
    workers = max(1, int(workers))

    def work(w, size):
        rng = substream(seed, w)
        parts = []
        left = size
        while left > 0:
            m = min(left, _CHUNK)
            parts.append(_haar_probs(rng, d, m))
            left -= m
        return np.concatenate(parts) if parts else np.empty((0, d))

    sizes = _split(n, workers)
    if workers == 1:
        return work(0, n)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        blocks = list(pool.map(work, range(workers), sizes))
    return np.concatenate(blocks)


def _se(z):
    return float(np.std(z, ddof=1) / math.sqrt(z.size))


def _ratio(num, den):
    a, b = num.mean(), den.mean()
    r = a / b
    return r, (num - r * den) / b


def estimates_from_features(feats: np.ndarray, lmin: float) -> McQuantities:
    """Turn per-sample kernel features into the four ratio estimates."""
    n = feats.shape[0]
    p, plogp, fid, gp = feats[:, 0], feats[:, 1], feats[:, 2], feats[:, 3]
    b = p.mean()
    a = plogp.mean()
    info = a / b - math.log2(b)
    z_info = plogp / b - (a / b ** 2 + 1.0 / (b * _LN2)) * p
    g, z_g = _ratio(gp, p)
    f, z_f = _ratio(fid, p)
    rev = lmin / b
    z_r = -lmin * (p - b) / b ** 2
    return McQuantities(
        McEstimate(float(info), _se(z_info), n),
        McEstimate(float(g), _se(z_g), n),
        McEstimate(float(f), _se(z_f), n),
        McEstimate(float(rev), _se(z_r), n),
    )


def _lambda_min(spec):
    return spec.lam ** 2 if spec.invertible else 0.0


def _check_n(n_samples):
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples below minimum: need >= {MIN_SAMPLES}, got {n_samples}")


def mc_estimate_quantities(spec: MeasurementSpec, n_samples: int, seed: int,
                           workers: int = 1) -> McQuantities:
    _check_n(n_samples)
    probs = haar_probabilities(spec.d, n_samples, seed, workers)
    feats = kernels.mc_features(probs, np.asarray(spec.diagonal()))
    return estimates_from_features(feats, _lambda_min(spec))


def mc_estimate_many(specs, n_samples: int, seed: int, workers: int = 1):
    """Estimates for several operators of one dimension from a shared sample.

    Gives the same numbers as calling :func:`mc_estimate_quantities` on each
    spec with the same seed, without redrawing the states.
    """
    specs = list(specs)
    if not specs:
        return []
    _check_n(n_samples)
    dims = {s.d for s in specs}
    if len(dims) != 1:
        raise ValueError("mc_estimate_many needs specs of a single dimension")
    probs = haar_probabilities(dims.pop(), n_samples, seed, workers)
    out = []
    for spec in specs:
        feats = kernels.mc_features(probs, np.asarray(spec.diagonal()))
        out.append(estimates_from_features(feats, _lambda_min(spec)))
    return out


def jackknife_std_errors(feats: np.ndarray, lmin: float, blocks: int = 100) -> McQuantities:
    """Delete-one-block jackknife version of :func:`estimates_from_features`."""
    n = feats.shape[0]
    edges = np.linspace(0, n, blocks + 1).astype(int)
    sums = np.array([feats[edges[i]:edges[i + 1]].sum(axis=0) for i in range(blocks)])
    counts = np.diff(edges)
    total, count = sums.sum(axis=0), counts.sum()
    reps = []
    for i in range(blocks):
        m = (total - sums[i]) / (count - counts[i])
        p, plogp, fid, gp = m
        reps.append((plogp / p - math.log2(p), gp / p, fid / p, lmin / p))
    reps = np.array(reps)
    full = estimates_from_features(feats, lmin)
    spread = np.sqrt((blocks - 1) / blocks * ((reps - reps.mean(axis=0)) ** 2).sum(axis=0))
    ests = list(full.as_dict().values())
    return McQuantities(*(McEstimate(e.mean, float(s), n) for e, s in zip(ests, spread)))
