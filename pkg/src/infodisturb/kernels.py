"""Per-sample kernels for the Monte Carlo oracle.

Both variants take ``probs``, an ``(n, d)`` array of ``|<i|psi>|**2`` for
Haar-random states, and the operator diagonal.  The numba version is used
when available unless ``INFODISTURB_NO_NUMBA=1``; the numpy version is always
importable so the two can be compared.
"""
import numpy as np

from ._accel import HAVE_NUMBA, njit

INV_LN2 = 1.0 / np.log(2.0)


def mc_features_numpy(probs, diag):
    """Columns: ``p``, ``p log2 p``, ``<psi|M|psi>**2``, ``p |<1|psi>|**2``."""
    diag = np.asarray(diag, dtype=np.float64)
    p = probs @ (diag * diag)
    amp = probs @ diag
    out = np.empty((probs.shape[0], 4))
    out[:, 0] = p
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(p > 0.0, p * np.log(p) * INV_LN2, 0.0)
    out[:, 1] = plogp
    out[:, 2] = amp * amp
    out[:, 3] = p * probs[:, 0]
    return out


def reversal_numpy(probs, diag):
    """Outcome probability and optimal-reversal success probability per state."""
    diag = np.asarray(diag, dtype=np.float64)
    m2 = diag * diag
    p = probs @ m2
    return p, m2.min() / p


@njit(cache=True, nogil=True)
def _mc_features_nb(probs, diag):
    n, d = probs.shape
    out = np.empty((n, 4))
    m2 = diag * diag
    for s in range(n):
        p = 0.0
        amp = 0.0
        for i in range(d):
            w = probs[s, i]
            p += m2[i] * w
            amp += diag[i] * w
        out[s, 0] = p
        out[s, 1] = p * np.log(p) * INV_LN2 if p > 0.0 else 0.0
        out[s, 2] = amp * amp
        out[s, 3] = p * probs[s, 0]
    return out


@njit(cache=True, nogil=True)
def _reversal_nb(probs, diag):
    n, d = probs.shape
    m2 = diag * diag
    lmin = m2[0]
    for i in range(d):
        if m2[i] < lmin:
            lmin = m2[i]
    p = np.empty(n)
    rec = np.empty(n)
    for s in range(n):
        acc = 0.0
        for i in range(d):
            acc += m2[i] * probs[s, i]
        p[s] = acc
        rec[s] = lmin / acc
    return p, rec


def mc_features_numba(probs, diag):
    return _mc_features_nb(np.ascontiguousarray(probs, dtype=np.float64),
                           np.asarray(diag, dtype=np.float64))


def reversal_numba(probs, diag):
    return _reversal_nb(np.ascontiguousarray(probs, dtype=np.float64),
                        np.asarray(diag, dtype=np.float64))


if HAVE_NUMBA:
    mc_features = mc_features_numba
    reversal = reversal_numba
else:
    mc_features = mc_features_numpy
    reversal = reversal_numpy
