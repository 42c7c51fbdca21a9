"""Hot inner loops, each in a numba and a pure-numpy flavour.

The public names (``periodic_analysis``, ``periodic_synthesis``, ``knn``,
``mark_intervals``, ``run_lengths``) are bound at import time to the numba
versions unless ``WAVACT_NUMBA=0``. Both flavours stay importable under their
``*_numba`` / ``*_numpy`` names so they can be checked against each other and
benchmarked.

Periodized filter bank convention (identical to PyWavelets' ``periodization``
mode, filters stored in the same order)::

    a[k] = sum_m lo[m] * x[(2k + L/2 - m) mod N]
    x[(2k + m - L/2 + 1) mod N] += a[k] * rlo[m] + d[k] * rhi[m]
"""

import numpy as np

from ._accel import USE_NUMBA, njit


# -- filter bank -------------------------------------------------------------

def periodic_analysis_numpy(x, lo, hi):
    n = x.shape[0]
    half = n // 2
    L = lo.shape[0]
    base = 2 * np.arange(half) + L // 2
    a = np.zeros(half)
    d = np.zeros(half)
    for m in range(L):
        xm = x[(base - m) % n]
        a += lo[m] * xm
        d += hi[m] * xm
    return a, d


@njit
def periodic_analysis_numba(x, lo, hi):
    n = x.shape[0]
    half = n // 2
    L = lo.shape[0]
    off = L // 2
    a = np.zeros(half)
    d = np.zeros(half)
    for k in range(half):
        sa = 0.0
        sd = 0.0
        for m in range(L):
            v = x[(2 * k + off - m) % n]
            sa += lo[m] * v
            sd += hi[m] * v
        a[k] = sa
        d[k] = sd
    return a, d


def periodic_synthesis_numpy(a, d, rlo, rhi):
    half = a.shape[0]
    n = 2 * half
    L = rlo.shape[0]
    base = 2 * np.arange(half) - (L // 2 - 1)
    x = np.zeros(n)
    for m in range(L):
        # positions are distinct for fixed m, so fancy-index += is safe
        x[(base + m) % n] += a * rlo[m] + d * rhi[m]
    return x


@njit
def periodic_synthesis_numba(a, d, rlo, rhi):
    half = a.shape[0]
    n = 2 * half
    L = rlo.shape[0]
    off = L // 2 - 1
    x = np.zeros(n)
    for k in range(half):
        ak = a[k]
        dk = d[k]
        for m in range(L):
            x[(2 * k + m - off) % n] += ak * rlo[m] + dk * rhi[m]
    return x


# -- nearest neighbours ------------------------------------------------------

def knn_numpy(query, ref, k, exclude_self):
    """k nearest rows of ``ref`` for each row of ``query`` (Euclidean).

    Ties are broken by the lower reference index. With ``exclude_self`` the
    row ``i`` of ``ref`` is never a neighbour of query row ``i``.
    """
    nq = query.shape[0]
    nr = ref.shape[0]
    dist = np.empty((nq, k))
    idx = np.empty((nq, k), dtype=np.int64)
    chunk = max(1, 4_000_000 // max(nr * query.shape[1], 1))
    for s in range(0, nq, chunk):
        q = query[s:s + chunk]
        diff = q[:, None, :] - ref[None, :, :]
        dd = np.sqrt((diff * diff).sum(axis=2))
        if exclude_self:
            rows = np.arange(q.shape[0])
            dd[rows, rows + s] = np.inf
        order = np.argsort(dd, axis=1, kind="stable")[:, :k]
        idx[s:s + chunk] = order
        dist[s:s + chunk] = np.take_along_axis(dd, order, axis=1)
    return dist, idx


@njit
def knn_numba(query, ref, k, exclude_self):
    nq = query.shape[0]
    nr = ref.shape[0]
    dim = query.shape[1]
    dist = np.empty((nq, k))
    idx = np.empty((nq, k), dtype=np.int64)
    for i in range(nq):
        bd = np.full(k, np.inf)
        bi = np.full(k, -1, dtype=np.int64)
        for j in range(nr):
            if exclude_self and j == i:
                continue
            s = 0.0
            for c in range(dim):
                t = query[i, c] - ref[j, c]
                s += t * t
            dj = np.sqrt(s)
            if bi[k - 1] >= 0 and dj >= bd[k - 1]:
                continue
            p = k - 1
            while p > 0 and (bi[p - 1] < 0 or bd[p - 1] > dj):
                bd[p] = bd[p - 1]
                bi[p] = bi[p - 1]
                p -= 1
            bd[p] = dj
            bi[p] = j
        dist[i] = bd
        idx[i] = bi
    return dist, idx


# -- binary grids ------------------------------------------------------------

def mark_intervals_numpy(first, last, length):
    """Grid of ``length`` cells with cells ``first[i]..last[i]`` (inclusive) set."""
    diff = np.zeros(length + 1, dtype=np.int64)
    np.add.at(diff, first, 1)
    np.add.at(diff, last + 1, -1)
    return (np.cumsum(diff[:length]) > 0).astype(np.uint8)


@njit
def mark_intervals_numba(first, last, length):
    out = np.zeros(length, dtype=np.uint8)
    for i in range(first.shape[0]):
        for c in range(first[i], last[i] + 1):
            out[c] = 1
    return out


def run_lengths_numpy(x):
    """Length of the run of ones ending at each sample (0 where x is 0)."""
    n = x.shape[0]
    pos = np.arange(n)
    last_zero = np.maximum.accumulate(np.where(x == 0, pos, -1))
    return np.where(x != 0, pos - last_zero, 0).astype(np.int64)


@njit
def run_lengths_numba(x):
    n = x.shape[0]
    out = np.zeros(n, dtype=np.int64)
    run = 0
    for i in range(n):
        if x[i] != 0:
            run += 1
        else:
            run = 0
        out[i] = run
    return out


if USE_NUMBA:
    periodic_analysis = periodic_analysis_numba
    periodic_synthesis = periodic_synthesis_numba
    knn = knn_numba
    mark_intervals = mark_intervals_numba
    run_lengths = run_lengths_numba
else:
    periodic_analysis = periodic_analysis_numpy
    periodic_synthesis = periodic_synthesis_numpy
    knn = knn_numpy
    mark_intervals = mark_intervals_numpy
    run_lengths = run_lengths_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
