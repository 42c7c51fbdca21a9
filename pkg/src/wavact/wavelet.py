"""Periodized discrete wavelet transform over a small wavelet catalog."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from ._taps import TAPS

#: Catalog order; also the tie-break order of :func:`select_mother_wavelet`.
CATALOG = tuple(TAPS)
ORTHOGONAL_FAMILIES = ("haar", "db")


class WaveletError(ValueError):
    """Input rejected by a transform operation."""


@dataclass(frozen=True)
class WaveletSpec:
    family_name: str
    decomposition_lowpass: tuple
    decomposition_highpass: tuple
    reconstruction_lowpass: tuple
    reconstruction_highpass: tuple

    def __post_init__(self):
        lengths = {len(t) for t in self.taps}
        if len(lengths) != 1:
            raise WaveletError(f"{self.family_name}: tap lists must share one length, got {sorted(lengths)}")
        if self.filter_length < 2 or self.filter_length % 2:
            raise WaveletError(f"{self.family_name}: filter length must be even and >= 2")

    @property
    def taps(self):
        return (self.decomposition_lowpass, self.decomposition_highpass,
                self.reconstruction_lowpass, self.reconstruction_highpass)

    @property
    def filter_length(self) -> int:
        return max(len(t) for t in self.taps)

    @property
    def orthogonal(self) -> bool:
        return self.family_name.startswith(ORTHOGONAL_FAMILIES)

    def arrays(self):
        return tuple(np.asarray(t, dtype=np.float64) for t in self.taps)


def get_wavelet(name: str | WaveletSpec) -> WaveletSpec:
    """Look a wavelet up by family name (``"haar"``, ``"db2"``, ``"rbio3.1"``...)."""
    if isinstance(name, WaveletSpec):
        return name
    try:
        dec_lo, dec_hi, rec_lo, rec_hi = TAPS[name]
    except KeyError:
        raise WaveletError(f"unknown wavelet {name!r}; catalog: {', '.join(CATALOG)}") from None
    return WaveletSpec(name, dec_lo, dec_hi, rec_lo, rec_hi)


def catalog() -> list[WaveletSpec]:
    return [get_wavelet(n) for n in CATALOG]


@dataclass
class CoefficientSet:
    """Averaging band ``c_{Q,k}`` plus detail bands ``d_{j,k}``, j = 1..Q.

    ``details[j - 1]`` holds level ``j``. ``original_length`` is the signal
    length before zero padding; the padded length is ``2 * len(details[0])``.
    """

    averaging: np.ndarray
    details: list = field(default_factory=list)
    level_count: int = 1
    original_length: int = 0

    @property
    def padded_length(self) -> int:
        return 2 * len(self.details[0])

    def flat(self) -> np.ndarray:
        return np.concatenate([self.averaging, *self.details[::-1]])

    def bands(self):
        """Yield ``(level, values)`` with level 0 for the averaging band."""
        yield 0, self.averaging
        for j, d in enumerate(self.details, start=1):
            yield j, d

    def copy(self) -> CoefficientSet:
        return CoefficientSet(self.averaging.copy(), [d.copy() for d in self.details],
                              self.level_count, self.original_length)

    def check_layout(self):
        Q = self.level_count
        if Q < 1 or len(self.details) != Q:
            raise WaveletError(f"expected {Q} detail bands, got {len(self.details)}")
        P = self.padded_length
        if P % (1 << Q):
            raise WaveletError("detail band lengths are not dyadic")
        for j, d in enumerate(self.details, start=1):
            if len(d) != P >> j:
                raise WaveletError(f"level {j} has {len(d)} coefficients, expected {P >> j}")
        if len(self.averaging) != P >> Q:
            raise WaveletError(f"averaging band has {len(self.averaging)} coefficients, expected {P >> Q}")
        if not P - (1 << Q) < self.original_length <= P:
            raise WaveletError(f"original_length {self.original_length} inconsistent with padded length {P}")


def max_decomposition_level(N: int, L: int) -> int:
    """``floor(log2(N / (L - 1) + 1))``, evaluated in exact integer arithmetic.

    >>> max_decomposition_level(8, 2)
    3
    """
    if N < 2 or L < 2:
        raise WaveletError("need N >= 2 and L >= 2")
    # 2**q <= N/(L-1) + 1  <=>  (2**q - 1) * (L - 1) <= N
    q = 0
    while ((1 << (q + 1)) - 1) * (L - 1) <= N:
        q += 1
    return q


def _as_signal(signal) -> np.ndarray:
    x = np.ascontiguousarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise WaveletError("signal must be one-dimensional")
    return x


def dwt(signal, wavelet, levels: int, pad: bool = False) -> CoefficientSet:
    """Q-level periodized DWT by cascaded analysis filter banks.

    Parameters
    ----------
    signal : array_like
        Real 1-D signal of length N.
    wavelet : str or WaveletSpec
    levels : int
        Decomposition depth Q, at most ``max_decomposition_level``.
    pad : bool
        Zero-pad up to the next multiple of ``2**Q`` instead of rejecting
        non-divisible lengths. ``original_length`` records the unpadded length
        and :func:`idwt` trims back to it.
    """
    w = get_wavelet(wavelet)
    x = _as_signal(signal)
    n = len(x)
    if not isinstance(levels, (int, np.integer)) or levels < 1:
        raise WaveletError(f"levels must be a positive integer, got {levels!r}")
    block = 1 << int(levels)
    if n == 0:
        raise WaveletError("empty signal")
    if n % block:
        if not pad:
            raise WaveletError(f"signal length {n} not divisible by 2**{levels}")
        x = np.concatenate([x, np.zeros(block - n % block)])
    limit = max_decomposition_level(len(x), w.filter_length) if len(x) >= 2 else 0
    if levels > limit:
        raise WaveletError(f"levels={levels} exceeds maximum {limit} for N={len(x)}, L={w.filter_length}")
    lo, hi, _, _ = w.arrays()
    details = []
    a = x
    for _ in range(levels):
        a, d = kernels.periodic_analysis(a, lo, hi)
        details.append(d)
    return CoefficientSet(a, details, int(levels), n)


def idwt(coeffs: CoefficientSet, wavelet) -> np.ndarray:
    """Inverse of :func:`dwt`; output trimmed to ``coeffs.original_length``."""
    w = get_wavelet(wavelet)
    coeffs.check_layout()
    _, _, rlo, rhi = w.arrays()
    a = np.ascontiguousarray(coeffs.averaging, dtype=np.float64)
    for d in reversed(coeffs.details):
        a = kernels.periodic_synthesis(a, np.ascontiguousarray(d, dtype=np.float64), rlo, rhi)
    return a[:coeffs.original_length]


def _hard_threshold(coeffs: CoefficientSet, tau: float) -> CoefficientSet:
    out = coeffs.copy()
    out.averaging[np.abs(out.averaging) < tau] = 0.0
    for d in out.details:
        d[np.abs(d) < tau] = 0.0
    return out


def binarize(values, cutoff: float = 0.5) -> np.ndarray:
    return (np.asarray(values) >= cutoff).astype(np.uint8)


def binary_rmse(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return math.sqrt(float(np.mean((a - b) ** 2))) if len(a) else 0.0


@dataclass(frozen=True)
class WaveletScore:
    name: str
    mean_rmse: float
    rmses: tuple


def select_mother_wavelet(training_signals: Sequence, candidates: Iterable, threshold: float,
                          cutoff: float = 0.5):
    """Pick the candidate minimising mean binarized-reconstruction RMSE.

    Each signal is transformed at Q=1, hard-thresholded at ``|c| >= threshold``,
    reconstructed and binarized. Ties go to the earlier candidate.

    Returns ``(best_spec, report)`` where ``report`` lists a
    :class:`WaveletScore` per candidate in input order.
    """
    specs = [get_wavelet(c) for c in candidates]
    if not specs:
        raise WaveletError("no candidate wavelets")
    signals = [_as_signal(s) for s in training_signals]
    report = []
    for w in specs:
        rmses = []
        for x in signals:
            kept = _hard_threshold(dwt(x, w, 1), threshold)
            rmses.append(binary_rmse(binarize(idwt(kept, w), cutoff), x))
        report.append(WaveletScore(w.family_name, float(np.mean(rmses)) if rmses else 0.0, tuple(rmses)))
    best = min(range(len(specs)), key=lambda i: (report[i].mean_rmse, i))
    return specs[best], report


@dataclass
class Scalogram:
    rows: list          # (level, shift, |d_{level,shift}|)
    level_energy: dict  # level -> mean squared detail coefficient

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["level", "shift", "magnitude"])
        wr.writerows((j, k, repr(m)) for j, k, m in self.rows)
        return buf.getvalue()

    def energy_csv(self) -> str:
        lines = ["level,mean_energy"]
        lines += [f"{j},{e!r}" for j, e in sorted(self.level_energy.items())]
        return "\n".join(lines) + "\n"


def scalogram_export(signal, wavelet, levels: int) -> Scalogram:
    """Detail-coefficient magnitudes per (level, shift) and mean energy per level."""
    coeffs = dwt(signal, wavelet, levels)
    rows = []
    energy = {}
    for j, d in enumerate(coeffs.details, start=1):
        rows.extend((j, k, float(v)) for k, v in enumerate(np.abs(d)))
        energy[j] = float(np.mean(d * d))
    return Scalogram(rows, energy)
