"""Wavelet-based periodic models of binary sensors.

A model keeps the thresholded DWT coefficients of one training period plus
the metadata needed to map any POSIX time onto that period::

    n_i = ceil((t_f - t0) * f_s) mod N

and reads the forecast from the binarized inverse transform.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._io import FORMAT_VERSION, atomic_write_text, posix_number, read_json
from .wavelet import (CoefficientSet, WaveletError, binarize, binary_rmse, dwt, get_wavelet,
                      idwt)

DEFAULT_WAVELET = "rbio3.1"
DEFAULT_LEVELS = 1
REFERENCE_TAU = 0.54
DEFAULT_CUTOFF = 0.5
AVERAGING = 0  # level index of the averaging band in sparse coefficient triples

_SNAP = 1e-9


class ModelError(ValueError):
    """Invalid model configuration or model file."""


def sample_period(fs: float) -> float:
    p = 1.0 / fs
    r = round(p)
    return float(r) if r and abs(p - r) < 1e-9 else p


@dataclass(frozen=True, eq=False)
class SensorSeries:
    """Uniformly sampled binary signal ``x[n]`` starting at ``time_reference_posix_s``."""

    sensor_id: str
    values: np.ndarray
    sampling_frequency_hz: float
    time_reference_posix_s: float
    location: str = ""
    reading_type: str = "motion"

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 1:
            raise ModelError("series values must be one-dimensional")
        if v.size and not np.isin(v, (0, 1)).all():
            raise ModelError(f"{self.sensor_id}: series values must be 0/1")
        if not self.sampling_frequency_hz > 0:
            raise ModelError("sampling frequency must be positive")
        object.__setattr__(self, "values", v.astype(np.uint8))

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, SensorSeries):
            return NotImplemented
        return (self.sensor_id == other.sensor_id and self.location == other.location
                and self.reading_type == other.reading_type
                and self.sampling_frequency_hz == other.sampling_frequency_hz
                and self.time_reference_posix_s == other.time_reference_posix_s
                and np.array_equal(self.values, other.values))

    @property
    def sample_period_s(self) -> float:
        return sample_period(self.sampling_frequency_hz)

    def timestamps(self) -> np.ndarray:
        return self.time_reference_posix_s + np.arange(len(self.values)) * self.sample_period_s

    def slice(self, start: int, stop: int) -> SensorSeries:
        """Samples ``start:stop`` with the time reference moved accordingly."""
        return SensorSeries(self.sensor_id, self.values[start:stop], self.sampling_frequency_hz,
                            self.time_reference_posix_s + start * self.sample_period_s,
                            self.location, self.reading_type)


@dataclass(frozen=True, eq=False)
class SparseCoefficients:
    """Kept coefficients as parallel ``(level, shift, value)`` arrays.

    Level 0 is the averaging band ``c_{Q,k}``; level j >= 1 is ``d_{j,k}``.
    """

    levels: np.ndarray
    shifts: np.ndarray
    values: np.ndarray

    @property
    def kept_count(self) -> int:
        return int(self.values.shape[0])

    def as_dict(self) -> dict:
        return {(int(j), int(k)): float(v) for j, k, v in zip(self.levels, self.shifts, self.values)}

    def __eq__(self, other):
        if not isinstance(other, SparseCoefficients):
            return NotImplemented
        return (np.array_equal(self.levels, other.levels) and np.array_equal(self.shifts, other.shifts)
                and np.array_equal(self.values, other.values))


def threshold_coefficients(coeffs: CoefficientSet, tau: float) -> tuple[SparseCoefficients, int]:
    """Keep exactly the coefficients with ``|c| >= tau``; returns ``(kept, kept_count)``."""
    if not tau >= 0:
        raise ModelError(f"threshold must be >= 0, got {tau!r}")
    lv, sh, va = [], [], []
    for level, band in coeffs.bands():
        band = np.asarray(band, dtype=np.float64)
        (k,) = np.nonzero(np.abs(band) >= tau)
        lv.append(np.full(k.shape, level, dtype=np.int64))
        sh.append(k.astype(np.int64))
        va.append(band[k])
    kept = SparseCoefficients(np.concatenate(lv), np.concatenate(sh), np.concatenate(va))
    return kept, kept.kept_count


def densify(kept: SparseCoefficients, levels: int, length: int) -> CoefficientSet:
    """Rebuild a full coefficient set (absent entries are 0) for a length-``length`` signal."""
    block = 1 << levels
    padded = -(-length // block) * block
    averaging = np.zeros(padded >> levels)
    details = [np.zeros(padded >> j) for j in range(1, levels + 1)]
    bands = [averaging] + details
    if kept.kept_count:
        if kept.levels.min() < 0 or kept.levels.max() > levels:
            raise ModelError("coefficient level outside 0..Q")
    for j in range(levels + 1):
        sel = kept.levels == j
        k = kept.shifts[sel]
        if k.size and (k.min() < 0 or k.max() >= len(bands[j])):
            raise ModelError(f"coefficient shift out of range at level {j}")
        bands[j][k] = kept.values[sel]
    return CoefficientSet(averaging, details, levels, length)


def reconstruct_values(kept: SparseCoefficients, wavelet, levels: int, length: int,
                       cutoff: float = DEFAULT_CUTOFF) -> np.ndarray:
    return binarize(idwt(densify(kept, levels, length), wavelet), cutoff)


@dataclass(frozen=True, eq=False)
class WaveletModel:
    """The tuple {C_hat, wavelet, Q, tau, N, f_s, t0} for one sensor."""

    kept: SparseCoefficients
    wavelet_name: str
    levels: int
    threshold: float
    period_samples: int
    sampling_frequency_hz: float
    time_reference_posix_s: float
    binarize_cutoff: float = DEFAULT_CUTOFF
    sensor_id: str = ""
    diagnostics: dict = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if self.period_samples < 1:
            raise ModelError("period_samples must be positive")
        if self.levels < 1:
            raise ModelError("levels must be >= 1")
        if not self.sampling_frequency_hz > 0:
            raise ModelError("sampling frequency must be positive")
        if not 0 < self.binarize_cutoff < 1:
            raise ModelError("binarize_cutoff must lie in (0, 1)")
        if not self.threshold >= 0:
            raise ModelError("threshold must be >= 0")

    @property
    def kept_count(self) -> int:
        return self.kept.kept_count

    def __eq__(self, other):
        if not isinstance(other, WaveletModel):
            return NotImplemented
        return (self.kept == other.kept and self.wavelet_name == other.wavelet_name
                and self.levels == other.levels and self.threshold == other.threshold
                and self.period_samples == other.period_samples
                and self.sampling_frequency_hz == other.sampling_frequency_hz
                and self.time_reference_posix_s == other.time_reference_posix_s
                and self.binarize_cutoff == other.binarize_cutoff
                and self.sensor_id == other.sensor_id and self.diagnostics == other.diagnostics)

    def reconstruction(self) -> np.ndarray:
        """Binarized reconstruction of one period, computed once and shared read-only."""
        cached = self.__dict__.get("_reconstruction")
        if cached is not None:
            return cached
        with self._lock:
            cached = self.__dict__.get("_reconstruction")
            if cached is None:
                try:
                    wavelet = get_wavelet(self.wavelet_name)
                except WaveletError as exc:
                    raise ModelError(str(exc)) from None
                cached = reconstruct_values(self.kept, wavelet, self.levels, self.period_samples,
                                            self.binarize_cutoff)
                cached.setflags(write=False)
                object.__setattr__(self, "_reconstruction", cached)
        return cached


def lossless_tau(values, wavelet=DEFAULT_WAVELET, levels: int = DEFAULT_LEVELS,
                 cutoff: float = DEFAULT_CUTOFF) -> float:
    """Largest threshold whose binarized reconstruction reproduces ``values`` exactly.

    Every distinct coefficient magnitude is a candidate (a threshold between
    two magnitudes keeps the same set as the upper one), scanned downwards.
    If even the empty set reconstructs the signal the returned value is the
    smallest float that discards every coefficient.
    """
    w = get_wavelet(wavelet)
    x = np.asarray(values, dtype=np.float64)
    coeffs = dwt(x, w, levels, pad=True)
    mags = np.abs(coeffs.flat())
    target = binarize(x, cutoff)
    empty = SparseCoefficients(np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0))
    if np.array_equal(reconstruct_values(empty, w, levels, len(x), cutoff), target):
        return float(np.nextafter(mags.max(initial=0.0), np.inf))
    for tau in np.unique(mags)[::-1]:
        kept, _ = threshold_coefficients(coeffs, float(tau))
        if np.array_equal(reconstruct_values(kept, w, levels, len(x), cutoff), target):
            return float(tau)
    return 0.0  # pragma: no cover - tau = 0 keeps everything and is always exact


def build_model(series: SensorSeries, wavelet_name: str = DEFAULT_WAVELET, levels: int = DEFAULT_LEVELS,
                tau: float | str = REFERENCE_TAU, cutoff: float = DEFAULT_CUTOFF) -> WaveletModel:
    """Transform one training period, threshold it and wrap the result as a model.

    ``tau="lossless"`` picks :func:`lossless_tau` for this series. The
    diagnostics record ``kept_count`` and the training RMSE of the binarized
    reconstruction.
    """
    if len(series) == 0:
        raise ModelError("cannot build a model from an empty series")
    w = get_wavelet(wavelet_name)
    x = series.values.astype(np.float64)
    if isinstance(tau, str):
        if tau not in ("lossless", "auto"):
            raise ModelError(f"unknown tau mode {tau!r}")
        tau = lossless_tau(x, w, levels, cutoff)
    coeffs = dwt(x, w, levels, pad=True)
    kept, kept_count = threshold_coefficients(coeffs, float(tau))
    recon = reconstruct_values(kept, w, levels, len(x), cutoff)
    diagnostics = {"kept_count": kept_count, "training_rmse": binary_rmse(recon, series.values)}
    return WaveletModel(kept, w.family_name, int(levels), float(tau), len(x),
                        float(series.sampling_frequency_hz), posix_number(series.time_reference_posix_s),
                        float(cutoff), series.sensor_id, diagnostics)


def reconstruct(model: WaveletModel) -> np.ndarray:
    return model.reconstruction()


def forecast_indices(model: WaveletModel, times) -> np.ndarray:
    """Vectorised ``ceil((t - t0) * f_s) mod N``; products within 1e-9 of an integer snap to it."""
    x = (np.asarray(times, dtype=np.float64) - model.time_reference_posix_s) * model.sampling_frequency_hz
    r = np.round(x)
    x = np.where(np.abs(x - r) < _SNAP, r, x)
    return np.mod(np.ceil(x).astype(np.int64), model.period_samples)


@dataclass(frozen=True)
class Forecast:
    index: int
    value: int


def forecast(model: WaveletModel, t_f: float) -> Forecast:
    n = int(forecast_indices(model, [t_f])[0])
    return Forecast(n, int(model.reconstruction()[n]))


def forecast_window(model: WaveletModel, t_start: float, t_end: float) -> SensorSeries:
    """Forecast on the grid ``t_start + k / f_s`` for every grid time ``<= t_end``.

    ``t_start == t_end`` yields a single sample.
    """
    if t_end < t_start:
        raise ModelError("t_end must not precede t_start")
    period = sample_period(model.sampling_frequency_hz)
    count = int(math.floor((t_end - t_start) / period + _SNAP)) + 1
    times = t_start + np.arange(count) * period
    values = model.reconstruction()[forecast_indices(model, times)]
    return SensorSeries(model.sensor_id, values, model.sampling_frequency_hz, posix_number(t_start))


# -- persistence ---------------------------------------------------------------

def model_to_json(model: WaveletModel) -> str:
    header = {
        "format_version": FORMAT_VERSION,
        "kind": "wavelet",
        "sensor_id": model.sensor_id,
        "wavelet": model.wavelet_name,
        "levels": model.levels,
        "threshold": model.threshold,
        "period_samples": model.period_samples,
        "sampling_frequency_hz": model.sampling_frequency_hz,
        "time_reference_posix_s": model.time_reference_posix_s,
        "binarize_cutoff": model.binarize_cutoff,
        "diagnostics": model.diagnostics,
    }
    lines = ["{"]
    lines += [f"  {json.dumps(k)}: {json.dumps(v)}," for k, v in header.items()]
    triples = [json.dumps([int(j), int(k), float(v)])
               for j, k, v in zip(model.kept.levels, model.kept.shifts, model.kept.values)]
    lines.append('  "coefficients": [' + ("\n    " + ",\n    ".join(triples) + "\n  " if triples else "") + "]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def model_from_dict(doc: dict) -> WaveletModel:
    if doc.get("kind") != "wavelet":
        raise ModelError(f"not a wavelet model document (kind={doc.get('kind')!r})")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ModelError(f"unsupported format_version {doc.get('format_version')!r}")
    triples = doc["coefficients"]
    arr = np.array(triples, dtype=object).reshape(-1, 3) if triples else np.zeros((0, 3), dtype=object)
    kept = SparseCoefficients(arr[:, 0].astype(np.int64), arr[:, 1].astype(np.int64),
                              arr[:, 2].astype(np.float64))
    return WaveletModel(kept, doc["wavelet"], int(doc["levels"]), float(doc["threshold"]),
                        int(doc["period_samples"]), float(doc["sampling_frequency_hz"]),
                        doc["time_reference_posix_s"], float(doc["binarize_cutoff"]),
                        doc.get("sensor_id", ""), doc.get("diagnostics", {}))


def save_model(model: WaveletModel, path) -> Path:
    path = Path(path)
    if path.is_dir():
        path = path / f"{model.sensor_id}.wmodel.json"
    return atomic_write_text(path, model_to_json(model))


def load_model(path) -> WaveletModel:
    return model_from_dict(read_json(path))
