"""Frequency Map Enhancement baseline for binary sensors.

The state probability is modelled as the training mean plus the K strongest
non-DC harmonics of the training signal's discrete Fourier spectrum::

    p(t) = clamp(mean + sum_i a_i * cos(2 pi f_i (t - t0) + phi_i), 0, 1)
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._io import FORMAT_VERSION, atomic_write_text, posix_number, read_json
from .model import ModelError, SensorSeries

DEFAULT_COMPONENTS = 3
DEFAULT_CUTOFF = 0.5


@dataclass(frozen=True)
class FremenModel:
    sensor_id: str
    mean_activation: float
    components: tuple  # ((frequency_hz, amplitude, phase), ...) by descending amplitude
    time_reference_posix_s: float
    binarize_cutoff: float = DEFAULT_CUTOFF

    @property
    def component_count(self) -> int:
        return len(self.components)


def fit_fremen(series: SensorSeries, K: int = DEFAULT_COMPONENTS, cutoff: float = DEFAULT_CUTOFF) -> FremenModel:
    """Keep the mean and the ``K`` largest-amplitude non-DC DFT bins of ``series``.

    Equal amplitudes are ordered by ascending frequency.
    """
    if not isinstance(K, (int, np.integer)) or K <= 0:
        raise ModelError(f"component count must be a positive integer, got {K!r}")
    x = series.values.astype(np.float64)
    N = len(x)
    if N < 2 * K + 1:
        raise ModelError(f"series of length {N} too short for K={K} (need >= {2 * K + 1})")
    spec = np.fft.rfft(x)
    k = np.arange(1, len(spec))
    amp = 2.0 * np.abs(spec[1:]) / N
    if N % 2 == 0:
        amp[-1] /= 2.0  # Nyquist bin has no mirrored partner
    phase = np.angle(spec[1:])
    order = np.argsort(-amp, kind="stable")[:K]
    fs = series.sampling_frequency_hz
    comps = tuple((float(k[i] * fs / N), float(amp[i]), float(phase[i])) for i in order)
    return FremenModel(series.sensor_id, float(spec[0].real / N), comps,
                       posix_number(series.time_reference_posix_s), float(cutoff))


def fremen_probabilities(model: FremenModel, times) -> np.ndarray:
    dt = np.asarray(times, dtype=np.float64) - model.time_reference_posix_s
    p = np.full(dt.shape, model.mean_activation)
    for f, a, ph in model.components:
        p += a * np.cos(2.0 * np.pi * f * dt + ph)
    return np.clip(p, 0.0, 1.0)


@dataclass(frozen=True)
class FremenPrediction:
    probability: float
    value: int


def predict_fremen(model: FremenModel, t: float) -> FremenPrediction:
    p = float(fremen_probabilities(model, [t])[0])
    return FremenPrediction(p, int(p >= model.binarize_cutoff))


def fremen_window(model: FremenModel, t_start: float, period_s: float, count: int,
                  fs: float) -> SensorSeries:
    times = t_start + np.arange(count) * period_s
    p = fremen_probabilities(model, times)
    return SensorSeries(model.sensor_id, (p >= model.binarize_cutoff).astype(np.uint8), fs,
                        posix_number(t_start))


def fremen_to_json(model: FremenModel) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "fremen",
        "sensor_id": model.sensor_id,
        "mean_activation": model.mean_activation,
        "time_reference_posix_s": model.time_reference_posix_s,
        "binarize_cutoff": model.binarize_cutoff,
        "components": [list(c) for c in model.components],
    }
    return json.dumps(doc, indent=2) + "\n"


def fremen_from_dict(doc: dict) -> FremenModel:
    if doc.get("kind") != "fremen":
        raise ModelError(f"not a FreMEn model document (kind={doc.get('kind')!r})")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ModelError(f"unsupported format_version {doc.get('format_version')!r}")
    comps = tuple(tuple(float(v) for v in c) for c in doc["components"])
    return FremenModel(doc["sensor_id"], float(doc["mean_activation"]), comps,
                       doc["time_reference_posix_s"], float(doc["binarize_cutoff"]))


def save_fremen(model: FremenModel, path) -> Path:
    path = Path(path)
    if path.is_dir():
        path = path / f"{model.sensor_id}.fremen.json"
    return atomic_write_text(path, fremen_to_json(model))


def load_fremen(path) -> FremenModel:
    return fremen_from_dict(read_json(path))
