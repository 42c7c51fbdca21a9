"""Activity probabilities and normalized entropy over windows of binary sensors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .model import SensorSeries, sample_period

_ALIGN = 1e-9


class ActivityError(ValueError):
    pass


class _NoActivity:
    """Marker returned when no sensor was on during a window."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NO_ACTIVITY"

    def __bool__(self):
        return False


NO_ACTIVITY = _NoActivity()


@dataclass(frozen=True)
class ActivitySnapshot:
    window_start: float
    window_length_s: float
    on_times_s: dict
    probabilities: object  # dict sensor_id -> P(s_i), or NO_ACTIVITY
    normalized_entropy: float
    sensor_count: int


def _grid(series_set: Sequence[SensorSeries]):
    if not series_set:
        raise ActivityError("empty sensor set")
    first = series_set[0]
    for s in series_set[1:]:
        if (s.sampling_frequency_hz != first.sampling_frequency_hz
                or s.time_reference_posix_s != first.time_reference_posix_s
                or len(s) != len(first)):
            raise ActivityError(f"series {s.sensor_id!r} is not on the grid of {first.sensor_id!r}")
    return first.time_reference_posix_s, sample_period(first.sampling_frequency_hz), len(first)


def _grid_steps(span: float, period: float, what: str) -> int:
    steps = span / period
    r = round(steps)
    if abs(steps - r) > _ALIGN:
        raise ActivityError(f"{what} ({span} s) is not a multiple of the sample period ({period} s)")
    return int(r)


def window_on_times(series_set: Sequence[SensorSeries], window_start: float,
                    window_length_s: float) -> dict:
    """``T(s_i)``: number of ON samples in the window times the sample period."""
    t0, period, n = _grid(series_set)
    i0 = _grid_steps(window_start - t0, period, "window start offset")
    w = _grid_steps(window_length_s, period, "window length")
    if w <= 0 or i0 < 0 or i0 + w > n:
        raise ActivityError(f"window [{i0}, {i0 + w}) outside the series span [0, {n})")
    return {s.sensor_id: int(np.count_nonzero(s.values[i0:i0 + w])) * period for s in series_set}


def activity_probabilities(on_times: Mapping[str, float]):
    """``P(s_i) = T(s_i) / sum_j T(s_j)``, or :data:`NO_ACTIVITY` if nothing was on."""
    if any(t < 0 for t in on_times.values()):
        raise ActivityError("on-times must be non-negative")
    total = math.fsum(on_times.values())
    if total == 0:
        return NO_ACTIVITY
    return {k: t / total for k, t in on_times.items()}


def normalized_entropy(probabilities, R: int) -> float:
    """Shannon entropy in bits divided by ``log2(R)``.

    Terms are summed with :func:`math.fsum`, which is exactly rounded, so the
    result does not depend on sensor order. :data:`NO_ACTIVITY` maps to 0.
    """
    if R < 2:
        raise ActivityError("normalized entropy needs R >= 2 outcomes")
    if probabilities is NO_ACTIVITY:
        return 0.0
    p = list(probabilities.values()) if isinstance(probabilities, Mapping) else list(probabilities)
    if len(p) > R:
        raise ActivityError(f"{len(p)} probabilities for R={R} outcomes")
    if any(v < 0 for v in p) or abs(math.fsum(p) - 1.0) > 1e-9:
        raise ActivityError("probabilities must be non-negative and sum to 1")
    h = -math.fsum(v * math.log2(v) for v in p if v > 0)
    return min(1.0, max(0.0, h / math.log2(R)))


def snapshot(series_set: Sequence[SensorSeries], window_start: float,
             window_length_s: float) -> ActivitySnapshot:
    on = window_on_times(series_set, window_start, window_length_s)
    probs = activity_probabilities(on)
    R = len(series_set)
    return ActivitySnapshot(window_start, window_length_s, on, probs, normalized_entropy(probs, R), R)


def entropy_stream(series_set: Sequence[SensorSeries], window_length_s: float | None = None,
                   stride_s: float | None = None) -> list[ActivitySnapshot]:
    """One snapshot every ``stride_s`` seconds (both default to one sample period).

    Windows start at the series start and stop once a window would run past the
    last sample.
    """
    t0, period, n = _grid(series_set)
    window_length_s = period if window_length_s is None else window_length_s
    stride_s = period if stride_s is None else stride_s
    w = _grid_steps(window_length_s, period, "window length")
    step = _grid_steps(stride_s, period, "stride")
    if w <= 0 or step <= 0:
        raise ActivityError("window length and stride must be positive")
    R = len(series_set)
    ids = [s.sensor_id for s in series_set]
    # prefix sums give every window's ON count in one pass per sensor
    csum = np.zeros((R, n + 1), dtype=np.int64)
    for r, s in enumerate(series_set):
        np.cumsum(s.values, out=csum[r, 1:])
    out = []
    for i0 in range(0, n - w + 1, step):
        counts = csum[:, i0 + w] - csum[:, i0]
        on = {sid: int(c) * period for sid, c in zip(ids, counts)}
        probs = activity_probabilities(on)
        out.append(ActivitySnapshot(t0 + i0 * period, window_length_s, on, probs,
                                    normalized_entropy(probs, R), R))
    return out


def entropy_values(snapshots: Sequence[ActivitySnapshot]):
    """``(timestamps, entropies)`` arrays from a snapshot stream."""
    ts = np.array([s.window_start for s in snapshots], dtype=np.float64)
    h = np.array([s.normalized_entropy for s in snapshots], dtype=np.float64)
    return ts, h
