"""Classification and stream-similarity scores, reported as percentages.

Undefined values (a zero denominator) are ``None`` and serialize as ``NA``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np


class MetricsError(ValueError):
    pass


@dataclass(frozen=True)
class MetricsReport:
    precision: float | None = None
    recall: float | None = None
    accuracy: float | None = None
    f1: float | None = None
    rmse: float | None = None
    pearson_correlation: float | None = None
    explained_variance: float | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def _pair(a, b, min_len=1):
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise MetricsError(f"length mismatch: {a.size} vs {b.size}")
    if a.size < min_len:
        raise MetricsError(f"need at least {min_len} samples")
    return a, b


def _pct(num, den):
    return 100.0 * num / den if den else None


def binary_classification_metrics(predicted, truth) -> MetricsReport:
    """Confusion-matrix scores with ON (1) as the positive class."""
    p, t = _pair(predicted, truth)
    if not (np.isin(p, (0, 1)).all() and np.isin(t, (0, 1)).all()):
        raise MetricsError("binary vectors expected")
    p = p.astype(bool)
    t = t.astype(bool)
    tp = int(np.sum(p & t))
    fp = int(np.sum(p & ~t))
    fn = int(np.sum(~p & t))
    precision = _pct(tp, tp + fp)
    recall = _pct(tp, tp + fn)
    # 2TP / (2TP + FP + FN) equals the harmonic mean of precision and recall
    # whenever both exist, and stays defined when only one of them does
    f1 = _pct(2 * tp, 2 * tp + fp + fn)
    return MetricsReport(precision, recall, _pct(int(np.sum(p == t)), p.size), f1)


def similarity_metrics(a, b) -> MetricsReport:
    """RMSE, Pearson correlation and explained variance of ``b`` against ``a``.

    Streams are expected on a [0, 1] scale; every output is multiplied by 100.
    Explained variance is ``1 - Var(a - b) / Var(a)`` and can be negative when
    ``b`` is a worse fit than the constant mean of ``a``. Correlation is
    undefined when either stream is constant.
    """
    a, b = _pair(a, b, min_len=2)
    rmse = 100.0 * math.sqrt(float(np.mean((a - b) ** 2)))
    # a stream counts as constant when its values are all equal; np.var of a
    # constant float array can come out as a tiny nonzero number
    a_const, b_const = np.ptp(a) == 0, np.ptp(b) == 0
    va, vb = float(np.var(a)), float(np.var(b))
    if not (a_const or b_const):
        r = float(np.mean((a - a.mean()) * (b - b.mean()))) / math.sqrt(va * vb)
        corr = 100.0 * min(1.0, max(-1.0, r))
    else:
        corr = None
    ev = 100.0 * (1.0 - float(np.var(a - b)) / va) if not a_const else None
    return MetricsReport(rmse=rmse, pearson_correlation=corr, explained_variance=ev)
