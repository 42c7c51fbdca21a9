"""Anomaly decisions: a per-timestep grounded hybrid Markov logic network plus
two statistical baselines (Gaussian1D and LOF) and detector-agreement tools.

The grounded network at time ``t_i`` has three boolean query nodes::

    IsStatisticalAnomaly (S), IsActionAnomaly (A), IsAnomaly (Y)

and therefore eight possible worlds, so the partition function is computed
exactly by enumeration. Continuous evidence (entropies, door-open durations)
is observed, so every comparison in a clause body collapses to a crisp truth
value before grounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime
from typing import Mapping, Sequence
from zoneinfo import ZoneInfo

import numpy as np

from . import kernels
from ._io import read_json, write_csv
from .model import SensorSeries, sample_period

#: World ``w`` assigns S = bit 0, A = bit 1, Y = bit 2.
WORLDS = tuple(tuple(bool(w >> b & 1) for b in range(3)) for w in range(8))
QUERY_NODES = ("IsStatisticalAnomaly", "IsActionAnomaly", "IsAnomaly")

CLAUSE_FAMILIES = ("stat_threshold", "stat_expected", "door_open", "rest_motion", "combine")
DEFAULT_CLAUSE_WEIGHT = 10.0
DEFAULT_PRIOR_WEIGHT = 2.0
FLAG_PROBABILITY = 0.5
LOF_EPS = 1e-10


class ConfigError(ValueError):
    pass


class DetectionError(ValueError):
    pass


# -- configuration ---------------------------------------------------------------

def parse_clock_interval(text: str) -> tuple[int, int]:
    """``"23:00-07:00"`` -> minutes of day ``(1380, 420)``."""
    try:
        a, b = text.split("-")
        mins = []
        for part in (a, b):
            hh, mm = part.strip().split(":")
            h, m = int(hh), int(mm)
            if not (0 <= h < 24 and 0 <= m < 60):
                raise ValueError
            mins.append(60 * h + m)
    except ValueError:
        raise ConfigError(f"bad clock interval {text!r}; expected HH:MM-HH:MM") from None
    if mins[0] == mins[1]:
        raise ConfigError(f"empty clock interval {text!r}")
    return mins[0], mins[1]


@dataclass(frozen=True)
class RuleConfig:
    entropy_threshold: float = 0.9
    door_open_max_s: float = 300.0
    rest_interval: str = "23:00-07:00"
    timezone: str = "UTC"
    clause_weights: Mapping[str, float] = field(
        default_factory=lambda: {c: DEFAULT_CLAUSE_WEIGHT for c in CLAUSE_FAMILIES})
    prior_weight: float = DEFAULT_PRIOR_WEIGHT

    def __post_init__(self):
        if not 0 <= self.entropy_threshold <= 1:
            raise ConfigError("entropy_threshold must lie in [0, 1]")
        if not self.door_open_max_s > 0:
            raise ConfigError("door_open_max_s must be positive")
        parse_clock_interval(self.rest_interval)
        try:
            ZoneInfo(self.timezone)
        except Exception:
            raise ConfigError(f"unknown timezone {self.timezone!r}") from None
        weights = {c: DEFAULT_CLAUSE_WEIGHT for c in CLAUSE_FAMILIES}
        for k, v in dict(self.clause_weights).items():
            if k not in CLAUSE_FAMILIES:
                raise ConfigError(f"unknown clause {k!r}; known: {', '.join(CLAUSE_FAMILIES)}")
            if not float(v) > 0:
                raise ConfigError(f"clause weight for {k!r} must be positive")
            weights[k] = float(v)
        object.__setattr__(self, "clause_weights", weights)

    @property
    def rest_minutes(self) -> tuple[int, int]:
        return parse_clock_interval(self.rest_interval)

    def weight(self, clause_id: str) -> float:
        return self.clause_weights[clause_id.split(":", 1)[0]]

    def in_rest_interval(self, t: float) -> bool:
        start, end = self.rest_minutes
        if self.timezone == "UTC":
            minute = int((t % 86400) // 60)
        else:
            local = datetime.fromtimestamp(t, ZoneInfo(self.timezone))
            minute = local.hour * 60 + local.minute
        if start < end:
            return start <= minute < end
        return minute >= start or minute < end

    def to_dict(self) -> dict:
        return {"entropy_threshold": self.entropy_threshold, "door_open_max_s": self.door_open_max_s,
                "rest_interval": self.rest_interval, "timezone": self.timezone,
                "clause_weights": dict(self.clause_weights), "prior_weight": self.prior_weight}


def load_rules(path=None, weights_path=None) -> RuleConfig:
    doc = dict(read_json(path)) if path else {}
    if weights_path:
        w = dict(doc.get("clause_weights", {}))
        extra = read_json(weights_path)
        prior = extra.pop("prior", None)
        w.update(extra)
        doc["clause_weights"] = w
        if prior is not None:
            doc["prior_weight"] = prior
    unknown = set(doc) - set(RuleConfig.__dataclass_fields__)
    if unknown:
        raise ConfigError(f"unknown rule settings: {sorted(unknown)}")
    return RuleConfig(**doc)


# -- grounding -------------------------------------------------------------------

@dataclass(frozen=True)
class SensorEvidence:
    door_open_durations: Mapping[str, float] = field(default_factory=dict)
    motion_active: Mapping[str, bool] = field(default_factory=dict)
    in_rest_interval: bool | None = None  # derived from the timestamp when None


@dataclass(frozen=True)
class ClauseGrounding:
    clause_id: str
    satisfied: tuple  # one bool per world in WORLDS order
    weight: float
    antecedent: bool | None  # crisp evidence body; None for clauses over query nodes only


@dataclass(frozen=True)
class GroundedNetwork:
    timestamp: float
    evidence: dict
    clause_groundings: tuple
    query_nodes: tuple = QUERY_NODES


def _implies(body: bool, head_node: int) -> tuple:
    return tuple((not body) or w[head_node] for w in WORLDS)


def ground_network(t_i: float, entropy_real: float, entropy_expected: float,
                   sensor_evidence: SensorEvidence | None, rules: RuleConfig,
                   include_expert_rules: bool = True) -> GroundedNetwork:
    """Ground every clause at ``t_i`` against the observed evidence.

    Statistical clauses: ``H >= H*  => S`` and ``H > H_W => S``. Expert
    clauses (one grounding per sensor): ``door open longer than the limit => A``
    and ``motion during the rest interval => A``. Then ``S v A => Y`` and the
    soft prior ``!Y``.
    """
    if include_expert_rules and sensor_evidence is None:
        raise ConfigError("expert rules enabled but no sensor evidence supplied")
    g = []
    stat = (("stat_threshold", entropy_real >= rules.entropy_threshold),
            ("stat_expected", entropy_real > entropy_expected))
    for cid, body in stat:
        g.append(ClauseGrounding(cid, _implies(body, 0), rules.weight(cid), bool(body)))
    evidence = {"entropy_real": float(entropy_real), "entropy_expected": float(entropy_expected)}
    if include_expert_rules:
        rest = sensor_evidence.in_rest_interval
        if rest is None:
            rest = rules.in_rest_interval(t_i)
        evidence.update(door_open_durations=dict(sensor_evidence.door_open_durations),
                        motion_active=dict(sensor_evidence.motion_active), in_rest_interval=bool(rest))
        for sid, dur in sorted(sensor_evidence.door_open_durations.items()):
            body = dur > rules.door_open_max_s
            cid = f"door_open:{sid}"
            g.append(ClauseGrounding(cid, _implies(body, 1), rules.weight(cid), bool(body)))
        for sid, active in sorted(sensor_evidence.motion_active.items()):
            body = bool(active) and rest
            cid = f"rest_motion:{sid}"
            g.append(ClauseGrounding(cid, _implies(body, 1), rules.weight(cid), bool(body)))
    g.append(ClauseGrounding("combine", tuple(not (w[0] or w[1]) or w[2] for w in WORLDS),
                             rules.weight("combine"), None))
    g.append(ClauseGrounding("prior", tuple(not w[2] for w in WORLDS), float(rules.prior_weight), None))
    return GroundedNetwork(float(t_i), evidence, tuple(g))


@dataclass(frozen=True)
class AnomalyVerdict:
    timestamp: float
    probability_is_anomaly: float
    flagged: bool
    triggered_clauses: tuple


def infer(network: GroundedNetwork) -> AnomalyVerdict:
    """Exact marginal ``P(IsAnomaly)`` over the eight worlds.

    World weight is ``exp(sum of weights of satisfied groundings)``.
    """
    sat = np.array([c.satisfied for c in network.clause_groundings], dtype=np.float64)
    w = np.array([c.weight for c in network.clause_groundings], dtype=np.float64)
    logw = w @ sat if len(w) else np.zeros(len(WORLDS))
    logw = logw - logw.max()
    ew = np.exp(logw)
    is_y = np.array([world[2] for world in WORLDS])
    p = float(ew[is_y].sum() / ew.sum())
    triggered = tuple(c.clause_id for c in network.clause_groundings if c.antecedent)
    return AnomalyVerdict(network.timestamp, p, p > FLAG_PROBABILITY, triggered)


# -- detection runs ----------------------------------------------------------------

@dataclass
class DetectionRun:
    detector_name: str
    timestamps: np.ndarray
    flags: np.ndarray
    probabilities: np.ndarray | None = None
    scores: np.ndarray | None = None
    triggered: list | None = None
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        self.timestamps = np.asarray(self.timestamps, dtype=np.float64)
        self.flags = np.asarray(self.flags, dtype=bool)
        if self.timestamps.shape != self.flags.shape:
            raise DetectionError("timestamps and flags differ in length")
        if len(self.timestamps) > 1 and not np.all(np.diff(self.timestamps) > 0):
            raise DetectionError("timestamps must be strictly increasing")

    @property
    def flag_count(self) -> int:
        return int(self.flags.sum())

    def rows(self):
        n = len(self.timestamps)
        probs = self.probabilities if self.probabilities is not None else [None] * n
        trig = self.triggered if self.triggered is not None else [()] * n
        for t, f, p, c in zip(self.timestamps, self.flags, probs, trig):
            yield t, bool(f), p, ";".join(c)

    def write_csv(self, path):
        return write_csv(path, ["timestamp", "flag", "probability", "triggered_clauses"], self.rows())


def read_detection_csv(path, name=None) -> DetectionRun:
    import csv
    from pathlib import Path
    ts, flags, probs, trig = [], [], [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            ts.append(float(row["timestamp"]))
            flags.append(row["flag"] == "1")
            probs.append(math.nan if row["probability"] == "NA" else float(row["probability"]))
            trig.append(tuple(c for c in row["triggered_clauses"].split(";") if c))
    return DetectionRun(name or Path(path).stem, np.array(ts), np.array(flags, dtype=bool),
                        np.array(probs), triggered=trig)


def sensor_evidence_stream(series_set: Sequence[SensorSeries], timestamps) -> list[SensorEvidence]:
    """Door-open durations (contact sensors) and motion states at each timestamp.

    A door's duration is the length of the run of ON samples ending at the
    sample that contains the timestamp, in seconds.
    """
    if not series_set:
        return [SensorEvidence() for _ in timestamps]
    t0 = series_set[0].time_reference_posix_s
    period = sample_period(series_set[0].sampling_frequency_hz)
    idx = np.floor((np.asarray(timestamps, dtype=np.float64) - t0) / period + 1e-9).astype(np.int64)
    n = len(series_set[0])
    if len(idx) and (idx.min() < 0 or idx.max() >= n):
        raise DetectionError("timestamps fall outside the sensor series")
    doors = {s.sensor_id: kernels.run_lengths(s.values)[idx] * period
             for s in series_set if s.reading_type == "contact"}
    motion = {s.sensor_id: s.values[idx].astype(bool)
              for s in series_set if s.reading_type == "motion"}
    return [SensorEvidence({k: float(v[i]) for k, v in doors.items()},
                           {k: bool(v[i]) for k, v in motion.items()})
            for i in range(len(idx))]


def detect_hmln(timestamps, entropy_real, entropy_expected, sensor_evidence, rules: RuleConfig,
                include_expert_rules: bool = True) -> DetectionRun:
    """One HMLN verdict per timestep; ``include_expert_rules=False`` is HMLN*."""
    ts = np.asarray(timestamps, dtype=np.float64)
    h = np.asarray(entropy_real, dtype=np.float64)
    hw = np.asarray(entropy_expected, dtype=np.float64)
    if not (len(ts) == len(h) == len(hw)):
        raise DetectionError("entropy streams are not time-aligned")
    if include_expert_rules:
        if sensor_evidence is None:
            raise ConfigError("expert rules enabled but no sensor evidence supplied")
        if len(sensor_evidence) != len(ts):
            raise DetectionError("sensor evidence stream is not time-aligned")
    probs = np.empty(len(ts))
    flags = np.empty(len(ts), dtype=bool)
    trig = []
    for i, t in enumerate(ts):
        ev = sensor_evidence[i] if include_expert_rules else None
        v = infer(ground_network(t, h[i], hw[i], ev, rules, include_expert_rules))
        probs[i] = v.probability_is_anomaly
        flags[i] = v.flagged
        trig.append(v.triggered_clauses)
    name = "hmln" if include_expert_rules else "hmln_star"
    return DetectionRun(name, ts, flags, probs, triggered=trig,
                        parameters={**rules.to_dict(), "include_expert_rules": include_expert_rules})


def detect_gaussian1d(timestamps, values, z_threshold: float = 3.0,
                      train_length: int | None = None) -> DetectionRun:
    """Flag ``|x - mu| > z * sigma`` with mu, sigma frozen on a training prefix.

    A zero-variance fit flags every value that differs from the mean.
    """
    x = np.asarray(values, dtype=np.float64)
    n_fit = len(x) if train_length is None else int(train_length)
    if n_fit < 2 or n_fit > len(x):
        raise DetectionError("need at least 2 training samples within the stream")
    mu = float(np.mean(x[:n_fit]))
    sigma = float(np.std(x[:n_fit]))
    dev = np.abs(x - mu)
    flags = dev > z_threshold * sigma if sigma > 0 else dev != 0
    z = dev / sigma if sigma > 0 else np.where(dev != 0, np.inf, 0.0)
    return DetectionRun("gaussian1d", timestamps, flags, scores=z,
                        parameters={"z_threshold": z_threshold, "train_length": n_fit,
                                    "mean": mu, "std": sigma})


def lof_scores(X, k: int, query=None) -> np.ndarray:
    """Local outlier factor with exactly ``k`` neighbours (lower index wins ties).

    Without ``query`` the rows of ``X`` are scored against each other
    (self excluded). With ``query`` the reference set ``X`` is frozen and the
    query rows are scored against it. Reachability means are offset by 1e-10
    so duplicate-heavy data stays finite.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if not isinstance(k, (int, np.integer)) or k <= 0:
        raise DetectionError(f"neighbors_k must be a positive integer, got {k!r}")
    if k >= len(X):
        raise DetectionError(f"neighbors_k={k} needs more than {k} samples, got {len(X)}")
    dist, idx = kernels.knn(X, X, int(k), True)
    kdist = dist[:, -1]
    lrd = 1.0 / (np.maximum(kdist[idx], dist).mean(axis=1) + LOF_EPS)
    if query is None:
        return lrd[idx].mean(axis=1) / lrd
    Q = np.ascontiguousarray(query, dtype=np.float64)
    if Q.ndim == 1:
        Q = Q[:, None]
    qd, qi = kernels.knn(Q, X, int(k), False)
    qlrd = 1.0 / (np.maximum(kdist[qi], qd).mean(axis=1) + LOF_EPS)
    return lrd[qi].mean(axis=1) / qlrd


def lof_embedding(timestamps, values, embedding: str = "daily", timezone: str = "UTC") -> np.ndarray:
    """``value`` -> (x,); ``daily`` -> (x, sin, cos of the time of day)."""
    x = np.asarray(values, dtype=np.float64)
    if embedding == "value":
        return x[:, None]
    if embedding != "daily":
        raise ConfigError(f"unknown LOF embedding {embedding!r}")
    ts = np.asarray(timestamps, dtype=np.float64)
    if timezone == "UTC":
        sod = np.mod(ts, 86400.0)
    else:
        tz = ZoneInfo(timezone)
        sod = np.array([(lambda d: d.hour * 3600 + d.minute * 60 + d.second)(datetime.fromtimestamp(t, tz))
                        for t in ts], dtype=np.float64)
    ang = 2.0 * np.pi * sod / 86400.0
    return np.column_stack([x, np.sin(ang), np.cos(ang)])


def detect_lof(timestamps, values, neighbors_k: int = 20, lof_threshold: float = 1.5,
               embedding: str = "daily", train_length: int | None = None,
               timezone: str = "UTC") -> DetectionRun:
    """Flag samples whose LOF score exceeds ``lof_threshold``.

    With ``train_length`` the first samples form a frozen reference set and
    the remainder is scored against it.
    """
    if not isinstance(neighbors_k, (int, np.integer)) or neighbors_k <= 0:
        raise DetectionError(f"neighbors_k must be a positive integer, got {neighbors_k!r}")
    X = lof_embedding(timestamps, values, embedding, timezone)
    if train_length is None or train_length >= len(X):
        scores = lof_scores(X, neighbors_k)
    else:
        ref = X[:train_length]
        scores = np.concatenate([lof_scores(ref, neighbors_k), lof_scores(ref, neighbors_k, X[train_length:])])
    return DetectionRun("lof", timestamps, scores > lof_threshold, scores=scores,
                        parameters={"neighbors_k": int(neighbors_k), "lof_threshold": lof_threshold,
                                    "embedding": embedding, "train_length": train_length})


# -- agreement and ranking -------------------------------------------------------------

def _check_aligned(runs: Sequence[DetectionRun]):
    for r in runs[1:]:
        if not np.array_equal(r.timestamps, runs[0].timestamps):
            raise DetectionError(f"run {r.detector_name!r} is not time-aligned with {runs[0].detector_name!r}")


@dataclass
class AgreementMatrix:
    names: list
    percentages: np.ndarray  # NaN rows for detectors with no flags

    def rows(self):
        for name, row in zip(self.names, self.percentages):
            yield [name, *row]

    def write_csv(self, path):
        return write_csv(path, ["detector", *self.names], self.rows())


def agreement_matrix(runs: Sequence[DetectionRun]) -> AgreementMatrix:
    """Cell (r, c) = 100 * |flags_r & flags_c| / |flags_r|."""
    _check_aligned(runs)
    F = np.array([r.flags for r in runs], dtype=np.int64)
    inter = F @ F.T
    counts = F.sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        pct = np.where(counts[:, None] > 0, 100.0 * inter / counts[:, None], np.nan)
    return AgreementMatrix([r.detector_name for r in runs], pct)


@dataclass(frozen=True)
class DetectorScore:
    name: str
    precision: float | None
    recall: float | None
    f1: float | None


def _ratio(a, b):
    return a / b if b else None


def rank_f1_without_ground_truth(runs: Sequence[DetectionRun]) -> list[DetectorScore]:
    """Score each detector against the majority vote of all detectors.

    A relative ranking only: the pseudo-reference is a strict majority of
    flags at each timestep. Sorted by F1 (undefined last), then name.
    """
    if len(runs) < 3:
        raise DetectionError("ranking without ground truth needs at least 3 detectors")
    _check_aligned(runs)
    F = np.array([r.flags for r in runs], dtype=bool)
    ref = F.sum(axis=0) * 2 > len(runs)
    out = []
    for r, f in zip(runs, F):
        tp = int(np.sum(f & ref))
        p = _ratio(tp, int(f.sum()))
        rc = _ratio(tp, int(ref.sum()))
        if p is None or rc is None:
            f1 = None
        else:
            f1 = 2 * p * rc / (p + rc) if p + rc > 0 else 0.0
        out.append(DetectorScore(r.detector_name, p, rc, f1))
    return sorted(out, key=lambda s: (s.f1 is None, -(s.f1 or 0.0), s.name))

