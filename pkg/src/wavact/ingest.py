"""Sensor records in, aligned binary series out.

Records come from JSON-lines exports (one document per line, e.g. a
``mongoexport`` dump) or from the seeded synthetic generator. Binary sensors
(motion and contact) are resampled onto a shared grid by OR-aggregation;
analog readings are parsed and kept but never modelled.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from ._io import FORMAT_VERSION, read_json, write_csv, write_json
from .model import SensorSeries

READING_TYPES = ("motion", "contact", "humidity", "temperature", "light", "energy")
BINARY_TYPES = ("motion", "contact")
SAMPLING_PERIOD_S = 30
MAX_MALFORMED_FRACTION = 0.10
DEFAULT_FIELDS = {"ts": "ts", "sensor": "sensor", "location": "location", "type": "type", "value": "value"}

_TRUE = {"1", "on", "true", "open", "opened", "active", "motion", "yes"}
_FALSE = {"0", "off", "false", "closed", "close", "inactive", "no_motion", "no"}


class IngestError(ValueError):
    """Unreadable or mostly malformed input; fatal for the run."""


class DataError(ValueError):
    """Records or grids that violate an operation's preconditions."""


@dataclass(frozen=True)
class SensorRecord:
    timestamp: float
    sensor_id: str
    location: str
    reading_type: str
    value: object

    def __post_init__(self):
        if self.reading_type not in READING_TYPES:
            raise DataError(f"unknown reading type {self.reading_type!r}")
        if not math.isfinite(self.timestamp):
            raise DataError("timestamp must be finite")

    @property
    def is_binary(self) -> bool:
        return self.reading_type in BINARY_TYPES

    def state(self) -> bool:
        return parse_binary(self.value)


def parse_binary(value) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, float)) and value in (0, 1):
        return bool(value)
    if isinstance(value, str):
        v = value.strip().lower()
        if v in _TRUE:
            return True
        if v in _FALSE:
            return False
    raise DataError(f"not a binary reading: {value!r}")


@dataclass
class SkipReport:
    total_lines: int = 0
    skipped: list = field(default_factory=list)  # (line number, reason)

    @property
    def skipped_lines(self) -> list:
        return [n for n, _ in self.skipped]

    @property
    def malformed_fraction(self) -> float:
        return len(self.skipped) / self.total_lines if self.total_lines else 0.0

    def to_dict(self) -> dict:
        return {"total_lines": self.total_lines, "skipped": [list(s) for s in self.skipped]}


def _lookup(doc, path: str):
    cur = doc
    for part in path.split("."):
        if not isinstance(cur, dict) or part not in cur:
            raise KeyError(path)
        cur = cur[part]
    return cur


def parse_timestamp(raw) -> float:
    """POSIX seconds from numbers, ISO-8601 strings or Mongo extended JSON dates."""
    if isinstance(raw, dict):
        if "$date" in raw:
            inner = raw["$date"]
            if isinstance(inner, dict) and "$numberLong" in inner:
                return int(inner["$numberLong"]) / 1000.0
            if isinstance(inner, (int, float)):
                return inner / 1000.0
            return parse_timestamp(inner)
        if "$numberLong" in raw:
            return float(int(raw["$numberLong"]))
        raise ValueError(f"unsupported timestamp object {raw!r}")
    if isinstance(raw, bool):
        raise ValueError("boolean timestamp")
    if isinstance(raw, (int, float)):
        return float(raw)
    if isinstance(raw, str):
        dt = datetime.fromisoformat(raw.strip().replace("Z", "+00:00"))
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        return dt.timestamp()
    raise ValueError(f"unsupported timestamp {raw!r}")


def load_mapping(path) -> dict:
    """Mapping config: ``{"fields": {canonical: source path}, "types": {source type: reading type}}``."""
    doc = read_json(path)
    unknown = set(doc) - {"fields", "types"}
    if unknown:
        raise IngestError(f"unknown mapping keys {sorted(unknown)}")
    return doc


def _record_from_doc(doc, fields, types) -> SensorRecord:
    ts = parse_timestamp(_lookup(doc, fields["ts"]))
    sensor = str(_lookup(doc, fields["sensor"]))
    try:
        location = str(_lookup(doc, fields["location"]))
    except KeyError:
        location = ""
    rtype = str(_lookup(doc, fields["type"]))
    rtype = types.get(rtype, rtype).lower()
    value = _lookup(doc, fields["value"])
    rec = SensorRecord(ts, sensor, location, rtype, value)
    if rec.is_binary:
        parse_binary(value)
    return rec


def load_jsonl(path, mapping: dict | None = None) -> tuple[list, SkipReport]:
    """Parse a JSON-lines export into records, skipping (and reporting) bad lines.

    Blank lines are ignored. More than 10% malformed lines is fatal.
    """
    fields = {**DEFAULT_FIELDS, **((mapping or {}).get("fields") or {})}
    types = (mapping or {}).get("types") or {}
    report = SkipReport()
    records = []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            report.total_lines += 1
            try:
                records.append(_record_from_doc(json.loads(line), fields, types))
            except (ValueError, KeyError, TypeError) as exc:
                reason = f"missing field {exc.args[0]}" if isinstance(exc, KeyError) else str(exc)
                report.skipped.append((lineno, reason))
    if report.malformed_fraction > MAX_MALFORMED_FRACTION:
        raise IngestError(f"{len(report.skipped)} of {report.total_lines} lines malformed "
                          f"(lines {report.skipped_lines[:20]}{'...' if len(report.skipped) > 20 else ''})")
    return records, report


def write_jsonl(path, records: Iterable[SensorRecord]):
    from ._io import atomic_write_text
    lines = [json.dumps({"ts": r.timestamp if not float(r.timestamp).is_integer() else int(r.timestamp),
                         "sensor": r.sensor_id, "location": r.location, "type": r.reading_type,
                         "value": r.value}) for r in records]
    return atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))


# -- resampling ---------------------------------------------------------------

def resample_binary(records: Sequence[SensorRecord], start: float, period_s: float, length: int,
                    sensor_id: str | None = None) -> SensorSeries:
    """OR-aggregate one binary sensor's records onto ``length`` cells of ``period_s``.

    An ON record opens an interval that lasts until the sensor's next record;
    a final ON record with no successor is an instantaneous event. Each cell
    that an ON interval overlaps (or that contains an event) becomes 1.
    """
    recs = sorted(records, key=lambda r: r.timestamp)
    ids = {r.sensor_id for r in recs}
    if len(ids) > 1:
        raise DataError(f"records from several sensors: {sorted(ids)}")
    sid = sensor_id or (recs[0].sensor_id if recs else "")
    types = {r.reading_type for r in recs}
    if types - set(BINARY_TYPES):
        raise DataError(f"sensor {sid!r} is not binary ({sorted(types)})")
    ts = np.array([r.timestamp for r in recs], dtype=np.float64)
    on = np.array([r.state() for r in recs], dtype=bool)
    ends = np.append(ts[1:], ts[-1:]) if len(ts) else ts
    rel_on = (ts[on] - start) / period_s
    rel_off = (ends[on] - start) / period_s
    first = np.floor(rel_on + 1e-9).astype(np.int64)
    last = np.maximum(np.ceil(rel_off - 1e-9).astype(np.int64) - 1, first)
    keep = (last >= 0) & (first < length)
    first = np.clip(first[keep], 0, max(length - 1, 0))
    last = np.clip(last[keep], 0, max(length - 1, 0))
    values = kernels.mark_intervals(first, last, int(length))
    location = recs[0].location if recs else ""
    rtype = recs[0].reading_type if recs else "motion"
    return SensorSeries(sid, values, 1.0 / period_s, start, location, rtype)


def series_to_records(series: SensorSeries) -> list[SensorRecord]:
    """One record per sample at the cell start; inverse of :func:`resample_binary`."""
    return [SensorRecord(float(t), series.sensor_id, series.location, series.reading_type, int(v))
            for t, v in zip(series.timestamps(), series.values)]


def binary_series(records: Sequence[SensorRecord], start: float, period_s: float,
                  length: int) -> list[SensorSeries]:
    """Resample every binary sensor in ``records``; sorted by sensor id."""
    groups: dict = {}
    for r in records:
        if r.is_binary:
            groups.setdefault(r.sensor_id, []).append(r)
    return [resample_binary(groups[s], start, period_s, length) for s in sorted(groups)]


# -- corpora and folds ------------------------------------------------------------

@dataclass(frozen=True)
class AnomalyLabel:
    kind: str
    sensors: tuple
    start: float
    end: float  # exclusive

    def covers(self, t: float) -> bool:
        return self.start <= t < self.end


@dataclass(frozen=True)
class Fold:
    start: float
    length: int  # samples


@dataclass
class Corpus:
    name: str
    records: list
    start: float
    length: int  # grid cells
    sampling_period_s: float = SAMPLING_PERIOD_S
    labels: list = field(default_factory=list)

    def series(self) -> list[SensorSeries]:
        return binary_series(self.records, self.start, self.sampling_period_s, self.length)


def grid_for(records: Sequence[SensorRecord], period_s: float = SAMPLING_PERIOD_S,
             align_s: float = 86400) -> tuple[float, int]:
    """Grid covering all records, starting at the preceding ``align_s`` boundary (midnight UTC)."""
    if not records:
        raise DataError("no records")
    lo = min(r.timestamp for r in records)
    hi = max(r.timestamp for r in records)
    start = math.floor(lo / align_s) * align_s
    return float(start), int(math.floor((hi - start) / period_s)) + 1


def _cells(span_s: float, period_s: float, what: str) -> int:
    c = span_s / period_s
    if abs(c - round(c)) > 1e-9:
        raise DataError(f"{what} ({span_s} s) is not a whole number of {period_s} s samples")
    return int(round(c))


def split_folds(start: float, length: int, training_len_s: float, testing_len_s: float,
                period_s: float = SAMPLING_PERIOD_S) -> tuple[Fold, Fold]:
    """Contiguous training then testing folds from the start of the grid."""
    n_train = _cells(training_len_s, period_s, "training length")
    n_test = _cells(testing_len_s, period_s, "testing length")
    if n_train <= 0 or n_test <= 0:
        raise DataError("fold lengths must be positive")
    if n_train + n_test > length:
        raise DataError(f"corpus spans {length} samples, folds need {n_train + n_test}")
    return Fold(start, n_train), Fold(start + n_train * period_s, n_test)


def fold_series(series_set: Sequence[SensorSeries], fold: Fold) -> list[SensorSeries]:
    out = []
    for s in series_set:
        i0 = int(round((fold.start - s.time_reference_posix_s) / s.sample_period_s))
        if i0 < 0 or i0 + fold.length > len(s):
            raise DataError(f"fold outside series {s.sensor_id!r}")
        out.append(s.slice(i0, i0 + fold.length))
    return out


# -- synthetic data ------------------------------------------------------------------

@dataclass(frozen=True)
class SensorPattern:
    sensor_id: str
    location: str
    reading_type: str
    daily: tuple  # (("HH:MM", duration_s), ...)


@dataclass(frozen=True)
class InjectedAnomaly:
    kind: str  # night_motion | door_open | off_schedule
    sensors: tuple
    day: int
    at: str  # "HH:MM"
    duration_s: float

    @property
    def start_offset_s(self) -> int:
        """Seconds from the corpus start to the anomaly onset."""
        return self.day * 86400 + _clock(self.at)


DEFAULT_HOME = (
    SensorPattern("entrance_door", "Entrance", "contact",
                  (("08:00", 30), ("09:15", 60), ("12:30", 30), ("13:30", 30), ("18:00", 30))),
    SensorPattern("kitchen_motion", "Kitchen", "motion",
                  (("07:30", 1200), ("10:02", 30), ("12:00", 1800), ("15:31", 60), ("18:30", 2700))),
    SensorPattern("lounge_motion", "Lounge", "motion",
                  (("09:30", 5400), ("14:00", 60), ("19:30", 9000))),
    SensorPattern("bedroom_motion", "Bedroom", "motion", (("07:00", 900), ("22:30", 1200))),
    SensorPattern("bathroom_motion", "Bathroom", "motion",
                  (("07:15", 600), ("13:00", 30), ("21:00", 60), ("22:55", 30))),
    SensorPattern("fridge_door", "Fridge", "contact", (("07:40", 30), ("12:10", 30), ("18:40", 60))),
)

DEFAULT_ANOMALIES = (
    InjectedAnomaly("night_motion", ("lounge_motion",), 24, "02:30", 300),
    InjectedAnomaly("door_open", ("entrance_door",), 25, "15:00", 1200),
    InjectedAnomaly("off_schedule", ("kitchen_motion", "lounge_motion", "bathroom_motion", "bedroom_motion"),
                    26, "03:30", 600),
)


@dataclass(frozen=True)
class SyntheticSpec:
    start: int = 1509494400  # 2017-11-01T00:00:00Z
    days: int = 28
    sampling_period_s: int = SAMPLING_PERIOD_S
    sensors: tuple = DEFAULT_HOME
    noise_rate: float = 0.001
    anomalies: tuple = DEFAULT_ANOMALIES
    analog: bool = True


def _clock(text: str) -> int:
    hh, mm = text.split(":")
    return int(hh) * 3600 + int(mm) * 60


def _grid_to_records(values, start, period, pattern: SensorPattern) -> list[SensorRecord]:
    """State-change records: ON at each rising edge, OFF at each falling edge and at the end."""
    v = np.concatenate([[0], values.astype(np.int8), [0]])
    edges = np.nonzero(np.diff(v))[0]
    out = []
    for e in edges:
        state = int(v[e + 1])
        out.append(SensorRecord(float(start + e * period), pattern.sensor_id, pattern.location,
                                pattern.reading_type, state))
    return out


def generate_synthetic(spec: SyntheticSpec = SyntheticSpec(), seed: int = 0, name: str = "synthetic") -> Corpus:
    """Daily routines plus Bernoulli flips plus labelled anomalies; pure in ``(spec, seed)``."""
    rng = np.random.default_rng(seed)
    period = spec.sampling_period_s
    per_day = 86400 // period
    n = spec.days * per_day
    grids = {}
    for p in spec.sensors:
        day = np.zeros(per_day, dtype=np.uint8)
        for at, dur in p.daily:
            i0 = _clock(at) // period
            day[i0:i0 + max(1, int(math.ceil(dur / period)))] = 1
        grids[p.sensor_id] = np.tile(day, spec.days)
    for p in spec.sensors:  # fixed draw order keeps the corpus a pure function of the seed
        flips = rng.random(n) < spec.noise_rate
        grids[p.sensor_id] = grids[p.sensor_id] ^ flips.astype(np.uint8)
    labels = []
    for a in spec.anomalies:
        t = spec.start + a.start_offset_s
        i0 = (t - spec.start) // period
        i1 = i0 + max(1, int(math.ceil(a.duration_s / period)))
        if i0 < 0 or i1 > n:
            raise DataError(f"anomaly {a.kind!r} on day {a.day} falls outside the {spec.days}-day corpus")
        for sid in a.sensors:
            grids[sid][i0:i1] = 1
        labels.append(AnomalyLabel(a.kind, tuple(a.sensors), float(t), float(spec.start + i1 * period)))
    records = []
    for p in spec.sensors:
        records.extend(_grid_to_records(grids[p.sensor_id], spec.start, period, p))
    if spec.analog:
        step = 900 // period
        temps = 20.0 + 2.0 * np.sin(2 * np.pi * np.arange(0, n, step) / per_day) + rng.normal(0, 0.1, len(range(0, n, step)))
        records.extend(SensorRecord(float(spec.start + i * period), "lounge_temperature", "Lounge",
                                    "temperature", round(float(v), 2))
                       for i, v in zip(range(0, n, step), temps))
    records.sort(key=lambda r: (r.timestamp, r.sensor_id))
    return Corpus(name, records, float(spec.start), n, float(period), labels)


# -- corpus directories -------------------------------------------------------------

def write_corpus_dir(out_dir, series_set: Sequence[SensorSeries], manifest: dict):
    """``series/<sensor_id>.csv`` (``timestamp,value``) plus ``manifest.json``."""
    out = Path(out_dir)
    for s in series_set:
        write_csv(out / "series" / f"{s.sensor_id}.csv", ["timestamp", "value"],
                  zip(s.timestamps(), s.values.tolist()))
    sensors = [{"sensor_id": s.sensor_id, "location": s.location, "reading_type": s.reading_type}
               for s in series_set]
    outputs = sorted(str(f.relative_to(out)) for f in out.rglob("*") if f.is_file() and f.name != "manifest.json")
    write_json(out / "manifest.json", {"format_version": FORMAT_VERSION, **manifest, "sensors": sensors,
                                       "outputs": outputs})


def read_corpus_dir(path) -> tuple[list[SensorSeries], dict]:
    root = Path(path)
    try:
        manifest = read_json(root / "manifest.json")
    except OSError as exc:
        raise IngestError(f"no corpus manifest under {root}") from exc
    start = float(manifest["start"])
    period = float(manifest["sampling_period_s"])
    out = []
    for meta in manifest["sensors"]:
        data = np.loadtxt(root / "series" / f"{meta['sensor_id']}.csv", delimiter=",", skiprows=1,
                          ndmin=2)
        if len(data) != manifest["length"] or (len(data) and data[0, 0] != start):
            raise IngestError(f"series {meta['sensor_id']!r} does not match the manifest grid")
        out.append(SensorSeries(meta["sensor_id"], data[:, 1].astype(np.uint8), 1.0 / period, start,
                                meta.get("location", ""), meta.get("reading_type", "motion")))
    return out, manifest


def labels_to_json(labels: Sequence[AnomalyLabel]) -> list:
    return [{**asdict(lb), "sensors": list(lb.sensors)} for lb in labels]


def labels_from_json(doc) -> list[AnomalyLabel]:
    return [AnomalyLabel(d["kind"], tuple(d["sensors"]), float(d["start"]), float(d["end"])) for d in doc]
