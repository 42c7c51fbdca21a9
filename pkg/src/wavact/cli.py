"""``wavact`` command line: synth, ingest, train, forecast, entropy, detect, evaluate, compare.

Every command writes into its own run directory (``--out``) and leaves a
``manifest.json`` there that records the command and every resolved
parameter. Manifests carry no wall-clock timestamps, so reruns with the same
inputs produce byte-identical directories.

Exit codes: 0 success, 1 usage, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__, kernels
from ._io import FORMAT_VERSION, read_json, write_csv, write_json
from .activity import ActivityError, entropy_stream, entropy_values
from .fremen import fit_fremen, fremen_probabilities, load_fremen, save_fremen
from .inference import (ConfigError, DetectionError, agreement_matrix, detect_gaussian1d, detect_hmln,
                        detect_lof, load_rules, rank_f1_without_ground_truth, read_detection_csv,
                        sensor_evidence_stream)
from .ingest import (DEFAULT_ANOMALIES, DataError, IngestError, SyntheticSpec, fold_series, generate_synthetic, grid_for,
                     labels_from_json, labels_to_json, load_jsonl, load_mapping, read_corpus_dir,
                     split_folds, write_corpus_dir, write_jsonl, binary_series, Fold)
from .metrics import MetricsError, binary_classification_metrics, similarity_metrics
from .model import ModelError, build_model, forecast_window, load_model, save_model
from .wavelet import WaveletError

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3
DETECTORS = ("hmln", "hmln_star", "gaussian1d", "lof")

# built-in defaults; a --config file overrides these and explicit flags override both
DEFAULTS = {
    "seed": 0,
    "days": 28,
    "noise_rate": 0.001,
    "train_window": "21d",
    "test_window": "7d",
    "period": None,
    "kind": "wavelet",
    "wavelet": "rbio3.1",
    "levels": 1,
    "tau": "lossless",
    "components": 3,
    "fold": "test",
    "window": None,
    "stride": None,
    "detector": ",".join(DETECTORS),
    "rules": None,
    "weights": None,
    "z_threshold": 3.0,
    "neighbors_k": 20,
    "lof_threshold": 1.5,
    "lof_embedding": "daily",
    "mapping": None,
}


class UsageError(Exception):
    pass


class NumericalError(ArithmeticError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


_DURATION = re.compile(r"^\s*(\d+(?:\.\d+)?)\s*([smhdw]?)\s*$")
_UNIT = {"": 1, "s": 1, "m": 60, "h": 3600, "d": 86400, "w": 604800}


def parse_duration(text) -> float:
    """``"21d"``, ``"1w"``, ``"12h"``, ``"90m"``, ``"30s"`` or plain seconds."""
    if isinstance(text, (int, float)):
        return float(text)
    m = _DURATION.match(str(text))
    if not m:
        raise UsageError(f"bad duration {text!r}; use e.g. 21d, 1w, 12h, 90m, 30s")
    return float(m.group(1)) * _UNIT[m.group(2)]


# -- shared plumbing ----------------------------------------------------------------

def _resolve(args) -> dict:
    """Merge defaults, the optional config file and explicit flags."""
    cfg = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.is_file():
            raise UsageError(f"config file not found: {path}")
        cfg = {k.replace("-", "_"): v for k, v in read_json(path).items()}
        unknown = sorted(set(cfg) - set(vars(args)) - {"func", "config", "command"})
        if unknown:
            raise ConfigError(f"{path}: unknown keys {unknown} for `{args.command}`")
    merged = {}
    for key, value in vars(args).items():
        if key in ("func", "config", "command"):
            continue
        if value is None:
            value = cfg.get(key, DEFAULTS.get(key))
        merged[key] = value
    return merged


def _need(p, what: str, kind: str = "any") -> Path:
    if p is None:
        raise UsageError(f"missing required input {what}")
    path = Path(p)
    ok = path.is_dir() if kind == "dir" else path.is_file() if kind == "file" else path.exists()
    if not ok:
        raise UsageError(f"{what} not found: {path}")
    return path


def _out(params) -> Path:
    if not params.get("out"):
        raise UsageError("missing --out run directory")
    out = Path(params["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _manifest(out: Path, command: str, params: dict, extra: dict | None = None):
    clean = {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(params.items()) if k != "out"}
    outputs = sorted(str(p.relative_to(out)) for p in out.rglob("*")
                     if p.is_file() and p.name != "manifest.json" and not p.name.startswith("."))
    doc = {"format_version": FORMAT_VERSION, "tool": "wavact", "version": __version__, "command": command,
           "backend": kernels.BACKEND, "parameters": clean, **(extra or {}), "outputs": outputs}
    write_json(out / "manifest.json", doc)


def _finite(arr, what):
    if not np.all(np.isfinite(np.asarray(arr, dtype=np.float64))):
        raise NumericalError(f"non-finite values in {what}")


def _select_fold(manifest: dict, name: str) -> Fold:
    folds = manifest.get("folds") or {}
    if name == "all":
        return Fold(float(manifest["start"]), int(manifest["length"]))
    if name not in folds:
        raise UsageError(f"corpus has no {name!r} fold")
    start, length = folds[name]
    return Fold(float(start), int(length))


def _read_stream_csv(path) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1]


# -- commands -------------------------------------------------------------------------

def cmd_synth(p):
    out = _out(p)
    days = int(p["days"])
    # short corpora keep only the default anomalies that fit inside them
    fitting = tuple(a for a in DEFAULT_ANOMALIES if a.start_offset_s + a.duration_s <= days * 86400)
    spec = SyntheticSpec(days=days, noise_rate=float(p["noise_rate"]), anomalies=fitting)
    corpus = generate_synthetic(spec, seed=int(p["seed"]))
    write_jsonl(out / "records.jsonl", corpus.records)
    write_json(out / "labels.json", labels_to_json(corpus.labels))
    _manifest(out, "synth", p, {"start": corpus.start, "length": corpus.length,
                                "sampling_period_s": corpus.sampling_period_s})


def cmd_ingest(p):
    src = _need(p["corpus"], "--corpus")
    records_path = src / "records.jsonl" if src.is_dir() else src
    _need(records_path, "records file", "file")
    mapping = load_mapping(_need(p["mapping"], "--mapping", "file")) if p["mapping"] else None
    records, report = load_jsonl(records_path, mapping)
    period = 30.0
    source = records_path.parent / "manifest.json"
    if source.is_file() and read_json(source).get("command") == "synth":
        # synthetic corpora carry their own grid; the last cells may hold no record
        doc = read_json(source)
        start, length, period = float(doc["start"]), int(doc["length"]), float(doc["sampling_period_s"])
    else:
        start, length = grid_for(records, period)
    train, test = split_folds(start, length, parse_duration(p["train_window"]),
                              parse_duration(p["test_window"]), period)
    series = binary_series(records, start, period, length)
    if not series:
        raise DataError("no binary (motion/contact) sensors in the corpus")
    out = _out(p)
    labels_path = records_path.parent / "labels.json"
    labels = labels_from_json(read_json(labels_path)) if labels_path.is_file() else []
    if labels:
        write_json(out / "labels.json", labels_to_json(labels))
    analog = sorted({r.sensor_id for r in records if not r.is_binary})
    params = {k: v for k, v in sorted(p.items()) if k != "out"}
    write_corpus_dir(out, series, {
        "tool": "wavact", "version": __version__, "command": "ingest", "backend": kernels.BACKEND,
        "parameters": params,
        "start": start, "length": length, "sampling_period_s": period,
        "folds": {"train": [train.start, train.length], "test": [test.start, test.length]},
        "analog_sensors": analog, "skip_report": report.to_dict(),
    })


def _load_corpus(p):
    root = _need(p["corpus"], "--corpus", "dir")
    _need(root / "manifest.json", "corpus manifest", "file")
    series, manifest = read_corpus_dir(root)
    return series, manifest


def cmd_train(p):
    series, manifest = _load_corpus(p)
    train = fold_series(series, _select_fold(manifest, "train"))
    if p["period"]:
        n = int(round(parse_duration(p["period"]) / train[0].sample_period_s))
        if not 0 < n <= len(train[0]):
            raise UsageError(f"--period must fit inside the training fold ({len(train[0])} samples)")
        train = [s.slice(len(s) - n, len(s)) for s in train]
    out = _out(p)
    models = out / "models"
    models.mkdir(exist_ok=True)
    rows = []
    if p["kind"] == "wavelet":
        tau = p["tau"]
        tau = tau if str(tau) in ("lossless", "auto") else float(tau)
        for s in train:
            m = build_model(s, p["wavelet"], int(p["levels"]), tau)
            save_model(m, models)
            rows.append([s.sensor_id, m.threshold, m.kept_count, m.diagnostics["training_rmse"]])
        write_csv(out / "train_report.csv", ["sensor_id", "tau", "kept_count", "training_rmse"], rows)
    elif p["kind"] == "fremen":
        for s in train:
            m = fit_fremen(s, int(p["components"]))
            save_fremen(m, models)
            rows.append([s.sensor_id, m.mean_activation, m.component_count])
        write_csv(out / "train_report.csv", ["sensor_id", "mean_activation", "components"], rows)
    else:
        raise UsageError(f"unknown model kind {p['kind']!r}")
    _manifest(out, "train", p)


def _forecast_values(path: Path, times: np.ndarray):
    if path.name.endswith(".wmodel.json"):
        m = load_model(path)
        fc = forecast_window(m, float(times[0]), float(times[-1]))
        return m.sensor_id, fc.values
    m = load_fremen(path)
    prob = fremen_probabilities(m, times)
    _finite(prob, f"FreMEn forecast for {m.sensor_id}")
    return m.sensor_id, (prob >= m.binarize_cutoff).astype(np.uint8)


def _model_files(models: Path):
    files = sorted(models.glob("*.wmodel.json")) + sorted(models.glob("*.fremen.json"))
    if not files:
        raise UsageError(f"no model files under {models}")
    return files


def cmd_forecast(p):
    series, manifest = _load_corpus(p)
    models = _need(p["models"], "--models", "dir")
    models = models / "models" if (models / "models").is_dir() else models
    out = _out(p)
    fold = _select_fold(manifest, p["fold"])
    times = fold.start + np.arange(fold.length) * float(manifest["sampling_period_s"])
    for f in _model_files(models):
        sid, values = _forecast_values(f, times)
        write_csv(out / "forecast" / f"{sid}.csv", ["timestamp", "value"], zip(times, values.tolist()))
    _manifest(out, "forecast", p)


def _read_forecast_dir(path: Path, sensor_ids):
    d = path / "forecast" if (path / "forecast").is_dir() else path
    out = {}
    for sid in sensor_ids:
        f = d / f"{sid}.csv"
        if not f.is_file():
            raise DataError(f"no forecast for sensor {sid!r} under {d}")
        out[sid] = _read_stream_csv(f)
    return out


def cmd_entropy(p):
    series, manifest = _load_corpus(p)
    out = _out(p)
    fold = _select_fold(manifest, p["fold"])
    real = fold_series(series, fold)
    ts, h = entropy_values(entropy_stream(real, p["window"] and parse_duration(p["window"]),
                                          p["stride"] and parse_duration(p["stride"])))
    _finite(h, "entropy stream")
    # entropies are stored in [0, 1] and written as percentages
    columns = [ts, 100.0 * h]
    header = ["timestamp", "entropy_real"]
    if p["forecast"]:
        fc = _read_forecast_dir(_need(p["forecast"], "--forecast", "dir"), [s.sensor_id for s in real])
        predicted = []
        for s in real:
            t_fc, v_fc = fc[s.sensor_id]
            if len(t_fc) != len(s) or t_fc[0] != s.time_reference_posix_s:
                raise DataError(f"forecast for {s.sensor_id!r} is not on the {p['fold']} fold grid")
            predicted.append(type(s)(s.sensor_id, v_fc.astype(np.uint8), s.sampling_frequency_hz,
                                     s.time_reference_posix_s, s.location, s.reading_type))
        _, hw = entropy_values(entropy_stream(predicted, p["window"] and parse_duration(p["window"]),
                                              p["stride"] and parse_duration(p["stride"])))
        columns.append(100.0 * hw)
        header.append("entropy_expected")
        sim = similarity_metrics(h, hw)
        write_csv(out / "similarity.csv", ["rmse", "correlation", "explained_variance"],
                  [[sim.rmse, sim.pearson_correlation, sim.explained_variance]])
    write_csv(out / "entropy.csv", header, zip(*columns))
    _manifest(out, "entropy", p)


def _detectors(text) -> list[str]:
    names = [d.strip() for d in str(text).split(",") if d.strip()]
    bad = [d for d in names if d not in DETECTORS]
    if bad or not names:
        raise UsageError(f"unknown detector(s) {bad}; choose from {', '.join(DETECTORS)}")
    return names


def cmd_detect(p):
    series, manifest = _load_corpus(p)
    ent = _need(p["entropy"], "--entropy")
    ent = ent / "entropy.csv" if ent.is_dir() else ent
    _need(ent, "entropy stream", "file")
    rules = load_rules(p["rules"] and _need(p["rules"], "--rules", "file"),
                       p["weights"] and _need(p["weights"], "--weights", "file"))
    names = _detectors(p["detector"])
    data = np.loadtxt(ent, delimiter=",", skiprows=1, ndmin=2)
    _finite(data, "entropy stream")
    out = _out(p)
    ts, h = data[:, 0], data[:, 1] / 100.0
    for name in names:
        if name in ("hmln", "hmln_star"):
            if data.shape[1] < 3:
                raise UsageError("HMLN needs expected entropy: run `entropy` with --forecast")
            expert = name == "hmln"
            period = float(manifest["sampling_period_s"])
            window = parse_duration(p["window"]) if p["window"] else period
            evidence = sensor_evidence_stream(series, ts + window - period) if expert else None
            run = detect_hmln(ts, h, data[:, 2] / 100.0, evidence, rules, include_expert_rules=expert)
        elif name == "gaussian1d":
            run = detect_gaussian1d(ts, h, float(p["z_threshold"]))
        else:
            run = detect_lof(ts, h, int(p["neighbors_k"]), float(p["lof_threshold"]), p["lof_embedding"],
                             timezone=rules.timezone)
        run.write_csv(out / "detections" / f"{name}.csv")
    _manifest(out, "detect", p, {"rules": rules.to_dict()})


def cmd_evaluate(p):
    out_rows = []
    if p["predicted"] or p["truth"]:
        _, pred = _read_stream_csv(_need(p["predicted"], "--predicted", "file"))
        _, truth = _read_stream_csv(_need(p["truth"], "--truth", "file"))
        r = binary_classification_metrics(pred, truth)
        out_rows.append(["all", r.precision, r.recall, r.accuracy, r.f1])
    else:
        series, manifest = _load_corpus(p)
        real = fold_series(series, _select_fold(manifest, p["fold"]))
        fc = _read_forecast_dir(_need(p["forecast"], "--forecast", "dir"), [s.sensor_id for s in real])
        for s in real:
            r = binary_classification_metrics(fc[s.sensor_id][1], s.values)
            out_rows.append([s.sensor_id, r.precision, r.recall, r.accuracy, r.f1])
        avg = []
        for col in range(1, 5):
            vals = [row[col] for row in out_rows if row[col] is not None]
            avg.append(math.fsum(vals) / len(vals) if vals else None)
        out_rows.append(["sensor_average", *avg])
    out = _out(p)
    write_csv(out / "metrics.csv", ["sensor_id", "precision", "recall", "accuracy", "f1"], out_rows)
    _manifest(out, "evaluate", p)


def cmd_compare(p):
    src = _need(p["detections"], "--detections", "dir")
    d = src / "detections" if (src / "detections").is_dir() else src
    files = sorted(d.glob("*.csv"))
    order = {n: i for i, n in enumerate(DETECTORS)}
    files.sort(key=lambda f: (order.get(f.stem, len(order)), f.stem))
    if len(files) < 2:
        raise UsageError(f"need at least two detection runs under {d}")
    out = _out(p)
    runs = [read_detection_csv(f) for f in files]
    agreement_matrix(runs).write_csv(out / "agreement.csv")
    if len(runs) >= 3:
        ranking = rank_f1_without_ground_truth(runs)
        write_csv(out / "ranking.csv", ["detector", "precision", "recall", "f1"],
                  [[s.name, *(None if v is None else 100.0 * v for v in (s.precision, s.recall, s.f1))]
                   for s in ranking])
    write_csv(out / "flag_counts.csv", ["detector", "flags", "samples"],
              [[r.detector_name, r.flag_count, len(r.flags)] for r in runs])
    _manifest(out, "compare", p)


# -- parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wavact", description="Wavelet activity models and anomaly detection for binary sensors.")
    parser.add_argument("--version", action="version", version=f"wavact {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help_text, corpus=True):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--out", help="run directory to write")
        sp.add_argument("--config", help="JSON file whose keys mirror the flags")
        sp.add_argument("--seed", type=int)
        if corpus:
            sp.add_argument("--corpus", help="corpus directory (or records file for ingest)")
        return sp

    sp = command("synth", cmd_synth, "generate a labelled synthetic corpus", corpus=False)
    sp.add_argument("--days", type=int)
    sp.add_argument("--noise-rate", type=float)

    sp = command("ingest", cmd_ingest, "resample JSON-lines records into a corpus directory")
    sp.add_argument("--mapping", help="field/type mapping JSON")
    sp.add_argument("--train-window")
    sp.add_argument("--test-window")

    sp = command("train", cmd_train, "fit one model per binary sensor on the training fold")
    sp.add_argument("--kind", choices=("wavelet", "fremen"))
    sp.add_argument("--wavelet")
    sp.add_argument("--levels", type=int)
    sp.add_argument("--tau", help="threshold value or 'lossless'")
    sp.add_argument("--components", type=int)
    sp.add_argument("--period", help="model only the last part of the training fold, e.g. 7d")

    sp = command("forecast", cmd_forecast, "forecast every sensor over a fold")
    sp.add_argument("--models", help="train run directory")
    sp.add_argument("--fold", choices=("train", "test", "all"))

    sp = command("entropy", cmd_entropy, "normalized entropy of real (and forecast) activity")
    sp.add_argument("--forecast", help="forecast run directory for the expected entropy")
    sp.add_argument("--fold", choices=("train", "test", "all"))
    sp.add_argument("--window")
    sp.add_argument("--stride")

    sp = command("detect", cmd_detect, "run anomaly detectors over an entropy stream")
    sp.add_argument("--entropy", help="entropy run directory or CSV")
    sp.add_argument("--detector", help=f"comma-separated subset of {','.join(DETECTORS)}")
    sp.add_argument("--rules")
    sp.add_argument("--weights")
    sp.add_argument("--window", help="entropy window used upstream (for sensor evidence)")
    sp.add_argument("--z-threshold", type=float)
    sp.add_argument("--neighbors-k", type=int)
    sp.add_argument("--lof-threshold", type=float)
    sp.add_argument("--lof-embedding", choices=("daily", "value"))

    sp = command("evaluate", cmd_evaluate, "classification metrics of forecasts against the real fold")
    sp.add_argument("--forecast", help="forecast run directory")
    sp.add_argument("--fold", choices=("train", "test", "all"))
    sp.add_argument("--predicted", help="timestamp,value CSV (with --truth, bypasses the corpus)")
    sp.add_argument("--truth")

    sp = command("compare", cmd_compare, "agreement matrix and ground-truth-free ranking", corpus=False)
    sp.add_argument("--detections", help="detect run directory")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(_resolve(args))
    except (UsageError, ConfigError) as exc:
        print(f"wavact: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"wavact: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (IngestError, DataError, ActivityError, DetectionError, ModelError, MetricsError,
            WaveletError, KeyError, ValueError, OSError) as exc:
        print(f"wavact: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
