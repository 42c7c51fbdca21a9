import csv
import json

import numpy as np
import pytest

from wavact import __version__
from wavact.cli import main, parse_duration
from wavact.ingest import read_corpus_dir


def run(*argv):
    return main([str(a) for a in argv])


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="module")
def small_run(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    assert run("synth", "--days", 4, "--seed", 3, "--out", d / "s") == 0
    assert run("ingest", "--corpus", d / "s", "--train-window", "3d", "--test-window", "1d", "--out", d / "c") == 0
    assert run("train", "--corpus", d / "c", "--out", d / "m") == 0
    return d


def test_parse_duration():
    assert parse_duration("21d") == 21 * 86400
    assert parse_duration("1w") == 7 * 86400
    assert parse_duration("90s") == 90 and parse_duration("12h") == 43200 and parse_duration(45) == 45
    with pytest.raises(Exception):
        parse_duration("soon")


def test_usage_errors_exit_1(tmp_path, capsys):
    assert run() == 1
    assert run("frobnicate") == 1
    assert run("train", "--out", tmp_path / "x") == 1
    assert run("synth") == 1
    assert run("train", "--corpus", tmp_path / "nowhere", "--out", tmp_path / "x") == 1
    assert run("synth", "--config", tmp_path / "missing.json", "--out", tmp_path / "x") == 1
    (tmp_path / "cfg.json").write_text(json.dumps({"dayz": 3}))
    assert run("synth", "--config", tmp_path / "cfg.json", "--out", tmp_path / "x") == 1
    assert "unknown keys" in capsys.readouterr().err
    assert not (tmp_path / "x").exists()


def test_version_exits_0(capsys):
    assert run("--version") == 0
    assert __version__ in capsys.readouterr().out


def test_malformed_input_exits_2_and_writes_nothing(tmp_path):
    (tmp_path / "r.jsonl").write_text("{}\n" * 5 + json.dumps({"ts": 1, "sensor": "a", "type": "motion",
                                                               "value": 1}) + "\n")
    assert run("ingest", "--corpus", tmp_path / "r.jsonl", "--out", tmp_path / "c") == 2
    assert not (tmp_path / "c").exists()


def test_non_finite_entropy_exits_3(small_run, tmp_path):
    bad = tmp_path / "entropy.csv"
    bad.write_text("timestamp,entropy_real,entropy_expected\n1509753600,nan,10\n1509753630,5,10\n")
    assert run("detect", "--corpus", small_run / "c", "--entropy", bad, "--detector", "gaussian1d",
               "--out", tmp_path / "d") == 3


def test_bad_period_is_usage_error(small_run, tmp_path):
    assert run("train", "--corpus", small_run / "c", "--period", "9d", "--out", tmp_path / "m") == 1
    assert not (tmp_path / "m").exists()


def test_lossless_forecast_reproduces_training_fold(small_run, tmp_path):
    assert run("forecast", "--corpus", small_run / "c", "--models", small_run / "m", "--fold", "train",
               "--out", tmp_path / "f") == 0
    series, manifest = read_corpus_dir(small_run / "c")
    start, length = manifest["folds"]["train"]
    for s in series:
        rows = read_rows(tmp_path / "f" / "forecast" / f"{s.sensor_id}.csv")
        assert len(rows) == length
        assert float(rows[0]["timestamp"]) == start
        assert [int(r["value"]) for r in rows] == s.values[:length].tolist()
    assert run("evaluate", "--corpus", small_run / "c", "--forecast", tmp_path / "f", "--fold", "train",
               "--out", tmp_path / "e") == 0
    avg = read_rows(tmp_path / "e" / "metrics.csv")[-1]
    assert avg["sensor_id"] == "sensor_average" and float(avg["accuracy"]) == 100


def test_evaluate_pair(tmp_path):
    for name, vals in (("pred", [1, 0, 0, 0]), ("truth", [1, 1, 0, 0])):
        (tmp_path / f"{name}.csv").write_text("timestamp,value\n" + "".join(f"{30 * i},{v}\n"
                                                                           for i, v in enumerate(vals)))
    assert run("evaluate", "--predicted", tmp_path / "pred.csv", "--truth", tmp_path / "truth.csv",
               "--out", tmp_path / "e") == 0
    (row,) = read_rows(tmp_path / "e" / "metrics.csv")
    assert (float(row["precision"]), float(row["recall"]), float(row["accuracy"])) == (100, 50, 75)
    assert float(row["f1"]) == pytest.approx(200 / 3)


def test_config_file_and_flag_precedence(small_run, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"kind": "fremen", "components": 2, "tau": 0.5}))
    assert run("train", "--corpus", small_run / "c", "--config", cfg, "--components", 4, "--out", tmp_path / "m") == 0
    params = json.loads((tmp_path / "m" / "manifest.json").read_text())["parameters"]
    assert params["kind"] == "fremen" and params["components"] == 4
    rows = read_rows(tmp_path / "m" / "train_report.csv")
    assert {r["components"] for r in rows} == {"4"}


def test_manifest_contents(small_run):
    doc = json.loads((small_run / "m" / "manifest.json").read_text())
    assert doc["command"] == "train" and doc["version"] == __version__
    assert doc["backend"] in ("numba", "numpy")
    assert doc["outputs"] == sorted(doc["outputs"]) and "train_report.csv" in doc["outputs"]
    assert list(doc["parameters"]) == sorted(doc["parameters"])
    assert doc["parameters"]["tau"] == "lossless"
    for d in ("s", "c"):
        assert "manifest.json" not in json.loads((small_run / d / "manifest.json").read_text())["outputs"]


def test_detect_and_compare_on_small_corpus(small_run, tmp_path):
    c = small_run / "c"
    assert run("forecast", "--corpus", c, "--models", small_run / "m", "--out", tmp_path / "f") == 0
    assert run("entropy", "--corpus", c, "--forecast", tmp_path / "f", "--out", tmp_path / "en") == 0
    ent = np.loadtxt(tmp_path / "en" / "entropy.csv", delimiter=",", skiprows=1)
    assert ent.shape == (2880, 3)
    assert np.all((0 <= ent[:, 1:]) & (ent[:, 1:] <= 100))
    assert run("detect", "--corpus", c, "--entropy", tmp_path / "en", "--detector", "hmln,hmln_star,gaussian1d",
               "--out", tmp_path / "d") == 0
    assert run("detect", "--corpus", c, "--entropy", tmp_path / "en", "--detector", "oracle",
               "--out", tmp_path / "d2") == 1
    assert run("compare", "--detections", tmp_path / "d", "--out", tmp_path / "cmp") == 0
    agreement = read_rows(tmp_path / "cmp" / "agreement.csv")
    assert [r[next(iter(r))] for r in agreement] == ["hmln", "hmln_star", "gaussian1d"]
    ranking = read_rows(tmp_path / "cmp" / "ranking.csv")
    assert {r["detector"] for r in ranking} == {"hmln", "hmln_star", "gaussian1d"}
