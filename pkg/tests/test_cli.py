import csv
import io
import json
from pathlib import Path

import jsonschema
import pytest

from rarewalk.cli import dispatch
from rarewalk.report import data_rows

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "docs" / "report.schema.json").read_text())

# one cheap invocation per subcommand
INVOCATIONS = {
    "expect": ["expect", "--n", "1", "--n-max", "12", "--route", "all"],
    "enumerate": ["enumerate", "--n", "6", "--stat", "f1-dist"],
    "events": ["events", "--t-max", "12"],
    "moments": ["moments", "--n", "9", "--k", "3"],
    "bijection-check": ["bijection-check", "--n-plus-1", "6"],
    "tail": ["tail", "--n", "200", "--a", "0.25", "--replicas", "2000", "--seed", "11"],
    "tail-slope": ["tail-slope", "--n-grid", "64,256", "--a", "0.25", "--replicas", "2000", "--seed", "11"],
    "limsup": ["limsup", "--N", "2000", "--n-min", "10", "--replicas", "5", "--seed", "11"],
    "sites": ["sites", "--n", "100", "--replicas", "2000", "--seed", "11"],
    "biased": ["biased", "--n", "100", "--p", "0.6", "--replicas", "2000", "--seed", "11", "--a", "0.1"],
}


def run(capsys, argv):
    code = dispatch(argv)
    out, err = capsys.readouterr()
    return code, out, err


def csv_table(text):
    return list(csv.DictReader(io.StringIO("\n".join(data_rows(text)))))


def test_expect_example(capsys):
    code, out, _ = run(capsys, ["expect", "--n", "3", "--route", "both"])
    assert code == 0
    (row,) = csv_table(out)
    assert row["recursion"] == "5/4" and row["ladder"] == "5/4" and row["agree"] == "true"
    assert row["recursion_float"] == "1.25"


def test_enumerate_example(capsys):
    code, out, _ = run(capsys, ["enumerate", "--n", "3", "--stat", "alpha-dist"])
    assert code == 0
    rows = {r["value"]: (r["probability"], float(r["probability_float"])) for r in csv_table(out)}
    assert rows == {"0": ("1/4", 0.25), "1": ("1/2", 0.5), "3": ("1/4", 0.25)}


def test_bijection_example(capsys):
    code, out, _ = run(capsys, ["bijection-check", "--n-plus-1", "8", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["passed"] is True
    assert all(r["passed"] for r in doc["rows"])


@pytest.mark.parametrize("name", sorted(INVOCATIONS))
def test_json_matches_schema(capsys, name):
    code, out, _ = run(capsys, INVOCATIONS[name] + ["--format", "json"])
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["command"] == name
    for row in doc["rows"]:
        assert set(row) <= set(doc["columns"])


@pytest.mark.parametrize("name", sorted(INVOCATIONS))
def test_csv_is_rectangular(capsys, name):
    code, out, _ = run(capsys, INVOCATIONS[name])
    assert code == 0
    lines = data_rows(out)
    widths = {len(r) for r in csv.reader(lines)}
    assert len(widths) == 1
    assert all(line.startswith("#") for line in out.splitlines()[: len(out.splitlines()) - len(lines)])


@pytest.mark.parametrize("name", ["tail", "tail-slope", "limsup", "sites", "biased"])
def test_data_rows_reproducible(capsys, name):
    _, first, _ = run(capsys, INVOCATIONS[name])
    _, second, _ = run(capsys, INVOCATIONS[name] + ["--threads", "1"])
    assert data_rows(first) == data_rows(second)


def test_missing_seed_is_generated_and_recorded(capsys):
    code, out, err = run(capsys, ["sites", "--n", "10", "--replicas", "10", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["seed_source"] == "generated"
    assert str(doc["master_seed"]) in err


def test_explicit_seed_recorded(capsys):
    _, out, _ = run(capsys, ["tail", "--n", "10", "--a", "0.5", "--replicas", "10", "--seed", str(2**64 - 1)])
    assert f"# master_seed: {2**64 - 1}" in out
    assert "# seed_source: explicit" in out


def test_unknown_subcommand(capsys):
    code, _, err = run(capsys, ["frobnicate"])
    assert code == 2
    assert "usage" in err


@pytest.mark.parametrize(
    "argv, needle",
    [
        (["expect", "--n", "0"], "n must be >= 1"),
        (["enumerate", "--n", "40"], "cap"),
        (["tail", "--n", "10", "--a", "-1", "--replicas", "10", "--seed", "1"], "a must be > 0"),
        (["limsup", "--N", "5", "--n-min", "10", "--replicas", "1", "--seed", "1"], "N must be >= n_min"),
        (["biased", "--n", "10", "--p", "1.5", "--replicas", "10", "--seed", "1"], "p must lie in [0, 1]"),
        (["moments", "--n", "4"], "--n and --k"),
        (["events", "--t-max", "5000"], "--floating"),
    ],
)
def test_precondition_errors(capsys, argv, needle):
    code, out, err = run(capsys, argv)
    assert code == 2
    assert out == ""
    assert needle in err


def test_bad_seed_is_a_usage_error(capsys):
    code, _, err = run(capsys, ["sites", "--n", "10", "--replicas", "10", "--seed", str(2**64)])
    assert code == 2
    assert "64-bit" in err


def test_output_file_and_env_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("RAREWALK_OUTPUT_DIR", str(tmp_path))
    assert dispatch(["expect", "--n", "2"]) == 0
    assert (tmp_path / "expect.csv").exists()
    assert dispatch(["expect", "--n", "2", "--format", "json", "--output", "sub/e.json"]) == 0
    assert json.loads((tmp_path / "sub" / "e.json").read_text())["rows"][0]["recursion"] == "1/1"
    assert capsys.readouterr().out == ""


def test_thread_env_override(capsys, monkeypatch):
    monkeypatch.setenv("RAREWALK_THREADS", "1")
    _, out, _ = run(capsys, ["expect", "--n", "2", "--format", "json"])
    assert json.loads(out)["metadata"]["threads"] == 1
    monkeypatch.setenv("RAREWALK_THREADS", "many")
    code, _, _ = run(capsys, ["expect", "--n", "2"])
    assert code == 2


def test_scientific_replica_counts(capsys):
    code, out, _ = run(capsys, ["sites", "--n", "10", "--replicas", "1e3", "--seed", "5", "--format", "json"])
    assert code == 0
    assert json.loads(out)["replicas"] == 1000


def test_events_oracle_and_convergence(capsys):
    _, out, _ = run(capsys, ["events", "--t-max", "10", "--report", "oracle", "--format", "json"])
    assert json.loads(out)["summary"]["all_agree"] is True
    _, out, _ = run(capsys, ["events", "--t-max", "1000", "--report", "convergence", "--format", "json"])
    doc = json.loads(out)
    assert doc["rows"][-1]["t"] == 1000
    assert doc["summary"]["limit.t_c2"] == 0.5


def test_moments_growth(capsys):
    code, out, _ = run(capsys, ["moments", "--growth", "--n-list", "64,128", "--a", "1", "--format", "json"])
    assert code == 0
    assert [r["n"] for r in json.loads(out)["rows"]] == [64, 128]
