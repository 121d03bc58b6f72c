import csv
import io
import json
from pathlib import Path

import jsonschema
import pytest

from convexity import cli

DATA = Path(__file__).resolve().parents[1] / "data"
SCHEMA = json.loads(cli.schema_path().read_text())

FAST = {
    "verify-lemma": ["--count", "5"],
    "bound": ["--frame", str(DATA / "chi_5_1.frame")],
    "char-scan": ["--qmax", "30"],
    "intermediate": ["--qmax", "5", "--delta", "0.1", "0.5"],
    "gamma-ratio-scan": [],
}


def run_cli(tmp_path, *argv, name="out"):
    out = tmp_path / name
    code = cli.main([*argv, "-o", str(out)])
    return code, out.read_text() if out.exists() else None


@pytest.mark.parametrize("sub", cli.SUBCOMMANDS)
def test_subcommands_pass_and_have_fixed_header(tmp_path, sub):
    code, text = run_cli(tmp_path, sub, *FAST[sub])
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == cli.COLUMNS[sub]
    assert len(rows) > 1
    assert all(len(r) == len(rows[0]) for r in rows)


@pytest.mark.parametrize("sub", cli.SUBCOMMANDS)
def test_json_output_validates(tmp_path, sub):
    code, text = run_cli(tmp_path, sub, *FAST[sub], "--format", "json")
    doc = json.loads(text)
    jsonschema.validate(doc, SCHEMA)
    assert doc["meta"]["schema_version"] == cli.SCHEMA_VERSION
    assert doc["meta"]["passed"] is (code == 0)


@pytest.mark.parametrize("fmt", ["csv", "json"])
@pytest.mark.parametrize("sub", ["verify-lemma", "char-scan"])
def test_output_is_byte_identical_across_runs(tmp_path, sub, fmt):
    _, a = run_cli(tmp_path, sub, *FAST[sub], "--format", fmt, name="a")
    _, b = run_cli(tmp_path, sub, *FAST[sub], "--format", fmt, name="b")
    assert a == b


def test_parallel_matches_serial(tmp_path):
    _, a = run_cli(tmp_path, "char-scan", "--qmax", "40", name="a")
    _, b = run_cli(tmp_path, "char-scan", "--qmax", "40", "--jobs", "2", name="b")
    assert a == b


def test_stdout_output(capsys):
    assert cli.main(["gamma-ratio-scan"]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("alpha,beta,bound")
    assert "gamma-ratio-scan: PASS" in captured.err


def test_failing_check_exits_one_and_still_writes(tmp_path):
    code, text = run_cli(tmp_path, "verify-lemma", "--count", "2", "--tolerance", "1e-30")
    assert code == 1
    assert "false" in text


def test_corpus_option(tmp_path):
    code, text = run_cli(tmp_path, "verify-lemma", "--count", "0", "--corpus", str(DATA / "lemma_corpus.txt"))
    assert code == 0
    assert text.count("\n") == 28


def test_bound_lfunction_flag(tmp_path):
    code, text = run_cli(tmp_path, "bound", "--lfunction", "chi:7:2")
    assert code == 0
    assert "chi_7_2" in text
    code, text = run_cli(tmp_path, "bound", "--frame", str(DATA / "synthetic_deg2.frame"))
    assert code == 0
    assert text.splitlines()[1].startswith("one,")


def test_io_and_value_errors_exit_two(tmp_path):
    assert cli.main(["bound", "--frame", str(tmp_path / "missing.frame")]) == 2
    assert cli.main(["bound", "--lfunction", "nonsense"]) == 2
    assert cli.main(["char-scan", "--qmax", "0"]) == 2
    assert cli.main(["gamma-ratio-scan", "-o", str(tmp_path / "no" / "such" / "dir.csv")]) == 2


def test_usage_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        cli.main(["char-scan", "--bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        cli.main([])


def test_run_config_validation():
    with pytest.raises(ValueError):
        cli.RunConfig("nope")
    with pytest.raises(ValueError):
        cli.RunConfig("bound", fmt="xml")
    with pytest.raises(ValueError):
        cli.RunConfig("bound", jobs=0)
