"""Command-line entry points: verdict exit codes and reproducible JSON."""

import json

import pytest

from thetalift import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_objects(capsys):
    code, out, _ = run(capsys, "objects", "--n", "2", "--max-width", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["count"] == 8
    assert "0" in doc["objects"]


def test_hom_counts(capsys):
    code, out, _ = run(capsys, "hom", "--src", "1", "--dst", "2", "--n", "2")
    assert code == 0
    assert json.loads(out)["count"] == 4


def test_free_counts(capsys):
    code, out, _ = run(capsys, "free", "--table", "2", "--n", "2")
    assert code == 0
    assert tuple(json.loads(out)["cells"]) == (2, 4, 5)


def test_nerve_named_category(capsys):
    code, out, _ = run(capsys, "nerve", "--cat", "j2", "--n", "2",
                       "--max-width", "2")
    assert code == 0
    doc = json.loads(out)
    by_table = {row["table"]: row["elements"] for row in doc["objects"]}
    assert len(by_table["1"]) == 4


def test_output_is_byte_identical_across_runs(capsys):
    argv = ("hom", "--src", "1 1 / 0", "--dst", "2", "--n", "2")
    _, out1, _ = run(capsys, *argv)
    _, out2, _ = run(capsys, *argv)
    assert out1 == out2
    _, out3, _ = run(capsys, "free", "--table", "1 1 / 0", "--n", "2")
    _, out4, _ = run(capsys, "free", "--table", "1 1 / 0", "--n", "2")
    assert out3 == out4


def test_usage_error_exit_code(capsys):
    code, out, err = run(capsys, "hom", "--src", "nonsense", "--dst", "1")
    assert code == 2
    assert json.loads(err)["error"] == "usage"


def test_bounds_error_exit_code(capsys):
    # a table wider than the bounded site
    code, out, err = run(capsys, "spine", "--table", "1 1 1 / 0 0",
                         "--n", "2", "--max-width", "2")
    assert code == 3
    assert json.loads(err)["error"] == "bounds"


def test_negative_verdict_exit_code(capsys):
    code, out, _ = run(capsys, "trivfib", "--collapse", "2",
                       "--n", "2", "--max-width", "2")
    assert code == 1
    assert json.loads(out)["trivial_fibration"] is False


def test_positive_verdict_exit_code(capsys):
    code, out, _ = run(capsys, "trivfib", "--cat", "j", "--n", "2",
                       "--max-width", "2")
    assert code == 0
    assert json.loads(out)["trivial_fibration"] is True


def test_verify_counterexample_verb(capsys):
    code, out, _ = run(capsys, "verify-counterexample", "--n", "2",
                       "--max-width", "2")
    assert code == 0
    assert json.loads(out)["verified"] is True


def test_verify_not_2qcat_verb(capsys):
    code, out, _ = run(capsys, "verify-not-2qcat", "--max-width", "2")
    assert code == 0
    assert json.loads(out)["confirmed_not_fibrant"] is True


def test_verify_segal_verb(capsys):
    code, out, _ = run(capsys, "verify-segal", "--cat", "j2", "--n", "2",
                       "--max-width", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["all_bijective"] is True


def test_export_requires_out(capsys):
    with pytest.raises(SystemExit):
        cli.main(["export", "--what", "free", "--table", "2"])
    capsys.readouterr()


def test_export_writes_file(tmp_path, capsys):
    out_file = tmp_path / "free.json"
    code = cli.main(["--out", str(out_file), "export", "--what", "free",
                     "--table", "2", "--n", "2"])
    capsys.readouterr()
    assert code == 0
    doc = json.loads(out_file.read_text())
    assert tuple(doc["cells"]) == (2, 4, 5)


def test_timings_flag_only_adds_field_when_requested(capsys):
    _, plain, _ = run(capsys, "objects", "--n", "2", "--max-width", "2")
    _, timed, _ = run(capsys, "--timings", "objects", "--n", "2",
                      "--max-width", "2")
    assert "elapsed_s" not in json.loads(plain)
    assert "elapsed_s" in json.loads(timed)
