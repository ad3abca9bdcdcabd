import csv
import io
import json
import subprocess
import sys

import pytest

from swkblab.cli import EXIT_COMPUTE, EXIT_CONFIG, EXIT_FAIL, EXIT_OK, REPORT_COLUMNS, main, parse_n_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_verify_conventional_is_exact(capsys):
    code, out, err = run(capsys, "verify", "--model", "conventional-radial", "--ell", "1", "--n", "1..10")
    assert code == EXIT_OK
    assert out.splitlines()[0] == ",".join(REPORT_COLUMNS)
    rows = rows_of(out)
    assert [int(r["n"]) for r in rows] == list(range(1, 11))
    assert all(abs(float(r["deviation"])) <= 1e-10 for r in rows)
    assert "max |deviation|" in err and "max |deviation|" not in out


def test_verify_extended(capsys):
    code, out, _ = run(capsys, "verify", "--model", "extended-radial", "--n", "0..0")
    assert code == EXIT_OK
    assert float(rows_of(out)[0]["deviation"]) == 0.0
    code, out, _ = run(capsys, "verify", "--model", "extended-radial", "--n", "1..10")
    rows = rows_of(out)
    assert max(abs(float(r["deviation"])) for r in rows) > 100 * max(float(r["quad_error"]) for r in rows)


def test_verify_computation_error_exits_2(capsys):
    # root tolerance below roundoff cannot be met by any turning point
    code, out, err = run(capsys, "verify", "--model", "extended-radial", "--n", "3", "--root-tol", "1e-30")
    assert code == EXIT_COMPUTE and out == "" and "computation error" in err


@pytest.mark.parametrize("argv,field", [
    (["verify", "--hbar", "-1"], "hbar"),
    (["verify", "--omega", "0"], "omega"),
    (["verify", "--model", "extended-radial", "--ell", "0.4"], "ell"),
    (["verify", "--n", "5..2"], "n range"),
    (["verify", "--quad-tol", "0"], "quad-tol"),
    (["verify", "--model", "bogus"], "model"),
    (["sweep", "--ell-list", ""], "ell-list"),
    (["scaling-check", "--n", "1..2"], "--n"),
    (["frobnicate"], "command"),
])
def test_config_errors_name_the_field(capsys, argv, field):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_CONFIG and out == ""
    assert field in err


def test_parse_n_range():
    assert parse_n_range("3") == (3, 3)
    assert parse_n_range("0..4") == (0, 4)


def test_shape_check_pass_and_mutation_fail(capsys):
    for model in ("extended-radial", "conventional-radial"):
        code, out, _ = run(capsys, "shape-check", "--model", model)
        assert code == EXIT_OK and rows_of(out)[0]["status"] == "PASS"
    code, out, _ = run(capsys, "shape-check", "--mutate", "drop-last-term")
    assert code == EXIT_FAIL and rows_of(out)[0]["status"] == "FAIL"
    assert float(rows_of(out)[0]["max_abs_residual_hw"]) >= 1e-4
    code, _, err = run(capsys, "shape-check", "--model", "harmonic-oscillator")
    assert code == EXIT_CONFIG
    code, _, err = run(capsys, "shape-check", "--x-min", "3", "--x-max", "1")
    assert code == EXIT_CONFIG


def test_scaling_check(capsys):
    code, out, _ = run(capsys, "scaling-check", "--model", "conventional-radial", "--ell-tilde", "2",
                       "--n", "3", "--hbar-list", "0.25,1,4")
    assert code == EXIT_OK
    rows = rows_of(out)
    assert len(rows) == 3
    for r in rows:
        assert float(r["integral_over_hbar"]) == pytest.approx(9.42477796076938, rel=1e-12)
    code, out, _ = run(capsys, "scaling-check", "--model", "extended-radial", "--ell-tilde", "2",
                       "--n", "3", "--hbar-list", "0.25,1,4")
    assert code == EXIT_OK
    vals = {r["integral_over_hbar"] for r in rows_of(out)}
    assert len(vals) == 1 and abs(float(vals.pop()) - 9.42477796076938) > 1e-3
    code, out, _ = run(capsys, "scaling-check", "--n", "0")
    assert code == EXIT_OK and all(float(r["integral"]) == 0.0 for r in rows_of(out))


def test_spectrum(capsys):
    for model in ("conventional-radial", "extended-radial"):
        code, out, _ = run(capsys, "spectrum", "--model", model, "--n", "0..5")
        assert code == EXIT_OK
        assert all(float(r["relative_error"]) <= 1e-5 for r in rows_of(out))
    code, out, err = run(capsys, "spectrum", "--x-max", "2")
    assert code == EXIT_COMPUTE and "BoxTooSmall" in err
    code, _, _ = run(capsys, "spectrum", "--count", "10")
    assert code == EXIT_CONFIG


def test_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--model", "conventional-radial", "--ell-list", "0.6,1,2,5,10",
                       "--n", "1..3")
    assert code == EXIT_OK
    rows = rows_of(out)
    assert list(rows[0].keys()) == ["ell", "ell_tilde", "n", "deviation", "quad_error"]
    assert [(r["ell"], r["n"]) for r in rows[:4]] == [("0.6", "1"), ("0.6", "2"), ("0.6", "3"), ("1.0", "1")]
    assert all(abs(float(r["deviation"])) <= 1e-10 for r in rows)
    code, out, _ = run(capsys, "sweep", "--ell-range", "1", "10", "4", "--n", "1")
    rows = rows_of(out)
    assert [float(r["ell"]) for r in rows] == [1.0, 4.0, 7.0, 10.0]
    assert abs(float(rows[-1]["deviation"])) < abs(float(rows[0]["deviation"]))


@pytest.mark.parametrize("argv", [
    ["verify", "--n", "1..4"],
    ["shape-check"],
    ["scaling-check", "--hbar-list", "0.5,2"],
    ["spectrum", "--n", "0..2"],
    ["sweep", "--ell-list", "1,2", "--n", "1..2"],
])
def test_deterministic_and_csv_json_agree(capsys, argv):
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second and first.endswith("\n") and "\r" not in first
    code, js, _ = run(capsys, *argv, "--format", "json")
    doc = json.loads(js)
    assert set(doc) == {"config", "rows", "summary"}
    assert {"max_abs_deviation", "runtime_seconds"} <= set(doc["summary"])
    csv_rows = rows_of(first)
    assert len(csv_rows) == len(doc["rows"])
    for c, j in zip(csv_rows, doc["rows"]):
        assert list(c) == list(j)
        for key, value in j.items():
            if isinstance(value, float):
                assert float(c[key]) == value
            else:
                assert c[key] == str(value)


def test_jobs_do_not_change_output(capsys):
    _, serial, _ = run(capsys, "verify", "--n", "1..4", "--jobs", "1")
    _, parallel, _ = run(capsys, "verify", "--n", "1..4", "--jobs", "3")
    assert serial == parallel


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# campaign\nmodel = conventional-radial\nell = 2\nn = 1..2\nformat=json\n")
    code, out, _ = run(capsys, "verify", "--config", str(cfg))
    doc = json.loads(out)
    assert code == EXIT_OK and doc["config"]["model"] == "conventional-radial"
    assert [r["ell"] for r in doc["rows"]] == [2.0, 2.0]
    code, out, _ = run(capsys, "verify", "--config", str(cfg), "--ell", "3", "--format", "csv")
    assert {r["ell"] for r in rows_of(out)} == {"3.0"}
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    code, _, err = run(capsys, "verify", "--config", str(bad))
    assert code == EXIT_CONFIG and "colour" in err
    code, _, _ = run(capsys, "verify", "--config", str(tmp_path / "missing.cfg"))
    assert code == EXIT_CONFIG


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.csv"
    code, out, _ = run(capsys, "verify", "--n", "1", "--output", str(target))
    assert code == EXIT_OK and out == ""
    data = target.read_bytes()
    assert data.startswith(b"model,omega") and b"\r\n" not in data


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "swkblab", "shape-check", "--mutate", "drop-last-term"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == EXIT_FAIL
    assert "FAIL" in proc.stderr and proc.stdout.startswith("model,")
