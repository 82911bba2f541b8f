import csv
import io
import json
import math
import subprocess
import sys
import time

import pytest

from egspin import cli, fermi_gas, measures
from egspin.cli import EXIT_CONFIG, EXIT_OK, EXIT_VALIDATION, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def test_profile_header_and_contact_row(capsys):
    code, out, _ = run_cli(capsys, "profile", "--x-steps", "121", "--reproducible")
    assert code == EXIT_OK
    rows = parse_csv(out)
    assert list(rows[0]) == cli.PROFILE_COLUMNS
    assert len(rows) == 121
    first = rows[0]
    for key, expected in (("f", 1), ("concurrence", 1), ("ere", 1), ("mutual_info", 2), ("classical_corr", 1)):
        assert float(first[key]) == pytest.approx(expected, abs=1e-8)
    assert first["entangled"] == "true"


def test_profile_concurrence_vanishes_past_crossing(capsys):
    _, out, _ = run_cli(capsys, "profile", "--reproducible")
    for row in parse_csv(out):
        if float(row["f2"]) <= 0.5:
            assert float(row["concurrence"]) == 0.0
            assert float(row["ere"]) == 0.0
            assert row["entangled"] == "false"


def test_profile_temperature_blocks(capsys):
    _, out, _ = run_cli(capsys, "profile", "--temps", "0,0.2", "--x-max", "2", "--x-steps", "21", "--reproducible")
    rows = parse_csv(out)
    assert len(rows) == 42
    cold = {float(r["kF_r"]): float(r["f"]) for r in rows if float(r["T_over_TF"]) == 0}
    warm = {float(r["kF_r"]): float(r["f"]) for r in rows if float(r["T_over_TF"]) == 0.2}
    assert warm[1.0] < cold[1.0]
    assert warm[0.0] == pytest.approx(1.0, abs=1e-8)


def test_profile_two_dimensional(capsys):
    _, out, _ = run_cli(capsys, "profile", "--dim", "2", "--x-max", "4", "--x-steps", "5", "--reproducible")
    rows = parse_csv(out)
    assert float(rows[2]["f"]) == pytest.approx(2 * 0.5767248077568734 / 2, abs=1e-12)


def test_json_mirrors_csv(capsys):
    args = ("profile", "--x-max", "3", "--x-steps", "7", "--reproducible")
    _, text_csv, _ = run_cli(capsys, *args)
    _, text_json, _ = run_cli(capsys, *args, "--format", "json")
    rows = parse_csv(text_csv)
    records = json.loads(text_json)
    assert len(rows) == len(records)
    for row, rec in zip(rows, records):
        assert float(row["f"]) == rec["f"]
        assert (row["bell_violating"] == "true") == rec["bell_violating"]


def test_csv_round_trips_floats(capsys):
    rows = cli.cmd_mu([0.1])
    text = cli.render(rows, cli.MU_COLUMNS, "csv")
    back = parse_csv(text)[0]
    assert float(back["mu_over_eF"]) == rows[0]["mu_over_eF"]


@pytest.mark.parametrize("command", ["profile", "shift", "surface", "mu"])
def test_reproducible_output_is_byte_identical(capsys, command):
    args = (command, "--x-max", "4", "--x-steps", "9", "--reproducible")
    _, a, _ = run_cli(capsys, *args)
    _, b, _ = run_cli(capsys, *args)
    assert a == b


def test_timestamp_without_reproducible(capsys):
    _, out, _ = run_cli(capsys, "mu", "--temps", "0.1")
    assert "# generated:" in out


def test_jobs_do_not_change_output(capsys):
    args = ("surface", "--x-max", "3", "--x-steps", "7", "--temps", "0,0.1", "--reproducible")
    _, serial, _ = run_cli(capsys, *args)
    _, threaded, _ = run_cli(capsys, *args, "--jobs", "2")
    assert serial == threaded


def test_state_matches_profile(capsys):
    _, out, _ = run_cli(capsys, "profile", "--x-max", "1", "--x-steps", "2", "--reproducible")
    row = parse_csv(out)[1]
    _, text, _ = run_cli(capsys, "state", "--f2", row["f2"], "--format", "json")
    report = json.loads(text)
    for key, col in (("concurrence", "concurrence"), ("e_re", "ere"), ("mutual_info", "mutual_info")):
        assert report[key] == pytest.approx(float(row[col]), abs=1e-10)
    assert report["eigenvalues"][0] == pytest.approx(report["fidelity"], abs=1e-12)


def test_state_text_report(capsys):
    code, out, _ = run_cli(capsys, "state", "--f2", "0.75")
    assert code == EXIT_OK
    assert "concurrence: 0.4" in out
    assert "entangled: true" in out


def test_shift_rows(capsys):
    _, out, _ = run_cli(capsys, "shift", "--temps", "0,0.02,0.05", "--reproducible")
    rows = parse_csv(out)
    assert float(rows[0]["delta_f_numeric"]) == 0.0
    assert rows[0]["delta_f_numeric_over_t2"] == "nan"
    assert float(rows[1]["delta_f_numeric_over_t2"]) == pytest.approx(-0.3716, rel=0.01)
    assert float(rows[1]["delta_f_sommerfeld_over_t2"]) == pytest.approx(-0.371552, abs=1e-6)
    assert float(rows[2]["delta_c_numeric"]) < 0


def test_shift_without_sommerfeld(capsys):
    _, out, _ = run_cli(capsys, "shift", "--no-sommerfeld", "--temps", "0.02", "--format", "json")
    rec = json.loads(out)[0]
    assert "delta_f_sommerfeld" not in rec
    assert set(rec) == set(cli.shift_columns(False))


def test_shift_json_writes_null_for_nan(capsys):
    _, out, _ = run_cli(capsys, "shift", "--temps", "0", "--format", "json")
    assert json.loads(out)[0]["delta_c_numeric_over_t2"] is None


def test_surface(capsys):
    _, out, _ = run_cli(capsys, "surface", "--x-max", "2", "--x-steps", "3", "--temps", "0,0.2", "--reproducible")
    rows = parse_csv(out)
    assert all(float(r["delta_f"]) == 0.0 for r in rows if float(r["T_over_TF"]) == 0)
    cell = next(r for r in rows if float(r["kF_r"]) == 1.0 and float(r["T_over_TF"]) == 0.2)
    assert float(cell["delta_f"]) < 0


def test_mu_command(capsys):
    _, out, _ = run_cli(capsys, "mu", "--temps", "0,0.5", "--reproducible")
    rows = parse_csv(out)
    assert float(rows[0]["mu_over_eF"]) == 1.0
    assert float(rows[1]["mu_over_eF"]) < float(rows[1]["sommerfeld_mu"])


def test_output_file(tmp_path, capsys):
    target = tmp_path / "mu.csv"
    assert main(["mu", "--temps", "0.1", "--out", str(target), "--reproducible"]) == EXIT_OK
    assert capsys.readouterr().out == ""
    assert "mu_over_eF" in target.read_text()


@pytest.mark.parametrize(
    "argv",
    [
        ["profile", "--dim", "2", "--temps", "0.1"],
        ["profile", "--x-steps", "1"],
        ["profile", "--x-min", "5", "--x-max", "1"],
        ["profile", "--x-min", "-1"],
        ["profile", "--temps", "-0.1"],
        ["profile", "--jobs", "0"],
        ["shift", "--x", "0"],
        ["state", "--f2", "1.5"],
        ["mu", "--out", "/nonexistent-dir/mu.csv"],
    ],
)
def test_config_errors(capsys, argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == EXIT_CONFIG
    assert "egspin:" in err


def test_validate_quick_passes_fast(capsys):
    start = time.perf_counter()
    code, out, _ = run_cli(capsys, "validate", "--quick")
    assert time.perf_counter() - start < 10
    assert code == EXIT_OK
    assert out.strip().endswith("checks passed")


@pytest.mark.slow
def test_validate_full(capsys):
    code, out, _ = run_cli(capsys, "validate")
    assert code == EXIT_OK
    assert "FAIL" not in out


def test_validate_catches_wrong_log_base(capsys, monkeypatch):
    true_fn = measures.mutual_information

    def natural_log_variant(F):
        return true_fn(F) * math.log(2)

    monkeypatch.setattr(measures, "mutual_information", natural_log_variant)
    code, out, _ = run_cli(capsys, "validate", "--quick")
    assert code == EXIT_VALIDATION
    assert "FAIL  werner_oracles" in out


def test_validate_catches_broken_normalization(capsys, monkeypatch):
    monkeypatch.setattr(fermi_gas, "density_residual", lambda thermal: 1e-6)
    code, out, _ = run_cli(capsys, "validate", "--quick")
    assert code == EXIT_VALIDATION
    assert "FAIL  density_normalization" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "egspin", "mu", "--temps", "0.1", "--reproducible"],
        capture_output=True, text=True, check=True,
    )
    assert "mu_over_eF" in proc.stdout
