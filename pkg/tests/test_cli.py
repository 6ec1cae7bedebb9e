import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from subordlab.cli import dispatch, emit_plot_data
from subordlab.dominants import DominantSpec, boundary_curve
from subordlab.harness import persist_report, run_case
from subordlab.power_series import TaylorSeries

GOLDEN = Path(__file__).parent / "golden"


def run(argv, capsys):
    code = dispatch(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def series_of(text):
    return TaylorSeries.from_json(json.loads(text))


@pytest.mark.parametrize("row", json.loads((GOLDEN / "exit_codes.json").read_text()),
                         ids=lambda r: " ".join(r["argv"]) or "<empty>")
def test_exit_codes(row, capsys):
    code, _, _ = run(row["argv"], capsys)
    assert code == row["exit"]


@pytest.mark.parametrize("name,argv", [
    ("bb_apply", ["bb", "apply", "--p", "1,1", "--Q", "1", "--order", "8"]),
    ("bb_solve", ["bb", "solve", "--Q", "1,1", "--order", "8"]),
])
def test_golden_series(name, argv, capsys):
    code, out, _ = run(argv, capsys)
    expect = series_of((GOLDEN / f"{name}.json").read_text())
    assert code == 0 and series_of(out).allclose(expect, atol=1e-14)


def test_closed_form_flag(capsys):
    _, a, _ = run(["bb", "solve", "--Q", "1,1", "--order", "8"], capsys)
    _, b, _ = run(["bb", "solve", "--Q", "1,1", "--order", "8", "--closed-form"], capsys)
    assert series_of(a).allclose(series_of(b), atol=1e-12)


def test_iop_bernardi_power(capsys):
    f = ",".join(["0"] + ["1"] * 8)
    code, out, _ = run(["iop", "apply", "--which", "bernardi-power", "--f", f,
                        "--alpha", "1", "--beta", "1", "--order", "8"], capsys)
    expect = [0, 1, 1 / 3, 1 / 6, 1 / 10, 1 / 15, 1 / 21]
    assert code == 0 and np.allclose(series_of(out).coeffs[:7], expect, atol=1e-13)


def test_series_file_input(tmp_path, capsys):
    path = tmp_path / "q.json"
    path.write_text(json.dumps(TaylorSeries([1, 1], 8).to_json()))
    code, out, _ = run(["bb", "solve", "--Q", f"@{path}", "--order", "8"], capsys)
    assert code == 0 and abs(series_of(out).coeffs[1] + 0.5) < 1e-14


def test_subord_check_output(capsys):
    code, out, _ = run(["subord", "check", "--p", "2,1", "--dominant", "exp"], capsys)
    assert code == 1 and "holds=false" in out


def test_curve_sqrt5(capsys):
    code, out, _ = run(["curve", "--dominant", "opendoor-a", "--n", "1", "--alpha", "0",
                        "--beta", "1", "--r", "0.999"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and list(rows[0]) == ["theta", "re", "im"]
    row = min(rows, key=lambda r: abs(float(r["theta"]) - math.pi / 2))
    assert abs(float(row["theta"]) - math.pi / 2) < 1e-9
    assert abs(complex(float(row["re"]), float(row["im"]))) == pytest.approx(math.sqrt(5), abs=2e-3)


def test_curve_written_to_file(tmp_path, capsys):
    path = tmp_path / "c.csv"
    code, _, _ = run(["--output", str(path), "curve", "--dominant", "exp", "--r", "0.9"], capsys)
    assert code == 0 and path.read_text().startswith("theta,re,im\n")


def test_options_after_subcommand(tmp_path, capsys):
    path = tmp_path / "c.csv"
    code, _, _ = run(["curve", "--dominant", "exp", "--r", "0.9", "--output", str(path)], capsys)
    assert code == 0 and path.exists()


def test_verify_report(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(["verify", "--case", "cor-ez", "--trials", "100", "--seed", "7",
                        "--out", str(path)], capsys)
    assert code == 0 and "cor-ez: 100 pass, 0 fail" in out
    data = json.loads(path.read_text())
    reports = data if isinstance(data, list) else [data]
    assert reports[0]["failures"] == 0 and reports[0]["seed"] == 7


def test_seed_environment(monkeypatch, capsys):
    _, a, _ = run(["verify", "--case", "cor-ez", "--trials", "3", "--seed", "1"], capsys)
    monkeypatch.setenv("SUBORDLAB_SEED", "1")
    _, b, _ = run(["verify", "--case", "cor-ez", "--trials", "3", "--seed", "99"], capsys)
    assert a == b


def test_verify_exit_on_failure(capsys):
    # the sector corollary has a genuine counterexample among these trials
    code, out, _ = run(["verify", "--case", "cor-ss", "--trials", "100", "--seed", "7"], capsys)
    assert code == 1 and "1 fail" in out


def test_falsify_converse(capsys):
    code, out, _ = run(["falsify", "--case", "cor-ez", "--converse", "--budget", "200",
                        "--stop-after", "1"], capsys)
    assert code == 0 and "converse-of(cor-ez)" in out


class TestEmit:
    def test_curve_csv_round_trip(self):
        c = boundary_curve(DominantSpec.exp(), 0.9, 64)
        rows = list(csv.reader(io.StringIO(emit_plot_data(c, "csv"))))
        assert rows[0] == ["theta", "re", "im"]
        pts = np.array([complex(float(r[1]), float(r[2])) for r in rows[1:]])
        assert np.array_equal(pts, c.points)

    def test_report_matches_persist(self, tmp_path):
        r = run_case("cor-ez", 3, seed=0)
        persist_report(r, tmp_path / "a.json")
        emitted = json.loads(emit_plot_data(r, "json", str(tmp_path / "b.json")))
        assert emitted == json.loads((tmp_path / "a.json").read_text())
        assert json.loads((tmp_path / "b.json").read_text()) == emitted

    def test_series(self):
        s = TaylorSeries([1, 0.5j, -2])
        assert TaylorSeries.from_json(json.loads(emit_plot_data(s, "json"))).allclose(s, atol=0)

    def test_rejects(self):
        with pytest.raises(ValueError):
            emit_plot_data(TaylorSeries([1]), "csv")
        with pytest.raises(TypeError):
            emit_plot_data(object(), "json")


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "subordlab", "bb", "apply", "--p", "1,1", "--Q", "1",
                          "--order", "8"], capture_output=True, text=True)
    assert out.returncode == 0 and series_of(out.stdout).coeffs[2] == -1
