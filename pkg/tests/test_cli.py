import json
import math
import subprocess
import sys

import pytest

from bellgen import __version__
from bellgen.cli import main, parse_angle, parse_sweep, read_table, render


def run(tmp_path, *argv, name="out.txt"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out.read_text()


@pytest.mark.parametrize("text, value", [
    ("0.5", 0.5), ("pi/8", math.pi / 8), ("3pi/8", 3 * math.pi / 8), ("-pi/4", -math.pi / 4),
    ("2*pi", 2 * math.pi), ("pi", math.pi),
])
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value, abs=1e-15)


def test_parse_sweep():
    assert parse_sweep("0:1:5") == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert parse_sweep("pi/4:pi/2:1") == [math.pi / 4]


def test_sweep_photon(tmp_path):
    code, text = run(tmp_path, "sweep", "--kind", "photon", "--sweep", "0:pi/2:5",
                     "--samples", "100000", "--seed", "1")
    assert code == 0
    t = read_table(text)
    assert t.metadata["seed"] == 1 and t.metadata["n_trials"] == 100_000
    assert t.metadata["version"] == __version__
    for row in t.rows:
        assert row["analytic"] == pytest.approx(math.cos(2 * row["theta"]), abs=1e-12)
        assert abs(row["monte_carlo"] - row["analytic"]) <= 5 * row["std_error"]


def test_sweep_spin_first_row(tmp_path):
    code, text = run(tmp_path, "sweep", "--kind", "spin", "--samples", "2000")
    t = read_table(text)
    assert t.rows[0]["theta"] == 0.0
    assert t.rows[0]["analytic"] == -1.0


def test_sweep_single_step(tmp_path):
    code, text = run(tmp_path, "sweep", "--sweep", "pi/4:pi/2:1", "--samples", "2000")
    t = read_table(text)
    assert len(t.rows) == 1
    assert t.rows[0]["analytic"] == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("kind", ["photon", "spin"])
def test_chsh_defaults(tmp_path, kind):
    code, text = run(tmp_path, "chsh", "--kind", kind, "--samples", "50000", "--format", "json")
    assert code == 0
    rows = {r["quantity"]: r["value"] for r in json.loads(text)["rows"]}
    assert abs(rows["quantum_analytic"]) == pytest.approx(2 * math.sqrt(2), abs=1e-12)
    if kind == "photon":
        assert rows["classical_factorized_projection_max"] == pytest.approx(math.sqrt(2),
                                                                            abs=1e-6)


@pytest.mark.parametrize("kind, expected", [("photon", 2.0), ("spin", -2.0)])
def test_chsh_degenerate_settings(tmp_path, kind, expected):
    code, text = run(tmp_path, "chsh", "--kind", kind, "--settings", "0.2,0.2,0.2,0.2",
                     "--samples", "2000", "--format", "json")
    rows = {r["quantity"]: r["value"] for r in json.loads(text)["rows"]}
    assert rows["quantum_analytic"] == pytest.approx(expected, abs=1e-12)


def test_quadrature_example(tmp_path):
    code, text = run(tmp_path, "quadrature", "--theta", "pi/6")
    assert code == 0
    assert read_table(text).rows[0]["quadrature"] == pytest.approx(0.5, abs=1e-12)


def test_locality_pass_and_counts(tmp_path):
    tr = tmp_path / "t.jsonl"
    code, text = run(tmp_path, "locality", "--samples", "20000", "--transcript", str(tr))
    assert code == 0
    row = read_table(text).rows[0]
    assert row["distribution_messages"] == 2 * row["rounds"] == 80_000
    assert row["inter_party_measurement_messages"] == 0
    assert len(tr.read_text().splitlines()) == 80_000


def test_locality_fault_fails(tmp_path):
    code, text = run(tmp_path, "locality", "--samples", "20000", "--inject-bias", "0.05")
    assert code == 1
    assert read_table(text).rows[0]["status"] == "fail"


def test_cv_product(tmp_path):
    code, text = run(tmp_path, "cv", "-f", "3", "--samples", "10000")
    assert code == 0
    for row in read_table(text).rows:
        assert row["uncertainty_product"] == pytest.approx(0.5, abs=1e-15)


def test_sequential_and_singles(tmp_path):
    assert run(tmp_path, "sequential", "--kind", "spin", "--samples", "20000")[0] == 0
    assert run(tmp_path, "singles", "--kind", "photon", "--samples", "20000")[0] == 0


def test_theta_and_sweep_conflict():
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--theta", "0", "--sweep", "0:1:2"])
    assert exc.value.code == 2


def test_bad_kind_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--kind", "phonon"])
    assert exc.value.code == 2


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_roundtrip_is_byte_identical(tmp_path, fmt):
    _, text = run(tmp_path, "sweep", "--kind", "spin", "--samples", "3000", "--format", fmt)
    assert render(read_table(text), fmt) == text


@pytest.mark.parametrize("argv", [
    ["sweep", "--kind", "photon", "--samples", "70000"],
    ["chsh", "--kind", "spin", "--samples", "70000"],
    ["sequential", "--kind", "photon", "--samples", "70000"],
    ["cv", "--samples", "70000", "-f", "0.3"],
])
def test_byte_identical_across_runs_and_workers(tmp_path, argv):
    _, one = run(tmp_path, *argv, "--workers", "1", name="w1")
    _, again = run(tmp_path, *argv, "--workers", "1", name="w1b")
    _, four = run(tmp_path, *argv, "--workers", "4", name="w4")
    assert one == again == four


def test_stdout_mode(capsys):
    assert main(["quadrature", "--theta", "0", "--format", "json"]) == 0
    out = capsys.readouterr()
    assert json.loads(out.out)["metadata"]["passed"] is True
    assert "[PASS]" in out.err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "bellgen", "quadrature", "--theta", "pi/6"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.startswith("# {")
