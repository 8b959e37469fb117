import csv
import io
import json
import subprocess
import sys

import pytest

from zeeman_zones.cli import ConfigError, main, read_config_file


def run(argv):
    out = io.StringIO()
    code = main(argv, stdout=out)
    return code, out.getvalue()


def test_spectrum_example():
    code, text = run(["spectrum", "--zone", "0", "--kappa", "1", "--lambda", "1", "--p-max", "2", "--format", "csv"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["zone", "p", "energy", "multiplicity"]
    assert [(r[2], r[3]) for r in rows[1:]] == [("1/1", "1"), ("3/1", "1"), ("5/1", "1")]


def test_verify_eigen_summary():
    code, text = run(["verify-eigen", "--max-degree", "8"])
    assert code == 0
    assert text.strip() == "checked 45 eigen-relations, 0 failures"


def test_verify_eigen_rejects_many_particles():
    with pytest.raises(SystemExit) as info:
        run(["verify-eigen", "--kappa", "2"])
    assert info.value.code == 2


def test_lamb_total_row():
    code, text = run(["lamb", "--l", "0", "--mode", "total"])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert float(rows[0]["sigma_im"]) == pytest.approx(-1.128379, abs=1e-6)
    assert float(rows[0]["delta_MHz"]) == pytest.approx(813.86, abs=0.01)


def test_lamb_constants_dump():
    code, text = run(["lamb", "--constants"])
    assert code == 0
    assert json.loads(text)["alpha"] == pytest.approx(7.2973525693e-3)


def test_json_format_keeps_numbers_and_rationals():
    code, text = run(["spectrum", "--p-max", "1", "--lambda", "1/2", "--format", "json"])
    data = json.loads(text)
    assert data[1] == {"zone": 0, "p": 1, "energy": "3/2", "multiplicity": 1}


@pytest.mark.parametrize("argv", [
    ["spectrum", "--lambda", "-1"],
    ["spectrum", "--lambda", "abc"],
    ["spectrum", "--kappa", "0"],
    ["spectrum", "--zone", "-1"],
    ["coulomb", "--a", "-2"],
    ["partition", "--tol", "0"],
    ["nonsense"],
    ["spectrum", "--format", "xml"],
])
def test_argument_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as info:
        run(argv)
    assert info.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_computation_failure_exits_1(capsys, tmp_path):
    target = tmp_path / "out.csv"
    code, text = run(["partition", "--variant", "schrodinger", "--t", "3.141592653589793",
                      "--output", str(target)])
    assert code == 1
    assert text == ""
    assert not target.exists()
    assert "SingularTimeError" in capsys.readouterr().err


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# settings\nlambda = 1/2\np_max = 1\nformat=csv\n")
    code, text = run(["spectrum", "--config", str(cfg)])
    assert [r[2] for r in csv.reader(io.StringIO(text))][1:] == ["1/2", "3/2"]
    code, text = run(["spectrum", "--config", str(cfg), "--lambda", "2"])
    assert [r[2] for r in csv.reader(io.StringIO(text))][1:] == ["2/1", "6/1"]


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour=blue\n")
    with pytest.raises(ConfigError):
        read_config_file(bad)
    bad.write_text("kappa=two\n")
    with pytest.raises(ConfigError):
        read_config_file(bad)
    with pytest.raises(SystemExit) as info:
        run(["spectrum", "--config", str(bad)])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        run(["spectrum", "--config", str(tmp_path / "missing.cfg")])


@pytest.mark.parametrize("argv", [
    ["kernels", "--kind", "wiener-zonal", "--zone", "1", "--t", "0.5", "--grid", "3"],
    ["kernels", "--kind", "schrodinger-global", "--t", "0.5", "--w", "0.3+0.1j", "--grid", "2"],
    ["partition", "--zone", "1", "--kappa", "2", "--t", "0.5", "1", "2"],
    ["partition", "--variant", "schrodinger", "--t", "0.8"],
    ["coulomb", "--mode", "matrix", "--a", "0", "--b", "1", "--m-max", "3"],
    ["coulomb", "--mode", "diag", "--m-max", "5"],
    ["coulomb", "--mode", "log", "--m-max", "5"],
    ["coulomb", "--mode", "bethe", "--m-max", "4"],
    ["coulomb", "--mode", "divergence", "--m-max", "1000", "--format", "json"],
    ["lamb", "--mode", "epsilon_p", "--p-max", "2", "--density", "exact_gamma"],
])
def test_subcommands_are_deterministic(argv):
    first = run(argv)
    second = run(argv)
    assert first[0] == 0
    assert first == second
    assert first[1]


def test_output_file(tmp_path):
    target = tmp_path / "spectrum.csv"
    code, text = run(["spectrum", "--p-max", "3", "--output", str(target)])
    assert code == 0 and text == ""
    assert target.read_text().splitlines()[0] == "zone,p,energy,multiplicity"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zeeman_zones", "verify-eigen", "--max-degree", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == "checked 10 eigen-relations, 0 failures\n"
