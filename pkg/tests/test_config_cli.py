import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from gravphase.cli import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, main
from gravphase.config import ScenarioConfig, load_config, parse_config, scenario_hash
from gravphase.errors import ConfigError
from gravphase.output import dumps_json, write_csv

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

BASE = """
[species]
name = "cesium-133"
mass = 2.207e-25

[environment]
g = 9.8

[sequence]
kappa = 1.4748e7
T = 0.1
"""


def write(tmp_path, text, name="cfg.toml"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_missing_pulse_separation(tmp_path, capsys):
    path = write(tmp_path, BASE.replace("T = 0.1\n", ""))
    assert main(["verify", "--config", str(path), "--out", str(tmp_path / "o")]) == EXIT_CONFIG
    assert "sequence.T" in capsys.readouterr().err


@pytest.mark.parametrize("text, field", [
    (BASE + "\n[run]\nn_steps = 1\n", "run.n_steps"),
    (BASE.replace('name = "cesium-133"\nmass = 2.207e-25', 'name = "unobtainium"'), "species.name"),
    (BASE.replace("g = 9.8", "g = \"heavy\""), "environment.g"),
    (BASE + "\n[bogus]\nx = 1\n", "config.bogus"),
    (BASE.replace("T = 0.1", "T = -0.1"), "sequence.T"),
])
def test_config_errors_name_field(tmp_path, capsys, text, field):
    path = write(tmp_path, text)
    assert main(["phase", "--config", str(path), "--out", str(tmp_path / "o")]) == EXIT_CONFIG
    assert field in capsys.readouterr().err


def test_unreadable_and_malformed(tmp_path):
    assert main(["verify", "--config", str(tmp_path / "nope.toml")]) == EXIT_CONFIG
    path = write(tmp_path, "[species\n")
    assert main(["verify", "--config", str(path), "--out", str(tmp_path / "o")]) == EXIT_CONFIG


def test_negative_seed_is_config_error(tmp_path):
    path = write(tmp_path, BASE)
    assert main(["verify", "--config", str(path), "--out", str(tmp_path), "--seed", "-1"]) == EXIT_CONFIG


def test_round_trip_echo():
    cfg = load_config(CONFIGS / "invert.toml")
    again = ScenarioConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
    assert again == cfg
    assert scenario_hash(again) == scenario_hash(cfg)
    assert scenario_hash(cfg.with_seed(99)) != scenario_hash(cfg)


def test_kappa_from_wavelength():
    cfg = parse_config(BASE.replace("kappa = 1.4748e7", "optical_wavelength = 852e-9"))
    assert cfg.sequence.kappa == pytest.approx(2 * 2 * 3.141592653589793 / 852e-9, rel=1e-15)


def test_verify_default_and_failure(tmp_path):
    assert main(["verify", "--config", str(CONFIGS / "verify.toml"), "--out", str(tmp_path)]) == EXIT_OK
    report = json.loads((tmp_path / "verify.json").read_text(encoding="utf-8"))
    assert report["result"]["passed"] is True
    tight = write(tmp_path, BASE + "\n[run]\nn_steps = 2\ntolerance = 1e-16\n")
    assert main(["verify", "--config", str(tight), "--out", str(tmp_path / "t")]) == EXIT_FAILURE


def test_verify_byte_identical(tmp_path, monkeypatch):
    monkeypatch.delenv("SOURCE_DATE_EPOCH", raising=False)
    for d in ("a", "b"):
        assert main(["verify", "--config", str(CONFIGS / "verify.toml"), "--out", str(tmp_path / d)]) == 0
    assert (tmp_path / "a" / "verify.json").read_bytes() == (tmp_path / "b" / "verify.json").read_bytes()


def test_seed_flag_changes_monte_carlo(tmp_path):
    cfg = CONFIGS / "invert.toml"
    for d, seed in (("a", "1"), ("b", "1"), ("c", "2")):
        assert main(["invert", "--config", str(cfg), "--out", str(tmp_path / d), "--seed", seed]) == 0
    a, b, c = (json.loads((tmp_path / d / "invert.json").read_text()) for d in "abc")
    assert a["result"] == b["result"]
    assert a["result"]["monte_carlo"] != c["result"]["monte_carlo"]
    assert a["scenario"]["run"]["seed"] == 1


def test_clock_compare_table(tmp_path):
    assert main(["clock-compare", "--config", str(CONFIGS / "clock_compare.toml"),
                 "--out", str(tmp_path)]) == EXIT_OK
    raw = (tmp_path / "clock_compare.csv").read_bytes()
    assert raw.count(b"\r\n") == 4
    rows = json.loads((tmp_path / "clock_compare.json").read_text())["result"]["rows"]
    assert rows[0]["time_dilation"] == pytest.approx(1.0915097049885997e-16, rel=1e-12)


@pytest.mark.parametrize("command", ["phase", "fringes", "scan", "invert", "sweep-eta", "sensitivity"])
def test_shipped_configs_run(tmp_path, command):
    cfg = CONFIGS / f"{command.replace('-', '_')}.toml"
    assert main([command, "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_OK
    record = json.loads((tmp_path / f"{command.replace('-', '_')}.json").read_text())
    assert record["command"] == command
    assert len(record["scenario_hash"]) == 64


def test_csv_quoting(tmp_path):
    path = write_csv(tmp_path / "t.csv", ["a", "b"], [[1.5, 'say "hi", then go']])
    assert path.read_bytes() == b'a,b\r\n1.5,"say ""hi"", then go"\r\n'


def test_json_sorted_and_finite():
    text = dumps_json({"b": float("nan"), "a": 1.0})
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text)["b"] is None


def test_console_script(tmp_path):
    exe = shutil.which("gravphase")
    cmd = [exe] if exe else [sys.executable, "-m", "gravphase.cli"]
    bad = write(tmp_path, BASE.replace("T = 0.1\n", ""))
    proc = subprocess.run(cmd + ["phase", "--config", str(bad), "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_CONFIG
    assert "sequence.T" in proc.stderr


def test_custom_species_needs_mass():
    cfg = parse_config(BASE.replace('name = "cesium-133"', 'name = "unobtainium"'))
    assert cfg.species.build().mass == 2.207e-25


def test_section_type_errors():
    with pytest.raises(ConfigError) as err:
        parse_config(BASE + "\n[clocks]\npositions = \"up\"\n")
    assert err.value.field == "clocks.positions"
