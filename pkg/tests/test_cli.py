import json

import pytest

from cpspdc.cli import main


def run(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gvm_ppktp_type0(capsys):
    code, out, _ = run(capsys, "gvm", "PPKTP", "type0")
    assert code == 0
    assert "gvm_wavelength_nm = 2502.62" in out
    assert "poling_period_nm = 686.266" in out


def test_gvm_pprtp_type2a(capsys):
    code, out, _ = run(capsys, "gvm", "PPRTP", "type2a")
    assert code == 0
    assert "gvm_wavelength_nm = 1282.04" in out
    assert "poling_period_nm = 363.835" in out


def test_unknown_crystal_exits_2(capsys):
    code, _, err = run(capsys, "gvm", "NOPE", "type0")
    assert code == 2
    assert "unknown crystal" in err


def test_solver_failure_exits_3(capsys):
    code, _, err = run(capsys, "gvm", "PPKTP", "type0",
                       "--bracket", "2600", "3000")
    assert code == 3
    assert "sign change" in err


def test_io_failure_exits_4(capsys, tmp_path):
    code, _, err = run(capsys, "gvm", "PPKTP", "type0",
                       "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 4


def test_period_and_tilt(capsys):
    code, out, _ = run(capsys, "period", "PPKTP", "type0", "1550")
    assert code == 0
    assert "poling_period_nm = 419.637" in out
    code, out, _ = run(capsys, "tilt", "PPKTP", "type2a", "1550")
    assert code == 0
    assert "tilt_deg = 0.662464" in out


def test_jsa_summary_and_grid_too_small(capsys, tmp_path):
    code, out, _ = run(capsys, "jsa", "PPRTP", "type0", "1550", "5", "0.16")
    assert code == 0
    assert "purity = 0.921575" in out
    code, _, err = run(capsys, "jsa", "PPRTP", "type0", "1550", "5", "0.16",
                       "--n", "1")
    assert code == 2
    assert "grid size" in err


def test_jsa_ppcta_type2a(capsys):
    code, out, _ = run(capsys, "jsa", "PPCTA", "type2a", "1550", "10", "0.2")
    assert code == 0
    purity = float(out.split("purity = ")[1].split()[0])
    assert purity == pytest.approx(0.984, abs=0.005)


def test_jsa_hom_pipeline_and_manifest(capsys, tmp_path):
    jsa_path = tmp_path / "rtp.jsa"
    code, _, _ = run(capsys, "jsa", "PPRTP", "type0", "1550", "5", "0.16",
                     "--binary", "--out", str(jsa_path))
    assert code == 0
    manifest = json.loads((tmp_path / "rtp.jsa.manifest.json").read_text())
    assert manifest["parameters"]["crystal"] == "PPRTP"
    assert len(manifest["db_sha256"]) == 64
    assert manifest["command"][0] == "cpspdc"

    hom_path = tmp_path / "hom.csv"
    code, out, _ = run(capsys, "hom", str(jsa_path),
                       "--pair", "signal-signal", "--out", str(hom_path))
    assert code == 0
    vis = float(out.split("visibility = ")[1].split()[0])
    assert vis == pytest.approx(0.9204, abs=0.005)
    lines = hom_path.read_text().splitlines()
    assert lines[0].startswith("# visibility =")
    assert (tmp_path / "hom.csv.manifest.json").exists()


def test_hom_grid_mismatch(capsys, tmp_path):
    a = tmp_path / "a.jsa"
    b = tmp_path / "b.jsa"
    run(capsys, "jsa", "PPRTP", "type0", "1550", "5", "0.16", "--binary",
        "--out", str(a))
    run(capsys, "jsa", "PPRTP", "type0", "1550", "5", "0.16", "--binary",
        "--n", "100", "--out", str(b))
    code, _, err = run(capsys, "hom", str(a), str(b))
    assert code == 2
    assert "grid" in err


def test_reruns_are_byte_identical_except_timestamp(capsys, tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    for out in (out1, out2):
        code, _, _ = run(capsys, "jsa", "PPRTP", "type0", "1550", "5",
                         "0.16", "--out", str(out))
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    m1 = json.loads((tmp_path / "a.csv.manifest.json").read_text())
    m2 = json.loads((tmp_path / "b.csv.manifest.json").read_text())
    m1.pop("timestamp")
    m2.pop("timestamp")
    m1["command"][-1] = m2["command"][-1] = "out"
    assert m1 == m2


def test_sweep_command(capsys, tmp_path):
    spec = tmp_path / "spec.toml"
    spec.write_text('crystals = "PPKTP"\npm_type = "type2a"\n'
                    'variable = "lambda0"\n'
                    'start = 1215.0\nstop = 1235.0\nstep = 5.0\n'
                    'length_mm = 5.0\npump_width_nm = 0.2\n')
    out = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", str(spec), "--out", str(out))
    assert code == 0
    lines = [ln for ln in out.read_text().splitlines()
             if not ln.startswith("#")]
    # tilt column crosses zero inside the scanned band (GVM at 1225.19)
    tilts = [float(ln.split(",")[3]) for ln in lines[1:]]
    assert min(tilts) < 0 < max(tilts)
    assert f"# db_sha256 = " in out.read_text()


def test_sweep_empty_spec_is_validation_error(capsys, tmp_path):
    spec = tmp_path / "spec.toml"
    spec.write_text('crystals = []\npm_type = "type0"\n'
                    'variable = "lambda0"\nstart = 1500.0\n'
                    'stop = 1600.0\nstep = 50.0\nlength_mm = 5.0\n'
                    'pump_width_nm = 0.16\n')
    code, _, err = run(capsys, "sweep", str(spec), "--out",
                       str(tmp_path / "x.csv"))
    assert code == 2


def test_json_lines_format(capsys, tmp_path):
    out = tmp_path / "gvm.jsonl"
    code, _, _ = run(capsys, "gvm", "PPKTP", "type0", "--out", str(out),
                     "--format", "json-lines")
    assert code == 0
    rec = json.loads(out.read_text().splitlines()[0])
    assert rec["crystal"] == "PPKTP"
    assert rec["gvm_wavelength_nm"] == pytest.approx(2502.62, abs=0.5)


def test_optimize_command(capsys, tmp_path):
    code, out, _ = run(capsys, "optimize", "PPKTP", "type0", "1550",
                       "--l-min", "5", "--l-max", "5",
                       "--dl-min", "0.16", "--dl-max", "0.16",
                       "--n-grid", "1")
    assert code == 0
    assert "best_length_mm = 5" in out
    assert "best_purity = 0.9213" in out


def test_db_validate(capsys):
    code, out, _ = run(capsys, "db-validate")
    assert code == 0
    assert "5 crystals" in out
    assert "round-trip OK" in out
