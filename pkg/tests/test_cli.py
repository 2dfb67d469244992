import json
import math
import os

import pytest

from bogodamp.bogoliubov import omega_bg
from bogodamp.cli import CSV_HEADER, main
from bogodamp.damping import gamma_beliaev_quadrature, gamma_landau_quadrature
from bogodamp.params import make_params
from bogodamp.potential import GaussianPotential
from bogodamp.specfun import beliaev_I, landau_Gk
from conftest import concave_table

DATA = os.path.join(os.path.dirname(__file__), "data")


def run(capsys, *argv):
    rc = main(list(argv))
    return rc, capsys.readouterr().out


def write_table(path, model):
    with open(path, "w") as fh:
        for k, v in zip(model.grid, model.values):
            fh.write(f"{float(k)!r} {float(v)!r}\n")
    return str(path)


def test_rate_header_and_values(capsys):
    rc, out = run(capsys, "rate", "--k", "0.3", "--beta-nu", "10")
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 2
    cells = dict(zip(CSV_HEADER.split(","), lines[1].split(",")))
    params = make_params(nu=1.0, beta=10.0, vhat0=1.0)
    model = GaussianPotential(v=0.1, nu=1.0)
    assert float(cells["gamma_B"]) == pytest.approx(
        gamma_beliaev_quadrature(params, model, 0.3).value, rel=1e-12)
    assert float(cells["gamma_L"]) == pytest.approx(
        gamma_landau_quadrature(params, model, 0.3).value, rel=1e-12)
    assert float(cells["total"]) == pytest.approx(
        float(cells["gamma_B"]) + float(cells["gamma_L"]), rel=1e-15)
    assert float(cells["theta"]) == pytest.approx(
        10.0 * omega_bg(params, model, 0.3), rel=1e-12)
    assert cells["method"] == "energy_quadrature"


def test_sweep_ordering_and_method_normalization(capsys):
    # unsorted inputs come out sorted, methods follow the fixed order
    rc, out = run(capsys, "sweep", "--k", "0.3,0.1", "--beta-nu", "20,5",
                  "--methods", "asymptotic,quadrature", "--rates", "landau")
    assert rc == 0
    rows = [line.split(",") for line in out.strip().split("\n")[1:]]
    assert len(rows) == 8
    ks = [float(r[0]) for r in rows]
    bns = [float(r[2]) for r in rows]
    assert bns == sorted(bns)
    assert ks[0] == 0.1 and ks[2] == 0.3
    assert rows[0][4] == "energy_quadrature"
    assert rows[1][4] == "asymptotic"


def test_jobs_do_not_change_output(capsys):
    args = ("sweep", "--k", "0.1,0.2,0.4", "--beta-nu", "5,50",
            "--methods", "quadrature,asymptotic")
    rc1, out1 = run(capsys, *args, "--jobs", "1")
    rc4, out4 = run(capsys, *args, "--jobs", "4")
    assert rc1 == rc4 == 0
    assert out1 == out4


def test_json_round_trip(capsys):
    rc, out = run(capsys, "rate", "--k", "0.3", "--beta-nu", "10",
                  "--format", "json")
    assert rc == 0
    rows = json.loads(out)
    assert len(rows) == 1
    assert set(rows[0]) == set(CSV_HEADER.split(","))
    rc2, csv_out = run(capsys, "rate", "--k", "0.3", "--beta-nu", "10")
    cells = csv_out.strip().split("\n")[1].split(",")
    assert rows[0]["gamma_B"] == float(cells[5])


def test_raw_and_dimensionless_agree(capsys):
    # nu = 4: k/sqrt(nu) = 0.5 and beta nu = 10 mean k = 1, beta = 2.5
    rc1, out1 = run(capsys, "rate", "--nu", "4", "--k", "0.5",
                    "--beta-nu", "10")
    rc2, out2 = run(capsys, "rate", "--nu", "4", "--raw", "--k", "1.0",
                    "--beta-nu", "2.5")
    assert rc1 == rc2 == 0
    assert out1 == out2


def test_output_file(tmp_path, capsys):
    target = tmp_path / "rates.csv"
    rc, out = run(capsys, "rate", "--k", "0.3", "--beta-nu", "10",
                  "--output", str(target))
    assert rc == 0
    assert out == ""
    text = target.read_text()
    assert text.startswith(CSV_HEADER)


def test_validate_gaussian_ok(capsys):
    rc, out = run(capsys, "validate", "--v", "0.2")
    assert rc == 0
    assert "PASS" in out


def test_validate_concave_table_fails(tmp_path, capsys):
    path = write_table(tmp_path / "concave.dat", concave_table())
    rc, _ = run(capsys, "validate", "--potential", "tabulated",
                "--table", path)
    assert rc == 2


def test_validate_json(capsys):
    rc, out = run(capsys, "validate", "--v", "0.2", "--format", "json")
    assert rc == 0
    payload = json.loads(out)
    assert payload["passed"] is True
    assert any(e["id"] == "A7" for e in payload["checks"])


def test_sweep_validation_gate(capsys, tmp_path):
    # strong coupling fails the convexity check and blocks the sweep
    rc, out = run(capsys, "sweep", "--v", "0.75", "--k", "0.1",
                  "--beta-nu", "10")
    assert rc == 2
    assert out == ""
    rc2, out2 = run(capsys, "sweep", "--v", "0.75", "--k", "0.1",
                    "--beta-nu", "10", "--skip-validation")
    assert rc2 == 0
    assert out2.startswith(CSV_HEADER)


def test_specfun_values(capsys):
    rc, out = run(capsys, "specfun", "--theta", "5,0.5")
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == "theta,I,G2,G3,G4"
    first = lines[1].split(",")
    assert float(first[0]) == 0.5
    assert float(first[1]) == beliaev_I(0.5)
    assert float(first[4]) == landau_Gk(4, 0.5)


def test_specfun_log_grid(capsys):
    rc, out = run(capsys, "specfun", "--theta", "log:0.1:10:5")
    assert rc == 0
    thetas = [float(line.split(",")[0]) for line in out.strip().split("\n")[1:]]
    assert len(thetas) == 5
    assert thetas[0] == pytest.approx(0.1)
    assert thetas[2] == pytest.approx(1.0)
    assert thetas[4] == pytest.approx(10.0)


def test_specfun_bad_range(capsys):
    rc, _ = run(capsys, "specfun", "--theta", "log:0:1:5")
    assert rc == 1


def test_oracle_command(capsys):
    rc, out = run(capsys, "oracle", "--k", "0.3", "--beta-nu", "10",
                  "--samples", "50000", "--seed", "5")
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == "process,mc,mc_stderr,quadrature,quadrature_err,z"
    assert len(lines) == 3
    for line in lines[1:]:
        cells = line.split(",")
        assert cells[0] in ("beliaev", "landau")
        assert abs(float(cells[5])) < 5.0


def test_oracle_single_process(capsys):
    rc, out = run(capsys, "oracle", "--k", "0.3", "--beta-nu", "10",
                  "--samples", "50000", "--process", "landau")
    assert rc == 0
    lines = out.strip().split("\n")
    assert len(lines) == 2
    assert lines[1].startswith("landau,")


def test_error_rows_and_exit_3(tmp_path, capsys):
    # one grid point beyond the tabulated range fails, the rest still print
    from conftest import maxon_roton_table
    path = write_table(tmp_path / "dip.dat", maxon_roton_table())
    rc, out = run(capsys, "sweep", "--potential", "tabulated", "--table", path,
                  "--skip-validation", "--raw", "--k", "0.5,20",
                  "--beta-nu", "4", "--rates", "landau")
    assert rc == 3
    lines = out.strip().split("\n")
    assert len(lines) == 3
    good = lines[1].split(",")
    bad = lines[2].split(",")
    assert float(good[8]) > 0.0
    assert bad[5] == "error" and bad[9] == "error"


def test_config_file_merge_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep setup\nbeta-nu = 10\nk = 0.3\nv = 0.1\n")
    rc1, out1 = run(capsys, "rate", "--config", str(cfg))
    rc2, out2 = run(capsys, "rate", "--k", "0.3", "--beta-nu", "10",
                    "--v", "0.1")
    assert rc1 == rc2 == 0
    assert out1 == out2
    # a flag beats the config value for the same key
    rc3, out3 = run(capsys, "rate", "--config", str(cfg), "--k", "0.5")
    rc4, out4 = run(capsys, "rate", "--k", "0.5", "--beta-nu", "10",
                    "--v", "0.1")
    assert rc3 == rc4 == 0
    assert out3 == out4
    assert out3 != out1


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("k = 0.3\nbeta-nu = 10\nfroop = 1\n")
    rc, _ = run(capsys, "rate", "--config", str(cfg))
    assert rc == 1


def test_config_bad_number(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("k = 0.3\nbeta-nu = 10\nv = fast\n")
    rc, _ = run(capsys, "rate", "--config", str(cfg))
    assert rc == 1


def test_missing_grid_is_usage_error(capsys):
    rc, _ = run(capsys, "rate", "--k", "0.3")
    assert rc == 1


def test_unknown_flag_exits_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["rate", "--k", "0.3", "--beta-nu", "10", "--frobnicate"])
    assert exc.value.code == 1


def test_unknown_method_exits_1(capsys):
    rc, _ = run(capsys, "rate", "--k", "0.3", "--beta-nu", "10",
                "--methods", "fem")
    assert rc == 1


def test_mc_method_rows(capsys):
    args = ("rate", "--k", "0.3", "--beta-nu", "10", "--methods", "mc",
            "--samples", "50000", "--seed", "9")
    rc1, out1 = run(capsys, *args)
    rc2, out2 = run(capsys, *args)
    assert rc1 == rc2 == 0
    assert out1 == out2
    row = out1.strip().split("\n")[1].split(",")
    assert row[4] == "monte_carlo"
    assert float(row[6]) > 0.0


def test_closed_form_regime_method(capsys):
    rc, out = run(capsys, "rate", "--k", "0.01", "--beta-nu", "10",
                  "--methods", "closed_form_regime", "--rates", "beliaev")
    assert rc == 0
    row = out.strip().split("\n")[1].split(",")
    assert row[4] == "closed_form_regime"
    params = make_params(nu=1.0, beta=10.0, vhat0=1.0)
    model = GaussianPotential(v=0.1, nu=1.0)
    from bogodamp.damping import gamma_beliaev_asymptotic
    want = gamma_beliaev_asymptotic(params, model, 0.01, "high_T")
    assert float(row[5]) == pytest.approx(want, rel=1e-12)


def test_golden_sweep_bytes(tmp_path, capsys):
    rc, out = run(capsys, "sweep", "--v", "0.1", "--k", "1e-3,0.05",
                  "--beta-nu", "50,2000", "--methods", "quadrature,asymptotic",
                  "--rates", "beliaev,landau,total")
    assert rc == 0
    with open(os.path.join(DATA, "golden_sweep.csv"), "r", newline="") as fh:
        assert out == fh.read()


def test_tabulated_profile_from_data_dir(capsys):
    path = os.path.join(DATA, "dip_profile.dat")
    rc, out = run(capsys, "rate", "--potential", "tabulated", "--table", path,
                  "--skip-validation", "--k", "0.4", "--beta-nu", "4",
                  "--rates", "landau")
    assert rc == 0
    row = out.strip().split("\n")[1].split(",")
    assert float(row[8]) > 0.0
