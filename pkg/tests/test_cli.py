import json
import math

import numpy as np
import pytest

from steerkit import __version__
from steerkit.cli import main


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_steer_json_document(capsys):
    code, out, _ = run(capsys, ["steer", "--family", "pure,a=0.7071", "--direction", "AtoB"])
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "steer"
    assert doc["version"] == __version__
    assert doc["input"]["family"] == "pure"
    assert doc["input"]["direction"] == "AtoB"
    assert doc["tolerances"]["singular"] == 1e-6
    (res,) = doc["results"]
    assert res["method"] == "analytic_xstate"
    assert res["s"] == pytest.approx(1.0, abs=1e-9)
    assert doc["optimizer"]["grid_per_angle"] == 18


def test_steer_direction_both_and_param_flags(capsys):
    code, out, _ = run(
        capsys,
        ["steer", "--family", "w_v_theta", "--V", "0.1", "--theta", "pi/4",
         "--direction", "both", "--method", "analytic"],
    )
    assert code == 0
    doc = json.loads(out)
    dirs = [r["direction"] for r in doc["results"]]
    assert dirs == ["AtoB", "BtoA"]
    assert doc["results"][0]["s"] == pytest.approx(0.64, abs=1e-12)


def test_steer_numeric_method_provenance(capsys):
    code, out, _ = run(
        capsys,
        ["steer", "--family", "bell_diagonal,c1=0.8,c2=-0.8,c3=0.8",
         "--method", "numeric", "--grid-per-angle", "12", "--top-k", "4"],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["results"][0]["method"] == "numeric"
    assert doc["results"][0]["s"] == pytest.approx(0.28, abs=1e-6)
    assert doc["optimizer"]["grid_per_angle"] == 12


def test_auto_dispatch_uses_numeric_off_the_certified_set(capsys):
    code, out, _ = run(
        capsys,
        ["steer", "--family", "w_eta_chi,eta=0.8,chi=0.5",
         "--grid-per-angle", "12", "--top-k", "4"],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["results"][0]["method"] == "numeric"
    assert doc["results"][0]["s"] == pytest.approx(1.0 / 3.0, abs=1e-6)


def test_chsh_command(capsys):
    code, out, _ = run(capsys, ["chsh", "--family", "bell_diagonal,c1=0.8,c2=-0.8,c3=0.8"])
    assert code == 0
    doc = json.loads(out)
    assert doc["n"] == pytest.approx(2.0 * math.sqrt(1.28), abs=1e-12)


def test_radius_command(capsys):
    code, out, err = run(
        capsys,
        ["radius", "--family", "w_eta_chi,eta=0.8,chi=0.5", "--direction", "AtoB",
         "--grid-per-angle", "12", "--top-k", "4"],
    )
    assert code == 0
    doc = json.loads(out)
    (res,) = doc["results"]
    assert res["radius"] == pytest.approx(math.sqrt(1.32), abs=1e-6)
    assert res["branch"] == "xy"
    assert res["point"] is None
    assert set(res["per_branch"]) == {"xy", "xz", "yz"}


def test_ellipsoid_command(capsys):
    code, out, _ = run(
        capsys, ["ellipsoid", "--family", "rho_x0,b3=-0.5,c3=0.2", "--direction", "both"]
    )
    assert code == 0
    doc = json.loads(out)
    a2b, b2a = doc["results"]
    assert a2b["center_z"] == pytest.approx(-0.8 / 1.3, abs=1e-12)
    assert b2a["center_z"] == pytest.approx(0.8 / 1.5, abs=1e-12)


def test_exit_code_2_on_bad_input(capsys):
    assert run(capsys, ["steer", "--family", "werner,V=0.5"])[0] == 2
    assert run(capsys, ["steer", "--family", "pure,a=2"])[0] == 2
    assert run(capsys, ["steer"])[0] == 2
    assert run(capsys, ["steer", "--family", "pure,a=0.5", "--V", "0.1"])[0] == 2
    assert run(capsys, ["sweep", "--family", "pure", "--a", "0.5"])[0] == 2
    assert run(capsys, ["sweep", "--family", "pure", "--grid", "a=0:1:0.5",
                        "--grid", "a=0:1:0.5"])[0] == 2
    assert run(capsys, ["sweep", "--family", "pure", "--a", "0.3",
                        "--grid", "a=0:1:0.5"])[0] == 2
    assert run(capsys, [])[0] == 2


def test_exit_code_2_analytic_needs_x_state(capsys, tmp_path):
    plus = np.array([1.0, 1.0]) / math.sqrt(2)
    rho = np.kron(np.outer(plus, plus), np.outer(plus, plus))
    path = tmp_path / "plus.json"
    path.write_text(json.dumps({"rho": [[float(e.real) for e in row] for row in rho]}))
    code, _, err = run(capsys, ["steer", "--state", str(path), "--method", "analytic"])
    assert code == 2
    assert "X-state" in err


def test_exit_code_3_on_state_file_trouble(capsys, tmp_path):
    assert run(capsys, ["steer", "--state", str(tmp_path / "missing.json")])[0] == 3
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, ["steer", "--state", str(bad)])[0] == 3
    unphys = tmp_path / "unphys.json"
    unphys.write_text(json.dumps({"rho": [[1.0, 0, 0, 0]] * 4}))
    assert run(capsys, ["steer", "--state", str(unphys)])[0] == 3


def test_exit_code_4_with_error_envelope(capsys):
    code, out, _ = run(capsys, ["steer", "--family", "pure,a=1", "--direction", "AtoB"])
    assert code == 4
    doc = json.loads(out)
    assert doc["error"]["code"] == "SteeredStateSingular"
    assert "message" in doc["error"]


def test_state_file_and_inline_family_agree(capsys, tmp_path):
    path = tmp_path / "fam.json"
    path.write_text(json.dumps({"family": {"name": "w_eta_chi", "params": {"eta": 0.8, "chi": 0.5}}}))
    code1, out1, _ = run(capsys, ["steer", "--state", str(path), "--method", "numeric",
                                  "--grid-per-angle", "12", "--top-k", "4"])
    code2, out2, _ = run(capsys, ["steer", "--family", "w_eta_chi,eta=0.8,chi=0.5",
                                  "--method", "numeric", "--grid-per-angle", "12", "--top-k", "4"])
    assert code1 == code2 == 0
    s1 = json.loads(out1)["results"][0]["s"]
    s2 = json.loads(out2)["results"][0]["s"]
    assert s1 == s2


def test_sweep_csv_shape_and_crlf(capsys):
    code, out, _ = run(
        capsys,
        ["sweep", "--family", "rho_x0,b3=-0.999", "--grid", "c3=0.2:0.8:0.2",
         "--direction", "AtoB", "--method", "analytic"],
    )
    assert code == 0
    assert out.endswith("\r\n")
    lines = out.split("\r\n")
    assert lines[0] == "c3,s_a2b"
    rows = [ln.split(",") for ln in lines[1:] if ln]
    assert len(rows) == 4
    assert float(rows[0][1]) == pytest.approx((2 * 0.2 - 1 + 0.999) / 1.999, abs=1e-9)
    # 12 significant digits in the formatting
    assert rows[1][1] == "0.399699849925"


def test_asym_runs_both_directions(capsys):
    code, out, _ = run(
        capsys,
        ["asym", "--family", "rho_x0,b3=-0.999", "--grid", "c3=0.2:0.6:0.2",
         "--method", "analytic"],
    )
    assert code == 0
    lines = out.split("\r\n")
    assert lines[0] == "c3,s_a2b,s_b2a"
    for ln in lines[1:]:
        if not ln:
            continue
        _, _, s_b2a = ln.split(",")
        assert float(s_b2a) == 0.0


def test_sweep_two_grids(capsys):
    code, out, _ = run(
        capsys,
        ["sweep", "--family", "w_v_theta", "--grid", "V=0.1:0.3:0.1",
         "--grid", "theta=pi/8:pi/4:pi/8", "--direction", "AtoB", "--method", "analytic"],
    )
    assert code == 0
    lines = [ln for ln in out.split("\r\n") if ln]
    assert lines[0] == "V,theta,s_a2b"
    assert len(lines) == 1 + 3 * 2
    first = lines[1].split(",")
    assert float(first[2]) == pytest.approx(0.64, abs=1e-12)


def test_sweep_nan_cells_on_singular_points(capsys):
    # the a = 0 and a = 1 endpoints are product states with pure marginals
    code, out, err = run(
        capsys,
        ["sweep", "--family", "pure", "--grid", "a=0:1:0.5",
         "--direction", "AtoB", "--method", "analytic"],
    )
    assert code == 0
    lines = [ln for ln in out.split("\r\n") if ln]
    cells = {ln.split(",")[0]: ln.split(",")[1] for ln in lines[1:]}
    assert cells["0"] == "nan"
    assert cells["1"] == "nan"
    assert float(cells["0.5"]) == pytest.approx(1.0, abs=1e-9)
    assert "skipped" in err and "SteeredStateSingular" in err


def test_byte_identical_repeat(capsys):
    argv = ["sweep", "--family", "w_eta_chi", "--grid", "eta=0:1:0.1",
            "--grid", "chi=0:1:0.1", "--method", "analytic"]
    code1, out1, _ = run(capsys, argv)
    code2, out2, _ = run(capsys, argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_threads_env_does_not_change_output(capsys, monkeypatch):
    argv = ["sweep", "--family", "w_eta_chi", "--grid", "eta=0:1:0.05",
            "--grid", "chi=0:1:0.05", "--method", "analytic"]
    monkeypatch.setenv("STEERKIT_THREADS", "1")
    _, serial, _ = run(capsys, argv)
    monkeypatch.setenv("STEERKIT_THREADS", "4")
    _, threaded, _ = run(capsys, argv)
    assert serial == threaded
    assert len([ln for ln in serial.split("\r\n") if ln]) == 1 + 21 * 21


def test_region_command(capsys):
    code, out, _ = run(capsys, ["region", "--samples", "40", "--seed", "3"])
    assert code == 0
    lines = [ln for ln in out.split("\r\n") if ln]
    assert lines[0] == "n,s,a3,b3,c1,c2,c3"
    assert len(lines) == 41
    for ln in lines[1:]:
        n, s = (float(x) for x in ln.split(",")[:2])
        if n <= 2.0:
            assert s <= n / 2.0 + 1e-9


def test_region_rejects_unknown_mix(capsys):
    assert run(capsys, ["region", "--samples", "10", "--mix", "bogus"])[0] == 2


def test_plot_files_written(capsys, tmp_path):
    line = tmp_path / "line.png"
    code, _, _ = run(
        capsys,
        ["asym", "--family", "rho_x0,b3=-0.9", "--grid", "c3=0:0.9:0.1",
         "--method", "analytic", "--plot", str(line)],
    )
    assert code == 0 and line.stat().st_size > 0
    plane = tmp_path / "plane.png"
    code, _, _ = run(
        capsys,
        ["sweep", "--family", "w_eta_chi", "--grid", "eta=0:1:0.2",
         "--grid", "chi=0:1:0.2", "--method", "analytic", "--plot", str(plane)],
    )
    assert code == 0 and plane.stat().st_size > 0
    regionfig = tmp_path / "region.png"
    code, _, _ = run(capsys, ["region", "--samples", "50", "--seed", "1",
                              "--plot", str(regionfig)])
    assert code == 0 and regionfig.stat().st_size > 0


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["steer", "--nope"])
    assert exc.value.code == 2
