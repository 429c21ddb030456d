import json
import os
import subprocess
import sys

import pytest

import lyd
from lyd.cli import main

DATA = os.path.join(os.path.dirname(lyd.__file__), "data")


def path(name):
    return os.path.join(DATA, name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_example(capsys):
    code, out, _ = run(capsys, "check", path("3dim.lya"))
    assert code == 0
    assert "LY6: ok" in out


def test_check_failing_algebra(capsys, tmp_path):
    f = tmp_path / "sym.lya"
    f.write_text('{"dim": 2, "binary": [[0, 1, 0, "1"], [1, 0, 0, "1"]]}')
    code, out, _ = run(capsys, "check", str(f), "--json")
    assert code == 1
    rep = json.loads(out)
    assert rep["verdict"] == "fail" and rep["axioms"]["LY1"] is False


def test_parse_error_exit_code(capsys, tmp_path):
    f = tmp_path / "bad.lya"
    f.write_text('{"dim": 3, "binary": [[0, 5, 0, "1"]]}')
    code, _, err = run(capsys, "check", str(f))
    assert code == 2
    assert "line 1" in err and "out of range" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "check", "/nonexistent.lya")
    assert code == 2


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as err:
        main(["cohomology"])
    assert err.value.code == 2


def test_cohomology_json(capsys):
    code, out, _ = run(capsys, "cohomology", path("3dim.lya"), "--which", "23", "--json")
    assert code == 0
    rep = json.loads(out)
    assert (rep["z_dim"], rep["b_dim"], rep["h_dim"]) == (14, 5, 9)
    assert list(rep)[:4] == ["command", "inputs", "verdict", "which"]


def test_cohomology_representatives(capsys):
    code, out, _ = run(capsys, "cohomology", "catalog:leibniz-2", "--representatives", "--json")
    rep = json.loads(out)
    assert len(rep["representatives"]) == rep["h_dim"] == 2
    assert set(rep["representatives"][0]) == {"F", "G"}


def test_cohomology_other_groups(capsys):
    code, out, _ = run(capsys, "cohomology", "catalog:meson-2", "--which", "3445", "--json")
    assert json.loads(out)["h_dim"] == 12
    code, out, _ = run(capsys, "cohomology", "catalog:meson-2", "--which", "p=2", "--json")
    assert json.loads(out)["h_dim"] == 0
    code, _, err = run(capsys, "cohomology", "catalog:meson-4", "--which", "3445")
    assert code == 2 and "budget" in err.lower()


def test_free_dims_text(capsys):
    code, out, _ = run(capsys, "free", "dims", "--gens", "1", "--max-weight", "4")
    assert code == 0
    assert out == "1 0 0 0\n"


def test_free_basis(capsys):
    code, out, _ = run(capsys, "free", "basis", "--gens", "2", "--weight", "2")
    assert out.strip() == "(b . a)"


def test_rep_check(capsys):
    assert run(capsys, "rep-check", path("example-3dim-adjoint.rep"))[0] == 0
    code, out, _ = run(capsys, "rep-check", path("example-3dim-swapped.rep"), "--json")
    assert code == 1
    assert json.loads(out)["axioms"]["R1"] is False


def test_deform_commands(capsys, tmp_path):
    assert run(capsys, "deform", "check", path("meson-2-order3.def"))[0] == 0
    code, out, _ = run(capsys, "deform", "infinitesimal", path("meson-2-order3.def"), "--json")
    assert json.loads(out)["n"] == 1
    assert run(capsys, "deform", "obstruct", path("meson-2-order2.def"))[0] == 0
    code, out, _ = run(capsys, "deform", "extend", path("meson-2-order2.def"), "--json")
    assert code == 0 and json.loads(out)["order"] == 3
    code, out, _ = run(capsys, "deform", "extend", path("heisenberg-obstructed.def"), "--json")
    assert code == 1 and json.loads(out)["obstructed_at"] == 1
    code, out, _ = run(capsys, "deform", "normalize", path("so3-lie-trivial.def"), "--json")
    assert json.loads(out)["trivial"] is True
    code, _, _ = run(capsys, "deform", "equivalent", path("meson-2-order3.def"), path("meson-2-order3.def"))
    assert code == 0
    code, out, _ = run(capsys, "deform", "extend-alg", path("meson-2-order3.def"), "--json")
    assert code in (0, 1) and "axioms_pass" in json.loads(out)


def test_deform_extend_with_witness(capsys, tmp_path):
    code, out, _ = run(capsys, "deform", "extend", path("meson-2-order2.def"), "--witness",
                       path("meson-2-order3.def"), "--json")
    assert code == 0
    rep = json.loads(out)
    full = json.loads(open(path("meson-2-order3.def")).read())
    assert rep["deformation"]["terms"][2] == full["terms"][2]


def test_integrate_random_is_seeded(capsys):
    a = run(capsys, "deform", "integrate", "catalog:meson-2", "--seed", "4", "--order", "2", "--json")[1]
    b = run(capsys, "deform", "integrate", "catalog:meson-2", "--seed", "4", "--order", "2", "--json")[1]
    assert a == b
    assert json.loads(a)["seed"] == 4


def test_timing_only_on_request(capsys):
    out = run(capsys, "check", "catalog:meson-2", "--json")[1]
    assert "wall_time_s" not in json.loads(out)
    out = run(capsys, "check", "catalog:meson-2", "--json", "--timing")[1]
    assert "wall_time_s" in json.loads(out)


def test_catalog_export(capsys, tmp_path):
    code, out, _ = run(capsys, "catalog", "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "meson-3.lya").read_text() == open(path("meson-3.lya")).read()
    assert "example-3dim" in out
    assert (tmp_path / "meson-2-order3.def").exists()
    assert (tmp_path / "example-3dim-swapped.rep").exists()


def test_console_script():
    exe = os.path.join(os.path.dirname(sys.executable), "lyd")
    cmd = [exe] if os.path.exists(exe) else [sys.executable, "-m", "lyd"]
    res = subprocess.run(cmd + ["free", "dims", "--gens", "1", "--max-weight", "4"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "1 0 0 0\n"
