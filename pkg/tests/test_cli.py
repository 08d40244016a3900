import json
import subprocess
import sys

import pytest

from simplicial_holonomy import fixtures
from simplicial_holonomy.cli import main, run


@pytest.fixture(scope="module")
def fx(tmp_path_factory):
    d = tmp_path_factory.mktemp("fixtures")
    for name in fixtures.NAMES:
        fixtures.write_fixture(name, d)
    return d


def report(capsys, argv):
    code = main(argv)
    out = json.loads(capsys.readouterr().out)
    assert out["exit_code"] == code
    return code, out


def test_homology_sphere2(fx, capsys):
    code, out = report(capsys, ["homology", "--input", str(fx / "sphere2.json"), "--max-dim", "2"])
    assert code == 0 and out["result"]["betti"] == [1, 0, 1]


def test_homology_sphere3_and_torus(fx, capsys):
    code, out = report(capsys, ["homology", "--input", str(fx / "sphere3.json"), "--max-dim", "3"])
    assert out["result"]["betti"] == [1, 0, 0, 1]
    code, out = report(capsys, ["homology", "--input", str(fx / "torus7.json"), "--max-dim", "2"])
    assert code == 0 and out["result"]["betti"] == [1, 2, 1]


def test_subdivide_selftest(capsys):
    code, out = report(capsys, ["subdivide", "--selftest"])
    assert code == 0
    assert sum(c["pass"] for c in out["checks"] if c["name"] == "dS=Sd") == 200


def test_subdivide_single_chain(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"degree": 1, "simplices": [{"points": [[0], [1]], "coeff": 1}]}))
    code, out = report(capsys, ["subdivide", "--input", str(p), "--refine", "2"])
    assert code == 0 and out["result"]["terms"] == 4


def test_loopgroup_kan(fx, capsys):
    code, out = report(capsys, ["loopgroup", "--input", str(fx / "sphere2.json"), "--basepoint", "0", "--depth", "2", "--check-kan"])
    assert code == 0
    assert out["result"]["kan"][1]["pi_i(A)"] == {"betti": 1, "torsion": []}


def test_wbar(capsys):
    code, out = report(capsys, ["wbar", "--group", "zmod:2", "--depth", "4", "--homology"])
    assert code == 0 and out["result"]["homology_wbar"] == ["Z", "Z/2", "0", "Z/2"]


def test_integrate(fx, capsys):
    argv = ["integrate", "--form", str(fx / "x_area_form.json"), "--triangulation", str(fx / "unit_triangle.json"), "--cochain", "exact", "--refine", "2"]
    code, out = report(capsys, argv)
    assert code == 0 and out["result"]["value"] == "1/6"


def test_deligne_commands(fx, capsys):
    code, out = report(capsys, ["deligne", "verify", "--degree", "1", "--input", str(fx / "monopole_k1.json")])
    assert code == 0
    code, out = report(capsys, ["deligne", "chern", "--input", str(fx / "monopole_k-2.json"), "--loop", str(fx / "equator_loop.json")])
    assert code == 0 and out["result"]["chern"] == -2
    code, out = report(capsys, ["deligne", "holonomy", "--input", str(fx / "monopole_k1.json"), "--path", str(fx / "equator_path.json")])
    assert code == 0 and abs(out["result"]["re"] + 1) < 1e-9


def test_failed_check_exits_one(fx, tmp_path, capsys):
    data = json.loads((fx / "monopole_k1.json").read_text())
    # swap the transition function for the charge-2 one
    data["slots"][0]["entries"][0]["value"] = fixtures.fixture("monopole_k2")["slots"][0]["entries"][0]["value"]
    p = tmp_path / "broken.json"
    p.write_text(json.dumps(data))
    code, out = report(capsys, ["deligne", "verify", "--degree", "1", "--input", str(p)])
    assert code == 1 and any(c["status"] == "fail" and c["witness"] for c in out["checks"])


def test_malformed_json_exits_two(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"vertices": [1, 2,')
    code, out = report(capsys, ["homology", "--input", str(p), "--max-dim", "1"])
    assert code == 2 and "line 1" in out["error"]
    code, out = report(capsys, ["homology", "--input", str(tmp_path / "missing.json")])
    assert code == 2
    p.write_text('{"vertices": ["a"], "simplices": [["a", "b"]]}')
    code, out = report(capsys, ["homology", "--input", str(p)])
    assert code == 2 and "unknown vertices" in out["error"]


def test_unknown_group_and_fixture(capsys):
    code, _ = report(capsys, ["wbar", "--group", "sl2"])
    assert code == 2
    code, _ = report(capsys, ["fixtures", "klein_bottle"])
    assert code == 2


def test_fixtures_command(tmp_path, capsys):
    code, out = report(capsys, ["fixtures", "torus7", "--out", str(tmp_path)])
    assert code == 0 and (tmp_path / "torus7.json").exists()


def test_fixtures_creates_missing_directory(tmp_path, capsys):
    target = tmp_path / "a" / "b"
    code, _ = report(capsys, ["fixtures", "all", "--out", str(target)])
    assert code == 0
    assert sorted(p.stem for p in target.iterdir()) == sorted(fixtures.NAMES)


def test_deterministic_reports(fx):
    argv = ["deligne", "verify", "--degree", "1", "--input", str(fx / "monopole_k2.json"), "--seed", "7"]
    a = json.dumps(run(argv).to_json(), sort_keys=True)
    b = json.dumps(run(argv).to_json(), sort_keys=True)
    assert a == b


def test_module_entry_point(fx):
    proc = subprocess.run([sys.executable, "-m", "simplicial_holonomy", "homology", "--input", str(fx / "sphere2.json")], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["betti"] == [1, 0, 1]
