import json

import pytest

from pseudofold.cli import main
from pseudofold.detection import T4, classify_all
from pseudofold.io import read_complex, write_complex

from conftest import corpus


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name in ("boundary", "chain2", "vblock", "eblock", "sharp1_1"):
        p = tmp_path / f"{name}.tet"
        write_complex(corpus()[name], p)
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


def test_generate_and_validate(capsys, tmp_path):
    out = tmp_path / "s.tet"
    code, stdout, _ = run(capsys, "generate", "--kind", "sharp1", "--n", "2", "-o", str(out))
    assert code == 0
    assert json.loads(stdout)["g2"] == 22
    code, stdout, _ = run(capsys, "validate", str(out))
    assert code == 0 and json.loads(stdout)["ok"]


def test_generate_surface(capsys, tmp_path):
    out = tmp_path / "rp2.json"
    code, stdout, _ = run(capsys, "generate", "--kind", "rp2", "-o", str(out))
    assert code == 0
    assert json.loads(stdout)["surface"]["name"] == "RP2"
    assert len(json.loads(out.read_text())["triangles"]) == 10


def test_generate_to_stdout(capsys):
    code, stdout, _ = run(capsys, "generate", "--kind", "boundary")
    assert code == 0
    assert len(stdout.splitlines()) == 5


def test_bad_inputs_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.tet"
    bad.write_text("0 1 2\n")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 2 and "error:" in err and ":1:" in err
    assert run(capsys, "generate", "--kind", "nope")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "validate", str(tmp_path / "missing.tet"))[0] == 2


def test_invalid_complex_exits_1(capsys, tmp_path):
    p = tmp_path / "open.tet"
    K = corpus()["boundary"]
    p.write_text("".join(" ".join(map(str, f)) + "\n" for f in K.sorted_facets()[:-1]))
    code, stdout, _ = run(capsys, "validate", str(p))
    assert code == 1 and not json.loads(stdout)["ok"]


def test_analyze(capsys, files):
    code, stdout, _ = run(capsys, "analyze", files["sharp1_1"])
    doc = json.loads(stdout)
    assert code == 0
    assert doc["g2"] == 16
    assert doc["singular_vertices"][0]["link"]["name"] == "T2"
    code, stdout, _ = run(capsys, "analyze", "--missing", files["chain2"])
    assert json.loads(stdout)[0]["type_tag"].startswith("T1")
    code, stdout, _ = run(capsys, "analyze", "--weights", files["eblock"])
    assert json.loads(stdout)["b_star_identity"]["ok"]
    assert run(capsys, "analyze", "--weights", files["boundary"])[0] == 2


def test_apply_moves_and_surgery(capsys, files):
    d = files["dir"]
    out = d / "cr.tet"
    code, stdout, _ = run(capsys, "apply", "--move", "retriangulate", "--args", "0,1",
                          files["boundary"], "-o", str(out))
    assert code == 0 and json.loads(stdout)["kind"] == "CentralRetriangulation"
    code, stdout, _ = run(capsys, "apply", "--move", "contract", "--args", "0,5,0", str(out))
    assert code == 0 and json.loads(stdout)["g2_delta"] == 0
    assert run(capsys, "apply", "--move", "contract", "--args", "0,1", files["boundary"])[0] == 2

    p, q = d / "p.tet", d / "q.tet"
    code, stdout, _ = run(capsys, "apply", "--move", "split", "--args", "1,2,3,4",
                          files["chain2"], "-o", str(p), "--with", str(q))
    assert code == 0
    psi = json.loads(stdout)["psi"]
    summed = d / "sum.tet"
    code, stdout, _ = run(capsys, "apply", "--move", "sum", "--psi", psi, str(p),
                          "--with", str(q), "-o", str(summed))
    assert code == 0 and json.loads(stdout)["g2_after"] == 0


def test_apply_unfold_and_fold(capsys, files):
    d = files["dir"]
    K = corpus()["vblock"]
    r = next(r for r in classify_all(K) if r.type_tag == T4)
    out = d / "unfolded.tet"
    labels = ",".join(map(str, (*r.tetra, r.apexes[0])))
    code, stdout, _ = run(capsys, "apply", "--move", "vunfold", "--args", labels,
                          files["vblock"], "-o", str(out))
    assert code == 0
    rec = json.loads(stdout)
    assert rec["g2_after"] == 0
    back = d / "back.tet"
    code, stdout, _ = run(capsys, "apply", "--move", "vfold", "--psi", rec["psi"], str(out), "-o", str(back))
    assert code == 0
    assert read_complex(back) == K


def test_reduce_replay_verify(capsys, files):
    d = files["dir"]
    cert = d / "cert.json"
    code, stdout, _ = run(capsys, "reduce", files["eblock"], "-o", str(cert))
    assert code == 0 and json.loads(stdout)["reducible"]
    rebuilt = d / "rebuilt.tet"
    assert run(capsys, "replay", str(cert), "-o", str(rebuilt))[0] == 0
    assert read_complex(rebuilt) == corpus()["eblock"]
    code, stdout, _ = run(capsys, "verify", files["eblock"], str(cert))
    assert code == 0 and json.loads(stdout)["ok"]
    assert run(capsys, "verify", files["vblock"], str(cert))[0] == 1
    code, stdout, _ = run(capsys, "reduce", "--strict", files["sharp1_1"])
    assert code == 1 and not json.loads(stdout)["reducible"]


def test_rigidity_and_iso(capsys, files):
    code, stdout, _ = run(capsys, "rigidity", "--seeds", "1,2", files["vblock"])
    assert code == 0 and json.loads(stdout)["dims"] == {"1": 6, "2": 6}
    code, stdout, _ = run(capsys, "iso", files["vblock"], files["vblock"])
    assert code == 0 and json.loads(stdout)["isomorphic"]
    assert run(capsys, "iso", files["vblock"], files["eblock"])[0] == 1
    assert run(capsys, "rigidity", "--seeds", "", files["vblock"])[0] == 2
