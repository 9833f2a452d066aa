import json

import pytest

from pseudofold.generators import boundary_4simplex, chain_sum, random_relabel
from pseudofold.reduction import (
    Certificate,
    NonReducible,
    OutOfHypothesis,
    ReplayError,
    decompose,
    greedy_descend,
    replay,
    singularity_profile,
    verify_certificate,
)

from conftest import corpus


def test_boundary_is_a_leaf():
    cert = decompose(boundary_4simplex())
    assert cert.root.op == "leaf"
    assert replay(cert) == boundary_4simplex()


def test_chain_splits_into_leaves():
    K = chain_sum(3)
    cert = decompose(K, strict=True)
    assert cert.counts()["leaf"] == 3
    assert cert.counts()["sum"] == 2
    assert replay(cert) == K


@pytest.mark.parametrize("name,folds", [
    ("vblock", (1, 0)), ("kblock", (1, 0)), ("eblock", (0, 1)), ("vblock2", (2, 0)),
    ("susp_rp2", (0, 1)), ("eblock_inflated1", (0, 1)), ("vblock_inflated1", (1, 0)),
])
def test_in_hypothesis_complexes_decompose(name, folds):
    K = corpus()[name]
    cert = decompose(K, strict=True)
    res = verify_certificate(K, cert)
    assert res.ok, res.problems
    assert (res.vertex_folds, res.edge_folds) == folds
    # certificates replay to the exact labels of the input
    assert replay(cert) == K


def test_certificate_json_round_trip():
    K = corpus()["eblock"]
    cert = decompose(K)
    text = cert.dumps()
    again = Certificate.loads(text)
    assert again.to_json() == cert.to_json()
    assert json.loads(text) == cert.to_json()


def test_tampered_certificate_fails_replay():
    cert = decompose(corpus()["vblock"])
    doc = cert.to_json()
    doc["root"]["g2_after"] += 1
    with pytest.raises(ReplayError):
        replay(Certificate.from_json(doc))


def test_certificate_for_another_complex_is_rejected():
    cert = decompose(corpus()["vblock"])
    res = verify_certificate(corpus()["kblock"], cert)
    assert not res.ok
    assert any("isomorphic" in p for p in res.problems)


def test_relabelled_input_still_verifies():
    K = random_relabel(corpus()["eblock"], 3)
    assert verify_certificate(K, decompose(K)).ok


def test_profiles():
    c = corpus()
    assert singularity_profile(c["chain5"]).kind == "manifold"
    p = singularity_profile(c["sharp1_2"])
    assert (p.kind, p.handles, p.bound) == ("one", 2, 21)
    p = singularity_profile(c["sharp2_2"])
    assert (p.kind, p.handles, p.bound) == ("two", 2, 18)
    assert singularity_profile(c["susp_torus"]).kind == "other"


def test_strict_mode_refuses_beyond_the_bound():
    for name in ("sharp1_1", "sharp2_1", "susp_torus"):
        with pytest.raises(OutOfHypothesis):
            decompose(corpus()[name], strict=True)


def test_sharp_examples_need_a_handle():
    with pytest.raises(NonReducible) as exc:
        decompose(corpus()["sharp1_1"])
    assert "handle" in str(exc.value)
    assert exc.value.complex is not None


def test_greedy_descend_reaches_a_fixed_point():
    K = corpus()["chain3_inflated1"]
    fixed, records, chain = greedy_descend(K)
    assert fixed.g2() == 0
    assert len(records) == len(chain) <= K.g2()
    assert replay(decompose(fixed)) == fixed
