import random

import pytest
from hypothesis import given, settings, strategies as st

from pseudofold.complex import is_isomorphic, validate_normal
from pseudofold.generators import boundary_4simplex, chain_sum, inflate
from pseudofold.moves import (
    MoveError,
    MoveRecord,
    apply_cli_move,
    apply_record,
    bistellar_1_move,
    bistellar_2_move,
    central_retriangulation,
    edge_contraction,
    edge_expansion,
    find_g2_reducing_move,
    inverse_record,
    link_condition,
    op_C,
    op_C_prime,
    op_D,
)

from conftest import corpus


def undo(K, out, rec):
    for inv in inverse_record(K, rec):
        out, _ = apply_record(out, inv)
    return out


def test_retriangulation_and_contraction_of_boundary():
    K = boundary_4simplex()
    L, rec = central_retriangulation(K, 0, 1)
    assert L.f_vector().counts() == (6, 14, 16, 8)
    assert rec.g2_delta == 0 and rec.params["center"] == 5
    back, crec = edge_contraction(L, 0, 5, 0)
    assert back == K
    assert crec.g2_delta == 0


def test_boundary_has_no_reducing_move():
    assert find_g2_reducing_move(boundary_4simplex()) is None
    assert find_g2_reducing_move(chain_sum(4)) is None


def test_flip_then_search_finds_the_reverse_flip():
    K = chain_sum(2)
    L, rec = bistellar_1_move(K, 1, 2, 3)  # apexes 0 and 5 are not yet joined
    assert L.g2() == 1
    found = find_g2_reducing_move(L)
    assert found is not None
    frec, out = found
    assert frec.kind == "Bistellar2"
    assert out.g2() == 0
    assert is_isomorphic(out, K) is not None


def test_link_condition_on_boundary_fails():
    # contracting any edge of the boundary of a 4-simplex would leave 4 vertices
    assert not link_condition(boundary_4simplex(), 0, 1)
    with pytest.raises(MoveError):
        edge_contraction(boundary_4simplex(), 0, 1)


def test_preconditions():
    K = boundary_4simplex()
    with pytest.raises(MoveError):
        bistellar_2_move(K, 0, 1)  # the edge has degree 3 but the triangle 234 is present
    with pytest.raises(MoveError):
        bistellar_1_move(K, 0, 1, 2)  # the two apexes are already joined
    with pytest.raises(MoveError):
        edge_expansion(K, 0, [1, 2, 9])
    with pytest.raises(MoveError):
        apply_cli_move(K, "bistellar1", [0, 1])


def test_expansion_with_explicit_labels():
    K = boundary_4simplex()
    L, rec = edge_expansion(K, 0, [1, 2, 3], u=0, v=7)
    assert rec.g2_delta == 0
    assert 7 in L.vertices and L.edge_degree(0, 7) == 3
    L2, rec2 = edge_expansion(L, 0, [1, 2, 7, 3])
    assert rec2.g2_delta == 1
    assert undo(L, L2, rec2) == L


@pytest.mark.parametrize("name", ["chain3_inflated1", "vblock_inflated2", "eblock_inflated1",
                                  "kblock_inflated2", "susp_torus"])
def test_found_moves_lower_g2_and_invert(name):
    K = corpus()[name]
    rec, out = find_g2_reducing_move(K)
    assert out.g2() - K.g2() == rec.g2_delta < 0
    assert undo(K, out, rec) == K


@pytest.mark.parametrize("mode", ["A", "B", "C", "D"])
def test_each_mode_finds_something_on_an_inflated_sphere(mode):
    K = corpus()["chain3_inflated1"]
    found = find_g2_reducing_move(K, mode)
    assert found is not None
    rec, out = found
    assert out.g2() < K.g2()
    assert undo(K, out, rec) == K


def test_op_c_round_trip():
    K = corpus()["chain3_inflated1"]
    out, rec = op_C(K, 1, 0, 3, 5)
    assert rec.g2_delta == -1
    assert (0, 3, 5) in out.triangles
    back, brec = op_C_prime(out, rec.params["x1"], rec.params["x2"], 1)
    assert brec.g2_delta == 1
    assert back == K


def test_op_d_records_its_steps():
    K = corpus()["susp_torus"]
    out, rec = op_D(K, 0, 1, 0, 7, 9, 7)
    assert [s.kind for s in rec.steps] == ["CentralRetriangulation", "EdgeContraction"]
    assert out.g2() == K.g2() + rec.g2_delta
    assert undo(K, out, rec) == K
    assert MoveRecord.from_json(rec.to_json()) == rec


def test_unknown_mode():
    with pytest.raises(ValueError):
        find_g2_reducing_move(boundary_4simplex(), "Z")


# -- property tests -------------------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000), steps=st.integers(1, 6), k=st.integers(1, 4))
def test_random_moves_have_exact_deltas(seed, steps, k):
    rng = random.Random(seed)
    K = chain_sum(k)
    for _ in range(steps):
        if rng.random() < 0.5:
            tri = rng.choice(sorted(K.triangles))
            try:
                out, rec = bistellar_1_move(K, *tri)
            except MoveError:
                continue
            assert out.g2() == K.g2() + 1
        else:
            u, v = rng.choice(sorted(K.edges))
            n = K.edge_degree(u, v)
            out, rec = central_retriangulation(K, u, v)
            # one new vertex and n + 1 new edges, one edge lost
            assert out.g2() == K.g2() + n - 3
            assert out.edge_degree(u, rec.params["center"]) == n
        assert validate_normal(out).ok
        assert undo(K, out, rec) == K
        K = out


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_contraction_inverse_restores_labels(seed):
    K = inflate(chain_sum(2), 4, seed)
    rng = random.Random(seed)
    edges = [e for e in sorted(K.edges) if link_condition(K, *e)]
    if not edges:
        return
    u, v = rng.choice(edges)
    try:
        out, rec = edge_contraction(K, u, v)
    except MoveError:
        return
    assert rec.g2_delta == -(K.edge_degree(u, v) - 3)
    assert undo(K, out, rec) == K
