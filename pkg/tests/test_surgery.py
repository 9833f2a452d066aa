import pytest

from pseudofold.complex import classify_surface, is_isomorphic, singular_vertices, validate_normal
from pseudofold.detection import missing_tetrahedra
from pseudofold.generators import boundary_4simplex, chain_sum, handle_example
from pseudofold.surgery import (
    EDGE_FOLD,
    HANDLE,
    SUM,
    VERTEX_FOLD,
    FacetBijection,
    HandleWitness,
    SurgeryError,
    check_admissible,
    connected_sum,
    edge_folding,
    edge_unfolding,
    handle_addition,
    split_connected_sum,
    vertex_folding,
    vertex_unfolding,
)

from conftest import corpus
import instances


def test_bijection_parse_and_text():
    psi = FacetBijection.parse("0:0,1:7,2:8,3:9")
    assert psi.source_facet == (0, 1, 2, 3)
    assert psi.target_facet == (0, 7, 8, 9)
    assert psi.fixed_set == {0}
    assert FacetBijection.parse(psi.to_text()) == psi
    for bad in ("0:1,1:2,2:3", "0:1,0:2,1:3,2:4", "a:b"):
        with pytest.raises(SurgeryError):
            FacetBijection.parse(bad)


def test_sum_of_two_boundaries_is_a_chain():
    A = boundary_4simplex()
    out = connected_sum(A, FacetBijection.parse("0:0,1:1,2:2,3:3"), A)
    assert is_isomorphic(out, chain_sum(2)) is not None
    B = boundary_4simplex(range(5, 10))
    assert check_admissible(A, FacetBijection.parse("0:5,1:6,2:7,3:8"), SUM, B).ok


def test_handle_admissibility_witness():
    K = chain_sum(4)
    psi = FacetBijection.parse("0:4,1:5,2:6,3:7")
    adm = check_admissible(K, psi, HANDLE)
    assert not adm.ok
    # the witness is a genuine short path in the graph of K
    path = adm.witness
    assert len(path) <= 3
    assert all(b in K.neighbors(a) for a, b in zip(path, path[1:]))
    with pytest.raises(SurgeryError) as exc:
        handle_addition(K, psi)
    assert exc.value.witness == path


def test_vertex_fold_rejects_adjacent_pairs():
    K = instances._cone_chain(1, 3)
    facets = sorted(f for f in K.facets if 0 in f)
    f1, f2 = facets[0], facets[-1]
    pairs = [(0, 0)] + list(zip([x for x in f1 if x], [x for x in f2 if x]))
    adm = check_admissible(K, FacetBijection.from_pairs(pairs), VERTEX_FOLD)
    assert not adm.ok and adm.witness


def test_fold_kind_must_match_shared_vertices():
    K = chain_sum(4)
    psi = FacetBijection.parse("0:4,1:5,2:6,3:7")
    assert not check_admissible(K, psi, VERTEX_FOLD).ok
    assert not check_admissible(K, psi, EDGE_FOLD).ok


@pytest.mark.parametrize("factory,delta", [
    (instances.handle_instances, 10),
    (instances.vertex_fold_instances, 6),
    (instances.edge_fold_instances, 3),
])
def test_identifications_raise_g2_exactly(factory, delta):
    for K, L, psi in factory(12):
        assert L.g2() - K.g2() == delta
        assert validate_normal(L).ok


def test_sum_is_additive():
    for K1, K2, L in instances.sum_instances(15):
        assert L.g2() == K1.g2() + K2.g2()
        assert len(L.vertices) == len(K1.vertices) + len(K2.vertices) - 4


def test_vertex_folding_links():
    for K, L, psi in instances.vertex_fold_instances(12):
        sing = dict(singular_vertices(L))
        assert list(sing) == [0]
        assert sing[0].handles == 1
        # the rest of the link data (Euler characteristic) is fixed by the counts
        assert sing[0].euler_characteristic == 0


def test_edge_folding_links():
    for K, L, psi in instances.edge_fold_instances(12):
        sing = dict(singular_vertices(L))
        assert sorted(sing) == [0, 1]
        assert all(s.name == "RP2" for s in sing.values())


# -- inverses -------------------------------------------------------------------------


def test_split_round_trip():
    for K1, K2, L in instances.sum_instances(10, seed=11):
        sigmas = missing_tetrahedra(L)
        assert sigmas
        for s in sigmas:
            res = split_connected_sum(L, s)
            if isinstance(res, HandleWitness):
                continue
            P, Q, psi = res
            assert connected_sum(P, psi, Q, keep_labels=True) == L
            assert P.g2() + Q.g2() == L.g2()


def test_vertex_unfold_round_trip():
    for K, L, psi in instances.vertex_fold_instances(10, seed=12):
        s = psi.target_facet
        sigma = tuple(sorted(psi.source_facet))
        assert sigma in missing_tetrahedra(L)
        out, psi2 = vertex_unfolding(L, sigma, 0)
        assert vertex_folding(out, psi2) == L
        assert out.g2() == L.g2() - 6
        assert is_isomorphic(out, K) is not None, s


def test_edge_unfold_round_trip():
    for K, L, psi in instances.edge_fold_instances(10, seed=13):
        sigma = tuple(sorted(psi.source_facet))
        out, psi2 = edge_unfolding(L, sigma, (0, 1))
        assert edge_folding(out, psi2) == L
        assert out.g2() == L.g2() - 3
        assert not singular_vertices(out)


def test_handle_witness_and_unhandling():
    K, meta = handle_example()
    assert K.g2() == 10
    witnesses = [r for r in (split_connected_sum(K, s) for s in missing_tetrahedra(K))
                 if isinstance(r, HandleWitness)]
    assert witnesses
    out = witnesses[0].unhandled(K)
    assert out.g2() == 0
    assert validate_normal(out).ok


def test_unfolding_rejects_separating_cycle():
    K = corpus()["chain2"]
    (sigma,) = missing_tetrahedra(K)
    with pytest.raises(SurgeryError):
        vertex_unfolding(K, sigma, sigma[0])
    with pytest.raises(SurgeryError):
        edge_unfolding(K, sigma, sigma[:2])


def test_edge_fold_rejects_nearby_pairs():
    # neighbouring facets: the free vertices are joined, so folding would double an edge
    K = instances._cone_chain(2, 3)
    star = sorted(f for f in K.facets if 0 in f and 1 in f)
    f1, f2 = star[0], star[1]
    pairs = [(0, 0), (1, 1)] + list(zip([x for x in f1 if x > 1], [x for x in f2 if x > 1]))
    with pytest.raises(SurgeryError):
        edge_folding(K, FacetBijection.from_pairs(pairs))


def test_euler_characteristic_of_links_drops():
    K = corpus()["vblock"]
    assert classify_surface(K.vertex_link(0)).euler_characteristic == 0
    K = corpus()["eblock"]
    assert classify_surface(K.vertex_link(0)).euler_characteristic == 1
