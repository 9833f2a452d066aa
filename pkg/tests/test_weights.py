from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from pseudofold.complex import ComplexError, distinguished_vertex, singular_vertices
from pseudofold.weights import (
    HALF,
    VALUE_SET,
    edge_weight,
    fmt,
    outer_weight,
    verify_weight_identities,
    vertex_weight,
    weight_table,
)

from conftest import corpus

SINGULAR = sorted(n for n, K in corpus().items() if singular_vertices(K))


def star_edge_count(K, t):
    return len({e for f in K.facets_containing((t,)) for e in combinations(f, 2)})


@pytest.mark.parametrize("name", SINGULAR)
def test_star_identity_tracks_pair_sums(name):
    K = corpus()[name]
    for t, _ in singular_vertices(K):
        rep = verify_weight_identities(K, t)
        star = {e for f in K.facets_containing((t,)) for e in combinations(f, 2)}
        off = [e for e in K.edges if e not in star]
        assert rep.f1_outside_star == len(K.edges) - star_edge_count(K, t) == len(off)
        # regrouping by vertices never changes the total
        assert rep.regrouping_ok
        # the count identity holds exactly when every off-star pair sums to 1
        assert rep.star_identity_ok == all(rep.pair_sums[e] == 1 for e in off)


def test_star_identity_fails_on_the_suspension_of_rp2():
    # t = 6; the other apex 7 has degree 6 and each equator vertex has degree 7
    # with d(x7) = 5, so lambda(7, x) = 2/3 and lambda(x, 7) = 3/4
    K = corpus()["susp_rp2"]
    rep = verify_weight_identities(K, 6)
    bad = {e: s for e, s in rep.pair_sums.items() if s != 1}
    assert bad == {(x, 7): Fraction(17, 12) for x in range(6)}
    assert rep.f1_outside_star == 6
    assert rep.off_star_weight == Fraction(17, 2)
    assert not rep.star_identity_ok


@pytest.mark.parametrize("name", SINGULAR)
def test_weights_lie_in_the_value_set(name):
    K = corpus()[name]
    t = distinguished_vertex(K)
    table = weight_table(K, t)
    assert set(table.values()) <= VALUE_SET
    for (u, v), w in table.items():
        if K.in_star(t, u) and K.in_star(t, v):
            assert w == HALF
        elif K.degree(u) == 6:
            assert w == Fraction(2, 3)


@pytest.mark.parametrize("name", SINGULAR)
def test_degree_rules(name):
    K = corpus()[name]
    t = distinguished_vertex(K)
    for u, v in K.edges:
        for a, b in ((u, v), (v, u)):
            if K.in_star(t, a) and K.in_star(t, b):
                continue
            w = edge_weight(K, t, a, b)
            da = K.degree(a)
            if da == 7 and K.edge_degree(a, b) == 5:
                assert w == Fraction(3, 4)
            if da == 7 and K.edge_degree(a, b) == 4:
                assert w == HALF
            if da == 8:
                assert w == HALF
            if da >= 9 and K.degree(b) <= 8:
                assert w == 1 - edge_weight(K, t, b, a)


def test_outer_weight_excludes_link_edges():
    K = corpus()["sharp1_1"]
    t = 0
    table = weight_table(K, t)
    for u in K.neighbors(t):
        expected = sum((table[(u, v)] for v in K.neighbors(u)
                        if v != t and tuple(sorted((t, u, v))) not in K.triangles), Fraction(0))
        assert outer_weight(K, t, u, table) == expected
    with pytest.raises(ComplexError):
        outer_weight(K, t, max(K.vertices) + 1)


def test_report_json_uses_fraction_strings():
    K = corpus()["sharp2_1"]
    doc = verify_weight_identities(K, distinguished_vertex(K)).to_json()
    assert set(doc) == {"t", "a_pair_sums", "b_star_identity", "c_edge_bound",
                        "d_vertex_weights", "e_outer_weights"}
    assert "/" in doc["b_star_identity"]["off_star_weight"]
    assert fmt(Fraction(3, 4)) == "3/4"


def test_nonsingular_base_is_rejected():
    K = corpus()["boundary"]
    with pytest.raises(ComplexError):
        verify_weight_identities(K, 0)


@settings(max_examples=30, deadline=None)
@given(name=st.sampled_from(SINGULAR), data=st.data())
def test_vertex_weight_is_sum_of_edge_weights(name, data):
    K = corpus()[name]
    t = distinguished_vertex(K)
    u = data.draw(st.sampled_from(K.vertices))
    w = vertex_weight(K, t, u)
    assert w == sum((edge_weight(K, t, u, v) for v in K.neighbors(u)), Fraction(0))
    assert w.denominator in (1, 2, 3, 4, 6, 12)
