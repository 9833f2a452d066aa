"""Exact edge weights relative to a distinguished singular vertex.

The weight of an ordered edge (u, v) depends on the degree of u, the degree
of the edge, and whether the edge leaves the star of the base vertex ``t``.
All arithmetic uses :class:`fractions.Fraction`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .complex import Complex3, ComplexError, classify_surface, face

HALF = Fraction(1, 2)
VALUE_SET = frozenset(Fraction(p, q) for p, q in ((1, 4), (1, 3), (1, 2), (2, 3), (3, 4)))


def _off_star(K: Complex3, t: int, u: int, v: int) -> bool:
    return not (K.in_star(t, u) and K.in_star(t, v))


def edge_weight(K: Complex3, t: int, u: int, v: int) -> Fraction:
    """Weight of the ordered edge (u, v); the first matching rule wins."""
    if face((u, v)) not in K.edges:
        raise ComplexError(f"edge {face((u, v))} not in complex")
    if not _off_star(K, t, u, v):
        return HALF
    du = K.degree(u)
    if du == 6:
        return Fraction(2, 3)
    if du == 7:
        d_uv = K.edge_degree(u, v)
        if d_uv == 5:
            return Fraction(3, 4)
        if d_uv == 4:
            return HALF
    if du == 8:
        return HALF
    if du >= 9 and K.degree(v) <= 8:
        return 1 - edge_weight(K, t, v, u)
    return HALF


def weight_table(K: Complex3, t: int) -> dict:
    table = {}
    for u, v in K.edges:
        table[(u, v)] = edge_weight(K, t, u, v)
        table[(v, u)] = edge_weight(K, t, v, u)
    return table


def vertex_weight(K: Complex3, t: int, u: int, table=None) -> Fraction:
    table = table or weight_table(K, t)
    return sum((table[(u, v)] for v in K.neighbors(u)), Fraction(0))


def outer_weight(K: Complex3, t: int, u: int, table=None) -> Fraction:
    """Sum of the weights of edges at u (a link vertex of t) that leave st(t)."""
    if u not in K.neighbors(t):
        raise ComplexError(f"{u} is not in the link of {t}")
    table = table or weight_table(K, t)
    lk = K.neighbors(t)
    return sum((table[(u, v)] for v in K.neighbors(u)
                if v != t and not (v in lk and K.has_face((t, u, v)))), Fraction(0))


def fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass
class IdentityReport:
    t: int
    pair_sums: dict = field(default_factory=dict)  # edge -> lambda(u,v) + lambda(v,u)
    f1_outside_star: int = 0
    off_star_weight: Fraction = Fraction(0)
    regrouped_weight: Fraction = Fraction(0)
    f1: int = 0
    lower_bound_c: Fraction = Fraction(0)
    vertex_weights: dict = field(default_factory=dict)  # off-star vertex -> W_u
    outer_weights: dict = field(default_factory=dict)  # link vertex -> O_u
    link_f0: int = 0
    link_chi: int = 0

    @property
    def pair_sums_ok(self) -> bool:
        return all(s == 1 for s in self.pair_sums.values())

    @property
    def star_identity_ok(self) -> bool:
        """f1(K) - f1(st t) equals the summed weights of the edges off st(t)."""
        return self.f1_outside_star == self.off_star_weight

    @property
    def regrouping_ok(self) -> bool:
        return self.off_star_weight == self.regrouped_weight

    @property
    def edge_bound_ok(self) -> bool:
        return self.f1 >= self.lower_bound_c

    @property
    def vertex_weights_ok(self) -> bool:
        return all(w >= 4 for w in self.vertex_weights.values())

    @property
    def outer_sum(self) -> Fraction:
        return sum(self.outer_weights.values(), Fraction(0))

    @property
    def outer_bound_ok(self) -> bool:
        return self.outer_sum >= self.link_f0 - 1

    def to_json(self) -> dict:
        bad = {f"{u},{v}": fmt(s) for (u, v), s in sorted(self.pair_sums.items()) if s != 1}
        return {
            "t": self.t,
            "a_pair_sums": {"ok": self.pair_sums_ok, "edges": len(self.pair_sums), "violations": bad},
            "b_star_identity": {
                "ok": self.star_identity_ok,
                "f1_outside_star": self.f1_outside_star,
                "off_star_weight": fmt(self.off_star_weight),
                "regrouped_weight": fmt(self.regrouped_weight),
                "regrouping_ok": self.regrouping_ok,
            },
            "c_edge_bound": {"ok": self.edge_bound_ok, "f1": self.f1, "bound": fmt(self.lower_bound_c)},
            "d_vertex_weights": {
                "ok": self.vertex_weights_ok,
                "weights": {str(u): fmt(w) for u, w in sorted(self.vertex_weights.items())},
            },
            "e_outer_weights": {
                "ok": self.outer_bound_ok,
                "sum": fmt(self.outer_sum),
                "bound": self.link_f0 - 1,
                "weights": {str(u): fmt(w) for u, w in sorted(self.outer_weights.items())},
            },
        }


def verify_weight_identities(K: Complex3, t: int) -> IdentityReport:
    lk = K.vertex_link(t)
    st = classify_surface(lk)
    if st.is_sphere:
        raise ComplexError(f"vertex {t} is not singular")
    table = weight_table(K, t)
    rep = IdentityReport(t=t, f1=len(K.edges), link_f0=len(lk.vertices),
                         link_chi=st.euler_characteristic)
    star_edges = {e for f in K.facets_containing((t,)) for e in _edges(f)}
    off = [e for e in K.edges if e not in star_edges]
    for u, v in sorted(K.edges):
        rep.pair_sums[(u, v)] = table[(u, v)] + table[(v, u)]
    rep.f1_outside_star = len(off)
    rep.off_star_weight = sum((table[(u, v)] + table[(v, u)] for u, v in off), Fraction(0))
    for u in K.vertices:
        if not K.in_star(t, u):
            rep.vertex_weights[u] = vertex_weight(K, t, u, table)
    for u in K.neighbors(t):
        rep.outer_weights[u] = outer_weight(K, t, u, table)
    rep.regrouped_weight = rep.outer_sum + sum(rep.vertex_weights.values(), Fraction(0))
    rep.lower_bound_c = 4 * len(K.vertices) - 3 * rep.link_chi - 4 + rep.outer_sum
    return rep


def _edges(f):
    a, b, c, d = f
    return ((a, b), (a, c), (a, d), (b, c), (b, d), (c, d))
