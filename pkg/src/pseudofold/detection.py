"""Missing faces, link separation by 3-cycles, and missing-tetrahedron types."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .complex import Complex3, ComplexError, Surface2, face, singular_vertices

ANNULUS = "Annulus"
MOEBIUS = "Moebius"

T1 = "T1_NoSingular"
T2 = "T2_SepDisc"
T3 = "T3_Unfoldable"
T4 = "T4_VertexFoldPattern"
T5 = "T5_SepNoDisc"
UNMATCHED = "Unmatched"

DISPATCH_ORDER = (T1, T2, T4, T3, T5)


def missing_triangles(K: Complex3) -> list:
    out = []
    for a, b in sorted(K.edges):
        for c in sorted(K.neighbors(a) & K.neighbors(b)):
            if c > b and (a, b, c) not in K.triangles:
                out.append((a, b, c))
    return sorted(out)


def missing_tetrahedra(K: Complex3) -> list:
    out = []
    for a, b, c in sorted(K.triangles):
        common = K.neighbors(a) & K.neighbors(b) & K.neighbors(c)
        for d in sorted(common):
            if d <= c:
                continue
            if ((a, b, d) in K.triangles and (a, c, d) in K.triangles
                    and (b, c, d) in K.triangles and (a, b, c, d) not in K.facets):
                out.append((a, b, c, d))
    return out


def missing_triangles_bruteforce(K: Complex3) -> list:
    return [t for t in combinations(K.vertices, 3)
            if t not in K.triangles and all(e in K.edges for e in combinations(t, 2))]


def missing_tetrahedra_bruteforce(K: Complex3) -> list:
    return [s for s in combinations(K.vertices, 4)
            if s not in K.facets and all(t in K.triangles for t in combinations(s, 3))]


def side_chi(triangles) -> int:
    vs, es = set(), set()
    for t in triangles:
        vs.update(t)
        es.update(combinations(face(t), 2))
    return len(vs) - len(es) + len(triangles)


def side_is_disc(side, cycle=None) -> bool:
    """A separation side is a disc when it is connected with Euler characteristic 1."""
    tris = [face(t) for t in side]
    if not tris:
        return False
    comps = Surface2(tris).triangle_components(
        blocked_edges=_cycle_edges(cycle) if cycle else ())
    return len(comps) == 1 and side_chi(tris) == 1


def _cycle_edges(cycle) -> list:
    n = len(cycle)
    return [face((cycle[i], cycle[(i + 1) % n])) for i in range(n)]


def neighborhood_type(S: Surface2, cycle) -> str:
    """Annulus or Moebius, from the side-flip parity of a walk around ``cycle``."""
    cycle = list(cycle)
    n = len(cycle)
    for e in _cycle_edges(cycle):
        if not S.has_edge(*e):
            raise ComplexError(f"cycle edge {e} not in surface")
    # At each cycle vertex, the two cycle neighbours split its link into two arcs.
    arcs = []
    for i, c in enumerate(cycle):
        order = S.vertex_link_cycle(c)
        if order is None:
            raise ComplexError(f"link of {c} is not a cycle")
        m = len(order)
        pos = {x: j for j, x in enumerate(order)}
        start, stop = pos[cycle[i - 1]], pos[cycle[(i + 1) % n]]
        side = {}
        j = start
        while j != stop:
            side[face((order[j], order[(j + 1) % m]))] = 0
            j = (j + 1) % m
        while j != start:
            side[face((order[j], order[(j + 1) % m]))] = 1
            j = (j + 1) % m
        arcs.append(side)
    parity = 0
    for i in range(n):
        a, b = cycle[i], cycle[(i + 1) % n]
        tri = S.edge_triangles(a, b)[0]
        y = next(x for x in tri if x != a and x != b)
        sa = arcs[i][face((b, y))]
        sb = arcs[(i + 1) % n][face((a, y))]
        # The shared triangle sits on one side of the curve; a label change is a flip.
        parity ^= sa ^ sb
    return MOEBIUS if parity else ANNULUS


@dataclass
class LinkSeparation:
    vertex: int
    cycle: tuple
    separates: bool
    sides: tuple = ()
    disc_flags: tuple = ()
    neighborhood: str | None = None

    def to_json(self) -> dict:
        if self.separates:
            return {
                "separates": True,
                "sides": [[list(t) for t in sorted(s)] for s in self.sides],
                "disc_flags": list(self.disc_flags),
            }
        return {"separates": False, "neighborhood": self.neighborhood}


def separates_link(K: Complex3, x: int, tri) -> LinkSeparation:
    cyc = face(tri)
    if len(cyc) != 3 or x in cyc:
        raise ComplexError(f"bad cycle {tri} for vertex {x}")
    S = K.vertex_link(x)
    edges = list(combinations(cyc, 2))
    for e in edges:
        if not S.has_edge(*e):
            raise ComplexError(f"edge {e} of the cycle is not in lk({x})")
    comps = S.triangle_components(blocked_edges=edges)
    if len(comps) >= 2:
        sides = tuple(sorted(comps, key=min))
        return LinkSeparation(x, cyc, True, sides, tuple(side_chi(s) == 1 for s in sides))
    return LinkSeparation(x, cyc, False, neighborhood=neighborhood_type(S, cyc))


@dataclass
class MissingTetraReport:
    tetra: tuple
    per_vertex: dict
    type_tag: str
    apexes: list = field(default_factory=list)
    singular_in_tetra: list = field(default_factory=list)

    @property
    def nonseparating(self) -> list:
        return [x for x in self.tetra if not self.per_vertex[x].separates]

    def to_json(self) -> dict:
        return {
            "tetra": list(self.tetra),
            "type_tag": self.type_tag,
            "apexes": list(self.apexes),
            "singular_in_tetra": list(self.singular_in_tetra),
            "per_vertex": {str(x): self.per_vertex[x].to_json() for x in self.tetra},
        }


def classify_missing_tetra(K: Complex3, sigma, singular=None) -> MissingTetraReport:
    """Tag a missing tetrahedron by how its vertex links are cut.

    ``singular`` is the tracked set of singular vertices (default: all of them).
    """
    s = face(sigma)
    if len(s) != 4 or s in K.facets or not all(t in K.triangles for t in combinations(s, 3)):
        raise ComplexError(f"{s} is not a missing tetrahedron")
    if singular is None:
        singular = [v for v, _ in singular_vertices(K)]
    singular = set(singular)
    per = {x: separates_link(K, x, tuple(y for y in s if y != x)) for x in s}
    nonsep = [x for x in s if not per[x].separates]
    sing_in = [x for x in s if x in singular]
    apexes = []
    if not nonsep:
        if not sing_in:
            tag = T1
        elif any(not any(per[x].disc_flags) for x in sing_in):
            tag = T5
        else:
            tag = T2
    elif len(nonsep) == 1:
        tag = T4
        apexes = nonsep
    elif len(nonsep) == 2 and all(per[x].neighborhood == MOEBIUS for x in nonsep):
        tag = T3
        apexes = nonsep
    else:
        tag = UNMATCHED
    return MissingTetraReport(s, per, tag, apexes, sing_in)


def classify_all(K: Complex3, singular=None) -> list:
    if singular is None:
        singular = [v for v, _ in singular_vertices(K)]
    return [classify_missing_tetra(K, s, singular) for s in missing_tetrahedra(K)]
