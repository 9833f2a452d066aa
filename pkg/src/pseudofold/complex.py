"""Pure 3-dimensional simplicial complexes and their vertex-link surfaces.

A :class:`Complex3` is stored as a set of tetrahedra over non-negative integer
labels.  Every face is a sorted tuple.  Complexes are immutable; all
operations in this package return new complexes.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable


class ComplexError(ValueError):
    """Raised for malformed facet data or faces that are not in a complex."""


def face(vertices: Iterable[int]) -> tuple:
    return tuple(sorted(vertices))


@dataclass(frozen=True)
class FVector:
    f0: int
    f1: int
    f2: int
    f3: int
    f_minus1: int = 1

    def as_tuple(self) -> tuple:
        return (self.f_minus1, self.f0, self.f1, self.f2, self.f3)

    def counts(self) -> tuple:
        return (self.f0, self.f1, self.f2, self.f3)


@dataclass(frozen=True)
class GInvariants:
    h: tuple
    g2: int


def h_vector(fv: FVector, d: int = 3) -> tuple:
    f = fv.as_tuple()  # f[j] = f_{j-1}
    return tuple(
        sum((-1) ** (i - j) * comb(d + 1 - j, i - j) * f[j] for j in range(i + 1))
        for i in range(d + 2)
    )


class Complex3:
    """A pure 3-dimensional simplicial complex.

    Parameters
    ----------
    facets : iterable of 4-element vertex collections
        Duplicates are collapsed.  Raises :class:`ComplexError` on an empty
        list, a facet of the wrong size or a facet with a repeated vertex.
    """

    __slots__ = (
        "facets", "vertices", "edges", "triangles",
        "_vertex_facets", "_triangle_facets", "_edge_facets", "_nbrs",
    )

    def __init__(self, facets: Iterable[Iterable[int]]):
        fs = set()
        for raw in facets:
            t = tuple(sorted(int(x) for x in raw))
            if len(t) != 4:
                raise ComplexError(f"facet {list(raw)} does not have 4 vertices")
            if len(set(t)) != 4:
                raise ComplexError(f"facet {list(raw)} has a repeated vertex")
            if t[0] < 0:
                raise ComplexError(f"facet {list(raw)} has a negative label")
            fs.add(t)
        if not fs:
            raise ComplexError("empty facet list")
        self.facets = frozenset(fs)

        vf = defaultdict(list)
        tf = defaultdict(list)
        ef = defaultdict(list)
        for f in fs:
            for v in f:
                vf[v].append(f)
            for tri in combinations(f, 3):
                tf[tri].append(f)
            for e in combinations(f, 2):
                ef[e].append(f)
        self._vertex_facets = {v: tuple(sorted(x)) for v, x in vf.items()}
        self._triangle_facets = {k: tuple(v) for k, v in tf.items()}
        self._edge_facets = {k: tuple(v) for k, v in ef.items()}
        self.vertices = tuple(sorted(vf))
        self.edges = frozenset(ef)
        self.triangles = frozenset(tf)
        nbrs = defaultdict(set)
        for a, b in self.edges:
            nbrs[a].add(b)
            nbrs[b].add(a)
        self._nbrs = {v: frozenset(s) for v, s in nbrs.items()}

    # -- basic queries ------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Complex3) and self.facets == other.facets

    def __hash__(self):
        return hash(self.facets)

    def __repr__(self):
        f = self.f_vector()
        return f"Complex3(f=({f.f0},{f.f1},{f.f2},{f.f3}))"

    def __contains__(self, simplex) -> bool:
        return self.has_face(simplex)

    def sorted_facets(self) -> list:
        return sorted(self.facets)

    def has_face(self, simplex) -> bool:
        s = face(simplex)
        n = len(s)
        if n == 1:
            return s[0] in self._vertex_facets
        if n == 2:
            return s in self._edge_facets
        if n == 3:
            return s in self._triangle_facets
        if n == 4:
            return s in self.facets
        return n == 0

    def facets_containing(self, simplex) -> tuple:
        s = face(simplex)
        if len(s) == 1:
            return self._vertex_facets.get(s[0], ())
        if len(s) == 2:
            return self._edge_facets.get(s, ())
        if len(s) == 3:
            return self._triangle_facets.get(s, ())
        if len(s) == 4:
            return (s,) if s in self.facets else ()
        raise ComplexError(f"bad face {simplex}")

    def neighbors(self, v: int) -> frozenset:
        return self._nbrs.get(v, frozenset())

    def degree(self, v: int) -> int:
        """d(v): number of vertices in the link of ``v``."""
        return len(self._nbrs[v])

    def edge_degree(self, u: int, v: int) -> int:
        """d(uv): number of vertices in the link of the edge ``uv``."""
        return len(self._edge_facets[face((u, v))])

    def max_label(self) -> int:
        return self.vertices[-1]

    def fresh_labels(self, k: int, avoid: Iterable[int] = ()) -> list:
        top = max([self.max_label(), *avoid])
        return list(range(top + 1, top + 1 + k))

    def f_vector(self) -> FVector:
        return FVector(len(self.vertices), len(self.edges), len(self.triangles), len(self.facets))

    def g2(self) -> int:
        return len(self.edges) - 4 * len(self.vertices) + 10

    def g_invariants(self) -> GInvariants:
        fv = self.f_vector()
        h = h_vector(fv, 3)
        g2 = h[2] - h[1]
        closed = fv.f1 - 4 * fv.f0 + 10
        if g2 != closed:  # pragma: no cover - algebraic identity
            raise AssertionError(f"h-vector g2 {g2} != closed form {closed}")
        return GInvariants(h=h, g2=g2)

    # -- links and stars ----------------------------------------------------

    def vertex_link(self, v: int) -> "Surface2":
        if v not in self._vertex_facets:
            raise ComplexError(f"vertex {v} not in complex")
        return Surface2(tuple(x for x in f if x != v) for f in self._vertex_facets[v])

    def edge_link_pairs(self, u: int, v: int) -> list:
        e = face((u, v))
        if e not in self._edge_facets:
            raise ComplexError(f"edge {e} not in complex")
        return [tuple(x for x in f if x != u and x != v) for f in self._edge_facets[e]]

    def edge_link(self, u: int, v: int) -> list:
        """Vertices of lk(uv) in cyclic order; raises if the link is not one cycle."""
        cyc = cycle_order(self.edge_link_pairs(u, v))
        if cyc is None:
            raise ComplexError(f"link of edge {face((u, v))} is not a single cycle")
        return cyc

    def triangle_link(self, tri) -> list:
        t = face(tri)
        return [next(x for x in f if x not in t) for f in self.facets_containing(t)]

    def link(self, simplex):
        s = face(simplex)
        if not self.has_face(s):
            raise ComplexError(f"face {s} not in complex")
        if len(s) == 1:
            return self.vertex_link(s[0])
        if len(s) == 2:
            return self.edge_link(*s)
        if len(s) == 3:
            return self.triangle_link(s)
        raise ComplexError("link of a facet is empty")

    def star(self, simplex) -> "Complex3":
        s = face(simplex)
        fs = self.facets_containing(s)
        if not fs:
            raise ComplexError(f"face {s} not in complex")
        return Complex3(fs)

    def in_star(self, t: int, v: int) -> bool:
        """Whether vertex ``v`` lies in st(t)."""
        return v == t or v in self._nbrs[t]

    # -- derived complexes --------------------------------------------------

    def relabel(self, mapping: dict) -> "Complex3":
        return Complex3(tuple(mapping.get(x, x) for x in f) for f in self.facets)

    def replace_facets(self, remove: Iterable, add: Iterable) -> "Complex3":
        out = set(self.facets)
        for f in remove:
            out.discard(face(f))
        out.update(face(f) for f in add)
        return Complex3(out)

    def components(self) -> list:
        """Vertex sets of the connected components of the 1-skeleton."""
        seen = set()
        comps = []
        for s in self.vertices:
            if s in seen:
                continue
            comp = {s}
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self._nbrs[x]:
                    if y not in comp:
                        comp.add(y)
                        queue.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps


def cycle_order(pairs) -> list | None:
    """Order the edges ``pairs`` into one cycle, or return None if they are not one."""
    adj = defaultdict(list)
    for a, b in pairs:
        adj[a].append(b)
        adj[b].append(a)
    if not adj or any(len(n) != 2 for n in adj.values()):
        return None
    start = min(adj)
    order = [start]
    prev, cur = None, start
    while True:
        a, b = adj[cur]
        nxt = a if a != prev else b
        if prev is None:
            nxt = min(a, b)
        if nxt == start:
            break
        order.append(nxt)
        prev, cur = cur, nxt
        if len(order) > len(adj):  # pragma: no cover - defensive
            return None
    return order if len(order) == len(adj) else None


# ---------------------------------------------------------------------------
# Surfaces


@dataclass(frozen=True)
class SurfaceType:
    kind: str  # "sphere", "orientable" or "nonorientable"
    genus: int
    euler_characteristic: int
    first_betti_mod2: int

    @property
    def orientable(self) -> bool:
        return self.kind != "nonorientable"

    @property
    def is_sphere(self) -> bool:
        return self.kind == "sphere"

    @property
    def handles(self) -> int:
        """Number of torus or Klein-bottle summands; -1 if there is an odd cross-cap."""
        if self.kind == "sphere":
            return 0
        if self.kind == "orientable":
            return self.genus
        return self.genus // 2 if self.genus % 2 == 0 else -1

    @property
    def name(self) -> str:
        if self.kind == "sphere":
            return "S2"
        if self.kind == "orientable":
            return "T2" if self.genus == 1 else f"#{self.genus}T2"
        return "RP2" if self.genus == 1 else f"#{self.genus}RP2"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "genus": self.genus,
            "euler_characteristic": self.euler_characteristic,
            "first_betti_mod2": self.first_betti_mod2,
            "name": self.name,
        }


class Surface2:
    """A triangulated surface given by its triangles (usually a vertex link)."""

    __slots__ = ("triangles", "vertices", "edges", "_edge_tris", "_vertex_tris")

    def __init__(self, triangles: Iterable[Iterable[int]]):
        ts = set()
        for raw in triangles:
            t = face(raw)
            if len(t) != 3 or len(set(t)) != 3:
                raise ComplexError(f"bad triangle {raw}")
            ts.add(t)
        self.triangles = frozenset(ts)
        et = defaultdict(list)
        vt = defaultdict(list)
        for t in ts:
            for e in combinations(t, 2):
                et[e].append(t)
            for v in t:
                vt[v].append(t)
        self._edge_tris = dict(et)
        self._vertex_tris = dict(vt)
        self.vertices = tuple(sorted(vt))
        self.edges = frozenset(et)

    def __eq__(self, other):
        return isinstance(other, Surface2) and self.triangles == other.triangles

    def __hash__(self):
        return hash(self.triangles)

    def __repr__(self):
        return f"Surface2(V={len(self.vertices)}, E={len(self.edges)}, F={len(self.triangles)})"

    def f_vector(self) -> tuple:
        return (len(self.vertices), len(self.edges), len(self.triangles))

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.triangles)

    def g2(self) -> int:
        return len(self.edges) - 3 * len(self.vertices) + 6

    def has_edge(self, a, b) -> bool:
        return face((a, b)) in self._edge_tris

    def edge_triangles(self, a, b) -> list:
        return self._edge_tris.get(face((a, b)), [])

    def vertex_triangles(self, v) -> list:
        return self._vertex_tris.get(v, [])

    def vertex_link_cycle(self, v) -> list | None:
        pairs = [tuple(x for x in t if x != v) for t in self._vertex_tris.get(v, ())]
        return cycle_order(pairs)

    def closed_surface_problems(self) -> list:
        problems = []
        if not self.triangles:
            return ["no triangles"]
        for e, ts in self._edge_tris.items():
            if len(ts) != 2:
                problems.append(f"edge {e} lies in {len(ts)} triangles")
        for v in self.vertices:
            if self.vertex_link_cycle(v) is None:
                problems.append(f"link of vertex {v} is not a single cycle")
        if len(self.triangle_components()) != 1:
            problems.append("surface is not connected")
        return problems

    def is_closed_surface(self) -> bool:
        return not self.closed_surface_problems()

    def triangle_components(self, blocked_edges=frozenset()) -> list:
        """Components of the triangle adjacency graph, not crossing ``blocked_edges``."""
        blocked = {face(e) for e in blocked_edges}
        seen = set()
        comps = []
        for s in sorted(self.triangles):
            if s in seen:
                continue
            comp = {s}
            queue = deque([s])
            while queue:
                t = queue.popleft()
                for e in combinations(t, 2):
                    if e in blocked:
                        continue
                    for u in self._edge_tris[e]:
                        if u not in comp:
                            comp.add(u)
                            queue.append(u)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def orientation(self):
        """Try to orient all triangles coherently.

        Returns ``(True, orientation)`` with a dict triangle -> oriented tuple, or
        ``(False, (t1, t2))`` naming two adjacent triangles whose orientations conflict.
        """
        oriented = {}
        for s in sorted(self.triangles):
            if s in oriented:
                continue
            oriented[s] = s
            queue = deque([s])
            while queue:
                t = queue.popleft()
                a, b, c = oriented[t]
                for x, y in ((a, b), (b, c), (c, a)):
                    for u in self._edge_tris[face((x, y))]:
                        if u == t:
                            continue
                        z = next(w for w in u if w != x and w != y)
                        want = (y, x, z)
                        if u in oriented:
                            if not _same_cyclic(oriented[u], want):
                                return False, (t, u)
                        else:
                            oriented[u] = want
                            queue.append(u)
        return True, oriented

    def is_orientable(self) -> bool:
        return self.orientation()[0]


def _same_cyclic(p, q) -> bool:
    return q in (p, (p[1], p[2], p[0]), (p[2], p[0], p[1]))


def classify_surface(surface: Surface2) -> SurfaceType:
    problems = surface.closed_surface_problems()
    if problems:
        raise ComplexError("not a closed connected surface: " + "; ".join(problems[:3]))
    chi = surface.euler_characteristic()
    orientable = surface.is_orientable()
    if orientable:
        if chi == 2:
            return SurfaceType("sphere", 0, 2, 0)
        if chi % 2:  # pragma: no cover - impossible for a closed orientable surface
            raise ComplexError(f"orientable surface with odd Euler characteristic {chi}")
        return SurfaceType("orientable", (2 - chi) // 2, chi, 2 - chi)
    return SurfaceType("nonorientable", 2 - chi, chi, 2 - chi)


# ---------------------------------------------------------------------------
# Validation and singularities


@dataclass
class ValidationReport:
    pure: bool = True
    triangles_in_two_facets: bool = True
    strongly_connected: bool = True
    vertex_links_surfaces: bool = True
    edge_links_cycles: bool = True
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.pure and self.triangles_in_two_facets and self.strongly_connected
                and self.vertex_links_surfaces and self.edge_links_cycles)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "pure": self.pure,
            "triangles_in_two_facets": self.triangles_in_two_facets,
            "strongly_connected": self.strongly_connected,
            "vertex_links_surfaces": self.vertex_links_surfaces,
            "edge_links_cycles": self.edge_links_cycles,
            "problems": list(self.problems),
        }


def validate_normal(K: Complex3, max_problems: int = 20) -> ValidationReport:
    """Check the normal 3-pseudomanifold conditions; failures are report entries."""
    rep = ValidationReport()

    def note(msg):
        if len(rep.problems) < max_problems:
            rep.problems.append(msg)

    # Faces are derived from facets, so purity holds by construction.
    for tri, fs in K._triangle_facets.items():
        if len(fs) != 2:
            rep.triangles_in_two_facets = False
            note(f"triangle {tri} lies in {len(fs)} facets")

    seen = {min(K.facets)}
    queue = deque(seen)
    while queue:
        f = queue.popleft()
        for tri in combinations(f, 3):
            for g in K._triangle_facets[tri]:
                if g not in seen:
                    seen.add(g)
                    queue.append(g)
    if len(seen) != len(K.facets):
        rep.strongly_connected = False
        note(f"facet graph has a component of {len(seen)} of {len(K.facets)} facets")

    for e in sorted(K.edges):
        if cycle_order(K.edge_link_pairs(*e)) is None:
            rep.edge_links_cycles = False
            note(f"link of edge {e} is not a single cycle")

    for v in K.vertices:
        lk = K.vertex_link(v)
        if len(lk.triangle_components()) != 1:
            rep.vertex_links_surfaces = False
            note(f"link of vertex {v} is disconnected")
        elif not rep.triangles_in_two_facets or not rep.edge_links_cycles:
            if lk.closed_surface_problems():
                rep.vertex_links_surfaces = False
                note(f"link of vertex {v} is not a closed surface")
    return rep


def is_normal(K: Complex3) -> bool:
    return validate_normal(K, max_problems=1).ok


def link_types(K: Complex3) -> dict:
    return {v: classify_surface(K.vertex_link(v)) for v in K.vertices}


def singular_vertices(K: Complex3) -> list:
    """Vertices whose link is not a 2-sphere, with their surface types, by label."""
    out = []
    for v in K.vertices:
        st = classify_surface(K.vertex_link(v))
        if not st.is_sphere:
            out.append((v, st))
    return out


def distinguished_vertex(K: Complex3, singular=None):
    """The singular vertex t used for edge weights, or None without singularities.

    Maximizes the mod-2 first Betti number of the link, then prefers d(t) >= 8,
    then the smallest label.
    """
    sing = singular_vertices(K) if singular is None else singular
    if not sing:
        return None
    return min(sing, key=lambda p: (-p[1].first_betti_mod2, K.degree(p[0]) < 8, p[0]))[0]


def lower_bound_violations(K: Complex3) -> list:
    """Vertices t with g2(K) < g2(lk(t)), plus disjoint-star pairs breaking additivity."""
    g = K.g2()
    lk_g2 = {v: K.vertex_link(v).g2() for v in K.vertices}
    bad = [(v,) for v in K.vertices if g < lk_g2[v]]
    heavy = [v for v in K.vertices if lk_g2[v] > 0]
    for u, v in combinations(heavy, 2):
        star_u = set(K.neighbors(u)) | {u}
        star_v = set(K.neighbors(v)) | {v}
        if not star_u & star_v and g < lk_g2[u] + lk_g2[v]:
            bad.append((u, v))
    return bad


# ---------------------------------------------------------------------------
# Isomorphism


def _vertex_invariants(K: Complex3, rounds: int = 3) -> dict:
    col = {v: (K.degree(v), len(K.facets_containing((v,)))) for v in K.vertices}
    for _ in range(rounds):
        col = {
            v: (col[v], tuple(sorted(col[w] for w in K.neighbors(v))))
            for v in K.vertices
        }
    return col


def is_isomorphic(K1: Complex3, K2: Complex3):
    """Return a vertex bijection K1 -> K2 mapping facets onto facets, or None.

    Backtracking over vertices ordered for connectivity, with candidates
    pruned by refined degree invariants and adjacency to mapped vertices.
    """
    if K1.f_vector() != K2.f_vector():
        return None
    c1 = _vertex_invariants(K1)
    c2 = _vertex_invariants(K2)
    if sorted(c1.values()) != sorted(c2.values()):
        return None
    by_color = defaultdict(list)
    for v in K2.vertices:
        by_color[c2[v]].append(v)

    # Order K1 vertices: rarest color first, then greedily by mapped neighbours.
    freq = defaultdict(int)
    for c in c1.values():
        freq[c] += 1
    order = []
    placed = set()
    remaining = set(K1.vertices)
    while remaining:
        def key(v):
            return (-len(K1.neighbors(v) & placed), freq[c1[v]], v)
        v = min(remaining, key=key)
        order.append(v)
        placed.add(v)
        remaining.discard(v)

    # Facets to check once all their vertices are mapped.
    pos = {v: i for i, v in enumerate(order)}
    due = defaultdict(list)
    for f in K1.facets:
        due[max(f, key=pos.get)].append(f)

    mapping = {}
    used = set()

    def extend(i):
        if i == len(order):
            return True
        v = order[i]
        mapped_nbrs = [w for w in K1.neighbors(v) if w in mapping]
        for cand in by_color[c1[v]]:
            if cand in used:
                continue
            nb = K2.neighbors(cand)
            if any(mapping[w] not in nb for w in mapped_nbrs):
                continue
            if sum(1 for w in nb if w in used) != len(mapped_nbrs):
                continue
            mapping[v] = cand
            used.add(cand)
            if all(face(mapping[x] for x in f) in K2.facets for f in due[v]):
                if extend(i + 1):
                    return True
            del mapping[v]
            used.discard(cand)
        return False

    if extend(0):
        return dict(mapping)
    return None


def build_complex(facets) -> Complex3:
    return Complex3(facets)


def f_vector(K: Complex3) -> FVector:
    return K.f_vector()


def g_invariants(K: Complex3) -> GInvariants:
    return K.g_invariants()


def link(K: Complex3, simplex):
    return K.link(simplex)


def star(K: Complex3, simplex) -> Complex3:
    return K.star(simplex)
