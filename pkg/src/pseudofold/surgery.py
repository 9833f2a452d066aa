"""Connected sum, handle addition, vertex and edge folding, and their inverses.

A folding identifies two facets of one complex through a vertex bijection and
removes the identified facet.  The inverses cut a complex open along the
boundary of a missing tetrahedron, duplicating vertices side by side.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .complex import Complex3, ComplexError, face, validate_normal
from .detection import MOEBIUS, separates_link

SUM = "Sum"
HANDLE = "Handle"
VERTEX_FOLD = "VertexFold"
EDGE_FOLD = "EdgeFold"

# (vertices merged, edges merged) when two facets are identified.
_MERGED = {HANDLE: (4, 6), VERTEX_FOLD: (3, 6), EDGE_FOLD: (2, 5)}
G2_DELTA = {SUM: 0, HANDLE: 10, VERTEX_FOLD: 6, EDGE_FOLD: 3}


class SurgeryError(ComplexError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class FacetBijection:
    source_facet: tuple
    target_facet: tuple
    pairing: tuple  # sorted (source vertex, target vertex) pairs
    fixed_set: frozenset = frozenset()

    @classmethod
    def from_pairs(cls, pairs) -> "FacetBijection":
        pairs = tuple(sorted((int(a), int(b)) for a, b in dict(pairs).items()))
        src = face(a for a, _ in pairs)
        tgt = face(b for _, b in pairs)
        if len(src) != 4 or len(set(src)) != 4 or len(set(tgt)) != 4:
            raise SurgeryError(f"pairing {pairs} is not a bijection between two facets")
        fixed = frozenset(a for a, b in pairs if a == b)
        return cls(src, tgt, pairs, fixed)

    @classmethod
    def parse(cls, text: str) -> "FacetBijection":
        """Parse ``a:b,c:d,...``."""
        pairs = []
        for item in text.split(","):
            try:
                a, b = item.split(":")
                pairs.append((int(a), int(b)))
            except ValueError:
                raise SurgeryError(f"bad pair {item!r} in {text!r}") from None
        if len(dict(pairs)) != len(pairs):
            raise SurgeryError(f"repeated source vertex in {text!r}")
        return cls.from_pairs(pairs)

    def as_dict(self) -> dict:
        return dict(self.pairing)

    def to_json(self) -> dict:
        return {
            "source_facet": list(self.source_facet),
            "target_facet": list(self.target_facet),
            "pairing": [list(p) for p in self.pairing],
            "fixed_set": sorted(self.fixed_set),
        }

    def to_text(self) -> str:
        return ",".join(f"{a}:{b}" for a, b in self.pairing)


@dataclass
class Admissibility:
    ok: bool
    witness: list = field(default_factory=list)
    reason: str = ""


def _bfs_path(K: Complex3, src: int, dst: int, limit: int, avoid=frozenset()):
    """A shortest path from src to dst of length <= limit avoiding ``avoid`` inside."""
    prev = {src: None}
    frontier = [src]
    for _ in range(limit):
        nxt = []
        for x in frontier:
            for y in sorted(K.neighbors(x)):
                if y in prev:
                    continue
                if y == dst:
                    path = [y, x]
                    while prev[path[-1]] is not None:
                        path.append(prev[path[-1]])
                    return path[::-1]
                if y in avoid:
                    continue
                prev[y] = x
                nxt.append(y)
        frontier = nxt
    return None


def check_admissible(K: Complex3, psi: FacetBijection, kind: str, K2: Complex3 | None = None) -> Admissibility:
    """Check the path-length conditions of a sum, handle addition or folding."""
    s1, s2 = psi.source_facet, psi.target_facet
    if kind == SUM:
        if K2 is None:
            K2 = K
        if s1 not in K.facets or s2 not in K2.facets:
            raise SurgeryError("facet not in complex")
        if K2 is not K:
            return Admissibility(True)
        kind = HANDLE
    if s1 not in K.facets or s2 not in K.facets:
        raise SurgeryError(f"facet {s1 if s1 not in K.facets else s2} not in complex")
    pairs = psi.as_dict()
    common = set(s1) & set(s2)
    if kind == HANDLE:
        if common:
            return Admissibility(False, sorted(common), "facets share a vertex")
        for x, y in psi.pairing:
            path = _bfs_path(K, x, y, 2)
            if path:
                return Admissibility(False, path, f"path of length {len(path) - 1} from {x} to {y}")
        return Admissibility(True)
    if kind == VERTEX_FOLD:
        if len(common) != 1:
            return Admissibility(False, sorted(common), "facets must share exactly one vertex")
        (x,) = common
        if pairs[x] != x:
            return Admissibility(False, [x, pairs[x]], "shared vertex must be fixed")
        for y, z in psi.pairing:
            if y == x:
                continue
            if z in K.neighbors(y):
                return Admissibility(False, [y, z], f"edge from {y} to {z}")
            for m in sorted(K.neighbors(y) & K.neighbors(z)):
                if m != x:
                    return Admissibility(False, [y, m, z], f"path of length 2 from {y} to {z} avoiding {x}")
        return Admissibility(True)
    if kind == EDGE_FOLD:
        if len(common) != 2:
            return Admissibility(False, sorted(common), "facets must share exactly one edge")
        u, v = sorted(common)
        if pairs[u] != u or pairs[v] != v:
            return Admissibility(False, [u, v], "shared edge must be fixed")
        for y, z in psi.pairing:
            if y in common:
                continue
            path = _bfs_path(K, y, z, 2, avoid={u, v})
            if path:
                return Admissibility(False, path, f"path from {y} to {z} avoiding {u} and {v}")
        return Admissibility(True)
    raise SurgeryError(f"unknown kind {kind!r}")


def _require(adm: Admissibility, kind: str):
    if not adm.ok:
        raise SurgeryError(f"{kind} not admissible: {adm.reason} {adm.witness}", adm.witness)


def _check_result(out: Complex3, expected_f, kind: str):
    fv = out.f_vector().counts()
    if fv != tuple(expected_f):
        raise SurgeryError(f"{kind}: identification creates doubled faces (f={fv}, expected {tuple(expected_f)})")
    rep = validate_normal(out, max_problems=3)
    if not rep.ok:
        raise SurgeryError(f"{kind}: result is not a normal pseudomanifold: " + "; ".join(rep.problems))
    return out


def _identify(K: Complex3, psi: FacetBijection, kind: str) -> Complex3:
    _require(check_admissible(K, psi, kind), kind)
    merge = {b: a for a, b in psi.pairing if a != b}
    facets = [tuple(merge.get(x, x) for x in f) for f in K.facets
              if f not in (psi.source_facet, psi.target_facet)]
    try:
        out = Complex3(facets)
    except ComplexError as exc:
        raise SurgeryError(f"{kind}: {exc}") from None
    dv, de = _merged(kind)
    f0, f1, f2, f3 = K.f_vector().counts()
    return _check_result(out, (f0 - dv, f1 - de, f2 - 4, f3 - 2), kind)


def _merged(kind):
    return _MERGED[kind]


def handle_addition(K: Complex3, psi: FacetBijection) -> Complex3:
    """Identify two far-apart facets of one complex; g2 rises by 10."""
    return _identify(K, psi, HANDLE)


def vertex_folding(K: Complex3, psi: FacetBijection) -> Complex3:
    """Identify two facets meeting in the fixed vertex; g2 rises by 6."""
    return _identify(K, psi, VERTEX_FOLD)


def edge_folding(K: Complex3, psi: FacetBijection) -> Complex3:
    """Identify two facets meeting in the fixed edge; g2 rises by 3."""
    return _identify(K, psi, EDGE_FOLD)


def _lower_first(K1, K2) -> bool:
    return (K1.vertices[0], K1.sorted_facets()) <= (K2.vertices[0], K2.sorted_facets())


def connected_sum(K1: Complex3, psi: FacetBijection, K2: Complex3, keep_labels: bool = False) -> Complex3:
    """Glue K1 and K2 along psi (a facet of K1 onto a facet of K2) and drop the facet.

    The complex with the lexicographically lower labels keeps them; the other
    one's remaining vertices get fresh labels in increasing order.  With
    ``keep_labels`` K1 keeps its labels and K2's other vertices keep theirs,
    which must then not clash with K1.
    """
    s1, s2 = psi.source_facet, psi.target_facet
    if s1 not in K1.facets or s2 not in K2.facets:
        raise SurgeryError("facet not in complex")
    if not keep_labels and not _lower_first(K1, K2):
        inv = FacetBijection.from_pairs({b: a for a, b in psi.pairing})
        return connected_sum(K2, inv, K1)
    to_s1 = {b: a for a, b in psi.pairing}
    rest = [v for v in K2.vertices if v not in to_s1]
    if keep_labels:
        clash = set(rest) & set(K1.vertices)
        if clash:
            raise SurgeryError(f"labels {sorted(clash)} used in both complexes")
        relabel = {v: v for v in rest}
    else:
        relabel = dict(zip(rest, K1.fresh_labels(len(rest))))
    relabel.update(to_s1)
    facets = [f for f in K1.facets if f != s1]
    facets += [tuple(relabel[x] for x in f) for f in K2.facets if f != s2]
    out = Complex3(facets)
    a, b = K1.f_vector().counts(), K2.f_vector().counts()
    expected = (a[0] + b[0] - 4, a[1] + b[1] - 6, a[2] + b[2] - 4, a[3] + b[3] - 2)
    return _check_result(out, expected, SUM)


# -- cutting along the boundary of a missing tetrahedron --------------------------


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _side_classes(K: Complex3, sigma: tuple, dup: list):
    """Assign each facet around the vertices in ``dup`` to one of two global sides.

    Returns a dict facet -> 0/1 (side 0 holds the smallest such facet).  Local
    sides come from the link separation at each vertex; facets containing
    several duplicated vertices tie their local sides together.
    """
    local = {}
    for x in dup:
        sep = separates_link(K, x, tuple(y for y in sigma if y != x))
        if not sep.separates:
            raise SurgeryError(f"boundary of {sigma} does not separate lk({x})")
        for i, side in enumerate(sep.sides):
            for tri in side:
                local[(x, face((x,) + tri))] = i
    uf = _UnionFind()
    for x in dup:
        uf.find((x, 0))
        uf.find((x, 1))
    touched = sorted({f for x in dup for f in K.facets_containing((x,))})
    for f in touched:
        nodes = [(x, local[(x, f)]) for x in dup if x in f]
        for n in nodes[1:]:
            uf.union(nodes[0], n)
    for x in dup:
        if uf.find((x, 0)) == uf.find((x, 1)):
            # Locate a pair of facets that forces both sides of x together.
            conflict = _conflict_pair(K, dup, local, touched, x)
            raise SurgeryError(f"inconsistent sides at {x}: facets {conflict}", conflict)
    first = touched[0]
    x0 = next(x for x in dup if x in first)
    root0 = uf.find((x0, local[(x0, first)]))
    classes = {uf.find(n) for x in dup for n in ((x, 0), (x, 1))}
    if len(classes) != 2:
        raise SurgeryError(f"cut along {sigma} gives {len(classes)} side classes, expected 2")
    return {f: 0 if uf.find((x, local[(x, f)])) == root0 else 1
            for f in touched for x in dup if x in f}


def _conflict_pair(K, dup, local, touched, x):
    # BFS over side nodes recording the facet that linked them.
    graph = {}
    for f in touched:
        nodes = [(y, local[(y, f)]) for y in dup if y in f]
        for a, b in combinations(nodes, 2):
            graph.setdefault(a, []).append((b, f))
            graph.setdefault(b, []).append((a, f))
    prev = {(x, 0): None}
    queue = deque([(x, 0)])
    while queue:
        n = queue.popleft()
        for m, f in graph.get(n, []):
            if m not in prev:
                prev[m] = (n, f)
                queue.append(m)
    facets = []
    n = (x, 1)
    while prev.get(n):
        n, f = prev[n]
        facets.append(f)
    return facets[:2] if len(facets) >= 2 else facets


def _missing(K: Complex3, sigma) -> tuple:
    s = face(sigma)
    if len(s) != 4 or s in K.facets or not all(t in K.triangles for t in combinations(s, 3)):
        raise SurgeryError(f"{s} is not a missing tetrahedron")
    return s


def _cut(K: Complex3, sigma: tuple, dup: list, fresh: dict):
    """Facets of K with side-1 copies of the ``dup`` vertices renamed by ``fresh``."""
    sides = _side_classes(K, sigma, dup)
    out = []
    for f in K.facets:
        if sides.get(f) == 1:
            out.append(tuple(fresh.get(x, x) for x in f))
        else:
            out.append(f)
    return out, sides


@dataclass
class HandleWitness:
    """Cutting along the boundary of ``tetra`` leaves the complex connected."""
    tetra: tuple
    fresh: dict

    def unhandled(self, K: Complex3) -> Complex3:
        """Undo a handle addition: duplicate the four vertices and fill both copies."""
        facets, _ = _cut(K, self.tetra, list(self.tetra), self.fresh)
        facets += [self.tetra, tuple(self.fresh[x] for x in self.tetra)]
        out = Complex3(facets)
        f0, f1, f2, f3 = K.f_vector().counts()
        return _check_result(out, (f0 + 4, f1 + 6, f2 + 4, f3 + 2), "HandleUnfolding")

    def to_json(self) -> dict:
        return {"tetra": list(self.tetra), "fresh": {str(k): v for k, v in sorted(self.fresh.items())}}


def split_connected_sum(K: Complex3, sigma):
    """Cut K along the boundary of a missing tetrahedron.

    Returns ``(part, other, psi)`` where ``connected_sum(part, psi, other,
    keep_labels=True)`` rebuilds K, or a :class:`HandleWitness` when the cut
    does not disconnect K.
    """
    s = _missing(K, sigma)
    fresh = dict(zip(s, K.fresh_labels(4)))
    facets, _ = _cut(K, s, list(s), fresh)
    # Components of the facet graph once the four boundary triangles are cut.
    cut_tris = {t for t in combinations(s, 3)} | {face(fresh[x] for x in t) for t in combinations(s, 3)}
    by_tri = {}
    for f in facets:
        for t in combinations(f, 3):
            if t not in cut_tris:
                by_tri.setdefault(t, []).append(f)
    start = min(facets)
    seen = {start}
    queue = deque([start])
    while queue:
        f = queue.popleft()
        for t in combinations(f, 3):
            for g in by_tri.get(t, ()):
                if g not in seen:
                    seen.add(g)
                    queue.append(g)
    if len(seen) == len(facets):
        return HandleWitness(s, fresh)
    other = [f for f in facets if f not in seen]
    copy = tuple(fresh[x] for x in s)
    # The half that still carries the original labels of sigma keeps them.
    if any(x in s for f in seen for x in f):
        part, rest = list(seen) + [s], other + [copy]
    else:
        part, rest = other + [s], list(seen) + [copy]
    P, Q = Complex3(part), Complex3(rest)
    for piece in (P, Q):
        rep = validate_normal(piece, max_problems=3)
        if not rep.ok:
            raise SurgeryError("split piece is not a normal pseudomanifold: " + "; ".join(rep.problems))
    if P.g2() + Q.g2() != K.g2():  # pragma: no cover - follows from the face counts
        raise AssertionError("g2 not additive over the split")
    psi = FacetBijection.from_pairs({x: fresh[x] for x in s})
    return P, Q, psi


def vertex_unfolding(K: Complex3, sigma, apex: int):
    """Undo a vertex folding at ``apex``; returns ``(complex, psi)`` with g2 lower by 6.

    ``vertex_folding(result, psi)`` gives back K exactly.
    """
    s = _missing(K, sigma)
    if apex not in s:
        raise SurgeryError(f"apex {apex} not in {s}")
    if separates_link(K, apex, tuple(y for y in s if y != apex)).separates:
        raise SurgeryError(f"boundary of the opposite triangle separates lk({apex})")
    others = [x for x in s if x != apex]
    fresh = dict(zip(others, K.fresh_labels(3)))
    facets, _ = _cut(K, s, others, fresh)
    facets += [s, face([apex] + [fresh[x] for x in others])]
    out = Complex3(facets)
    f0, f1, f2, f3 = K.f_vector().counts()
    out = _check_result(out, (f0 + 3, f1 + 6, f2 + 4, f3 + 2), "VertexUnfolding")
    psi = FacetBijection.from_pairs({apex: apex, **fresh})
    return out, psi


def edge_unfolding(K: Complex3, sigma, edge):
    """Undo an edge folding at ``edge``; returns ``(complex, psi)`` with g2 lower by 3."""
    s = _missing(K, sigma)
    u, v = face(edge)
    if u not in s or v not in s:
        raise SurgeryError(f"edge {(u, v)} not in {s}")
    for x in (u, v):
        sep = separates_link(K, x, tuple(y for y in s if y != x))
        if sep.separates or sep.neighborhood != MOEBIUS:
            raise SurgeryError(f"cycle opposite {x} is not one-sided in lk({x})")
    others = [x for x in s if x not in (u, v)]
    fresh = dict(zip(others, K.fresh_labels(2)))
    facets, _ = _cut(K, s, others, fresh)
    facets += [s, face([u, v] + [fresh[x] for x in others])]
    out = Complex3(facets)
    f0, f1, f2, f3 = K.f_vector().counts()
    out = _check_result(out, (f0 + 2, f1 + 5, f2 + 4, f3 + 2), "EdgeUnfolding")
    psi = FacetBijection.from_pairs({u: u, v: v, **fresh})
    return out, psi
