"""Local g2-changing moves: bistellar flips, edge contraction and expansion,
central retriangulation of an edge star, and the combined moves C, C' and D.

Every move returns ``(new_complex, MoveRecord)``.  The record's parameters are
enough to re-apply the move with :func:`apply_record`, and its ``g2_delta`` is
recomputed from the result and checked against the expected change.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .complex import Complex3, ComplexError, classify_surface, cycle_order, face, validate_normal

KINDS = (
    "Bistellar1", "Bistellar2", "EdgeContraction", "EdgeExpansion",
    "CentralRetriangulation", "OpC", "OpCPrime", "OpD",
)


class MoveError(ComplexError):
    """A move's precondition failed, or its result is not a normal pseudomanifold."""


@dataclass
class MoveRecord:
    kind: str
    params: dict
    fresh_labels: list = field(default_factory=list)
    g2_delta: int = 0
    steps: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "params": self.params,
            "fresh_labels": list(self.fresh_labels),
            "g2_delta": self.g2_delta,
        }
        if self.steps:
            out["steps"] = [s.to_json() for s in self.steps]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "MoveRecord":
        return cls(
            kind=data["kind"],
            params=data["params"],
            fresh_labels=list(data.get("fresh_labels", [])),
            g2_delta=data.get("g2_delta", 0),
            steps=[cls.from_json(s) for s in data.get("steps", [])],
        )


def _finish(K: Complex3, remove, add, kind: str, params: dict, expected_delta,
            fresh=(), min_vertices: int = 5):
    try:
        out = K.replace_facets(remove, add)
    except ComplexError as exc:
        raise MoveError(f"{kind}: {exc}") from None
    if len(out.vertices) < min_vertices:
        raise MoveError(f"{kind}: result has only {len(out.vertices)} vertices")
    rep = validate_normal(out, max_problems=3)
    if not rep.ok:
        raise MoveError(f"{kind}: result is not a normal pseudomanifold: " + "; ".join(rep.problems))
    delta = out.g2() - K.g2()
    if expected_delta is not None and delta != expected_delta:  # pragma: no cover - would be a bug
        raise AssertionError(f"{kind}: g2 changed by {delta}, expected {expected_delta}")
    return out, MoveRecord(kind, params, sorted(fresh), delta)


def _is_nonsingular(K: Complex3, v: int) -> bool:
    return classify_surface(K.vertex_link(v)).is_sphere


# -- bistellar flips ----------------------------------------------------------

def bistellar_2_move(K: Complex3, u: int, v: int):
    """Replace the three facets around a degree-3 edge uv by uabc and vabc."""
    e = face((u, v))
    if e not in K.edges:
        raise MoveError(f"Bistellar2: edge {e} not in complex")
    if K.edge_degree(u, v) != 3:
        raise MoveError(f"Bistellar2: edge {e} has degree {K.edge_degree(u, v)}, need 3")
    a, b, c = sorted(set().union(*K.edge_link_pairs(u, v)))
    if (a, b, c) in K.triangles:
        raise MoveError(f"Bistellar2: triangle {(a, b, c)} already present")
    remove = K.facets_containing(e)
    add = [(u, a, b, c), (v, a, b, c)]
    return _finish(K, remove, add, "Bistellar2",
                   {"edge": list(e), "triangle": [a, b, c]}, -1)


def bistellar_1_move(K: Complex3, a: int, b: int, c: int):
    """Replace the two facets around triangle abc by three facets around a new edge uv."""
    tri = face((a, b, c))
    if tri not in K.triangles:
        raise MoveError(f"Bistellar1: triangle {tri} not in complex")
    lk = K.triangle_link(tri)
    if len(lk) != 2:
        raise MoveError(f"Bistellar1: triangle {tri} lies in {len(lk)} facets")
    u, v = sorted(lk)
    if (u, v) in K.edges:
        raise MoveError(f"Bistellar1: edge {(u, v)} already present")
    a, b, c = tri
    remove = [(u, a, b, c), (v, a, b, c)]
    add = [(u, v, a, b), (u, v, b, c), (u, v, a, c)]
    return _finish(K, remove, add, "Bistellar1",
                   {"triangle": list(tri), "edge": [u, v]}, +1)


# -- edge contraction and expansion -------------------------------------------

def link_condition(K: Complex3, u: int, v: int) -> bool:
    """lk(u) and lk(v) meet exactly in lk(uv)."""
    pairs = K.edge_link_pairs(u, v)
    lk_uv_vertices = set().union(*pairs)
    if (K.neighbors(u) & K.neighbors(v)) != lk_uv_vertices:
        return False
    lk_uv_edges = {face(p) for p in pairs}
    lu = K.vertex_link(u)
    lv = K.vertex_link(v)
    common_edges = {e for e in lu.edges if v not in e and lv.has_edge(*e)}
    if common_edges != lk_uv_edges:
        return False
    return not any(v not in t for t in lu.triangles & lv.triangles)


def default_survivor(K: Complex3, u: int, v: int) -> int:
    su, sv = not _is_nonsingular(K, u), not _is_nonsingular(K, v)
    if su and not sv:
        return u
    if sv and not su:
        return v
    return min(u, v)


def edge_contraction(K: Complex3, u: int, v: int, w: int | None = None):
    """Identify u and v into a single vertex ``w`` (default: see :func:`default_survivor`)."""
    e = face((u, v))
    if e not in K.edges:
        raise MoveError(f"EdgeContraction: edge {e} not in complex")
    if w is None:
        w = default_survivor(K, u, v)
    if w not in (u, v) and w in K.vertices:
        raise MoveError(f"EdgeContraction: label {w} already in use")
    if not link_condition(K, u, v):
        raise MoveError(f"EdgeContraction: link condition fails for {e}")
    n = K.edge_degree(u, v)
    remove = set(K.facets_containing((u,))) | set(K.facets_containing((v,)))
    add = [tuple(w if x in (u, v) else x for x in f) for f in remove if not (u in f and v in f)]
    fresh = [w] if w not in (u, v) else []
    return _finish(K, remove, add, "EdgeContraction",
                   {"edge": list(e), "survivor": w}, -(n - 3), fresh)


def _side_chi(triangles) -> int:
    vs = set()
    es = set()
    for t in triangles:
        vs.update(t)
        es.update(combinations(t, 2))
    return len(vs) - len(es) + len(triangles)


def cycle_sides(S, cycle):
    """Split surface ``S`` along ``cycle``; returns the list of triangle components."""
    n = len(cycle)
    if n < 3 or len(set(cycle)) != n:
        raise MoveError(f"bad cycle {cycle}")
    cyc_edges = [face((cycle[i], cycle[(i + 1) % n])) for i in range(n)]
    for e in cyc_edges:
        if not S.has_edge(*e):
            raise MoveError(f"cycle edge {e} not in the link")
    return S.triangle_components(blocked_edges=cyc_edges)


def is_disc(triangles) -> bool:
    return _side_chi(triangles) == 1


def edge_expansion(K: Complex3, w: int, cycle, u: int | None = None, v: int | None = None,
                   u_side=None):
    """Split vertex w into an edge uv whose link is ``cycle``.

    ``cycle`` must separate lk(w) into two sides, at least one a disc.  The side
    containing triangle ``u_side`` (default: the side holding the smallest
    triangle of lk(w)) is coned from u, the other from v.  Labels default to
    fresh ones; either may reuse ``w``.
    """
    if w not in K.vertices:
        raise MoveError(f"EdgeExpansion: vertex {w} not in complex")
    cycle = [int(x) for x in cycle]
    lk = K.vertex_link(w)
    sides = cycle_sides(lk, cycle)
    if len(sides) != 2:
        raise MoveError(f"EdgeExpansion: cycle {cycle} does not separate lk({w})")
    if not (is_disc(sides[0]) or is_disc(sides[1])):
        raise MoveError(f"EdgeExpansion: neither side of {cycle} is a disc")
    fresh = []
    if u is None or v is None:
        new = K.fresh_labels(2)
        u = new[0] if u is None else u
        v = new[1] if v is None else v
    if u == v:
        raise MoveError("EdgeExpansion: u and v must differ")
    for x in (u, v):
        if x != w:
            if x in K.vertices:
                raise MoveError(f"EdgeExpansion: label {x} already in use")
            fresh.append(x)
    if u_side is None:
        u_idx = 0 if min(sides[0]) < min(sides[1]) else 1
    else:
        t = face(u_side)
        if t in sides[0]:
            u_idx = 0
        elif t in sides[1]:
            u_idx = 1
        else:
            raise MoveError(f"EdgeExpansion: triangle {t} not in lk({w})")
    n = len(cycle)
    add = [(u,) + t for t in sides[u_idx]] + [(v,) + t for t in sides[1 - u_idx]]
    add += [(u, v, cycle[i], cycle[(i + 1) % n]) for i in range(n)]
    params = {"vertex": w, "cycle": cycle, "u": u, "v": v,
              "u_side": list(min(sides[u_idx]))}
    return _finish(K, K.facets_containing((w,)), add, "EdgeExpansion", params, n - 3, fresh)


def contraction_inverse(K: Complex3, rec: MoveRecord) -> MoveRecord:
    """An EdgeExpansion record undoing the contraction ``rec`` applied to ``K``."""
    u, v = rec.params["edge"]
    w = rec.params["survivor"]
    cycle = K.edge_link(u, v)
    u_tri = min(tuple(x for x in f if x != u) for f in K.facets_containing((u,)) if v not in f)
    params = {"vertex": w, "cycle": cycle, "u": u, "v": v, "u_side": list(u_tri)}
    return MoveRecord("EdgeExpansion", params, [], -rec.g2_delta)


# -- central retriangulation ----------------------------------------------------

def central_retriangulation(K: Complex3, u: int, v: int, w: int | None = None):
    """Replace st(uv) by the cone from a new vertex ``w`` over its boundary."""
    e = face((u, v))
    if e not in K.edges:
        raise MoveError(f"CentralRetriangulation: edge {e} not in complex")
    if w is None:
        w = K.fresh_labels(1)[0]
    elif w in K.vertices:
        raise MoveError(f"CentralRetriangulation: label {w} already in use")
    remove = K.facets_containing(e)
    add = []
    for f in remove:
        a, b = (x for x in f if x not in e)
        add += [(w, u, a, b), (w, v, a, b)]
    n = len(remove)
    return _finish(K, remove, add, "CentralRetriangulation",
                   {"edge": list(e), "center": w}, n - 3, [w])


# -- combined moves C and C' ----------------------------------------------------

def op_C(K: Complex3, w: int, a: int, b: int, c: int, x1: int | None = None,
         x2: int | None = None, x1_side=None):
    """Cut the sphere lk(w) along the missing triangle abc and cone each half.

    Net effect: edge expansion of w along the 3-cycle abc, then the bistellar
    2-move on the new edge.  ``x1`` defaults to ``w`` and ``x2`` to a fresh label.
    """
    tri = face((a, b, c))
    if w not in K.vertices:
        raise MoveError(f"OpC: vertex {w} not in complex")
    if w in tri:
        raise MoveError("OpC: w lies on the triangle")
    if tri in K.triangles:
        raise MoveError(f"OpC: triangle {tri} already present")
    lk = K.vertex_link(w)
    if not classify_surface(lk).is_sphere:
        raise MoveError(f"OpC: lk({w}) is not a sphere")
    sides = cycle_sides(lk, list(tri))
    if len(sides) != 2:  # pragma: no cover - a 3-cycle always separates a sphere
        raise MoveError("OpC: cycle does not separate")
    if x1 is None:
        x1 = w
    if x2 is None:
        x2 = K.fresh_labels(1, avoid=[x1])[0]
    fresh = []
    for x in (x1, x2):
        if x != w:
            if x in K.vertices:
                raise MoveError(f"OpC: label {x} already in use")
            fresh.append(x)
    if x1 == x2:
        raise MoveError("OpC: x1 and x2 must differ")
    if x1_side is None:
        i1 = 0 if min(sides[0]) < min(sides[1]) else 1
    else:
        t = face(x1_side)
        if t not in sides[0] and t not in sides[1]:
            raise MoveError(f"OpC: triangle {t} not in lk({w})")
        i1 = 0 if t in sides[0] else 1
    add = [(x1,) + t for t in sides[i1]] + [(x2,) + t for t in sides[1 - i1]]
    add += [(x1,) + tri, (x2,) + tri]
    params = {"vertex": w, "triangle": list(tri), "x1": x1, "x2": x2,
              "x1_side": list(min(sides[i1]))}
    return _finish(K, K.facets_containing((w,)), add, "OpC", params, -1, fresh)


def closed_star_faces(K: Complex3, v: int) -> tuple:
    """Vertices, edges and triangles of the closed star of ``v``."""
    fs = K.facets_containing((v,))
    verts = set().union(*fs)
    edges = {e for f in fs for e in combinations(f, 2)}
    tris = {t for f in fs for t in combinations(f, 3)}
    return verts, edges, tris


def op_C_prime(K: Complex3, u: int, v: int, label: int | None = None):
    """Merge two sphere-link vertices whose stars meet in exactly one triangle.

    The union of the two stars is replaced by the cone from ``label``
    (default ``u``) over its boundary.
    """
    if u == v or u not in K.vertices or v not in K.vertices:
        raise MoveError(f"OpCPrime: bad vertices {u}, {v}")
    if face((u, v)) in K.edges:
        raise MoveError(f"OpCPrime: edge {face((u, v))} present")
    for x in (u, v):
        if not _is_nonsingular(K, x):
            raise MoveError(f"OpCPrime: vertex {x} is singular")
    vu, eu, tu = closed_star_faces(K, u)
    vv, ev, tv = closed_star_faces(K, v)
    common_t = tu & tv
    if len(common_t) != 1:
        raise MoveError(f"OpCPrime: stars share {len(common_t)} triangles, need 1")
    tri = next(iter(common_t))
    if (vu & vv) != set(tri) or (eu & ev) != set(combinations(tri, 2)):
        raise MoveError("OpCPrime: stars meet in more than a triangle")
    if label is None:
        label = u
    fresh = []
    if label not in (u, v):
        if label in K.vertices:
            raise MoveError(f"OpCPrime: label {label} already in use")
        fresh.append(label)
    remove = set(K.facets_containing((u,))) | set(K.facets_containing((v,)))
    add = [(label,) + tuple(x for x in f if x not in (u, v)) for f in remove
           if set(f) != {u, *tri} and set(f) != {v, *tri}]
    params = {"u": u, "v": v, "label": label, "triangle": list(tri)}
    return _finish(K, remove, add, "OpCPrime", params, +1, fresh)


# -- the composite move D -------------------------------------------------------

def op_D(K: Complex3, x: int, y: int, p: int, q: int, center: int | None = None,
         survivor: int | None = None):
    """Central retriangulation of st(xy) followed by contraction of the edge pq."""
    K1, r1 = central_retriangulation(K, x, y, center)
    K2, r2 = edge_contraction(K1, p, q, survivor)
    params = {"edge": r1.params["edge"], "center": r1.params["center"],
              "contract": r2.params["edge"], "survivor": r2.params["survivor"]}
    fresh = sorted(set(K2.vertices) - set(K.vertices))
    rec = MoveRecord("OpD", params, fresh, K2.g2() - K.g2(), steps=[r1, r2])
    return K2, rec


# -- replay ----------------------------------------------------------------------

def apply_record(K: Complex3, rec: MoveRecord):
    """Re-apply a move from its record; returns ``(complex, record)``."""
    p = rec.params
    kind = rec.kind
    if kind == "Bistellar2":
        return bistellar_2_move(K, *p["edge"])
    if kind == "Bistellar1":
        return bistellar_1_move(K, *p["triangle"])
    if kind == "EdgeContraction":
        return edge_contraction(K, *p["edge"], p.get("survivor"))
    if kind == "EdgeExpansion":
        return edge_expansion(K, p["vertex"], p["cycle"], p.get("u"), p.get("v"), p.get("u_side"))
    if kind == "CentralRetriangulation":
        return central_retriangulation(K, *p["edge"], p.get("center"))
    if kind == "OpC":
        return op_C(K, p["vertex"], *p["triangle"], p.get("x1"), p.get("x2"), p.get("x1_side"))
    if kind == "OpCPrime":
        return op_C_prime(K, p["u"], p["v"], p.get("label"))
    if kind == "OpD":
        return op_D(K, *p["edge"], *p["contract"], p.get("center"), p.get("survivor"))
    raise MoveError(f"unknown move kind {kind!r}")


def inverse_record(K: Complex3, rec: MoveRecord) -> list:
    """Records that undo ``rec`` (which was applied to ``K``), in application order."""
    p = rec.params
    kind = rec.kind
    if kind == "Bistellar2":
        return [MoveRecord("Bistellar1", {"triangle": p["triangle"]}, [], +1)]
    if kind == "Bistellar1":
        return [MoveRecord("Bistellar2", {"edge": p["edge"]}, [], -1)]
    if kind == "EdgeContraction":
        return [contraction_inverse(K, rec)]
    if kind == "EdgeExpansion":
        return [MoveRecord("EdgeContraction",
                           {"edge": sorted([p["u"], p["v"]]), "survivor": p["vertex"]},
                           [], -rec.g2_delta)]
    if kind == "CentralRetriangulation":
        u = p["edge"][0]
        return [MoveRecord("EdgeContraction",
                           {"edge": sorted([u, p["center"]]), "survivor": u}, [], -rec.g2_delta)]
    if kind == "OpC":
        return [MoveRecord("OpCPrime", {"u": p["x1"], "v": p["x2"], "label": p["vertex"]}, [], +1)]
    if kind == "OpCPrime":
        u, v = p["u"], p["v"]
        u_tri = min(tuple(z for z in f if z != u) for f in K.facets_containing((u,))
                    if set(f) != {u, *p["triangle"]})
        return [MoveRecord("OpC", {"vertex": p["label"], "triangle": p["triangle"],
                                   "x1": u, "x2": v, "x1_side": list(u_tri)}, [], -1)]
    if kind == "OpD":
        r1, r2 = rec.steps
        K1, _ = apply_record(K, r1)
        return inverse_record(K1, r2) + inverse_record(K, r1)
    raise MoveError(f"unknown move kind {kind!r}")


# -- search -----------------------------------------------------------------------

def _contraction_ok_endpoints(K: Complex3, sing: set, u: int, v: int) -> bool:
    return u not in sing or v not in sing


def _singular_set(K: Complex3) -> set:
    return {v for v in K.vertices if not _is_nonsingular(K, v)}


def _try(fn, *args):
    try:
        return fn(*args)
    except MoveError:
        return None


def _scan_A(K, sing):
    for e in sorted(K.edges):
        if K.edge_degree(*e) == 3:
            r = _try(bistellar_2_move, K, *e)
            if r:
                yield r


def _scan_B(K, sing):
    for u, v in sorted(K.edges):
        if K.edge_degree(u, v) <= 3 or (u in sing and v in sing):
            continue
        if not link_condition(K, u, v):
            continue
        r = _try(edge_contraction, K, u, v, default_survivor(K, u, v))
        if r:
            yield r


def missing_triangles_in_link(K: Complex3, w: int) -> list:
    lk = K.vertex_link(w)
    nb = sorted(K.neighbors(w))
    out = []
    for a, b, c in combinations(nb, 3):
        if (a, b, c) in K.triangles:
            continue
        if lk.has_edge(a, b) and lk.has_edge(b, c) and lk.has_edge(a, c):
            out.append((a, b, c))
    return out


def _scan_C(K, sing):
    for w in K.vertices:
        if w in sing:
            continue
        for tri in missing_triangles_in_link(K, w):
            r = _try(op_C, K, w, *tri)
            if r:
                yield r


def _scan_D(K, sing):
    for x, y in sorted(K.edges):
        n = K.edge_degree(x, y)
        K1, r1 = central_retriangulation(K, x, y)
        c = r1.params["center"]
        sing1 = sing  # retriangulation keeps every link type; the center has a sphere link
        cands = sorted({face(e) for e in K1.edges if (x in e or y in e or c in e)}
                       - {face((c, x)), face((c, y))})
        for p, q in cands:
            if K1.edge_degree(p, q) <= n or (p in sing1 and q in sing1):
                continue
            if not link_condition(K1, p, q):
                continue
            r = _try(op_D, K, x, y, p, q, c, default_survivor(K1, p, q))
            if r and r[0].g2() < K.g2():
                yield r


_SCANNERS = {"A": _scan_A, "B": _scan_B, "C": _scan_C, "D": _scan_D}


def find_g2_reducing_move(K: Complex3, mode: str = "all"):
    """First move of the given mode (A, B, C, D or all) that strictly lowers g2, or None."""
    modes = "ABCD" if mode == "all" else mode
    for m in modes:
        if m not in _SCANNERS:
            raise ValueError(f"unknown mode {m!r}")
    sing = _singular_set(K)
    g = K.g2()
    for m in modes:
        for out, rec in _SCANNERS[m](K, sing):
            if out.g2() < g:
                return rec, out
    return None


# -- CLI argument mapping ---------------------------------------------------------

CLI_KINDS = {
    "bistellar2": "Bistellar2", "bistellar1": "Bistellar1", "contract": "EdgeContraction",
    "expand": "EdgeExpansion", "retriangulate": "CentralRetriangulation", "opc": "OpC",
    "opcprime": "OpCPrime", "opd": "OpD",
}


def apply_cli_move(K: Complex3, kind: str, labels: list):
    """Apply a move named on the command line to integer ``labels``."""
    k = CLI_KINDS.get(kind, kind)
    n = len(labels)
    try:
        if k == "Bistellar2" and n == 2:
            return bistellar_2_move(K, *labels)
        if k == "Bistellar1" and n == 3:
            return bistellar_1_move(K, *labels)
        if k == "EdgeContraction" and n in (2, 3):
            return edge_contraction(K, *labels)
        if k == "EdgeExpansion" and n >= 6:
            w, u, v, *cycle = labels
            return edge_expansion(K, w, cycle, u, v)
        if k == "CentralRetriangulation" and n in (2, 3):
            return central_retriangulation(K, *labels)
        if k == "OpC" and n in (4, 6):
            return op_C(K, *labels)
        if k == "OpCPrime" and n in (2, 3):
            return op_C_prime(K, *labels)
        if k == "OpD" and n in (4, 5, 6):
            return op_D(K, *labels)
    except ComplexError as exc:
        raise MoveError(str(exc)) from None
    raise MoveError(f"move {kind!r} does not take {n} labels")
