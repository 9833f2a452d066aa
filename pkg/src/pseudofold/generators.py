"""Deterministic seed complexes: stacked spheres, handle and fold examples,
the sharp one- and two-singularity examples, and two small test surfaces."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, permutations

from .complex import Complex3, Surface2, classify_surface, face
from .surgery import (
    FacetBijection,
    SurgeryError,
    check_admissible,
    connected_sum,
    edge_folding,
    handle_addition,
    vertex_folding,
    EDGE_FOLD,
    HANDLE,
    VERTEX_FOLD,
)

KINDS = ("boundary", "chain", "handle", "sharp1", "sharp2", "rp2", "torus", "suspension")
MAX_SEARCH = 40


class GeneratorError(ValueError):
    pass


@dataclass
class GeneratorSpec:
    kind: str
    n: int = 1
    seed: int = 0
    orientable: bool = True
    meta: dict = field(default_factory=dict)


def boundary_4simplex(labels=range(5)) -> Complex3:
    return Complex3(combinations(tuple(labels), 4))


def stacked_ball_boundary(simplices) -> Complex3:
    """Boundary of a 4-ball given by its 4-simplices (each a 5-set)."""
    count = {}
    for s in simplices:
        for f in combinations(sorted(s), 4):
            count[f] = count.get(f, 0) + 1
    return Complex3(f for f, c in count.items() if c == 1)


def chain_sum(k: int) -> Complex3:
    """k copies of the boundary of the 4-simplex summed along a path (k + 4 vertices)."""
    if k < 1:
        raise GeneratorError("chain needs at least one copy")
    return stacked_ball_boundary([range(i, i + 5) for i in range(k)])


def handle_example() -> tuple:
    """A manifold with g2 = 10: a chain closed up by one handle addition.

    Returns ``(complex, meta)`` with the chain length used.
    """
    for k in range(2, MAX_SEARCH):
        K = chain_sum(k)
        n = k + 4
        src = (0, 1, 2, 3)
        tgt = (n - 4, n - 3, n - 2, n - 1)
        for perm in permutations(tgt):
            psi = FacetBijection.from_pairs(zip(src, perm))
            if check_admissible(K, psi, HANDLE).ok:
                return handle_addition(K, psi), {"chain_length": k, "psi": psi.to_text()}
    raise GeneratorError(f"no admissible handle pair up to chain length {MAX_SEARCH}")


def vertex_fold_block(orientable: bool = True) -> tuple:
    """A single vertex folding of a stacked sphere; vertex 0 gets a torus (or Klein bottle) link."""
    for k in range(2, MAX_SEARCH):
        K = stacked_ball_boundary([(0, i, i + 1, i + 2, i + 3) for i in range(1, k + 1)])
        src = (1, 2, 3)
        tgt = (k + 1, k + 2, k + 3)
        for perm in permutations(tgt):
            psi = FacetBijection.from_pairs([(0, 0), *zip(src, perm)])
            if not check_admissible(K, psi, VERTEX_FOLD).ok:
                continue
            try:
                out = vertex_folding(K, psi)
            except SurgeryError:
                continue
            if classify_surface(out.vertex_link(0)).orientable == orientable:
                return out, {"block_length": k, "psi": psi.to_text()}
    raise GeneratorError(f"no admissible vertex folding up to block length {MAX_SEARCH}")


def edge_fold_block() -> tuple:
    """A single edge folding of a stacked sphere at edge 01; both endpoints get RP2 links."""
    for k in range(2, MAX_SEARCH):
        K = stacked_ball_boundary([(0, 1, i, i + 1, i + 2) for i in range(2, k + 2)])
        src = (2, 3)
        tgt = (k + 2, k + 3)
        for perm in permutations(tgt):
            psi = FacetBijection.from_pairs([(0, 0), (1, 1), *zip(src, perm)])
            if not check_admissible(K, psi, EDGE_FOLD).ok:
                continue
            try:
                return edge_folding(K, psi), {"block_length": k, "psi": psi.to_text()}
            except SurgeryError:
                continue
    raise GeneratorError(f"no admissible edge folding up to block length {MAX_SEARCH}")


def sum_at_vertex(K: Complex3, v: int, B: Complex3, x: int) -> Complex3:
    """Connected sum of K and B identifying v with x, at the smallest facets through them."""
    f1 = K.facets_containing((v,))[0]
    f2 = B.facets_containing((x,))[0]
    others1 = [y for y in f1 if y != v]
    others2 = [y for y in f2 if y != x]
    psi = FacetBijection.from_pairs([(v, x), *zip(others1, others2)])
    return connected_sum(K, psi, B)


def sharp_one_singularity(n: int, orientable: bool = True) -> tuple:
    """The handle example summed with n folded blocks at vertex 0; g2 = 10 + 6n."""
    if n < 1:
        raise GeneratorError("n must be at least 1")
    K, meta = handle_example()
    block, bmeta = vertex_fold_block(orientable)
    for _ in range(n):
        K = sum_at_vertex(K, 0, block, 0)
    return K, {"singular_vertex": 0, "handle": meta, "block": bmeta}


def sharp_two_singularities(m: int) -> tuple:
    """An (m-1)-handle singular complex (or the handle example for m = 1) summed with
    an edge-folded block at its vertex 0; g2 = 7 + 6m."""
    if m < 1:
        raise GeneratorError("m must be at least 1")
    if m == 1:
        K, meta = handle_example()
    else:
        K, meta = sharp_one_singularity(m - 1)
    block, bmeta = edge_fold_block()
    K = sum_at_vertex(K, 0, block, 0)
    return K, {"singular_vertex": 0, "base": meta, "block": bmeta}


def rp2_6() -> Surface2:
    """The 6-vertex real projective plane."""
    return Surface2([(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
                     (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5)])


def torus_7() -> Surface2:
    """The 7-vertex torus."""
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return Surface2(tris)


def suspension(S: Surface2) -> Complex3:
    top = max(S.vertices) + 1
    return Complex3([(top,) + t for t in S.triangles] + [(top + 1,) + t for t in S.triangles])


def random_relabel(K: Complex3, seed: int) -> Complex3:
    rng = random.Random(seed)
    labels = list(K.vertices)
    shuffled = labels[:]
    rng.shuffle(shuffled)
    return K.relabel(dict(zip(labels, shuffled)))


def inflate(K: Complex3, steps: int, seed: int) -> Complex3:
    """Apply random bistellar 1-moves and central retriangulations (g2 never drops)."""
    from .moves import MoveError, bistellar_1_move, central_retriangulation

    rng = random.Random(seed)
    for _ in range(steps):
        if rng.random() < 0.5:
            tris = sorted(K.triangles)
            rng.shuffle(tris)
            for t in tris:
                try:
                    K, _ = bistellar_1_move(K, *t)
                    break
                except MoveError:
                    continue
        else:
            e = rng.choice(sorted(K.edges))
            K, _ = central_retriangulation(K, *e)
    return K


def generate(spec: GeneratorSpec):
    """Build the complex (or surface) described by ``spec``; returns ``(object, meta)``."""
    kind = spec.kind
    if kind == "boundary":
        return boundary_4simplex(), {}
    if kind == "chain":
        if spec.n < 2:
            raise GeneratorError("chain needs k >= 2")
        return chain_sum(spec.n), {"copies": spec.n}
    if kind == "handle":
        return handle_example()
    if kind == "sharp1":
        return sharp_one_singularity(spec.n, spec.orientable)
    if kind == "sharp2":
        return sharp_two_singularities(spec.n)
    if kind == "rp2":
        return rp2_6(), {}
    if kind == "torus":
        return torus_7(), {}
    if kind == "suspension":
        return suspension(rp2_6()), {}
    raise GeneratorError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")


__all__ = [
    "GeneratorSpec", "GeneratorError", "generate", "boundary_4simplex", "chain_sum",
    "handle_example", "vertex_fold_block", "edge_fold_block", "sharp_one_singularity",
    "sharp_two_singularities", "rp2_6", "torus_7", "suspension", "inflate", "random_relabel",
    "stacked_ball_boundary", "sum_at_vertex",
]
