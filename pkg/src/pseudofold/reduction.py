"""Reduce a complex to boundaries of the 4-simplex and record how to rebuild it.

:func:`decompose` first lowers g2 greedily with local moves, then cuts the
complex open along a missing tetrahedron (a connected-sum split or a vertex
or edge unfolding) and recurses.  The result is a :class:`Certificate`: a
tree whose leaves are 4-simplex boundaries and whose inner nodes are the
constructive operations that rebuild the input, label for label.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .complex import Complex3, ComplexError, classify_surface, is_isomorphic, singular_vertices
from .detection import T1, T2, T3, T4, T5, classify_all
from .generators import boundary_4simplex
from .moves import MoveRecord, apply_record, find_g2_reducing_move, inverse_record
from .surgery import (
    FacetBijection,
    HandleWitness,
    SurgeryError,
    connected_sum,
    edge_folding,
    edge_unfolding,
    split_connected_sum,
    vertex_folding,
    vertex_unfolding,
)

LEAF = "leaf"
SUM = "sum"
VFOLD = "vfold"
EFOLD = "efold"
BOUNDARY_F = (5, 10, 10, 5)


class NonReducible(Exception):
    """The engine got stuck; ``complex`` is the sub-complex it could not reduce."""

    def __init__(self, message: str, complex: Complex3 | None = None):
        super().__init__(message)
        self.complex = complex


class OutOfHypothesis(NonReducible):
    """Strict mode refused an input outside the proven g2 bounds."""


class ReplayError(ComplexError):
    pass


@dataclass
class Node:
    op: str
    params: dict
    g2_before: int
    g2_after: int
    f_vector: tuple
    children: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "op": self.op,
            "params": self.params,
            "g2_before": self.g2_before,
            "g2_after": self.g2_after,
            "f_vector": list(self.f_vector),
            "children": [c.to_json() for c in self.children],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Node":
        try:
            return cls(data["op"], data["params"], data["g2_before"], data["g2_after"],
                       tuple(data["f_vector"]), [cls.from_json(c) for c in data["children"]])
        except (KeyError, TypeError) as exc:
            raise ReplayError(f"malformed certificate node: {exc}") from None

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass
class Certificate:
    root: Node

    def counts(self) -> Counter:
        return Counter(n.op for n in self.root.walk())

    @property
    def vertex_folds(self) -> int:
        return self.counts()[VFOLD]

    @property
    def edge_folds(self) -> int:
        return self.counts()[EFOLD]

    def summary(self) -> dict:
        return dict(sorted(self.counts().items()))

    def to_json(self) -> dict:
        return {"summary": self.summary(), "root": self.root.to_json()}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        if not isinstance(data, dict) or "root" not in data:
            raise ReplayError("certificate must be an object with a root node")
        return cls(Node.from_json(data["root"]))

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        try:
            return cls.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ReplayError(f"line {exc.lineno}: {exc.msg}") from None


# -- singularity profile ------------------------------------------------------------


@dataclass
class Profile:
    """Which reduction theorem's setting a complex falls into."""
    kind: str  # "manifold", "one", "two" or "other"
    handles: int = 0  # n for one singularity, m for two
    bound: int | None = None
    singular: list = field(default_factory=list)

    @property
    def expected_folds(self):
        if self.kind == "manifold":
            return 0, 0
        if self.kind == "one":
            return self.handles, 0
        if self.kind == "two":
            return self.handles - 1, 1
        return None

    def to_json(self) -> dict:
        return {"kind": self.kind, "handles": self.handles, "g2_bound": self.bound,
                "singular": [[v, st.name] for v, st in self.singular]}


def singularity_profile(K: Complex3) -> Profile:
    sing = singular_vertices(K)
    if not sing:
        return Profile("manifold", 0, 9, sing)
    if len(sing) == 1:
        st = sing[0][1]
        if st.euler_characteristic % 2 == 0:
            n = (2 - st.euler_characteristic) // 2
            return Profile("one", n, 9 + 6 * n, sing)
        return Profile("other", 0, None, sing)
    if len(sing) == 2:
        a, b = (st for _, st in sing)
        if not a.orientable and not b.orientable:
            # one link must be RP2; the other a sum of an odd number of RP2s
            for s1, s2 in ((a, b), (b, a)):
                if s2.genus == 1 and s1.genus % 2 == 1:
                    m = (s1.genus + 1) // 2
                    return Profile("two", m, 6 + 6 * m, sing)
    return Profile("other", 0, None, sing)


# -- descent -------------------------------------------------------------------------


def greedy_descend(K: Complex3, mode: str = "all", max_steps: int = 10_000):
    """Apply g2-lowering moves until none is found; returns ``(fixed_point, records, complexes)``.

    ``complexes[i]`` is the complex that ``records[i]`` was applied to.
    """
    records = []
    chain = []
    for _ in range(max_steps):
        found = find_g2_reducing_move(K, mode)
        if found is None:
            break
        rec, out = found
        records.append(rec)
        chain.append(K)
        K = out
    return K, records, chain


def _is_boundary(K: Complex3) -> bool:
    return K.f_vector().counts() == BOUNDARY_F and is_isomorphic(K, boundary_4simplex(K.vertices)) is not None


def _node_from_move(rec: MoveRecord, before: Complex3, after: Complex3, child: Node) -> Node:
    return Node(rec.kind, rec.params, before.g2(), after.g2(), after.f_vector().counts(), [child])


def decompose(K: Complex3, strict: bool = False, mode: str = "all") -> Certificate:
    """Build a certificate rebuilding K from 4-simplex boundaries.

    Raises :class:`NonReducible` when stuck, or :class:`OutOfHypothesis` in
    strict mode for inputs outside the proven g2 bounds.
    """
    if strict:
        prof = singularity_profile(K)
        if prof.bound is None:
            raise OutOfHypothesis(f"singularity profile not covered: {prof.to_json()}", K)
        if K.g2() > prof.bound:
            raise OutOfHypothesis(
                f"g2 = {K.g2()} exceeds the bound {prof.bound} for profile {prof.kind}", K)
    return Certificate(_decompose(K, mode))


def _decompose(K: Complex3, mode: str) -> Node:
    fixed, records, chain = greedy_descend(K, mode)
    node = _structural(fixed, mode)
    # Undo the descent: the last move is undone first, so it sits deepest.
    current = fixed
    for rec, before in zip(reversed(records), reversed(chain)):
        for inv in inverse_record(before, rec):
            nxt, _ = apply_record(current, inv)
            node = _node_from_move(inv, current, nxt, node)
            current = nxt
    if current != K:  # pragma: no cover - would be a bug in the inverses
        raise AssertionError("undoing the descent did not rebuild the input")
    return node


def _structural(K: Complex3, mode: str) -> Node:
    if _is_boundary(K):
        return Node(LEAF, {"labels": list(K.vertices)}, 0, 0, BOUNDARY_F)
    reports = classify_all(K)
    if not reports:
        raise NonReducible(
            f"no g2-lowering move and no missing tetrahedron (f={K.f_vector().counts()}, g2={K.g2()})", K)
    by_tag = {}
    for r in reports:
        by_tag.setdefault(r.type_tag, []).append(r)
    handles = []
    for tag in (T1, T2, T4, T3, T5):
        for r in by_tag.get(tag, ()):
            try:
                if tag == T4:
                    out, psi = vertex_unfolding(K, r.tetra, r.apexes[0])
                    child = _decompose(out, mode)
                    return Node(VFOLD, {"psi": psi.to_text()}, out.g2(), K.g2(),
                                K.f_vector().counts(), [child])
                if tag == T3:
                    out, psi = edge_unfolding(K, r.tetra, r.apexes)
                    child = _decompose(out, mode)
                    return Node(EFOLD, {"psi": psi.to_text()}, out.g2(), K.g2(),
                                K.f_vector().counts(), [child])
                res = split_connected_sum(K, r.tetra)
                if isinstance(res, HandleWitness):
                    handles.append(r.tetra)
                    continue
                P, Q, psi = res
                children = [_decompose(P, mode), _decompose(Q, mode)]
                return Node(SUM, {"psi": psi.to_text()}, P.g2() + Q.g2(), K.g2(),
                            K.f_vector().counts(), children)
            except SurgeryError:
                continue
    detail = f"; handle addition required at {handles[0]}" if handles else ""
    raise NonReducible(
        f"no usable missing tetrahedron among {len(reports)} "
        f"(tags {sorted(by_tag)}){detail}", K)


# -- replay and verification --------------------------------------------------------


def _check(node: Node, K: Complex3):
    if K.g2() != node.g2_after:
        raise ReplayError(f"{node.op}: g2 is {K.g2()}, certificate says {node.g2_after}")
    if K.f_vector().counts() != tuple(node.f_vector):
        raise ReplayError(f"{node.op}: f-vector is {K.f_vector().counts()}, certificate says {tuple(node.f_vector)}")
    return K


def replay_node(node: Node) -> Complex3:
    try:
        if node.op == LEAF:
            labels = node.params["labels"]
            if len(labels) != 5 or len(set(labels)) != 5:
                raise ReplayError(f"leaf needs 5 distinct labels, got {labels}")
            return _check(node, boundary_4simplex(labels))
        kids = [replay_node(c) for c in node.children]
        before = sum(k.g2() for k in kids)
        if before != node.g2_before:
            raise ReplayError(f"{node.op}: children have g2 {before}, certificate says {node.g2_before}")
        if node.op == SUM:
            if len(kids) != 2:
                raise ReplayError("sum node needs two children")
            psi = FacetBijection.parse(node.params["psi"])
            return _check(node, connected_sum(kids[0], psi, kids[1], keep_labels=True))
        if len(kids) != 1:
            raise ReplayError(f"{node.op} node needs one child")
        if node.op == VFOLD:
            return _check(node, vertex_folding(kids[0], FacetBijection.parse(node.params["psi"])))
        if node.op == EFOLD:
            return _check(node, edge_folding(kids[0], FacetBijection.parse(node.params["psi"])))
        out, _ = apply_record(kids[0], MoveRecord(node.op, node.params))
        return _check(node, out)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ReplayError):
            raise
        raise ReplayError(f"{node.op}: {exc}") from None


def replay(cert: Certificate) -> Complex3:
    return replay_node(cert.root)


@dataclass
class Verification:
    ok: bool
    problems: list = field(default_factory=list)
    vertex_folds: int = 0
    edge_folds: int = 0
    expected_folds: tuple | None = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "problems": self.problems,
            "vertex_folds": self.vertex_folds,
            "edge_folds": self.edge_folds,
            "expected_folds": list(self.expected_folds) if self.expected_folds else None,
        }


def verify_certificate(K: Complex3, cert: Certificate) -> Verification:
    res = Verification(True, vertex_folds=cert.vertex_folds, edge_folds=cert.edge_folds)
    try:
        out = replay(cert)
    except ComplexError as exc:
        res.ok = False
        res.problems.append(f"replay failed: {exc}")
        return res
    if is_isomorphic(out, K) is None:
        res.ok = False
        res.problems.append("replayed complex is not isomorphic to the input")
    prof = singularity_profile(K)
    expected = prof.expected_folds
    res.expected_folds = expected
    if expected is not None and (res.vertex_folds, res.edge_folds) != expected:
        res.ok = False
        res.problems.append(
            f"fold counts (vertex {res.vertex_folds}, edge {res.edge_folds}) differ from "
            f"the expected (vertex {expected[0]}, edge {expected[1]}) for profile {prof.kind}")
    return res


def link_types(K: Complex3) -> dict:
    return {v: classify_surface(K.vertex_link(v)).name for v in K.vertices}
