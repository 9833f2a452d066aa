"""Command-line entry point.

Exit codes: 0 success or true, 1 false or not reducible, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .complex import (
    ComplexError,
    Surface2,
    classify_surface,
    distinguished_vertex,
    is_isomorphic,
    singular_vertices,
    validate_normal,
)
from .detection import classify_all, missing_tetrahedra, missing_triangles
from .generators import GeneratorError, GeneratorSpec, generate
from .io import read_complex, write_complex
from .moves import apply_cli_move
from .reduction import Certificate, NonReducible, decompose, replay, verify_certificate
from .rigidity import check_g2_stress
from .surgery import (
    FacetBijection,
    HandleWitness,
    connected_sum,
    edge_folding,
    edge_unfolding,
    handle_addition,
    split_connected_sum,
    vertex_folding,
    vertex_unfolding,
)
from .weights import verify_weight_identities

OK, FALSE, INPUT_ERROR = 0, 1, 2
SURGERY_KINDS = ("sum", "handle", "vfold", "efold", "split", "vunfold", "eunfold")


class UsageError(Exception):
    pass


def emit(obj, indent=None):
    print(json.dumps(obj, sort_keys=True, indent=indent))


def _labels(text: str | None) -> list:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad label list {text!r}") from None


def _write(K, path, header=None):
    if path:
        write_complex(K, path, header)


def cmd_generate(args) -> int:
    spec = GeneratorSpec(args.kind, n=args.n, seed=args.seed, orientable=not args.nonorientable)
    obj, meta = generate(spec)
    if isinstance(obj, Surface2):
        doc = {"triangles": [list(t) for t in sorted(obj.triangles)],
               "type": classify_surface(obj).to_json()}
        if args.output:
            Path(args.output).write_text(json.dumps(doc, sort_keys=True) + "\n", encoding="utf-8")
        emit({"kind": args.kind, "surface": doc["type"]})
        return OK
    header = f"kind={args.kind} n={args.n} g2={obj.g2()}"
    if args.output:
        write_complex(obj, args.output, header)
    else:
        sys.stdout.write("".join(" ".join(map(str, f)) + "\n" for f in obj.sorted_facets()))
        return OK
    emit({"kind": args.kind, "f_vector": list(obj.f_vector().counts()), "g2": obj.g2(), "meta": meta})
    return OK


def cmd_validate(args) -> int:
    rep = validate_normal(read_complex(args.input))
    emit(rep.to_json())
    return OK if rep.ok else FALSE


def cmd_analyze(args) -> int:
    K = read_complex(args.input)
    if args.missing:
        emit([r.to_json() for r in classify_all(K)])
        return OK
    if args.weights:
        t = args.t if args.t is not None else distinguished_vertex(K)
        if t is None:
            raise UsageError("complex has no singular vertex; weights need one")
        emit(verify_weight_identities(K, t).to_json())
        return OK
    gi = K.g_invariants()
    rep = validate_normal(K)
    sing = singular_vertices(K) if rep.ok else []
    doc = {
        "valid": rep.ok,
        "f_vector": list(K.f_vector().counts()),
        "h_vector": list(gi.h),
        "g2": gi.g2,
        "singular_vertices": [{"vertex": v, "link": st.to_json()} for v, st in sing],
        "missing_triangles": [list(t) for t in missing_triangles(K)],
        "missing_tetrahedra": [list(t) for t in missing_tetrahedra(K)],
    }
    if sing:
        t = distinguished_vertex(K, sing)
        w = verify_weight_identities(K, t).to_json()
        doc["weights"] = {key: w[key]["ok"] for key in sorted(w) if isinstance(w[key], dict)}
        doc["weights"]["t"] = t
    emit(doc, indent=1)
    return OK


def _psi(args) -> FacetBijection:
    if not args.psi:
        raise UsageError("--psi a:b,c:d,... is required for this kind")
    return FacetBijection.parse(args.psi)


def cmd_apply(args) -> int:
    K = read_complex(args.input)
    kind = args.move
    labels = _labels(args.args)
    if kind not in SURGERY_KINDS:
        out, rec = apply_cli_move(K, kind, labels)
        _write(out, args.output)
        print(json.dumps(rec.to_json(), sort_keys=True))
        return OK
    record = {"kind": kind, "g2_before": K.g2()}
    if kind == "sum":
        if not args.second:
            raise UsageError("sum needs a second complex (--with)")
        psi = _psi(args)
        out = connected_sum(K, psi, read_complex(args.second))
        record["psi"] = psi.to_text()
    elif kind in ("handle", "vfold", "efold"):
        psi = _psi(args)
        fn = {"handle": handle_addition, "vfold": vertex_folding, "efold": edge_folding}[kind]
        out = fn(K, psi)
        record["psi"] = psi.to_text()
    elif kind == "split":
        if len(labels) != 4:
            raise UsageError("split takes the 4 labels of a missing tetrahedron")
        res = split_connected_sum(K, labels)
        if isinstance(res, HandleWitness):
            record["handle_witness"] = res.to_json()
            print(json.dumps(record, sort_keys=True))
            return FALSE
        P, Q, psi = res
        _write(P, args.output)
        _write(Q, args.second)
        record.update(psi=psi.to_text(), g2_after=[P.g2(), Q.g2()])
        print(json.dumps(record, sort_keys=True))
        return OK
    elif kind == "vunfold":
        if len(labels) != 5:
            raise UsageError("vunfold takes the 4 tetrahedron labels then the apex")
        out, psi = vertex_unfolding(K, labels[:4], labels[4])
        record["psi"] = psi.to_text()
    else:
        if len(labels) != 6:
            raise UsageError("eunfold takes the 4 tetrahedron labels then the edge's 2 labels")
        out, psi = edge_unfolding(K, labels[:4], labels[4:])
        record["psi"] = psi.to_text()
    _write(out, args.output)
    record["g2_after"] = out.g2()
    print(json.dumps(record, sort_keys=True))
    return OK


def cmd_reduce(args) -> int:
    K = read_complex(args.input)
    try:
        cert = decompose(K, strict=args.strict)
    except NonReducible as exc:
        emit({"reducible": False, "reason": str(exc)})
        return FALSE
    text = cert.dumps()
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    emit({"reducible": True, "summary": cert.summary()})
    return OK


def _read_cert(path) -> Certificate:
    try:
        return Certificate.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def cmd_replay(args) -> int:
    K = replay(_read_cert(args.certificate))
    _write(K, args.output)
    emit({"f_vector": list(K.f_vector().counts()), "g2": K.g2()})
    return OK


def cmd_verify(args) -> int:
    res = verify_certificate(read_complex(args.input), _read_cert(args.certificate))
    emit(res.to_json())
    return OK if res.ok else FALSE


def cmd_rigidity(args) -> int:
    seeds = _labels(args.seeds)
    if not seeds:
        raise UsageError("--seeds needs at least one integer")
    rep = check_g2_stress(read_complex(args.input), seeds)
    emit(rep.to_json())
    return OK if rep.passed else FALSE


def cmd_iso(args) -> int:
    m = is_isomorphic(read_complex(args.a), read_complex(args.b))
    emit({"isomorphic": m is not None,
          "map": {str(k): v for k, v in sorted(m.items())} if m else None})
    return OK if m else FALSE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pseudofold", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a generated complex")
    g.add_argument("--kind", required=True,
                   help="boundary, chain, handle, sharp1, sharp2, rp2, torus or suspension")
    g.add_argument("--n", type=int, default=1, help="chain length, n for sharp1 or m for sharp2")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--nonorientable", action="store_true", help="Klein-bottle fold blocks")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("validate", help="check the normal pseudomanifold conditions")
    v.add_argument("input")
    v.set_defaults(func=cmd_validate)

    a = sub.add_parser("analyze", help="f-vector, g2, singularities, missing faces, weights")
    a.add_argument("input")
    a.add_argument("--missing", action="store_true", help="print missing-tetrahedron reports")
    a.add_argument("--weights", action="store_true", help="print the edge-weight report")
    a.add_argument("--t", type=int, help="base vertex for --weights")
    a.set_defaults(func=cmd_analyze)

    ap = sub.add_parser("apply", help="apply a move or a surgery")
    ap.add_argument("--move", required=True)
    ap.add_argument("--args", default="")
    ap.add_argument("--psi", help="vertex pairs a:b,c:d,...")
    ap.add_argument("--with", dest="second", help="second complex (sum) or second output (split)")
    ap.add_argument("input")
    ap.add_argument("-o", "--output")
    ap.set_defaults(func=cmd_apply)

    r = sub.add_parser("reduce", help="decompose into 4-simplex boundaries")
    r.add_argument("input")
    r.add_argument("-o", "--output")
    r.add_argument("--strict", action="store_true", help="refuse inputs beyond the g2 bounds")
    r.set_defaults(func=cmd_reduce)

    rp = sub.add_parser("replay", help="rebuild a complex from a certificate")
    rp.add_argument("certificate")
    rp.add_argument("-o", "--output")
    rp.set_defaults(func=cmd_replay)

    vf = sub.add_parser("verify", help="check a certificate against a complex")
    vf.add_argument("input")
    vf.add_argument("certificate")
    vf.set_defaults(func=cmd_verify)

    rg = sub.add_parser("rigidity", help="compare stress-space dimension with g2")
    rg.add_argument("--seeds", default="1,2,3")
    rg.add_argument("input")
    rg.set_defaults(func=cmd_rigidity)

    i = sub.add_parser("iso", help="test two complexes for isomorphism")
    i.add_argument("a")
    i.add_argument("b")
    i.set_defaults(func=cmd_iso)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    try:
        return args.func(args)
    except (UsageError, ComplexError, GeneratorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
