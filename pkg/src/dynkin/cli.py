"""Command-line interface.

Exit status: 0 on success, 1 for usage or parse errors, 2 for domain errors
(axiom violation, non-symmetrisable matrix, divergent root closure...).
Errors are written to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor

from .cartan import CartanMatrix, symmetrise
from .classify import classify_connected, minor_sequence
from .diagram import (
    CoxeterDiagram,
    DynkinDiagram,
    coxeter_of_sym,
    dynkin_of_cartan,
    orient,
    parse_diagram,
    to_dot,
)
from .enumeration import enumerate_connected
from .errors import DiagramSyntaxError, DynkinError
from .roots import DEFAULT_GUARD, generate_roots, verify_root_system

WORKERS_ENV = "DYNKIN_WORKERS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def _read_matrix(path: str) -> CartanMatrix:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc.msg}") from exc
    if isinstance(data, list):
        data = {"entries": data}
    if not isinstance(data, dict) or "entries" not in data:
        raise UsageError(f"{path}: expected an object with an 'entries' field")
    return CartanMatrix.from_json(data)


def _read_diagram(text: str) -> CoxeterDiagram:
    try:
        return parse_diagram(text)
    except DiagramSyntaxError as exc:
        if "directed marker" not in str(exc):
            raise
    return parse_diagram(text, directed=True)


def _parse_orient(text: str) -> list[tuple[int, int]]:
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        try:
            p, q = part.split(">")
            out.append((int(p) - 1, int(q) - 1))
        except ValueError as exc:
            raise UsageError(f"bad orientation {part!r}; expected 'i>j'") from exc
    return out


def _diagram_of_matrix(a: CartanMatrix) -> CoxeterDiagram:
    return coxeter_of_sym(symmetrise(a))


def _report(d: CoxeterDiagram) -> dict:
    if d.is_connected():
        return classify_connected(d).to_json(d)
    parts = []
    for block in d.components():
        sub = d.subdiagram(block)
        rep = classify_connected(sub).to_json(sub)
        rep["vertices"] = [v + 1 for v in block]
        parts.append(rep)
    pd = all(p["verdict"] == "PositiveDefinite" for p in parts)
    return {
        "input": d.to_json(),
        "verdict": "PositiveDefinite" if pd else "NotPositiveDefinite",
        "components": parts,
    }


def cmd_validate(args) -> int:
    a = _read_matrix(args.matrix)
    from .cartan import components

    print(_dump({"valid": True, "rank": a.rank,
                 "components": [[i + 1 for i in blk] for blk in components(a)]}))
    return 0


def cmd_symmetrise(args) -> int:
    print(_dump(symmetrise(_read_matrix(args.matrix)).to_json()))
    return 0


def cmd_classify(args) -> int:
    d = _read_diagram(args.diagram) if args.diagram else _diagram_of_matrix(_read_matrix(args.matrix))
    print(_dump(_report(d.undirected())))
    return 0


def cmd_minors(args) -> int:
    d = _read_diagram(args.diagram).undirected()
    path = d.is_connected() and d.is_forest() and all(d.degree(v) <= 2 for v in range(d.order))
    if path and all(d.multiplicity(i, i + 1) for i in range(d.order - 1)):
        seq = minor_sequence([d.multiplicity(i, i + 1) for i in range(d.order - 1)])
        reduced = False
    else:
        res = classify_connected(d)
        if res.minors is None:
            raise UsageError("diagram has no minor sequence (rejected before any chain was formed)")
        seq, reduced = res.minors, True
    print(_dump({"diagram": args.diagram, "minors": seq.to_json(),
                 "first_nonpositive": seq.first_nonpositive, "reduced": reduced}))
    return 0


def _classify_line(d: CoxeterDiagram) -> str:
    return _dump(classify_connected(d).to_json(d))


def cmd_enumerate(args) -> int:
    diagrams = enumerate_connected(args.max_rank, include_cycles=args.cycles,
                                   cycle_max_rank=args.cycle_max_rank)
    workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    families = defaultdict(list)
    total = pd = 0
    if workers > 1:
        pool = ProcessPoolExecutor(max_workers=workers)
        lines = pool.map(_classify_line, diagrams, chunksize=256)
    else:
        pool = None
        lines = map(_classify_line, diagrams)
    try:
        for line in lines:
            total += 1
            sys.stdout.write(line + "\n")
            rep = json.loads(line)
            if rep["verdict"] == "PositiveDefinite":
                pd += 1
                fam = rep["family"][: -len(str(rep["rank"]))]
                families[fam].append(rep["rank"])
    finally:
        if pool is not None:
            pool.shutdown()
    summary = {fam: sorted(ranks) for fam, ranks in sorted(families.items())}
    print(_dump({"summary": {"total": total, "positive_definite": pd, "families": summary}}))
    return 0


def cmd_roots(args) -> int:
    if args.matrix:
        if args.orient:
            raise UsageError("--orient applies to --diagram input only")
        a = _read_matrix(args.matrix)
    else:
        d = _read_diagram(args.diagram)
        dirs = list(d.directions) if isinstance(d, DynkinDiagram) else []
        if args.orient:
            dirs = _parse_orient(args.orient)
        a = orient(d.undirected(), dirs)
    rs = generate_roots(a, guard=args.guard)
    out = rs.to_json()
    out["cartan"] = a.to_json()
    out["verification"] = verify_root_system(rs).to_json()
    print(_dump(out))
    return 0


def cmd_export_dot(args) -> int:
    if args.diagram:
        d = _read_diagram(args.diagram)
    else:
        d = dynkin_of_cartan(_read_matrix(args.matrix))
    sys.stdout.write(to_dot(d))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dynkin", description="Cartan matrices, Coxeter/Dynkin diagrams and root systems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check the Cartan axioms for a matrix file")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("symmetrise", help="symmetrised Cartan matrix and weights")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_symmetrise)

    p = sub.add_parser("classify", help="positive-definiteness verdict with witness")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--diagram")
    g.add_argument("--matrix")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("minors", help="leading-minor sequence of a chain (or its node reduction)")
    p.add_argument("--diagram", required=True)
    p.set_defaults(func=cmd_minors)

    p = sub.add_parser("enumerate", help="classify every connected diagram up to a rank")
    p.add_argument("--max-rank", type=int, required=True)
    p.add_argument("--cycles", action="store_true", help="include diagrams with one cycle")
    p.add_argument("--cycle-max-rank", type=int, default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("roots", help="generate and verify a root system")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--diagram")
    g.add_argument("--matrix")
    p.add_argument("--orient", help="directions 'i>j[,i>j...]': A(i,j) = -1, A(j,i) = -m")
    p.add_argument("--guard", type=int, default=DEFAULT_GUARD)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("export-dot", help="DOT text for a diagram")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--diagram")
    g.add_argument("--matrix")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(_dump({"error": "usage", "message": str(exc)}) + "\n")
        return 1
    except DiagramSyntaxError as exc:
        sys.stderr.write(_dump(exc.to_json()) + "\n")
        return 1
    except DynkinError as exc:
        sys.stderr.write(_dump(exc.to_json()) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
