"""Coxeter and Dynkin diagrams: graph model, inline notation, conversions.

Inline notation (ASCII; ``≡`` is accepted for ``#``)::

    diagram := branch
    branch  := node | chain
    chain   := '*' ( edge '*' )*
    edge    := '-' | '=' | '#'                      (undirected)
    dedge   := edge | '=>' | '<=' | '#>' | '<#'     (directed mode)
    node    := '(' branch ',' branch ')' '>' '*' ( edge chain )?

Vertices are numbered in reading order.  A node vertex is joined by single
lines to the rightmost vertex of each parenthesised branch.  In directed
text ``u=>v`` means ``A[u, v] = -m`` and ``A[v, u] = -1``.

Directions are stored as pairs ``(p, q)`` meaning ``A[p, q] = -1`` and
``A[q, p] = -m``.  Python APIs use 0-based vertices; text, JSON and DOT
output use 1-based labels.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .cartan import CartanMatrix, SymCartanMatrix, is_isomorphic
from .errors import DiagramSyntaxError, NotExpressible, OrientationError
from .exactnum import QF

_EDGE_CHAR = {1: "-", 2: "=", 3: "#"}
_CHAR_MULT = {"-": 1, "=": 2, "#": 3, "≡": 3}
_ZERO, _TWO = QF(0), QF(2)
_NEG_ROOTS = {m: -QF.sqrt(m) for m in (1, 2, 3)}


@dataclass(frozen=True)
class CoxeterDiagram:
    """Undirected graph with line multiplicities 1..3."""

    order: int
    edges: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        seen = {}
        for u, v, m in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.order and 0 <= v < self.order):
                raise ValueError(f"edge ({u}, {v}) outside 0..{self.order - 1}")
            if m not in (1, 2, 3):
                raise ValueError(f"multiplicity {m} outside 1..3")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate line between {key[0]} and {key[1]}")
            seen[key] = m
        object.__setattr__(self, "edges", tuple(sorted((u, v, m) for (u, v), m in seen.items())))

    def multiplicity(self, i: int, j: int) -> int:
        return self._mults().get((min(i, j), max(i, j)), 0)

    def _mults(self) -> dict:
        cache = self.__dict__.get("_mcache")
        if cache is None:
            cache = {(u, v): m for u, v, m in self.edges}
            object.__setattr__(self, "_mcache", cache)
        return cache

    def neighbours(self, i: int) -> list[int]:
        return [v if u == i else u for u, v, _ in self.edges if i in (u, v)]

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.order)]
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def degree(self, i: int) -> int:
        return len(self.neighbours(i))

    def weighted_degree(self, i: int) -> int:
        return sum(m for u, v, m in self.edges if i in (u, v))

    def components(self) -> list[list[int]]:
        adj = self.adjacency()
        seen = [False] * self.order
        out = []
        for s in range(self.order):
            if seen[s]:
                continue
            seen[s] = True
            block, queue = [s], deque([s])
            while queue:
                x = queue.popleft()
                for y in adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        block.append(y)
                        queue.append(y)
            out.append(sorted(block))
        return out

    def is_connected(self) -> bool:
        return self.order > 0 and len(self.components()) == 1

    def is_forest(self) -> bool:
        return len(self.edges) == self.order - len(self.components())

    def subdiagram(self, vertices: Sequence[int]) -> CoxeterDiagram:
        """Induced subdiagram; vertex ``k`` of the result is ``vertices[k]``."""
        index = {v: k for k, v in enumerate(vertices)}
        edges = tuple((index[u], index[v], m) for u, v, m in self.edges if u in index and v in index)
        return CoxeterDiagram(len(vertices), edges)

    def relabel(self, order: Sequence[int]) -> CoxeterDiagram:
        """Same diagram with vertex ``order[k]`` renamed ``k``."""
        if sorted(order) != list(range(self.order)):
            raise ValueError("order must be a permutation of the vertices")
        return self.subdiagram(order)

    def undirected(self) -> CoxeterDiagram:
        return CoxeterDiagram(self.order, self.edges)

    def to_json(self) -> dict:
        return {
            "vertices": self.order,
            "edges": [{"u": u + 1, "v": v + 1, "m": m, "dir": None} for u, v, m in self.edges],
        }

    def __str__(self) -> str:
        try:
            return print_diagram(self)
        except NotExpressible:
            return repr(self)


@dataclass(frozen=True)
class DynkinDiagram(CoxeterDiagram):
    """Coxeter diagram with a direction ``(p, q)`` on every multiple line."""

    directions: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        super().__post_init__()
        dirs = {}
        for p, q in self.directions:
            m = self.multiplicity(p, q)
            if m == 0:
                raise ValueError(f"direction ({p}, {q}) on a missing line")
            if m == 1:
                raise ValueError(f"direction ({p}, {q}) on a single line")
            key = (min(p, q), max(p, q))
            if key in dirs and dirs[key] != (p, q):
                raise ValueError(f"conflicting directions on line {key}")
            dirs[key] = (p, q)
        for u, v, m in self.edges:
            if m >= 2 and (u, v) not in dirs:
                raise ValueError(f"multiple line ({u}, {v}) has no direction")
        object.__setattr__(self, "directions", tuple(sorted(dirs.values())))

    def direction(self, i: int, j: int) -> tuple[int, int] | None:
        for p, q in self.directions:
            if {p, q} == {i, j}:
                return p, q
        return None

    def subdiagram(self, vertices: Sequence[int]) -> DynkinDiagram:
        base = CoxeterDiagram.subdiagram(self, vertices)
        index = {v: k for k, v in enumerate(vertices)}
        dirs = tuple((index[p], index[q]) for p, q in self.directions if p in index and q in index)
        return DynkinDiagram(base.order, base.edges, dirs)

    def to_json(self) -> dict:
        out = []
        for u, v, m in self.edges:
            d = self.direction(u, v)
            out.append({"u": u + 1, "v": v + 1, "m": m,
                        "dir": None if d is None else ("uv" if d == (u, v) else "vu")})
        return {"vertices": self.order, "edges": out}


def diagram_from_json(data: dict) -> CoxeterDiagram:
    """Inverse of ``to_json``; ``"dir": "uv"`` means ``A[u, v] = -1, A[v, u] = -m``."""
    edges, dirs = [], []
    for e in data["edges"]:
        u, v, m = int(e["u"]) - 1, int(e["v"]) - 1, int(e["m"])
        edges.append((u, v, m))
        d = e.get("dir")
        if d == "uv":
            dirs.append((u, v))
        elif d == "vu":
            dirs.append((v, u))
        elif d is not None:
            raise ValueError(f"bad direction {d!r}")
    if dirs:
        return DynkinDiagram(int(data["vertices"]), tuple(edges), tuple(dirs))
    return CoxeterDiagram(int(data["vertices"]), tuple(edges))


# parsing


class _Parser:
    def __init__(self, text: str, directed: bool):
        self.text = text
        self.pos = 0
        self.directed = directed
        self.count = 0
        self.edges: list[tuple[int, int, int]] = []
        self.dirs: list[tuple[int, int]] = []

    def error(self, msg: str):
        raise DiagramSyntaxError(msg, self.pos)

    def peek(self, k: int = 0) -> str:
        i = self.pos + k
        return self.text[i] if i < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of input"
            self.error(f"expected {ch!r}, found {found}")
        self.pos += 1

    def vertex(self) -> int:
        self.expect("*")
        self.count += 1
        return self.count - 1

    def edge(self) -> tuple[int, str] | None:
        """Read an edge token; returns (multiplicity, arrow) with arrow in {'', '>', '<'}."""
        ch = self.peek()
        start = self.pos
        if ch == "<":
            nxt = self.peek(1)
            if nxt not in ("=", "#", "≡"):
                self.error("expected '=' or '#' after '<'")
            self._check_directed(start)
            self.pos += 2
            return _CHAR_MULT[nxt], "<"
        if ch in _CHAR_MULT:
            m = _CHAR_MULT[ch]
            self.pos += 1
            if self.peek() == ">" and self.peek(1) == "*":
                if m == 1:
                    self.error("single lines carry no direction")
                self._check_directed(start)
                self.pos += 1
                return m, ">"
            return m, ""
        return None

    def _check_directed(self, start: int):
        if not self.directed:
            raise DiagramSyntaxError("directed marker in undirected mode", start)

    def join(self, left: int, right: int, m: int, arrow: str, at: int):
        self.edges.append((left, right, m))
        if m >= 2:
            if arrow == ">":
                self.dirs.append((right, left))
            elif arrow == "<":
                self.dirs.append((left, right))
            elif self.directed:
                raise DiagramSyntaxError("multiple line needs a direction in directed mode", at)

    def chain(self) -> tuple[int, int]:
        first = last = self.vertex()
        while True:
            at = self.pos
            e = self.edge()
            if e is None:
                return first, last
            nxt = self.vertex()
            self.join(last, nxt, e[0], e[1], at)
            last = nxt

    def branch(self) -> tuple[int, int]:
        """Returns (leftmost-reading vertex, rightmost vertex)."""
        if self.peek() == "(":
            return self.node()
        if self.peek() != "*":
            self.error("expected '*' or '('")
        return self.chain()

    def node(self) -> tuple[int, int]:
        self.expect("(")
        first, right1 = self.branch()
        self.expect(",")
        _, right2 = self.branch()
        self.expect(")")
        self.expect(">")
        centre = self.vertex()
        self.edges.append((right1, centre, 1))
        self.edges.append((right2, centre, 1))
        last = centre
        at = self.pos
        e = self.edge()
        if e is not None:
            head, last = self.chain()
            self.join(centre, head, e[0], e[1], at)
        return first, last

    def parse(self) -> CoxeterDiagram:
        if not self.text:
            self.error("empty diagram")
        self.branch()
        if self.pos != len(self.text):
            self.error(f"unexpected {self.peek()!r}")
        if self.directed:
            return DynkinDiagram(self.count, tuple(self.edges), tuple(self.dirs))
        return CoxeterDiagram(self.count, tuple(self.edges))


def parse_diagram(text: str, directed: bool = False) -> CoxeterDiagram:
    """Parse inline notation into a diagram (a DynkinDiagram when ``directed``)."""
    return _Parser(text.strip(), directed).parse()


# printing


def _edge_token(d: CoxeterDiagram, left: int, right: int) -> str:
    m = d.multiplicity(left, right)
    tok = _EDGE_CHAR[m]
    if m >= 2 and isinstance(d, DynkinDiagram):
        # "left=>right" means A[left, right] = -m, i.e. direction (right, left)
        return tok + ">" if d.direction(left, right) == (right, left) else "<" + tok
    return tok


class _Expr:
    __slots__ = ("text", "size", "nodes", "mults")

    def __init__(self, text: str, size: int, nodes: int, mults: tuple[int, ...]):
        self.text, self.size, self.nodes, self.mults = text, size, nodes, mults


def _hanging(d: CoxeterDiagram, adj: list[list[int]], r: int, parent: int | None) -> tuple[_Expr, int] | None:
    """Expression of the subtree at ``r`` (away from ``parent``) with ``r`` rightmost.

    Returns the expression and the length of its outermost tail, or None.
    """
    path = [r]
    prev, cur = parent, r
    while True:
        kids = [x for x in adj[cur] if x != prev]
        if len(kids) == 1:
            prev, cur = cur, kids[0]
            path.append(cur)
            continue
        break
    reading = path[::-1]
    if not kids:
        text = "*"
        mults = []
        for a, b in zip(reading, reading[1:]):
            text += _edge_token(d, a, b) + "*"
            mults.append(d.multiplicity(a, b))
        return _Expr(text, len(reading), 0, tuple(mults)), len(reading) - 1
    if len(kids) != 2:
        return None
    centre = cur
    if any(d.multiplicity(centre, k) != 1 for k in kids):
        return None
    subs = []
    for k in kids:
        got = _hanging(d, adj, k, centre)
        if got is None:
            return None
        subs.append(got[0])
    subs.sort(key=lambda e: (-e.size, e.text))
    b1, b2 = subs
    text = f"({b1.text},{b2.text})>*"
    mults = list(b1.mults) + list(b2.mults) + [1, 1]
    for a, b in zip(reading, reading[1:]):
        text += _edge_token(d, a, b) + "*"
        mults.append(d.multiplicity(a, b))
    size = b1.size + b2.size + len(reading)
    return _Expr(text, size, b1.nodes + b2.nodes + 1, tuple(mults)), len(reading) - 1


def print_diagram(d: CoxeterDiagram) -> str:
    """Canonical inline text for a connected diagram expressible in the grammar.

    Among all admissible choices of rightmost vertex the printer prefers
    fewer nodes, then a longer outer tail, then heavier lines earlier, then
    ``=>`` over ``<=``; inside each node the larger branch is written first.
    """
    if d.order == 0 or not d.is_connected():
        raise NotExpressible("only connected, non-empty diagrams have inline notation")
    if not d.is_forest():
        raise NotExpressible("diagram has a cycle; use DOT export instead")
    adj = d.adjacency()
    best = None
    for r in range(d.order):
        if len(adj[r]) > 2:
            continue
        got = _hanging(d, adj, r, None)
        if got is None:
            continue
        expr, tail = got
        # mirror-image ties go to the spelling with rightward arrows
        key = (expr.nodes, -tail, tuple(-m for m in expr.mults), expr.text.replace("<", "~"))
        if best is None or key < best[0]:
            best = (key, expr.text)
    if best is None:
        raise NotExpressible("diagram shape is outside the inline grammar")
    return best[1]


# conversions


def coxeter_to_sym(d: CoxeterDiagram, order: Sequence[int] | None = None) -> SymCartanMatrix:
    """Symmetrised matrix with ``B_ii = 2`` and ``B_ij = -sqrt(m_ij)``.

    Row ``k`` corresponds to vertex ``order[k]`` (identity when omitted).
    """
    if order is None:
        order = range(d.order)
    order = list(order)
    if sorted(order) != list(range(d.order)):
        raise ValueError("order must be a permutation of the vertices")
    zero, two, roots = _ZERO, _TWO, _NEG_ROOTS
    n = d.order
    pos = {v: k for k, v in enumerate(order)}
    rows = [[zero] * n for _ in range(n)]
    for k in range(n):
        rows[k][k] = two
    for u, v, m in d.edges:
        rows[pos[u]][pos[v]] = rows[pos[v]][pos[u]] = roots[m]
    rows = [tuple(r) for r in rows]
    return SymCartanMatrix(tuple(rows))


def coxeter_of_sym(b: SymCartanMatrix) -> CoxeterDiagram:
    """Diagram whose lines have multiplicities ``B_ij**2``."""
    edges = []
    for i in range(b.rank):
        for j in range(i + 1, b.rank):
            sq = b[i, j] * b[i, j]
            if not sq.is_zero():
                edges.append((i, j, int(sq.to_fraction())))
    return CoxeterDiagram(b.rank, tuple(edges))


def orient(d: CoxeterDiagram, directions: Iterable[tuple[int, int]] | None = None) -> CartanMatrix:
    """Cartan matrix of a forest with every multiple line directed.

    Each direction ``(p, q)`` gives ``A[p, q] = -1`` and ``A[q, p] = -m``.
    When ``directions`` is omitted those of a DynkinDiagram are used.
    """
    if not d.is_forest():
        raise OrientationError("diagram has a cycle; orientation needs a forest")
    if directions is None:
        directions = d.directions if isinstance(d, DynkinDiagram) else ()
    chosen = {}
    for p, q in directions:
        m = d.multiplicity(p, q)
        if m == 0:
            raise OrientationError(f"no line between {p + 1} and {q + 1}")
        if m == 1:
            raise OrientationError(f"line {p + 1}-{q + 1} is single and takes no direction")
        key = (min(p, q), max(p, q))
        if key in chosen and chosen[key] != (p, q):
            raise OrientationError(f"conflicting directions on line {p + 1}-{q + 1}")
        chosen[key] = (p, q)
    n = d.order
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for u, v, m in d.edges:
        if m == 1:
            a[u][v] = a[v][u] = -1
            continue
        if (u, v) not in chosen:
            raise OrientationError(f"multiple line {u + 1}-{v + 1} has no direction")
        p, q = chosen[(u, v)]
        a[p][q] = -1
        a[q][p] = -m
    return CartanMatrix(tuple(tuple(r) for r in a))


def dynkin_of_cartan(a: CartanMatrix) -> DynkinDiagram:
    edges, dirs = [], []
    for i in range(a.rank):
        for j in range(i + 1, a.rank):
            m = a.multiplicity(i, j)
            if m == 0:
                continue
            edges.append((i, j, m))
            if m >= 2:
                dirs.append((i, j) if a[i, j] == -1 else (j, i))
    return DynkinDiagram(a.rank, tuple(edges), tuple(dirs))


def _pseudo_matrix(d: CoxeterDiagram) -> CartanMatrix:
    n = d.order
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for u, v, m in d.edges:
        a[u][v] = a[v][u] = -m
    if isinstance(d, DynkinDiagram):
        for p, q in d.directions:
            a[p][q] = -1
    return CartanMatrix(tuple(tuple(r) for r in a))


def diagram_isomorphism(d1: CoxeterDiagram, d2: CoxeterDiagram) -> tuple[int, ...] | None:
    """Vertex map ``perm`` with ``d2.relabel(perm) == d1``, or None.

    Directions take part in the comparison only when both are Dynkin diagrams.
    """
    if isinstance(d1, DynkinDiagram) != isinstance(d2, DynkinDiagram):
        d1, d2 = d1.undirected(), d2.undirected()
    return is_isomorphic(_pseudo_matrix(d1), _pseudo_matrix(d2))


def to_dot(d: CoxeterDiagram, name: str = "diagram") -> str:
    """DOT text.  A directed line is drawn ``u -- v`` with the arrowhead at
    ``v`` exactly when the inline notation would write ``u=>v``."""
    lines = [f"graph {name} {{"]
    for v in range(d.order):
        lines.append(f"  {v + 1};")
    for u, v, m in d.edges:
        dirn = d.direction(u, v) if isinstance(d, DynkinDiagram) else None
        if dirn is not None:
            p, q = dirn
            lines.append(f"  {q + 1} -- {p + 1} [mult={m}, dir=forward];")
        else:
            lines.append(f"  {u + 1} -- {v + 1} [mult={m}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
