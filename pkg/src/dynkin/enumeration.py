"""Connected multiplicity-labelled diagrams up to isomorphism.

Trees are grown one leaf at a time and deduplicated by an AHU-style
canonical code taken at the tree centre.  One-cycle diagrams come from
adding a line to every tree and are deduplicated by the minimal rotation
or reflection of the cycle, each cycle vertex carrying the code of the
tree hanging from it.
"""

from __future__ import annotations

from typing import Iterator

from .diagram import CoxeterDiagram
from .errors import BoundExceeded

DEFAULT_BOUND = 9
MULTIPLICITIES = (1, 2, 3)


# rooted subtree shape -> id, and id -> string code; shared memo across calls
_SHAPE_IDS: dict[tuple, int] = {}
_SHAPE_STR: list[str] = []


def _rooted_id(adj: list[list[tuple[int, int]]], v: int, parent: int | None,
               blocked: frozenset = frozenset()) -> int:
    key = tuple(sorted((m, _rooted_id(adj, u, v, blocked))
                       for u, m in adj[v] if u != parent and u not in blocked))
    sid = _SHAPE_IDS.get(key)
    if sid is None:
        sid = len(_SHAPE_STR)
        _SHAPE_STR.append("(" + "".join(sorted(str(m) + _SHAPE_STR[c] for m, c in key)) + ")")
        _SHAPE_IDS[key] = sid
    return sid


def _rooted_code(adj: list[list[tuple[int, int]]], v: int, parent: int | None,
                 blocked: frozenset = frozenset()) -> str:
    return _SHAPE_STR[_rooted_id(adj, v, parent, blocked)]


def _weighted_adj(d: CoxeterDiagram) -> list[list[tuple[int, int]]]:
    adj = [[] for _ in range(d.order)]
    for u, v, m in d.edges:
        adj[u].append((v, m))
        adj[v].append((u, m))
    return adj


def _centres(adj: list[list[tuple[int, int]]]) -> list[int]:
    n = len(adj)
    if n <= 2:
        return list(range(n))
    deg = [len(a) for a in adj]
    layer = [v for v in range(n) if deg[v] <= 1]
    left = n
    while left > 2:
        left -= len(layer)
        nxt = []
        for v in layer:
            for u, _ in adj[v]:
                deg[u] -= 1
                if deg[u] == 1:
                    nxt.append(u)
        layer = nxt
    return sorted(layer)


def tree_code(d: CoxeterDiagram) -> str:
    """Canonical code of a multiplicity-labelled tree (equal iff isomorphic)."""
    adj = _weighted_adj(d)
    return min(_rooted_code(adj, c, None) for c in _centres(adj))


def _split_children(body: str) -> list[tuple[int, str]]:
    # body is the inside of "( ... )": a run of <digit><code>
    out, i = [], 0
    while i < len(body):
        m = int(body[i])
        depth, j = 0, i + 1
        while True:
            if body[j] == "(":
                depth += 1
            elif body[j] == ")":
                depth -= 1
            j += 1
            if depth == 0:
                break
        out.append((m, body[i + 1:j]))
        i = j
    return out


def _decode_into(code: str, edges: list, counter: list[int]) -> int:
    """Append a rooted tree in post-order (children before parent); returns the root."""
    kids = [(m, _decode_into(sub, edges, counter)) for m, sub in _split_children(code[1:-1])]
    v = counter[0]
    counter[0] += 1
    for m, u in kids:
        edges.append((u, v, m))
    return v


def tree_from_code(code: str) -> CoxeterDiagram:
    edges: list = []
    counter = [0]
    _decode_into(code, edges, counter)
    return CoxeterDiagram(counter[0], tuple(edges))


def _trees_by_rank(max_rank: int) -> list[list[str]]:
    levels = [[], ["()"]]
    for n in range(2, max_rank + 1):
        codes = set()
        for code in levels[n - 1]:
            adj = _weighted_adj(tree_from_code(code))
            adj.append([])
            for v in range(n - 1):
                for m in MULTIPLICITIES:
                    adj[v].append((n - 1, m))
                    adj[n - 1].append((v, m))
                    codes.add(min(_rooted_code(adj, c, None) for c in _centres(adj)))
                    adj[v].pop()
                    adj[n - 1].pop()
        levels.append(sorted(codes))
    return levels


def _cycle(d: CoxeterDiagram) -> list[int]:
    adj = d.adjacency()
    deg = [len(a) for a in adj]
    alive = set(range(d.order))
    stack = [v for v in alive if deg[v] == 1]
    while stack:
        v = stack.pop()
        alive.discard(v)
        for u in adj[v]:
            if u in alive:
                deg[u] -= 1
                if deg[u] == 1:
                    stack.append(u)
    start = min(alive)
    cyc, prev = [start], None
    while True:
        nxt = min(u for u in adj[cyc[-1]] if u in alive and u != prev and (len(cyc) < 2 or u != cyc[-2]))
        if nxt == start:
            return cyc
        prev = cyc[-1]
        cyc.append(nxt)


def unicyclic_code(d: CoxeterDiagram) -> tuple:
    """Canonical code of a connected diagram with exactly one cycle."""
    cyc = _cycle(d)
    k = len(cyc)
    adj = _weighted_adj(d)
    on_cycle = frozenset(cyc)
    hang = [_rooted_code(adj, v, None, on_cycle - {v}) for v in cyc]
    mult = [d.multiplicity(cyc[i], cyc[(i + 1) % k]) for i in range(k)]
    best = None
    for direction in (1, -1):
        for s in range(k):
            seq = []
            for step in range(k):
                i = (s + direction * step) % k
                e = i if direction == 1 else (i - 1) % k
                seq.append((hang[i], mult[e]))
            key = tuple(seq)
            if best is None or key < best:
                best = key
    return best


def _unicyclic_from_code(code: tuple) -> CoxeterDiagram:
    edges: list = []
    counter = [0]
    cyc = [_decode_into(h, edges, counter) for h, _ in code]
    k = len(cyc)
    for i, (_, m) in enumerate(code):
        edges.append((cyc[i], cyc[(i + 1) % k], m))
    return CoxeterDiagram(counter[0], tuple(edges))


def _unicyclic_by_rank(tree_levels: list[list[str]], max_rank: int) -> list[list[tuple]]:
    out = [[] for _ in range(max_rank + 1)]
    for n in range(3, max_rank + 1):
        codes = set()
        for tc in tree_levels[n]:
            t = tree_from_code(tc)
            for u in range(n):
                for v in range(u + 1, n):
                    if t.multiplicity(u, v):
                        continue
                    for m in MULTIPLICITIES:
                        codes.add(unicyclic_code(CoxeterDiagram(n, t.edges + ((u, v, m),))))
        out[n] = sorted(codes)
    return out


def enumerate_connected(max_rank: int, include_cycles: bool = False, min_rank: int = 1,
                        bound: int = DEFAULT_BOUND, cycle_max_rank: int | None = None) -> Iterator[CoxeterDiagram]:
    """All connected diagrams with ``min_rank <= l <= max_rank`` up to isomorphism.

    Trees come for every rank; with ``include_cycles`` the diagrams with
    exactly ``l`` lines follow the trees of each rank (up to
    ``cycle_max_rank`` when given).  Order: by rank, trees before cycles,
    then by canonical code.
    """
    if max_rank > bound:
        raise BoundExceeded(f"max_rank {max_rank} exceeds the bound {bound}")
    if max_rank < 1:
        return
    trees = _trees_by_rank(max_rank)
    cyc_top = max_rank if cycle_max_rank is None else min(cycle_max_rank, max_rank)
    cycles = _unicyclic_by_rank(trees, cyc_top) if include_cycles else None
    for n in range(max(min_rank, 1), max_rank + 1):
        for code in trees[n]:
            yield tree_from_code(code)
        if cycles is not None and n <= cyc_top:
            for code in cycles[n]:
                yield _unicyclic_from_code(code)
