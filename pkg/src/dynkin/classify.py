"""Positive-definiteness of connected Coxeter diagrams.

The decision path uses structural rejections, the three-term minor
recurrence for chains, and orthogonal node reductions that turn branched
diagrams into chains.  :func:`sylvester_pd` is a general exact oracle kept
separate from that path; tests compare the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cartan import SymCartanMatrix
from .diagram import CoxeterDiagram, coxeter_to_sym, print_diagram
from .errors import NotConnected, NotExpressible, PatternMismatch
from .exactnum import QF, SQRT2, SQRT_HALF


# minor recurrence


@dataclass(frozen=True)
class MinorSequence:
    p: tuple[Fraction, ...]

    @property
    def first_nonpositive(self) -> int | None:
        for i, x in enumerate(self.p):
            if x <= 0:
                return i
        return None

    @property
    def positive(self) -> bool:
        return self.first_nonpositive is None

    def to_json(self) -> list[str]:
        return [str(x) for x in self.p]


def minor_sequence(t: Sequence) -> MinorSequence:
    """Leading principal minors of a tridiagonal matrix with diagonal 2.

    ``t[k]`` is the squared entry below the diagonal in row ``k + 2``
    (1-based), i.e. the multiplicity of the line joining vertices ``k + 1``
    and ``k + 2`` of a chain read left to right.
    """
    p = [Fraction(1), Fraction(2)]
    for x in t:
        x = Fraction(x)
        if x <= 0:
            raise ValueError("squared off-diagonal entries must be positive")
        p.append(2 * p[-1] - x * p[-2])
    return MinorSequence(tuple(p))


# exact oracle


def _as_rows(m) -> list[list[QF]]:
    rows = m.rows() if isinstance(m, SymCartanMatrix) else [list(r) for r in m]
    return [[QF.coerce(x) for x in r] for r in rows]


def determinant(m) -> QF:
    """Exact determinant by Gaussian elimination over Q(sqrt2, sqrt3)."""
    a = _as_rows(m)
    n = len(a)
    det = QF(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if not a[i][k].is_zero()), None)
        if piv is None:
            return QF(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det = det * a[k][k]
        inv = a[k][k].inverse()
        for i in range(k + 1, n):
            if a[i][k].is_zero():
                continue
            f = a[i][k] * inv
            for j in range(k + 1, n):
                if not a[k][j].is_zero():
                    a[i][j] = a[i][j] - f * a[k][j]
    return det


@dataclass(frozen=True)
class SylvesterResult:
    positive_definite: bool
    minors: tuple[QF, ...]
    first_failing: int | None  # order of the first non-positive leading minor

    def __bool__(self):
        return self.positive_definite


def sylvester_pd(m) -> SylvesterResult:
    """Sylvester's criterion with exact leading principal minors.

    Stops at the first minor that is not positive.
    """
    a = _as_rows(m)
    n = len(a)
    for i in range(n):
        if len(a[i]) != n:
            raise ValueError("matrix is not square")
        for j in range(i):
            if a[i][j] != a[j][i]:
                raise ValueError(f"matrix is not symmetric at ({i}, {j})")
    minors = []
    running = QF(1)
    for k in range(n):
        piv = a[k][k]
        running = running * piv
        minors.append(running)
        if piv.sign() <= 0:
            return SylvesterResult(False, tuple(minors), k + 1)
        inv = piv.inverse()
        row_k = a[k]
        hits = [j for j in range(k + 1, n) if not row_k[j].is_zero()]
        for i in range(k + 1, n):
            if a[i][k].is_zero():
                continue
            f = a[i][k] * inv
            row_i = a[i]
            for j in hits:
                row_i[j] = row_i[j] - f * row_k[j]
    return SylvesterResult(True, tuple(minors), None)


# node reductions

_H = SQRT_HALF
_Y_X = ((2, 0, -1), (0, 2, -1), (-1, -1, 2))
_Y_S = ((_H, -_H, 0), (_H, _H, 0), (0, 0, 1))
_Y_XP = ((2, 0, 0), (0, 2, -SQRT2), (0, -SQRT2, 2))

_E_X = ((2, -1, 0, 0), (-1, 2, 0, -1), (0, 0, 2, -1), (0, -1, -1, 2))
_E_S = ((0, _H, -_H, 0), (1, 0, 0, 0), (0, _H, _H, 0), (0, 0, 0, 1))
_E_XP = ((2, -_H, 0, 0), (-_H, 2, -_H, 0), (0, -_H, 2, -SQRT2), (0, 0, -SQRT2, 2))

_HN_X = ((2, 0, -1, 0, 0), (0, 2, 0, -1, 0), (-1, 0, 2, 0, -1), (0, -1, 0, 2, -1), (0, 0, -1, -1, 2))
_HN_S = ((0, 0, _H, -_H, 0), (_H, -_H, 0, 0, 0), (_H, _H, 0, 0, 0), (0, 0, _H, _H, 0), (0, 0, 0, 0, 1))
_HN_XP = ((2, -1, 0, 0, 0), (-1, 2, 0, 0, 0), (0, 0, 2, -1, 0), (0, 0, -1, 2, -SQRT2), (0, 0, 0, -SQRT2, 2))

NODE_CASES = {
    "Y": (_Y_X, _Y_S, _Y_XP),
    "E": (_E_X, _E_S, _E_XP),
    "H": (_HN_X, _HN_S, _HN_XP),
}
# vertex layouts, by arm position: Y = (*,*)>*-..., E = (*-*,*)>*-..., H = (*-*,*-*)>*-...


def node_reduce(b, case: str) -> SymCartanMatrix:
    """Apply the block rotation ``B -> T B T^T`` for a node of the given case.

    ``b`` must be laid out as the case's X block followed by the rest of the
    diagram, with the node (last X row) joined by a single line to the first
    remaining vertex only.  The result is congruent to ``b``.
    """
    if case not in NODE_CASES:
        raise ValueError(f"unknown node case {case!r}; expected one of {sorted(NODE_CASES)}")
    x_blk, s_blk, xp_blk = NODE_CASES[case]
    a = _as_rows(b)
    n, k = len(a), len(x_blk)
    if n < k:
        raise PatternMismatch(f"case {case} needs at least {k} vertices")
    for i in range(k):
        for j in range(k):
            if a[i][j] != x_blk[i][j]:
                raise PatternMismatch(f"entry ({i}, {j}) = {a[i][j]} does not match the {case} node block")
    for i in range(k):
        for j in range(k, n):
            want = -1 if (i == k - 1 and j == k) else 0
            if a[i][j] != want:
                raise PatternMismatch(f"entry ({i}, {j}) = {a[i][j]}: the node block must meet the rest only at its corner")
    t = [[QF.coerce(s_blk[i][j]) if i < k and j < k else QF(1 if i == j else 0) for j in range(n)] for i in range(n)]
    tb = [[_dot_sparse(t[i], a, j, n) for j in range(n)] for i in range(n)]
    out = [[_dot_rows(tb[i], t[j]) for j in range(n)] for i in range(n)]
    for i in range(k):
        for j in range(k):
            if out[i][j] != xp_blk[i][j]:
                raise AssertionError(f"rotated block differs from expected at ({i}, {j})")
        for j in range(k, n):
            if out[i][j] != a[i][j]:
                raise AssertionError("off-diagonal block changed under rotation")
    return SymCartanMatrix(tuple(tuple(r) for r in out))


def _dot_sparse(row: list[QF], a: list[list[QF]], j: int, n: int) -> QF:
    total = QF(0)
    for m in range(n):
        if not row[m].is_zero() and not a[m][j].is_zero():
            total = total + row[m] * a[m][j]
    return total


def _dot_rows(u: list[QF], v: list[QF]) -> QF:
    total = QF(0)
    for x, y in zip(u, v):
        if not x.is_zero() and not y.is_zero():
            total = total + x * y
    return total


# generalised diagrams


_GEN_TOKEN = {Fraction(1, 2): "~", Fraction(1): "-", Fraction(2): "=", Fraction(3): "#"}


@dataclass(frozen=True)
class GenCoxeterDiagram:
    """Coxeter-like diagram whose line multiplicities are positive rationals."""

    order: int
    edges: tuple[tuple[int, int, Fraction], ...]

    @classmethod
    def from_sym(cls, b) -> GenCoxeterDiagram:
        rows = _as_rows(b)
        n = len(rows)
        edges = []
        for i in range(n):
            if rows[i][i] != 2:
                raise ValueError("diagonal entries must equal 2")
            for j in range(i + 1, n):
                x = rows[i][j]
                if not x.is_zero():
                    edges.append((i, j, (x * x).to_fraction()))
        return cls(n, tuple(edges))

    @classmethod
    def from_coxeter(cls, d: CoxeterDiagram) -> GenCoxeterDiagram:
        return cls(d.order, tuple((u, v, Fraction(m)) for u, v, m in d.edges))

    def multiplicity(self, i: int, j: int) -> Fraction:
        for u, v, m in self.edges:
            if {u, v} == {i, j}:
                return m
        return Fraction(0)

    def text(self) -> str:
        """Left-to-right notation when every line joins consecutive vertices.

        ``~`` marks a line of multiplicity 1/2; a space separates components.
        """
        out = "*"
        for i in range(1, self.order):
            m = self.multiplicity(i - 1, i)
            if m == 0:
                out += " *"
            elif m in _GEN_TOKEN:
                out += _GEN_TOKEN[m] + "*"
            else:
                raise NotExpressible(f"no token for multiplicity {m}")
        if any(v - u != 1 for u, v, _ in self.edges):
            raise NotExpressible("only chains in vertex order have text")
        return out


def _tridiagonal_t(b: SymCartanMatrix, start: int = 0) -> list[Fraction]:
    n = b.rank
    for i in range(start, n):
        for j in range(start, n):
            if abs(i - j) > 1 and not b[i, j].is_zero():
                raise ValueError("matrix is not tridiagonal")
    return [(b[i, i - 1] * b[i, i - 1]).to_fraction() for i in range(start + 1, n)]


# classification


@dataclass(frozen=True)
class ClassificationResult:
    positive_definite: bool
    family: str | None
    rank: int
    witness: dict = field(default_factory=dict)
    minors: MinorSequence | None = None

    @property
    def verdict(self) -> str:
        return "PositiveDefinite" if self.positive_definite else "NotPositiveDefinite"

    @property
    def label(self) -> str | None:
        return None if self.family is None else f"{self.family}{self.rank}"

    def to_json(self, diagram: CoxeterDiagram | None = None) -> dict:
        return {
            "input": None if diagram is None else diagram.to_json(),
            "verdict": self.verdict,
            "family": self.label,
            "rank": self.rank,
            "witness": self.witness,
            "minors": None if self.minors is None else self.minors.to_json(),
        }


def _path_order(d: CoxeterDiagram) -> list[int]:
    adj = d.adjacency()
    start = min(v for v in range(d.order) if len(adj[v]) <= 1)
    order, prev = [start], None
    while True:
        nxt = [x for x in adj[order[-1]] if x != prev]
        if not nxt:
            return order
        prev = order[-1]
        order.append(nxt[0])


def _tree_path(adj: list[list[int]], src: int, dst: int) -> list[int]:
    parent = {src: None}
    stack = [src]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                stack.append(y)
    path = [dst]
    while path[-1] != src:
        path.append(parent[path[-1]])
    return path[::-1]


def _arms(d: CoxeterDiagram, adj: list[list[int]], node: int) -> list[list[int]]:
    arms = []
    for first in adj[node]:
        arm, prev = [first], node
        while True:
            nxt = [x for x in adj[arm[-1]] if x != prev]
            if not nxt:
                break
            prev = arm[-1]
            arm.append(nxt[0])
        arms.append(arm)
    arms.sort(key=len)
    return arms


def _one_based(vs) -> list[int]:
    return [v + 1 for v in vs]


def _chain_family(mults: list[int]) -> str | None:
    l = len(mults) + 1
    if all(m == 1 for m in mults):
        return "A"
    if mults == [3]:
        return "G"
    if mults.count(2) == 1 and all(m in (1, 2) for m in mults):
        if mults[0] == 2 or mults[-1] == 2:
            return "B/C"
        if l == 4:
            return "F"
    return None


def classify_connected(d: CoxeterDiagram) -> ClassificationResult:
    """Decide whether a connected Coxeter diagram is positive definite.

    Checks run in this order: line count (cycles), vertex degree counting
    multiplicity, two double lines, a node together with a double line or
    a second node, then the minor recurrence on chains or on the chain
    obtained by a node reduction.  Accepted diagrams are labelled with
    their family and rank.
    """
    d = CoxeterDiagram(d.order, d.edges)
    if not d.is_connected():
        raise NotConnected("classification needs a connected diagram")
    l = d.order
    if l == 1:
        return ClassificationResult(True, "A", 1, {}, minor_sequence([]))

    if len(d.edges) >= l:
        form = 2 * (QF(l) - sum((QF.sqrt(m) for _, _, m in d.edges), QF(0)))
        return ClassificationResult(False, None, l, {
            "proposition": 1,
            "reason": "at least as many lines as vertices (cycle)",
            "lines": len(d.edges),
            "all_ones_form": form.to_json(),
        })

    for v in range(l):
        wd = d.weighted_degree(v)
        if wd > 3:
            return ClassificationResult(False, None, l, {
                "proposition": 2,
                "reason": "vertex degree counting multiplicity exceeds 3",
                "vertex": v + 1,
                "degree": wd,
            })

    adj = d.adjacency()
    doubles = [(u, v) for u, v, m in d.edges if m == 2]
    if len(doubles) >= 2:
        (a1, b1), (a2, b2) = doubles[:2]
        path = max((_tree_path(adj, x, y) for x in (a1, b1) for y in (a2, b2)), key=len)
        seq = minor_sequence([d.multiplicity(x, y) for x, y in zip(path, path[1:])])
        assert not seq.positive
        return ClassificationResult(False, None, l, {
            "proposition": 4,
            "reason": "two double lines",
            "subdiagram": _one_based(path),
            "first_nonpositive": seq.first_nonpositive,
        }, seq)

    nodes = [v for v in range(l) if len(adj[v]) >= 3]
    if nodes and doubles:
        return ClassificationResult(False, None, l, {
            "proposition": 6,
            "reason": "a node and a double line",
            "node": nodes[0] + 1,
            "double_line": _one_based(doubles[0]),
        })
    if len(nodes) >= 2:
        return ClassificationResult(False, None, l, {
            "proposition": 6,
            "reason": "two nodes",
            "nodes": _one_based(nodes[:2]),
        })

    if not nodes:
        order = _path_order(d)
        mults = [d.multiplicity(x, y) for x, y in zip(order, order[1:])]
        seq = minor_sequence(mults)
        if not seq.positive:
            return ClassificationResult(False, None, l, {
                "proposition": 3,
                "reason": "non-positive leading minor of the chain",
                "order": _one_based(order),
                "first_nonpositive": seq.first_nonpositive,
            }, seq)
        family = _chain_family(mults)
        assert family is not None, f"positive chain {mults} outside the known families"
        return ClassificationResult(True, family, l, {"order": _one_based(order)}, seq)

    node = nodes[0]
    short, mid, long_ = _arms(d, adj, node)
    if len(short) == 1 and len(mid) == 1:
        order = [short[0], mid[0], node] + long_
        reduced = node_reduce(coxeter_to_sym(d, order), "Y")
        seq = minor_sequence(_tridiagonal_t(reduced, 1))
        assert seq.positive
        return ClassificationResult(True, "D", l, {
            "proposition": 5,
            "order": _one_based(order),
            "reduced": GenCoxeterDiagram.from_sym(reduced).text(),
        }, seq)

    if len(short) == 1 and len(mid) == 2:
        order = [mid[1], mid[0], short[0], node] + long_
        reduced = node_reduce(coxeter_to_sym(d, order), "E")
        seq = minor_sequence(_tridiagonal_t(reduced))
        witness = {
            "proposition": 7,
            "order": _one_based(order),
            "reduced": GenCoxeterDiagram.from_sym(reduced).text(),
        }
        if seq.positive:
            return ClassificationResult(True, "E", l, witness, seq)
        witness["first_nonpositive"] = seq.first_nonpositive
        return ClassificationResult(False, None, l, witness, seq)

    if len(short) == 1:
        # arms (1, >=3, >=3): contains (1, 3, 3), which carries an isotropic vector
        sub = [node, short[0]] + mid[:3] + long_[:3]
        vec = [4, 2, 3, 2, 1, 3, 2, 1]
        b = coxeter_to_sym(d.subdiagram(sub))
        value = _quadratic_form(b, vec)
        assert value.is_zero()
        return ClassificationResult(False, None, l, {
            "proposition": None,
            "reason": "isotropic vector on the subdiagram (*-*-*,*)>*-*-*",
            "subdiagram": _one_based(sub),
            "vector": vec,
            "form_value": value.to_json(),
        })

    # three arms of length >= 2
    order = [short[1], mid[1], short[0], mid[0], node] + long_
    reduced = node_reduce(coxeter_to_sym(d.subdiagram(order)), "H")
    seq = minor_sequence(_tridiagonal_t(reduced, 2))
    assert not seq.positive
    return ClassificationResult(False, None, l, {
        "proposition": 8,
        "reason": "three arms of length at least 2",
        "subdiagram": _one_based(order),
        "reduced": GenCoxeterDiagram.from_sym(reduced).text(),
        "first_nonpositive": seq.first_nonpositive,
    }, seq)


def _quadratic_form(b, vec: Sequence[int]) -> QF:
    rows = _as_rows(b)
    total = QF(0)
    for i, x in enumerate(vec):
        for j, y in enumerate(vec):
            if x and y and not rows[i][j].is_zero():
                total = total + rows[i][j] * (x * y)
    return total


def classify_text(text: str) -> ClassificationResult:
    from .diagram import parse_diagram

    return classify_connected(parse_diagram(text))


def describe(d: CoxeterDiagram) -> str:
    try:
        return print_diagram(d)
    except NotExpressible:
        return repr(d)
