"""Cartan matrices: validation, components, symmetrisation, isomorphism."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from .errors import CartanAxiomError, NotSymmetrisable
from .exactnum import QF

_ZERO, _TWO = QF(0), QF(2)
_NEG_ROOTS = {0: _ZERO, 1: -QF.sqrt(1), 2: -QF.sqrt(2), 3: -QF.sqrt(3)}


@dataclass(frozen=True)
class CartanMatrix:
    """A validated square integer matrix obeying the four Cartan axioms.

    Build instances with :func:`validate_cartan`; the constructor assumes the
    entries are already checked.
    """

    entries: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def multiplicity(self, i: int, j: int) -> int:
        return self.entries[i][j] * self.entries[j][i]

    def neighbours(self, i: int) -> list[int]:
        row = self.entries[i]
        return [j for j in range(self.rank) if j != i and row[j] != 0]

    def permuted(self, perm: Sequence[int]) -> CartanMatrix:
        """Matrix of ``S A S^T`` where row ``k`` of the result is row ``perm[k]`` of A."""
        return CartanMatrix(tuple(tuple(self.entries[p][q] for q in perm) for p in perm))

    def to_json(self) -> dict:
        return {"rank": self.rank, "entries": [list(r) for r in self.entries]}

    @classmethod
    def from_json(cls, data: dict) -> CartanMatrix:
        a = validate_cartan(data["entries"])
        if "rank" in data and data["rank"] != a.rank:
            raise CartanAxiomError("shape", [], f"declared rank {data['rank']} but matrix is {a.rank}x{a.rank}")
        return a


@dataclass(frozen=True)
class SymCartanMatrix:
    """Symmetrised Cartan matrix ``B`` plus the squared weights ``c_i**2``."""

    entries: tuple[tuple[QF, ...], ...]
    weights_sq: tuple[Fraction, ...] | None = None
    source: CartanMatrix | None = field(default=None, compare=False)

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> QF:
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> list[list[QF]]:
        return [list(r) for r in self.entries]

    def gram(self) -> list[list[Fraction]]:
        """Scalar products ``(alpha_i, alpha_j) = c_i B_ij c_j / 2`` with ``(alpha_i, alpha_i) = c_i**2``.

        Computed in the quadratic field; every entry comes out rational.
        """
        if self.weights_sq is None:
            raise ValueError("no weights: matrix was not built from a Cartan matrix")
        c = [weight_root(w) for w in self.weights_sq]
        n = self.rank
        g = [[(c[i] * self.entries[i][j] * c[j] / 2).to_fraction() for j in range(n)] for i in range(n)]
        return g

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "entries": [[x.to_json() for x in row] for row in self.entries],
            "weights": None if self.weights_sq is None else [str(w) for w in self.weights_sq],
        }


def validate_cartan(raw) -> CartanMatrix:
    """Check the Cartan axioms and return a :class:`CartanMatrix`.

    Raises :class:`CartanAxiomError` naming the first violated axiom and the
    offending index pair (``indices`` is 0-based; messages count from 1).
    """
    rows = [list(r) for r in raw]
    n = len(rows)
    if n == 0:
        raise CartanAxiomError("shape", [], "empty matrix")
    for i, r in enumerate(rows):
        if len(r) != n:
            raise CartanAxiomError("shape", [i], f"row {i + 1} has length {len(r)}, expected {n}")
    for i in range(n):
        for j in range(n):
            x = rows[i][j]
            if isinstance(x, bool) or not isinstance(x, int):
                if isinstance(x, float) and x.is_integer():
                    rows[i][j] = int(x)
                else:
                    raise CartanAxiomError("i", [i, j], f"entry ({i + 1},{j + 1}) = {x!r} is not an integer")
    for i in range(n):
        if rows[i][i] != 2:
            raise CartanAxiomError("ii", [i, i], f"diagonal entry ({i + 1},{i + 1}) = {rows[i][i]}, expected 2")
    for i in range(n):
        for j in range(n):
            if i != j and rows[i][j] > 0:
                raise CartanAxiomError("iii", [i, j], f"off-diagonal entry ({i + 1},{j + 1}) = {rows[i][j]} is positive")
    for i in range(n):
        for j in range(i + 1, n):
            a, b = rows[i][j], rows[j][i]
            if (a == 0) != (b == 0):
                raise CartanAxiomError("iv", [i, j], f"entries ({i + 1},{j + 1}) = {a} and ({j + 1},{i + 1}) = {b}: one is zero, the other not")
            if a * b > 3:
                raise CartanAxiomError("iv", [i, j], f"product A({i + 1},{j + 1})*A({j + 1},{i + 1}) = {a * b} exceeds 3")
    return CartanMatrix(tuple(tuple(r) for r in rows))


def components(a: CartanMatrix) -> list[list[int]]:
    """Maximal connected index sets, each sorted, ordered by smallest index."""
    seen = [False] * a.rank
    out = []
    for start in range(a.rank):
        if seen[start]:
            continue
        seen[start] = True
        block = [start]
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in a.neighbours(i):
                if not seen[j]:
                    seen[j] = True
                    block.append(j)
                    queue.append(j)
        out.append(sorted(block))
    return out


def symmetrise(a: CartanMatrix) -> SymCartanMatrix:
    """Symmetrised Cartan matrix of ``a``.

    The lowest index of each component gets weight 1; the rest follow from
    ``c_j**2 = c_i**2 * A_ij / A_ji`` along a BFS tree.  Every non-tree pair
    is checked for consistency, and a failure raises
    :class:`NotSymmetrisable` carrying the witness cycle.
    """
    n = a.rank
    rows = a.entries
    # weights as reduced integer pairs num/den during the search; den == 0 marks unvisited
    num, den = [0] * n, [0] * n
    parent: list[int | None] = [None] * n
    for root in range(n):
        if den[root]:
            continue
        num[root] = den[root] = 1
        queue = deque([root])
        while queue:
            i = queue.popleft()
            row = rows[i]
            for j in range(n):
                aij = row[j]
                if aij == 0 or j == i:
                    continue
                p, q = num[i] * -aij, den[i] * -rows[j][i]
                if den[j] == 0:
                    g = gcd(p, q)
                    num[j], den[j] = p // g, q // g
                    parent[j] = i
                    queue.append(j)
                elif num[j] * q != p * den[j]:
                    raise NotSymmetrisable(_witness_cycle(parent, i, j))
    w = tuple(Fraction(x) if y == 1 else Fraction(x, y) for x, y in zip(num, den))
    m = tuple(tuple(_TWO if i == j else _NEG_ROOTS[rows[i][j] * rows[j][i]] for j in range(n)) for i in range(n))
    return SymCartanMatrix(m, w, a)


def _witness_cycle(parent: list[int | None], i: int, j: int) -> list[int]:
    def chain(v):
        out = [v]
        while parent[v] is not None:
            v = parent[v]
            out.append(v)
        return out

    pi, pj = chain(i), chain(j)
    common = set(pi) & set(pj)
    up_i = []
    for v in pi:
        up_i.append(v)
        if v in common:
            break
    top = up_i[-1]
    up_j = []
    for v in pj:
        if v == top:
            break
        up_j.append(v)
    # i -> ... -> top -> ... -> j, closed by the edge (j, i)
    return up_i + list(reversed(up_j))


@lru_cache(maxsize=4096)
def weight_root(w: Fraction) -> QF:
    """``sqrt(w)`` for a positive weight of the form ``2**a * 3**b * r**2``."""
    w = Fraction(w)
    if w <= 0:
        raise ValueError("weights are positive")
    num, den = w.numerator, w.denominator
    # sqrt(p/q) = sqrt(p*q)/q
    n = num * den
    e2 = e3 = 0
    while n % 2 == 0:
        n //= 2
        e2 += 1
    while n % 3 == 0:
        n //= 3
        e3 += 1
    r = _exact_isqrt(n)
    if r is None:
        raise ValueError(f"sqrt({w}) is outside Q(sqrt2, sqrt3)")
    coef = Fraction(r * 2 ** (e2 // 2) * 3 ** (e3 // 2), den)
    radical = {(0, 0): 1, (1, 0): 2, (0, 1): 3, (1, 1): 6}[(e2 % 2, e3 % 2)]
    return QF.sqrt(radical) * coef


def _exact_isqrt(n: int) -> int | None:
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


def check_symmetrisation(a: CartanMatrix, s: SymCartanMatrix) -> bool:
    """Check ``B_ij * c_j == c_i * A_ij`` entrywise in the quadratic field."""
    keys = [(w.numerator, w.denominator) for w in s.weights_sq]
    n = a.rank
    for i in range(n):
        ki, arow, brow = keys[i], a.entries[i], s.entries[i]
        for j in range(n):
            aij, bij = arow[j], brow[j]
            if aij == 0:
                if bij is not _ZERO and not bij.is_zero():
                    return False
            elif not _entry_ok(bij, aij, ki, keys[j]):
                return False
    return True


_ENTRY_OK: dict = {}


def _entry_ok(bij: QF, aij: int, wi: tuple[int, int], wj: tuple[int, int]) -> bool:
    # B_ij * c_j == c_i * A_ij; entries and weights come from small sets, so memoise
    key = (bij, aij, wi, wj)
    ok = _ENTRY_OK.get(key)
    if ok is None:
        ok = bij * weight_root(Fraction(*wj)) == weight_root(Fraction(*wi)) * aij
        if len(_ENTRY_OK) < 1 << 16:
            _ENTRY_OK[key] = ok
    return ok


def _invariant(a: CartanMatrix, i: int) -> tuple:
    row = a.entries[i]
    col = [a.entries[j][i] for j in range(a.rank)]
    return tuple(sorted(zip(row, col)))


def is_isomorphic(a: CartanMatrix, b: CartanMatrix) -> tuple[int, ...] | None:
    """Return ``perm`` with ``b.permuted(perm) == a``, or None.

    Backtracking over assignments, pruned by per-index (row, column) entry
    multisets and by consistency with already-placed indices.
    """
    n = a.rank
    if b.rank != n:
        return None
    inv_a = [_invariant(a, i) for i in range(n)]
    inv_b = [_invariant(b, i) for i in range(n)]
    if sorted(inv_a) != sorted(inv_b):
        return None
    candidates = [[j for j in range(n) if inv_b[j] == inv_a[i]] for i in range(n)]
    order = sorted(range(n), key=lambda i: len(candidates[i]))
    perm: list[int | None] = [None] * n
    used = [False] * n

    def place(k: int) -> bool:
        if k == n:
            return True
        i = order[k]
        for j in candidates[i]:
            if used[j]:
                continue
            ok = True
            for i2 in order[:k]:
                j2 = perm[i2]
                if a[i, i2] != b[j, j2] or a[i2, i] != b[j2, j]:
                    ok = False
                    break
            if ok:
                perm[i] = j
                used[j] = True
                if place(k + 1):
                    return True
                used[j] = False
                perm[i] = None
        return False

    if not place(0):
        return None
    return tuple(perm)
