"""Root systems generated from a Cartan matrix by Weyl-reflection closure.

Roots are integer coefficient vectors over the simple roots.  Two closures
are provided: :func:`generate_roots` applies only the simple reflections
and uses Cartan matrix entries; :func:`gram_closure` reflects in every root
found so far, using scalar products.  For finite systems the two agree.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .cartan import CartanMatrix, SymCartanMatrix, components, symmetrise
from .errors import NotFiniteWithinGuard

Root = tuple[int, ...]

DEFAULT_GUARD = 30
MAX_ROOTS = 10**6


def simple_reflection(a: CartanMatrix, i: int, k: Sequence[int]) -> Root:
    """``w_i``: subtract ``(sum_j A_ij k_j)`` from coefficient ``i``."""
    if not 0 <= i < a.rank:
        raise IndexError(f"reflection index {i} outside 0..{a.rank - 1}")
    if len(k) != a.rank:
        raise ValueError(f"vector has length {len(k)}, expected {a.rank}")
    row = a.entries[i]
    shift = sum(row[j] * k[j] for j in range(a.rank))
    out = list(k)
    out[i] -= shift
    return tuple(out)


def _unit(n: int, i: int) -> Root:
    return tuple(1 if j == i else 0 for j in range(n))


@dataclass(frozen=True)
class RootSystem:
    cartan: CartanMatrix
    roots: tuple[Root, ...]  # lexicographically sorted
    gram: SymCartanMatrix

    @property
    def rank(self) -> int:
        return self.cartan.rank

    def __len__(self) -> int:
        return len(self.roots)

    def __contains__(self, k) -> bool:
        return tuple(k) in set(self.roots)

    def positive_roots(self) -> list[Root]:
        return [r for r in self.roots if any(x > 0 for x in r)]

    def to_json(self) -> dict:
        norms = root_norms(self)
        return {
            "rank": self.rank,
            "count": len(self.roots),
            "roots": [list(r) for r in self.roots],
            "norms": {str(k): v for k, v in sorted(norms.items())},
        }


def _closure(a: CartanMatrix, seeds: Iterable[Root], guard: int, max_roots: int,
             schedule: Sequence[int] | None = None) -> set[Root]:
    n = a.rank
    idx = list(range(n)) if schedule is None else list(schedule)
    found = set(seeds)
    queue = deque(sorted(found))
    while queue:
        k = queue.popleft()
        for i in idx:
            r = simple_reflection(a, i, k)
            if r in found:
                continue
            if any(abs(x) > guard for x in r):
                raise NotFiniteWithinGuard("coefficient", list(r), guard)
            found.add(r)
            if len(found) > max_roots:
                raise NotFiniteWithinGuard("size", None, max_roots)
            queue.append(r)
    return found


def generate_roots(a: CartanMatrix, guard: int = DEFAULT_GUARD, max_roots: int = MAX_ROOTS,
                   schedule: Sequence[int] | None = None) -> RootSystem:
    """Close the simple roots under the simple reflections.

    ``schedule`` fixes the order in which reflections are tried (it must be
    a permutation of the indices); the resulting set does not depend on it.
    Raises :class:`NotFiniteWithinGuard` when a coefficient exceeds
    ``guard`` in absolute value or more than ``max_roots`` roots appear.
    """
    if guard < 1:
        raise ValueError("guard must be at least 1")
    gram = symmetrise(a)
    if schedule is not None and sorted(schedule) != list(range(a.rank)):
        raise ValueError("schedule must be a permutation of the indices")
    found = _closure(a, (_unit(a.rank, i) for i in range(a.rank)), guard, max_roots, schedule)
    return RootSystem(a, tuple(sorted(found)), gram)


def _int_gram(s: SymCartanMatrix) -> list[list[int]]:
    g = s.gram()
    den = 1
    for row in g:
        for x in row:
            den = lcm(den, x.denominator)
    return [[int(x * den) for x in row] for row in g]


def _reflect(beta: Root, alpha: Root, g_alpha: Sequence[int], alpha_norm: int) -> Root | None:
    """``beta - (2(beta, alpha)/(alpha, alpha)) alpha``; None when the ratio is not an integer."""
    num = 2 * sum(b * x for b, x in zip(beta, g_alpha))
    if num % alpha_norm:
        return None
    c = num // alpha_norm
    if c == 0:
        return beta
    return tuple(b - c * x for b, x in zip(beta, alpha))


def gram_closure(a: CartanMatrix, guard: int = DEFAULT_GUARD, max_roots: int = MAX_ROOTS) -> set[Root]:
    """Close the simple roots under reflections in every root found, via scalar products."""
    g = _int_gram(symmetrise(a))
    n = a.rank
    found: set[Root] = {_unit(n, i) for i in range(n)}
    frontier = set(found)
    while frontier:
        mirrors = sorted(found)
        gm = [[sum(g[i][j] * r[j] for j in range(n)) for i in range(n)] for r in mirrors]
        norms = [sum(r[i] * v[i] for i in range(n)) for r, v in zip(mirrors, gm)]
        new = set()
        for beta in sorted(found):
            for alpha, ga, na in zip(mirrors, gm, norms):
                img = _reflect(beta, alpha, ga, na)
                if img is None:
                    raise ValueError(f"non-integral reflection of {beta} in {alpha}")
                if img in found or img in new:
                    continue
                if any(abs(x) > guard for x in img):
                    raise NotFiniteWithinGuard("coefficient", list(img), guard)
                new.add(img)
                if len(found) + len(new) > max_roots:
                    raise NotFiniteWithinGuard("size", None, max_roots)
        found |= new
        frontier = new
    return found


def root_norms(rs: RootSystem) -> Counter:
    """Multiset of ``(alpha, alpha)`` over the roots, in the weight normalisation."""
    g = rs.gram.gram()
    n = rs.rank
    out = Counter()
    for r in rs.roots:
        out[sum(g[i][j] * r[i] * r[j] for i in range(n) for j in range(n) if r[i] and r[j])] += 1
    return out


def root_norms_by_component(rs: RootSystem) -> list[Counter]:
    g = rs.gram.gram()
    n = rs.rank
    blocks = components(rs.cartan)
    out = [Counter() for _ in blocks]
    for r in rs.roots:
        support = {i for i in range(n) if r[i]}
        b = next(k for k, blk in enumerate(blocks) if support <= set(blk))
        out[b][sum(g[i][j] * r[i] * r[j] for i in support for j in support)] += 1
    return out


@dataclass
class VerificationReport:
    closed: bool = True
    integral: bool = True
    reduced: bool = True
    norm_bounded: bool = True
    sign_coherent: bool = True
    witnesses: dict | None = None

    @property
    def ok(self) -> bool:
        return self.closed and self.integral and self.reduced and self.norm_bounded and self.sign_coherent

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "closed": self.closed,
            "integral": self.integral,
            "reduced": self.reduced,
            "norm_bounded": self.norm_bounded,
            "sign_coherent": self.sign_coherent,
            "witnesses": self.witnesses or {},
        }


def verify_root_system(rs: RootSystem) -> VerificationReport:
    """Check the root-system properties of ``rs`` exactly.

    (a) closure under the reflection in every root, (b) integrality of
    ``2(beta, alpha)/(alpha, alpha)``, (c) reducedness, (d) every norm at
    most the largest simple-root norm, (e) coefficients of one sign.
    Scalar products come from the symmetrised matrix and the weights.
    """
    rep = VerificationReport(witnesses={})
    g = _int_gram(rs.gram)
    n = rs.rank
    roots = list(rs.roots)
    members = set(roots)
    gv = [[sum(g[i][j] * r[j] for j in range(n)) for i in range(n)] for r in roots]
    norms = [sum(r[i] * v[i] for i in range(n)) for r, v in zip(roots, gv)]

    for alpha, ga, na in zip(roots, gv, norms):
        if na <= 0:
            rep.norm_bounded = False
            rep.witnesses.setdefault("norm", [list(alpha)])
            continue
        for beta in roots:
            num = 2 * sum(b * x for b, x in zip(beta, ga))
            if num % na:
                if rep.integral:
                    rep.integral = False
                    rep.witnesses["integral"] = [list(beta), list(alpha)]
                continue
            img = tuple(b - (num // na) * x for b, x in zip(beta, alpha))
            if img not in members and rep.closed:
                rep.closed = False
                rep.witnesses["closed"] = [list(beta), list(alpha), list(img)]

    classes: dict[Root, list[Root]] = {}
    for r in roots:
        h = 0
        for x in r:
            h = gcd(h, x)
        if h == 0:
            rep.reduced = False
            rep.witnesses.setdefault("reduced", [list(r)])
            continue
        prim = tuple(x // h for x in r)
        if next(x for x in prim if x) < 0:
            prim = tuple(-x for x in prim)
        classes.setdefault(prim, []).append(r)
    for prim, group in sorted(classes.items()):
        if len(group) > 2 or (len(group) == 2 and group[0] != tuple(-x for x in group[1])):
            rep.reduced = False
            rep.witnesses.setdefault("reduced", [list(r) for r in group])
            break

    simple_max = max(g[i][i] for i in range(n))
    for r, na in zip(roots, norms):
        if na > simple_max:
            rep.norm_bounded = False
            rep.witnesses.setdefault("norm", [list(r)])
            break

    for r in roots:
        if any(x > 0 for x in r) and any(x < 0 for x in r):
            rep.sign_coherent = False
            rep.witnesses["sign"] = [list(r)]
            break
    return rep


def with_roots(rs: RootSystem, roots: Iterable[Sequence[int]]) -> RootSystem:
    """Copy of ``rs`` holding a different vector set (for checking broken inputs)."""
    return RootSystem(rs.cartan, tuple(sorted(tuple(r) for r in roots)), rs.gram)
