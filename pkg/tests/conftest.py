"""Shared strategies and independent oracles for the test-suite."""

from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath
from hypothesis import strategies as st

from dynkin.diagram import CoxeterDiagram
from dynkin.exactnum import QF

mpmath.mp.dps = 60

small_fracs = st.fractions(min_value=-50, max_value=50, max_denominator=40)
qf_elements = st.builds(QF, small_fracs, small_fracs, small_fracs, small_fracs)


def mp_value(x: QF):
    """High-precision float of a field element (independent of QF.sign)."""
    a, b, c, d = (mpmath.mpf(v.numerator) / v.denominator for v in x.coords)
    return a + b * mpmath.sqrt(2) + c * mpmath.sqrt(3) + d * mpmath.sqrt(6)


@st.composite
def random_trees(draw, max_order=9, min_order=1):
    """A multiplicity-labelled tree on 0..n-1 (parent of v drawn below v)."""
    n = draw(st.integers(min_order, max_order))
    edges = []
    for v in range(1, n):
        u = draw(st.integers(0, v - 1))
        edges.append((u, v, draw(st.sampled_from((1, 2, 3)))))
    perm = draw(st.permutations(range(n)))
    return CoxeterDiagram(n, tuple((perm[u], perm[v], m) for u, v, m in edges))


def prufer_trees(n):
    """Every labelled tree on n vertices (Prüfer decoding); n >= 2."""
    if n == 2:
        yield [(0, 1)]
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for x in seq:
            degree[x] += 1
        edges = []
        for x in seq:
            leaf = min(v for v in range(n) if degree[v] == 1)
            edges.append((leaf, x))
            degree[leaf] -= 1
            degree[x] -= 1
        u, v = [w for w in range(n) if degree[w] == 1]
        edges.append((u, v))
        yield edges


def brute_force_tree_classes(n):
    """Number of multiplicity-labelled trees on n vertices up to isomorphism,
    by orbit representatives under all n! relabellings."""
    if n == 1:
        return 1
    seen = set()
    perms = list(itertools.permutations(range(n)))
    classes = 0
    for edges in prufer_trees(n):
        for mults in itertools.product((1, 2, 3), repeat=n - 1):
            key = frozenset((min(u, v), max(u, v), m) for (u, v), m in zip(edges, mults))
            if key in seen:
                continue
            classes += 1
            for p in perms:
                seen.add(frozenset((min(p[u], p[v]), max(p[u], p[v]), m) for u, v, m in key))
    return classes


def fraction_det(rows):
    """Determinant over Q by cofactor-free Gaussian elimination on Fractions."""
    m = [[Fraction(x) for x in r] for r in rows]
    n, det = len(m), Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    return det
