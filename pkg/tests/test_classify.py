from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_force_tree_classes, fraction_det, random_trees
from dynkin.classify import (
    GenCoxeterDiagram,
    classify_connected,
    classify_text,
    determinant,
    minor_sequence,
    node_reduce,
    sylvester_pd,
)
from dynkin.diagram import CoxeterDiagram, coxeter_to_sym, parse_diagram
from dynkin.enumeration import enumerate_connected, tree_code, unicyclic_code
from dynkin.errors import BoundExceeded, NotConnected, PatternMismatch
from dynkin.exactnum import QF, SQRT2, SQRT_HALF, sqrt_multiplicity

H = Fraction(1, 2)


def test_minor_examples():
    assert list(minor_sequence([1, 1, 1]).p) == [1, 2, 3, 4, 5]
    seq = minor_sequence([1, 2, 1, 1])
    assert list(seq.p) == [1, 2, 3, 2, 1, 0]
    assert seq.first_nonpositive == 5
    assert list(minor_sequence([3]).p) == [1, 2, 1]
    e = minor_sequence([H, H, 2, 1, 1, 1, 1, 1, 1])
    assert list(e.p)[2:] == [Fraction(7, 2), 6, 5, 4, 3, 2, 1, 0, -1]
    assert e.to_json()[2] == "7/2"


def test_minors_need_positive_entries():
    with pytest.raises(ValueError):
        minor_sequence([1, 0])


def _tridiagonal(t):
    n = len(t) + 1
    rows = [[QF(0)] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = QF(2)
    for i, ti in enumerate(t):
        rows[i][i + 1] = rows[i + 1][i] = -sqrt_multiplicity(ti)
    return rows


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from([H, 1, 2, 3]), min_size=0, max_size=10))
def test_last_minor_is_the_determinant(t):
    p = minor_sequence(t).p
    assert determinant(_tridiagonal(t)) == p[-1]
    res = sylvester_pd(_tridiagonal(t))
    assert [m for m in res.minors] == list(p[1:len(res.minors) + 1])


def test_sylvester_examples():
    assert sylvester_pd([[QF(2)]]).positive_definite
    star = CoxeterDiagram(5, tuple((0, k, 1) for k in range(1, 5)))
    r = sylvester_pd(coxeter_to_sym(star))
    assert not r.positive_definite
    assert determinant(coxeter_to_sym(star)) == 0
    e8 = parse_diagram("(*-*,*)>*-*-*-*-*")
    assert sylvester_pd(coxeter_to_sym(e8)).positive_definite
    with pytest.raises(ValueError):
        sylvester_pd([[QF(2), QF(1)], [QF(0), QF(2)]])


def test_oracle_determinant_matches_rational_elimination():
    rows = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
    assert determinant([[QF(x) for x in r] for r in rows]) == fraction_det(rows) == 4


@pytest.mark.parametrize("mults", [
    m for k in range(1, 6) for m in itertools.combinations_with_replacement((1, 2, 3), k)
])
def test_star_determinant(mults):
    l = len(mults) + 1
    star = CoxeterDiagram(l, tuple((0, k + 1, m) for k, m in enumerate(mults)))
    m = sum(mults)
    assert determinant(coxeter_to_sym(star)) == 2 ** (l - 2) * (4 - m)


def test_node_reduce_blocks():
    y = node_reduce(coxeter_to_sym(parse_diagram("(*,*)>*-*-*")), "Y")
    assert y[1, 2] == -SQRT2 and y[0, 1] == 0 and y[0, 2] == 0
    assert GenCoxeterDiagram.from_sym(y).text() == "* *=*-*-*"
    e = node_reduce(coxeter_to_sym(parse_diagram("(*-*,*)>*-*-*")), "E")
    assert e[0, 1] == -SQRT_HALF and e[1, 2] == -SQRT_HALF and e[2, 3] == -SQRT2
    assert GenCoxeterDiagram.from_sym(e).text() == "*~*~*=*-*-*"
    h_order = [0, 2, 1, 3, 4, 5, 6]
    h = node_reduce(coxeter_to_sym(parse_diagram("(*-*,*-*)>*-*-*"), h_order), "H")
    assert GenCoxeterDiagram.from_sym(h).text() == "*-* *-*=*-*-*"


def test_node_reduce_rejects_wrong_layout():
    with pytest.raises(PatternMismatch):
        node_reduce(coxeter_to_sym(parse_diagram("*-*-*-*")), "Y")
    with pytest.raises(PatternMismatch):
        node_reduce(coxeter_to_sym(parse_diagram("(*-*,*-*)>*-*")), "H")
    with pytest.raises(ValueError):
        node_reduce(coxeter_to_sym(parse_diagram("*")), "Q")


_HEADS = {"Y": ("(*,*)>*", None), "E": ("(*-*,*)>*", None), "H": ("(*-*,*-*)>*", [0, 2, 1, 3, 4])}


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(sorted(_HEADS)), st.lists(st.sampled_from("-=#"), min_size=0, max_size=4))
def test_node_reduce_is_a_congruence(case, tail):
    head, order = _HEADS[case]
    # the node meets the rest by a single line
    text = head + "".join(e + "*" for e in ["-"] + tail)
    d = parse_diagram(text)
    if order is not None:
        order = order + list(range(len(order), d.order))
    b = coxeter_to_sym(d, order)
    b2 = node_reduce(b, case)
    assert sylvester_pd(b).positive_definite == sylvester_pd(b2).positive_definite
    assert determinant(b) == determinant(b2)


@pytest.mark.parametrize("text, pd, label", [
    ("*-*=*-*", True, "F4"),
    ("(*-*,*)>*-*-*-*-*-*", False, None),
    ("*=*-*=*", False, None),
    ("(*,*)>*-*", True, "D4"),
    ("(*,*)>*", True, "A3"),
    ("*", True, "A1"),
    ("*#*", True, "G2"),
    ("*=*", True, "B/C2"),
    ("*=*-*-*", True, "B/C4"),
    ("(*-*,*)>*-*-*-*-*", True, "E8"),
    ("(*-*,*)>*-*-*-*", True, "E7"),
    ("(*-*,*-*)>*-*", True, "E6"),
    ("(*-*,*-*)>*-*-*", False, None),
    ("(*-*-*,*-*-*)>*-*", False, None),
    ("(*,*)>*=*", False, None),
    ("*#*-*", False, None),
])
def test_classify_examples(text, pd, label):
    r = classify_text(text)
    assert r.positive_definite is pd
    assert r.label == label
    assert sylvester_pd(coxeter_to_sym(parse_diagram(text))).positive_definite is pd


def test_e9_witness_is_the_reduced_minor():
    r = classify_text("(*-*,*)>*-*-*-*-*-*")
    assert r.witness["first_nonpositive"] == 9
    assert r.minors.p[9] == 0


def test_two_doubles_witness():
    r = classify_text("*=*-*=*")
    assert r.witness["proposition"] == 4
    assert r.minors.to_json() == ["1", "2", "2", "2", "0"]


def test_cycle_rejected_with_form_value():
    tri = CoxeterDiagram(3, ((0, 1, 1), (1, 2, 1), (0, 2, 1)))
    r = classify_connected(tri)
    assert not r.positive_definite and r.witness["proposition"] == 1


def test_disconnected_input_rejected():
    with pytest.raises(NotConnected):
        classify_connected(CoxeterDiagram(2, ()))


def test_isotropic_vector_for_long_arms():
    r = classify_text("(*-*-*,*-*-*)>*-*")
    vec = r.witness["vector"]
    sub = [v - 1 for v in r.witness["subdiagram"]]
    d = parse_diagram("(*-*-*,*-*-*)>*-*")
    b = coxeter_to_sym(d.subdiagram(sorted(sub)))
    x = dict(zip(sub, vec))
    xs = [x[v] for v in sorted(sub)]
    n = len(xs)
    assert sum(xs[i] * b[i, j] * xs[j] for i in range(n) for j in range(n)) == 0


def test_enumeration_examples():
    two = list(enumerate_connected(2, min_rank=2))
    assert len(two) == 3 and sorted(e[2] for d in two for e in d.edges) == [1, 2, 3]
    assert len(list(enumerate_connected(3, min_rank=3))) == 6
    assert len(list(enumerate_connected(3))) == 1 + 3 + 6
    with pytest.raises(BoundExceeded):
        list(enumerate_connected(10))


def test_triangles_are_not_positive_definite():
    tri = [d for d in enumerate_connected(3, include_cycles=True, min_rank=3) if not d.is_forest()]
    assert len(tri) == 10
    assert not any(classify_connected(d).positive_definite for d in tri)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_tree_counts_match_brute_force(n):
    assert len(list(enumerate_connected(n, min_rank=n))) == brute_force_tree_classes(n)


def _brute_unicyclic(n):
    pairs = list(itertools.combinations(range(n), 2))
    perms = list(itertools.permutations(range(n)))
    seen, classes = set(), 0
    for es in itertools.combinations(pairs, n):
        d = CoxeterDiagram(n, tuple((u, v, 1) for u, v in es))
        if not d.is_connected():
            continue
        for ms in itertools.product((1, 2, 3), repeat=n):
            key = frozenset((u, v, m) for (u, v), m in zip(es, ms))
            if key in seen:
                continue
            classes += 1
            for p in perms:
                seen.add(frozenset((min(p[u], p[v]), max(p[u], p[v]), m) for u, v, m in key))
    return classes


@pytest.mark.parametrize("n", [3, 4])
def test_unicyclic_counts_match_brute_force(n):
    got = [d for d in enumerate_connected(n, include_cycles=True, min_rank=n) if not d.is_forest()]
    assert len(got) == _brute_unicyclic(n)


@settings(max_examples=200, deadline=None)
@given(random_trees(max_order=9), st.data())
def test_canonical_code_is_invariant(d, data):
    perm = data.draw(st.permutations(range(d.order)))
    assert tree_code(d.relabel(perm)) == tree_code(d)


def test_deterministic_order():
    a = [d.to_json() for d in enumerate_connected(5, include_cycles=True)]
    b = [d.to_json() for d in enumerate_connected(5, include_cycles=True)]
    assert a == b


def _all_ones_form(d):
    b = coxeter_to_sym(d)
    return sum((b[i, j] for i in range(d.order) for j in range(d.order)), QF(0))


def test_all_ones_identity_on_small_diagrams():
    for d in enumerate_connected(6, include_cycles=True):
        expect = 2 * (d.order - sum((sqrt_multiplicity(m) for _, _, m in d.edges), QF(0)))
        assert _all_ones_form(d) == expect


@settings(max_examples=200, deadline=None)
@given(random_trees(max_order=9), st.data())
def test_subdiagram_monotonicity(d, data):
    keep = data.draw(st.lists(st.integers(0, d.order - 1), min_size=1, unique=True))
    sub = d.subdiagram(sorted(keep))
    sub_pd = all(classify_connected(sub.subdiagram(c)).positive_definite for c in sub.components())
    if not sub_pd:
        assert not classify_connected(d).positive_definite


@settings(max_examples=300, deadline=None)
@given(random_trees(max_order=9))
def test_classifier_agrees_with_oracle(d):
    assert classify_connected(d).positive_definite == sylvester_pd(coxeter_to_sym(d)).positive_definite
