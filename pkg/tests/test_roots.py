from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynkin.cartan import validate_cartan
from dynkin.diagram import orient, parse_diagram
from dynkin.errors import NotFiniteWithinGuard, NotSymmetrisable
from dynkin.roots import (
    generate_roots,
    gram_closure,
    root_norms,
    simple_reflection,
    verify_root_system,
    with_roots,
)

A2 = validate_cartan([[2, -1], [-1, 2]])
B2 = validate_cartan([[2, -1], [-2, 2]])
G2 = validate_cartan([[2, -1], [-3, 2]])


def _cartan(text, dirs=()):
    return orient(parse_diagram(text), list(dirs))


FAMILIES = {
    "A1": (_cartan("*"), 2),
    "A2": (A2, 6),
    "B2": (B2, 8),
    "G2": (G2, 12),
    "B3": (_cartan("*=*-*", [(1, 0)]), 18),
    "C3": (_cartan("*=*-*", [(0, 1)]), 18),
    "D4": (_cartan("(*,*)>*-*"), 24),
    "F4": (_cartan("*-*=*-*", [(2, 1)]), 48),
    "D5": (_cartan("(*,*)>*-*-*"), 40),
    "E6": (_cartan("(*-*,*)>*-*-*"), 72),
    "E7": (_cartan("(*-*,*)>*-*-*-*"), 126),
}


def test_reflection_examples():
    assert simple_reflection(A2, 0, (1, 0)) == (-1, 0)
    assert simple_reflection(A2, 0, (0, 1)) == (1, 1)
    assert simple_reflection(G2, 1, (1, 0)) == (1, 3)
    with pytest.raises(IndexError):
        simple_reflection(A2, 2, (1, 0))


@settings(max_examples=200)
@given(st.sampled_from(["A2", "B2", "G2", "F4", "E6"]), st.data())
def test_reflection_is_an_involution(name, data):
    a = FAMILIES[name][0]
    i = data.draw(st.integers(0, a.rank - 1))
    k = tuple(data.draw(st.lists(st.integers(-50, 50), min_size=a.rank, max_size=a.rank)))
    assert simple_reflection(a, i, simple_reflection(a, i, k)) == k


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_counts_and_verification(name):
    a, count = FAMILIES[name]
    rs = generate_roots(a)
    assert len(rs) == count
    assert set(rs.roots) == {tuple(-x for x in r) for r in rs.roots}
    assert set(rs.roots) == gram_closure(a)
    assert verify_root_system(rs).ok


def test_e8_count():
    rs = generate_roots(_cartan("(*-*,*)>*-*-*-*-*"))
    assert len(rs) == 240
    assert verify_root_system(rs).ok


def _rank2_brute_force(a, box=6):
    # roots of a rank-2 system = nonzero integer vectors whose norm is a simple-root norm
    rs = generate_roots(a)
    g = rs.gram.gram()
    simple = {g[0][0], g[1][1]}
    out = set()
    for v in itertools.product(range(-box, box + 1), repeat=2):
        if v == (0, 0):
            continue
        norm = sum(v[i] * g[i][j] * v[j] for i in range(2) for j in range(2))
        if norm in simple:
            out.add(v)
    return out


@pytest.mark.parametrize("a", [A2, B2, G2], ids=["A2", "B2", "G2"])
def test_rank_two_matches_brute_force(a):
    assert set(generate_roots(a).roots) == _rank2_brute_force(a)


@pytest.mark.parametrize("name", ["B3", "F4", "E6"])
def test_schedule_independence(name):
    a = FAMILIES[name][0]
    base = generate_roots(a).roots
    for perm in itertools.islice(itertools.permutations(range(a.rank)), 24):
        assert generate_roots(a, schedule=perm).roots == base


def test_a_chain_counts_grow():
    counts = [len(generate_roots(_cartan("-".join("*" * l)))) for l in range(1, 7)]
    assert counts == [l * (l + 1) for l in range(1, 7)]
    assert counts == sorted(set(counts))


def test_norms():
    assert root_norms(generate_roots(A2)) == {1: 6}
    nb = root_norms(generate_roots(B2))
    assert sorted(nb.values()) == [4, 4] and max(nb) / min(nb) == 2
    ng = root_norms(generate_roots(G2))
    assert sorted(ng.values()) == [6, 6] and max(ng) / min(ng) == 3
    assert generate_roots(B2).to_json()["norms"] == {"1/2": 4, "1": 4}


def test_broken_systems_are_caught():
    rs = generate_roots(A2)
    missing = with_roots(rs, [r for r in rs.roots if r != (1, 1)])
    rep = verify_root_system(missing)
    assert not rep.closed and "closed" in rep.witnesses
    doubled = with_roots(rs, list(rs.roots) + [(2, 0)])
    rep = verify_root_system(doubled)
    assert not rep.reduced and [2, 0] in rep.witnesses["reduced"]
    mixed = with_roots(rs, list(rs.roots) + [(1, -1), (-1, 1)])
    assert not verify_root_system(mixed).sign_coherent


@pytest.mark.parametrize("dirs", [[(1, 2)], [(2, 1)]])
def test_non_positive_definite_chain_trips_guard(dirs):
    a = _cartan("*-*=*-*-*", dirs)
    with pytest.raises(NotFiniteWithinGuard) as info:
        generate_roots(a, guard=100)
    assert info.value.trigger == "coefficient"
    assert max(abs(x) for x in info.value.witness) > 100


def test_size_guard():
    a = _cartan("(*-*,*)>*-*-*-*-*")
    with pytest.raises(NotFiniteWithinGuard) as info:
        generate_roots(a, max_roots=100)
    assert info.value.trigger == "size"


def test_not_symmetrisable_propagates():
    with pytest.raises(NotSymmetrisable):
        generate_roots(validate_cartan([[2, -1, -1], [-2, 2, -1], [-1, -1, 2]]))


def test_json_shape():
    js = generate_roots(A2).to_json()
    assert js["rank"] == 2 and js["count"] == 6
    assert js["roots"] == sorted(js["roots"])
