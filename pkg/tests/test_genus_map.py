import itertools

import pytest
from hypothesis import given

from circle_genus.circle_core import CircleGraph, all_trees, crossing_table, reflect, rotate
from circle_genus.genus_map import build_rotation_system, face_count, genus
from circle_genus.reduction import final_offspring

from .graphs import CROSS_TREE, GENUS_TWO, WORKED
from .strategies import graphs


def test_rotation_without_chords():
    rs = build_rotation_system(CircleGraph(4, ()))
    assert all(len(rs.rotation_at(v)) == 2 for v in range(1, 5))


def test_rotation_with_one_chord():
    rs = build_rotation_system(CircleGraph(4, ((1, 3),)))
    assert rs.rotation_at(1) == [("arc", 2), ("chord", 3), ("arc", 4)]


def test_rotation_worked_tree():
    rs = build_rotation_system(WORKED)
    assert rs.rotation_at(2) == [("arc", 3), ("chord", 3), ("chord", 7), ("arc", 1)]


@given(graphs())
def test_rotation_system_shape(G):
    rs = build_rotation_system(G)
    assert rs.dart_count == 2 * (len(G.edges) + G.n)
    assert all(rs.iota[rs.iota[d]] == d != rs.iota[d] for d in range(rs.dart_count))
    # one rho-cycle per point
    seen, cycles = set(), 0
    for d in range(rs.dart_count):
        if d not in seen:
            cycles += 1
            while d not in seen:
                seen.add(d)
                d = rs.rho[d]
    assert cycles == G.n


def test_genus_examples():
    path = CircleGraph(6, tuple((i, i + 1) for i in range(1, 6)))
    assert genus(path) == 0
    assert genus(CROSS_TREE) == 1
    assert genus(GENUS_TWO) == 2


@given(graphs())
def test_euler_gap_even_and_nonnegative(G):
    rs = build_rotation_system(G)
    gap = 2 - G.n + len(G.edges) + G.n - face_count(rs)
    assert gap >= 0 and gap % 2 == 0


@given(graphs())
def test_dihedral_invariance(G):
    g = genus(G)
    assert genus(rotate(G)) == g
    assert genus(reflect(G)) == g


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_genus_zero_iff_no_crossing(n):
    for T in all_trees(n):
        has_cross = any(crossing_table(T).values())
        assert (genus(T) == 0) == (not has_cross)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_reduction_steps_preserve_genus(n):
    for T in all_trees(n):
        g = genus(T)
        _, trace = final_offspring(T)
        assert all(genus(H) == g for H in trace.offspring())


def test_genus_of_small_chord_diagrams():
    # exhaustive over every chord set on 5 points
    pairs = [(a, b) for a in range(1, 6) for b in range(a + 1, 6)]
    for r in range(len(pairs) + 1):
        for chosen in itertools.combinations(pairs, r):
            G = CircleGraph(5, chosen)
            if not any(crossing_table(G).values()):
                assert genus(G) == 0
