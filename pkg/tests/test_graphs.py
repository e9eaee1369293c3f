from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tripack.graphs import (
    Graph,
    Triangle,
    VertexPartition,
    cross_edge_count,
    density,
    induced_edge_count,
    mask_of,
    read_edge_list,
    triangles_containing,
    union,
    write_edge_list,
)


def test_triangle_canonical_order():
    t = Triangle.of(5, 1, 3)
    assert (t.i, t.j, t.k) == (1, 3, 5)
    assert set(t.edges()) == {(1, 3), (1, 5), (3, 5)}


def test_complete_graph_counts():
    g = Graph.complete(7)
    assert g.edge_count == 21
    assert all(g.degree(v) == 6 for v in range(7))
    assert g.triangle_count == 35  # C(7,3)


def test_triangles_lexicographic():
    g = Graph.complete(5)
    tris = list(g.triangles())
    assert tris == sorted(tris)
    assert tris[0] == Triangle(0, 1, 2)
    assert tris[-1] == Triangle(2, 3, 4)


def test_from_edges_rejects_loops_and_duplicates():
    with pytest.raises(ValueError):
        Graph.from_edges(4, [(1, 1)])
    with pytest.raises(ValueError):
        Graph.from_edges(4, [(0, 1), (1, 0)])


def test_union_identity_and_idempotence():
    g = Graph.from_edges(4, [(0, 1), (1, 2)])
    assert union(g, g) == g
    assert union(g, Graph.empty(4)) == g
    # path 0-1-2 plus the closing chord is a triangle
    k3 = union(g, Graph.from_edges(4, [(0, 2)]))
    assert k3.edge_count == 3
    assert k3.triangle_count == 1


def test_union_size_mismatch():
    with pytest.raises(ValueError):
        union(Graph.empty(3), Graph.empty(4))


def test_triangles_containing():
    g = Graph.complete(5)
    assert len(triangles_containing(g, 1, 2)) == 3
    bip = Graph.from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
    assert triangles_containing(bip, 0, 2) == []
    c5_chord = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)])
    assert len(triangles_containing(c5_chord, 1, 2)) == 1


def test_triangles_containing_requires_edge():
    g = Graph.from_edges(4, [(0, 1)])
    with pytest.raises(ValueError):
        triangles_containing(g, 0, 2)


def test_density_exact():
    g = Graph.from_edges(6, [(0, 3), (0, 4), (1, 3), (2, 5)])
    assert density(g, [0, 1, 2], [3, 4, 5]) == Fraction(4, 9)
    assert density(Graph.complete(6), [0, 1, 2], [3, 4, 5]) == 1
    assert density(Graph.empty(6), [0, 1, 2], [3, 4, 5]) == 0
    with pytest.raises(ValueError):
        density(g, [0, 1], [1, 2])
    with pytest.raises(ValueError):
        density(g, [], [1, 2])


def test_induced_and_cross_edge_counts():
    g = Graph.complete(5)
    assert induced_edge_count(g, range(5)) == g.edge_count
    assert induced_edge_count(g, [2]) == 0
    assert induced_edge_count(g, [0, 2, 4]) == 3
    assert cross_edge_count(g, [0, 1], [2, 3, 4]) == 6


def test_edge_triangle_double_count():
    # sum over edges of the number of triangles through each edge equals
    # three times the triangle count
    g = Graph.from_edges(6, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (2, 4), (4, 5)])
    total = sum(len(triangles_containing(g, i, j)) for i, j in g.edges())
    assert total == 3 * g.triangle_count


def test_partition_balanced_random():
    perm = list(range(12))[::-1]
    part = VertexPartition.balanced_random(12, 4, perm)
    assert len(part) == 4
    sizes = [len(b) for b in part.blocks]
    assert sizes == [3, 3, 3, 3]
    covered = sorted(v for b in part.blocks for v in b)
    assert covered == list(range(12))
    assert mask_of(part.blocks[0]) == part.masks[0]


def test_edge_list_roundtrip(tmp_path):
    g = Graph.from_edges(6, [(0, 3), (1, 4), (2, 5), (0, 4)])
    path = tmp_path / "g.txt"
    write_edge_list(path, g, side=[0, 1, 2])
    g2, side = read_edge_list(path)
    assert g2 == g
    assert side == [0, 1, 2]


def test_edge_list_rejects_bad_input(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3 1\n2 2\n")
    with pytest.raises(ValueError):
        read_edge_list(path)
    path.write_text("3\n")
    with pytest.raises(ValueError):
        read_edge_list(path)
    path.write_text("3 2\n0 1\n0 1\n")
    with pytest.raises(ValueError):
        read_edge_list(path)


@settings(max_examples=50, deadline=None)
@given(st.integers(4, 9), st.data())
def test_random_graph_basic_invariants(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True))
    g = Graph.from_edges(n, chosen)
    assert sum(g.degree(v) for v in range(n)) == 2 * g.edge_count
    brute = sum(
        1 for a, b, c in itertools.combinations(range(n), 3)
        if g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c)
    )
    assert g.triangle_count == brute
