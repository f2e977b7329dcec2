import math
from fractions import Fraction
from itertools import combinations, permutations

import networkx as nx
import pytest
from hypothesis import given
from networkx.algorithms.isomorphism import GraphMatcher

from lowdeg_lab.graphs import LabeledGraph, complete_graph, relabel
from lowdeg_lab.iso import (
    EMPTY_CLASS,
    aut_count,
    canonical_form,
    census_csv,
    classes_from_components,
    count_embeddings,
    count_monomorphisms,
    enumerate_classes,
    enumerate_connected_classes,
    is_isomorphic,
    labeled_copy_count,
    max_edge_density,
    parse_census_csv,
    unlabeled_tree_counts,
)

from strategies import graph_and_subgraph, graphs, permutations as perms


def brute_aut(g: LabeledGraph) -> int:
    vs = g.vertices
    es = g.edge_set
    count = 0
    for img in permutations(vs):
        m = dict(zip(vs, img))
        if all(((m[a], m[b]) if m[a] < m[b] else (m[b], m[a])) in es for a, b in g.edges):
            count += 1
    return count


def nx_graph(g: LabeledGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_edges_from(g.edges)
    return h


P3 = LabeledGraph([(1, 2), (2, 3)])
TWO_K2 = LabeledGraph([(1, 2), (3, 4)])


def test_canonical_form_examples():
    assert canonical_form(LabeledGraph([(5, 9)])) == canonical_form(LabeledGraph([(1, 2)]))
    assert canonical_form(LabeledGraph([(7, 4), (4, 8)])) == canonical_form(P3)
    assert canonical_form(P3) != canonical_form(TWO_K2)
    assert canonical_form(LabeledGraph()) == EMPTY_CLASS


@pytest.mark.parametrize("edges, aut", [
    ([(1, 2)], 2),
    ([(1, 2), (2, 3), (1, 3)], 6),
    ([(1, 2), (1, 3), (1, 4)], 6),
    ([(1, 2), (2, 3), (3, 4)], 2),
    ([(1, 2), (2, 3), (3, 4), (1, 4)], 8),
    ([(1, 2), (3, 4)], 8),
])
def test_aut_examples(edges, aut):
    assert aut_count(LabeledGraph(edges)) == aut


@given(graphs(max_label=7, max_edges=10))
def test_aut_matches_brute_force(g):
    assert aut_count(g) == brute_aut(g)


@given(graphs(max_label=8, max_edges=10), perms(8))
def test_canonical_form_constant_on_orbits(g, pi):
    assert canonical_form(relabel(g, pi)) == canonical_form(g)


@given(graphs(max_label=6, max_edges=7), graphs(max_label=6, max_edges=7))
def test_isomorphism_agrees_with_networkx(s, t):
    expected = s.e_count == t.e_count and nx.is_isomorphic(nx_graph(s), nx_graph(t))
    assert is_isomorphic(s, t) == expected


def test_canon_is_a_fixed_point_on_contiguous_labels():
    for level in enumerate_classes(5).values():
        for c in level:
            assert c.canon.vertices == tuple(range(1, c.v_count + 1))
            assert canonical_form(c.canon) == c
            assert c.aut == brute_aut(c.canon) if c.v_count <= 7 else c.aut >= 1


def test_class_counts_and_second_route():
    counts = [len(v) for v in enumerate_classes(6).values()]
    assert counts == [1, 1, 2, 5, 11, 26, 68]
    other = classes_from_components(6)
    for k in range(7):
        assert [c.canon for c in enumerate_classes(6)[k]] == [c.canon for c in other[k]]


def test_class_counts_exhaustive_oracle():
    # canonicalize every labeled graph with k edges on 2k vertices
    for k in range(1, 5):
        pairs = [(i, j) for i in range(1, 2 * k + 1) for j in range(i + 1, 2 * k + 1)]
        seen = set()
        for combo in combinations(pairs, k):
            seen.add(canonical_form(LabeledGraph(combo)).canon)
        assert len(seen) == len(enumerate_classes(k)[k])


def test_connected_classes():
    conn = enumerate_connected_classes(5)
    # connected graphs by edge count: 1, 1, 3, 5, 12
    assert [len(conn[k]) for k in range(1, 6)] == [1, 1, 3, 5, 12]


def test_tree_counts():
    counts = unlabeled_tree_counts(10)
    assert [counts[v] for v in range(1, 11)] == [1, 1, 1, 2, 3, 6, 11, 23, 47, 106]


def test_tree_counts_match_filter():
    from lowdeg_lab.iso import is_tree

    trees = enumerate_classes(6, filter=is_tree)
    by_v = {}
    for level in trees.values():
        for c in level:
            by_v[c.v_count] = by_v.get(c.v_count, 0) + 1
    assert [by_v[v] for v in range(2, 8)] == [1, 1, 2, 3, 6, 11]


def test_enumeration_ceiling():
    with pytest.raises(ValueError):
        enumerate_classes(9)
    with pytest.raises(ValueError):
        enumerate_classes(-1)


@pytest.mark.parametrize("edges, n, expected", [
    ([(1, 2)], 4, 6),
    ([(1, 2), (2, 3), (1, 3)], 5, 10),
    ([(1, 2), (2, 3)], 4, 12),
    ([(1, 2), (2, 3)], 2, 0),
])
def test_copy_count_examples(edges, n, expected):
    assert labeled_copy_count(canonical_form(LabeledGraph(edges)), n) == expected


def test_copy_count_identity():
    for level in enumerate_classes(4).values():
        for c in level:
            for n in range(c.v_count, 10):
                assert labeled_copy_count(c, n) * c.aut == math.perm(n, c.v_count)


def test_embedding_examples():
    k4 = complete_graph(4)
    tri = canonical_form(complete_graph(3))
    edge = canonical_form(LabeledGraph([(1, 2)]))
    assert count_embeddings(tri, k4) == 4
    assert count_embeddings(edge, k4) == 6
    assert count_embeddings(canonical_form(complete_graph(5)), k4) == 0


@given(graphs(max_label=6, max_edges=7), graphs(max_label=5, max_edges=3, min_edges=1))
def test_monomorphisms_match_networkx(s, h):
    gm = GraphMatcher(nx_graph(s), nx_graph(h))
    expected = sum(1 for _ in gm.subgraph_monomorphisms_iter())
    assert count_monomorphisms(h, s) == expected


@given(graphs(max_label=6, max_edges=6), graphs(max_label=4, max_edges=3))
def test_embeddings_match_subset_scan(s, h):
    c = canonical_form(h)
    scan = sum(
        1 for r in [h.e_count] for combo in combinations(s.edges, r)
        if canonical_form(LabeledGraph(combo)).canon == c.canon
    )
    assert count_embeddings(c, s) == scan


def brute_density(g: LabeledGraph) -> Fraction:
    best = Fraction(0)
    vs = g.vertices
    for r in range(1, len(vs) + 1):
        for w in combinations(vs, r):
            h = g.induced(w)
            if h.e_count:
                best = max(best, Fraction(h.e_count, h.v_count))
    return best


def test_density_examples():
    assert max_edge_density(canonical_form(complete_graph(3))) == 1
    assert max_edge_density(canonical_form(complete_graph(4))) == Fraction(3, 2)
    star = canonical_form(LabeledGraph([(1, 2), (1, 3), (1, 4)]))
    assert max_edge_density(star) == Fraction(3, 4)
    assert max_edge_density(EMPTY_CLASS) == 0


@given(graphs(max_label=7, max_edges=10))
def test_density_matches_brute_force(g):
    assert max_edge_density(g) == brute_density(g)


@given(graph_and_subgraph())
def test_aut_growth_bound(pair):
    t, s = pair
    if t.e_count:
        assert aut_count(s) <= aut_count(t) * t.v_count ** (2 * (t.e_count - s.e_count))


def test_census_csv_roundtrip():
    classes = enumerate_classes(3)
    text = census_csv(classes)
    assert text.splitlines()[0] == "edge_count,class_index,v_count,aut,canonical_edge_list"
    back = parse_census_csv(text)
    assert back == [c for level in classes.values() for c in level]
