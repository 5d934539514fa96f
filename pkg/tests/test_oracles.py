"""Oracle cross-validation against the deliberately naive brutes.

The library oracles use branch-and-bound and bitset tricks; brute.py uses
subset scans and Floyd-Warshall.  Agreement over every small instance is
what lets the audit treat the oracle side as ground truth.
"""
from __future__ import annotations

import pytest

import brute
from relcay.errors import CapacityError
from relcay.graphs import ConnectionSet, build_relcay, enumerate_connection_sets
from relcay.group_core import enumerate_subgroups, generated_subgroup, make_group
from relcay.oracles import (
    chromatic_number,
    diameter_components,
    edge_chromatic_number,
    invariant_report,
    max_clique,
    max_independent_set,
    max_matching,
    matching_edges,
    min_dominating_set,
    min_edge_cover,
    min_vertex_cover,
    structure_flags,
)


def instance(spec, h_names, c_names):
    g = make_group(spec)
    h = generated_subgroup(g.element_set(g.element(n) for n in h_names))
    c = ConnectionSet(g, (g.element(n) for n in c_names))
    return build_relcay(g, h, c)


def all_instances(spec):
    g = make_group(spec)
    for h in enumerate_subgroups(g):
        if not h.is_proper:
            continue
        for c in enumerate_connection_sets(g):
            yield build_relcay(g, h, c)


# --------------------------------------------------------------------------
# Frozen example values


def test_c4_cycle_invariants():
    report = invariant_report(instance("C4", ["a2"], ["a", "a3"]))
    assert report.clique_number == 2
    assert report.independence_number == 2
    assert report.matching_number == 2
    assert report.domination_number == 2
    assert report.vertex_cover_number == 2
    assert report.edge_cover_number == 2
    assert report.chromatic_number == 2
    assert report.edge_chromatic_number == 2
    assert report.diameter == 2
    assert report.component_count == 1


def test_d5_corona_invariants():
    report = invariant_report(instance("D5", ["a"], ["a", "a4", "b"]))
    assert report.clique_number == 2
    assert report.independence_number == 5
    assert report.matching_number == 5
    assert report.vertex_cover_number == 5
    assert report.domination_number == 5
    assert report.edge_cover_number == 5
    assert report.chromatic_number == 3
    assert report.edge_chromatic_number == 3
    assert report.diameter == 4


def test_edgeless_graph_invariants():
    report = invariant_report(instance("C6", ["a2"], []))
    assert report.independence_number == 6
    assert report.domination_number == 6
    assert report.matching_number == 0
    assert report.edge_cover_number is None
    assert report.chromatic_number == 1
    assert report.diameter is None
    assert report.component_count == 6


def test_induced_chromatic_numbers_of_the_two_d5_instances():
    fig1 = instance("D5", ["a"], ["a", "a4", "b"])
    fig2 = instance("D5", ["a"], ["a", "a4", "b", "ab", "a4b"])
    for graph in (fig1, fig2):
        induced = graph.induced
        assert chromatic_number(induced.n, induced.adjacency) == 3
    assert invariant_report(fig1).chromatic_number == 3
    assert invariant_report(fig2).chromatic_number == 4


def test_diameter_components_examples():
    comps, diam = diameter_components(instance("C4", ["a2"], ["a", "a3"]))
    assert len(comps) == 1 and diam == 2
    comps, diam = diameter_components(instance("C4", ["a2"], ["a2"]))
    assert diam is None
    assert comps == ((0, 2), (1,), (3,))
    comps, diam = diameter_components(instance("D5", ["a"], ["a", "a4", "b"]))
    assert len(comps) == 1 and diam == 4


def test_structure_flags_examples():
    flags = structure_flags(instance("C4", ["a2"], ["a", "a3"]))
    assert flags.connected and flags.bipartite and flags.regular
    assert not flags.forest and not flags.square_subgraph_free
    assert flags.triangle_free and flags.claw_free

    tree = structure_flags(instance("S3", ["(12)"], ["(12)", "(13)", "(23)"]))
    assert tree.tree and tree.forest and tree.connected

    corona = structure_flags(instance("D5", ["a"], ["a", "a4", "b"]))
    assert corona.connected and not corona.bipartite
    assert corona.triangle_free and corona.square_subgraph_free
    assert not corona.claw_free
    assert corona.semi_regular


def test_edge_color_cutoff_skips():
    graph = instance("D5", ["a"], ["a", "a4", "b", "ab", "a4b"])
    assert graph.edge_count == 20
    report = invariant_report(graph, edge_color_cutoff=10)
    assert report.edge_chromatic_number is None
    assert edge_chromatic_number(graph.n, graph.adjacency, cutoff=40) == 5


def test_capacity_guard(monkeypatch):
    graph = instance("C6", ["a2"], ["a", "a5"])
    monkeypatch.setenv("RELCAY_MAX_ORDER", "4")
    with pytest.raises(CapacityError):
        invariant_report(graph)


def test_matching_edges_form_a_matching():
    graph = instance("D5", ["a"], ["a", "a4", "b"])
    edges = matching_edges(graph.n, graph.adjacency)
    assert len(edges) == 5
    used = [v for e in edges for v in e]
    assert len(used) == len(set(used))
    assert all(graph.is_edge(u, v) for u, v in edges)


# --------------------------------------------------------------------------
# Exhaustive cross-checks against the naive brutes


CROSS_SPECS = ["C4", "C6", "S3", "D4"]


@pytest.mark.parametrize("spec", CROSS_SPECS)
def test_oracles_match_brutes_everywhere(spec):
    for graph in all_instances(spec):
        n, adj = graph.n, graph.adjacency
        edges = brute.edges_of(graph)
        assert max_clique(n, adj) == brute.brute_max_clique(n, edges)
        assert max_independent_set(n, adj) == brute.brute_max_independent(n, edges)
        assert min_vertex_cover(n, adj) == brute.brute_min_vertex_cover(n, edges)
        assert max_matching(n, adj) == brute.brute_max_matching(n, edges)
        assert min_dominating_set(n, adj) == brute.brute_min_dominating(n, edges)
        assert chromatic_number(n, adj) == brute.brute_chromatic(n, edges)
        if len(edges) <= 10:
            assert min_edge_cover(n, adj) == brute.brute_min_edge_cover(n, edges)
            assert edge_chromatic_number(n, adj) == brute.brute_edge_chromatic(
                n, edges
            )


@pytest.mark.parametrize("spec", CROSS_SPECS)
def test_flags_and_diameter_match_brutes_everywhere(spec):
    for graph in all_instances(spec):
        n, adj = graph.n, graph.adjacency
        edges = brute.edges_of(graph)
        comps, diam = diameter_components(graph)
        assert diam == brute.brute_diameter(n, edges)
        assert {frozenset(c) for c in comps} == set(
            brute.brute_components(n, edges)
        )
        flags = structure_flags(graph)
        assert flags.bipartite == brute.brute_is_bipartite(n, edges)
        assert flags.triangle_free == (not brute.brute_has_triangle(n, edges))
        assert flags.square_subgraph_free == (not brute.brute_has_square(n, edges))
        assert flags.claw_free == (not brute.brute_has_induced_claw(n, edges))
        assert flags.forest == brute.brute_is_forest(n, edges)
        assert flags.connected == (len(brute.brute_components(n, edges)) == 1)


def test_report_self_checks_run_over_q8():
    # the report constructor enforces the Gallai and Vizing relations
    for graph in all_instances("Q8"):
        report = invariant_report(graph)
        assert report.independence_number + report.vertex_cover_number == 8
        if report.edge_cover_number is not None:
            assert report.matching_number + report.edge_cover_number == 8
