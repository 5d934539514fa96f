"""Graph construction, degree bookkeeping, and DOT export tests."""
from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from relcay.errors import (
    ConnectionSetError,
    GroupMismatchError,
    ImproperSubgroupError,
)
from relcay.graphs import (
    ConnectionSet,
    DotOptions,
    build_relcay,
    connection_set_count,
    enumerate_connection_sets,
    export_dot,
    inverse_orbits,
    make_connection_set,
)
from relcay.group_core import Subgroup, generated_subgroup, make_group


def instance(spec, h_names, c_names):
    g = make_group(spec)
    h = generated_subgroup(g.element_set(g.element(n) for n in h_names))
    c = ConnectionSet(g, (g.element(n) for n in c_names))
    return build_relcay(g, h, c)


def d5_corona():
    return instance("D5", ["a"], ["a", "a4", "b"])


def c4_cycle():
    return instance("C4", ["a2"], ["a", "a3"])


# --------------------------------------------------------------------------
# Connection sets


def test_connection_set_accepts_inverse_pair():
    g = make_group("C4")
    c = make_connection_set(g, [g.element("a"), g.element("a3")])
    assert c.members == (1, 3)


def test_connection_set_rejects_missing_inverse():
    g = make_group("C4")
    with pytest.raises(ConnectionSetError) as err:
        make_connection_set(g, [g.element("a")])
    assert "a3" in str(err.value)


def test_connection_set_rejects_identity():
    g = make_group("C4")
    with pytest.raises(ConnectionSetError):
        make_connection_set(g, [0, g.element("a2")])


def test_inverse_orbits_and_counts():
    c3 = make_group("C3")
    assert inverse_orbits(c3) == ((1, 2),)
    assert connection_set_count(c3) == 2
    c2 = make_group("C2")
    assert inverse_orbits(c2) == ((1,),)
    assert connection_set_count(c2) == 2
    c4 = make_group("C4")
    assert connection_set_count(c4) == 4


@pytest.mark.parametrize("spec", ["C2", "C3", "C4", "C6", "S3", "D4", "Q8"])
def test_enumerate_connection_sets_is_exact_and_unique(spec):
    g = make_group(spec)
    sets = list(enumerate_connection_sets(g))
    assert len(sets) == connection_set_count(g)
    assert len({s.members for s in sets}) == len(sets)
    assert sets[0].members == ()
    # cross-check against a direct filter of all subsets for tiny groups
    if g.order <= 6:
        expected = 0
        for r in range(g.order):
            for combo in itertools.combinations(range(1, g.order), r):
                if all(g.inv[x] in combo for x in combo):
                    expected += 1
        assert len(sets) == expected


# --------------------------------------------------------------------------
# Graph construction


def test_c4_instance_is_the_4_cycle():
    graph = c4_cycle()
    assert brute.edges_of(graph) == {
        frozenset((0, 1)),
        frozenset((1, 2)),
        frozenset((2, 3)),
        frozenset((0, 3)),
    }


def test_d5_instance_is_a_corona_5_cycle():
    graph = d5_corona()
    edges = brute.edges_of(graph)
    assert len(edges) == 10
    degs = graph.degrees
    assert sorted(degs) == [1] * 5 + [3] * 5
    # pendants attach to the 5-cycle on the rotation subgroup
    cycle_vertices = {v for v in range(10) if degs[v] == 3}
    assert cycle_vertices == set(graph.h.members)


def test_empty_connection_set_gives_edgeless_graph():
    graph = instance("S3", ["(12)"], [])
    assert all(row == 0 for row in graph.adjacency)
    assert graph.edge_count == 0


def test_build_rejects_full_subgroup():
    g = make_group("C4")
    h = Subgroup(g, range(4))
    with pytest.raises(ImproperSubgroupError):
        build_relcay(g, h, ConnectionSet(g, [1, 3]))


def test_build_rejects_mismatched_groups():
    g1, g2 = make_group("C4"), make_group("C2xC2")
    h = Subgroup(g1, [0, 2])
    with pytest.raises(GroupMismatchError):
        build_relcay(g2, h, ConnectionSet(g2, [1]))


def test_adjacency_matches_definition_pointwise():
    graph = instance("S3", ["(12)"], ["(12)", "(123)", "(132)"])
    g = graph.group
    in_h = set(graph.h.members)
    c = set(graph.c.members)
    for x in range(g.order):
        for y in range(g.order):
            expected = (
                x != y and (x in in_h or y in in_h) and g.mul[g.inv[x]][y] in c
            )
            assert graph.is_edge(x, y) == expected


def test_outside_vertices_form_an_independent_set():
    for graph in (d5_corona(), c4_cycle(), instance("D4", ["a2", "b"], ["a", "a3", "b"])):
        non_h = [x for x in range(graph.n) if not graph.h_mask >> x & 1]
        for x, y in itertools.combinations(non_h, 2):
            assert not graph.is_edge(x, y)


# --------------------------------------------------------------------------
# Degree profile and edge count


def test_degree_profile_d5():
    profile = d5_corona().degree_profile
    assert profile.coset_degrees[0] == 3
    assert profile.distinct_valencies == (1, 3)
    assert profile.max_degree == 3


def test_degree_profile_c4_cycle_regular():
    profile = c4_cycle().degree_profile
    assert profile.distinct_valencies == (2,)


def test_degree_profile_empty_connection_set():
    profile = instance("C6", ["a2"], []).degree_profile
    assert profile.distinct_valencies == (0,)


def test_degrees_constant_on_h_cosets_but_not_always_left_cosets():
    # In S3 with H = <(12)> and C = {(13)}, the left coset of (13) mixes
    # degrees 1 and 0, while cosets Hx have constant degree.
    graph = instance("S3", ["(12)"], ["(13)"])
    g = graph.group
    x = g.element("(13)")
    left_partner = g.mul[x][g.element("(12)")]
    assert graph.degrees[x] != graph.degrees[left_partner]
    profile = graph.degree_profile
    assert profile.distinct_valencies == (0, 1)


def test_subgroup_vertices_have_degree_c():
    for graph in (d5_corona(), c4_cycle(), instance("Q8", ["-1"], ["i", "-i"])):
        for v in graph.h.members:
            assert graph.degrees[v] == len(graph.c)


def test_edge_count_formula_examples():
    assert d5_corona().edge_count == 10
    assert c4_cycle().edge_count == 4
    assert instance("C6", ["a3"], []).edge_count == 0


def test_valency_count_bound_holds_everywhere_small():
    # |D(Gamma)| <= min{[G:H], |H|+2} <= floor(sqrt(|G|+1)) + 1
    import math

    for spec in ["C6", "S3", "D4", "C2xC2"]:
        g = make_group(spec)
        from relcay.group_core import enumerate_subgroups

        for h in enumerate_subgroups(g):
            if not h.is_proper:
                continue
            for c in enumerate_connection_sets(g):
                profile = build_relcay(g, h, c).degree_profile
                count = len(profile.distinct_valencies)
                assert count <= min(g.order // len(h), len(h) + 2)
                assert count <= math.isqrt(g.order + 1) + 1


# --------------------------------------------------------------------------
# Induced Cayley subgraph


def test_induced_subgraph_of_d5_is_a_5_cycle():
    induced = d5_corona().induced
    assert induced.n == 5
    assert induced.edge_count == 5
    assert all(row.bit_count() == 2 for row in induced.adjacency)


def test_induced_subgraph_empty_when_c_misses_h():
    induced = c4_cycle().induced
    assert induced.edge_count == 0


def test_induced_subgraph_triangle_in_c6():
    graph = instance("C6", ["a2"], ["a2", "a4"])
    induced = graph.induced
    assert induced.n == 3
    assert induced.edge_count == 3


def test_induced_edges_listed_in_parent_indices():
    induced = d5_corona().induced
    edges = induced.edges()
    assert len(edges) == 5
    assert all(u < v for u, v in edges)
    assert edges == tuple(sorted(edges))


# --------------------------------------------------------------------------
# DOT export


def test_dot_export_counts_c4():
    text = export_dot(c4_cycle())
    node_lines = [l for l in text.splitlines() if "coset=" in l]
    edge_lines = [l for l in text.splitlines() if " -- " in l]
    assert len(node_lines) == 4
    assert len(edge_lines) == 4


def test_dot_export_counts_and_marks_d5():
    text = export_dot(d5_corona())
    node_lines = [l for l in text.splitlines() if "coset=" in l]
    edge_lines = [l for l in text.splitlines() if " -- " in l]
    assert len(node_lines) == 10
    assert len(edge_lines) == 10
    assert sum("gprime=1" in l for l in edge_lines) == 5
    assert sum("gprime=0" in l for l in edge_lines) == 5


def test_dot_export_edgeless_graph_has_nodes_only():
    text = export_dot(instance("C4", ["a2"], []))
    assert sum(" -- " in l for l in text.splitlines()) == 0
    assert sum("coset=" in l for l in text.splitlines()) == 4


def test_dot_export_is_deterministic_and_ring_layout_parses():
    graph = d5_corona()
    assert export_dot(graph) == export_dot(graph)
    ringed = export_dot(graph, DotOptions(rings=True))
    assert ringed.count('pos="') == 10


# --------------------------------------------------------------------------
# Properties


@st.composite
def random_instance(draw):
    spec = draw(st.sampled_from(["C6", "C8", "S3", "D4", "Q8", "C2xC4"]))
    g = make_group(spec)
    from relcay.group_core import enumerate_subgroups

    proper = [h for h in enumerate_subgroups(g) if h.is_proper]
    h = draw(st.sampled_from(proper))
    orbits = inverse_orbits(g)
    chosen = draw(st.sets(st.sampled_from(range(len(orbits))), max_size=len(orbits)))
    members = [x for i in chosen for x in orbits[i]]
    return build_relcay(g, h, ConnectionSet(g, members))


@settings(max_examples=80, deadline=None)
@given(random_instance())
def test_adjacency_symmetry_property(graph):
    for x in range(graph.n):
        for y in range(graph.n):
            assert graph.is_edge(x, y) == graph.is_edge(y, x)


@settings(max_examples=80, deadline=None)
@given(random_instance())
def test_edge_count_and_profile_self_checks_pass(graph):
    assert graph.edge_count == len(brute.edges_of(graph))
    profile = graph.degree_profile
    assert profile.max_degree == max(graph.degrees)
    assert set(profile.distinct_valencies) == set(graph.degrees)
