"""Relative Cayley graphs.

The graph on all of G in which {x, y} is an edge exactly when at least one
endpoint lies in the subgroup H and the quotient x^-1 y lies in the
connection set C.  Adjacency is stored as one bitset row per vertex, and the
degree and edge-count formulas are asserted inside the accessors, so a graph
that violates them cannot be observed from outside.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import (
    ConnectionSetError,
    GroupMismatchError,
    ImproperSubgroupError,
    InternalConsistencyError,
)
from .group_core import ElementSet, GroupTable, Subgroup, right_coset

__all__ = [
    "ConnectionSet",
    "make_connection_set",
    "inverse_orbits",
    "connection_set_count",
    "enumerate_connection_sets",
    "RelCayGraph",
    "build_relcay",
    "DegreeProfile",
    "InducedCayleyGraph",
    "DotOptions",
    "export_dot",
]


class ConnectionSet(ElementSet):
    """An inverse-closed set of non-identity elements.

    Invalid input is rejected, never repaired.
    """

    def __init__(self, group: GroupTable, members: Iterable[int] = ()) -> None:
        super().__init__(group, members)
        if group.identity in self._member_set:
            raise ConnectionSetError("connection set must not contain the identity")
        for x in self.members:
            if group.inv[x] not in self._member_set:
                raise ConnectionSetError(
                    f"connection set is not inverse closed: {group.names[x]} is in "
                    f"but its inverse {group.names[group.inv[x]]} is not"
                )


def make_connection_set(group: GroupTable, members: Iterable[int]) -> ConnectionSet:
    return ConnectionSet(group, members)


def inverse_orbits(group: GroupTable) -> tuple[tuple[int, ...], ...]:
    """Orbits of the inversion map on non-identity elements.

    Involutions give singleton orbits; other elements pair with their
    inverses.  Ordered by smallest member.
    """
    orbits = []
    seen = set()
    for x in range(group.order):
        if x == group.identity or x in seen:
            continue
        orbit = tuple(sorted({x, group.inv[x]}))
        seen.update(orbit)
        orbits.append(orbit)
    return tuple(orbits)


def connection_set_count(group: GroupTable) -> int:
    return 1 << len(inverse_orbits(group))


def enumerate_connection_sets(group: GroupTable) -> Iterator[ConnectionSet]:
    """Every inverse-closed subset of the non-identity elements, once each.

    Deterministic: orbit subsets are visited in binary-counter order, so the
    empty set comes first and the full set last.
    """
    orbits = inverse_orbits(group)
    for counter in range(1 << len(orbits)):
        members: list[int] = []
        for i, orbit in enumerate(orbits):
            if counter >> i & 1:
                members.extend(orbit)
        yield ConnectionSet(group, members)


@dataclass(frozen=True)
class DegreeProfile:
    """Vertex degrees grouped by the cosets Hx, on which they are constant.

    The coset of the identity is H itself, whose degree is |C|.
    ``distinct_valencies`` is the set of distinct degrees over all vertices.
    """

    coset_representatives: tuple[int, ...]
    coset_degrees: tuple[int, ...]
    distinct_valencies: tuple[int, ...]
    max_degree: int

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.coset_representatives, self.coset_degrees))


@dataclass(frozen=True, eq=False)
class RelCayGraph:
    """Immutable relative Cayley graph with bitset adjacency rows."""

    group: GroupTable
    h: Subgroup
    c: ConnectionSet
    adjacency: tuple[int, ...]
    h_mask: int

    def __post_init__(self) -> None:
        n = self.group.order
        for x in range(n):
            if self.adjacency[x] >> x & 1:
                raise InternalConsistencyError("adjacency has a self loop")
            row = self.adjacency[x]
            y = 0
            while row:
                if row & 1 and not self.adjacency[y] >> x & 1:
                    raise InternalConsistencyError("adjacency is not symmetric")
                row >>= 1
                y += 1
            if not self.h_mask >> x & 1 and self.adjacency[x] & ~self.h_mask:
                raise InternalConsistencyError(
                    "vertices outside the subgroup must form an independent set"
                )

    @property
    def n(self) -> int:
        return self.group.order

    def is_edge(self, x: int, y: int) -> bool:
        return bool(self.adjacency[x] >> y & 1)

    def neighbors(self, x: int) -> tuple[int, ...]:
        row = self.adjacency[x]
        out = []
        y = 0
        while row:
            if row & 1:
                out.append(y)
            row >>= 1
            y += 1
        return tuple(out)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(row.bit_count() for row in self.adjacency)

    @cached_property
    def edge_count(self) -> int:
        counted = sum(self.degrees) // 2
        h_size = len(self.h)
        overlap = len(self.h.intersection(self.c))
        total = h_size * (2 * len(self.c) - overlap)
        if total % 2 or counted != total // 2:
            raise InternalConsistencyError(
                f"edge total {counted} disagrees with the closed form "
                f"|H|(2|C|-|H n C|)/2 = {total / 2}"
            )
        return counted

    @cached_property
    def degree_profile(self) -> DegreeProfile:
        g = self.group
        degrees = self.degrees
        reps: list[int] = []
        per_coset: list[int] = []
        covered = 0
        c_mask = self.c.mask
        for x in range(g.order):
            if covered >> x & 1:
                continue
            coset = right_coset(self.h, x)
            covered |= coset.mask
            first = coset.members[0]
            reps.append(first)
            deg = degrees[first]
            for y in coset.members:
                if degrees[y] != deg:
                    raise InternalConsistencyError(
                        f"degree not constant on coset of {g.names[first]}"
                    )
                if self.h_mask >> y & 1:
                    formula = len(self.c)
                else:
                    # outside the subgroup, deg(y) = |y^-1 H n C|
                    inv_y = g.inv[y]
                    formula = sum(
                        1 for h_elt in self.h.members
                        if c_mask >> g.mul[inv_y][h_elt] & 1
                    )
                if formula != degrees[y]:
                    raise InternalConsistencyError(
                        f"degree formula fails at {g.names[y]}"
                    )
            per_coset.append(deg)
        if per_coset[0] != len(self.c):
            raise InternalConsistencyError("subgroup vertices must have degree |C|")
        return DegreeProfile(
            coset_representatives=tuple(reps),
            coset_degrees=tuple(per_coset),
            distinct_valencies=tuple(sorted(set(per_coset))),
            max_degree=max(per_coset),
        )

    @cached_property
    def induced(self) -> "InducedCayleyGraph":
        return InducedCayleyGraph._build(self)

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return (
            f"RelCayGraph({self.group.spec}, |H|={len(self.h)}, |C|={len(self.c)})"
        )


def build_relcay(group: GroupTable, h: Subgroup, c: ConnectionSet) -> RelCayGraph:
    """Construct the graph; the subgroup must be proper."""
    if h.group is not group or c.group is not group:
        raise GroupMismatchError("subgroup and connection set must share the group")
    if not h.is_proper:
        raise ImproperSubgroupError(
            "the whole group is not allowed as the subgroup argument"
        )
    n = group.order
    mul = group.mul
    h_mask = h.mask
    rows = []
    for x in range(n):
        row = 0
        mul_x = mul[x]
        if h_mask >> x & 1:
            for cc in c.members:
                row |= 1 << mul_x[cc]
        else:
            for cc in c.members:
                y = mul_x[cc]
                if h_mask >> y & 1:
                    row |= 1 << y
        rows.append(row)
    return RelCayGraph(group=group, h=h, c=c, adjacency=tuple(rows), h_mask=h_mask)


@dataclass(frozen=True, eq=False)
class InducedCayleyGraph:
    """The subgraph induced on the subgroup's vertices.

    This is itself the Cayley graph of H with generating set H n C; vertices
    are re-indexed 0..|H|-1 in parent order, with ``vertices`` giving the
    parent element indices.
    """

    parent: RelCayGraph
    vertices: tuple[int, ...]
    generators: ElementSet
    adjacency: tuple[int, ...]

    @classmethod
    def _build(cls, parent: RelCayGraph) -> "InducedCayleyGraph":
        g = parent.group
        vertices = parent.h.members
        pos = {v: i for i, v in enumerate(vertices)}
        generators = parent.h.intersection(parent.c)
        rows = []
        for v in vertices:
            row = 0
            sub = parent.adjacency[v] & parent.h_mask
            u = 0
            while sub:
                if sub & 1:
                    row |= 1 << pos[u]
                sub >>= 1
                u += 1
            expected = 0
            for gen in generators.members:
                expected |= 1 << pos[g.mul[v][gen]]
            if row != expected:
                raise InternalConsistencyError(
                    "induced subgraph disagrees with the Cayley construction "
                    f"at {g.names[v]}"
                )
            rows.append(row)
        return cls(
            parent=parent,
            vertices=vertices,
            generators=generators,
            adjacency=tuple(rows),
        )

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adjacency) // 2

    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as parent-index pairs, each sorted, in lexicographic order."""
        out = []
        for i, v in enumerate(self.vertices):
            row = self.adjacency[i] >> (i + 1)
            j = i + 1
            while row:
                if row & 1:
                    out.append((v, self.vertices[j]))
                row >>= 1
                j += 1
        return tuple(sorted(out))


@dataclass(frozen=True)
class DotOptions:
    graph_name: str = "relcay"
    rings: bool = False
    ring_spacing: float = 1.6


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(graph: RelCayGraph, options: DotOptions | None = None) -> str:
    """Deterministic DOT text for the graph.

    Every node carries a ``coset`` attribute naming the smallest element of
    its coset Hx; every edge carries ``gprime`` which is 1 exactly when both
    endpoints lie in the subgroup.  With ``rings`` enabled, nodes get pinned
    positions on concentric circles, one circle per coset.
    """
    opts = options or DotOptions()
    g = graph.group
    profile = graph.degree_profile
    rep_of: dict[int, int] = {}
    for rep in profile.coset_representatives:
        for y in right_coset(graph.h, rep).members:
            rep_of[y] = rep
    lines = [f"graph {opts.graph_name} {{"]
    ring_of = {rep: i for i, rep in enumerate(profile.coset_representatives)}
    for x in range(g.order):
        attrs = [f"coset={_dot_quote(g.names[rep_of[x]])}"]
        if opts.rings:
            ring = ring_of[rep_of[x]]
            radius = opts.ring_spacing * (ring + 1)
            coset_members = right_coset(graph.h, rep_of[x]).members
            slot = coset_members.index(x)
            angle = 2 * math.pi * slot / len(coset_members)
            attrs.append(
                f'pos="{radius * math.cos(angle):.4f},'
                f'{radius * math.sin(angle):.4f}!"'
            )
        lines.append(f"  {_dot_quote(g.names[x])} [{', '.join(attrs)}];")
    h_mask = graph.h_mask
    for x in range(g.order):
        row = graph.adjacency[x] >> (x + 1)
        y = x + 1
        while row:
            if row & 1:
                inside = h_mask >> x & 1 and h_mask >> y & 1
                lines.append(
                    f"  {_dot_quote(g.names[x])} -- {_dot_quote(g.names[y])} "
                    f"[gprime={1 if inside else 0}];"
                )
            row >>= 1
            y += 1
    lines.append("}")
    return "\n".join(lines) + "\n"
