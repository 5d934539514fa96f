"""Theorem-independent exact computation of graph invariants and flags.

Everything here reads only vertex count and bitset adjacency rows, so the
functions accept either a full relative Cayley graph or the induced subgroup
graph.  These values are the ground truth that the prediction layer is
audited against; none of them consult group structure.

Algorithms are exact searches sized for graphs of at most 64 vertices:
branch-and-bound cliques and covers, memoized matching, backtracking
colorings, and plain BFS.  Ties always break toward the lowest vertex
index, so results are reproducible bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import CapacityError, InternalConsistencyError
from .group_core import default_max_order

__all__ = [
    "InvariantReport",
    "StructureFlags",
    "invariant_report",
    "structure_flags",
    "diameter_components",
    "max_clique",
    "max_independent_set",
    "min_vertex_cover",
    "max_matching",
    "matching_edges",
    "min_dominating_set",
    "min_edge_cover",
    "chromatic_number",
    "edge_chromatic_number",
    "DEFAULT_EDGE_COLOR_CUTOFF",
]

DEFAULT_EDGE_COLOR_CUTOFF = 40


def _bits(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def _edge_list(n: int, adj: Sequence[int]) -> list[tuple[int, int]]:
    out = []
    for v in range(n):
        row = adj[v] >> (v + 1)
        u = v + 1
        while row:
            if row & 1:
                out.append((v, u))
            row >>= 1
            u += 1
    return out


# --------------------------------------------------------------------------
# Cliques, independence, covers


def max_clique(n: int, adj: Sequence[int]) -> int:
    best = 0

    def expand(cand: int, size: int) -> None:
        nonlocal best
        if size + cand.bit_count() <= best:
            return
        if not cand:
            best = size
            return
        v = (cand & -cand).bit_length() - 1
        expand(cand & adj[v], size + 1)
        rest = cand & ~(1 << v)
        if size + rest.bit_count() > best:
            expand(rest, size)

    expand((1 << n) - 1, 0)
    return best


def max_independent_set(n: int, adj: Sequence[int]) -> int:
    full = (1 << n) - 1
    comp = [full & ~adj[v] & ~(1 << v) for v in range(n)]
    return max_clique(n, comp)


def min_vertex_cover(n: int, adj: Sequence[int]) -> int:
    """Exact minimum vertex cover via edge branching.

    Deliberately not derived from the independence number, so the Gallai
    identity stays a real cross-check.
    """
    best = n

    def matching_lower_bound(remaining: int) -> int:
        used = 0
        count = 0
        for v in _bits(remaining):
            if used >> v & 1:
                continue
            nb = adj[v] & remaining & ~used
            if nb:
                used |= (nb & -nb) | (1 << v)
                count += 1
        return count

    def recurse(remaining: int, size: int) -> None:
        nonlocal best
        if size >= best:
            return
        pick = -1
        pick_deg = 0
        for v in _bits(remaining):
            deg = (adj[v] & remaining).bit_count()
            if deg > pick_deg:
                pick, pick_deg = v, deg
        if pick < 0:
            best = size
            return
        if size + matching_lower_bound(remaining) >= best:
            return
        nb = adj[pick] & remaining
        # taking the vertex, or else all of its neighbors
        recurse(remaining & ~(1 << pick), size + 1)
        recurse(remaining & ~nb & ~(1 << pick), size + nb.bit_count())

    recurse((1 << n) - 1, 0)
    return best


def max_matching(n: int, adj: Sequence[int]) -> int:
    return len(matching_edges(n, adj))


def matching_edges(n: int, adj: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """One maximum matching, lowest-index greedy among optimal choices."""
    sizes: dict[int, int] = {}

    def size_of(avail: int) -> int:
        known = sizes.get(avail)
        if known is not None:
            return known
        v = -1
        probe = avail
        while probe:
            cand = (probe & -probe).bit_length() - 1
            if adj[cand] & avail:
                v = cand
                break
            probe &= probe - 1
        if v < 0:
            sizes[avail] = 0
            return 0
        best = size_of(avail & ~(1 << v))
        for u in _bits(adj[v] & avail):
            got = 1 + size_of(avail & ~(1 << v) & ~(1 << u))
            if got > best:
                best = got
        sizes[avail] = best
        return best

    edges: list[tuple[int, int]] = []
    avail = (1 << n) - 1
    while True:
        target = size_of(avail)
        if target == 0:
            return tuple(edges)
        v = -1
        probe = avail
        while probe:
            cand = (probe & -probe).bit_length() - 1
            if adj[cand] & avail:
                v = cand
                break
            probe &= probe - 1
        if size_of(avail & ~(1 << v)) == target:
            avail &= ~(1 << v)
            continue
        for u in _bits(adj[v] & avail):
            if 1 + size_of(avail & ~(1 << v) & ~(1 << u)) == target:
                edges.append((v, u) if v < u else (u, v))
                avail &= ~(1 << v) & ~(1 << u)
                break


def min_dominating_set(n: int, adj: Sequence[int]) -> int:
    """Exact domination number.

    Starts from a greedy upper bound and branches on the vertex that is
    hardest to dominate, trying each member of its closed neighborhood.
    """
    if n == 0:
        return 0
    closed = [adj[v] | (1 << v) for v in range(n)]
    full = (1 << n) - 1

    dominated = 0
    greedy = 0
    while dominated != full:
        gain_best, pick = -1, -1
        for v in range(n):
            gain = (closed[v] & ~dominated).bit_count()
            if gain > gain_best:
                gain_best, pick = gain, v
        dominated |= closed[pick]
        greedy += 1
    best = greedy

    def recurse(dominated: int, size: int) -> None:
        nonlocal best
        if size >= best:
            return
        undominated = full & ~dominated
        if not undominated:
            best = size
            return
        # most-constrained undominated vertex
        pick, options = -1, n + 1
        for v in _bits(undominated):
            count = closed[v].bit_count()
            if count < options:
                pick, options = v, count
        for u in _bits(closed[pick]):
            recurse(dominated | closed[u], size + 1)

    recurse(0, 0)
    return best


def min_edge_cover(n: int, adj: Sequence[int]) -> Optional[int]:
    """Minimum edge cover size, or None when an isolated vertex exists.

    Built constructively: a maximum matching plus one edge per uncovered
    vertex.  The construction is validated before the size is returned.
    """
    if any(adj[v] == 0 for v in range(n)):
        return None
    chosen = set(matching_edges(n, adj))
    covered = 0
    for u, v in chosen:
        covered |= (1 << u) | (1 << v)
    for v in range(n):
        if covered >> v & 1:
            continue
        u = (adj[v] & -adj[v]).bit_length() - 1
        chosen.add((v, u) if v < u else (u, v))
        covered |= (1 << u) | (1 << v)
    if covered != (1 << n) - 1:
        raise InternalConsistencyError("edge cover construction missed a vertex")
    expected = n - max_matching(n, adj)
    if len(chosen) != expected:
        raise InternalConsistencyError(
            f"edge cover size {len(chosen)} differs from n - matching = {expected}"
        )
    return len(chosen)


# --------------------------------------------------------------------------
# Colorings


def _greedy_coloring_bound(n: int, adj: Sequence[int]) -> int:
    colors: dict[int, int] = {}
    used = 0
    for v in range(n):
        taken = {colors[u] for u in _bits(adj[v]) if u in colors}
        c = 0
        while c in taken:
            c += 1
        colors[v] = c
        used = max(used, c + 1)
    return max(used, 1)


def _k_colorable(n: int, adj: Sequence[int], k: int) -> bool:
    avail = [(1 << k) - 1 for _ in range(n)]
    color = [-1] * n

    def place(done: int) -> bool:
        if done == n:
            return True
        # most-constrained uncolored vertex
        pick, pick_count = -1, k + 1
        for v in range(n):
            if color[v] < 0:
                count = avail[v].bit_count()
                if count == 0:
                    return False
                if count < pick_count:
                    pick, pick_count = v, count
        cap = min(k, max(color) + 2 if done else 1)
        options = avail[pick] & ((1 << cap) - 1)
        for c in _bits(options):
            color[pick] = c
            touched = []
            ok = True
            for u in _bits(adj[pick]):
                if color[u] < 0 and avail[u] >> c & 1:
                    avail[u] &= ~(1 << c)
                    touched.append(u)
                    if avail[u] == 0:
                        ok = False
            if ok and place(done + 1):
                return True
            for u in touched:
                avail[u] |= 1 << c
            color[pick] = -1
        return False

    return place(0)


def chromatic_number(n: int, adj: Sequence[int]) -> int:
    if n == 0:
        return 0
    if all(row == 0 for row in adj):
        return 1
    low = max_clique(n, adj)
    high = _greedy_coloring_bound(n, adj)
    for k in range(low, high):
        if _k_colorable(n, adj, k):
            return k
    return high


def edge_chromatic_number(
    n: int, adj: Sequence[int], cutoff: int = DEFAULT_EDGE_COLOR_CUTOFF
) -> Optional[int]:
    """Exact edge chromatic number, or None above the edge-count cutoff."""
    edges = _edge_list(n, adj)
    m = len(edges)
    if m == 0:
        return 0
    if m > cutoff:
        return None
    line_adj = [0] * m
    for i in range(m):
        si = set(edges[i])
        for j in range(i + 1, m):
            if si & set(edges[j]):
                line_adj[i] |= 1 << j
                line_adj[j] |= 1 << i
    delta = max(row.bit_count() for row in adj)
    if _k_colorable(m, line_adj, delta):
        result = delta
    else:
        result = delta + 1
        if not _k_colorable(m, line_adj, result):
            raise InternalConsistencyError("edge coloring exceeded delta + 1")
    return result


# --------------------------------------------------------------------------
# Distances and flags


def _bfs_mask_distances(n: int, adj: Sequence[int], source: int) -> list[int]:
    dist = [-1] * n
    dist[source] = 0
    frontier = 1 << source
    seen = frontier
    step = 0
    while frontier:
        step += 1
        reach = 0
        for v in _bits(frontier):
            reach |= adj[v]
        frontier = reach & ~seen
        seen |= frontier
        for v in _bits(frontier):
            dist[v] = step
    return dist


def diameter_components(graph) -> tuple[tuple[tuple[int, ...], ...], Optional[int]]:
    """Connected components (sorted by least vertex) and the diameter.

    The diameter is None when the graph is disconnected.
    """
    n, adj = graph.n, graph.adjacency
    comps: list[tuple[int, ...]] = []
    assigned = 0
    for v in range(n):
        if assigned >> v & 1:
            continue
        dist = _bfs_mask_distances(n, adj, v)
        members = tuple(u for u in range(n) if dist[u] >= 0)
        for u in members:
            assigned |= 1 << u
        comps.append(members)
    if len(comps) > 1:
        return tuple(comps), None
    diameter = 0
    for v in range(n):
        dist = _bfs_mask_distances(n, adj, v)
        diameter = max(diameter, max(dist))
    return tuple(comps), diameter


def _is_bipartite(n: int, adj: Sequence[int]) -> bool:
    side = [-1] * n
    for start in range(n):
        if side[start] >= 0:
            continue
        side[start] = 0
        stack = [start]
        while stack:
            v = stack.pop()
            for u in _bits(adj[v]):
                if side[u] < 0:
                    side[u] = side[v] ^ 1
                    stack.append(u)
                elif side[u] == side[v]:
                    return False
    return True


def _has_triangle(n: int, adj: Sequence[int]) -> bool:
    for v, u in _edge_list(n, adj):
        if adj[v] & adj[u]:
            return True
    return False


def _has_square_subgraph(n: int, adj: Sequence[int]) -> bool:
    # a 4-cycle exists iff two vertices share at least two neighbors
    for v in range(n):
        for u in range(v + 1, n):
            if (adj[v] & adj[u] & ~(1 << v) & ~(1 << u)).bit_count() >= 2:
                return True
    return False


def _has_induced_claw(n: int, adj: Sequence[int]) -> bool:
    for v in range(n):
        nb = _bits(adj[v])
        if len(nb) < 3:
            continue
        for i, a in enumerate(nb):
            for b in nb[i + 1:]:
                if adj[a] >> b & 1:
                    continue
                third = adj[v] & ~adj[a] & ~adj[b] & ~(1 << a) & ~(1 << b)
                if third:
                    return True
    return False


@dataclass(frozen=True)
class StructureFlags:
    connected: bool
    bipartite: bool
    forest: bool
    tree: bool
    triangle_free: bool
    square_subgraph_free: bool
    claw_free: bool
    regular: bool
    semi_regular: bool

    def __post_init__(self) -> None:
        if self.tree and not (self.forest and self.connected):
            raise InternalConsistencyError("tree flag without forest+connected")
        if self.forest and not (self.square_subgraph_free and self.triangle_free):
            raise InternalConsistencyError("forest flag with a short cycle present")
        if self.bipartite and not self.triangle_free:
            raise InternalConsistencyError("bipartite flag with a triangle present")


def structure_flags(graph) -> StructureFlags:
    n, adj = graph.n, graph.adjacency
    comps, _ = diameter_components(graph)
    edge_total = sum(row.bit_count() for row in adj) // 2
    degrees = sorted({row.bit_count() for row in adj})
    connected = len(comps) == 1
    forest = edge_total == n - len(comps)
    return StructureFlags(
        connected=connected,
        bipartite=_is_bipartite(n, adj),
        forest=forest,
        tree=forest and connected,
        triangle_free=not _has_triangle(n, adj),
        square_subgraph_free=not _has_square_subgraph(n, adj),
        claw_free=not _has_induced_claw(n, adj),
        regular=len(degrees) == 1,
        semi_regular=len(degrees) == 2,
    )


# --------------------------------------------------------------------------
# Full report


@dataclass(frozen=True)
class InvariantReport:
    clique_number: int
    independence_number: int
    matching_number: int
    domination_number: int
    vertex_cover_number: int
    edge_cover_number: Optional[int]
    chromatic_number: int
    edge_chromatic_number: Optional[int]
    diameter: Optional[int]
    component_count: int


def invariant_report(
    graph, *, edge_color_cutoff: int = DEFAULT_EDGE_COLOR_CUTOFF
) -> InvariantReport:
    """All numeric invariants of a graph, by exhaustive search.

    The edge chromatic number is skipped (None) above the edge-count
    cutoff; the edge cover number is None when isolated vertices exist;
    the diameter is None when the graph is disconnected.
    """
    n, adj = graph.n, graph.adjacency
    cap = default_max_order()
    if n > cap:
        raise CapacityError(f"oracle graph has {n} vertices, above the cap {cap}")
    comps, diameter = diameter_components(graph)
    report = InvariantReport(
        clique_number=max_clique(n, adj),
        independence_number=max_independent_set(n, adj),
        matching_number=max_matching(n, adj),
        domination_number=min_dominating_set(n, adj),
        vertex_cover_number=min_vertex_cover(n, adj),
        edge_cover_number=min_edge_cover(n, adj),
        chromatic_number=chromatic_number(n, adj),
        edge_chromatic_number=edge_chromatic_number(n, adj, edge_color_cutoff),
        diameter=diameter,
        component_count=len(comps),
    )
    if report.independence_number + report.vertex_cover_number != n:
        raise InternalConsistencyError("Gallai identity alpha + cover = n fails")
    if report.clique_number > report.chromatic_number:
        raise InternalConsistencyError("clique exceeds chromatic number")
    if report.edge_cover_number is not None:
        if report.matching_number + report.edge_cover_number != n:
            raise InternalConsistencyError("Gallai identity on edges fails")
    if report.edge_chromatic_number is not None and n > 0:
        delta = max(row.bit_count() for row in adj)
        if not delta <= report.edge_chromatic_number <= delta + 1:
            raise InternalConsistencyError("edge chromatic outside Vizing range")
    return report
