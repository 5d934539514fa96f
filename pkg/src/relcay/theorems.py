"""Structural predictions about relative Cayley graphs, from group arithmetic.

Every predictor here works only with multiplication-table algebra on
(G, H, C): coset counts, product sets, generated subgroups, widths.  None of
them reads graph adjacency, so the audit layer can compare their output
against the brute-force oracles as two independent computations.  The one
partial exception is the printed square condition, whose statement itself
involves vertex degrees; those are taken from the degree formulas, not from
an adjacency matrix.

The class-one edge coloring is constructive: it colors the induced subgraph
on H with a Vizing-style fan procedure and extends across the cut edges,
certifying that the edge chromatic number equals the maximum degree whenever
C has an element outside H.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .errors import (
    InternalConsistencyError,
    PreconditionError,
    UnknownCheckError,
)
from .graphs import RelCayGraph
from .group_core import (
    ElementSet,
    GroupTable,
    Subgroup,
    conjugate_set,
    coset_partition,
    enumerate_subgroups,
    generated_subgroup,
    is_subgroup_set,
    left_coset,
    product_set,
    psi,
    right_coset,
    subgroups_within,
    width,
)

__all__ = [
    "DEFAULT_CHROMATIC_II_CAP",
    "FORBIDDEN_KINDS",
    "ValencyPredictions",
    "DiameterBound",
    "ConnectivityPredictions",
    "DcCase",
    "CliquePredictions",
    "AlphaBetaPredictions",
    "ChromaticPredictions",
    "ForbiddenPrediction",
    "EdgeColoring",
    "PredictionSet",
    "predict_valencies",
    "predict_connectivity",
    "predict_clique",
    "predict_alpha_beta",
    "predict_chromatic",
    "predict_forbidden",
    "predict_all",
    "build_class_one_coloring",
    "is_aba_subgroup",
]

DEFAULT_CHROMATIC_II_CAP = 11

FORBIDDEN_KINDS = (
    "claw_free",
    "forest",
    "tree",
    "triangle_free",
    "square_free_as_printed",
    "bipartite_sufficient",
)


# --------------------------------------------------------------------------
# Valencies


@dataclass(frozen=True)
class ValencyPredictions:
    """Degree-structure predictions.

    ``valency_bound`` and ``sqrt_bound`` cap the number of distinct vertex
    degrees.  The regularity characterization is only claimed for nonempty C
    (an edgeless graph is regular no matter what the condition says), and the
    semi-regularity characterization additionally presumes the graph is not
    regular; the ``*_applicable`` flags carry those gates.
    ``full_degree_coset`` is the set of elements whose degree the membership
    test predicts to be |C|, for vertices outside H.
    """

    valency_bound: int
    sqrt_bound: int
    regular_applicable: bool
    predicted_regular: bool
    semi_regular_applicable: bool
    predicted_semi_regular: bool
    full_degree_coset: ElementSet


def predict_valencies(group: GroupTable, h: Subgroup, c: ElementSet) -> ValencyPredictions:
    inner = h.intersection(c)
    valency_bound = min(h.index, len(h) + 2)
    sqrt_bound = math.isqrt(group.order + 1) + 1

    regular_condition = h.index == 2 and not inner

    # same |C|-count in every left coset gH other than H itself
    outside_counts = {
        len(coset.intersection(c))
        for coset in coset_partition(h, "left")
        if group.identity not in coset
    }
    same_left_counts = len(outside_counts) <= 1
    # C inside a single right coset Hx other than H
    in_one_right_coset = any(
        c._member_set <= coset._member_set
        for coset in coset_partition(h, "right")
        if group.identity not in coset
    )

    full = group.all_elements
    for member in c.members:
        full = full.intersection(right_coset(h, member))

    return ValencyPredictions(
        valency_bound=valency_bound,
        sqrt_bound=sqrt_bound,
        regular_applicable=bool(c),
        predicted_regular=regular_condition,
        semi_regular_applicable=bool(c) and not regular_condition,
        predicted_semi_regular=same_left_counts or in_one_right_coset,
        full_degree_coset=full,
    )


def cayley_adjacency(group: GroupTable, c: ElementSet) -> tuple[int, ...]:
    """Bitset adjacency of the plain Cayley graph on all of G with set C."""
    rows = []
    for x in range(group.order):
        row = 0
        for member in c.members:
            row |= 1 << group.mul[x][member]
        rows.append(row)
    return tuple(rows)


# --------------------------------------------------------------------------
# Connectivity and diameter


@dataclass(frozen=True)
class DiameterBound:
    """One diameter bound: its value and whether its own hypothesis holds.

    All bounds additionally presume the graph is connected; that gate is
    applied by the caller (the audit checks it against the BFS oracle).
    """

    name: str
    value: float
    applicable: bool


@dataclass(frozen=True)
class ConnectivityPredictions:
    """Connectivity predicted from subgroup products, plus diameter bounds.

    ``predicted_connected`` requires both the product criterion (some vertex
    g outside H whose neighborhood, multiplied by the two generated
    subgroups, covers H) and the coverage condition G = HC*.  The latter is
    necessary for connectivity but not implied by the former: the product
    criterion only sees the component of H.

    ``disjoint_predicted`` is the simplified criterion available when C and H
    are disjoint; ``aba_predicted`` is the simplification available when H
    has no factorization A*B*A into proper subgroups.
    """

    hc_star_covers: bool
    product_witnesses: tuple[int, ...]
    predicted_connected: bool
    disjoint_applicable: bool
    disjoint_predicted: bool
    aba_applicable: bool
    aba_predicted: bool
    diameter_bounds: tuple[DiameterBound, ...]


@lru_cache(maxsize=None)
def is_aba_subgroup(h: Subgroup) -> bool:
    """Whether the subgroup factors as A*B*A for proper subgroups A, B of it."""
    target = h._member_set
    smaller = [
        s
        for s in enumerate_subgroups(h.group)
        if len(s) < len(target) and s._member_set <= target
    ]
    size = len(target)
    for a in smaller:
        for b in smaller:
            if len(a) * len(a) * len(b) < size:
                continue
            ab = product_set(a, b)
            if len(ab) * len(a) < size:
                continue
            if product_set(ab, a)._member_set == target:
                return True
    return False


def predict_connectivity(
    group: GroupTable, h: Subgroup, c: ElementSet
) -> ConnectivityPredictions:
    identity = group.identity
    inner = h.intersection(c)
    outer = c.difference(h)

    hc_star_covers = len(product_set(h, c.with_identity())) == group.order

    inner_span = generated_subgroup(inner)
    outer_square = h.intersection(product_set(outer, outer))
    outer_square_span = generated_subgroup(outer_square)

    target = h._member_set
    witnesses = []
    for g_elt in range(group.order):
        if g_elt in h:
            continue
        reach = h.intersection(left_coset(c, g_elt))
        if not reach:
            continue
        covered = product_set(product_set(reach, inner_span), outer_square_span)
        if covered._member_set == target:
            witnesses.append(g_elt)

    predicted_connected = bool(witnesses) and hc_star_covers

    disjoint_predicted = hc_star_covers and (
        generated_subgroup(h.intersection(product_set(c, c)))._member_set == target
    )
    aba_predicted = hc_star_covers and (
        inner_span._member_set == target
        or outer_square_span._member_set == target
    )

    inner_width = width(inner)
    outer_width = width(outer_square)
    bounds = (
        DiameterBound("width", 2 + inner_width + 2 * outer_width, True),
        DiameterBound(
            "half_sum", 2 + len(inner_span) / 2 + len(outer_square_span), True
        ),
        DiameterBound("three_halves", 3 * len(h) / 2 + 2, True),
        DiameterBound("disjoint", len(h) + 2, not inner),
        DiameterBound(
            "small_square",
            len(h) / 2 + 2,
            outer_square._member_set == {identity},
        ),
    )

    return ConnectivityPredictions(
        hc_star_covers=hc_star_covers,
        product_witnesses=tuple(witnesses),
        predicted_connected=predicted_connected,
        disjoint_applicable=not inner,
        disjoint_predicted=disjoint_predicted,
        aba_applicable=not is_aba_subgroup(h),
        aba_predicted=aba_predicted,
        diameter_bounds=bounds,
    )


# --------------------------------------------------------------------------
# Clique number


@dataclass(frozen=True)
class DcCase:
    """Decomposition C = D*c available when C is closed under triple products."""

    d: Subgroup
    c_elt: int


@dataclass(frozen=True)
class CliquePredictions:
    """Clique-number bounds and the exact-equality predicate.

    ``upper`` always holds; ``upper_is_equality`` predicts whether it is
    attained.  ``lower_psi`` always holds, and ``psi_plus`` reports whether
    the hypothesis for the strengthened lower bound (psi + 1) is met.  When
    C is nonempty and closed under triple products, ``c_cubed_case`` carries
    the induced coset decomposition; ``c_cubed_applicable`` also covers the
    empty set, for which the psi + 1 upper bound holds vacuously.
    """

    upper: int
    upper_is_equality: bool
    lower_psi: int
    psi_plus: bool
    c_cubed_applicable: bool
    c_cubed_case: Optional[DcCase]


def predict_clique(
    group: GroupTable,
    h: Subgroup,
    c: ElementSet,
    *,
    verify_c_cubed: bool = True,
) -> CliquePredictions:
    inner = h.intersection(c)
    outer = c.difference(h)

    upper = len(inner) + 2

    equality = False
    if is_subgroup_set(inner.with_identity()):
        inner_members = inner._member_set
        for member in outer.members:
            if inner_members <= left_coset(c, member)._member_set:
                equality = True
                break

    lower_psi = psi(inner)
    psi_plus = False
    if outer:
        carriers = [
            k._member_set for k in subgroups_within(inner) if len(k) == lower_psi
        ]
        for member in outer.members:
            shifted = left_coset(c, member)._member_set
            if any(k <= shifted for k in carriers):
                psi_plus = True
                break

    c_squared = product_set(c, c)
    triple_closed = product_set(c_squared, c)._member_set <= c._member_set
    case = None
    if triple_closed and c:
        chosen = c.members[0]
        failures = []
        if not is_subgroup_set(c_squared):
            failures.append("square of the set is not a subgroup")
        if right_coset(c_squared, chosen) != c:
            failures.append("set is not a right coset of its square")
        if group.mul[chosen][chosen] not in c_squared:
            failures.append("square of the chosen element escapes")
        if conjugate_set(c_squared, chosen) != c_squared:
            failures.append("square is not stable under conjugation")
        if failures:
            if verify_c_cubed:
                raise InternalConsistencyError(
                    "triple-product decomposition fails: " + "; ".join(failures)
                )
        else:
            case = DcCase(d=Subgroup(group, c_squared.members), c_elt=chosen)

    return CliquePredictions(
        upper=upper,
        upper_is_equality=equality,
        lower_psi=lower_psi,
        psi_plus=psi_plus,
        c_cubed_applicable=triple_closed,
        c_cubed_case=case,
    )


# --------------------------------------------------------------------------
# Independence, matching, covers


@dataclass(frozen=True)
class AlphaBetaPredictions:
    """Predicted independence, matching, vertex-cover and edge-cover numbers.

    The proofs need an element of C outside H (it supplies the perfect
    matching on H); ``hypothesis_ok`` is False when no such element exists,
    and the predictions are then recorded but not asserted.
    """

    alpha: int
    alpha_prime: int
    beta: int
    beta_prime: int
    hypothesis_ok: bool


def predict_alpha_beta(
    group: GroupTable, h: Subgroup, c: ElementSet
) -> AlphaBetaPredictions:
    outside = group.order - len(h)
    return AlphaBetaPredictions(
        alpha=outside,
        alpha_prime=len(h),
        beta=len(h),
        beta_prime=outside,
        hypothesis_ok=bool(c.difference(h)),
    )


# --------------------------------------------------------------------------
# Chromatic number


@dataclass(frozen=True)
class ChromaticPredictions:
    """Chromatic upper bound and the two equality conditions.

    The equality characterization presumes the subgraph induced on H is
    connected and spans H (C nonempty and H generated by H-interior
    connection elements); ``equality_applicable`` carries that gate.
    ``equality_ii`` is None when the partition enumeration was skipped
    because |H| exceeds the cap.
    """

    upper: int
    equality_applicable: bool
    equality_i: bool
    equality_ii: Optional[bool]

    @property
    def predicted_equality(self) -> Optional[bool]:
        if self.equality_i:
            return True
        if self.equality_ii is None:
            return None
        return self.equality_ii


def _partition_condition(
    group: GroupTable, h: Subgroup, c: ElementSet, step: int
) -> bool:
    """Whether every shift-avoiding 3-part split of H is seen by some vertex.

    A split H = X1 u X2 u X3 qualifies when no part contains both x and
    x*step; it is "seen" by g outside H when C meets every g*Xi.  Empty
    parts are allowed; a split with an empty part can never be seen.
    """
    members = h.members
    count = len(members)
    pos = {member: i for i, member in enumerate(members)}
    shifted = [pos[group.mul[member][step]] for member in members]

    # per outside vertex g: which positions x of H have g*x in C
    c_members = c._member_set
    windows = set()
    for g_elt in range(group.order):
        if g_elt in h:
            continue
        row = group.mul[g_elt]
        window = frozenset(i for i, member in enumerate(members) if row[member] in c_members)
        if len(window) >= 3:
            windows.add(window)
    window_list = sorted(windows, key=sorted)

    # class of the first member is pinned to 0; relabeling classes changes
    # neither validity nor visibility
    for rest in itertools.product((0, 1, 2), repeat=count - 1):
        classes = (0,) + rest
        if any(classes[i] == classes[shifted[i]] for i in range(count)):
            continue
        seen = False
        for window in window_list:
            if {classes[i] for i in window} == {0, 1, 2}:
                seen = True
                break
        if not seen:
            return False
    return True


def predict_chromatic(
    group: GroupTable,
    h: Subgroup,
    c: ElementSet,
    *,
    partition_cap: int = DEFAULT_CHROMATIC_II_CAP,
) -> ChromaticPredictions:
    identity = group.identity
    inner = h.intersection(c)
    upper = len(inner) + 2

    applicable = bool(c) and generated_subgroup(inner)._member_set == h._member_set

    condition_i = False
    if h.difference((identity,))._member_set <= c._member_set:
        for g_elt in range(group.order):
            if g_elt in h:
                continue
            if left_coset(h, g_elt)._member_set <= c._member_set:
                condition_i = True
                break

    condition_ii: Optional[bool] = False
    if 1 <= len(inner) <= 2:
        generators = [
            x
            for x in inner.members
            if {x, group.inv[x]} == inner._member_set
            and generated_subgroup(ElementSet(group, (x,)))._member_set
            == h._member_set
        ]
        if generators:
            if len(h) > partition_cap:
                condition_ii = None
            else:
                condition_ii = _partition_condition(group, h, c, generators[0])

    return ChromaticPredictions(
        upper=upper,
        equality_applicable=applicable,
        equality_i=condition_i,
        equality_ii=condition_ii,
    )


# --------------------------------------------------------------------------
# Forbidden substructures


@dataclass(frozen=True)
class ForbiddenPrediction:
    """A predicted structural flag plus the evaluation details behind it."""

    kind: str
    applicable: bool
    predicted: bool
    details: tuple[tuple[str, object], ...] = ()


def _claw_free_condition(
    group: GroupTable, h: Subgroup, c: ElementSet
) -> tuple[bool, str]:
    if len(c) <= 2:
        return True, "small"
    inner = h.intersection(c)
    outer = c.difference(h)
    mul = group.mul
    inv = group.inv
    if len(c) <= 4:
        for a in outer.members:
            for b in outer.members:
                if a == b:
                    continue
                quotient = mul[a][inv[b]]
                if quotient not in h:
                    continue
                mirrored = mul[b][inv[a]]
                if {a, b, quotient, mirrored} == c._member_set:
                    return True, "coset_pair"
    if len(outer) == 1:
        lone = outer.members[0]
        if mul[lone][lone] == group.identity and is_subgroup_set(
            inner.with_identity()
        ):
            return True, "single_involution"
    if not outer:
        rest = h.difference(c.with_identity())
        cube = product_set(product_set(rest, rest), rest)
        if group.identity not in cube:
            return True, "interior_cube"
    return False, "none"


def _forest_condition(group: GroupTable, h: Subgroup, c: ElementSet) -> bool:
    squares = h.intersection(product_set(c, c))
    if not squares._member_set <= {group.identity}:
        return False
    inner = h.intersection(c)
    if not inner:
        return True
    return (
        len(inner) == 1
        and group.mul[inner.members[0]][inner.members[0]] == group.identity
    )


def _tree_condition(group: GroupTable, h: Subgroup, c: ElementSet) -> bool:
    if len(h) == 1:
        return len(c) == group.order - 1
    if len(h) != 2:
        return False
    # a tree is a connected forest; the factorization below only supplies
    # the connectedness half
    if not _forest_condition(group, h, c):
        return False
    flip = next(x for x in h.members if x != group.identity)
    # the factor set is forced: C = D*flip pins D to C*flip
    transversal = right_coset(c, flip)
    if transversal.intersection(h)._member_set != {group.identity}:
        return False
    return len(product_set(transversal, h)) == group.order


def _square_free_details(
    group: GroupTable, h: Subgroup, c: ElementSet
) -> tuple[bool, tuple[tuple[str, object], ...]]:
    identity = group.identity
    mul = group.mul
    inner = h.intersection(c)
    outer = c.difference(h)

    # four-cycle through the identity in the induced Cayley graph; vertex
    # transitivity makes the anchored search exhaustive
    induced_square = False
    gens = inner.members
    gen_set = inner._member_set
    for first in gens:
        for second in gens:
            two = mul[first][second]
            if two == identity:
                continue
            for third in gens:
                three = mul[two][third]
                if three == identity or three == first:
                    continue
                if group.inv[three] in gen_set:
                    induced_square = True
                    break
            if induced_square:
                break
        if induced_square:
            break

    inner_pairs = product_set(inner, inner)
    outer_pairs = product_set(outer, outer)
    overlap = inner_pairs.intersection(outer_pairs)
    pair_condition = overlap._member_set == {identity}

    degree_sum = sum(
        len(right_coset(h, member).intersection(c)) for member in outer.members
    )
    degree_required = len(h.intersection(outer_pairs)) + len(outer)

    predicted = (not induced_square) and pair_condition and (
        degree_sum == degree_required
    )
    details = (
        ("induced_square_free", not induced_square),
        ("pair_product_overlap", overlap.names()),
        ("pair_product_condition", pair_condition),
        ("outside_degree_sum", degree_sum),
        ("outside_degree_required", degree_required),
        ("degree_condition", degree_sum == degree_required),
    )
    return predicted, details


def predict_forbidden(
    group: GroupTable, h: Subgroup, c: ElementSet, kind: str
) -> ForbiddenPrediction:
    """Evaluate one printed forbidden-structure condition, literally."""
    if kind == "claw_free":
        value, which = _claw_free_condition(group, h, c)
        return ForbiddenPrediction(
            kind, True, value, (("condition", which),)
        )
    if kind == "forest":
        return ForbiddenPrediction(kind, True, _forest_condition(group, h, c))
    if kind == "tree":
        return ForbiddenPrediction(kind, True, _tree_condition(group, h, c))
    if kind == "triangle_free":
        inner = h.intersection(c)
        value = not inner.intersection(product_set(c, c))
        return ForbiddenPrediction(kind, True, value)
    if kind == "square_free_as_printed":
        value, details = _square_free_details(group, h, c)
        return ForbiddenPrediction(kind, True, value, details)
    if kind == "bipartite_sufficient":
        disjoint = not h.intersection(c)
        return ForbiddenPrediction(kind, disjoint, True)
    raise UnknownCheckError(f"unknown forbidden-structure kind {kind!r}")


# --------------------------------------------------------------------------
# Class-one edge coloring


@dataclass(frozen=True)
class EdgeColoring:
    """A proper edge coloring with colors named by group elements.

    ``assignments`` lists (u, v, color) with u < v, sorted.  The palette is
    (C minus the special element) plus the identity; using it fully still
    stays within max-degree many colors, which certifies the class-one
    property.
    """

    graph: RelCayGraph
    special: int
    palette: tuple[int, ...]
    assignments: tuple[tuple[int, int, int], ...]

    @property
    def colors_used(self) -> tuple[int, ...]:
        return tuple(sorted({color for _, _, color in self.assignments}))

    def as_dict(self) -> dict[tuple[int, int], int]:
        return {(u, v): color for u, v, color in self.assignments}


def _misra_gries(
    n: int, adjacency: Sequence[int], n_colors: int
) -> dict[tuple[int, int], int]:
    """Proper edge coloring with at most max-degree + 1 colors, by fans.

    Classic constructive procedure: for each new edge build a maximal fan,
    free a color at the pivot by inverting a two-colored path, then rotate
    the fan prefix.  Degrees must stay below ``n_colors``.
    """
    joined = [[-1] * n_colors for _ in range(n)]
    coloring: dict[tuple[int, int], int] = {}

    def key(u: int, v: int) -> tuple[int, int]:
        return (u, v) if u < v else (v, u)

    def assign(u: int, v: int, color: int) -> None:
        joined[u][color] = v
        joined[v][color] = u
        coloring[key(u, v)] = color

    def unassign(u: int, v: int) -> int:
        color = coloring.pop(key(u, v))
        joined[u][color] = -1
        joined[v][color] = -1
        return color

    def lowest_free(v: int) -> int:
        for color in range(n_colors):
            if joined[v][color] == -1:
                return color
        raise InternalConsistencyError("vertex has no free color")

    neighbor_lists = []
    for u in range(n):
        row = adjacency[u]
        out = []
        v = 0
        while row:
            if row & 1:
                out.append(v)
            row >>= 1
            v += 1
        neighbor_lists.append(out)

    edges = [
        (u, v) for u in range(n) for v in neighbor_lists[u] if u < v
    ]
    for u, v in edges:
        fan = [v]
        in_fan = {v}
        while True:
            tail = fan[-1]
            extension = -1
            for w in neighbor_lists[u]:
                if w in in_fan:
                    continue
                color = coloring.get(key(u, w), -1)
                if color != -1 and joined[tail][color] == -1:
                    extension = w
                    break
            if extension == -1:
                break
            fan.append(extension)
            in_fan.add(extension)

        pivot_free = lowest_free(u)
        tail_free = lowest_free(fan[-1])

        if pivot_free != tail_free and joined[u][tail_free] != -1:
            # invert the maximal path from u alternating tail/pivot colors
            path = []
            prev, want = u, tail_free
            cur = joined[u][tail_free]
            while cur != -1:
                path.append((prev, cur, want))
                want = pivot_free if want == tail_free else tail_free
                prev, cur = cur, joined[cur][want]
            for x, y, _ in path:
                unassign(x, y)
            for x, y, had in path:
                assign(x, y, pivot_free if had == tail_free else tail_free)

        # walk the fan prefix while it stays valid; stop at the first vertex
        # where the target color is free
        stop = -1
        for i, member in enumerate(fan):
            if i > 0:
                color = coloring.get(key(u, member), -1)
                if color == -1 or joined[fan[i - 1]][color] != -1:
                    break
            if joined[member][tail_free] == -1:
                stop = i
                break
        if stop == -1:
            raise InternalConsistencyError("fan rotation found no landing spot")
        for i in range(stop):
            shifted = unassign(u, fan[i + 1])
            assign(u, fan[i], shifted)
        assign(u, fan[stop], tail_free)

    return coloring


def build_class_one_coloring(graph: RelCayGraph) -> EdgeColoring:
    """Construct a proper edge coloring of the graph with at most |C| colors.

    Requires an element of C outside H.  The induced subgraph on H is
    colored with the identity plus its own generators; each cross edge takes
    its defining quotient as its color, except the edge for the special
    element, which absorbs the one palette color missing at its H endpoint.
    """
    group = graph.group
    h, c = graph.h, graph.c
    outer = c.difference(h)
    if not outer:
        raise PreconditionError(
            "class-one construction needs a connection element outside the subgroup"
        )
    special = outer.members[0]
    inner = h.intersection(c)
    identity = group.identity

    induced = graph.induced
    sub_palette = (identity,) + inner.members
    local = _misra_gries(induced.n, induced.adjacency, len(sub_palette))

    assignments: dict[tuple[int, int], int] = {}
    used_at: dict[int, set[int]] = {member: set() for member in h.members}
    for (i, j), color_index in local.items():
        u, v = induced.vertices[i], induced.vertices[j]
        label = sub_palette[color_index]
        assignments[(u, v) if u < v else (v, u)] = label
        used_at[u].add(label)
        used_at[v].add(label)

    for member in h.members:
        for quotient in outer.members:
            other = group.mul[member][quotient]
            edge = (member, other) if member < other else (other, member)
            if quotient != special:
                assignments[edge] = quotient
            else:
                missing = [
                    label for label in sub_palette if label not in used_at[member]
                ]
                if len(missing) != 1:
                    raise InternalConsistencyError(
                        "expected exactly one spare color at a subgroup vertex"
                    )
                assignments[edge] = missing[0]

    palette = tuple(sorted(c.difference((special,))._member_set | {identity}))
    coloring = EdgeColoring(
        graph=graph,
        special=special,
        palette=palette,
        assignments=tuple(
            (u, v, color) for (u, v), color in sorted(assignments.items())
        ),
    )
    _verify_coloring(coloring)
    return coloring


def _verify_coloring(coloring: EdgeColoring) -> None:
    graph = coloring.graph
    expected = set()
    for u in range(graph.n):
        row = graph.adjacency[u] >> (u + 1)
        v = u + 1
        while row:
            if row & 1:
                expected.add((u, v))
            row >>= 1
            v += 1
    colored = {(u, v) for u, v, _ in coloring.assignments}
    if colored != expected:
        raise InternalConsistencyError("edge coloring misses or invents edges")
    palette = set(coloring.palette)
    at_vertex: dict[int, set[int]] = {}
    for u, v, color in coloring.assignments:
        if color not in palette:
            raise InternalConsistencyError("edge coloring leaves the palette")
        for endpoint in (u, v):
            seen = at_vertex.setdefault(endpoint, set())
            if color in seen:
                raise InternalConsistencyError("edge coloring is not proper")
            seen.add(color)
    if len({color for _, _, color in coloring.assignments}) > len(coloring.graph.c):
        raise InternalConsistencyError("edge coloring uses too many colors")


# --------------------------------------------------------------------------
# Composite


@dataclass(frozen=True)
class PredictionSet:
    """All predictions for one (G, H, C) instance, with flat accessors."""

    valency: ValencyPredictions
    connectivity: ConnectivityPredictions
    clique: CliquePredictions
    alpha_beta: AlphaBetaPredictions
    chromatic: ChromaticPredictions
    forbidden: tuple[ForbiddenPrediction, ...]

    @property
    def valency_bound(self) -> int:
        return self.valency.valency_bound

    @property
    def sqrt_bound(self) -> int:
        return self.valency.sqrt_bound

    @property
    def predicted_regular(self) -> bool:
        return self.valency.predicted_regular

    @property
    def predicted_semi_regular(self) -> bool:
        return self.valency.predicted_semi_regular

    @property
    def full_degree_coset(self) -> ElementSet:
        return self.valency.full_degree_coset

    @property
    def predicted_connected(self) -> bool:
        return self.connectivity.predicted_connected

    @property
    def hc_star_covers(self) -> bool:
        return self.connectivity.hc_star_covers

    @property
    def diameter_bounds(self) -> tuple[DiameterBound, ...]:
        return self.connectivity.diameter_bounds

    @property
    def clique_upper(self) -> int:
        return self.clique.upper

    @property
    def clique_upper_is_equality(self) -> bool:
        return self.clique.upper_is_equality

    @property
    def clique_lower_psi(self) -> int:
        return self.clique.lower_psi

    @property
    def clique_lower_psi_plus(self) -> bool:
        return self.clique.psi_plus

    @property
    def c_cubed_case(self) -> Optional[DcCase]:
        return self.clique.c_cubed_case

    @property
    def predicted_alpha(self) -> int:
        return self.alpha_beta.alpha

    @property
    def predicted_alpha_prime(self) -> int:
        return self.alpha_beta.alpha_prime

    @property
    def predicted_beta(self) -> int:
        return self.alpha_beta.beta

    @property
    def predicted_beta_prime(self) -> int:
        return self.alpha_beta.beta_prime

    @property
    def alpha_beta_hypothesis_ok(self) -> bool:
        return self.alpha_beta.hypothesis_ok

    @property
    def chromatic_upper(self) -> int:
        return self.chromatic.upper

    @property
    def chromatic_equality_i(self) -> bool:
        return self.chromatic.equality_i

    @property
    def chromatic_equality_ii(self) -> Optional[bool]:
        return self.chromatic.equality_ii

    def forbidden_map(self) -> dict[str, ForbiddenPrediction]:
        return {entry.kind: entry for entry in self.forbidden}


def predict_all(
    group: GroupTable,
    h: Subgroup,
    c: ElementSet,
    *,
    partition_cap: int = DEFAULT_CHROMATIC_II_CAP,
    verify_c_cubed: bool = True,
) -> PredictionSet:
    return PredictionSet(
        valency=predict_valencies(group, h, c),
        connectivity=predict_connectivity(group, h, c),
        clique=predict_clique(group, h, c, verify_c_cubed=verify_c_cubed),
        alpha_beta=predict_alpha_beta(group, h, c),
        chromatic=predict_chromatic(group, h, c, partition_cap=partition_cap),
        forbidden=tuple(
            predict_forbidden(group, h, c, kind) for kind in FORBIDDEN_KINDS
        ),
    )
