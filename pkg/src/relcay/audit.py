"""Prediction-versus-oracle audit harness.

Enumerates (group, subgroup, connection set) instances over a catalog of
small groups, evaluates every registered check on both the prediction side
(group arithmetic) and the oracle side (brute force on adjacency), and
classifies each pair as agree, mismatch, not-applicable, or unevaluated.
Mismatches are shrunk to smaller witnesses before reporting.

Determinism is a hard requirement here: reports carry no timestamps or
iteration-order artifacts in their JSON form, sampling is keyed off the
instance itself, and any degree of parallelism yields byte-identical output.
"""
from __future__ import annotations

import csv
import io
import json
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Optional

from .errors import (
    InternalConsistencyError,
    PreconditionError,
    UnknownCheckError,
)
from .graphs import (
    ConnectionSet,
    RelCayGraph,
    build_relcay,
    enumerate_connection_sets,
    inverse_orbits,
)
from .group_core import (
    Subgroup,
    default_max_order,
    enumerate_subgroups,
    make_group,
    product_set,
)
from .oracles import (
    DEFAULT_EDGE_COLOR_CUTOFF,
    chromatic_number,
    diameter_components,
    max_clique,
    max_independent_set,
    max_matching,
    min_edge_cover,
    min_vertex_cover,
    structure_flags,
)
from .theorems import (
    DEFAULT_CHROMATIC_II_CAP,
    build_class_one_coloring,
    cayley_adjacency,
    predict_alpha_beta,
    predict_chromatic,
    predict_clique,
    predict_connectivity,
    predict_forbidden,
    predict_valencies,
)

__all__ = [
    "AGREE",
    "MISMATCH",
    "NOT_APPLICABLE",
    "UNEVALUATED",
    "ALL_CHECKS",
    "AUDITED_CHECKS",
    "DEFAULT_CATALOG",
    "Limits",
    "AuditRecord",
    "MismatchEntry",
    "AuditReport",
    "catalog_up_to",
    "run_audit",
    "shrink_counterexample",
]

AGREE = "agree"
MISMATCH = "mismatch"
NOT_APPLICABLE = "not-applicable"
UNEVALUATED = "unevaluated"
VERDICTS = (AGREE, MISMATCH, NOT_APPLICABLE, UNEVALUATED)

# checks whose disagreement is a documented finding, not a defect; they never
# drive a failing exit status
AUDITED_CHECKS = frozenset({"square_free_as_printed"})

DEFAULT_CATALOG = (
    "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12",
    "D3", "D4", "D5", "D6", "D7", "D8",
    "S3", "S4", "Q8",
    "C2xC2", "C2xC4", "C2xC2xC2", "C2xC6", "E2^4",
)


def catalog_up_to(max_order: int, catalog: tuple[str, ...] = DEFAULT_CATALOG) -> tuple[str, ...]:
    """The sub-catalog whose groups do not exceed the given order."""
    return tuple(spec for spec in catalog if make_group(spec).order <= max_order)


@dataclass(frozen=True)
class Limits:
    """Caps shared across the scan; all of them participate in sampling and
    verdicts, so they are part of the report's configuration snapshot."""

    max_order: int = field(default_factory=default_max_order)
    edge_color_cutoff: int = DEFAULT_EDGE_COLOR_CUTOFF
    chromatic_ii_cap: int = DEFAULT_CHROMATIC_II_CAP
    max_connection_sets: int = 512


@dataclass(frozen=True)
class AuditRecord:
    """One (instance, check) outcome.

    ``predicted`` and ``observed`` are small JSON-ready values; the verdict
    is their comparison under the check's own comparator, which is not
    always plain equality (bounds compare with an inequality).  ``witness``
    carries mismatch details.  The index tuples exist for deterministic
    sorting and stay out of serialized output.
    """

    group: str
    h: tuple[str, ...]
    c: tuple[str, ...]
    check: str
    predicted: object
    observed: object
    verdict: str
    witness: object = None
    h_indices: tuple[int, ...] = field(default=(), repr=False)
    c_indices: tuple[int, ...] = field(default=(), repr=False)

    def as_dict(self) -> dict:
        return {
            "group": self.group,
            "h": list(self.h),
            "c": list(self.c),
            "check": self.check,
            "predicted": _jsonable(self.predicted),
            "observed": _jsonable(self.observed),
            "verdict": self.verdict,
            "witness": _jsonable(self.witness),
        }


@dataclass(frozen=True)
class MismatchEntry:
    original: AuditRecord
    shrunk: AuditRecord


@dataclass(frozen=True)
class AuditReport:
    config: dict
    catalog: tuple[dict, ...]
    totals: dict
    mismatches: tuple[MismatchEntry, ...]
    records: Optional[tuple[AuditRecord, ...]]
    wall_time_seconds: float

    def has_blocking_mismatch(self) -> bool:
        return any(
            entry.original.check not in AUDITED_CHECKS for entry in self.mismatches
        )

    def to_json(self) -> str:
        # wall time is excluded: reports must be byte-identical across runs
        payload = {
            "config": self.config,
            "catalog": list(self.catalog),
            "totals": self.totals,
            "mismatches": [
                {"original": e.original.as_dict(), "shrunk": e.shrunk.as_dict()}
                for e in self.mismatches
            ],
        }
        if self.records is not None:
            payload["records"] = [r.as_dict() for r in self.records]
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        if self.records is None:
            raise PreconditionError("CSV export needs a run with keep_records")
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            [
                "instance_group",
                "instance_H",
                "instance_C",
                "check",
                "predicted",
                "observed",
                "verdict",
            ]
        )
        for record in self.records:
            writer.writerow(
                [
                    record.group,
                    ",".join(record.h),
                    ",".join(record.c),
                    record.check,
                    json.dumps(_jsonable(record.predicted), sort_keys=True),
                    json.dumps(_jsonable(record.observed), sort_keys=True),
                    record.verdict,
                ]
            )
        return out.getvalue()


def _jsonable(value):
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = list(value)
        if isinstance(value, (set, frozenset)):
            items = sorted(items, key=repr)
        return [_jsonable(v) for v in items]
    return repr(value)


# --------------------------------------------------------------------------
# Instance context: lazy oracle and prediction state shared by the checks


class InstanceContext:
    """Everything the checks may ask about one (G, H, C) instance.

    Oracle quantities are computed lazily so cheap checks never pay for
    expensive ones; in particular nothing here touches edge colorings or
    domination, which the audit does not need.
    """

    def __init__(self, group, h: Subgroup, c: ConnectionSet, limits: Limits):
        self.group = group
        self.h = h
        self.c = c
        self.limits = limits
        self._forbidden = {}

    @cached_property
    def graph(self) -> RelCayGraph:
        return build_relcay(self.group, self.h, self.c)

    @cached_property
    def flags(self):
        return structure_flags(self.graph)

    @cached_property
    def diameter(self) -> Optional[int]:
        return diameter_components(self.graph)[1]

    @cached_property
    def clique_number(self) -> int:
        return max_clique(self.graph.n, self.graph.adjacency)

    @cached_property
    def independence_number(self) -> int:
        return max_independent_set(self.graph.n, self.graph.adjacency)

    @cached_property
    def matching_number(self) -> int:
        return max_matching(self.graph.n, self.graph.adjacency)

    @cached_property
    def vertex_cover_number(self) -> int:
        return min_vertex_cover(self.graph.n, self.graph.adjacency)

    @cached_property
    def edge_cover_number(self) -> Optional[int]:
        return min_edge_cover(self.graph.n, self.graph.adjacency)

    @cached_property
    def chromatic(self) -> int:
        return chromatic_number(self.graph.n, self.graph.adjacency)

    @cached_property
    def valency(self):
        return predict_valencies(self.group, self.h, self.c)

    @cached_property
    def connectivity(self):
        return predict_connectivity(self.group, self.h, self.c)

    @cached_property
    def _clique_bundle(self):
        try:
            return predict_clique(self.group, self.h, self.c), None
        except InternalConsistencyError as err:
            fallback = predict_clique(
                self.group, self.h, self.c, verify_c_cubed=False
            )
            return fallback, str(err)

    @property
    def clique_prediction(self):
        return self._clique_bundle[0]

    @property
    def dc_failure(self) -> Optional[str]:
        return self._clique_bundle[1]

    @cached_property
    def alpha_beta(self):
        return predict_alpha_beta(self.group, self.h, self.c)

    @cached_property
    def chromatic_prediction(self):
        return predict_chromatic(
            self.group, self.h, self.c, partition_cap=self.limits.chromatic_ii_cap
        )

    def forbidden(self, kind: str):
        if kind not in self._forbidden:
            self._forbidden[kind] = predict_forbidden(self.group, self.h, self.c, kind)
        return self._forbidden[kind]

    @cached_property
    def coloring_outcome(self) -> tuple[Optional[int], Optional[str]]:
        try:
            coloring = build_class_one_coloring(self.graph)
            return len(coloring.colors_used), None
        except InternalConsistencyError as err:
            return None, str(err)

    def names(self, indices) -> tuple[str, ...]:
        return tuple(self.group.names[x] for x in indices)


# --------------------------------------------------------------------------
# Checks

_CheckResult = tuple[object, object, str, object]


def _verdict(agree: bool) -> str:
    return AGREE if agree else MISMATCH


def _check_degree_formula(ctx: InstanceContext) -> _CheckResult:
    g = ctx.group
    in_c = ctx.c._member_set
    formula = []
    for x in range(g.order):
        if x in ctx.h:
            formula.append(len(ctx.c))
        else:
            row = g.mul[g.inv[x]]
            formula.append(sum(1 for m in ctx.h.members if row[m] in in_c))
    actual = list(ctx.graph.degrees)
    witness = None
    for x, (want, got) in enumerate(zip(formula, actual)):
        if want != got:
            witness = {"vertex": g.names[x], "formula": want, "adjacency": got}
            break
    return formula, actual, _verdict(witness is None), witness


def _check_edge_count(ctx: InstanceContext) -> _CheckResult:
    inside = len(ctx.h.intersection(ctx.c))
    product = len(ctx.h) * (2 * len(ctx.c) - inside)
    predicted = product // 2
    observed = ctx.graph.edge_count
    return predicted, observed, _verdict(product % 2 == 0 and predicted == observed), None


def _check_valency_bound(ctx: InstanceContext) -> _CheckResult:
    v = ctx.valency
    observed = len(set(ctx.graph.degrees))
    predicted = {"valency_bound": v.valency_bound, "sqrt_bound": v.sqrt_bound}
    ok = observed <= v.valency_bound <= v.sqrt_bound
    return predicted, observed, _verdict(ok), None


def _check_regular(ctx: InstanceContext) -> _CheckResult:
    v = ctx.valency
    observed = ctx.flags.regular
    if not v.regular_applicable:
        return v.predicted_regular, observed, NOT_APPLICABLE, None
    witness = None
    ok = v.predicted_regular == observed
    if ok and v.predicted_regular:
        if ctx.graph.adjacency != cayley_adjacency(ctx.group, ctx.c):
            ok = False
            witness = {"cayley_edge_set_equal": False}
    return v.predicted_regular, observed, _verdict(ok), witness


def _check_semi_regular(ctx: InstanceContext) -> _CheckResult:
    v = ctx.valency
    observed = ctx.flags.semi_regular
    if not v.semi_regular_applicable:
        return v.predicted_semi_regular, observed, NOT_APPLICABLE, None
    return v.predicted_semi_regular, observed, _verdict(v.predicted_semi_regular == observed), None


def _check_full_degree_coset(ctx: InstanceContext) -> _CheckResult:
    v = ctx.valency
    predicted = sorted(x for x in v.full_degree_coset.members if x not in ctx.h)
    degrees = ctx.graph.degrees
    observed = [
        x
        for x in range(ctx.group.order)
        if x not in ctx.h and degrees[x] == len(ctx.c)
    ]
    ok = predicted == observed
    witness = None
    if not ok:
        diff = sorted(set(predicted) ^ set(observed))
        witness = {"first_disagreement": ctx.group.names[diff[0]]}
    return ctx.names(predicted), ctx.names(observed), _verdict(ok), witness


def _check_isolated_vertex(ctx: InstanceContext) -> _CheckResult:
    reach = product_set(ctx.h, ctx.c.with_identity())._member_set
    claimed = [x for x in range(ctx.group.order) if x not in reach]
    degrees = ctx.graph.degrees
    isolated = [x for x in range(ctx.group.order) if degrees[x] == 0]
    bad = [x for x in claimed if degrees[x] != 0]
    witness = {"vertex": ctx.group.names[bad[0]]} if bad else None
    return ctx.names(claimed), ctx.names(isolated), _verdict(not bad), witness


def _check_connectivity(ctx: InstanceContext) -> _CheckResult:
    conn = ctx.connectivity
    observed = ctx.flags.connected
    ok = conn.predicted_connected == observed
    witness = None
    if not ok:
        witness = {
            "hc_star_covers": conn.hc_star_covers,
            "product_witnesses": ctx.names(conn.product_witnesses),
        }
    return conn.predicted_connected, observed, _verdict(ok), witness


def _check_connectivity_disjoint(ctx: InstanceContext) -> _CheckResult:
    conn = ctx.connectivity
    observed = ctx.flags.connected
    if not conn.disjoint_applicable:
        return conn.disjoint_predicted, observed, NOT_APPLICABLE, None
    return conn.disjoint_predicted, observed, _verdict(conn.disjoint_predicted == observed), None


def _check_connectivity_aba(ctx: InstanceContext) -> _CheckResult:
    conn = ctx.connectivity
    observed = ctx.flags.connected
    if not conn.aba_applicable:
        return conn.aba_predicted, observed, NOT_APPLICABLE, None
    return conn.aba_predicted, observed, _verdict(conn.aba_predicted == observed), None


def _make_diameter_check(bound_name: str) -> Callable[[InstanceContext], _CheckResult]:
    def check(ctx: InstanceContext) -> _CheckResult:
        bound = next(
            b for b in ctx.connectivity.diameter_bounds if b.name == bound_name
        )
        observed = ctx.diameter
        if not ctx.flags.connected or not bound.applicable:
            return bound.value, observed, NOT_APPLICABLE, None
        return bound.value, observed, _verdict(observed <= bound.value), None

    return check


def _check_clique_upper(ctx: InstanceContext) -> _CheckResult:
    predicted = ctx.clique_prediction.upper
    observed = ctx.clique_number
    return predicted, observed, _verdict(observed <= predicted), None


def _check_clique_equality(ctx: InstanceContext) -> _CheckResult:
    cp = ctx.clique_prediction
    observed = ctx.clique_number == cp.upper
    return cp.upper_is_equality, observed, _verdict(cp.upper_is_equality == observed), None


def _check_clique_psi_lower(ctx: InstanceContext) -> _CheckResult:
    predicted = ctx.clique_prediction.lower_psi
    observed = ctx.clique_number
    return predicted, observed, _verdict(observed >= predicted), None


def _check_clique_psi_plus(ctx: InstanceContext) -> _CheckResult:
    cp = ctx.clique_prediction
    predicted = cp.lower_psi + 1
    observed = ctx.clique_number
    if not cp.psi_plus:
        return predicted, observed, NOT_APPLICABLE, None
    return predicted, observed, _verdict(observed >= predicted), None


def _check_clique_c3_upper(ctx: InstanceContext) -> _CheckResult:
    cp = ctx.clique_prediction
    predicted = cp.lower_psi + 1
    observed = ctx.clique_number
    if not cp.c_cubed_applicable:
        return predicted, observed, NOT_APPLICABLE, None
    return predicted, observed, _verdict(observed <= predicted), None


def _check_clique_dc_decomposition(ctx: InstanceContext) -> _CheckResult:
    cp = ctx.clique_prediction
    if not cp.c_cubed_applicable or not ctx.c:
        return True, None, NOT_APPLICABLE, None
    holds = ctx.dc_failure is None and cp.c_cubed_case is not None
    witness = {"failure": ctx.dc_failure} if not holds else None
    return True, holds, _verdict(holds), witness


def _check_alpha_independence(ctx: InstanceContext) -> _CheckResult:
    ab = ctx.alpha_beta
    observed = ctx.independence_number
    if not ab.hypothesis_ok:
        return ab.alpha, observed, NOT_APPLICABLE, None
    return ab.alpha, observed, _verdict(ab.alpha == observed), None


def _check_alpha_prime_matching(ctx: InstanceContext) -> _CheckResult:
    ab = ctx.alpha_beta
    observed = ctx.matching_number
    if not ab.hypothesis_ok:
        return ab.alpha_prime, observed, NOT_APPLICABLE, None
    return ab.alpha_prime, observed, _verdict(ab.alpha_prime == observed), None


def _check_beta_cover(ctx: InstanceContext) -> _CheckResult:
    ab = ctx.alpha_beta
    observed = ctx.vertex_cover_number
    if not ab.hypothesis_ok:
        return ab.beta, observed, NOT_APPLICABLE, None
    return ab.beta, observed, _verdict(ab.beta == observed), None


def _check_beta_prime_edge_cover(ctx: InstanceContext) -> _CheckResult:
    ab = ctx.alpha_beta
    observed = ctx.edge_cover_number
    if not ab.hypothesis_ok or min(ctx.graph.degrees) == 0:
        return ab.beta_prime, observed, NOT_APPLICABLE, None
    return ab.beta_prime, observed, _verdict(ab.beta_prime == observed), None


def _check_class_one_coloring(ctx: InstanceContext) -> _CheckResult:
    if not ctx.c.difference(ctx.h):
        return len(ctx.c), None, NOT_APPLICABLE, None
    colors, failure = ctx.coloring_outcome
    ok = failure is None and colors <= len(ctx.c)
    witness = {"failure": failure} if failure else None
    return len(ctx.c), colors, _verdict(ok), witness


def _check_chromatic_upper(ctx: InstanceContext) -> _CheckResult:
    predicted = ctx.chromatic_prediction.upper
    observed = ctx.chromatic
    return predicted, observed, _verdict(observed <= predicted), None


def _check_chromatic_equality(ctx: InstanceContext) -> _CheckResult:
    ch = ctx.chromatic_prediction
    observed = ctx.chromatic == ch.upper
    if not ch.equality_applicable:
        return ch.predicted_equality, observed, NOT_APPLICABLE, None
    predicted = ch.predicted_equality
    if predicted is None:
        return predicted, observed, UNEVALUATED, None
    return predicted, observed, _verdict(predicted == observed), None


def _make_forbidden_check(kind: str, flag_name: str) -> Callable[[InstanceContext], _CheckResult]:
    def check(ctx: InstanceContext) -> _CheckResult:
        fb = ctx.forbidden(kind)
        observed = getattr(ctx.flags, flag_name)
        ok = fb.predicted == observed
        witness = dict(fb.details) if (not ok and fb.details) else None
        return fb.predicted, observed, _verdict(ok), witness

    return check


def _check_bipartite_sufficient(ctx: InstanceContext) -> _CheckResult:
    fb = ctx.forbidden("bipartite_sufficient")
    observed = ctx.flags.bipartite
    if not fb.applicable:
        return fb.predicted, observed, NOT_APPLICABLE, None
    return fb.predicted, observed, _verdict(observed), None


CHECK_FUNCTIONS: dict[str, Callable[[InstanceContext], _CheckResult]] = {
    "degree_formula": _check_degree_formula,
    "edge_count": _check_edge_count,
    "valency_bound": _check_valency_bound,
    "regular": _check_regular,
    "semi_regular": _check_semi_regular,
    "full_degree_coset": _check_full_degree_coset,
    "isolated_vertex": _check_isolated_vertex,
    "connectivity": _check_connectivity,
    "connectivity_disjoint": _check_connectivity_disjoint,
    "connectivity_aba": _check_connectivity_aba,
    "diam_width": _make_diameter_check("width"),
    "diam_half_sum": _make_diameter_check("half_sum"),
    "diam_three_halves": _make_diameter_check("three_halves"),
    "diam_disjoint": _make_diameter_check("disjoint"),
    "diam_small_square": _make_diameter_check("small_square"),
    "clique_upper": _check_clique_upper,
    "clique_equality": _check_clique_equality,
    "clique_psi_lower": _check_clique_psi_lower,
    "clique_psi_plus": _check_clique_psi_plus,
    "clique_c3_upper": _check_clique_c3_upper,
    "clique_dc_decomposition": _check_clique_dc_decomposition,
    "alpha_independence": _check_alpha_independence,
    "alpha_prime_matching": _check_alpha_prime_matching,
    "beta_cover": _check_beta_cover,
    "beta_prime_edge_cover": _check_beta_prime_edge_cover,
    "class_one_coloring": _check_class_one_coloring,
    "chromatic_upper": _check_chromatic_upper,
    "chromatic_equality": _check_chromatic_equality,
    "claw_free": _make_forbidden_check("claw_free", "claw_free"),
    "forest": _make_forbidden_check("forest", "forest"),
    "tree": _make_forbidden_check("tree", "tree"),
    "triangle_free": _make_forbidden_check("triangle_free", "triangle_free"),
    "square_free_as_printed": _make_forbidden_check(
        "square_free_as_printed", "square_subgraph_free"
    ),
    "bipartite_sufficient": _check_bipartite_sufficient,
}

ALL_CHECKS = tuple(CHECK_FUNCTIONS)


def _build_record(ctx: InstanceContext, check: str) -> AuditRecord:
    predicted, observed, verdict, witness = CHECK_FUNCTIONS[check](ctx)
    return AuditRecord(
        group=ctx.group.spec,
        h=ctx.names(ctx.h.members),
        c=ctx.names(ctx.c.members),
        check=check,
        predicted=predicted,
        observed=observed,
        verdict=verdict,
        witness=witness,
        h_indices=ctx.h.members,
        c_indices=ctx.c.members,
    )


def _resolve_checks(checks) -> tuple[str, ...]:
    if checks is None:
        return ALL_CHECKS
    resolved = tuple(checks)
    unknown = [name for name in resolved if name not in CHECK_FUNCTIONS]
    if unknown:
        raise UnknownCheckError(
            f"unknown check name(s): {', '.join(sorted(unknown))}"
        )
    return resolved


# --------------------------------------------------------------------------
# Deterministic stratified sampling of connection sets


def _fnv1a(text: str) -> int:
    value = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        value ^= byte
        value = (value * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return value


def _lcg_stream(seed: int):
    state = seed or 1
    while True:
        state = (state * 6364136223846793005 + 1442695040888963407) & 0xFFFFFFFFFFFFFFFF
        yield state


def _size_count_table(sizes: list[int]) -> list[list[int]]:
    """ways[i][r]: subsets of orbits i..end with total element count r."""
    total = sum(sizes)
    ways = [[0] * (total + 1) for _ in range(len(sizes) + 1)]
    ways[len(sizes)][0] = 1
    for i in range(len(sizes) - 1, -1, -1):
        for r in range(total + 1):
            count = ways[i + 1][r]
            if r >= sizes[i]:
                count += ways[i + 1][r - sizes[i]]
            ways[i][r] = count
    return ways


def _unrank_subset(orbits, sizes, ways, target: int, rank: int) -> list[int]:
    members: list[int] = []
    for i in range(len(orbits)):
        if target == 0:
            break
        without = ways[i + 1][target]
        if rank < without:
            continue
        rank -= without
        members.extend(orbits[i])
        target -= sizes[i]
    return members


def _sample_quota(counts: dict[int, int], cap: int) -> dict[int, int]:
    # round-robin over degree-of-|C| strata, ascending, until the cap is
    # spent; guarantees every stratum is represented
    quotas = {size: 0 for size in counts}
    remaining = cap
    while remaining > 0:
        progressed = False
        for size in sorted(counts):
            if remaining == 0:
                break
            if quotas[size] < counts[size]:
                quotas[size] += 1
                remaining -= 1
                progressed = True
        if not progressed:
            break
    return quotas


def _connection_sets_for(group, h_members: tuple[int, ...], limits: Limits):
    orbits = inverse_orbits(group)
    if (1 << len(orbits)) <= limits.max_connection_sets:
        return list(enumerate_connection_sets(group))
    sizes = [len(o) for o in orbits]
    ways = _size_count_table(sizes)
    counts = {r: ways[0][r] for r in range(sum(sizes) + 1) if ways[0][r]}
    quotas = _sample_quota(counts, limits.max_connection_sets)
    key_h = ",".join(map(str, h_members))
    result = []
    for size in sorted(counts):
        quota = quotas[size]
        if quota == counts[size]:
            ranks = range(counts[size])
        else:
            stream = _lcg_stream(_fnv1a(f"{group.spec}|{key_h}|{size}"))
            chosen: set[int] = set()
            while len(chosen) < quota:
                chosen.add(next(stream) % counts[size])
            ranks = sorted(chosen)
        for rank in ranks:
            members = _unrank_subset(orbits, sizes, ways, size, rank)
            result.append(ConnectionSet(group, members))
    return result


def _scanned_per_subgroup(group, limits: Limits) -> tuple[int, bool]:
    orbits = inverse_orbits(group)
    total = 1 << len(orbits)
    if total <= limits.max_connection_sets:
        return total, False
    sizes = [len(o) for o in orbits]
    ways = _size_count_table(sizes)
    counts = {r: ways[0][r] for r in range(sum(sizes) + 1) if ways[0][r]}
    quotas = _sample_quota(counts, limits.max_connection_sets)
    return sum(quotas.values()), True


# --------------------------------------------------------------------------
# Scan driver


def _scan_subgroup(args):
    catalog_index, spec, h_members, checks, limits, keep_records = args
    group = make_group(spec, max_order=limits.max_order)
    h = Subgroup(group, h_members)
    totals: Counter = Counter()
    mismatches: list[AuditRecord] = []
    records: list[AuditRecord] = []
    for c in _connection_sets_for(group, h_members, limits):
        ctx = InstanceContext(group, h, c, limits)
        for check in checks:
            record = _build_record(ctx, check)
            totals[(check, record.verdict)] += 1
            if record.verdict == MISMATCH:
                mismatches.append(record)
            if keep_records:
                records.append(record)
    sort_key = lambda r: (r.c_indices, r.check)
    mismatches.sort(key=sort_key)
    records.sort(key=sort_key)
    return catalog_index, h_members, dict(totals), mismatches, records


def run_audit(
    catalog=DEFAULT_CATALOG,
    checks=None,
    limits: Optional[Limits] = None,
    *,
    parallelism: int = 1,
    keep_records: bool = False,
    shrink: bool = True,
) -> AuditReport:
    """Scan the catalog and compare predictions with oracles on every check.

    Sampling kicks in per subgroup whenever a group admits more connection
    sets than ``limits.max_connection_sets``; it is deterministic, so two
    runs with the same arguments produce byte-identical JSON no matter the
    ``parallelism``.  Shrinking of mismatch witnesses can be switched off
    for speed when only totals matter.
    """
    started = time.monotonic()
    limits = limits or Limits()
    if parallelism < 1:
        raise PreconditionError("parallelism must be at least 1")
    checks = _resolve_checks(checks)

    catalog_entries = []
    work_items = []
    for index, requested_spec in enumerate(catalog):
        group = make_group(requested_spec, max_order=limits.max_order)
        subgroups = [s for s in enumerate_subgroups(group) if s.is_proper]
        scanned, sampled = _scanned_per_subgroup(group, limits)
        catalog_entries.append(
            {
                "spec": group.spec,
                "order": group.order,
                "proper_subgroups": len(subgroups),
                "connection_sets": 1 << len(inverse_orbits(group)),
                "scanned_per_subgroup": scanned,
                "sampled": sampled,
                "instances": scanned * len(subgroups),
            }
        )
        for s in subgroups:
            work_items.append(
                (index, group.spec, s.members, checks, limits, keep_records)
            )

    if parallelism == 1:
        results = [_scan_subgroup(item) for item in work_items]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(_scan_subgroup, work_items))

    totals_counter: Counter = Counter()
    raw_mismatches: list[AuditRecord] = []
    all_records: list[AuditRecord] = []
    for _, _, item_totals, item_mismatches, item_records in results:
        totals_counter.update(item_totals)
        raw_mismatches.extend(item_mismatches)
        all_records.extend(item_records)

    totals = {
        check: {verdict: totals_counter.get((check, verdict), 0) for verdict in VERDICTS}
        for check in checks
    }

    mismatch_entries = tuple(
        MismatchEntry(
            original=record,
            shrunk=shrink_counterexample(record, limits) if shrink else record,
        )
        for record in raw_mismatches
    )

    config = {
        "catalog": [entry["spec"] for entry in catalog_entries],
        "checks": list(checks),
        "max_order": limits.max_order,
        "edge_color_cutoff": limits.edge_color_cutoff,
        "chromatic_ii_cap": limits.chromatic_ii_cap,
        "max_connection_sets": limits.max_connection_sets,
        "shrink": shrink,
    }
    return AuditReport(
        config=config,
        catalog=tuple(catalog_entries),
        totals=totals,
        mismatches=mismatch_entries,
        records=tuple(all_records) if keep_records else None,
        wall_time_seconds=time.monotonic() - started,
    )


# --------------------------------------------------------------------------
# Counterexample shrinking


@lru_cache(maxsize=262144)
def _evaluate_single(
    spec: str,
    h_members: tuple[int, ...],
    c_members: tuple[int, ...],
    check: str,
    limits: Limits,
) -> AuditRecord:
    group = make_group(spec, max_order=limits.max_order)
    h = Subgroup(group, h_members)
    c = ConnectionSet(group, c_members)
    return _build_record(InstanceContext(group, h, c, limits), check)


def shrink_counterexample(
    record: AuditRecord, limits: Optional[Limits] = None
) -> AuditRecord:
    """Greedily minimize a mismatch: drop connection-set orbits, then move to
    smaller subgroups, as long as the same check still mismatches.

    Idempotent: shrinking an already-minimal record returns it unchanged.
    """
    if record.verdict != MISMATCH:
        raise PreconditionError("only mismatch records can be shrunk")
    limits = limits or Limits()
    spec = record.group
    group = make_group(spec, max_order=limits.max_order)
    h_members = record.h_indices
    c_members = record.c_indices
    check = record.check

    def still_mismatch(h_m, c_m):
        return _evaluate_single(spec, h_m, c_m, check, limits).verdict == MISMATCH

    changed = True
    while changed:
        changed = False
        for orbit in inverse_orbits(group):
            if not set(orbit) <= set(c_members):
                continue
            trial = tuple(x for x in c_members if x not in orbit)
            if still_mismatch(h_members, trial):
                c_members = trial
                changed = True
        current = set(h_members)
        for candidate in enumerate_subgroups(group):
            cand_members = candidate.members
            if len(cand_members) >= len(h_members):
                continue
            if not set(cand_members) <= current:
                continue
            if still_mismatch(cand_members, c_members):
                h_members = cand_members
                changed = True
                break
    return _evaluate_single(spec, h_members, c_members, check, limits)
