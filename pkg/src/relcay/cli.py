"""Command-line surface: build graphs, print invariants, compare predictions
with oracles, run catalog audits, and reproduce the reference figures.

Exit status contract: 0 on success, 1 on usage or library errors (the error
class name goes to standard error), 2 when a ``check`` or ``audit`` run finds
a mismatch on any check that is not marked audited.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from .audit import (
    ALL_CHECKS,
    AUDITED_CHECKS,
    DEFAULT_CATALOG,
    MISMATCH,
    Limits,
    _evaluate_single,
    _jsonable,
    run_audit,
)
from .errors import RelCayError, GroupSpecError, PreconditionError, UnknownCheckError
from .graphs import ConnectionSet, RelCayGraph, build_relcay
from .group_core import ElementSet, default_max_order, generated_subgroup, make_group
from .oracles import (
    DEFAULT_EDGE_COLOR_CUTOFF,
    diameter_components,
    invariant_report,
    structure_flags,
)
from .theorems import DEFAULT_CHROMATIC_II_CAP

__all__ = ["CliConfig", "execute_command", "console_main"]

OUTPUT_FORMATS = ("text", "json", "csv", "dot")

# check-name families accepted by `check --theorem`
THEOREM_FAMILIES = {
    "valency": (
        "degree_formula",
        "edge_count",
        "valency_bound",
        "regular",
        "semi_regular",
        "full_degree_coset",
        "isolated_vertex",
    ),
    "connectivity": ("connectivity", "connectivity_disjoint", "connectivity_aba"),
    "diameter": (
        "diam_width",
        "diam_half_sum",
        "diam_three_halves",
        "diam_disjoint",
        "diam_small_square",
    ),
    "clique": (
        "clique_upper",
        "clique_equality",
        "clique_psi_lower",
        "clique_psi_plus",
        "clique_c3_upper",
        "clique_dc_decomposition",
    ),
    "alpha_beta": (
        "alpha_independence",
        "alpha_prime_matching",
        "beta_cover",
        "beta_prime_edge_cover",
    ),
    "coloring": ("class_one_coloring",),
    "chromatic": ("chromatic_upper", "chromatic_equality"),
    "forbidden": (
        "claw_free",
        "forest",
        "tree",
        "triangle_free",
        "square_free_as_printed",
        "bipartite_sufficient",
    ),
}


@dataclass(frozen=True)
class CliConfig:
    max_order: int
    edge_color_cutoff: int = DEFAULT_EDGE_COLOR_CUTOFF
    chromatic_ii_cap: int = DEFAULT_CHROMATIC_II_CAP
    max_connection_sets: int = 512
    parallelism: int = 1
    format: str = "text"
    full: bool = False

    def __post_init__(self) -> None:
        caps = (
            self.max_order,
            self.edge_color_cutoff,
            self.chromatic_ii_cap,
            self.max_connection_sets,
            self.parallelism,
        )
        if any(value < 1 for value in caps):
            raise PreconditionError("all CLI caps must be positive")
        if self.format not in OUTPUT_FORMATS:
            raise PreconditionError(f"unknown output format {self.format!r}")

    def limits(self) -> Limits:
        return Limits(
            max_order=self.max_order,
            edge_color_cutoff=self.edge_color_cutoff,
            chromatic_ii_cap=self.chromatic_ii_cap,
            max_connection_sets=self.max_connection_sets,
        )


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


# --------------------------------------------------------------------------
# Element-list parsing against canonical names


def split_elements(text: str) -> list[str]:
    """Split a comma-separated element list, respecting parentheses.

    Permutation names such as ``(12)`` contain no commas, but cycle-style
    names could; splitting only at depth zero keeps the grammar open.
    """
    parts: list[str] = []
    current: list[str] = []
    depth = 0
    for ch in text:
        if ch == "," and depth == 0:
            parts.append("".join(current).strip())
            current = []
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise GroupSpecError(f"unbalanced parentheses in {text!r}")
        current.append(ch)
    if depth != 0:
        raise GroupSpecError(f"unbalanced parentheses in {text!r}")
    parts.append("".join(current).strip())
    return [p for p in parts if p]


def parse_elements(group, text: str) -> tuple[int, ...]:
    index = {name: i for i, name in enumerate(group.names)}
    members = []
    for name in split_elements(text):
        if name not in index:
            raise GroupSpecError(
                f"unknown element {name!r} for {group.spec}; names are "
                + ",".join(group.names)
            )
        members.append(index[name])
    return tuple(members)


def _instance(group, subgroup_text: str, conn_text: str):
    generators = parse_elements(group, subgroup_text)
    h = generated_subgroup(ElementSet(group, generators))
    c = ConnectionSet(group, parse_elements(group, conn_text))
    return h, c


# --------------------------------------------------------------------------
# DOT serialization


def dot_format(graph: RelCayGraph) -> str:
    """Deterministic undirected DOT text; subgroup vertices drawn filled."""
    group = graph.group
    lines = ["graph relcay {", "  node [shape=circle];"]
    for x in range(graph.n):
        name = group.names[x]
        if x in graph.h:
            lines.append(f'  "{name}" [style=filled];')
        else:
            lines.append(f'  "{name}";')
    for u in range(graph.n):
        row = graph.adjacency[u] >> (u + 1)
        v = u + 1
        while row:
            if row & 1:
                lines.append(f'  "{group.names[u]}" -- "{group.names[v]}";')
            row >>= 1
            v += 1
    lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Subcommands


def _cmd_build(args, config: CliConfig) -> int:
    group = make_group(args.spec, max_order=config.max_order)
    h, c = _instance(group, args.subgroup, args.conn)
    graph = build_relcay(group, h, c)
    if args.dot:
        sys.stdout.write(dot_format(graph))
        return 0
    distinct = sorted(set(graph.degrees))
    print(f"group: {group.spec} (order {group.order})")
    print(f"subgroup: {','.join(group.names[x] for x in h.members)} (order {len(h)})")
    print(f"connection set: {','.join(group.names[x] for x in c.members)} (size {len(c)})")
    print(f"vertices: {graph.n}")
    print(f"edges: {graph.edge_count}")
    print(f"distinct degrees: {','.join(map(str, distinct))}")
    components, diameter = diameter_components(graph)
    print(f"components: {len(components)}")
    print(f"diameter: {diameter}")
    return 0


def _cmd_invariants(args, config: CliConfig) -> int:
    group = make_group(args.spec, max_order=config.max_order)
    h, c = _instance(group, args.subgroup, args.conn)
    graph = build_relcay(group, h, c)
    report = invariant_report(graph, edge_color_cutoff=config.edge_color_cutoff)
    for field_name in (
        "clique_number",
        "independence_number",
        "matching_number",
        "domination_number",
        "vertex_cover_number",
        "edge_cover_number",
        "chromatic_number",
        "edge_chromatic_number",
        "diameter",
        "component_count",
    ):
        print(f"{field_name}: {getattr(report, field_name)}")
    flags = structure_flags(graph)
    for flag_name in (
        "connected",
        "bipartite",
        "forest",
        "tree",
        "triangle_free",
        "square_subgraph_free",
        "claw_free",
        "regular",
        "semi_regular",
    ):
        print(f"{flag_name}: {getattr(flags, flag_name)}")
    return 0


def _resolve_theorem(name: Optional[str]) -> tuple[str, ...]:
    if name is None:
        return ALL_CHECKS
    if name in THEOREM_FAMILIES:
        return THEOREM_FAMILIES[name]
    if name in ALL_CHECKS:
        return (name,)
    raise UnknownCheckError(
        f"unknown theorem or check {name!r}; families: "
        + ", ".join(sorted(THEOREM_FAMILIES))
    )


def _cmd_check(args, config: CliConfig) -> int:
    group = make_group(args.spec, max_order=config.max_order)
    h, c = _instance(group, args.subgroup, args.conn)
    limits = config.limits()
    blocking = False
    for check in _resolve_theorem(args.theorem):
        record = _evaluate_single(group.spec, h.members, c.members, check, limits)
        predicted = json.dumps(_jsonable(record.predicted), sort_keys=True)
        observed = json.dumps(_jsonable(record.observed), sort_keys=True)
        print(f"{check}: predicted={predicted} observed={observed} verdict={record.verdict}")
        if record.verdict == MISMATCH and check not in AUDITED_CHECKS:
            blocking = True
    return 2 if blocking else 0


def _format_audit_text(report) -> str:
    lines = []
    specs = ", ".join(entry["spec"] for entry in report.catalog)
    instance_total = sum(entry["instances"] for entry in report.catalog)
    lines.append(f"catalog: {specs} ({instance_total} instances)")
    width = max((len(name) for name in report.totals), default=10)
    header = f"{'check'.ljust(width)}  agree  mismatch  not-applicable  unevaluated"
    lines.append(header)
    for name, tally in report.totals.items():
        lines.append(
            f"{name.ljust(width)}  {tally['agree']:5d}  {tally['mismatch']:8d}  "
            f"{tally['not-applicable']:14d}  {tally['unevaluated']:11d}"
        )
    blocking = sum(
        1 for e in report.mismatches if e.original.check not in AUDITED_CHECKS
    )
    lines.append(f"mismatches: {len(report.mismatches)} (blocking {blocking})")
    lines.append(f"wall time: {report.wall_time_seconds:.1f}s")
    return "\n".join(lines) + "\n"


def _cmd_audit(args, config: CliConfig) -> int:
    keep_records = config.full or config.format == "csv"
    report = run_audit(
        args.catalog,
        args.checks,
        config.limits(),
        parallelism=config.parallelism,
        keep_records=keep_records,
    )
    if config.format == "json":
        text = report.to_json()
    elif config.format == "csv":
        text = report.to_csv()
    elif config.format == "text":
        text = _format_audit_text(report)
    else:
        raise PreconditionError("audit output format must be text, json, or csv")
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(text)
    return 2 if report.has_blocking_mismatch() else 0


FIGURE_INSTANCES = (
    ("d5_sparse.dot", "D5", "a", "a,a4,b"),
    ("d5_dense.dot", "D5", "a", "a,a4,b,ab,a4b"),
    ("d4_klein.dot", "D4", "a2,b", "a,a3,b"),
)

CORONA_FAMILY = ("D4", "D6", "D8", "D10")

CYCLIC_FAMILY = (("C8", "a4", "a,a2,a6,a7", 4), ("C16", "a4", "a,a2,a14,a15", 6))

CYCLIC_FINDINGS = (("C4", "a2", "a,a3", 4), ("C8", "a2", "a,a7", 6))


def _family_lines(config: CliConfig) -> list[str]:
    lines = ["corona cycle family (rotation subgroup, one step plus a reflection)"]
    for spec in CORONA_FAMILY:
        group = make_group(spec, max_order=config.max_order)
        half = group.order // 2
        conn = f"a,a{half - 1},b"
        h, c = _instance(group, "a", conn)
        graph = build_relcay(group, h, c)
        flags = structure_flags(graph)
        _, diameter = diameter_components(graph)
        expected = half // 2 + 2
        lines.append(
            f"{group.spec} H=<a> C={conn}: edges={graph.edge_count} "
            f"connected={flags.connected} triangle_free={flags.triangle_free} "
            f"diameter={diameter} family_formula={expected}"
        )
    lines.append("")
    lines.append("cyclic bipartite family (index-4 subgroup, two steps)")
    for spec, h_gen, conn, expected in CYCLIC_FAMILY:
        group = make_group(spec, max_order=config.max_order)
        h, c = _instance(group, h_gen, conn)
        graph = build_relcay(group, h, c)
        flags = structure_flags(graph)
        _, diameter = diameter_components(graph)
        lines.append(
            f"{group.spec} H=<{h_gen}> C={conn}: bipartite={flags.bipartite} "
            f"diameter={diameter} family_formula={expected}"
        )
    lines.append("")
    lines.append("recorded findings (single-step connection; formula does not apply)")
    for spec, h_gen, conn, stated in CYCLIC_FINDINGS:
        group = make_group(spec, max_order=config.max_order)
        h, c = _instance(group, h_gen, conn)
        graph = build_relcay(group, h, c)
        flags = structure_flags(graph)
        _, diameter = diameter_components(graph)
        lines.append(
            f"{group.spec} H=<{h_gen}> C={conn}: bipartite={flags.bipartite} "
            f"diameter={diameter} family_formula={stated} (observed differs)"
        )
    return lines


def _cmd_figures(args, config: CliConfig) -> int:
    os.makedirs(args.out_dir, exist_ok=True)
    for filename, spec, h_text, c_text in FIGURE_INSTANCES:
        group = make_group(spec, max_order=config.max_order)
        h, c = _instance(group, h_text, c_text)
        graph = build_relcay(group, h, c)
        path = os.path.join(args.out_dir, filename)
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(dot_format(graph))
        print(f"wrote {path} ({graph.n} nodes, {graph.edge_count} edges)")
    lines = _family_lines(config)
    path = os.path.join(args.out_dir, "diameter_families.txt")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
    print(f"wrote {path} ({len(lines)} lines)")
    return 0


# --------------------------------------------------------------------------
# Parser assembly and dispatch


def _build_parser() -> _Parser:
    parser = _Parser(prog="relcay", description=__doc__)
    common = _Parser(add_help=False)
    common.add_argument(
        "--max-order",
        type=int,
        default=None,
        help="group order cap (default: RELCAY_MAX_ORDER or 64)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_args(p) -> None:
        p.add_argument("spec", help="group spec, e.g. D5 or C2xC4")
        p.add_argument(
            "--subgroup",
            required=True,
            help="comma-separated generators; closure is taken",
        )
        p.add_argument(
            "--conn", required=True, help="comma-separated connection elements"
        )

    p_build = sub.add_parser("build", parents=[common], help="construct one graph")
    instance_args(p_build)
    p_build.add_argument("--dot", action="store_true", help="emit DOT instead of a summary")

    p_inv = sub.add_parser(
        "invariants", parents=[common], help="exact invariants of one graph"
    )
    instance_args(p_inv)
    p_inv.add_argument(
        "--edge-color-cutoff",
        type=int,
        default=DEFAULT_EDGE_COLOR_CUTOFF,
        help="skip exact edge chromatic above this many edges",
    )

    p_check = sub.add_parser(
        "check", parents=[common], help="predictions versus oracles for one instance"
    )
    instance_args(p_check)
    p_check.add_argument(
        "--theorem",
        default=None,
        help="restrict to one family or one check name",
    )

    p_audit = sub.add_parser("audit", parents=[common], help="scan a catalog")
    p_audit.add_argument("--catalog", nargs="+", default=list(DEFAULT_CATALOG))
    p_audit.add_argument("--checks", nargs="+", default=None)
    p_audit.add_argument("--max-connection-sets", type=int, default=512)
    p_audit.add_argument("--chromatic-ii-cap", type=int, default=DEFAULT_CHROMATIC_II_CAP)
    p_audit.add_argument("--edge-color-cutoff", type=int, default=DEFAULT_EDGE_COLOR_CUTOFF)
    p_audit.add_argument("--parallelism", type=int, default=1)
    p_audit.add_argument("--full", action="store_true", help="keep per-instance records")
    p_audit.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p_audit.add_argument("--output", default=None, help="write the report to a file")

    p_fig = sub.add_parser(
        "figures", parents=[common], help="write reference DOT files and family summaries"
    )
    p_fig.add_argument("--out-dir", default="figures")

    return parser


def _config_from(args) -> CliConfig:
    return CliConfig(
        max_order=args.max_order if args.max_order else default_max_order(),
        edge_color_cutoff=getattr(args, "edge_color_cutoff", DEFAULT_EDGE_COLOR_CUTOFF),
        chromatic_ii_cap=getattr(args, "chromatic_ii_cap", DEFAULT_CHROMATIC_II_CAP),
        max_connection_sets=getattr(args, "max_connection_sets", 512),
        parallelism=getattr(args, "parallelism", 1),
        format=getattr(args, "format", "text"),
        full=getattr(args, "full", False),
    )


_COMMANDS = {
    "build": _cmd_build,
    "invariants": _cmd_invariants,
    "check": _cmd_check,
    "audit": _cmd_audit,
    "figures": _cmd_figures,
}


def execute_command(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"usage error: {err} (see relcay --help)", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _config_from(args)
        return _COMMANDS[args.command](args, config)
    except RelCayError as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(execute_command())
