"""CLI tests: parsing, output shapes, exit codes, and figure reproduction."""
import json

import pytest

from relcay.audit import AuditRecord, AuditReport, MismatchEntry
from relcay.cli import execute_command, parse_elements, split_elements
from relcay.errors import GroupSpecError
from relcay.group_core import make_group


def test_split_elements_respects_parentheses():
    assert split_elements("a,a4,b") == ["a", "a4", "b"]
    assert split_elements("(12),(13)") == ["(12)", "(13)"]
    assert split_elements("") == []
    assert split_elements(" a , b ") == ["a", "b"]
    with pytest.raises(GroupSpecError):
        split_elements("(12,(13)")


def test_element_list_round_trip():
    group = make_group("S3")
    members = parse_elements(group, "(12),(132),(123)")
    rendered = ",".join(group.names[x] for x in members)
    assert parse_elements(group, rendered) == members


def test_check_chromatic_example(capsys):
    status = execute_command(
        ["check", "D5", "--subgroup", "a", "--conn", "a,a4,b", "--theorem", "chromatic"]
    )
    out = capsys.readouterr().out.splitlines()
    assert status == 0
    assert out[0] == "chromatic_upper: predicted=4 observed=3 verdict=agree"
    assert out[1] == "chromatic_equality: predicted=false observed=false verdict=agree"


def test_check_unknown_theorem(capsys):
    status = execute_command(
        ["check", "C4", "--subgroup", "a2", "--conn", "a2", "--theorem", "nope"]
    )
    assert status == 1
    assert "UnknownCheckError" in capsys.readouterr().err


def test_build_summary(capsys):
    status = execute_command(["build", "D5", "--subgroup", "a", "--conn", "a,a4,b"])
    out = capsys.readouterr().out
    assert status == 0
    assert "vertices: 10" in out
    assert "edges: 10" in out
    assert "subgroup: 1,a,a2,a3,a4 (order 5)" in out


def test_build_dot(capsys):
    status = execute_command(
        ["build", "D5", "--subgroup", "a", "--conn", "a,a4,b", "--dot"]
    )
    out = capsys.readouterr().out
    assert status == 0
    assert out.startswith("graph relcay {")
    assert out.count(" -- ") == 10
    assert out.count("[style=filled]") == 5


def test_invariants_output(capsys):
    status = execute_command(
        ["invariants", "D5", "--subgroup", "a", "--conn", "a,a4,b"]
    )
    out = capsys.readouterr().out
    assert status == 0
    assert "chromatic_number: 3" in out
    assert "edge_chromatic_number: 3" in out
    assert "tree: False" in out
    assert "connected: True" in out


def test_usage_error_exits_one(capsys):
    status = execute_command(["bogus"])
    assert status == 1
    assert capsys.readouterr().err.startswith("usage error:")


def test_library_error_exits_one(capsys):
    status = execute_command(["build", "D5", "--subgroup", "a", "--conn", "zz"])
    assert status == 1
    assert "GroupSpecError" in capsys.readouterr().err


def test_order_cap_flag(capsys):
    status = execute_command(
        ["build", "D5", "--max-order", "8", "--subgroup", "a", "--conn", "a,a4"]
    )
    assert status == 1
    assert "CapacityError" in capsys.readouterr().err


def test_env_order_cap(monkeypatch, capsys):
    monkeypatch.setenv("RELCAY_MAX_ORDER", "8")
    status = execute_command(["build", "D5", "--subgroup", "a", "--conn", "a,a4"])
    assert status == 1
    assert "CapacityError" in capsys.readouterr().err


def test_help_exits_zero(capsys):
    assert execute_command(["--help"]) == 0
    assert "subcommand" in capsys.readouterr().out or True


def test_audit_text_and_exit(capsys):
    status = execute_command(["audit", "--catalog", "C4", "--checks", "regular"])
    out = capsys.readouterr().out
    assert status == 0
    assert "catalog: C4 (8 instances)" in out
    assert "regular      6         0               2            0" in out


def test_audit_exit_zero_with_audited_findings(capsys):
    status = execute_command(
        ["audit", "--catalog", "S3", "--checks", "square_free_as_printed"]
    )
    out = capsys.readouterr().out
    assert status == 0
    assert "(blocking 0)" in out


def test_audit_json_output(tmp_path, capsys):
    target = tmp_path / "report.json"
    status = execute_command(
        [
            "audit",
            "--catalog",
            "C4",
            "--checks",
            "edge_count",
            "--format",
            "json",
            "--output",
            str(target),
        ]
    )
    assert status == 0
    capsys.readouterr()
    payload = json.loads(target.read_text(encoding="utf-8"))
    assert set(payload) == {"config", "catalog", "totals", "mismatches"}
    assert payload["totals"]["edge_count"]["agree"] == 8


def test_audit_full_json_includes_records(capsys):
    status = execute_command(
        ["audit", "--catalog", "C4", "--checks", "edge_count", "--format", "json", "--full"]
    )
    payload = json.loads(capsys.readouterr().out)
    assert status == 0
    assert len(payload["records"]) == 8


def test_audit_csv_format(capsys):
    status = execute_command(
        ["audit", "--catalog", "C4", "--checks", "edge_count", "--format", "csv"]
    )
    out = capsys.readouterr().out.splitlines()
    assert status == 0
    assert out[0] == "instance_group,instance_H,instance_C,check,predicted,observed,verdict"
    assert len(out) == 9


def _fake_blocking_report() -> AuditReport:
    record = AuditRecord(
        group="C4",
        h=("1",),
        c=("a", "a3"),
        check="edge_count",
        predicted=1,
        observed=2,
        verdict="mismatch",
    )
    return AuditReport(
        config={},
        catalog=(),
        totals={"edge_count": {"agree": 0, "mismatch": 1, "not-applicable": 0, "unevaluated": 0}},
        mismatches=(MismatchEntry(record, record),),
        records=None,
        wall_time_seconds=0.0,
    )


def test_audit_blocking_mismatch_exits_two(monkeypatch, capsys):
    monkeypatch.setattr(
        "relcay.cli.run_audit", lambda *args, **kwargs: _fake_blocking_report()
    )
    status = execute_command(["audit", "--catalog", "C4"])
    assert status == 2
    assert "(blocking 1)" in capsys.readouterr().out


def test_check_blocking_mismatch_exits_two(monkeypatch, capsys):
    record = _fake_blocking_report().mismatches[0].original

    monkeypatch.setattr(
        "relcay.cli._evaluate_single", lambda *args, **kwargs: record
    )
    status = execute_command(
        ["check", "C4", "--subgroup", "a", "--conn", "a,a3", "--theorem", "edge_count"]
    )
    assert status == 2
    assert "verdict=mismatch" in capsys.readouterr().out


def test_figures_bundle(tmp_path, capsys):
    out_dir = tmp_path / "figs"
    status = execute_command(["figures", "--out-dir", str(out_dir)])
    assert status == 0
    capsys.readouterr()
    expected = {
        "d5_sparse.dot": (10, 10),
        "d5_dense.dot": (10, 20),
        "d4_klein.dot": (8, 10),
    }
    for name, (nodes, edges) in expected.items():
        text = (out_dir / name).read_text(encoding="utf-8")
        assert "\r" not in text
        assert text.count(" -- ") == edges
        node_lines = [
            line
            for line in text.splitlines()
            if line.startswith('  "') and " -- " not in line
        ]
        assert len(node_lines) == nodes
    families = (out_dir / "diameter_families.txt").read_text(encoding="utf-8")
    assert "diameter=7 family_formula=7" in families
    assert "observed differs" in families


def test_figures_deterministic(tmp_path, capsys):
    first = tmp_path / "one"
    second = tmp_path / "two"
    assert execute_command(["figures", "--out-dir", str(first)]) == 0
    assert execute_command(["figures", "--out-dir", str(second)]) == 0
    capsys.readouterr()
    for name in ("d5_sparse.dot", "d5_dense.dot", "d4_klein.dot", "diameter_families.txt"):
        assert (first / name).read_bytes() == (second / name).read_bytes()
