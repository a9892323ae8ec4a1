"""Command-line interface: report schema, exit codes, determinism, and
selector/error handling."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from mackeykit import cli
from mackeykit.cli import SCHEMA_VERSION, run


def run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


# -- schema and status ---------------------------------------------------------


def test_group_report_schema(capsys):
    code, rep = run_json(capsys, ["group", "--group", "s3"])
    assert code == 0
    assert rep["schema_version"] == SCHEMA_VERSION
    assert rep["status"] == "pass"
    assert rep["subcommand"] == "group"
    assert rep["group"] == {"ref": "s3", "order": 6}
    assert rep["seed"] == 0
    assert rep["payload"]["order"] == 6
    assert rep["payload"]["abelian"] is False
    assert len(rep["payload"]["subgroup_classes"]) == 4
    assert "timing_ms" not in rep


def test_tom_payload(capsys):
    code, rep = run_json(capsys, ["tom", "--group", "c2"])
    assert code == 0
    assert rep["payload"]["marks"] == [[2, 0], [1, 1]]


def test_reports_are_byte_identical_across_runs(capsys):
    run(["xburn", "--group", "s3"])
    first = capsys.readouterr().out
    run(["xburn", "--group", "s3"])
    second = capsys.readouterr().out
    assert first == second
    assert first.endswith("\n")


def test_timing_flag_adds_timing_and_nothing_else(capsys):
    code, rep = run_json(capsys, ["tom", "--group", "s3", "--timing"])
    assert code == 0
    assert "timing_ms" in rep and "total" in rep["timing_ms"]
    code, plain = run_json(capsys, ["tom", "--group", "s3"])
    rep.pop("timing_ms")
    assert rep == plain


def test_text_format(capsys):
    code = run(["tom", "--group", "s3", "--format", "text"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("tom on s3 (order 6): pass")


def test_json_output_is_sorted(capsys):
    run(["group", "--group", "c3"])
    out = capsys.readouterr().out
    assert json.dumps(json.loads(out), sort_keys=True, indent=2) + "\n" == out


# -- subcommand behavior ---------------------------------------------------------


def test_isocomma_subcommand(capsys):
    code, rep = run_json(capsys, ["isocomma", "--group", "s3",
                                  "--left", "1", "--right", "4"])
    assert code == 0
    assert rep["status"] == "pass"
    assert rep["payload"]["counts_match"] is True
    assert all(c["isomorphic"] for c in rep["payload"]["components"])


def test_xburn_payload_rank(capsys):
    code, rep = run_json(capsys, ["xburn", "--group", "c2"])
    assert code == 0
    assert rep["payload"]["rank"] == 4
    assert rep["payload"]["burnside_subring_embeds"] is True


def test_xburn_with_prime_reports_rho_coh(capsys):
    code, rep = run_json(capsys, ["xburn", "--group", "s3", "--prime", "3"])
    assert code == 0
    assert rep["payload"]["rho_coh"] == {
        "unital": True, "homomorphism": True, "surjective": True}


def test_blocks_subcommand(capsys):
    code, rep = run_json(capsys, ["blocks", "--group", "s3", "--prime", "2"])
    assert code == 0
    assert sorted(b["dimension"] for b in rep["payload"]["blocks"]) == [2, 4]


def test_vertex_subcommand(capsys):
    code, rep = run_json(capsys, ["vertex", "--group", "s3", "--prime", "2",
                                  "--module", "trivial"])
    assert code == 0
    assert rep["payload"]["vertex"]["order"] == 2


def test_mackey_check_subcommand(capsys):
    code, rep = run_json(capsys, ["mackey-check", "--group", "c3"])
    assert code == 0
    clauses = {c["name"] for c in rep["payload"]["mackey_clauses"]}
    assert "mackey-formula" in clauses
    assert all(not c["failures"] for c in rep["payload"]["mackey_clauses"])
    assert rep["payload"]["cohomological"]["holds"] is False  # Burnside functor


def test_mackey_check_constant_is_cohomological(capsys):
    code, rep = run_json(capsys, ["mackey-check", "--group", "c3",
                                  "--functor", "constant", "--prime", "3"])
    assert code == 0
    assert rep["payload"]["cohomological"]["holds"] is True


def test_verify_subcommand_small_group(capsys):
    code, rep = run_json(capsys, ["verify", "--group", "s3", "--prime", "2"])
    assert code == 0
    assert rep["status"] == "pass"
    phases = {p["name"]: p["instances"] for p in rep["payload"]["phases"]}
    assert phases["isocomma-decompositions"] == 16  # 4 x 4 class pairs
    assert phases["mackey-functor-axioms"] > 0
    assert rep["payload"]["block_dimensions"] == [2, 4]
    assert "failures" not in rep


# -- exit codes -------------------------------------------------------------------


def test_unknown_group_exits_2(capsys):
    code, rep = run_json(capsys, ["group", "--group", "nope"])
    assert code == 2
    assert rep["status"] == "error"
    assert "reason" in rep


def test_bad_prime_exits_2(capsys):
    code, rep = run_json(capsys, ["blocks", "--group", "s3", "--prime", "1"])
    assert code == 2
    assert rep["status"] == "error"
    code, rep = run_json(capsys, ["blocks", "--group", "s3", "--prime", "4"])
    assert code == 2


def test_bad_subgroup_selector_exits_2(capsys):
    code, rep = run_json(capsys, ["isocomma", "--group", "s3",
                                  "--left", "9", "--right", "1"])
    assert code == 2
    assert "outside group" in rep["reason"]


def test_bad_module_selector_exits_2(capsys):
    code, rep = run_json(capsys, ["vertex", "--group", "s3", "--prime", "2",
                                  "--module", "nonsense"])
    assert code == 2
    assert "module selector" in rep["reason"]


def test_decomposable_module_vertex_exits_2(capsys):
    code, rep = run_json(capsys, ["vertex", "--group", "s3", "--prime", "2",
                                  "--module", "regular"])
    assert code == 2
    assert "indecomposable" in rep["reason"]


def test_unknown_subcommand_exits_2(capsys):
    assert run(["frobnicate", "--group", "s3"]) == 2


def test_missing_required_prime_exits_2(capsys):
    assert run(["blocks", "--group", "s3"]) == 2


def test_identity_failure_exits_1(capsys, monkeypatch):
    # no honest failing input exists for a correct build, so exercise the
    # plumbing: a handler reporting a failed identity must yield exit 1
    def fake(G, args):
        return {"stub": True}, ["identity X != Y at level Z"]

    monkeypatch.setitem(cli._HANDLERS, "tom", fake)
    code, rep = run_json(capsys, ["tom", "--group", "c2"])
    assert code == 1
    assert rep["status"] == "fail"
    assert rep["reason"] == "identity X != Y at level Z"
    assert rep["failures"] == ["identity X != Y at level Z"]


def test_arithmetic_error_exits_1(capsys, monkeypatch):
    def fake(G, args):
        raise ArithmeticError("composite is not the identity\ndetail line")

    monkeypatch.setitem(cli._HANDLERS, "tom", fake)
    code, rep = run_json(capsys, ["tom", "--group", "c2"])
    assert code == 1
    assert rep["status"] == "fail"
    assert rep["reason"] == "composite is not the identity"


# -- console entry point -------------------------------------------------------------


def test_module_invocation_round_trip():
    proc = subprocess.run(
        [sys.executable, "-m", "mackeykit.cli", "group", "--group", "q8"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    rep = json.loads(proc.stdout)
    assert rep["group"]["order"] == 8
    assert rep["payload"]["abelian"] is False
