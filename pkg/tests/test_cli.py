from __future__ import annotations

import io
import json

import pytest

from polarspan import cli
from polarspan.cli import main

VERIFY_FIELDS = {
    "N",
    "n",
    "m",
    "points",
    "lines",
    "f2_rank",
    "z_free_rank",
    "torsion",
    "mu_injective",
    "basis_unimodular",
    "closure_spans",
}


def run(capsys, *argv: str) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv: str) -> tuple[int, dict]:
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_counts_text_table(capsys):
    code, out = run(capsys, "counts", "--genus-max", "7")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3
    assert lines[0].split() == ["g", "0", "1", "2", "3", "4", "5", "6", "7"]
    assert lines[1].split() == ["N(g)", "1", "2", "5", "15", "51", "188", "731", "2950"]
    assert lines[2].split() == ["n(g)", "1", "2", "5", "15", "51", "187", "715", "2795"]


def test_counts_csv_and_json(capsys):
    code, out = run(capsys, "counts", "--genus-max", "3", "--format", "csv")
    assert code == 0
    assert out.strip().splitlines() == [
        "g,0,1,2,3",
        "N(g),1,2,5,15",
        "n(g),1,2,5,15",
    ]
    code, data = run_json(capsys, "counts", "--genus-max", "3", "--format", "json")
    assert code == 0
    assert data["special"] == [1, 2, 5, 15]


def test_enumerate_sets(capsys):
    code, data = run_json(capsys, "enumerate", "--genus", "5", "--set", "almost-special")
    assert code == 0 and data["count"] == 188
    code, data = run_json(capsys, "enumerate", "--genus", "5", "--set", "special")
    assert code == 0 and data["count"] == 187
    assert "(145)(23)" not in data["diagrams"]
    code, data = run_json(capsys, "enumerate", "--genus", "5", "--set", "irreducible")
    assert code == 0 and data["count"] == 5


def test_lagrangians_and_lines(capsys):
    code, data = run_json(capsys, "lagrangians", "--genus", "2")
    assert code == 0 and data["count"] == 15
    code, data = run_json(capsys, "lines", "--genus", "2")
    assert code == 0 and data["count"] == 15
    for rec in data["lines"]:
        assert len(rec["points"]) == 3
        assert len(rec["axis"]) == 1


def test_closure_seed_variants(capsys, tmp_path, monkeypatch):
    code, data = run_json(capsys, "closure", "--genus", "2", "--seed", "special")
    assert code == 0 and data["spans_all"] and data["closure_size"] == 15

    monkeypatch.setattr("sys.stdin", io.StringIO("[0, 1, 2]"))
    code, data = run_json(capsys, "closure", "--genus", "1", "--seed", "-")
    assert code == 0 and data["seed_size"] == 3

    seed_file = tmp_path / "seed.json"
    seed_file.write_text("[0, 1]")
    code, data = run_json(
        capsys, "closure", "--genus", "1", "--seed-file", str(seed_file)
    )
    assert code == 0 and data["closure_size"] == 3


def test_mu_subcommand(capsys, monkeypatch):
    code, data = run_json(capsys, "mu", "--genus", "5", "--diagram", "(145)(23)")
    assert code == 0
    assert data["closed_form_agrees"] is True
    assert data["weight"] == 1
    assert len(data["point"]) == 5
    monkeypatch.setattr("sys.stdin", io.StringIO('{"diagram": "(12)"}'))
    code, data = run_json(capsys, "mu", "--genus", "2", "--diagram", "-")
    assert code == 0 and data["diagram"] == "(12)"
    assert data["point_index"] is not None


def test_rank_fields(capsys):
    code, data = run_json(capsys, "rank", "--genus", "2")
    assert code == 0
    assert {
        "genus",
        "points",
        "lines",
        "free_rank",
        "torsion",
        "expected_n",
        "match",
    } <= set(data)
    assert data["free_rank"] == 5 and data["torsion"] == [] and data["match"]
    code, data = run_json(capsys, "rank", "--genus", "2", "--ring", "F2")
    assert code == 0
    assert data["relation_rank"] == 10 and data["free_rank"] == 5 and data["match"]


def test_verify_basis_fields(capsys):
    code, data = run_json(capsys, "verify-basis", "--genus", "2")
    assert code == 0
    assert data["verdict"]["actual"] == "unimodular" and data["match"]
    assert data["free_rank"] == 5 and data["expected_n"] == 5


def test_express_unit_vector(capsys):
    code, data = run_json(capsys, "express", "--genus", "2", "--diagram", "(12)")
    assert code == 0 and data["match"]
    c = data["coefficients"]
    assert sum(map(abs, c)) == 1
    assert data["basis"][c.index(1)] == "(12)"
    assert data["residual_checked"] is True


def test_verify_record_shape(capsys):
    code, data = run_json(capsys, "verify", "--genus", "2")
    assert code == 0 and data["all_match"]
    rec = data["genus_records"][0]
    assert set(rec["checks"]) == VERIFY_FIELDS - {"elapsed"}
    assert "elapsed_seconds" in rec
    for chk in rec["checks"].values():
        assert set(chk) == {"expected", "actual", "match"}
    assert rec["checks"]["points"]["actual"] == 15
    assert rec["checks"]["z_free_rank"]["actual"] == 5


def test_verify_range_and_genus0(capsys):
    code, data = run_json(capsys, "verify", "--genus-min", "0", "--genus-max", "1")
    assert code == 0
    recs = {r["genus"]: r for r in data["genus_records"]}
    assert set(recs) == {0, 1}
    assert recs[0]["checks"]["z_free_rank"]["actual"] == 1
    assert any(s.startswith("m ") for s in recs[0]["skipped"])


def test_determinism_modulo_timing(capsys):
    def strip(d):
        if isinstance(d, dict):
            return {
                k: strip(v) for k, v in d.items() if k != "elapsed_seconds"
            }
        if isinstance(d, list):
            return [strip(x) for x in d]
        return d

    _, a = run_json(capsys, "verify", "--genus", "2", "--threads", "1")
    _, b = run_json(capsys, "verify", "--genus", "2", "--threads", "2")
    # the config echo legitimately records the thread count; results may not
    a["config"].pop("threads")
    b["config"].pop("threads")
    assert strip(a) == strip(b)


def test_bad_diagram_is_structured_error(capsys):
    code, data = run_json(capsys, "express", "--genus", "4", "--diagram", "(13)(24)")
    assert code == 2
    assert data["error"]["type"] == "NoncrossingViolation"
    code, data = run_json(capsys, "mu", "--genus", "3", "--diagram", "(14)")
    assert code == 2
    assert data["error"]["type"] == "PunctureOutOfRange"


def test_large_genus_requires_flag(capsys):
    code, data = run_json(capsys, "rank", "--genus", "5")
    assert code == 2
    assert data["error"]["type"] == "CapExceeded"
    assert "--allow-large" in data["error"]["message"]


def test_point_cap_is_enforced(capsys):
    code, data = run_json(
        capsys, "lagrangians", "--genus", "4", "--max-points", "100"
    )
    assert code == 2
    assert data["error"]["type"] == "ResourceLimitExceeded"


def test_output_file(capsys, tmp_path):
    out_file = tmp_path / "table.csv"
    code, out = run(
        capsys, "counts", "--genus-max", "2", "--format", "csv", "--output", str(out_file)
    )
    assert code == 0 and out == ""
    assert out_file.read_text().strip().splitlines()[0] == "g,0,1,2"


def test_threads_env_default(monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "3")
    assert cli._default_threads() == 3
    monkeypatch.setenv(cli.THREADS_ENV, "bogus")
    assert cli._default_threads() == 1


def test_schema_version_everywhere(capsys):
    for argv in (
        ["counts", "--genus-max", "1", "--format", "json"],
        ["rank", "--genus", "1"],
        ["verify", "--genus", "1"],
        ["mu", "--genus", "1", "--diagram", "(1)"],
    ):
        _, data = run_json(capsys, *argv)
        assert data["schema_version"] == cli.SCHEMA_VERSION
