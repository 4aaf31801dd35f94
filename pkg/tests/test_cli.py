from __future__ import annotations

import json
import subprocess
import sys

import pytest

from purelab.cli import exit_code, parse_inputs, run


def cli(*argv: str):
    return run(list(argv))


def test_llp_span_fails_with_witness():
    code, rep, _ = cli("llp", "fixtures/span.cat.json")
    assert code == 1
    assert rep["llp"] is False
    assert rep["witness"] == {"apex": "Z", "left": "f", "right": "g"}


def test_llp_c2_holds():
    code, rep, _ = cli("llp", "fixtures/c2.cat.json")
    assert code == 0 and rep["llp"] is True and rep["witness"] is None


def test_report_envelope(fixtures):
    _, rep, text = cli("llp", "fixtures/c2.cat.json")
    assert rep["tool"] == "purelab" and rep["version"] == "0.1.0" and rep["command"] == "llp"
    [inp] = rep["inputs"]
    assert inp["path"] == str((fixtures / "c2.cat.json").resolve())
    assert len(inp["sha256"]) == 64
    assert json.loads(text) == rep


def test_witness_span_depth_3():
    code, rep, _ = cli("witness", "--cat", "fixtures/span.cat.json", "--seed", "rep_Z:f,g,idZ", "--depth", "3")
    assert code == 0
    assert rep["sizes"] == [3, 5, 7, 9, 10, 12]
    assert rep["seed"] == {"a": "X:f", "b": "Y:g", "c": "Z:id_Z", "f": "f", "g": "g"}
    assert rep["order"]["matrix"] == [[m <= n for m in range(3)] for n in range(3)]
    assert rep["H"]["H"] == []


def test_witness_out_dir(tmp_path):
    d = tmp_path / "trace"
    code, rep, _ = cli(
        "witness", "--cat", "fixtures/span.cat.json", "--seed", "rep_Z:f,g,id_Z", "--arrows", "f,g",
        "--depth", "2", "--out-dir", str(d),
    )
    assert code == 0
    manifest = json.loads((d / "manifest.json").read_text())
    assert [s["size"] for s in manifest["stages"]] == [3, 5, 7]
    assert rep["written"] == [str(d / "manifest.json")]
    # stage files load back through the CLI
    code, rep, _ = cli("validate", *(str(d / s["file"]) for s in manifest["stages"]))
    assert code == 0 and [o["kind"] for o in rep["objects"]] == ["presheaf"] * 3


def test_witness_bad_seed_and_depth():
    code, rep, _ = cli("witness", "--cat", "fixtures/span.cat.json", "--seed", "rep_Z:f,f,idZ")
    assert code == 2 and rep["errors"][0]["error"] == "SeedConditionViolated"
    code, rep, _ = cli("witness", "--cat", "fixtures/span.cat.json", "--seed", "rep_Z:f,g,idZ", "--depth", "0")
    assert code == 2 and rep["errors"][0]["error"] == "BadParameters"


def test_validate_fixtures(fixtures):
    files = [str(p) for p in sorted(fixtures.glob("*.json"))]
    code, rep, _ = cli("validate", *files)
    assert code == 0
    assert len(rep["objects"]) == len(files)


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def test_parse_inputs_aggregates(tmp_path, fixtures):
    cat = str(fixtures / "span.cat.json")
    bad_arrow = _write(
        tmp_path / "bad.psh.json",
        {"category": cat, "carriers": {"X": ["x"], "Y": [], "Z": []}, "actions": {"f": {}, "g": {}, "h": {"x": "x"}}},
    )
    malformed = tmp_path / "broken.json"
    malformed.write_text("{")
    good = str(fixtures / "rep_Z.psh.json")
    objs, errors = parse_inputs([bad_arrow, str(malformed), good, str(tmp_path / "missing.json")])
    assert [kind for _, kind, _ in objs] == ["presheaf"]
    assert [e["error"] for e in errors] == ["BadTyping", "MalformedJson", "FileNotFound"]
    assert errors[0]["file"] == bad_arrow and errors[0].get("location")
    code, rep, _ = cli("validate", bad_arrow, str(malformed), good)
    assert code == 2 and len(rep["errors"]) == 2 and len(rep["objects"]) == 1


def test_pushout_source_mismatch():
    code, rep, _ = cli("pushout", "fixtures/gen_f.hom.json", "fixtures/gen_g.hom.json")
    assert code == 2
    assert rep["errors"][0]["error"] == "SourceMismatch"
    assert rep["errors"][0]["file"].endswith("gen_f.hom.json")


def test_pushout_writes_files(tmp_path):
    code, rep, _ = cli("pushout", "fixtures/rep_Z.id.hom.json", "fixtures/rep_Z.id.hom.json", "--out-dir", str(tmp_path))
    assert code == 0 and rep["size"] == 3
    assert sorted(p.name for p in tmp_path.iterdir()) == ["P.psh.json", "inA.hom.json", "inB.hom.json"]
    code, _, _ = cli("validate", str(tmp_path / "inA.hom.json"))
    assert code == 0


def test_pullback_of_generated():
    code, rep, _ = cli("pullback", "fixtures/gen_f.hom.json", "fixtures/gen_g.hom.json")
    assert code == 0 and rep["size"] == 0


def test_pure_and_split():
    code, rep, _ = cli("pure", "fixtures/gen_f.hom.json")
    assert code == 1 and rep["pure"] is False
    code, rep, _ = cli("split", "fixtures/gen_f.hom.json")
    assert code == 1 and rep["retraction"] is None
    code, rep, _ = cli("pure", "fixtures/c2_point.hom.json")
    assert code == 0
    code, rep, _ = cli("split", "fixtures/c2_point.hom.json")
    assert code == 0 and rep["retraction"] == {"*": {"p": "p", "q": "p"}}


def test_square_checks():
    code, rep, _ = cli("square", "fixtures/chain3_meet.sq.json", "--check", "pure-effective")
    assert code == 0
    code, rep, _ = cli("square", "fixtures/chain3_meet.sq.json", "--check", "pullback")
    assert code == 0 and rep["pullback"] is True
    code, rep, _ = cli("square", "fixtures/c2_empty_regular.sq.json", "--check", "pure-effective")
    assert code == 2
    err = rep["errors"][0]
    assert err["error"] == "NotPureInputs" and err["location"] == "kA"
    assert err["file"].endswith("c2_empty_regular.sq.json")
    code, rep, _ = cli("square", "fixtures/c2_empty_regular.sq.json", "--check", "pure-effective", "--lenient")
    assert code == 1 and rep["failed"] == "mono"


def test_components(fixtures):
    code, rep, _ = cli("components", "fixtures/rep_Z.psh.json", "--base", "fixtures/gen_f.hom.json")
    assert code == 0
    code, rep, _ = cli(
        "components", "fixtures/rep_Z.psh.json", "--base", "fixtures/gen_f.hom.json", "--pair", "g", "idZ"
    )
    assert code == 0 and rep["path"] == ["Y:g", "Z:id_Z"]


def test_pattern():
    code, rep, _ = cli("pattern", "fixtures/rep_Z.psh.json", "--f", "f", "--g", "g", "--shape", "bipartite:1,1")
    assert code == 0 and rep["witness"]["rows"] == ["X:f"]
    code, rep, _ = cli("pattern", "fixtures/rep_Z.psh.json", "--f", "f", "--g", "g", "--shape", "bipartite:2,2")
    assert code == 1 and rep["witness"] is None
    code, rep, _ = cli("pattern", "fixtures/rep_Z.psh.json", "--f", "f", "--g", "g", "--shape", "order:0")
    assert code == 2 and rep["errors"][0]["error"] == "BadParameters"
    code, rep, _ = cli("pattern", "fixtures/rep_Z.psh.json", "--f", "f", "--g", "id_X", "--shape", "order:2")
    assert code == 2 and rep["errors"][0]["error"] == "BadSpan"


@pytest.mark.parametrize(
    "report, code",
    [
        ({"holds": True}, 0),
        ({"holds": False}, 1),
        ({}, 1),
        ({"holds": True, "errors": [{"error": "X"}]}, 2),
        ({"holds": False, "errors": []}, 1),
    ],
)
def test_exit_code_depends_on_report_only(report, code):
    assert exit_code(report) == code


def test_out_and_text_format(tmp_path):
    out = tmp_path / "r.txt"
    code, rep, text = cli("llp", "fixtures/span.cat.json", "--format", "text", "--out", str(out))
    assert code == 1
    assert text.splitlines()[0] == "llp: fails"
    assert out.read_text() == text


def test_suite_only():
    code, rep, text = cli("suite", "--only", "1,6", "--format", "text")
    assert code == 0
    assert [r["criterion"] for r in rep["results"]] == [1, 6]
    assert sum(line.startswith("PASS") for line in text.splitlines()) == 2
    code, rep, _ = cli("suite", "--only", "12")
    assert code == 2


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "purelab.cli", "llp", "fixtures/c2.cat.json"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["llp"] is True
