import json
import subprocess
import sys

import pytest

from mxl.cli import main


def run(args, tmp_path, name="out.jsonl"):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    lines = out.read_text().splitlines() if out.exists() else []
    return code, [json.loads(ln) for ln in lines]


def without_timestamp(records):
    return [{k: v for k, v in r.items() if k != "timestamp"} for r in records]


def test_exchange_uniform_fixture(tmp_path):
    code, (rec,) = run(["exchange", "u24_instance.json"], tmp_path)
    assert code == 0
    assert rec["pair"]["U"] == [0] and rec["pair"]["V"] == [2]
    assert rec["brute_force"]["contains_output"]


def test_exchange_k4_fixture(tmp_path):
    code, (rec,) = run(["exchange", "k4_instance.json"], tmp_path)
    assert code == 0
    assert rec["pair"]["U"] == [0, 3] and rec["pair"]["V"] == [1, 4]
    assert len(rec["pair"]["U"]) <= rec["bound"]


def test_exchange_non_basis_is_invalid(tmp_path):
    code, _ = run(["exchange", "nonbasis_instance.json"], tmp_path)
    assert code == 2


def test_exchange_missing_file(tmp_path):
    assert main(["exchange", str(tmp_path / "nope.json")]) == 2


def test_axioms_exit_codes(tmp_path):
    code, (rec,) = run(["axioms", "corrupted_explicit.txt"], tmp_path)
    assert code == 1 and rec["verdict"] == "fail" and rec["violation_count"] > 0
    code, (rec,) = run(["axioms", "k4.graph"], tmp_path, "k4.jsonl")
    assert code == 0 and rec["axioms"] == "rank"


def test_catalog_lists_fixtures(capsys):
    assert main(["catalog"]) == 0
    text = capsys.readouterr().out
    assert "graphic(K4)" in text and "k4_instance.json" in text


@pytest.mark.parametrize("field", ["Q", "GF2", "GF3"])
def test_verify_identities_small(tmp_path, field):
    code, recs = run(["verify-identities", "--seed-range", "0..3", "--field", field,
                      "--cap-r", "3", "--cap-n", "6"], tmp_path)
    assert code == 0
    assert recs[-1]["summary"] and all(r["verdict"] != "fail" for r in recs[:-1])


def test_ultra_over_gf2_is_not_a_failure(tmp_path):
    code, recs = run(["verify-identities", "--seed-range", "0..5", "--field", "GF2", "--identities", "ultra",
                      "--cap-r", "3", "--cap-n", "6"], tmp_path)
    assert code == 0
    assert "fail" not in recs[-1]["summary"]


@pytest.mark.parametrize("mode", ["conjecture", "full", "weak"])
def test_conjecture_modes(tmp_path, mode):
    code, recs = run(["conjecture", "--seed-range", "20..39", "--mode", mode, "--cap-r", "4", "--cap-n", "8"],
                     tmp_path)
    assert code == 0
    assert "counterexample" not in recs[-1]["summary"]


def test_robustness_small(tmp_path):
    code, recs = run(["robustness", "--seed-range", "20..39", "--cap-r", "4", "--cap-n", "8", "--cap-k", "3"],
                     tmp_path)
    assert code == 0
    assert set(recs[-1]["summary"]) <= {"pass", "skipped"}


def test_replay_reproduces(tmp_path):
    src = tmp_path / "src.jsonl"
    assert main(["conjecture", "--seed-range", "22..31", "--cap-r", "4", "--cap-n", "8", "--out", str(src)]) == 0
    code, recs = run(["replay", str(src)], tmp_path, "replay.jsonl")
    assert code == 0
    assert len(recs) == 10 and all(r["match"] for r in recs)


def test_replay_detects_tampering(tmp_path):
    src = tmp_path / "src.jsonl"
    main(["robustness", "--seed-range", "0..2", "--cap-r", "3", "--cap-n", "6", "--out", str(src)])
    lines = src.read_text().splitlines()
    rec = json.loads(lines[0])
    rec["verdict"] = "fail" if rec["verdict"] != "fail" else "pass"
    lines[0] = json.dumps(rec)
    src.write_text("\n".join(lines) + "\n")
    code, recs = run(["replay", str(src)], tmp_path, "replay.jsonl")
    assert code == 1 and not recs[0]["match"]


def test_deterministic_output_and_jobs(tmp_path):
    args = ["verify-identities", "--seed-range", "0..7", "--cap-r", "3", "--cap-n", "6"]
    _, first = run(args, tmp_path, "a.jsonl")
    _, second = run(args, tmp_path, "b.jsonl")
    _, parallel = run([*args, "--jobs", "2"], tmp_path, "c.jsonl")
    assert without_timestamp(first) == without_timestamp(second) == without_timestamp(parallel)
    assert all("timestamp" not in r for r in first[:-1])


def test_budget_and_bad_arguments(tmp_path):
    assert main(["verify-identities", "--cap-n", "13", "--cap-r", "4"]) == 3
    assert main(["verify-identities", "--seed-range", "5..x"]) == 2
    assert main(["conjecture", "--cap-r", "7", "--cap-n", "10"]) == 2
    assert main(["verify-identities", "--identities", "bogus", "--seed-range", "0..0"]) == 2
    assert main([]) == 2


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "mxl.cli", "catalog"], capture_output=True, text=True)
    assert out.returncode == 0 and "families:" in out.stdout
