import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from qsing.cli import run, seed_documents
from qsing.formats import dumps, quiver_from_json, quiver_to_json, setting_from_json, setting_to_json

ROOT = Path(__file__).resolve().parents[1]
INST = ROOT / "instances"
GOLD = Path(__file__).resolve().parent / "golden"

GOLDEN_RUNS = [
    ("reduce_conifold.jsonl", None, ["reduce", "conifold.json"]),
    ("reduce_two_loop.jsonl", None, ["reduce", "two_loop_dim2.json"]),
    ("analyze_332.json", "analyze_332.dot", ["analyze", "modular_332.json"]),
    ("analyze_422.json", None, ["analyze", "modular_422.json"]),
    ("local_two_loop.json", "local_two_loop.dot", ["local-quiver", "two_loop_dim2_quiver.json", "two_loop_dim2_reptype.json"]),
    ("local_conifold_witness.json", None, ["local-quiver", "modular_quiver.json", "conifold_witness_reptype.json"]),
    ("poset4.json", "poset4.dot", ["poset", "--max-dim", "4"]),
    (
        "compactify_hexagon.json",
        "compactify_hexagon.dot",
        ["compactify", "hexagon.json", "--vertices", "1,3,5", "--weights", "2,3,5", "--check", "4"],
    ),
    ("type_4_3a.json", None, ["type", "d4_4_3a.json", "--successors"]),
]


def _argv(args):
    return [str(INST / a) if a.endswith(".json") else a for a in args]


@pytest.mark.parametrize("golden, dot, args", GOLDEN_RUNS, ids=[g for g, _, _ in GOLDEN_RUNS])
def test_golden_outputs(tmp_path, golden, dot, args):
    argv = _argv(args) + ["--out", str(tmp_path / "out")]
    if dot:
        argv += ["--dot", str(tmp_path / "out.dot")]
    assert run(argv) == 0
    assert (tmp_path / "out").read_bytes() == (GOLD / golden).read_bytes()
    if dot:
        assert (tmp_path / "out.dot").read_bytes() == (GOLD / dot).read_bytes()


def test_poset_identical_across_threads(tmp_path):
    outs = []
    for threads in ("1", "4"):
        path = tmp_path / f"p{threads}.json"
        assert run(["poset", "--max-dim", "5", "--threads", threads, "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_poset_max_dim_4_node_count():
    doc = json.loads((GOLD / "poset4.json").read_text())
    assert len(doc["nodes"]) == 5
    assert sorted(n["id"] for n in doc["nodes"]) == ["1_1", "3_c", "4_2", "4_3a", "4_3b"]


def test_reduce_conifold_has_no_steps():
    lines = (GOLD / "reduce_conifold.jsonl").read_text().splitlines()
    assert len(lines) == 1
    assert json.loads(lines[0])["type"]["dim"] == 3


def test_analyze_golden_content():
    doc = json.loads((GOLD / "analyze_332.json").read_text())
    assert doc["dimension"] == 7 and doc["smooth"] is False
    assert set(doc["closure"]) == {"7_6a", "7_4a", "6_5k", "6_A", "5_4a", "4_3a", "3_c"}


def test_seed_examples_reproduce_instances(tmp_path):
    assert run(["seed-examples", str(tmp_path)]) == 0
    for name in seed_documents():
        assert (tmp_path / name).read_bytes() == (INST / name).read_bytes()


def test_analyze_updates_poset_cache(tmp_path):
    cache = tmp_path / "cache.json"
    assert run(["analyze", str(INST / "modular_332.json"), "--poset", str(cache), "--out", str(tmp_path / "a")]) == 0
    first = cache.read_bytes()
    assert run(["analyze", str(INST / "modular_332.json"), "--poset", str(cache), "--out", str(tmp_path / "b")]) == 0
    assert cache.read_bytes() == first
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes() == (GOLD / "analyze_332.json").read_bytes()


@pytest.mark.parametrize("name", sorted(p.name for p in INST.glob("*.json")))
def test_round_trip(name):
    doc = json.loads((INST / name).read_text())
    if "quiver" in doc and "dim" in doc:
        assert setting_to_json(setting_from_json(doc)) == doc
    elif "vertices" in doc:
        assert quiver_to_json(quiver_from_json(doc)) == doc
    assert dumps(doc) == (INST / name).read_text()


def test_export_dot(tmp_path, capsys):
    assert run(["export-dot", str(INST / "conifold.json")]) == 0
    out = capsys.readouterr().out
    assert out.startswith("digraph Q {") and 'v0 -> v1 [label="2"];' in out
    assert run(["export-dot", str(GOLD / "poset4.json")]) == 0
    assert capsys.readouterr().out == (GOLD / "poset4.dot").read_text()
    assert run(["export-dot", str(INST / "modular_332.json")]) == 0
    assert capsys.readouterr().out == (GOLD / "analyze_332.dot").read_text()


def _write(tmp_path, text):
    p = tmp_path / "in.json"
    p.write_text(text)
    return str(p)


def test_exit_codes(tmp_path, capsys):
    assert run(["reduce", str(tmp_path / "missing.json")]) == 2
    assert run(["reduce", _write(tmp_path, "{not json")]) == 2
    assert run(["reduce", _write(tmp_path, '{"quiver": {"vertices": 2}, "dim": [1, 1]}')]) == 2
    assert run(["reduce", _write(tmp_path, '{"quiver": {"vertices": 2, "arrows": [[0, 1, 1]]}, "dim": [1, 1]}')]) == 1
    assert run(["reduce", _write(tmp_path, '{"quiver": {"vertices": 1, "arrows": []}, "dim": [-1]}')]) == 1
    bad_rep = _write(tmp_path, '{"factors": [[1, [1, 0]], [1, [1, 0]]]}')
    acyclic = tmp_path / "q.json"
    acyclic.write_text('{"vertices": 2, "arrows": []}')
    assert run(["local-quiver", str(acyclic), bad_rep]) == 1
    assert run(["poset", "--max-dim", "5", "--budget", "5", "--out", str(tmp_path / "p")]) == 1
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(["poset"])
    assert exc.value.code == 2


def test_budget_env():
    env = dict(os.environ, QSING_BUDGET="5")
    res = subprocess.run(
        [sys.executable, "-m", "qsing", "poset", "--max-dim", "5"], env=env, capture_output=True, text=True
    )
    assert res.returncode == 1 and "budget" in res.stderr


def test_console_script_help():
    res = subprocess.run([sys.executable, "-m", "qsing", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    for cmd in ("reduce", "type", "local-quiver", "poset", "analyze", "compactify", "export-dot"):
        assert cmd in res.stdout
