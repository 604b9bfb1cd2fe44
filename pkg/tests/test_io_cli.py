import json
import shutil
import subprocess
from pathlib import Path

import pytest

from figures import FIG1_ARROWS, FIG4_COLORS, K34, arrow_entries, fig1_trees, parse_arrows
from trianguloids import io
from trianguloids.cli import run
from trianguloids.trianguloid import from_triangulation
from trianguloids.triangulation import validate

DATA = Path(__file__).parent / "data"


def _run(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# serialization

def test_golden_fig1_bytes():
    tau = validate(K34, fig1_trees())
    assert io.dumps(io.triangulation_to_json(tau)) == (DATA / "fig1.json").read_text()


def test_triangulation_round_trip():
    text = (DATA / "fig1.json").read_text()
    tau = io.triangulation_from_json(json.loads(text))
    assert io.dumps(io.triangulation_to_json(tau)) == text


def test_enumerated_objects_round_trip():
    import cache

    for tau in cache.triangulations("K33"):
        text = io.dumps(io.triangulation_to_json(tau))
        assert io.triangulation_from_json(json.loads(text)) == tau
    for T in cache.trianguloids("FIG6"):
        text = io.dumps(io.trianguloid_to_json(T))
        assert io.trianguloid_from_json(json.loads(text)) == T


@pytest.mark.parametrize("name", ["k22.json", "k32.json", "k33.json", "fig6_graph.json"])
def test_graph_round_trip(name):
    text = (DATA / name).read_text()
    assert io.dumps(io.graph_to_json(io.graph_from_json(json.loads(text)))) == text


def test_trianguloid_and_coloring_round_trip():
    text = (DATA / "fig3.json").read_text()
    T = io.trianguloid_from_json(json.loads(text))
    assert io.dumps(io.trianguloid_to_json(T)) == text
    T1 = from_triangulation(validate(K34, fig1_trees()))
    from trianguloids.trianguloid import encode_coloring

    C = encode_coloring(T1)
    assert io.coloring_from_json(json.loads(io.dumps(io.coloring_to_json(C)))) == C


def test_dumps_keeps_integer_lists_flat():
    text = io.dumps({"a": [[1, 2], [3]], "b": "x [1, 2]"})
    assert '[1,2]' in text and '"x [1, 2]"' in text
    assert json.loads(text) == {"a": [[1, 2], [3]], "b": "x [1, 2]"}


def test_format_errors(tmp_path):
    with pytest.raises(io.FormatError):
        io.read_json(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(io.FormatError):
        io.read_json(bad)
    with pytest.raises(io.FormatError):
        io.triangulation_from_json({"trees": []})
    with pytest.raises(io.FormatError):
        io.graph_from_json({"m": 2})


# CLI

def test_cli_lattice_points(capsys):
    code, out, _ = _run(capsys, "lattice-points", "--graph", DATA / "fig6_graph.json", "--polytope", "pgminus")
    assert code == 0
    assert len(out.split()) == 10 and "1,1,2" in out.split()


def test_cli_compat(capsys):
    code, out, _ = _run(
        capsys, "compat", "--graph", DATA / "k32.json",
        "--forest", DATA / "forest_a.json", "--forest", DATA / "forest_b.json",
    )
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == "incompatible" and "->" in lines[1]
    code, out, _ = _run(
        capsys, "compat", "--graph", DATA / "k32.json",
        "--forest", DATA / "forest_a.json", "--forest", DATA / "forest_a.json",
    )
    assert (code, out.strip()) == (0, "compatible")
    code, _, _ = _run(capsys, "compat", "--graph", DATA / "k32.json", "--forest", DATA / "forest_a.json")
    assert code == 2


def test_cli_validate(capsys):
    code, out, _ = _run(capsys, "validate", "--triangulation", DATA / "fig1.json")
    assert code == 0 and json.loads(out)["valid"] is True
    code, out, _ = _run(capsys, "validate", "--triangulation", DATA / "fig3_trees.json")
    rep = json.loads(out)
    assert code == 1 and rep["valid"] is False


def test_cli_phi_and_flip(capsys):
    code, out, _ = _run(capsys, "phi", "--triangulation", DATA / "fig1.json")
    assert code == 0 and "1,1,1 -> 0,0,1,1" in out.splitlines()
    code, out, _ = _run(capsys, "flip", "--triangulation", DATA / "fig1.json", "--point", "1,1,1", "--edge", "1,4")
    assert code == 0 and "0,2,1" in out


def test_cli_reconstruct(capsys, tmp_path):
    out_file = tmp_path / "tau.json"
    code, _, _ = _run(capsys, "reconstruct", "--collection", DATA / "fig6_rsm.json", "--kind", "rsm", "--out", out_file)
    assert code == 0
    tau = io.triangulation_from_json(io.read_json(out_file))
    assert len(tau) == 10


def test_cli_convert_chain(capsys, tmp_path):
    tg, col, back = tmp_path / "t.json", tmp_path / "c.json", tmp_path / "back.json"
    assert _run(capsys, "convert", "--from", "triangulation", "--to", "trianguloid", "--in", DATA / "fig1.json", "--out", tg)[0] == 0
    T = io.trianguloid_from_json(io.read_json(tg))
    assert {k: set(v) for k, v in T.entries.items() if v} == arrow_entries(FIG1_ARROWS)
    assert _run(capsys, "convert", "--from", "trianguloid", "--to", "coloring", "--in", tg, "--out", col)[0] == 0
    colors = {(tuple(e["from"]), tuple(e["to"])): e["color"] for e in io.read_json(col)["colors"]}
    assert colors == {(s, t): c for s, t, c in parse_arrows(FIG4_COLORS)}
    assert _run(capsys, "convert", "--from", "coloring", "--to", "triangulation", "--in", col, "--out", back)[0] == 0
    assert back.read_text() == (DATA / "fig1.json").read_text()


def test_cli_check(capsys):
    code, out, _ = _run(capsys, "check", "--trianguloid", DATA / "fig3.json")
    rep = json.loads(out)
    assert code == 1 and rep["is_pre"] and not rep["t4"]


def test_cli_enumerate(capsys, tmp_path):
    code, out, _ = _run(capsys, "enumerate", "--graph", DATA / "k22.json", "--method", "both")
    d = json.loads(out)
    assert code == 0 and d["agree"] and [r["count"] for r in d["reports"]] == [2, 2]
    emit = tmp_path / "out"
    code, out, _ = _run(capsys, "enumerate", "--graph", DATA / "k33.json", "--method", "trees", "--limit", "7", "--emit", emit)
    assert code == 0 and json.loads(out)["count"] == 7
    files = sorted(emit.glob("triangulation_*.json"))
    assert len(files) == 7
    assert all(io.triangulation_from_json(io.read_json(f)).graph.m == 3 for f in files)


def test_cli_render(capsys, tmp_path):
    tg = tmp_path / "t.json"
    _run(capsys, "convert", "--from", "triangulation", "--to", "trianguloid", "--in", DATA / "fig1.json", "--out", tg)
    svg1, svg2 = tmp_path / "a.svg", tmp_path / "b.svg"
    assert _run(capsys, "render", "--trianguloid", tg, "--out", svg1)[0] == 0
    assert _run(capsys, "render", "--trianguloid", tg, "--out", svg2, "--style", '{"scale": 60}')[0] == 0
    assert svg1.read_bytes() == svg2.read_bytes()
    assert _run(capsys, "render", "--trianguloid", tg, "--style", "{oops")[0] == 2


def test_cli_usage_errors(capsys):
    assert _run(capsys, "validate", "--triangulation", "/nonexistent.json")[0] == 2
    assert _run(capsys, "flip", "--triangulation", DATA / "fig1.json", "--point", "a,b", "--edge", "1,4")[0] == 2
    assert _run(capsys, "bogus")[0] == 2


@pytest.mark.skipif(shutil.which("trianguloids") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(
        ["trianguloids", "validate", "--triangulation", str(DATA / "fig1.json")],
        capture_output=True, text=True,
    )
    assert res.returncode == 0 and json.loads(res.stdout)["valid"]
