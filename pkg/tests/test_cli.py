import json

import pytest

from hrushovski import catalog
from hrushovski.amalgam import free_amalgam
from hrushovski.cli import main
from hrushovski.graph import Graph, are_isomorphic, graph_to_text, parse_graph
from hrushovski.predim import GoodFunction


def _write_graph(tmp_path, name, g):
    path = tmp_path / f"{name}.txt"
    path.write_text(graph_to_text(g))
    return str(path)


def _write_diagram(tmp_path, name, diag):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(diag.to_json()))
    return str(path)


def _printed_graphs(text):
    """Graphs printed as indented v/e blocks, one block per closure."""
    blocks, cur = [], None
    for line in text.splitlines():
        body = line.strip()
        if body.startswith(("v ", "e ")):
            if cur is None:
                cur = []
            cur.append(body)
        elif cur is not None:
            blocks.append(parse_graph("\n".join(cur)))
            cur = None
    if cur is not None:
        blocks.append(parse_graph("\n".join(cur)))
    return blocks


C6 = Graph.cycle("a", "b", "c", "d", "e", "f")


def test_check(tmp_path, capsys):
    assert main(["check", _write_graph(tmp_path, "c6", C6)]) == 0
    assert capsys.readouterr().out.strip() == "in K_f"
    tri = Graph.cycle("x", "y", "z")
    assert main(["check", _write_graph(tmp_path, "tri", tri)]) == 1
    out = capsys.readouterr().out
    assert out.startswith("not in K_f")
    (witness,) = _printed_graphs(out)
    assert are_isomorphic(witness, tri)


def test_check_json(tmp_path, capsys):
    assert main(["check", "--json", _write_graph(tmp_path, "c4", Graph.cycle(*"abcd"))]) == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload["in_class"] is False and payload["size"] == 4 and payload["predimension"] == "4"


def test_unreadable_graph(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("v a\ne a\n")
    assert main(["check", str(bad)]) == 2
    assert "error" in capsys.readouterr().err
    assert main(["check", str(tmp_path / "missing.txt")]) == 2


def test_closure(tmp_path, capsys):
    path = _write_graph(tmp_path, "c6", Graph.cycle("v1", "v2", "v3", "v4", "v5", "v6"))
    assert main(["closure", path, "v1", "v3"]) == 0
    assert capsys.readouterr().out.splitlines() == ["closure: v1 v2 v3", "predimension: 4"]
    assert main(["closure", path, "v1,v4", "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == {"closure": ["v1", "v4"], "predimension": "4"}
    assert main(["closure", path, "nope"]) == 2


def test_amalgamate(tmp_path, capsys):
    b = _write_graph(tmp_path, "b", Graph.path("x", "y"))
    c = _write_graph(tmp_path, "c", Graph.path("x", "z"))
    assert main(["amalgamate", b, c, "--identify", "x:x"]) == 0
    (amb,) = _printed_graphs(capsys.readouterr().out)
    assert are_isomorphic(amb, Graph.path("a", "b", "c"))
    assert main(["amalgamate", b, c, "--identify", "x"]) == 2


def test_eventual_closures(tmp_path, capsys):
    path = _write_diagram(tmp_path, "ev", catalog.edge_and_vertex())
    assert main(["eventual-closures", path]) == 0
    out = capsys.readouterr().out
    assert out.startswith("2 eventual closure(s)")
    graphs = _printed_graphs(out)
    assert len(graphs) == 2
    assert main(["eventual-closures", path, "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] == 2
    for item, g in zip(payload["closures"], graphs):
        assert are_isomorphic(parse_graph(json.dumps(item["extension"])), g)


def test_eventual_closures_window(tmp_path, capsys):
    diag = free_amalgam(C6, Graph.empty("p"), {}, GoodFunction())
    path = _write_diagram(tmp_path, "big", diag)
    assert main(["eventual-closures", path]) == 3
    assert "precondition" in capsys.readouterr().err
    assert main(["eventual-closures", path, "--depth", "0"]) == 0
    assert capsys.readouterr().out.startswith("1 eventual closure(s)")


def test_itd_scan(capsys):
    assert main(["itd-scan", "4"]) == 0
    assert capsys.readouterr().out.startswith("1 proper ITD(s) with d12 <= 4")
    assert main(["itd-scan", "5", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["count"] == 3
    assert main(["itd-scan", "5", "--closure-check"]) == 0
    assert capsys.readouterr().out.rstrip().endswith("pass")
    assert main(["itd-scan", "6"]) == 3


def test_amalg_verify_and_growth(tmp_path, capsys):
    assert main(["amalg-verify"]) == 0
    assert capsys.readouterr().out.startswith("pass")
    assert main(["growth-check", "--range", "6..100"]) == 0
    assert capsys.readouterr().out.startswith("pass")
    cfg = tmp_path / "high.json"
    cfg.write_text(json.dumps({"alpha": "2", "breakpoints": [[1, "2"], [4, "5"], [6, "13/2"]],
                               "tail": {"kind": "log3"}}))
    assert main(["amalg-verify", "--config", str(cfg)]) == 1
    assert capsys.readouterr().out.startswith("fail")


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "broken.json"
    cfg.write_text(json.dumps({"alpha": "2", "breakpoints": [[1, "2"], [4, "1"]], "tail": {"kind": "log3"}}))
    assert main(["check", "--config", str(cfg), _write_graph(tmp_path, "c6", C6)]) == 2
    assert main(["check", "--config", str(tmp_path / "none.json"), _write_graph(tmp_path, "c6", C6)]) == 2


def test_derive_equations(capsys):
    assert main(["derive-equations", "--json"]) == 0
    assert len(json.loads(capsys.readouterr().out)["equations"]) == 7


def test_prove(tmp_path, capsys):
    out = tmp_path / "cert.json"
    assert main(["prove", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "final polynomial: -lambda^6" in text and "replay: verified" in text
    saved = json.loads(out.read_text())
    assert saved["replay_verified"] is True


def test_prove_stops_at_the_gate(tmp_path, capsys):
    cfg = tmp_path / "high.json"
    cfg.write_text(json.dumps({"alpha": "2", "breakpoints": [[1, "2"], [4, "5"], [6, "13/2"]],
                               "tail": {"kind": "log3"}}))
    out = tmp_path / "cert.json"
    code = main(["prove", "--config", str(cfg), "--out", str(out)])
    assert code == 3
    assert "free amalgamation" in capsys.readouterr().err
    assert not out.exists()


def test_bad_range(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["growth-check", "--range", "6-100"])
    assert exc.value.code == 2
