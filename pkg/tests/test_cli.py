import io
import json

import pytest

from toughham.cli import run
from toughham.graph import complete_graph
from toughham.graphio import ParseError, format_graph, parse_graph, parse_vertex_set


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, json.loads(out.getvalue()) if out.getvalue() else None


P4 = "4 3\n0 1\n1 2\n2 3\n"
C4 = "# square\n4 4\n0 1\n1 2\n2 3\n3 0\n"
K23 = "5 6\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n"


@pytest.mark.parametrize("text", ["", "4\n", "3 1\n0 3\n", "3 1\n1 1\n", "3 2\n0 1\n1 0\n",
                                  "3 2\n0 1\n", "x y\n"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_graph(text)


def test_format_round_trip():
    g = complete_graph(5)
    assert parse_graph(format_graph(g, "k5")) == g
    assert parse_vertex_set("# s\n3 1\n", 5) == [1, 3]


def test_free_check(tmp_path):
    code, doc = call("free-check", write(tmp_path, "p4.txt", P4))
    assert code == 1 and doc["witness"]["vertices"] == [0, 1, 2, 3]
    code, doc = call("free-check", write(tmp_path, "c4.txt", C4))
    assert code == 0 and doc["result"]["free"]
    assert call("free-check", write(tmp_path, "bad.txt", "4 four\n"))[0] == 2


def test_toughness(tmp_path):
    code, doc = call("toughness", write(tmp_path, "k4.txt", format_graph(complete_graph(4))))
    assert code == 0 and doc["result"]["value"] == "inf"
    code, doc = call("toughness", write(tmp_path, "k23.txt", K23))
    assert doc["result"]["value"] == "2/3" and doc["witness"]["cutset"] == [0, 1]
    s = write(tmp_path, "s.txt", "0 1\n")
    code, doc = call("toughness", str(tmp_path / "k23.txt"), "--wrt", s, "--t", "1")
    assert code == 1 and doc["result"]["tough_enough"] is False


def test_toughness_too_large(tmp_path):
    import random
    rng = random.Random(1)
    edges = [(u, v) for u in range(30) for v in range(u + 1, 30) if rng.random() < 0.5]
    text = f"30 {len(edges)}\n" + "".join(f"{u} {v}\n" for u, v in edges)
    code, doc = call("toughness", write(tmp_path, "big.txt", text))
    assert code == 3 and doc["result"]["status"] == "resource"


def test_scattering(tmp_path):
    code, doc = call("scattering", write(tmp_path, "k23.txt", K23))
    assert code == 0 and doc["result"]["value"] == 1


def test_gen_then_hamcycle_then_verify(tmp_path):
    graph = str(tmp_path / "kj.txt")
    code, doc = call("gen", "clique-join", "46", "1,1", "-o", graph)
    assert code == 0 and doc["result"]["toughness"] == "23"
    code, doc = call("hamcycle", graph, "--t", "23", "--verify")
    assert code == 0 and doc["result"]["length"] == 48
    cert = write(tmp_path, "cycle.json", json.dumps(doc))
    assert call("verify", graph, cert)[0] == 0
    cycle = [v for v in doc["result"]["cycle"] if v != 47]
    cycle.insert(cycle.index(46) + 1, 47)
    doc["result"]["cycle"] = cycle
    bad = write(tmp_path, "bad.json", json.dumps(doc))
    code, out = call("verify", graph, bad)
    assert code == 1 and out["result"]["bad_edge"] == [46, 47]
    assert "first bad edge 46-47" in out["result"]["problems"][0]


def test_hamcycle_on_p4_plus_k1(tmp_path):
    code, doc = call("hamcycle", write(tmp_path, "g.txt", "5 3\n0 1\n1 2\n2 3\n"))
    assert code == 1 and doc["witness"]["pattern"] == "P4+P1"


def test_hamcycle_violation_re_verifies(tmp_path):
    graph = str(tmp_path / "weak.txt")
    call("gen", "clique-join", "45", "1,1", "-o", graph)
    code, doc = call("hamcycle", graph, "--t", "23")
    assert code == 1 and doc["result"]["kind"] == "toughness"
    cert = write(tmp_path, "v.json", json.dumps(doc))
    assert call("verify", graph, cert)[0] == 0


def test_cograph_ham_modes(tmp_path):
    k4 = write(tmp_path, "k4.txt", format_graph(complete_graph(4)))
    assert call("cograph-ham", k4)[1]["result"]["path"] == [0, 1, 2, 3]
    assert len(call("cograph-ham", k4, "--cycle")[1]["result"]["cycle"]) == 4
    code, doc = call("cograph-ham", k4, "--connect", "0", "3")
    assert code == 0 and doc["result"]["path"][-1] == 3
    code, doc = call("cograph-ham", write(tmp_path, "k23.txt", K23), "--cycle")
    assert code == 1 and doc["result"]["status"] == "infeasible"


def test_rational_flags(tmp_path):
    graph = str(tmp_path / "k.txt")
    call("gen", "clique-join", "9", "1,1", "-o", graph)
    assert call("hamcycle", graph, "--t", "9/2", "--verify")[0] == 0
    with pytest.raises(SystemExit):
        run(["hamcycle", graph, "--t", "fast"])


def test_deterministic_output(tmp_path):
    graph = str(tmp_path / "k.txt")
    call("gen", "clique-join-cograph", "20", "8", "-o", graph, "--seed", "3")
    a = call("hamcycle", graph, "--t", "2")[1]
    b = call("hamcycle", graph, "--t", "2")[1]
    a.pop("timing"), b.pop("timing")
    assert a == b
