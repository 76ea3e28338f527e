import json

from phcover import cli
from phcover import construction as cons


def run(args):
    return cli.main(args)


def test_verify_nonsplit_gf2_not_applicable(capsys, tmp_path):
    out = str(tmp_path / "r.json")
    assert run(["verify", "nonsplit", "--field", "2", "--out", out]) == 0
    doc = json.load(open(out))
    assert doc["passed"]
    assert doc["results"][0]["status"] == "not-applicable"


def test_verify_nonsplit_gf4_certificate(tmp_path):
    out = str(tmp_path / "r.json")
    assert run(["verify", "nonsplit", "--field", "4", "--out", out]) == 0
    doc = json.load(open(out))
    names = {r["check"] for r in doc["results"]}
    assert names == {"nonsplit", "nonsplit-bruteforce"}
    linear = [r for r in doc["results"] if r["check"] == "nonsplit"][0]
    assert linear["status"] == "inconsistent" and linear["certificate"]


def test_verify_triangles_exhaustive_gf2(tmp_path):
    out = str(tmp_path / "r.json")
    assert run(["verify", "triangles", "--field", "2", "--mode", "exhaustive",
                "--out", out]) == 0
    doc = json.load(open(out))
    assert doc["results"][0]["samples"] == 3360


def test_verify_sampled_small(tmp_path):
    out = str(tmp_path / "r.json")
    assert run(["verify", "cocycle", "--field", "16", "--out", out]) == 0
    assert run(["verify", "cycles", "--field", "8", "--samples", "500",
                "--out", out]) == 0
    doc = json.load(open(out))
    assert doc["passed"]


def test_usage_errors():
    assert run(["verify", "triangles", "--field", "5"]) == 2
    assert run(["verify", "bogus-suite", "--field", "2"]) == 2
    assert run(["verify", "triangles", "--field", "2", "--samples", "0"]) == 2
    assert run(["verify", "quadrangles", "--field", "8", "--mode", "exhaustive"]) == 2
    assert run(["export", "cover", "--field", "4"]) == 2


def test_verification_failure_exits_one(monkeypatch, tmp_path):
    bad = {"check": "triangles", "field": 2, "mode": "exhaustive",
           "samples": 1, "violations": 1, "witnesses": [], "passed": False}
    monkeypatch.setattr(cons, "verify_triangles", lambda *a, **k: bad)
    out = str(tmp_path / "r.json")
    assert run(["verify", "triangles", "--field", "2", "--out", out]) == 1
    assert not json.load(open(out))["passed"]


def test_export_base_graph(tmp_path):
    out = str(tmp_path / "g.json")
    assert run(["export", "base-graph", "--field", "2", "--out", out]) == 0
    doc = json.load(open(out))
    assert doc["vertex_count"] == 120 and doc["edge_count"] == 1680
    out2 = str(tmp_path / "g2.json")
    assert run(["export", "base-graph", "--field", "2", "--out", out2]) == 0
    assert open(out).read() == open(out2).read()


def test_export_base_graph_edgelist(tmp_path):
    out = str(tmp_path / "g.txt")
    assert run(["export", "base-graph", "--field", "2", "--format", "edgelist",
                "--out", out]) == 0
    lines = open(out).read().splitlines()
    assert lines[0].startswith("#")
    assert len([ln for ln in lines if ln.startswith("e ")]) == 1680


def test_export_cover_and_guard(tmp_path):
    out = str(tmp_path / "cover.json")
    assert run(["export", "cover", "--field", "2", "--out", out]) == 0
    doc = json.load(open(out))
    assert doc["vertex_count"] == 7680 and doc["edge_count"] == 107520
    assert run(["export", "base-graph", "--field", "8"]) == 2


def test_verify_all_gf2_small(tmp_path):
    out = str(tmp_path / "all.json")
    assert run(["verify", "all", "--field", "2", "--samples", "2000",
                "--out", out]) == 0
    doc = json.load(open(out))
    assert doc["passed"]
    checks = {r["check"] for r in doc["results"]}
    assert {"reductive", "triangles", "quadrangles", "pentagons", "cycle-span",
            "equivariance", "u-invariance", "main-theorem", "nonsplit",
            "phi-table", "diameter"} <= checks
