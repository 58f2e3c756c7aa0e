import json
import subprocess
import sys
from pathlib import Path

import pytest

from ofm.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_filters_json(capsys):
    code, out, _ = run(capsys, "filters", DATA / "sierpinski.json")
    assert code == 0
    data = json.loads(out)
    assert data["count"] == 3
    assert data["filters"][0]["members"] == [["0", "1"]]


def test_filters_count_and_text(capsys):
    assert run(capsys, "filters", DATA / "point.json", "--count")[1] == "2\n"
    code, out, _ = run(capsys, "filters", DATA / "sierpinski.json", "--topology", "--format", "text")
    assert code == 0 and out.startswith("3 filters") and "4 opens" in out


def test_filters_admit_empty(capsys):
    data = json.loads(run(capsys, "filters", DATA / "sierpinski.json", "--admit-empty-filter")[1])
    assert data["count"] == 4 and data["empty_filter_admitted"]


def test_invalid_topology_exits_2(capsys):
    code, out, err = run(capsys, "filters", DATA / "invalid.json")
    assert code == 2
    data = json.loads(out)
    assert data["error"] == "TopologyError"
    assert "MissingFullOpen" in data["violations"]
    assert err.startswith("ofm:")


def test_non_t0_needs_flag(capsys, tmp_path):
    p = tmp_path / "indiscrete.json"
    p.write_text(json.dumps({"points": ["a", "b"], "opens": [[], ["a", "b"]]}))
    assert run(capsys, "filters", p)[0] == 2
    assert run(capsys, "filters", p, "--allow-non-t0")[0] == 0


def test_check_monad(capsys):
    code, out, _ = run(capsys, "check-monad", DATA / "point.json", DATA / "point-to-one.json")
    assert code == 0
    assert all(c["status"] == "pass" for c in json.loads(out)["checks"])


def test_check_monad_rejects_discontinuous_map(capsys):
    code, out, _ = run(capsys, "check-monad", DATA / "sierpinski.json", DATA / "sierpinski-swap.json")
    assert code == 2
    assert "not continuous" in json.loads(out)["message"]


def test_check_monad_rejects_wrong_domain(capsys):
    code, _, _ = run(capsys, "check-monad", DATA / "sierpinski.json", DATA / "point-to-one.json")
    assert code == 2


def test_phi3_ceiling_exits_2(capsys, monkeypatch):
    monkeypatch.setenv("OFM_MAX_PHI3", "50")
    code, out, _ = run(capsys, "check-monad", DATA / "disc3.json")
    assert code == 2
    data = json.loads(out)
    assert data["error"] == "FeasibilityExceeded" and data["bound"] == 50


def test_algebra_from_lattice(capsys):
    code, out, _ = run(capsys, "algebra", "from-lattice", DATA / "ch2.json")
    assert code == 0
    assert [e["point"] for e in json.loads(out)["r"]] == ["bot", "top", "top"]


def test_algebra_from_non_lattice(capsys):
    assert run(capsys, "algebra", "from-lattice", DATA / "antichain.json")[0] == 2


def test_algebra_verify(capsys, tmp_path):
    code, out, _ = run(capsys, "algebra", "verify", DATA / "sierpinski.json", DATA / "corrupted-map.json")
    assert code == 1
    checks = {c["claim"]: c for c in json.loads(out)["checks"]}
    assert checks["algebra: unit law r . eta = id"]["witness"]["x"] == "0"

    good = tmp_path / "good.json"
    good.write_text(json.dumps({"space": str(DATA / "sierpinski.json"), "r": [
        {"filter": [["0", "1"]], "point": "0"},
        {"filter": [["1"], ["0", "1"]], "point": "1"},
        {"filter": [[], ["1"], ["0", "1"]], "point": "1"},
    ]}))
    code, out, _ = run(capsys, "algebra", "verify", DATA / "sierpinski.json", good)
    assert code == 0


def test_algebra_search(capsys):
    code, out, _ = run(capsys, "algebra", "search", DATA / "disc2.json", "--format", "text")
    assert code == 0 and out == "0 algebras found (16 candidate maps)\n"
    data = json.loads(run(capsys, "algebra", "search", DATA / "sierpinski.json", "--jobs", "2")[1])
    assert data["count"] == 1


def test_algebra_roundtrip(capsys):
    assert run(capsys, "algebra", "roundtrip", DATA / "diamond.json")[0] == 0
    assert run(capsys, "algebra", "roundtrip", DATA / "antichain.json")[0] == 2


def test_catalog(capsys, tmp_path):
    code, out, _ = run(capsys, "catalog", "--kind", "poset", "--max-size", "2", "--up-to-iso")
    data = json.loads(out)
    assert code == 0 and data["counts"] == {"1": 1, "2": 2} and data["total"] == 3
    labelled = json.loads(run(capsys, "catalog", "--kind", "poset", "--max-size", "2")[1])
    assert labelled["counts"] == {"1": 1, "2": 3}
    assert data["self_check"]["status"] == "pass"
    code, out, _ = run(capsys, "catalog", "--kind", "space", "--max-size", "2", "--t0",
                       "--up-to-iso", "--out-dir", tmp_path / "cat")
    data = json.loads(out)
    assert data["total"] == 3
    assert sorted(p.name for p in (tmp_path / "cat").iterdir()) == data["files"]


def test_catalog_limits(capsys):
    assert run(capsys, "catalog", "--kind", "space", "--max-size", "9")[0] == 2
    assert run(capsys, "catalog", "--kind", "poset", "--max-size", "0")[0] == 2
    assert run(capsys, "catalog", "--kind", "space", "--max-size", "2", "--complete-lattice")[0] == 2


def test_export_dot(capsys):
    code, out, _ = run(capsys, "export-dot", DATA / "diamond.json", "--what", "hasse")
    assert code == 0 and out.count("->") == 4
    code, out, _ = run(capsys, "export-dot", DATA / "sierpinski.json", "--what", "filters")
    assert code == 0 and out.startswith('digraph "filters"')
    assert run(capsys, "export-dot", DATA / "ch2.json", "--what", "topology")[0] == 2


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "filters", DATA / "sierpinski.json", "--out", target)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["count"] == 3


def test_output_is_byte_identical(capsys):
    argv = ("algebra", "from-lattice", DATA / "diamond.json")
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ofm", "filters", str(DATA / "point.json"), "--count"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "2\n"


def test_missing_file(capsys):
    code, out, _ = run(capsys, "filters", DATA / "nope.json")
    assert code == 2 and json.loads(out)["error"] == "InputError"


def test_argparse_errors():
    with pytest.raises(SystemExit) as exc:
        main(["catalog", "--kind", "graph", "--max-size", "2"])
    assert exc.value.code == 2
