import json

import pytest

from mcmkit.cli import load_module, main, module_to_json


@pytest.fixture
def ring_file(tmp_path):
    p = tmp_path / "ring.json"
    p.write_text(json.dumps({
        "char": 7, "vars": ["x", "y"], "weights": [3, 2],
        "relations": ["x^2+y^3"],
    }))
    return str(p)


@pytest.fixture
def k_file(tmp_path, ring_file):
    p = tmp_path / "k.json"
    p.write_text(json.dumps({"ring": ring_file, "builtin": "k"}))
    return str(p)


def test_resolve_emits_betti_csv(tmp_path, k_file, capsys):
    out = tmp_path / "betti.csv"
    rc = main(["resolve", "--module", k_file, "-H", "4", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "# seed=0"
    assert lines[1] == "i,betti,gen_degrees"
    assert lines[2] == "0,1,0"
    assert lines[3].startswith("1,2,")


def test_quiver_dot_golden(tmp_path):
    out1 = tmp_path / "q1.dot"
    out2 = tmp_path / "q2.dot"
    assert main(["quiver", "--catalog", "ade:A2:dim1", "--out", str(out1)]) == 0
    assert main(["quiver", "--catalog", "ade:A2:dim1", "--out", str(out2)]) == 0
    d1, d2 = out1.read_text(), out2.read_text()
    assert d1 == d2  # byte-identical artifacts for identical jobs
    assert '"I1" -> "I1" [label="1"];' in d1
    assert '"A" [shape=doublecircle' in d1


def test_quiver_json_format(tmp_path):
    out = tmp_path / "q.json"
    assert main(["quiver", "--catalog", "ade:A1:dim2", "--format", "json",
                 "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["seed"] == 0
    assert data["modulus"] == 5
    arrows = {(a["from"], a["to"]): a["irr"] for a in data["arrows"]}
    assert arrows == {("A", "M1"): 2, ("M1", "A"): 2}


def test_exit_code_error_on_bad_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    rc = main(["resolve", "--module", str(bad)])
    assert rc == 1
    err = capsys.readouterr().err
    assert "line" in err  # parse diagnostics carry a position


def test_exit_code_error_on_unknown_catalog():
    assert main(["quiver", "--catalog", "ade:E8:dim1"]) == 1


def test_exit_code_error_on_incompatible_modulus():
    # 7 = 3 mod 4: no sqrt(-1), the A1 curve catalog must refuse it
    assert main(["quiver", "--catalog", "ade:A1:dim1", "--modulus", "7"]) == 1


def test_exit_code_inconclusive(tmp_path, k_file):
    # absurdly small degree bound: kernel capture cannot finish
    rc = main(["resolve", "--module", k_file, "-H", "6", "--degree-bound", "3"])
    assert rc == 2


def test_period_command(tmp_path):
    out = tmp_path / "p.json"
    assert main(["period", "--module", "ade:A2:dim1/I1", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["found"] and data["period"] <= 2


def test_syzygy_roundtrip(tmp_path):
    out = tmp_path / "s.json"
    assert main(["syzygy", "--module", "ade:A2:dim1/I1", "--n", "1",
                 "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    M = load_module(data["module"])
    assert M.num_gens == 2


def test_module_json_roundtrip():
    M = load_module("ade:A4:dim1/I2")
    M2 = load_module(module_to_json(M))
    from mcmkit.homs import is_isomorphic

    assert is_isomorphic(M, M2)


def test_invariants_command(tmp_path):
    out = tmp_path / "inv.json"
    assert main(["invariants", "--module", "ade:A2:dim1/I1", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["mu"] == 2 and data["e"] == 2


def test_mf_validate_command(tmp_path):
    mf = tmp_path / "mf.json"
    mf.write_text(json.dumps({
        "ring": {"char": 7, "vars": ["x", "y"], "weights": [3, 2]},
        "f": "x^2+y^3",
        "phi": [["x", "y"], ["y^2", "-x"]],
        "psi": [["x", "y"], ["y^2", "-x"]],
    }))
    out = tmp_path / "v.json"
    assert main(["mf-validate", "--mf", str(mf), "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["valid"] is True and data["reduced"] is True


def test_mf_extract_command(tmp_path):
    out = tmp_path / "mf.json"
    assert main(["mf-extract", "--module", "ade:A2:dim1/m", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert len(data["mf"]["phi"]) == 2


def test_support_command(tmp_path):
    ring = tmp_path / "r.json"
    ring.write_text(json.dumps({
        "char": 7, "vars": ["x", "y"], "relations": ["x^2", "y^2"]}))
    mod = tmp_path / "m.json"
    mod.write_text(json.dumps({
        "ring": str(ring), "gen_degs": [0], "rel_degs": [1],
        "presentation": [["x"]], "label": "A/(x)"}))
    out = tmp_path / "s.json"
    assert main(["support", "--module", str(mod), "-H", "10", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["cx"] == 1 and data["is_point"] is True


def test_verify_suite(tmp_path, capsys):
    rc = main(["verify", "--catalog", "ade:A2:dim1", "--suite", "symmetry"])
    assert rc == 0
    output = capsys.readouterr().out
    assert "pass  symmetry:link_involution[I1]" in output
    assert "FAIL" not in output


def test_classify_command(tmp_path):
    out = tmp_path / "c.json"
    assert main(["classify", "--catalog", "ade:A2:dim1", "--property", "periodic",
                 "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["all_constant"] is True


def test_catalogs_listing(capsys):
    assert main(["catalogs"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert "ade:A3:dim1" in data["catalogs"]
