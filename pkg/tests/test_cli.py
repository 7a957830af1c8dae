import json


from toricmoduli.cli import main

TREE = {"d": 1, "n": 3, "components": [{"marked": {"1": ["1/1"]}}, {"marked": {"2": ["1/1"]}}]}
FAMILY = {"d": 1, "n": 3, "points": [[[[0, "1"]]], [[[1, "1"]]]]}
BRAID = {"m": 3, "forms": [["1", "-1", "0"], ["1", "0", "-1"], ["0", "1", "-1"]]}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_fan_build(capsys):
    code, out, _ = run(capsys, "fan", "build", "-d", "2", "-n", "3", "--json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["rays"]) == 6 and len(doc["max_cones"]) == 8
    code, out, _ = run(capsys, "fan", "build", "-d", "2", "-n", "3", "--variant", "plm-rays", "--json")
    assert {tuple(r) for r in json.loads(out)["rays"]} == {(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1)}
    code, _, err = run(capsys, "fan", "build", "-d", "0", "-n", "3")
    assert code == 2 and "error" in err


def test_fan_build_order_seed_gives_same_fan(capsys):
    _, a, _ = run(capsys, "fan", "build", "-d", "2", "-n", "5", "--json")
    _, b, _ = run(capsys, "fan", "build", "-d", "2", "-n", "5", "--order-seed", "7", "--json")
    assert a == b


def test_fan_verify(capsys):
    code, out, _ = run(capsys, "fan", "verify", "fibration", "--d-max", "2", "--n-max", "4", "--json")
    assert code == 0
    doc = json.loads(out)
    full = [r for r in doc["records"] if r["claim"] == "fibration d=2 n=4"][0]
    assert len(full["witnesses"]["fiber"]["rays"]) == 6  # hexagon
    code, out, _ = run(capsys, "fan", "verify", "rays", "--d-max", "1", "--n-max", "6", "--json")
    doc = json.loads(out)
    assert code == 0 and [r["witnesses"]["rays"] for r in doc["records"]] == [2, 6, 14, 30]
    code, _, err = run(capsys, "fan", "verify", "rays", "--d-max", "4", "--n-max", "5")
    assert code == 2 and "guard" in err


def test_fan_verify_is_deterministic(capsys):
    _, a, _ = run(capsys, "fan", "verify", "order", "--d-max", "2", "--n-max", "4", "--json")
    _, b, _ = run(capsys, "fan", "verify", "order", "--d-max", "2", "--n-max", "4", "--json")
    assert a == b


def test_tree_verbs(tmp_path, capsys):
    code, out, _ = run(capsys, "tree", "cycle", write(tmp_path, "t.json", TREE), "--json")
    assert code == 0
    cyc = json.loads(out)
    assert [c["J"] for c in cyc["components"]] == [[1], [2]] and cyc["class"] == [1, 1]
    code, out, _ = run(capsys, "tree", "reconstruct", write(tmp_path, "c.json", cyc), "--json")
    assert code == 0 and json.loads(out) == TREE
    fam = write(tmp_path, "f.json", FAMILY)
    code, out, _ = run(capsys, "tree", "limit", fam, "--json")
    assert code == 0 and json.loads(out) == TREE
    code, out, _ = run(capsys, "tree", "oracle", fam, "--json")
    assert code == 0 and json.loads(out)["pass"] is True


def test_tree_errors(tmp_path, capsys):
    bad = {"d": 1, "n": 3, "components": [{"J": [1], "points": [["1", "1"], ["1", "0"]]}]}
    code, _, err = run(capsys, "tree", "reconstruct", write(tmp_path, "bad.json", bad))
    assert code == 2 and "malformed" in err
    code, _, err = run(capsys, "tree", "cycle", write(tmp_path, "x.json", {"d": 1}))
    assert code == 2 and "$" in err
    code, _, err = run(capsys, "tree", "cycle", str(tmp_path / "missing.json"))
    assert code == 2
    (tmp_path / "junk.json").write_text("{not json")
    code, _, err = run(capsys, "tree", "limit", str(tmp_path / "junk.json"))
    assert code == 2 and "line 1" in err


def test_lct_verbs(tmp_path, capsys):
    code, out, _ = run(capsys, "lct", "eval", write(tmp_path, "b.json", BRAID))
    assert code == 0 and out.strip() == "2/3"
    code, out, _ = run(capsys, "lct", "tdn3", "-d", "2", "--json")
    assert json.loads(out)["min_ratio"] == "2/3"
    for method in ("flats", "closed-form"):
        code, out, _ = run(capsys, "lct", "tdn3", "-d", "3", "--method", method)
        assert out.strip() == "2/3"
    code, out, _ = run(capsys, "lct", "certificate", "-d", "3", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and doc["witnesses"] == ["2/3", "2/1"]
    code, _, _ = run(capsys, "lct", "tdn3", "-d", "1")
    assert code == 2


def test_report_subset(capsys):
    code, out, _ = run(capsys, "report", "all", "--only", "AC8,AC13")
    assert code == 0
    assert out.splitlines()[:2] == ["PASS AC8 projective bundle blow-ups", "PASS AC13 anticanonical"]
    code, _, _ = run(capsys, "report", "all", "--only", "AC99")
    assert code == 2


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["fan", "frobnicate"]) == 2
    assert main(["--help"]) == 0
