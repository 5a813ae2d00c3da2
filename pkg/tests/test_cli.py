import json

import pytest

from gcobord.cli import main


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def word_file(tmp_path, group, letters, name="w.json"):
    return write(tmp_path, name, {"group": group,
                                  "letters": [{"x": x, "y": y, "e": 1} for x, y in letters]})


@pytest.mark.parametrize("group,want,method", [("D8", "Z/2", "bar"), ("Z7", "trivial", "exterior"),
                                               ("S4", "Z/2", "bar"), ("A4", "Z/2", "bar")])
def test_multiplier(capsys, group, want, method):
    assert main(["multiplier", "--group", group]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == want and out[1] == f"method: {method}"


def test_multiplier_sylow(capsys):
    assert main(["multiplier", "--group", "A6"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[:2] == ["Z/6", "method: sylow"]
    assert "2-part: Z/2" in out and "3-part: Z/3" in out


def test_multiplier_errors(capsys):
    assert main(["multiplier", "--group", "Q8"]) == 1
    assert main(["multiplier", "--group", "S8"]) == 3
    assert main(["multiplier"]) == 1
    assert main(["multiplier", "--group", "D8", "--method", "exterior"]) == 2


def test_classify_outputs(tmp_path, capsys):
    f = word_file(tmp_path, "S4", [("(1,2)", "(3,4)")])
    assert main(["classify", "--word", f]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "1 (generator)" and out[1] == "method: symmetric"
    f = word_file(tmp_path, "D12", [], "e.json")
    assert main(["classify", "--word", f]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "0"


def test_classify_not_in_z(tmp_path, capsys):
    f = word_file(tmp_path, "D8", [("c", "a")])
    assert main(["classify", "--word", f]) == 2
    assert "c^2" in capsys.readouterr().err


def test_classify_trace_and_out(tmp_path, capsys):
    f = word_file(tmp_path, "D8", [("c", "a"), ("c", "a")])
    t, o = tmp_path / "t.json", tmp_path / "o.txt"
    assert main(["classify", "--word", f, "--trace", str(t), "--out", str(o)]) == 0
    data = json.loads(t.read_text())
    assert data["trace"]["steps"] and data["word"]["group"] == "D8"
    assert o.read_text().startswith("1 (generator)")
    capsys.readouterr()


def test_classify_method_override(tmp_path, capsys):
    f = word_file(tmp_path, "A5", [("(1,2)(3,4)", "(1,3)(2,4)")])
    assert main(["classify", "--word", f, "--method", "sylow"]) == 0
    out = capsys.readouterr().out
    assert "method: sylow" in out and "2-component: 1" in out
    assert main(["classify", "--word", f, "--method", "dihedral"]) == 2
    assert main(["classify", "--word", f, "--method", "bogus"]) == 1


def test_classify_parse_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["classify", "--word", str(bad)]) == 1
    assert main(["classify", "--word", str(tmp_path / "missing.json")]) == 1
    assert main(["classify"]) == 1
    f = word_file(tmp_path, "D8", [("q", "a")])
    assert main(["classify", "--word", f]) == 1


def test_surface_file(tmp_path, capsys):
    f = write(tmp_path, "s.json", {"group": "Z2xZ2", "handles": [{"y": "(0,1)", "x": "(1,0)"}]})
    assert main(["classify", "--word", f]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "1"


def test_certify(tmp_path, capsys):
    f = word_file(tmp_path, "D8", [("c", "a"), ("c", "a")])
    assert main(["certify", "--word", f]) == 0
    cert = json.loads(capsys.readouterr().out)
    assert cert["kind"] == "dihedral" and len(cert["pieces"]) == 1
    f = word_file(tmp_path, "S4", [("(1,2)", "(3,4)")], "u.json")
    assert main(["certify", "--word", f]) == 0
    assert json.loads(capsys.readouterr().out)["kind"] == "genus-one"
    f = word_file(tmp_path, "S4", [("(1,2)", "(1,3)"), ("(1,3)", "(1,2)")], "v.json")
    assert main(["certify", "--word", f]) == 2


def test_selftest_default_groups_quick(capsys):
    assert main(["selftest", "--group", "D8", "--iters", "5"]) == 0
    out = capsys.readouterr().out
    assert "rule invariance D8" in out and "checks passed (seed 1904)" in out


def test_selftest_iters_zero_warns(capsys):
    assert main(["selftest", "--group", "Z8", "--iters", "0"]) == 0
    assert "warning" in capsys.readouterr().err


def test_selftest_tampered_golden(tmp_path, capsys):
    f = write(tmp_path, "g.json", {"D8": "trivial", "S4": "Z/2"})
    assert main(["selftest", "--group", "Z8", "--iters", "0", "--word", f]) == 4
    captured = capsys.readouterr()
    assert "FAIL  golden D8" in captured.out
    assert "minimized reproducer" in captured.err


def test_selftest_bad_args(capsys):
    assert main(["selftest", "--seed", "-1"]) == 1
    assert main(["selftest", "--iters", "-3"]) == 1
    assert main(["selftest", "--group", "Q8"]) == 1


def test_selftest_deterministic(capsys):
    main(["selftest", "--group", "S4", "--iters", "10", "--seed", "7"])
    a = capsys.readouterr().out
    main(["selftest", "--group", "S4", "--iters", "10", "--seed", "7"])
    assert capsys.readouterr().out == a


def test_help(capsys):
    assert main(["--help"]) == 0
    assert "multiplier" in capsys.readouterr().out
