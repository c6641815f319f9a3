import json
import subprocess
import sys

import pytest

from hxpath.cli import run

from conftest import FIG1, PROOFS, Q1, REPO


def _run(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_example(capsys):
    code, out, _ = _run(capsys, "eval", "--model", FIG1, "--at", "A1", "--formula",
                        "<@'a1/born/?(Value) = val @'a1/friends/born/?(Value)>")
    assert code == 0 and out.strip() == "true"


def test_eval_false_exits_one(capsys):
    code, out, _ = _run(capsys, "eval", "--model", FIG1, "--at", "A1", "--formula", "Date")
    assert code == 1 and out.strip() == "false"


def test_parse_error_exits_two(capsys):
    code, _, err = _run(capsys, "parse", "--kind", "node", "'i &")
    assert code == 2 and "position 4" in err


def test_prove_bridge(capsys):
    code, out, _ = _run(capsys, "prove", "--system", "HXP", PROOFS / "bridge.json")
    assert code == 0 and out.startswith("ok")


def test_prove_rejected_exits_one(tmp_path, capsys):
    data = json.loads((PROOFS / "bridge.json").read_text())
    data["lines"][-1]["refs"] = [1, 1]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, out, _ = _run(capsys, "prove", path)
    assert code == 1 and "rejected at line" in out


def test_malformed_files_name_path_and_position(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "states": [,]\n}')
    code, _, err = _run(capsys, "eval", "--model", path, "--at", "x", "--formula", "p")
    assert code == 2 and str(path) in err and "line 2 column" in err
    code, _, err = _run(capsys, "prove", path)
    assert code == 2 and str(path) in err and "line 2 column" in err


def test_formula_file(tmp_path, capsys):
    path = tmp_path / "q.txt"
    path.write_text(Q1 + "\n")
    code, out, _ = _run(capsys, "eval", "--model", FIG1, "--at", "A1", "--formula-file", path)
    assert code == 0
    path.write_text("<born")
    code, _, err = _run(capsys, "eval", "--model", FIG1, "--at", "A1", "--formula-file", path)
    assert code == 2 and str(path) in err and "position" in err


def test_undeclared_symbol_and_unknown_state(capsys):
    assert _run(capsys, "eval", "--model", FIG1, "--at", "A1", "--formula", "<zz> p")[0] == 2
    assert _run(capsys, "eval", "--model", FIG1, "--at", "Q", "--formula", "Person")[0] == 2
    assert _run(capsys, "nonsense")[0] == 2


def test_sat_and_valid(capsys):
    code, out, _ = _run(capsys, "sat", "--formula", "@'i <a> 'i", "--class", "tree",
                        "--bound", 3, "--json")
    assert code == 1 and json.loads(out) == {"verdict": "unsat-up-to", "bound": 3}
    code, out, _ = _run(capsys, "sat", "--formula", "@'i <a> 'i", "--bound", 1, "--json")
    assert code == 0 and json.loads(out)["size"] == 1
    assert _run(capsys, "valid", "--formula", "p")[0] == 1
    assert _run(capsys, "valid", "--formula", "p | !p", "--bound", 2)[0] == 0
    code, out, _ = _run(capsys, "sat", "--formula", "p", "--class", "bogus")
    assert code == 2


def test_bisim(capsys):
    assert _run(capsys, "bisim", "--model", FIG1, "--at", "A1", "--at2", "A1", "--depth", 2)[0] == 0
    assert _run(capsys, "bisim", "--model", FIG1, "--at", "A1", "--at2", "A2")[0] == 1


def test_translate_fc_label(capsys):
    code, out, _ = _run(capsys, "translate", "--formula", "p")
    assert code == 0 and "P_p(x)" in out
    code, out, _ = _run(capsys, "fc", "--system", "HXP+Pi1", "--json")
    assert code == 0 and "R_a_inv" in json.loads(out)["fc"]
    assert _run(capsys, "fc", "--system", "HXP+Pi1", "--model", FIG1)[0] == 0
    assert _run(capsys, "fc", "--system", "nope")[0] == 2
    code, out, _ = _run(capsys, "label", "--model", FIG1, "--formula", "<born> Value", "--json")
    rows = json.loads(out)
    assert rows[-1]["states"] == ["A1", "B1", "A2", "B2"]


def test_filtrate_and_treeify(tmp_path, capsys):
    model = {"signature": {"props": [], "noms": [], "mods": ["a"], "eqs": []},
             "states": ["c0", "c1", "c2", "c3"],
             "rel": {"a": [["c0", "c1"], ["c1", "c2"], ["c2", "c3"]]}, "eq_classes": {}}
    path = tmp_path / "chain.json"
    path.write_text(json.dumps(model))
    code, out, _ = _run(capsys, "filtrate", "--model", path, "--formula", "<a> true", "--json")
    data = json.loads(out)
    # the chain collapse breaks bullet 3 only
    assert code == 1 and data["states"] == 2
    assert [k for k, v in data["bullets"].items() if v != "pass"] == ["3"]
    # a-edges without matching a_inv edges
    assert _run(capsys, "fc", "--system", "HXP+Pi1", "--model", path)[0] == 1
    code, out, _ = _run(capsys, "treeify", "--model", path, "--at", "c1",
                        "--formula", "<a><a> true", "--json")
    data = json.loads(out)
    assert code == 0 and data["holds"]


def test_lin(capsys):
    code, out, _ = _run(capsys, "lin", 2, "--check", "--json")
    data = json.loads(out)
    assert code == 0 and data["size"] == 3


def test_fuzz_is_reproducible(capsys):
    first = _run(capsys, "fuzz", "--suite", "translate", "--trials", 30, "--seed", 4, "--json")
    second = _run(capsys, "fuzz", "--suite", "translate", "--trials", 30, "--seed", 4, "--json")
    assert first == second and first[0] == 0
    a = _run(capsys, "fuzz", "--suite", "soundness", "--trials", 60, "--jobs", 1, "--json")
    b = _run(capsys, "fuzz", "--suite", "soundness", "--trials", 60, "--jobs", 2, "--json")
    assert a == b


def test_console_script_entry():
    out = subprocess.run([sys.executable, "-m", "hxpath.cli", "parse", "<a> p"],
                         capture_output=True, text=True, cwd=REPO)
    assert out.returncode == 0 and out.stdout.strip() == "<a> p"


@pytest.mark.parametrize("suite", ["bisim", "tree"])
def test_fuzz_output_ignores_hash_seed(suite):
    outs = set()
    for hash_seed in ("1", "2"):
        env = {"PYTHONHASHSEED": hash_seed, "PATH": "", "PYTHONPATH": str(REPO / "src")}
        res = subprocess.run([sys.executable, "-m", "hxpath.cli", "fuzz", "--suite", suite,
                              "--trials", "15", "--json"], capture_output=True, text=True,
                             env=env, cwd=REPO)
        outs.add(res.stdout)
    assert len(outs) == 1
