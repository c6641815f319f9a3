import json
import random

import pytest

from hxpath.model import (ConcreteModel, Model, ModelFileError, abstract_of, concretize,
                          is_forest_minus, is_tree, load_model, random_model, union_relation,
                          validate)
from hxpath.syntax import Signature

from conftest import REPO

SIG = Signature({"p"}, {"i"}, {"a", "b"}, {"e"})
A = Signature((), (), {"a"}, ())


def test_fig1_is_well_formed(fig1):
    assert validate(fig1) == []
    assert fig1.states == ("A1", "B1", "A2", "B2", "D1", "D2", "D3", "D4")
    assert {frozenset(c) for c in fig1.partition("val")} >= {
        frozenset({"A1", "A2"}), frozenset({"B1", "B2"}), frozenset({"D1", "D2"})}


def test_validate_reports_single_problems():
    bad_rel = Model(A, ["x"], {"a": [("x", "y")]})
    assert len(validate(bad_rel)) == 1
    sig = Signature((), (), (), {"e"})
    bad_eq = Model(sig, ["x", "y"], eq={"e": [["x"], ["x", "y"]]})
    assert len(validate(bad_eq)) == 1


def test_abstract_of_fig1_concrete():
    c = load_model(REPO / "src" / "hxpath" / "data" / "fig1_concrete.json", abstract=False)
    assert isinstance(c, ConcreteModel)
    m = abstract_of(c)
    got = {frozenset(x) for x in m.partition("val")}
    assert got == {frozenset({"A1", "A2"}), frozenset({"B1", "B2"}), frozenset({"D1", "D2"}),
                   frozenset({"D3"}), frozenset({"D4"})}


def test_abstract_of_small_cases():
    sig = Signature((), (), (), {"e"})
    same = ConcreteModel(sig, ["x", "y"], data={("e", "x"): "1", ("e", "y"): "1"})
    assert len(abstract_of(same).partition("e")) == 1
    diff = ConcreteModel(sig, ["x", "y"], data={("e", "x"): "1", ("e", "y"): "2"})
    assert len(abstract_of(diff).partition("e")) == 2


def test_concretize_round_trip(fig1):
    back = abstract_of(concretize(fig1))
    assert back.partition("val") == fig1.partition("val")
    sig = Signature((), (), (), {"e"})
    two = Model(sig, ["x", "y"], eq={"e": [["x"], ["y"]]})
    c = concretize(two)
    assert c.value("e", "x") != c.value("e", "y")


def _chain(n):
    s = ["s%d" % k for k in range(n)]
    return Model(A, s, {"a": list(zip(s, s[1:]))})


def test_is_tree_examples():
    assert is_tree(_chain(3), "a")
    assert not is_tree(Model(A, ["x"], {"a": [("x", "x")]}), "a")
    assert not is_tree(Model(A, ["x", "y"]), "a")


def test_is_forest_minus_examples():
    assert is_forest_minus(_chain(4), "a")
    join = Model(A, ["x", "y", "z"], {"a": [("x", "z"), ("y", "z")]})
    assert not is_forest_minus(join, "a")
    loop = Model(A, ["x", "y"], {"a": [("x", "y"), ("y", "x")]})
    assert not is_forest_minus(loop, "a")


def test_union_relation():
    sig = Signature((), (), {"a", "b"}, ())
    m = Model(sig, ["x", "y"], {"a": [("x", "x")], "b": [("y", "y")]})
    u = union_relation(m, "u", ["a", "b"])
    assert len(u.rel["u"]) == 2
    assert union_relation(m, "u", []).rel["u"] == frozenset()
    assert union_relation(u, "u", ["a", "b"]) == u


def test_random_model_properties():
    assert random_model(SIG, 5, seed=3) == random_model(SIG, 5, seed=3)
    assert len(random_model(SIG, 1, seed=1).states) == 1
    rng = random.Random(0)
    for _ in range(1000):
        assert validate(random_model(SIG, 5, rng=rng)) == []


def test_json_round_trip(tmp_path, fig1):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(fig1.to_json()))
    assert load_model(path) == fig1


def test_malformed_file_reports_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"signature": {,}')
    with pytest.raises(ModelFileError) as err:
        load_model(path)
    assert str(path) in str(err.value) and "line 1 column" in str(err.value)
