import random

import pytest

from hxpath.evaluation import eval_node
from hxpath.model import Model, is_forest_minus, is_tree, random_tree, union_relation
from hxpath.syntax import Signature, Top, parse_node
from hxpath.treeops import (SelectionFunction, TreeShapeError, finite_tree_pipeline,
                            quotient_tree, restrict, root_join, tree_size_bound)

from conftest import Q1

A = Signature({"p"}, {"i"}, {"a"}, ())


def test_restrict_examples(fig1):
    assert restrict(fig1, 0, {"a1"}, "friends").states == ("A1",)
    u = union_relation(fig1, "u", ["friends", "born"])
    assert set(restrict(u, 1, {"a1"}, "u").states) == {"A1", "B1", "D1"}


def test_restrict_of_tree_is_forest():
    rng = random.Random(3)
    for _ in range(100):
        m = random_tree(A, 10, "a", rng=rng)
        n = rng.randint(0, 3)
        assert is_forest_minus(restrict(m, n, {"i"}, "a"), "a")


def test_restrict_rejects_bad_input(fig1):
    with pytest.raises(ValueError):
        restrict(fig1, 1, set(), "born")
    with pytest.raises(ValueError):
        restrict(fig1, -1, {"a1"}, "born")


def test_root_join_examples():
    two = Model(A, ["x", "y"])
    out, root = root_join(two, "a")
    assert len(out.states) == 3 and is_tree(out, "a")
    assert set(out.successors("a", root)) == {"x", "y"}
    chain = Model(A, ["x", "y"], {"a": [("x", "y")]})
    out, root = root_join(chain, "a")
    assert out.successors("a", root) == ["x"] and is_tree(out, "a")
    with pytest.raises(TreeShapeError):
        root_join(Model(A, ["x"], {"a": [("x", "x")]}), "a")


def test_root_join_preserves_old_states():
    rng = random.Random(6)
    from hxpath.randgen import random_node
    sig = Signature({"p"}, {"i"}, {"a"}, {"e"})
    for _ in range(100):
        m = random_tree(sig, 6, "a", rng=rng)
        phi = random_node(sig, depth=2, size=6, rng=rng)
        out, _ = root_join(m, "a")
        for s in m.states:
            assert eval_node(m, s, phi) == eval_node(out, s, phi)


def test_quotient_keeps_distinct_profiles():
    sig = Signature({"p", "q"}, (), {"a"}, ())
    m = Model(sig, ["r", "x", "y"], {"a": [("r", "x"), ("r", "y")]},
              val={"x": ["p"], "y": ["q"]})
    out, mapping = quotient_tree(m, parse_node("p | q"), "a")
    assert out == m and mapping == {"r": "r", "x": "x", "y": "y"}


def test_quotient_collapses_identical_leaves():
    sig = Signature({"p"}, (), {"a"}, ())
    leaves = ["l%d" % k for k in range(5)]
    m = Model(sig, ["r"] + leaves, {"a": [("r", l) for l in leaves]},
              val={l: ["p"] for l in leaves})
    out, mapping = quotient_tree(m, parse_node("<a> p"), "a")
    assert len(out.states) == 2
    assert {mapping[l] for l in leaves} == {"l0"}


def test_selection_function_checks_membership():
    sel = SelectionFunction()
    with pytest.raises(ValueError):
        sel[frozenset({"x"})] = "y"


def test_pipeline_on_named_state():
    m = Model(A, ["x", "y"], {"a": [("x", "y")]}, nom={"i": "y"})
    out, image = finite_tree_pipeline(m, "y", parse_node("'i"), "a")
    assert is_tree(out, "a")
    assert out.nom["i"] == image
    assert eval_node(out, image, parse_node("'i"))


def _directed_fig1(fig1):
    rel = dict(fig1.rel)
    rel["friends"] = frozenset({("A1", "B1"), ("A2", "B2")})
    return union_relation(fig1.replace(rel=rel), "u", ["friends", "born"])


def test_pipeline_on_fig1_query(fig1):
    m = _directed_fig1(fig1)
    phi = parse_node(Q1)
    assert eval_node(m, "A1", phi)
    out, image = finite_tree_pipeline(m, "A1", phi, "u")
    assert is_tree(out, "u")
    assert eval_node(out, image, phi)
    assert len(out.states) <= tree_size_bound(phi)


def test_pipeline_on_top():
    rng = random.Random(1)
    m = random_tree(A, 8, "a", rng=rng)
    out, image = finite_tree_pipeline(m, m.states[-1], Top(), "a")
    assert is_tree(out, "a") and eval_node(out, image, Top())
    assert len(out.states) <= len(m.states) + 1
