import random

import pytest

from hxpath.evaluation import eval_node
from hxpath.model import ModelClass, is_tree
from hxpath.proof import get_system, random_instance
from hxpath.sat import (BudgetExceeded, Countermodel, Sat, UnsatUpTo, ValidUpTo,
                        lin_formula, lin_prefix, only, sat_bounded, valid_bounded)
from hxpath.syntax import AtF, Diamond, Mod, Nom, Signature, nominals_of, parse_node, subformulas

CLASSES = (ModelClass.ALL, ModelClass.TREE, ModelClass.FOREST_MINUS)


@pytest.mark.parametrize("cls", CLASSES)
def test_contradictions_are_unsat(cls):
    assert sat_bounded(parse_node("'i & !'i"), 3, cls) == UnsatUpTo(3)
    assert sat_bounded(parse_node("< eps != e eps >"), 3, cls) == UnsatUpTo(3)


def test_self_loop_formula():
    phi = parse_node("@'i <a> 'i")
    out = sat_bounded(phi, 3, ModelClass.ALL)
    assert isinstance(out, Sat) and out.size == 1
    assert out.model.rel["a"] == {("s0", "s0")}
    assert sat_bounded(phi, 3, ModelClass.TREE) == UnsatUpTo(3)


def test_sat_models_are_certified():
    rng = random.Random(0)
    from hxpath.randgen import random_node
    sig = Signature({"p"}, {"i"}, {"a"}, {"e"})
    for _ in range(40):
        phi = random_node(sig, depth=2, size=5, rng=rng)
        for cls in CLASSES:
            out = sat_bounded(phi, 3, cls)
            if isinstance(out, Sat):
                assert eval_node(out.model, out.state, phi)
                if cls is ModelClass.TREE:
                    assert is_tree(out.model, "a")


def test_tree_class_evaluates_anywhere():
    phi = parse_node("'i & @'j <a> 'i")
    out = sat_bounded(phi, 2, ModelClass.TREE)
    assert isinstance(out, Sat) and out.size == 2
    assert out.state != out.model.states[0]


def test_valid_examples():
    assert valid_bounded(parse_node("true"), 3) == ValidUpTo(3)
    out = valid_bounded(parse_node("p"), 3)
    assert isinstance(out, Countermodel) and out.size == 1


def test_hxp_axiom_instances_have_no_small_countermodel():
    hxp = get_system("HXP")
    rng = random.Random("axioms")
    sig = Signature({"p", "q"}, {"i", "j"}, {"a"}, {"e"})
    for sc in hxp.schemes[:12]:
        phi = random_instance(sc, sig, rng)
        assert isinstance(valid_bounded(phi, 2), ValidUpTo), sc.name


def test_budget():
    phi = lin_formula(4)
    assert isinstance(sat_bounded(phi, 5, ModelClass.ALL, budget=1), BudgetExceeded)


def test_lin_examples():
    assert lin_formula(0) == only(0, 0)
    assert nominals_of(lin_formula(0)) == {"0"}
    assert AtF("1", Diamond(Mod("a"), Nom("0"))) in subformulas(lin_formula(1))
    out = sat_bounded(lin_formula(2), 3, ModelClass.TREE)
    assert isinstance(out, Sat) and out.size == 3
    assert sat_bounded(lin_formula(2), 2, ModelClass.TREE) == UnsatUpTo(2)
    assert isinstance(sat_bounded(lin_prefix(2), 3, ModelClass.TREE), Sat)


def test_lin_rejects_bad_input():
    with pytest.raises(ValueError):
        lin_formula(-1)
    with pytest.raises(ValueError):
        lin_formula(2, sig=Signature((), {"0", "1"}, {"a"}, ()))
    with pytest.raises(ValueError):
        sat_bounded(parse_node("p"), 0)
