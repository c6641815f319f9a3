import itertools
import random

from hxpath.fol import (EqT, ExistentialRule, FAnd, Forall, FTrue, PredP, RelR, emit_fo,
                        fo_eval, frame_condition, parse_fo, satisfies_fc, st_node,
                        st_path, st_prime_node, standard_assignment)
from hxpath.evaluation import eval_node
from hxpath.model import Model, random_model
from hxpath.proof import get_system
from hxpath.syntax import Mod, Nom, Prop, Signature, parse_node

from conftest import FIG1_QUERIES


def test_translation_clauses():
    assert st_prime_node(Prop("p"), "x") == PredP("p", "x")
    assert st_prime_node(Nom("i"), "x") == EqT("x", "x_i")
    assert st_path(Mod("a"), "x", "y") == RelR("a", "x", "y")


def test_fo_eval_basics(fig1):
    assert fo_eval(fig1, {"x": "A1"}, EqT("x", "x"))
    from hxpath.fol import equivalence_axioms
    assert fo_eval(fig1, {}, equivalence_axioms("val"))


def test_fig1_queries_translate(fig1):
    for q in FIG1_QUERIES:
        phi = parse_node(q)
        for s in fig1.states:
            g = standard_assignment(fig1, s)
            assert fo_eval(fig1, g, st_node(phi, "x")) == eval_node(fig1, s, phi)


def test_emit_parse_round_trip(fig1):
    for q in FIG1_QUERIES:
        f = st_node(parse_node(q), "x")
        assert parse_fo(emit_fo(f)) == f
    assert emit_fo(EqT("x", "x")) == "x = x"
    nested = Forall("x", FAnd(PredP("p", "x"), PredP("q", "x")))
    assert emit_fo(nested) == "forall x. (P_p(x) & P_q(x))"


def _inverse_oracle(m):
    a, b = m.rel["a"], m.rel["a_inv"]
    return all(((x, y) in a) == ((y, x) in b) for x in m.states for y in m.states)


def test_fc_pi1_is_inverse_on_small_models():
    fc = get_system("HXP+Pi1").frame_condition()
    sig = Signature((), {"i"}, {"a", "a_inv"}, ())
    rng = random.Random(8)
    seen = {True: 0, False: 0}
    for _ in range(400):
        m = random_model(sig, 5, density=0.3, rng=rng)
        if rng.random() < 0.5:
            rel = dict(m.rel)
            rel["a_inv"] = frozenset((y, x) for x, y in rel["a"])
            m = m.replace(rel=rel)
        expect = _inverse_oracle(m)
        seen[expect] += 1
        assert satisfies_fc(m, fc) == expect
    assert min(seen.values()) > 50


def test_fc_of_reflexivity_rule():
    rule = ExistentialRule("rho1", parse_node("@'i <a> 'i"), ("i",), ())
    fc = frame_condition((), [rule])
    sig = Signature((), (), {"a"}, ())
    states = ["x", "y"]
    pairs = [(s, t) for s in states for t in states]
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        rel = [p for p, b in zip(pairs, bits) if b]
        m = Model(sig, states, {"a": rel})
        assert satisfies_fc(m, fc) == all((s, s) in rel for s in states)


def test_fc_of_nothing_is_true(fig1):
    assert frame_condition((), ()) == FTrue()
    assert satisfies_fc(fig1, FTrue())


def test_irreflexivity_axiom():
    fc = frame_condition([parse_node("@'i !<a>'i")])
    sig = Signature((), (), {"a"}, ())
    assert not satisfies_fc(Model(sig, ["x"], {"a": [("x", "x")]}), fc)
    assert satisfies_fc(Model(sig, ["x", "y"], {"a": [("x", "y")]}), fc)
