import random

import pytest

from hxpath.evaluation import (consequence_on_model, eval_node, eval_path, label,
                               path_consequence_reduce, sat_states)
from hxpath.model import Model, UnassignedNominal, random_model
from hxpath.syntax import (AtF, Diamond, Mod, Nom, PathExpr, Signature, desugar, nominals_of,
                           parse_node, parse_path)

from conftest import FIG1_QUERIES


@pytest.mark.parametrize("query", FIG1_QUERIES)
def test_fig1_queries_hold_at_a1(fig1, query):
    assert eval_node(fig1, "A1", parse_node(query, fig1.sig))


def test_equal_is_valid(fig1):
    phi = parse_node("< eps = val eps >")
    assert all(eval_node(fig1, s, phi) for s in fig1.states)


def test_eval_path_examples(fig1):
    assert eval_path(fig1, "A1", "D1", parse_path("born"))
    assert eval_path(fig1, "A1", "A1", parse_path("eps"))
    assert not eval_path(fig1, "A1", "D2", parse_path("@'a2/born"))


def test_unassigned_nominal_is_named():
    sig = Signature((), {"i"}, (), ())
    m = Model(sig, ["x"])
    with pytest.raises(UnassignedNominal) as err:
        eval_node(m, "x", parse_node("'i"))
    assert err.value.nominal == "i"


def _check_tables(m, phi):
    tables = label(m, phi)
    for x in tables.order:
        for s in m.states:
            if isinstance(x, PathExpr):
                for t in m.states:
                    assert (x in tables.pe.get((s, t), ())) == eval_path(m, s, t, x)
            else:
                assert (x in tables.ne[s]) == eval_node(m, s, x)


def test_label_examples(fig1):
    sig = Signature({"p"}, (), {"a"}, {"e"})
    one = Model(sig, ["x"], val={"x": ["p"]})
    phi = parse_node("< ?(p) = e ?(p) >")
    assert phi in label(one, phi).ne["x"]
    edge = Model(sig, ["x", "y"], {"a": [("x", "y")]})
    psi = parse_node("< a = e a >")
    tables = label(edge, psi)
    marked = {k for k, v in tables.pe.items() if parse_path("a") in v}
    assert marked == {("x", "y")}
    for q in FIG1_QUERIES:
        _check_tables(fig1, desugar(parse_node(q), "val", fig1.sig))


def test_sat_states(fig1):
    assert sat_states(fig1, parse_node("true")) == set(fig1.states)
    assert sat_states(fig1, parse_node("'a1")) == {"A1"}
    assert sat_states(fig1, parse_node("false")) == set()


def test_sat_states_agree_with_labelling():
    sig = Signature({"p"}, {"i"}, {"a"}, {"e"})
    rng = random.Random(2)
    from hxpath.randgen import random_node
    for _ in range(50):
        m = random_model(sig, 4, rng=rng)
        phi = random_node(sig, depth=2, size=6, rng=rng)
        direct = {s for s in m.states if eval_node(m, s, phi)}
        assert sat_states(m, phi) == direct


def test_consequence_on_model(fig1):
    p = parse_node("Person")
    assert consequence_on_model(fig1, [p], p)
    assert consequence_on_model(fig1, [parse_node("false")], parse_node("Date"))
    assert consequence_on_model(fig1, [parse_node("'a1")], p)
    assert not consequence_on_model(fig1, [], p)


def test_path_consequence_reduce():
    a = parse_path("a")
    hyps, concl = path_consequence_reduce([a], a, 1)
    i, j = sorted(nominals_of(concl))
    assert hyps == [AtF(i, Diamond(Mod("a"), Nom(j)))] and concl == hyps[0]
    hyps, concl = path_consequence_reduce([], a, 1)
    assert hyps == [] and isinstance(concl, AtF)
    hyps, concl = path_consequence_reduce([a], a, 2)
    used = set().union(*(nominals_of(h) for h in hyps))
    assert not (nominals_of(concl) & used)
