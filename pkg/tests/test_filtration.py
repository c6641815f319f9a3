import pytest

from hxpath.filtration import (FiltrationDataError, closure, filtration_check,
                               sigma_partition, smallest_filtration)
from hxpath.model import Model
from hxpath.syntax import Diamond, Mod, Not, Prop, Signature, Top, parse_node, seq

TOP_A = Diamond(Mod("a"), Top())


def test_closure_examples():
    p = Prop("p")
    assert set(closure([p])) == {p}
    assert set(closure([Not(p)])) == {Not(p), p}
    big = closure([parse_node("< a/b = e c >")])
    need = {Diamond(seq([Mod("a"), Mod("b")]), Top()), Diamond(Mod("c"), Top()),
            TOP_A, Diamond(Mod("b"), Top())}
    assert need <= set(big)
    assert big.is_closed()


def test_sigma_partition(fig1):
    assert sigma_partition(fig1, closure([])) == [fig1.states]
    sig = Signature({"p"}, (), (), ())
    m = Model(sig, ["x", "y", "z"], val={"x": ["p"], "z": ["p"]})
    assert sigma_partition(m, closure([Prop("p")])) == [("x", "z"), ("y",)]
    parts = sigma_partition(fig1, closure([parse_node("<born> true")]))
    assert {frozenset(c) for c in parts} == {frozenset({"A1", "B1", "A2", "B2"}),
                                            frozenset({"D1", "D2", "D3", "D4"})}


def sibling_model():
    sig = Signature((), (), {"a", "s"}, ())
    return Model(sig, ["w", "v", "u"],
                 {"a": [("w", "v"), ("w", "u")], "s": [("v", "u"), ("u", "v")]})


def chain_model(n=4):
    sig = Signature((), (), {"a"}, ())
    states = ["c%d" % k for k in range(n)]
    return Model(sig, states, {"a": list(zip(states, states[1:]))})


def test_sibling_collapse():
    m = sibling_model()
    f, mapping = smallest_filtration(m, closure([TOP_A]))
    assert mapping["v"] == mapping["u"]
    cls = mapping["v"]
    assert (cls, cls) in f.rel["s"]
    assert not any(x == y for x, y in m.rel["s"])


def test_chain_collapse():
    m = chain_model()
    f, mapping = smallest_filtration(m, closure([TOP_A]))
    head = {mapping["c0"], mapping["c1"], mapping["c2"]}
    assert len(head) == 1
    (cls,) = head
    assert (cls, cls) in f.rel["a"]
    assert len(f.states) == 2
    report = filtration_check(m, f, mapping, closure([TOP_A]))
    for bullet in (1, 2, 4, 5, 6):
        assert report.passed(bullet)


def test_identity_when_sigma_separates():
    sig = Signature({"p", "q"}, (), {"a"}, ())
    m = Model(sig, ["x", "y"], {"a": [("x", "y")]}, val={"x": ["p"], "y": ["q"]})
    f, mapping = smallest_filtration(m, closure([Prop("p"), Prop("q")]))
    assert mapping == {"x": "x", "y": "y"}
    assert f == m


def test_bullet_two_violation_is_flagged():
    m = chain_model(3)
    sigma = closure([TOP_A])
    f, mapping = smallest_filtration(m, sigma)
    broken = f.replace(rel={"a": frozenset()})
    assert not filtration_check(m, broken, mapping, sigma).passed(2)


def test_bullet_three_failure():
    sig = Signature((), (), {"a"}, ())
    m = Model(sig, ["m0", "n0", "m1", "u", "w"],
              {"a": [("m0", "n0"), ("m1", "u"), ("u", "w")]})
    sigma = closure([TOP_A])
    f, mapping = smallest_filtration(m, sigma)
    assert mapping["m0"] == mapping["m1"]
    assert mapping["u"] != mapping["n0"]
    assert not filtration_check(m, f, mapping, sigma).passed(3)


def test_data_clash_is_reported():
    sig = Signature({"p"}, (), (), {"e"})
    m = Model(sig, ["x", "y"])
    with pytest.raises(FiltrationDataError):
        smallest_filtration(m, closure([Prop("p")]))
