import itertools
import random

from hxpath.bisim import bisimilar_stable, l_bisimilar
from hxpath.checks import expand
from hxpath.model import Model, random_model
from hxpath.syntax import Signature


def _walks(m, start, n):
    out = [((), ())]
    for _ in range(n):
        out = [(labels + (a,), states + (t,))
               for labels, states in out
               for a in sorted(m.rel)
               for t in m.states
               if (states[-1] if states else start, t) in m.rel[a]]
    return out


def _end(start, states):
    return states[-1] if states else start


def _answers(levels, ma, la, mb, lb, j, w1, w2, flip):
    def related(x, y, level):
        return ((y, x) if flip else (x, y)) in levels[level]

    labels1, h = w1
    labels2, k = w2
    n1, n2 = len(labels1), len(labels2)
    for g1 in _walks(mb, lb, n1):
        if g1[0] != labels1 or not all(related(h[i], g1[1][i], j - n1 + i + 1)
                                       for i in range(n1)):
            continue
        for g2 in _walks(mb, lb, n2):
            if g2[0] != labels2 or not all(related(k[i], g2[1][i], j - n2 + i + 1)
                                           for i in range(n2)):
                continue
            if all(ma.same_data(e, _end(la, h), _end(la, k))
                   == mb.same_data(e, _end(lb, g1[1]), _end(lb, g2[1])) for e in ma.eq):
                return True
    return False


def recheck(family, m, s, m2, s2, ell):
    """Clause-by-clause check of an ell-bisimulation family."""
    levels = family.levels
    assert (s, s2) in levels[ell]
    for i in m.nom:
        assert (m.nom[i], m2.nom[i]) in levels[ell]
    for j in range(ell + 1):
        for l, l2 in levels[j]:
            assert m.val[l] == m2.val[l2]
            for i in set(m.nom) | set(m2.nom):
                assert (m.nom.get(i) == l) == (m2.nom.get(i) == l2)
            for n1, n2 in itertools.product(range(j + 1), repeat=2):
                for w1 in _walks(m, l, n1):
                    for w2 in _walks(m, l, n2):
                        assert _answers(levels, m, l, m2, l2, j, w1, w2, False)
                for w1 in _walks(m2, l2, n1):
                    for w2 in _walks(m2, l2, n2):
                        assert _answers(levels, m2, l2, m, l, j, w1, w2, True)


def test_fig1_basic_modal_claim(fig1):
    plain = fig1.drop_nominals()
    ok1, fam = l_bisimilar(plain, "A1", plain, "A2", 1)
    assert ok1
    recheck(fam, plain, "A1", plain, "A2", 1)
    assert not l_bisimilar(plain, "A1", plain, "A2", 2)[0]


def test_self_bisimilar_at_every_depth(fig1):
    for ell in range(3):
        for s in ("A1", "D3"):
            ok, fam = l_bisimilar(fig1, s, fig1, s, ell)
            assert ok
    recheck(fam, fig1, "D3", fig1, "D3", 2)


def test_stable_examples(fig1):
    plain = fig1.drop_nominals()
    verdict, used = bisimilar_stable(plain, "A1", plain, "A2")
    assert not verdict and used <= 3
    sig = Signature({"p"}, (), (), ())
    one = Model(sig, ["x"], val={"x": ["p"]})
    two = Model(sig, ["y"], val={"y": ["p"]})
    assert bisimilar_stable(one, "x", two, "y") == (True, 0)
    m = random_model(Signature({"p"}, (), {"a"}, {"e"}), 4, seed=9)
    assert bisimilar_stable(m, m.states[0], m, m.states[0])[0]


def test_witness_and_monotone_failure_on_random_pairs():
    sig = Signature({"p"}, {"i"}, {"a", "b"}, {"e"})
    rng = random.Random(4)
    checked = 0
    for _ in range(80):
        m = random_model(sig, 3, density=0.35, rng=rng)
        m2, copies = expand(m, rng)
        s = rng.choice(m.states)
        s2 = rng.choice(copies[s])
        failed = False
        for ell in range(3):
            ok, fam = l_bisimilar(m, s, m2, s2, ell)
            if failed:
                assert not ok
            if ok:
                recheck(fam, m, s, m2, s2, ell)
                checked += 1
            else:
                failed = True
    assert checked >= 100
