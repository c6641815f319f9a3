"""Regenerate proofs/*.json, the HXP derived-theorem corpus.

Each proof is built with ProofBuilder from concrete instances
(propositions p, q; modalities a, b; nominals i, j, k; symbol e) and
checked before it is written.

    python3 tools/make_corpus.py [outdir]
"""

import sys
from pathlib import Path

from hxpath.proof import ProofBuilder, check_proof, get_system, save_proof
from hxpath.syntax import AtF, Eq, Implies, Neq, Nom, Not, Seq, At, conj, iff, parse_node, parse_path

P = parse_node


def test_dist():
    b = ProofBuilder()
    steps = [
        b.axiom("comp-neutral", "(<?(p) = e ?(q)> -> <?(p)/eps = e ?(q)>) & (<?(p)/eps = e ?(q)> -> <?(p) = e ?(q)>)"),
        b.axiom("*-test", "(<?(p)/eps = e ?(q)> -> p & <eps = e ?(q)>) & (p & <eps = e ?(q)> -> <?(p)/eps = e ?(q)>)"),
        b.axiom("*-comm", "(<eps = e ?(q)> -> <?(q) = e eps>) & (<?(q) = e eps> -> <eps = e ?(q)>)"),
        b.axiom("comp-neutral", "(<?(q) = e eps> -> <?(q)/eps = e eps>) & (<?(q)/eps = e eps> -> <?(q) = e eps>)"),
        b.axiom("*-test", "(<?(q)/eps = e eps> -> q & <eps = e eps>) & (q & <eps = e eps> -> <?(q)/eps = e eps>)"),
        b.axiom("equal", "<eps = e eps>"),
    ]
    b.chain("(<?(p) = e ?(q)> -> p & q) & (p & q -> <?(p) = e ?(q)>)", *steps)
    return b.proof


def test_bot():
    b = ProofBuilder()
    steps = [
        b.axiom("comp-neutral", "(<?(p) != e ?(q)> -> <?(p)/eps != e ?(q)>) & (<?(p)/eps != e ?(q)> -> <?(p) != e ?(q)>)"),
        b.axiom("*-test", "(<?(p)/eps != e ?(q)> -> p & <eps != e ?(q)>) & (p & <eps != e ?(q)> -> <?(p)/eps != e ?(q)>)"),
        b.axiom("*-comm", "(<eps != e ?(q)> -> <?(q) != e eps>) & (<?(q) != e eps> -> <eps != e ?(q)>)"),
        b.axiom("comp-neutral", "(<?(q) != e eps> -> <?(q)/eps != e eps>) & (<?(q)/eps != e eps> -> <?(q) != e eps>)"),
        b.axiom("*-test", "(<?(q)/eps != e eps> -> q & <eps != e eps>) & (q & <eps != e eps> -> <?(q)/eps != e eps>)"),
        b.axiom("distinct", "!<eps != e eps>"),
    ]
    b.chain("(<?(p) != e ?(q)> -> false) & (false -> <?(p) != e ?(q)>)", *steps)
    return b.proof


def at_swap():
    b = ProofBuilder()
    steps = [
        b.axiom("@*-dist", "<@'i/a = e @'i/@'j/b> -> @'i <a = e @'j/b>"),
        b.axiom("comp*-dist", "@'i <a = e @'j/b> -> <@'i/a = e @'i/@'j/b>"),
        b.axiom("*-comm", "(<@'i/a = e @'i/@'j/b> -> <@'i/@'j/b = e @'i/a>) & (<@'i/@'j/b = e @'i/a> -> <@'i/a = e @'i/@'j/b>)"),
        b.axiom("agree", "(<@'i/@'j/b = e @'i/a> -> <@'j/b = e @'i/a>) & (<@'j/b = e @'i/a> -> <@'i/@'j/b = e @'i/a>)"),
        b.axiom("*-comm", "(<@'j/b = e @'i/a> -> <@'i/a = e @'j/b>) & (<@'i/a = e @'j/b> -> <@'j/b = e @'i/a>)"),
        b.axiom("agree", "(<@'j/@'i/a = e @'j/b> -> <@'i/a = e @'j/b>) & (<@'i/a = e @'j/b> -> <@'j/@'i/a = e @'j/b>)"),
        b.axiom("@*-dist", "<@'j/@'i/a = e @'j/b> -> @'j <@'i/a = e b>"),
        b.axiom("comp*-dist", "@'j <@'i/a = e b> -> <@'j/@'i/a = e @'j/b>"),
    ]
    comm = b.axiom("*-comm", "(<@'i/a = e b> -> <b = e @'i/a>) & (<b = e @'i/a> -> <@'i/a = e b>)")
    fwd = b.chain("<@'i/a = e b> -> <b = e @'i/a>", comm)
    bwd = b.chain("<b = e @'i/a> -> <@'i/a = e b>", comm)
    steps += [b.at_lift(fwd, "j"), b.at_lift(bwd, "j")]
    b.chain("(@'i <a = e @'j/b> -> @'j <b = e @'i/a>) & (@'j <b = e @'i/a> -> @'i <a = e @'j/b>)", *steps)
    return b.proof


def at_intro_prime():
    b = ProofBuilder()
    intro = b.axiom("@-intro", "'i -> ((p -> @'i p) & (@'i p -> p))")
    b.chain("'i & p -> @'i p", intro)
    return b.proof


def _at_sym(b, i, j):
    """Append a derivation of ``@i j -> @j i``; returns its line."""
    ni, nj = Nom(i), Nom(j)
    intro = b.axiom("@-intro", Implies(nj, iff(ni, AtF(j, ni))))
    curried = b.chain(Implies(ni, Implies(nj, AtF(j, ni))), intro)
    lifted = b.at_lift(curried, i)
    refl = b.axiom("@-refl", AtF(i, ni))
    drop = b.drop_outer(At(i), j, ni)
    return b.chain(Implies(AtF(i, nj), AtF(j, ni)), lifted, refl, drop)


def at_sym():
    b = ProofBuilder()
    _at_sym(b, "i", "j")
    return b.proof


def k_at_inverse():
    b = ProofBuilder()
    left = b.taut("!(p -> q) -> p")
    right = b.taut("!(p -> q) -> !q")
    steps = [
        b.at_lift(left, "i"),
        b.at_lift(right, "i"),
        b.self_dual("i", P("p -> q")),
        b.self_dual("i", P("q")),
    ]
    b.chain("(@'i p -> @'i q) -> @'i (p -> q)", *steps)
    return b.proof


def nom():
    """``@i j & <@i/a = e b> -> <@j/a = e b>`` through a fresh nominal k."""
    b = ProofBuilder()
    psi = P("<a = e @'k/b>")
    steps = []
    for n in ("i", "j"):
        c = P("<@'%s/a = e b>" % n)
        d = P("<@'%s/a = e @'k/b>" % n)
        steps += [
            b.axiom("@-intro", Implies(Nom("k"), iff(c, AtF("k", c)))),
            b.axiom("@*-dist", "<@'k/@'%s/a = e @'k/b> -> @'k <@'%s/a = e b>" % (n, n)),
            b.axiom("comp*-dist", "@'k <@'%s/a = e b> -> <@'k/@'%s/a = e @'k/b>" % (n, n)),
            b.axiom("agree", iff(P("<@'k/@'%s/a = e @'k/b>" % n), d)),
            b.axiom("*-comm", iff(d, P("<@'k/b = e @'%s/a>" % n))),
            b.axiom("agree", iff(P("<@'%s/@'k/b = e @'%s/a>" % (n, n)), P("<@'k/b = e @'%s/a>" % n))),
            b.axiom("*-comm", iff(P("<@'%s/@'k/b = e @'%s/a>" % (n, n)),
                                  P("<@'%s/a = e @'%s/@'k/b>" % (n, n)))),
            b.axiom("@*-dist", Implies(P("<@'%s/a = e @'%s/@'k/b>" % (n, n)), AtF(n, psi))),
            b.axiom("comp*-dist", Implies(AtF(n, psi), P("<@'%s/a = e @'%s/@'k/b>" % (n, n)))),
        ]
    intro = b.axiom("@-intro", Implies(Nom("j"), iff(psi, AtF("j", psi))))
    curried = b.chain(Implies(Nom("j"), Implies(psi, AtF("j", psi))), intro)
    steps += [b.at_lift(curried, "i"), b.drop_outer(At("i"), "j", psi)]
    goal = P("@'i 'j & <@'i/a = e b> -> <@'j/a = e b>")
    under_k = b.chain(Implies(Nom("k"), goal), *steps)
    b.name_prime(under_k, "k")
    return b.proof


def bridge():
    b = ProofBuilder()
    intro = b.axiom("@-intro", "'i -> ((p -> @'i p) & (@'i p -> p))")
    local = b.chain("@'i p -> (!p -> !'i)", intro)
    boxed = b.box_lift(local, "a")
    dual = b.self_dual("i", P("p"))
    pushed = b.dia_mono(b.chain("!@'i p -> @'i !p", dual), "a")
    drop = b.drop_outer(parse_path("a"), "i", P("!p"))
    b.chain("<a>'i & @'i p -> <a>p", boxed, dual, pushed, drop)
    return b.proof


def name_prime():
    b = ProofBuilder()
    start = b.taut("'i -> (q -> q)")
    b.name_prime(start, "i")
    return b.proof


CORPUS = {
    "test-dist": test_dist,
    "test-bot": test_bot,
    "at-swap": at_swap,
    "at-intro-prime": at_intro_prime,
    "at-sym": at_sym,
    "k-at-inverse": k_at_inverse,
    "nom": nom,
    "bridge": bridge,
    "name-prime": name_prime,
}


def main(argv):
    out = Path(argv[1]) if len(argv) > 1 else Path(__file__).resolve().parent.parent / "proofs"
    out.mkdir(parents=True, exist_ok=True)
    system = get_system("HXP")
    failed = False
    for name, make in CORPUS.items():
        proof = make()
        result = check_proof(system, proof)
        status = "ok" if result else "line %d: %s" % (result.line, result.reason)
        print("%-16s %4d lines  %s" % (name, len(proof.lines), status))
        if result:
            save_proof(proof, out / (name + ".json"))
        else:
            failed = True
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
