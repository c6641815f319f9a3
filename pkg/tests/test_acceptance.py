"""Acceptance criteria 1-9, one test each.

Every test prints a ``criterion N: PASS|FAIL`` line; the lines are also
repeated in the terminal summary (see conftest.py).
"""

import json
import time

import pytest

from hxpath import checks
from hxpath.bisim import l_bisimilar
from hxpath.evaluation import eval_node
from hxpath.filtration import closure, smallest_filtration
from hxpath.model import ModelClass
from hxpath.proof import check_proof, get_system, load_proof, proof_from_json
from hxpath.sat import Sat, UnsatUpTo, lin_formula, lin_prefix, sat_bounded
from hxpath.syntax import Diamond, Mod, Top, parse_node

from conftest import FIG1_QUERIES, PROOFS, proof_json
from test_filtration import chain_model, sibling_model

RESULTS = {}

THEOREMS = ("test-dist", "test-bot", "at-swap", "at-intro-prime", "at-sym",
            "k-at-inverse", "nom", "bridge")


def verdict(n, ok, detail):
    line = "criterion %d: %s  %s" % (n, "PASS" if ok else "FAIL", detail)
    RESULTS[n] = line
    print(line)
    assert ok, line


def test_criterion_1_figure_one(fig1):
    values = [eval_node(fig1, "A1", parse_node(q, fig1.sig)) for q in FIG1_QUERIES]
    plain = fig1.drop_nominals()
    one = l_bisimilar(plain, "A1", plain, "A2", 1)[0]
    two = l_bisimilar(plain, "A1", plain, "A2", 2)[0]
    ok = values == [True, True, True] and one and not two
    verdict(1, ok, "queries=%s 1-bisimilar=%s 2-bisimilar=%s" % (values, one, two))


def test_criterion_2_label_vs_eval():
    start = time.perf_counter()
    rep = checks.label_agreement(trials=500, seed=0, max_states=6, depth=3)
    took = time.perf_counter() - start
    verdict(2, rep.ok and took <= 60,
            "trials=%d checks=%d disagreements=%d %.1fs"
            % (rep.trials, rep.notes["checks"], len(rep.violations), took))


def test_criterion_3_standard_translation():
    rep = checks.translation_agreement(trials=500, seed=0)
    verdict(3, rep.ok, "trials=%d disagreements=%d" % (rep.trials, len(rep.violations)))


def test_criterion_4_soundness():
    rep = checks.soundness_suite(instances=200, models=20, seed=0, jobs=4)
    detail = " ".join("%s:%d/%d" % (k, v["counterexamples"], v["models"])
                      for k, v in rep.notes["systems"].items())
    verdict(4, rep.ok, "counterexamples/models %s mutation_found_at=%s"
            % (detail, rep.notes["mutation_found_at_trial"]))


def _swapped(name):
    data = proof_json(name)
    lines = data["lines"]
    k = max(n for n, line in enumerate(lines) if line["rule"] == "mp")
    first, second = lines[k]["refs"]
    lines[k]["refs"] = [first, next((r for r in range(k, 0, -1) if r not in (first, second)),
                                    first)]
    return proof_from_json(data), k + 1


def test_criterion_5_proof_corpus():
    hxp = get_system("HXP")
    accepted = {n: bool(check_proof(hxp, load_proof(PROOFS / (n + ".json"))))
                for n in THEOREMS + ("name-prime",)}
    swaps = []
    for n in THEOREMS:
        proof, line = _swapped(n)
        res = check_proof(hxp, proof)
        swaps.append(not res and res.line == line and res.reason.startswith("mp:"))
    fresh_text = json.dumps(proof_json("name-prime")).replace("q", "'i")
    fresh = check_proof(hxp, proof_from_json(json.loads(fresh_text)))
    fresh_ok = not fresh and "side condition violated" in fresh.reason
    ok = all(accepted.values()) and all(swaps) and fresh_ok
    verdict(5, ok, "accepted=%d/%d swapped-ref rejected=%d/%d freshness rejected=%s"
            % (sum(accepted.values()), len(accepted), sum(swaps), len(swaps), fresh_ok))


def test_criterion_6_filtration():
    top_a = Diamond(Mod("a"), Top())
    f, mp = smallest_filtration(sibling_model(), closure([top_a]))
    sibling = mp["v"] == mp["u"] and (mp["v"], mp["v"]) in f.rel["s"]
    f, mp = smallest_filtration(chain_model(), closure([top_a]))
    head = mp["c0"]
    chain = (mp["c1"] == mp["c2"] == head and (head, head) in f.rel["a"]
             and len(f.states) == 2)
    rep = checks.filtration_suite(passing=200, seed=0, inverse_models=100)
    ok = sibling and chain and rep.ok
    verdict(6, ok, "sibling=%s chain=%s certified=%d inverse_models=%d violations=%d"
            % (sibling, chain, rep.notes["certified"], rep.notes["inverse_models"],
               len(rep.violations)))


def test_criterion_7_tree_pipeline():
    rep = checks.tree_suite(trials=100, seed=0, max_states=12, depth=2)
    kinds = {}
    for v in rep.violations:
        kinds[v[0]] = kinds.get(v[0], 0) + 1
    detail = "instances=%d restrict_checks=%d violations=%s" % (
        rep.trials, rep.notes["restrict_checks"], kinds or 0)
    if rep.violations:
        detail += " first=%s" % rep.violations[0][1]
    verdict(7, rep.ok and rep.trials >= 100, detail)


def test_criterion_8_non_compactness():
    start = time.perf_counter()
    sizes = []
    for n in range(6):
        for phi in (lin_formula(n), lin_prefix(n)):
            out = sat_bounded(phi, n + 1, ModelClass.TREE)
            sizes.append(out.size if isinstance(out, Sat) else None)
    lin_ok = sizes == [n + 1 for n in range(6) for _ in range(2)]
    loop = parse_node("@'i <a> 'i")
    loop_all = sat_bounded(loop, 1, ModelClass.ALL)
    loop_ok = (isinstance(loop_all, Sat) and loop_all.size == 1
               and sat_bounded(loop, 4, ModelClass.TREE) == UnsatUpTo(4))
    distinct = parse_node("< eps != e eps >")
    distinct_ok = all(sat_bounded(distinct, 4, c) == UnsatUpTo(4) for c in ModelClass)
    took = time.perf_counter() - start
    verdict(8, lin_ok and loop_ok and distinct_ok and took <= 300,
            "lin sizes ok=%s loop ok=%s distinct ok=%s %.1fs" % (lin_ok, loop_ok, distinct_ok, took))


def test_criterion_9_bisimulation_invariance():
    rep = checks.bisim_suite(pairs=100, formulas=200, seed=0, max_depth=2)
    detail = "pairs=%d formulas=%d by_depth=%s violations=%d" % (
        rep.notes["pairs"], rep.trials, rep.notes["by_depth"], len(rep.violations))
    if rep.violations:
        detail += " first=%s" % rep.violations[0][0]
    verdict(9, rep.ok and rep.notes["pairs"] >= 100, detail)
