"""Command-line entry point: ``hxpath <command> [options]``.

Exit codes: 0 for success or a true verdict, 1 for a false verdict
(formula false, proof rejected, unsatisfiable, violations found), 2 for
usage and input errors, 3 when a search budget ran out.
"""

import argparse
import json
import sys

from . import checks
from .bisim import SignatureMismatch, bisimilar_stable, l_bisimilar
from .evaluation import eval_node, label, sat_states
from .filtration import FiltrationDataError, closure, filtration_check, smallest_filtration
from .fol import emit_fo, satisfies_fc, st_node, st_path
from .model import ModelClass, ModelFileError, UnassignedNominal, load_model, union_relation
from .proof import ProofFileError, check_proof, get_system, load_proof
from .sat import (BudgetExceeded, Sat, UnsatUpTo, lin_formula, lin_prefix, sat_bounded,
                  valid_bounded)
from .syntax import (PathExpr, SyntaxErrorAt, UndeclaredSymbol, desugar, expr_size,
                     modal_depth, parse, render)
from .treeops import TreeShapeError, finite_tree_pipeline, tree_size_bound

TRUE, FALSE, INPUT_ERROR, BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


# -- input helpers ---------------------------------------------------------------------

def _model(path, flag="--model"):
    if not path:
        raise InputError("%s is required" % flag)
    try:
        return load_model(path)
    except OSError as exc:
        raise InputError("%s: %s" % (path, exc.strerror))
    except ModelFileError as exc:
        raise InputError(str(exc))


def _formula_text(args):
    if getattr(args, "formula_file", None):
        try:
            with open(args.formula_file, encoding="utf-8") as fh:
                return fh.read().strip(), args.formula_file
        except OSError as exc:
            raise InputError("%s: %s" % (args.formula_file, exc.strerror))
    if getattr(args, "formula", None) is None:
        raise InputError("--formula or --formula-file is required")
    return args.formula, "--formula"


def _parse(text, where, kind="node", sig=None):
    try:
        return parse(text, kind, sig)
    except SyntaxErrorAt as exc:
        raise InputError("%s: %s" % (where, exc))
    except UndeclaredSymbol as exc:
        raise InputError("%s: %s" % (where, exc))


def _formula(args, sig=None):
    text, where = _formula_text(args)
    return _parse(text, where, "node", sig)


def _state(m, state, flag="--at"):
    if state is None:
        raise InputError("%s is required" % flag)
    if state not in m.states:
        raise InputError("%s: unknown state %r" % (flag, state))
    return state


def _emit(args, human, data=None):
    if args.json:
        print(json.dumps(data if data is not None else human, sort_keys=True, indent=2))
    else:
        print(human)


def _model_class(text):
    try:
        return ModelClass.parse(text)
    except ValueError as exc:
        raise InputError(str(exc))


# -- commands ------------------------------------------------------------------------

def cmd_parse(args):
    text = args.text if args.text is not None else _formula_text(args)[0]
    x = _parse(text, "input", args.kind)
    out = render(x)
    _emit(args, out, {"kind": args.kind, "rendered": out,
                      "modal_depth": modal_depth(x), "size": expr_size(x)})
    return TRUE


def cmd_eval(args):
    m = _model(args.model)
    phi = _formula(args, m.sig)
    if args.at is None:
        states = [s for s in m.states if s in sat_states(m, phi)]
        _emit(args, " ".join(states), {"states": states})
        return TRUE
    verdict = eval_node(m, _state(m, args.at), phi)
    _emit(args, "true" if verdict else "false", {"state": args.at, "value": verdict})
    return TRUE if verdict else FALSE


def cmd_label(args):
    m = _model(args.model)
    phi = _formula(args, m.sig)
    e0 = args.eq or min(m.sig.eqs, default="e")
    phi = desugar(phi, e0, m.sig)
    tables = label(m, phi)
    rows = []
    for x in tables.order:
        if isinstance(x, PathExpr):
            pairs = [[s, t] for s in m.states for t in m.states if x in tables.pe.get((s, t), ())]
            rows.append({"expr": render(x), "kind": "path", "pairs": pairs})
        else:
            states = [s for s in m.states if x in tables.ne[s]]
            rows.append({"expr": render(x), "kind": "node", "states": states})
    if args.json:
        _emit(args, None, rows)
    else:
        for r in rows:
            cells = r.get("states")
            if cells is None:
                cells = ["(%s,%s)" % tuple(p) for p in r["pairs"]]
            print("%s: %s" % (r["expr"], " ".join(cells) or "-"))
    return TRUE


def _search(args, valid):
    phi = _formula(args)
    cls = _model_class(args.cls)
    if args.bound < 1:
        raise InputError("--bound must be at least 1")
    run = valid_bounded if valid else sat_bounded
    out = run(phi, args.bound, cls, budget=args.budget)
    if isinstance(out, Sat):
        word = "countermodel" if valid else "sat"
        _emit(args, "%s (%d states) at %s\n%s" % (word, out.size, out.state,
                                                   json.dumps(out.model.to_json(), sort_keys=True)),
              {"verdict": word, "size": out.size, "state": out.state,
               "model": out.model.to_json()})
        return FALSE if valid else TRUE
    if isinstance(out, UnsatUpTo):
        word = "valid-up-to" if valid else "unsat-up-to"
        _emit(args, "%s %d" % (word, out.bound), {"verdict": word, "bound": out.bound})
        return TRUE if valid else FALSE
    assert isinstance(out, BudgetExceeded)
    _emit(args, "budget-exceeded after size %d" % out.bound,
          {"verdict": "budget-exceeded", "bound": out.bound, "budget": out.budget})
    return BUDGET


def cmd_sat(args):
    return _search(args, valid=False)


def cmd_valid(args):
    return _search(args, valid=True)


def cmd_bisim(args):
    m = _model(args.model)
    m2 = _model(args.model2, "--model2")
    s = _state(m, args.at)
    s2 = _state(m2, args.at2, "--at2")
    try:
        if args.depth is None:
            verdict, used = bisimilar_stable(m, s, m2, s2)
            data = {"bisimilar": verdict, "depth_used": used, "approximation": True}
            human = "%s (stabilised at depth %d, approximation)" % (
                "true" if verdict else "false", used)
        else:
            verdict, _ = l_bisimilar(m, s, m2, s2, args.depth)
            data = {"bisimilar": verdict, "depth": args.depth}
            human = "true" if verdict else "false"
    except SignatureMismatch as exc:
        raise InputError(str(exc))
    _emit(args, human, data)
    return TRUE if verdict else FALSE


def cmd_translate(args):
    text, where = _formula_text(args)
    x = _parse(text, where, args.kind)
    fo = st_path(x, "x", "y") if args.kind == "path" else st_node(x, "x")
    out = emit_fo(fo)
    _emit(args, out, {"fo": out})
    return TRUE


def _system(name):
    try:
        return get_system(name)
    except KeyError as exc:
        raise InputError(exc.args[0])


def cmd_fc(args):
    sys_ = _system(args.system)
    fc = sys_.frame_condition()
    if not args.model:
        out = emit_fo(fc)
        _emit(args, out, {"system": sys_.name, "fc": out})
        return TRUE
    m = _model(args.model)
    verdict = satisfies_fc(m, fc)
    _emit(args, "true" if verdict else "false", {"system": sys_.name, "satisfies": verdict})
    return TRUE if verdict else FALSE


def cmd_filtrate(args):
    m = _model(args.model)
    seeds = [_parse(t, "--formula", "node", m.sig) for t in args.formula or ()]
    if args.formula_file:
        text, where = _formula_text(args)
        seeds.append(_parse(text, where, "node", m.sig))
    if not seeds:
        raise InputError("--formula or --formula-file is required")
    sigma = closure(seeds)
    try:
        f, mapping = smallest_filtration(m, sigma)
    except FiltrationDataError as exc:
        _emit(args, "no filtration: %s" % exc, {"error": str(exc)})
        return FALSE
    report = filtration_check(m, f, mapping, sigma)
    data = {"closure_size": len(sigma), "states": len(f.states), "mapping": mapping,
            "model": f.to_json(), "bullets": {str(k): v for k, v in report.summary().items()},
            "certified": report.certified}
    human = "%d states from %d (|closure| = %d), %s\n%s" % (
        len(f.states), len(m.states), len(sigma),
        "certified" if report.certified else "not certified",
        "\n".join("  bullet %d: %s" % kv for kv in sorted(report.summary().items())))
    _emit(args, human, data)
    return TRUE if report.certified else FALSE


def cmd_treeify(args):
    m = _model(args.model)
    phi = _formula(args, m.sig)
    s = _state(m, args.at)
    r = args.relation
    if r is None:
        if len(m.sig.mods) != 1:
            raise InputError("--relation is required for models with several modalities")
        (r,) = m.sig.mods
    if args.parts:
        m = union_relation(m, r, args.parts.split(","))
    elif r not in m.sig.mods:
        raise InputError("--relation: unknown modality %r (use --parts to define it)" % r)
    if not eval_node(m, s, phi):
        _emit(args, "formula is false at %s" % s, {"error": "formula false at start"})
        return FALSE
    try:
        tree, image = finite_tree_pipeline(m, s, phi, r)
    except TreeShapeError as exc:
        _emit(args, "treeify failed: %s" % exc, {"error": str(exc)})
        return FALSE
    holds = eval_node(tree, image, phi)
    data = {"state": image, "states": len(tree.states), "holds": holds,
            "bound": tree_size_bound(phi), "model": tree.to_json()}
    human = "%d states, image %s, formula %s (bound %d)\n%s" % (
        len(tree.states), image, "holds" if holds else "FAILS", data["bound"],
        json.dumps(tree.to_json(), sort_keys=True))
    _emit(args, human, data)
    return TRUE if holds else FALSE


def cmd_prove(args):
    try:
        proof = load_proof(args.proof)
    except OSError as exc:
        raise InputError("%s: %s" % (args.proof, exc.strerror))
    except (ProofFileError, SyntaxErrorAt, UndeclaredSymbol) as exc:
        raise InputError("%s: %s" % (args.proof, exc))
    sys_ = _system(args.system or proof.system)
    result = check_proof(sys_, proof)
    if result:
        human = "ok: %s (%d lines, %s)" % (render(proof.conclusion), len(proof.lines), sys_.name)
    else:
        human = "rejected at line %d: %s" % (result.line, result.reason)
    _emit(args, human, {"ok": result.ok, "line": result.line, "reason": result.reason,
                        "system": sys_.name, "lines": len(proof.lines)})
    return TRUE if result else FALSE


def cmd_fuzz(args):
    suite = checks.SUITES[args.suite]
    kwargs = {"seed": args.seed}
    if args.trials is not None:
        key = {"soundness": "instances", "filtration": "passing", "bisim": "pairs"}.get(
            args.suite, "trials")
        kwargs[key] = args.trials
    if args.suite == "soundness":
        kwargs["jobs"] = args.jobs
    report = suite(**kwargs)
    summary = report.summary()
    human = "%s: %s\n%s" % (args.suite, "ok" if report.ok else "VIOLATIONS",
                            json.dumps(summary, sort_keys=True, default=str))
    _emit(args, human, summary)
    return TRUE if report.ok else FALSE


def cmd_lin(args):
    if args.n < 0:
        raise InputError("n must be non-negative")
    phi = lin_prefix(args.n) if args.prefix else lin_formula(args.n)
    data = {"n": args.n, "formula": render(phi)}
    human = render(phi)
    code = TRUE
    if args.check:
        out = sat_bounded(phi, args.bound or args.n + 1, _model_class(args.cls))
        data["sat"] = bool(out)
        if isinstance(out, Sat):
            data["size"] = out.size
            human += "\nsat with %d states" % out.size
        else:
            human += "\nnot found up to %d states" % (args.bound or args.n + 1)
            code = FALSE
    _emit(args, human, data)
    return code


# -- argument parsing -----------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON")

    def formula_flags(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--formula", help="formula text")
        g.add_argument("--formula-file", help="file holding the formula")

    parser = argparse.ArgumentParser(prog="hxpath", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and re-render an expression")
    p.add_argument("text", nargs="?")
    p.add_argument("--kind", choices=("node", "path"), default="node")
    formula_flags(p)
    p.set_defaults(run=cmd_parse)

    for name, run, text in (("eval", cmd_eval, "evaluate a formula on a model"),
                            ("label", cmd_label, "label every subexpression")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--model")
        p.add_argument("--at")
        formula_flags(p)
        if name == "label":
            p.add_argument("--eq", help="equality symbol used to desugar diamonds")
        p.set_defaults(run=run)

    for name, run, text in (("sat", cmd_sat, "bounded satisfiability"),
                            ("valid", cmd_valid, "bounded validity")):
        p = sub.add_parser(name, parents=[common], help=text)
        formula_flags(p)
        p.add_argument("--class", dest="cls", default="all", help="all, tree or forest-")
        p.add_argument("--bound", type=int, default=4)
        p.add_argument("--budget", type=int, help="solver conflict budget")
        p.add_argument("--seed", type=int, default=0, help="accepted for uniformity")
        p.set_defaults(run=run)

    p = sub.add_parser("bisim", parents=[common], help="bisimilarity of two pointed models")
    p.add_argument("--model")
    p.add_argument("--at")
    p.add_argument("--model2", help="second model (defaults to --model)")
    p.add_argument("--at2")
    p.add_argument("--depth", type=int, help="check depth-bounded bisimilarity")
    p.set_defaults(run=cmd_bisim)

    p = sub.add_parser("translate", parents=[common], help="standard first-order translation")
    p.add_argument("--kind", choices=("node", "path"), default="node")
    formula_flags(p)
    p.set_defaults(run=cmd_translate)

    p = sub.add_parser("fc", parents=[common], help="frame condition of a proof system")
    p.add_argument("--system", default="HXP")
    p.add_argument("--model", help="check the model against the condition")
    p.set_defaults(run=cmd_fc)

    p = sub.add_parser("filtrate", parents=[common], help="smallest filtration")
    p.add_argument("--model")
    p.add_argument("--formula", action="append", help="closure seed (repeatable)")
    p.add_argument("--formula-file")
    p.set_defaults(run=cmd_filtrate)

    p = sub.add_parser("treeify", parents=[common], help="finite tree model around a state")
    p.add_argument("--model")
    p.add_argument("--at")
    p.add_argument("--relation", help="tree modality")
    p.add_argument("--parts", help="comma-separated modalities whose union defines --relation")
    formula_flags(p)
    p.set_defaults(run=cmd_treeify)

    p = sub.add_parser("prove", parents=[common], help="check a proof file")
    p.add_argument("proof")
    p.add_argument("--system", help="defaults to the system named in the file")
    p.set_defaults(run=cmd_prove)

    p = sub.add_parser("fuzz", parents=[common], help="run a seeded property suite")
    p.add_argument("--suite", choices=sorted(checks.SUITES), default="soundness")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(run=cmd_fuzz)

    p = sub.add_parser("lin", parents=[common], help="the Lin(n) chain formulas")
    p.add_argument("n", type=int)
    p.add_argument("--prefix", action="store_true", help="conjunction of Lin(0..n)")
    p.add_argument("--check", action="store_true", help="also search for a model")
    p.add_argument("--class", dest="cls", default="tree")
    p.add_argument("--bound", type=int)
    p.set_defaults(run=cmd_lin)
    return parser


def run(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else TRUE
    if getattr(args, "command", None) == "bisim" and args.model2 is None:
        args.model2 = args.model
    try:
        return args.run(args)
    except InputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return INPUT_ERROR
    except UnassignedNominal as exc:
        print("error: %s" % exc, file=sys.stderr)
        return INPUT_ERROR


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
