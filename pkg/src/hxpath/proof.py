"""Hilbert-style proof checking for HXP and its pure extensions.

Formulas are compared after unfolding every abbreviation into the core
language (``->``, ``|``, boxes, diamonds, ``@i φ``, ``eps``, ``false``
and unions inside comparisons) and cancelling double negations.
``true`` stays a constant.  A diamond ``<α>φ`` unfolds to
``<α/?(φ) = e α/?(φ)>`` for one fixed equality symbol, ``diamond_eq``
(default ``e``).
"""

import json
import random
from dataclasses import dataclass, field

from .evaluation import eval_node
from .fol import ExistentialRule, frame_condition, satisfies_fc
from .model import random_model
from .randgen import random_node, random_path
from .syntax import (And, At, AtF, Bot, Box, Diamond, Eps, Eq, Implies, Mod,
                     Neq, Nom, Not, Or, Prop, Seq, Signature, Test, Top, Union,
                     conj, iff, is_pure, nominals_of, parse_node, parse_path,
                     render, symbols_of)

DIAMOND = "<diamond>"  # placeholder equality symbol inside unfolded templates


# -- unfolding abbreviations ---------------------------------------------------------

def _neg(x):
    return x.body if isinstance(x, Not) else Not(x)


class _Unfold:
    def __init__(self, deq):
        self.deq = deq

    def node(self, x):
        if isinstance(x, (Prop, Nom, Top)):
            return x
        if isinstance(x, Bot):
            return Not(Top())
        if isinstance(x, Not):
            return _neg(self.node(x.body))
        if isinstance(x, And):
            return And(self.node(x.left), self.node(x.right))
        if isinstance(x, Or):
            return Not(And(_neg(self.node(x.left)), _neg(self.node(x.right))))
        if isinstance(x, Implies):
            return Not(And(self.node(x.left), _neg(self.node(x.right))))
        if isinstance(x, (Eq, Neq)):
            return self.compare(type(x), x.left, x.eq, x.right)
        if isinstance(x, Diamond):
            full = Seq(x.path, Test(x.body))
            return self.compare(Eq, full, self.deq, full)
        if isinstance(x, Box):
            return _neg(self.node(Diamond(x.path, Not(x.body))))
        if isinstance(x, AtF):
            return self.node(Diamond(At(x.nominal), x.body))
        raise TypeError("not a node expression: %r" % (x,))

    def compare(self, kind, left, eq, right):
        items = [kind(a, eq, b) for a in self.branches(left) for b in self.branches(right)]
        out = items[0]
        for item in items[1:]:
            out = Not(And(_neg(out), _neg(item)))
        return out

    def branches(self, path):
        if isinstance(path, (Mod, At)):
            return [path]
        if isinstance(path, Eps):
            return [Test(Top())]
        if isinstance(path, Test):
            return [Test(self.node(path.body))]
        if isinstance(path, Union):
            return self.branches(path.left) + self.branches(path.right)
        if isinstance(path, Seq):
            return [Seq(a, b) for a in self.branches(path.first)
                    for b in self.branches(path.second)]
        raise TypeError("not a path expression: %r" % (path,))


def unfold(x, diamond_eq="e"):
    """Core-language form of ``x`` used for all syntactic comparisons."""
    return _Unfold(diamond_eq).node(x)


# -- propositional tautologies ---------------------------------------------------------

MAX_TAUT_ATOMS = 20


def _atoms(x, out):
    if isinstance(x, Not):
        _atoms(x.body, out)
    elif isinstance(x, And):
        _atoms(x.left, out)
        _atoms(x.right, out)
    elif not isinstance(x, Top):
        out.setdefault(x, len(out))


def is_tautology(x, diamond_eq="e"):
    """Truth-table check treating maximal non-Boolean parts as atoms."""
    core = unfold(x, diamond_eq)
    atoms = {}
    _atoms(core, atoms)
    n = len(atoms)
    if n > MAX_TAUT_ATOMS:
        raise ValueError("too many atoms for the truth table (%d)" % n)
    rows = 1 << n
    full = (1 << rows) - 1
    # bit r of the mask for atom k is bit k of row r
    masks = {}
    for atom, k in atoms.items():
        half = 1 << k
        mask = ((1 << half) - 1) << half
        width = 2 * half
        while width < rows:
            mask |= mask << width
            width *= 2
        masks[atom] = mask & full

    def value(y):
        if isinstance(y, Top):
            return full
        if isinstance(y, Not):
            return full & ~value(y.body)
        if isinstance(y, And):
            return value(y.left) & value(y.right)
        return masks[y]

    return value(core) == full


# -- schemes and matching --------------------------------------------------------------

NODE_VARS = ("phi", "psi", "theta")
PATH_VARS = ("alpha", "beta", "gamma", "eta")


@dataclass(frozen=True)
class AxiomScheme:
    """A named axiom scheme, possibly with several template variants.

    In a template, propositions named in ``node_vars`` stand for any
    formula, modalities in ``path_vars`` for any path, modalities in
    ``mod_vars`` for any single modality, and nominals and equality
    symbols in ``nominal_vars``/``eq_vars`` for any nominal or symbol.
    """

    name: str
    templates: tuple
    node_vars: frozenset = frozenset()
    path_vars: frozenset = frozenset()
    mod_vars: frozenset = frozenset()
    nominal_vars: frozenset = frozenset()
    eq_vars: frozenset = frozenset()

    def kind_of(self, name):
        for kind, pool in (("node", self.node_vars), ("path", self.path_vars),
                           ("mod", self.mod_vars), ("nominal", self.nominal_vars),
                           ("eq", self.eq_vars)):
            if name in pool:
                return kind
        return None

    def match(self, x, diamond_eq="e"):
        """Bindings making ``x`` an instance, or ``None``."""
        target = unfold(x, diamond_eq)
        for template in self.templates:
            bindings = {}
            if _match(unfold(template, DIAMOND), target, self, bindings, diamond_eq):
                return bindings
        return None

    def instantiate(self, bindings, variant=0):
        return _subst(self.templates[variant], self, bindings)


def axiom_instance(scheme, phi, diamond_eq="e"):
    """Bindings showing ``phi`` is an instance of ``scheme``, or ``None``."""
    return scheme.match(phi, diamond_eq)


def _match(t, x, sc, b, deq):
    if isinstance(t, Prop) and t.name in sc.node_vars:
        return _bind(b, ("node", t.name), x)
    if isinstance(t, Not) and isinstance(t.body, Prop) and t.body.name in sc.node_vars:
        # the instance may have cancelled this negation against its own
        return _bind(b, ("node", t.body.name), _neg(x))
    if isinstance(t, Mod):
        if t.name in sc.path_vars:
            if isinstance(x, (Mod, At, Test, Seq, Eps, Union)):
                return _bind(b, ("path", t.name), x)
            return False
        if t.name in sc.mod_vars:
            return isinstance(x, Mod) and _bind(b, ("mod", t.name), x.name)
        return x == t
    if isinstance(t, (Nom, At)):
        if type(x) is not type(t):
            return False
        tn = t.name if isinstance(t, Nom) else t.nominal
        xn = x.name if isinstance(x, Nom) else x.nominal
        if tn in sc.nominal_vars:
            return _bind(b, ("nominal", tn), xn)
        return tn == xn
    if type(x) is not type(t):
        return False
    if isinstance(t, (Eq, Neq)):
        if t.eq == DIAMOND:
            ok = x.eq == deq
        elif t.eq in sc.eq_vars:
            ok = _bind(b, ("eq", t.eq), x.eq)
        else:
            ok = t.eq == x.eq
        return ok and _match(t.left, x.left, sc, b, deq) and _match(t.right, x.right, sc, b, deq)
    if isinstance(t, (Not, Test)):
        return _match(t.body, x.body, sc, b, deq)
    if isinstance(t, And):
        return _match(t.left, x.left, sc, b, deq) and _match(t.right, x.right, sc, b, deq)
    if isinstance(t, Seq):
        return _match(t.first, x.first, sc, b, deq) and _match(t.second, x.second, sc, b, deq)
    return t == x


def _bind(b, key, value):
    if key in b:
        return b[key] == value
    b[key] = value
    return True


def _subst(t, sc, b):
    def get(kind, name, default):
        return b.get((kind, name), default)

    if isinstance(t, Prop):
        return get("node", t.name, t) if t.name in sc.node_vars else t
    if isinstance(t, Mod):
        if t.name in sc.path_vars:
            return get("path", t.name, t)
        if t.name in sc.mod_vars:
            return Mod(get("mod", t.name, t.name))
        return t
    if isinstance(t, Nom):
        return Nom(get("nominal", t.name, t.name))
    if isinstance(t, At):
        return At(get("nominal", t.nominal, t.nominal))
    if isinstance(t, AtF):
        return AtF(get("nominal", t.nominal, t.nominal), _subst(t.body, sc, b))
    if isinstance(t, (Eq, Neq)):
        eq = get("eq", t.eq, t.eq) if t.eq in sc.eq_vars else t.eq
        return type(t)(_subst(t.left, sc, b), eq, _subst(t.right, sc, b))
    if isinstance(t, (Top, Bot, Eps)):
        return t
    if isinstance(t, (Not, Test)):
        return type(t)(_subst(t.body, sc, b))
    if isinstance(t, (And, Or, Implies, Union)):
        return type(t)(_subst(t.left, sc, b), _subst(t.right, sc, b))
    if isinstance(t, Seq):
        return Seq(_subst(t.first, sc, b), _subst(t.second, sc, b))
    if isinstance(t, (Diamond, Box)):
        return type(t)(_subst(t.path, sc, b), _subst(t.body, sc, b))
    raise TypeError("not an expression: %r" % (t,))


def _n(text):
    return parse_node(text)


def _star(text):
    """Both the ``=`` and ``!=`` readings of a template written with ``= e``."""
    return (_n(text), _n(text.replace("= e", "!= e")))


def _star_iff(left, right):
    return (iff(_n(left), _n(right)),
            iff(_n(left.replace("= e", "!= e")), _n(right.replace("= e", "!= e"))))


def _hxp_scheme(name, templates):
    templates = tuple(templates)
    used_nodes, used_paths, used_noms, used_eqs = set(), set(), set(), set()
    for t in templates:
        sym = symbols_of(t)
        used_nodes |= sym.props & set(NODE_VARS)
        used_paths |= sym.mods & set(PATH_VARS)
        used_noms |= sym.noms
        used_eqs |= sym.eqs
    return AxiomScheme(name, templates, frozenset(used_nodes), frozenset(used_paths),
                       frozenset(), frozenset(used_noms), frozenset(used_eqs))


def hxp_schemes():
    """The axiom schemes of HXP."""
    s = _hxp_scheme
    return [
        s("K", [_n("[alpha](phi -> psi) -> ([alpha]phi -> [alpha]psi)")]),
        s("@-self-dual", [iff(_n("!@'i phi"), _n("@'i !phi"))]),
        s("@-intro", [Implies(Nom("i"), iff(Prop("phi"), _n("@'i phi")))]),
        s("@-refl", [_n("@'i 'i")]),
        s("agree", _star_iff("< @'j/@'i/alpha = e beta >", "< @'i/alpha = e beta >")),
        s("back", _star("< gamma/@'i/alpha = e beta > -> < @'i/alpha = e beta >")),
        s("comp-assoc", _star_iff("< (alpha/beta)/gamma = e eta >",
                                  "< alpha/beta/gamma = e eta >")),
        s("comp-neutral",
          _star_iff("< alpha/beta = e gamma >", "< alpha/eps/beta = e gamma >")
          + _star_iff("< beta = e gamma >", "< eps/beta = e gamma >")
          + _star_iff("< alpha = e gamma >", "< alpha/eps = e gamma >")
          + _star_iff("< eps = e gamma >", "< eps = e gamma >")),
        s("comp-dist", [iff(_n("<alpha/beta> phi"), _n("<alpha><beta> phi"))]),
        s("equal", [_n("< eps = e eps >")]),
        s("distinct", [_n("!< eps != e eps >")]),
        s("@-data", [iff(_n("!< @'i = e @'j >"), _n("< @'i != e @'j >"))]),
        s("eps-trans", [_n("< eps = e alpha > & < eps = e beta > -> < alpha = e beta >")]),
        s("*-comm", _star_iff("< alpha = e beta >", "< beta = e alpha >")),
        s("*-test", [iff(_n("< ?(phi)/alpha = e beta >"), _n("phi & < alpha = e beta >")),
                     iff(_n("< ?(phi)/alpha != e beta >"), _n("phi & < alpha != e beta >"))]),
        s("@*-dist", _star("< @'i/alpha = e @'i/beta > -> @'i < alpha = e beta >")),
        s("subpath", _star("< alpha/beta = e gamma > -> <alpha> true")),
        s("comp*-dist", _star("<alpha> < beta = e gamma > -> < alpha/beta = e alpha/gamma >")),
    ]


def pure_scheme(name, formula):
    """A pure axiom used as a scheme over its nominals."""
    if not is_pure(formula):
        raise ValueError("axiom %s is not pure" % name)
    return AxiomScheme(name, (formula,), nominal_vars=frozenset(nominals_of(formula)))


def loop_path(mod, n):
    return Seq(Mod(mod), loop_path(mod, n - 1)) if n > 1 else Mod(mod)


def no_loops(n, mod="a", nominal="i"):
    if n < 1:
        raise ValueError("no-loops needs n > 0")
    return AtF(nominal, Not(Diamond(loop_path(mod, n), Nom(nominal))))


@dataclass(frozen=True)
class NoLoopsFamily:
    """``@i !<a^n> i`` for every ``n > 0``."""

    name: str = "no-loops"
    mod: str = "a"

    def match(self, x, diamond_eq="e"):
        noms = nominals_of(x)
        if len(noms) != 1:
            return None
        (i,) = noms
        target = unfold(x, diamond_eq)
        n = 1
        while True:
            candidate = no_loops(n, self.mod, i)
            size = len(render(candidate))
            if size > len(render(x)) + 64:
                return None
            if unfold(candidate, diamond_eq) == target:
                return {("nominal", "i"): i, ("n", "n"): n}
            n += 1


# -- proofs --------------------------------------------------------------------------

RULES = ("taut", "mp", "nec", "name", "paste", "ext")


@dataclass
class Line:
    formula: object
    rule: str
    refs: tuple = ()
    path: object = None
    nominal: str = None
    bindings: dict = field(default_factory=dict)


@dataclass
class Proof:
    lines: list
    hypotheses: list = field(default_factory=list)
    system: str = "HXP"

    @property
    def conclusion(self):
        return self.lines[-1].formula if self.lines else None


@dataclass
class CheckResult:
    ok: bool
    line: int = 0
    reason: str = ""

    def __bool__(self):
        return self.ok


@dataclass
class ProofSystem:
    name: str
    schemes: list
    pi: dict = field(default_factory=dict)
    families: list = field(default_factory=list)
    rules: dict = field(default_factory=dict)
    fc_axioms: list = field(default_factory=list)
    fuzz_sig: Signature = None
    model_maker: object = None
    diamond_eq: str = "e"

    def scheme(self, name):
        for sc in self.schemes:
            if sc.name == name:
                return sc
        if name in self.pi:
            return self.pi[name]
        for fam in self.families:
            if fam.name == name:
                return fam
        return None

    def frame_condition(self):
        return frame_condition(self.fc_axioms, list(self.rules.values()))

    def with_schemes(self, extra, name=None):
        return ProofSystem(name or self.name + "*", self.schemes + list(extra), dict(self.pi),
                           list(self.families), dict(self.rules), list(self.fc_axioms),
                           self.fuzz_sig, self.model_maker, self.diamond_eq)


def _imp_parts(core):
    """``(a, b)`` when the unfolded formula is ``a -> b``."""
    if isinstance(core, Not) and isinstance(core.body, And):
        return core.body.left, _neg(core.body.right)
    return None


def _diamond_parts(core, deq):
    """``(α, φ)`` when ``core`` is the unfolding of ``<α>φ``."""
    if (isinstance(core, Eq) and core.eq == deq and core.left == core.right
            and isinstance(core.left, Seq) and isinstance(core.left.second, Test)
            and _last_test_split(core.left) is not None):
        return _last_test_split(core.left)
    return None


def _last_test_split(path):
    # paths unfolded from <α>φ are Seq(α, Test(φ)) with α kept intact
    if isinstance(path, Seq) and isinstance(path.second, Test):
        return path.first, path.second.body
    return None


def _check_line(sys, proof, k, line, cores):
    deq = sys.diamond_eq
    core = cores[k]
    rule = line.rule
    refs = list(line.refs)
    for r in refs:
        if not (1 <= r <= k):
            return "reference %d does not point to an earlier line" % r
    prior = [cores[r - 1] for r in refs]

    if rule == "taut":
        return None if is_tautology(line.formula, deq) else "not a propositional tautology"

    if rule == "mp":
        if len(refs) != 2:
            return "mp needs two references"
        a, b = prior
        for premise, imp in ((a, b), (b, a)):
            parts = _imp_parts(imp)
            if parts and parts[0] == premise and parts[1] == core:
                return None
        return "mp: no reference has the shape premise -> conclusion"

    if rule == "nec":
        if len(refs) != 1:
            return "nec needs one reference"
        if line.path is not None:
            premise = proof.lines[refs[0] - 1].formula
            want = unfold(Box(line.path, premise), deq)
            return None if want == core else "nec: formula is not [path] of the premise"
        if isinstance(core, Not):
            parts = _diamond_parts(core.body, deq)
            if parts and parts[1] == _neg(prior[0]):
                return None
        return "nec: formula is not a box of the premise"

    if rule == "name":
        if len(refs) != 1:
            return "name needs one reference"
        parts = _diamond_parts(prior[0], deq)
        if not parts or not isinstance(parts[0], At):
            return "name: premise is not of the form @j phi"
        j = parts[0].nominal
        if line.nominal is not None and line.nominal != j:
            return "name: premise is not prefixed by @%s" % line.nominal
        if parts[1] != core:
            return "name: conclusion differs from the body of the premise"
        if j in nominals_of(line.formula):
            return "name: side condition violated, %s occurs in the conclusion" % j
        return None

    if rule == "paste":
        if len(refs) != 1:
            return "paste needs one reference"
        return _check_paste(prior[0], core, line, deq)

    if rule.startswith("ext:"):
        rid = rule[4:]
        ext = sys.rules.get(rid)
        if ext is None:
            return "unknown existential rule %r" % rid
        if len(refs) != 1:
            return "existential rule needs one reference"
        return _check_ext(ext, prior[0], line, deq)

    sc = sys.scheme(rule)
    if sc is None:
        return "unknown rule or axiom %r" % rule
    got = sc.match(line.formula, deq)
    if got is None:
        return "not an instance of %s" % rule
    for key, text in (line.bindings or {}).items():
        if not _binding_agrees(sc, got, key, text, deq):
            return "binding %s does not match the instance" % key
    return None


def _binding_agrees(sc, got, key, text, deq):
    kind = sc.kind_of(key) if hasattr(sc, "kind_of") else ("nominal" if key == "i" else "n")
    if kind is None:
        return False
    have = got.get((kind, key))
    if kind == "node":
        return have == unfold(parse_node(text) if isinstance(text, str) else text, deq)
    if kind == "path":
        value = parse_path(text) if isinstance(text, str) else text
        return have == _Unfold(deq).branches(value)[0]
    return have == text


def _check_paste(premise, core, line, deq):
    pp = _imp_parts(premise)
    cp = _imp_parts(core)
    if not pp or not cp:
        return "paste: premise and conclusion must be implications"
    lhs, theta = pp
    if cp[1] != theta:
        return "paste: the consequents differ"
    if not isinstance(lhs, And):
        return "paste: premise antecedent must be a conjunction"
    named, comp = lhs.left, lhs.right
    outer = _diamond_parts(named, deq)
    if not outer or not isinstance(outer[0], At):
        return "paste: first conjunct must be @i<a>j"
    i = outer[0].nominal
    inner = _diamond_parts(outer[1], deq)
    if not inner or not isinstance(inner[0], Mod) or not isinstance(inner[1], Nom):
        return "paste: first conjunct must be @i<a>j"
    a, j = inner[0].name, inner[1].name
    if not isinstance(comp, (Eq, Neq)):
        return "paste: second conjunct must be a comparison"
    left = comp.left
    if left == At(j):
        alpha = None
    elif isinstance(left, Seq) and left.first == At(j):
        alpha = left.second
    else:
        return "paste: comparison must start with @j"
    want_left = Seq(At(i), Mod(a) if alpha is None else Seq(Mod(a), alpha))
    if type(cp[0]) is not type(comp) or cp[0] != type(comp)(want_left, comp.eq, comp.right):
        return "paste: conclusion antecedent must be <@i a alpha * beta>"
    if line.nominal is not None and line.nominal != j:
        return "paste: the pasted nominal is %s, not %s" % (j, line.nominal)
    if j == i:
        return "paste: side condition violated, j equals i"
    used = set(symbols_of(comp.right).noms) | set(symbols_of(theta).noms)
    if alpha is not None:
        used |= symbols_of(alpha).noms
    if j in used:
        return "paste: side condition violated, %s occurs in alpha, beta or theta" % j
    return None


def _check_ext(ext, premise, line, deq):
    parts = _imp_parts(premise)
    if not parts:
        return "existential rule: premise must be head -> psi"
    head, psi = parts
    if psi != unfold(line.formula, deq):
        return "existential rule: conclusion differs from the consequent"
    sc = pure_scheme(ext.name, ext.head)
    bindings = {}
    if not _match(unfold(ext.head, DIAMOND), head, sc, bindings, deq):
        return "existential rule: antecedent is not an instance of the head"
    image = {k[1]: v for k, v in bindings.items()}
    used = nominals_of(line.formula)
    ex = [image[j] for j in ext.existential]
    if len(set(ex)) != len(ex):
        return "existential rule: existential nominals must be distinct"
    for j in ext.existential:
        if image[j] in used:
            return "existential rule: side condition violated, %s occurs in the conclusion" % image[j]
        if any(image[u] == image[j] for u in ext.universal):
            return "existential rule: %s is also used for a universal nominal" % image[j]
    return None


def check_proof(sys, proof):
    """Check every line; the result names the first failing line."""
    cores = []
    for k, line in enumerate(proof.lines):
        try:
            cores.append(unfold(line.formula, sys.diamond_eq))
            reason = _check_line(sys, proof, k, line, cores)
        except (ValueError, TypeError) as exc:
            reason = str(exc)
        if reason:
            return CheckResult(False, k + 1, reason)
    if not proof.lines:
        return CheckResult(False, 0, "empty proof")
    return CheckResult(True)


def derives(sys, gamma, phi, proof):
    """Whether ``proof`` shows ``/\\Γ' -> φ`` for its declared ``Γ' ⊆ Γ``."""
    deq = sys.diamond_eq
    pool = {unfold(g, deq) for g in gamma}
    for h in proof.hypotheses:
        if unfold(h, deq) not in pool:
            return CheckResult(False, 0, "hypothesis %s is not in the premise set" % render(h))
    result = check_proof(sys, proof)
    if not result:
        return result
    last = unfold(proof.conclusion, deq)
    wanted = {unfold(Implies(conj(proof.hypotheses), phi), deq)}
    if not proof.hypotheses:
        wanted.add(unfold(phi, deq))
    if last not in wanted:
        return CheckResult(False, len(proof.lines), "last line is not the claimed consequence")
    return CheckResult(True)


# -- building proofs ---------------------------------------------------------------

class ProofBuilder:
    """Appends justified lines and returns their 1-based numbers."""

    def __init__(self, system="HXP", hypotheses=()):
        self.proof = Proof([], list(hypotheses), system)

    def add(self, formula, rule, refs=(), **extra):
        if isinstance(formula, str):
            formula = parse_node(formula)
        self.proof.lines.append(Line(formula, rule, tuple(refs), **extra))
        return len(self.proof.lines)

    def axiom(self, name, formula, **bindings):
        return self.add(formula, name, bindings=bindings)

    def taut(self, formula):
        return self.add(formula, "taut")

    def mp(self, premise, implication):
        imp = self.proof.lines[implication - 1].formula
        if not isinstance(imp, Implies):
            raise ValueError("line %d is not written as an implication" % implication)
        return self.add(imp.right, "mp", (premise, implication))

    def nec(self, ref, path):
        if isinstance(path, str):
            path = parse_path(path)
        return self.add(Box(path, self.proof.lines[ref - 1].formula), "nec", (ref,), path=path)

    def chain(self, conclusion, *premises):
        """Conclude by a tautology ``p1 -> (p2 -> ... -> c)`` and modus ponens."""
        if isinstance(conclusion, str):
            conclusion = parse_node(conclusion)
        body = conclusion
        for ref in reversed(premises):
            body = Implies(self.proof.lines[ref - 1].formula, body)
        current = self.taut(body)
        for ref in premises:
            current = self.mp(ref, current)
        return current

    def formula(self, ref):
        return self.proof.lines[ref - 1].formula

    # derived steps used throughout the corpus

    def self_dual(self, i, body):
        """``!@i φ <-> @i !φ``."""
        return self.axiom("@-self-dual", iff(Not(AtF(i, body)), AtF(i, Not(body))))

    def box_lift(self, ref, path, arity=None):
        """From ``A1 -> ... -> An -> B`` derive ``[α]A1 -> ... -> [α]An -> [α]B``.

        ``arity`` caps how many antecedents are peeled (default: all).
        """
        if isinstance(path, str):
            path = parse_path(path)
        parts, rest = _implication_chain(self.formula(ref), arity)
        if not parts:
            return self.nec(ref, path)
        current = self.nec(ref, path)
        steps = []
        for k, a in enumerate(parts):
            inner = Implies(a, _rest_after(parts, k, rest))
            k = self.axiom("K", Implies(Box(path, inner),
                                        Implies(Box(path, a), Box(path, inner.right))))
            if not steps:
                current = self.mp(current, k)
                steps.append(current)
            else:
                steps.append(k)
        target = rest
        boxed = Box(path, target)
        for a in reversed(parts):
            boxed = Implies(Box(path, a), boxed)
        return self.chain(boxed, *steps)

    def at_lift(self, ref, i, arity=None):
        """From ``A1 -> ... -> B`` derive ``@i A1 -> ... -> @i B``."""
        boxed = self.box_lift(ref, At(i), arity)
        parts, rest = _implication_chain(self.formula(ref), arity)
        duals = [self.self_dual(i, Not(x)) for x in parts + [rest]]
        target = AtF(i, rest)
        for a in reversed(parts):
            target = Implies(AtF(i, a), target)
        return self.chain(target, boxed, *duals)

    def dia_mono(self, ref, path):
        """From ``A -> B`` derive ``<α>A -> <α>B``."""
        if isinstance(path, str):
            path = parse_path(path)
        imp = self.formula(ref)
        contra = self.chain(Implies(Not(imp.right), Not(imp.left)), ref)
        boxed = self.box_lift(contra, path, 1)
        return self.chain(Implies(Diamond(path, imp.left), Diamond(path, imp.right)), boxed)

    def drop_outer(self, gamma, i, body):
        """``<γ> @i φ -> @i φ`` from comp-dist, comp-assoc, *-comm and back."""
        if isinstance(gamma, str):
            gamma = parse_path(gamma)
        if isinstance(body, str):
            body = parse_node(body)
        left = Seq(Seq(gamma, At(i)), Test(body))
        right = Seq(gamma, Seq(At(i), Test(body)))
        inner = Seq(At(i), Test(body))
        steps = [
            self.axiom("comp-dist", iff(Diamond(Seq(gamma, At(i)), body),
                                        Diamond(gamma, AtF(i, body)))),
            self.axiom("comp-assoc", iff(Eq(left, "e", left), Eq(right, "e", left))),
            self.axiom("*-comm", iff(Eq(right, "e", left), Eq(left, "e", right))),
            self.axiom("comp-assoc", iff(Eq(left, "e", right), Eq(right, "e", right))),
            self.axiom("back", Implies(Eq(right, "e", right), Eq(inner, "e", right))),
            self.axiom("*-comm", iff(Eq(inner, "e", right), Eq(right, "e", inner))),
            self.axiom("back", Implies(Eq(right, "e", inner), Eq(inner, "e", inner))),
        ]
        return self.chain(Implies(Diamond(gamma, AtF(i, body)), AtF(i, body)), *steps)

    def name_prime(self, ref, k):
        """From ``k -> φ`` with ``k`` not in ``φ`` derive ``φ``."""
        phi = self.formula(ref).right
        lifted = self.box_lift(ref, At(k), 1)
        refl = self.axiom("@-refl", AtF(k, Nom(k)))
        dual_k = self.self_dual(k, Not(Nom(k)))
        dual_phi = self.self_dual(k, Not(phi))
        at_phi = self.chain(AtF(k, phi), lifted, refl, dual_k, dual_phi)
        return self.add(phi, "name", (at_phi,), nominal=k)


def _implication_chain(x, arity=None):
    parts = []
    while isinstance(x, Implies) and (arity is None or len(parts) < arity):
        parts.append(x.left)
        x = x.right
    return parts, x


def _rest_after(parts, k, rest):
    out = rest
    for b in reversed(parts[k + 1:]):
        out = Implies(b, out)
    return out


# -- files ----------------------------------------------------------------------------

class ProofFileError(ValueError):
    pass


def proof_from_json(data):
    try:
        lines = []
        for item in data["lines"]:
            path = item.get("path")
            lines.append(Line(parse_node(item["formula"]), item["rule"],
                              tuple(item.get("refs", ())),
                              parse_path(path) if path else None,
                              item.get("nominal"), dict(item.get("bindings", {}))))
        hyps = [parse_node(h) for h in data.get("hypotheses", ())]
        return Proof(lines, hyps, data.get("system", "HXP"))
    except (KeyError, TypeError) as exc:
        raise ProofFileError("malformed proof document: %s" % exc) from None


def proof_to_json(proof):
    out = []
    for line in proof.lines:
        item = {"formula": render(line.formula), "rule": line.rule}
        if line.refs:
            item["refs"] = list(line.refs)
        if line.path is not None:
            item["path"] = render(line.path)
        if line.nominal is not None:
            item["nominal"] = line.nominal
        if line.bindings:
            item["bindings"] = {k: (v if isinstance(v, str) else render(v))
                                for k, v in line.bindings.items()}
        out.append(item)
    return {"system": proof.system, "hypotheses": [render(h) for h in proof.hypotheses],
            "lines": out}


def load_proof(path):
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProofFileError("%s: line %d column %d: %s"
                                 % (path, exc.lineno, exc.colno, exc.msg)) from None
    return proof_from_json(data)


def save_proof(proof, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(proof_to_json(proof), fh, indent=2, ensure_ascii=False)
        fh.write("\n")


# -- built-in systems ---------------------------------------------------------------

PI1 = {
    "down-up": "'i -> [a]<a_inv>'i",
    "up-down": "'i -> [a_inv]<a>'i",
}
PI2_EXTRA = {
    "is-sib": "<s>'i -> <a_inv><a>'i",
    "has-sib": "!'i & <a_inv><a>'i -> <s>'i",
    "irref-sib": "'i -> !<s>'i",
}
PI3 = {"incl": "< @'i = e @'j > -> < @'i = d @'j >"}
NO_JOIN = "@'j <a>'i & @'k <a>'i -> @'j 'k"
FOREST_PARTS = ("b", "c")
NO_LOOPS_FUZZ = 4


def a_definition(parts=FOREST_PARTS, mod="a"):
    union = Mod(parts[-1])
    for name in reversed(parts[:-1]):
        union = Union(Mod(name), union)
    return iff(Diamond(Mod(mod), Top()), Diamond(union, Top()))


def _inverse_model(sig, rng, size):
    m = random_model(sig, size, density=0.35, rng=rng)
    rel = dict(m.rel)
    rel["a_inv"] = frozenset((b, a) for a, b in rel["a"])
    if "s" in sig.mods:
        sib = set()
        for z, x in rel["a"]:
            for z2, y in rel["a"]:
                if z == z2 and x != y:
                    sib.add((x, y))
        rel["s"] = frozenset(sib)
    return m.replace(rel=rel)


def _incl_model(sig, rng, size):
    m = random_model(sig, size, density=0.35, rng=rng)
    coarse = {}
    for c in m.eq["e"]:
        coarse.setdefault(rng.randrange(len(m.eq["e"])), []).extend(c)
    eq = dict(m.eq)
    eq["d"] = [tuple(v) for v in coarse.values()]
    return m.replace(eq=eq)


def _forest_model(sig, rng, size):
    m = random_model(sig, size, density=0.3, rng=rng)
    states = m.states
    edges = []
    for k in range(1, len(states)):
        if rng.random() < 0.75:
            edges.append((states[rng.randrange(k)], states[k]))
    rel = dict(m.rel)
    rel["a"] = frozenset(edges)
    split = {"b": set(), "c": set()}
    for edge in edges:
        split[rng.choice("bc")].add(edge)
    rel["b"], rel["c"] = frozenset(split["b"]), frozenset(split["c"])
    return m.replace(rel=rel)


def _plain_model(sig, rng, size):
    return random_model(sig, size, density=0.35, rng=rng)


def _system(name, pi_texts, mods, eqs=("e",), maker=_plain_model, families=(),
            extra_fc=(), extra_pi=()):
    pi = {}
    fc = []
    for key, text in pi_texts.items():
        formula = parse_node(text)
        pi[key] = pure_scheme(key, formula)
        fc.append(formula)
    for key, formula in extra_pi:
        pi[key] = pure_scheme(key, formula)
        fc.append(formula)
    fc.extend(extra_fc)
    sig = Signature({"p", "q"}, {"i", "j", "k"}, set(mods), set(eqs))
    return ProofSystem(name, hxp_schemes(), pi, list(families), {}, fc, sig, maker)


def builtin_systems():
    """HXP and its extensions by Π₁, Π₂, Π₃ and Π_forest⁻."""
    pi2 = dict(PI1)
    pi2.update(PI2_EXTRA)
    return [
        _system("HXP", {}, ("a", "b")),
        _system("HXP+Pi1", PI1, ("a", "a_inv"), maker=_inverse_model),
        _system("HXP+Pi2", pi2, ("a", "a_inv", "s"), maker=_inverse_model),
        _system("HXP+Pi3", PI3, ("a",), eqs=("e", "d"), maker=_incl_model),
        _system("HXP+Piforest", {"no-join": NO_JOIN}, ("a",) + FOREST_PARTS,
                maker=_forest_model, families=[NoLoopsFamily()],
                extra_fc=[no_loops(n) for n in range(1, NO_LOOPS_FUZZ + 1)],
                extra_pi=[("a-definition", a_definition())]),
    ]


def get_system(name):
    for sys in builtin_systems():
        if sys.name.lower() == name.lower():
            return sys
    raise KeyError("unknown proof system %r" % name)


# -- soundness fuzzing ---------------------------------------------------------------

@dataclass
class FuzzReport:
    system: str
    models: int
    instances: int
    discarded: int
    counterexamples: list

    @property
    def ok(self):
        return not self.counterexamples


def random_instance(sc, sig, rng, variant=None):
    """A random instance of ``sc`` over ``sig``."""
    if isinstance(sc, NoLoopsFamily):
        return no_loops(rng.randint(1, NO_LOOPS_FUZZ), sc.mod, rng.choice(sorted(sig.noms)))
    if variant is None:
        variant = rng.randrange(len(sc.templates))
    b = {}
    for name in sc.node_vars:
        b[("node", name)] = random_node(sig, depth=2, size=5, rng=rng)
    for name in sc.path_vars:
        b[("path", name)] = random_path(sig, depth=2, size=4, rng=rng)
    for name in sc.mod_vars:
        b[("mod", name)] = rng.choice(sorted(sig.mods))
    for name in sc.nominal_vars:
        b[("nominal", name)] = rng.choice(sorted(sig.noms))
    for name in sc.eq_vars:
        b[("eq", name)] = rng.choice(sorted(sig.eqs))
    return sc.instantiate(b, variant)


def _all_schemes(sys):
    return list(sys.schemes) + list(sys.pi.values()) + list(sys.families)


FUZZ_CHUNK = 50


def _fuzz_chunk(sys, pool, seed, start, count):
    rng = random.Random("%s/%d" % (seed, start))
    schemes = _all_schemes(sys)
    bad = []
    for k in range(start, start + count):
        sc = schemes[k % len(schemes)]
        phi = random_instance(sc, sys.fuzz_sig, rng)
        witness = next(((m, s) for m in pool for s in m.states if not eval_node(m, s, phi)), None)
        if witness:
            bad.append((sc.name, render(phi), witness[0].to_json(), witness[1]))
    return bad


def soundness_fuzz(sys, models=20, instances=200, seed=0, max_states=4, max_attempts=5000,
                   jobs=1):
    """Evaluate random axiom instances on random models satisfying FC(sys).

    ``instances`` formulas are drawn round-robin over the schemes and each
    is evaluated at every state of each of the ``models`` accepted models.
    Instances come in fixed chunks seeded from ``seed`` and the chunk
    start, so the report does not depend on ``jobs``.
    """
    rng = random.Random("%s/models" % (seed,))
    fc = sys.frame_condition()
    maker = sys.model_maker or _plain_model
    pool = []
    discarded = 0
    attempts = 0
    while len(pool) < models and attempts < max_attempts:
        attempts += 1
        m = maker(sys.fuzz_sig, random.Random(rng.random()), max_states)
        if satisfies_fc(m, fc):
            pool.append(m)
        else:
            discarded += 1
    chunks = [(k, min(FUZZ_CHUNK, instances - k)) for k in range(0, instances, FUZZ_CHUNK)]
    if jobs > 1 and len(chunks) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_fuzz_chunk, *zip(*[(sys, pool, seed, a, n) for a, n in chunks])))
    else:
        parts = [_fuzz_chunk(sys, pool, seed, a, n) for a, n in chunks]
    bad = [item for part in parts for item in part]
    return FuzzReport(sys.name, len(pool), instances, discarded, bad)


def corrupted_distinct():
    """The ``distinct`` axiom with its negation dropped (unsound on purpose)."""
    return AxiomScheme("distinct-negated", (parse_node("< eps != e eps >"),),
                       eq_vars=frozenset({"e"}))


__all__ = [
    "AxiomScheme", "CheckResult", "ExistentialRule", "FuzzReport", "Line",
    "NoLoopsFamily", "Proof", "ProofBuilder", "ProofFileError", "ProofSystem",
    "a_definition", "builtin_systems", "check_proof",
    "corrupted_distinct", "derives", "get_system", "hxp_schemes", "is_tautology",
    "load_proof", "no_loops", "proof_from_json", "proof_to_json", "pure_scheme",
    "random_instance", "save_proof", "soundness_fuzz", "unfold",
]
