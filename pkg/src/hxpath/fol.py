"""Standard translation into first-order logic and frame conditions.

The correspondence language has a unary ``P_p`` per proposition, binary
``R_a`` per modality and ``D_e`` per equality symbol.  The nominal ``i``
becomes the variable ``x_i``; bound variables introduced by the
translation are ``v1, v2, ...``.

Text format produced by :func:`emit_fo` and read by :func:`parse_fo`::

    forall v. F      exists v. F      ~F
    F & G            F | G            F -> G      (binary ops parenthesised when nested)
    P_p(v)   R_a(v,w)   D_e(v,w)   v = w   true
"""

import itertools
import re
from dataclasses import dataclass

from .syntax import (And, At, AtF, Bot, Box, Diamond, Eps, Eq, Implies, Mod,
                     Neq, Nom, Not, Or, Prop, Seq, Test, Top, Union,
                     is_pure, nominals_of, postorder)


class FOFormula:
    __slots__ = ()

    def __str__(self):
        return emit_fo(self)


@dataclass(frozen=True)
class PredP(FOFormula):
    prop: str
    term: str


@dataclass(frozen=True)
class RelR(FOFormula):
    mod: str
    left: str
    right: str


@dataclass(frozen=True)
class RelD(FOFormula):
    eq: str
    left: str
    right: str


@dataclass(frozen=True)
class EqT(FOFormula):
    left: str
    right: str


@dataclass(frozen=True)
class FTrue(FOFormula):
    pass


@dataclass(frozen=True)
class FNot(FOFormula):
    body: FOFormula


@dataclass(frozen=True)
class FAnd(FOFormula):
    left: FOFormula
    right: FOFormula


@dataclass(frozen=True)
class FOr(FOFormula):
    left: FOFormula
    right: FOFormula


@dataclass(frozen=True)
class FImplies(FOFormula):
    left: FOFormula
    right: FOFormula


@dataclass(frozen=True)
class Exists(FOFormula):
    var: str
    body: FOFormula


@dataclass(frozen=True)
class Forall(FOFormula):
    var: str
    body: FOFormula


_BINARY = (FAnd, FOr, FImplies)
_ATOMS = (PredP, RelR, RelD, EqT, FTrue)


def fo_conj(items):
    items = list(items)
    if not items:
        return FTrue()
    out = items[0]
    for item in items[1:]:
        out = FAnd(out, item)
    return out


def nominal_var(name):
    return "x_" + name


def equivalence_axioms(eq):
    """``D_eq`` is reflexive, symmetric and transitive."""
    u, v, w = "u", "w1", "w2"
    refl = Forall(u, RelD(eq, u, u))
    sym = Forall(u, Forall(v, FImplies(RelD(eq, u, v), RelD(eq, v, u))))
    trans = Forall(u, Forall(v, Forall(w, FImplies(
        FAnd(RelD(eq, u, v), RelD(eq, v, w)), RelD(eq, u, w)))))
    return FAnd(FAnd(refl, sym), trans)


class _Translator:
    def __init__(self):
        self.counter = itertools.count(1)

    def fresh(self):
        return "v%d" % next(self.counter)

    def node(self, x, var):
        if isinstance(x, Prop):
            return PredP(x.name, var)
        if isinstance(x, Nom):
            return EqT(var, nominal_var(x.name))
        if isinstance(x, Top):
            return EqT(var, var)
        if isinstance(x, Bot):
            return FNot(EqT(var, var))
        if isinstance(x, Not):
            return FNot(self.node(x.body, var))
        if isinstance(x, And):
            return FAnd(self.node(x.left, var), self.node(x.right, var))
        if isinstance(x, Or):
            return FOr(self.node(x.left, var), self.node(x.right, var))
        if isinstance(x, Implies):
            return FImplies(self.node(x.left, var), self.node(x.right, var))
        if isinstance(x, (Eq, Neq)):
            y, z = self.fresh(), self.fresh()
            data = RelD(x.eq, y, z)
            if isinstance(x, Neq):
                data = FNot(data)
            body = FAnd(FAnd(self.path(x.left, var, y), self.path(x.right, var, z)), data)
            return Exists(y, Exists(z, body))
        if isinstance(x, Diamond):
            y = self.fresh()
            return Exists(y, FAnd(self.path(x.path, var, y), self.node(x.body, y)))
        if isinstance(x, Box):
            y = self.fresh()
            return Forall(y, FImplies(self.path(x.path, var, y), self.node(x.body, y)))
        if isinstance(x, AtF):
            return self.node(x.body, nominal_var(x.nominal))
        raise TypeError("not a node expression: %r" % (x,))

    def path(self, p, src, dst):
        if isinstance(p, Mod):
            return RelR(p.name, src, dst)
        if isinstance(p, At):
            return EqT(dst, nominal_var(p.nominal))
        if isinstance(p, Test):
            return FAnd(EqT(src, dst), self.node(p.body, dst))
        if isinstance(p, Eps):
            return EqT(src, dst)
        if isinstance(p, Seq):
            mid = self.fresh()
            return Exists(mid, FAnd(self.path(p.first, src, mid),
                                    self.path(p.second, mid, dst)))
        if isinstance(p, Union):
            return FOr(self.path(p.left, src, dst), self.path(p.right, src, dst))
        raise TypeError("not a path expression: %r" % (p,))


def _eqs_of(x):
    return sorted({item.eq for item in postorder(x) if isinstance(item, (Eq, Neq))})


def st_prime_node(phi, var="x"):
    """Translation without the equivalence conjuncts."""
    return _Translator().node(phi, var)


def st_node(phi, var="x"):
    """``ST_x``: equivalence axioms for each symbol used, then ``ST'_x``."""
    body = _Translator().node(phi, var)
    axioms = [equivalence_axioms(e) for e in _eqs_of(phi)]
    return fo_conj(axioms + [body])


def st_path(alpha, src="x", dst="y"):
    body = _Translator().path(alpha, src, dst)
    axioms = [equivalence_axioms(e) for e in _eqs_of(alpha)]
    return fo_conj(axioms + [body])


# -- free variables and evaluation ------------------------------------------------------

def free_vars(f):
    if isinstance(f, PredP):
        return frozenset([f.term])
    if isinstance(f, (RelR, RelD, EqT)):
        return frozenset([f.left, f.right])
    if isinstance(f, FTrue):
        return frozenset()
    if isinstance(f, FNot):
        return free_vars(f.body)
    if isinstance(f, _BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    raise TypeError("not a first-order formula: %r" % (f,))


class UnboundVariable(LookupError):
    pass


class _FOEvaluator:
    def __init__(self, m):
        self.m = m
        self.fv = {}
        self.memo = {}

    def free(self, f):
        key = id(f)
        hit = self.fv.get(key)
        if hit is None:
            hit = self.fv[key] = (f, tuple(sorted(free_vars(f))))
        return hit[1]

    def value(self, g, var):
        try:
            return g[var]
        except KeyError:
            raise UnboundVariable("variable %r has no value" % var) from None

    def run(self, f, g):
        if isinstance(f, _ATOMS):
            return self.atom(f, g)
        key = (id(f), tuple(self.value(g, v) for v in self.free(f)))
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = self.compound(f, g)
        return hit

    def atom(self, f, g):
        m = self.m
        if isinstance(f, PredP):
            return f.prop in m.val[self.value(g, f.term)]
        if isinstance(f, RelR):
            return (self.value(g, f.left), self.value(g, f.right)) in m.rel.get(f.mod, ())
        if isinstance(f, RelD):
            return m.same_data(f.eq, self.value(g, f.left), self.value(g, f.right))
        if isinstance(f, EqT):
            return self.value(g, f.left) == self.value(g, f.right)
        return True

    def compound(self, f, g):
        if isinstance(f, FNot):
            return not self.run(f.body, g)
        if isinstance(f, FAnd):
            return self.run(f.left, g) and self.run(f.right, g)
        if isinstance(f, FOr):
            return self.run(f.left, g) or self.run(f.right, g)
        if isinstance(f, FImplies):
            return (not self.run(f.left, g)) or self.run(f.right, g)
        if isinstance(f, (Exists, Forall)):
            want = isinstance(f, Exists)
            inner = dict(g)
            for s in self.m.states:
                inner[f.var] = s
                if self.run(f.body, inner) == want:
                    return want
            return not want
        raise TypeError("not a first-order formula: %r" % (f,))


def fo_eval(m, g, f):
    """Tarskian truth of ``f`` in ``m`` under the assignment ``g``."""
    return _FOEvaluator(m).run(f, dict(g))


def standard_assignment(m, state, var="x"):
    """``g(var) = state`` and ``g(x_i) = nom(i)`` for assigned nominals."""
    g = {nominal_var(name): target for name, target in m.nom.items()}
    g[var] = state
    return g


# -- frame conditions ---------------------------------------------------------------

@dataclass(frozen=True)
class ExistentialRule:
    """From ``|- head -> psi`` infer ``|- psi`` when the existential
    nominals do not occur in ``psi``."""

    name: str
    head: object
    universal: tuple
    existential: tuple

    def __post_init__(self):
        noms = nominals_of(self.head)
        univ, exist = set(self.universal), set(self.existential)
        if univ & exist or univ | exist != noms:
            raise ValueError("rule %s: universal and existential nominals must "
                             "partition the head's nominals" % self.name)
        if not is_pure(self.head):
            raise ValueError("rule %s: head must be pure" % self.name)


def _close(body, var, universal, existential):
    for name in reversed(sorted(existential)):
        body = Exists(nominal_var(name), body)
    for name in reversed(sorted(universal)):
        body = Forall(nominal_var(name), body)
    return Forall(var, body)


def frame_condition(axioms=(), rules=()):
    """Conjunction of closed sentences, one per pure axiom and rule head."""
    parts = []
    for phi in axioms:
        if not is_pure(phi):
            raise ValueError("frame conditions need pure axioms: %s" % phi)
        parts.append(_close(st_node(phi, "x"), "x", nominals_of(phi), ()))
    for rule in rules:
        parts.append(_close(st_node(rule.head, "x"), "x", rule.universal, rule.existential))
    return fo_conj(parts)


def satisfies_fc(m, fc):
    return fo_eval(m, {}, fc)


# -- text format ---------------------------------------------------------------------

def emit_fo(f):
    return _emit(f, top=True)


def _emit(f, top=False):
    if isinstance(f, PredP):
        return "P_%s(%s)" % (f.prop, f.term)
    if isinstance(f, RelR):
        return "R_%s(%s,%s)" % (f.mod, f.left, f.right)
    if isinstance(f, RelD):
        return "D_%s(%s,%s)" % (f.eq, f.left, f.right)
    if isinstance(f, EqT):
        text = "%s = %s" % (f.left, f.right)
        return text if top else "(" + text + ")"
    if isinstance(f, FTrue):
        return "true"
    if isinstance(f, FNot):
        return "~" + _emit(f.body)
    if isinstance(f, _BINARY):
        op = {FAnd: "&", FOr: "|", FImplies: "->"}[type(f)]
        text = "%s %s %s" % (_emit(f.left), op, _emit(f.right))
        return text if top else "(" + text + ")"
    if isinstance(f, (Exists, Forall)):
        word = "exists" if isinstance(f, Exists) else "forall"
        text = "%s %s. %s" % (word, f.var, _emit(f.body))
        return text if top else "(" + text + ")"
    raise TypeError("not a first-order formula: %r" % (f,))


class FOSyntaxError(ValueError):
    pass


_FO_TOKEN = re.compile(r"\s*(?:(?P<sym>[PRD])_(?P<sname>[A-Za-z0-9_]+)\(|(?P<op>->|[~&|().,=])"
                       r"|(?P<word>[A-Za-z_][A-Za-z0-9_]*))")


def _fo_tokens(text):
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _FO_TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            raise FOSyntaxError("unexpected character at position %d" % pos)
        if match.group("sym"):
            out.append(("pred", match.group("sym"), match.group("sname"), match.start("sym")))
        elif match.group("op"):
            out.append(("op", match.group("op"), None, match.start("op")))
        else:
            out.append(("word", match.group("word"), None, match.start("word")))
        pos = match.end()
    out.append(("end", "", None, len(text)))
    return out


class _FOParser:
    def __init__(self, text):
        self.toks = _fo_tokens(text)
        self.idx = 0

    def peek(self):
        return self.toks[self.idx]

    def take(self, kind=None, value=None):
        tok = self.toks[self.idx]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            raise FOSyntaxError("expected %s at position %d, found %r"
                                % (value or kind, tok[3], tok[1]))
        self.idx += 1
        return tok

    def formula(self):
        kind, value = self.peek()[:2]
        if kind == "word" and value in ("forall", "exists"):
            self.take()
            var = self.take("word")[1]
            self.take("op", ".")
            body = self.formula()
            return (Forall if value == "forall" else Exists)(var, body)
        left = self.disjunction()
        if self.peek()[:2] == ("op", "->"):
            self.take()
            return FImplies(left, self.formula())
        return left

    def disjunction(self):
        out = self.conjunction()
        while self.peek()[:2] == ("op", "|"):
            self.take()
            out = FOr(out, self.conjunction())
        return out

    def conjunction(self):
        out = self.unary()
        while self.peek()[:2] == ("op", "&"):
            self.take()
            out = FAnd(out, self.unary())
        return out

    def unary(self):
        kind, value = self.peek()[:2]
        if (kind, value) == ("op", "~"):
            self.take()
            return FNot(self.unary())
        if (kind, value) == ("op", "("):
            self.take()
            inner = self.formula()
            self.take("op", ")")
            return inner
        if kind == "word" and value in ("forall", "exists"):
            return self.formula()
        if kind == "pred":
            tok = self.take()
            first = self.take("word")[1]
            if tok[1] == "P":
                self.take("op", ")")
                return PredP(tok[2], first)
            self.take("op", ",")
            second = self.take("word")[1]
            self.take("op", ")")
            return (RelR if tok[1] == "R" else RelD)(tok[2], first, second)
        if kind == "word" and value == "true":
            self.take()
            return FTrue()
        if kind == "word":
            left = self.take()[1]
            self.take("op", "=")
            return EqT(left, self.take("word")[1])
        raise FOSyntaxError("unexpected %r at position %d" % (value, self.peek()[3]))


def parse_fo(text):
    parser = _FOParser(text)
    out = parser.formula()
    if parser.peek()[0] != "end":
        tok = parser.peek()
        raise FOSyntaxError("unexpected %r at position %d" % (tok[1], tok[3]))
    return out
