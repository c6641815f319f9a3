"""Node and path expressions of hybrid XPath with data comparisons.

Expressions are immutable dataclasses.  Paths and node expressions are
mutually recursive: a path may contain a test ``?(node)`` and a node
expression may compare the endpoints of two paths.

The concrete grammar (whitespace-insensitive)::

    node ::= impl
    impl ::= disj ( "->" impl )?
    disj ::= conj ( "|" conj )*
    conj ::= neg ( "&" neg )*
    neg  ::= "!" neg | atom
    atom ::= "true" | "false" | IDENT | "'" NAME
           | "<" path cmp path ">" | "<" path ">" neg
           | "[" path "]" neg | "@" "'" NAME neg | "(" node ")"
    cmp  ::= "=" IDENT | "!=" IDENT
    path ::= seq ( "+" path )?
    seq  ::= step ( "/" seq )?
    step ::= IDENT | "@" "'" NAME | "?" "(" node ")" | "eps" | "(" path ")"

``/`` and ``+`` associate to the right.  ``(path)`` steps and nominal
names starting with a digit (``'0``) are extensions needed so that every
AST has a rendering that parses back to it.
"""

import re
from dataclasses import dataclass

KEYWORDS = frozenset({"true", "false", "eps"})
IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
NOMINAL_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class SyntaxErrorAt(ValueError):
    """Malformed input text; ``position`` is a character offset."""

    def __init__(self, message, position):
        super().__init__("%s at position %d" % (message, position))
        self.position = position


class UndeclaredSymbol(ValueError):
    def __init__(self, kind, name):
        super().__init__("undeclared %s %r" % (kind, name))
        self.kind = kind
        self.symbol = name


@dataclass(frozen=True)
class Signature:
    props: frozenset = frozenset()
    noms: frozenset = frozenset()
    mods: frozenset = frozenset()
    eqs: frozenset = frozenset()

    def __post_init__(self):
        for field in ("props", "noms", "mods", "eqs"):
            object.__setattr__(self, field, frozenset(getattr(self, field)))

    def problems(self):
        """List of human-readable invariant violations (empty when fine)."""
        out = []
        groups = [("props", self.props), ("noms", self.noms),
                  ("mods", self.mods), ("eqs", self.eqs)]
        for idx, (name, names) in enumerate(groups):
            for other, other_names in groups[idx + 1:]:
                for clash in sorted(names & other_names):
                    out.append("%r is both in %s and %s" % (clash, name, other))
            pattern = NOMINAL_RE if name == "noms" else IDENT_RE
            for item in sorted(names):
                if not isinstance(item, str) or not pattern.match(item):
                    out.append("bad %s name %r" % (name, item))
                elif name != "noms" and item in KEYWORDS:
                    out.append("%s name %r is a keyword" % (name, item))
        return out

    def extend(self, props=(), noms=(), mods=(), eqs=()):
        return Signature(self.props | set(props), self.noms | set(noms),
                         self.mods | set(mods), self.eqs | set(eqs))

    def union(self, other):
        return self.extend(other.props, other.noms, other.mods, other.eqs)

    def fresh_nominals(self, count, prefix="f", avoid=()):
        """Return ``count`` nominal names not in the signature or ``avoid``."""
        taken = set(self.noms) | set(avoid)
        out = []
        idx = 0
        while len(out) < count:
            name = "%s%d" % (prefix, idx)
            if name not in taken:
                out.append(name)
                taken.add(name)
            idx += 1
        return out

    def to_json(self):
        return {"props": sorted(self.props), "noms": sorted(self.noms),
                "mods": sorted(self.mods), "eqs": sorted(self.eqs)}

    @classmethod
    def from_json(cls, data):
        return cls(data.get("props", ()), data.get("noms", ()),
                   data.get("mods", ()), data.get("eqs", ()))


class Expr:
    """Common base of path and node expressions."""

    __slots__ = ()

    def __str__(self):
        return render(self)


class PathExpr(Expr):
    __slots__ = ()


class NodeExpr(Expr):
    __slots__ = ()
    sugar = False


# -- paths ---------------------------------------------------------------

@dataclass(frozen=True)
class Mod(PathExpr):
    name: str


@dataclass(frozen=True)
class At(PathExpr):
    nominal: str


@dataclass(frozen=True)
class Test(PathExpr):
    body: NodeExpr


@dataclass(frozen=True)
class Seq(PathExpr):
    first: PathExpr
    second: PathExpr


@dataclass(frozen=True)
class Union(PathExpr):
    left: PathExpr
    right: PathExpr


@dataclass(frozen=True)
class Eps(PathExpr):
    pass


# -- node expressions ----------------------------------------------------

@dataclass(frozen=True)
class Prop(NodeExpr):
    name: str


@dataclass(frozen=True)
class Nom(NodeExpr):
    name: str


@dataclass(frozen=True)
class Not(NodeExpr):
    body: NodeExpr


@dataclass(frozen=True)
class And(NodeExpr):
    left: NodeExpr
    right: NodeExpr


@dataclass(frozen=True)
class Eq(NodeExpr):
    left: PathExpr
    eq: str
    right: PathExpr


@dataclass(frozen=True)
class Neq(NodeExpr):
    left: PathExpr
    eq: str
    right: PathExpr


@dataclass(frozen=True)
class Or(NodeExpr):
    left: NodeExpr
    right: NodeExpr
    sugar = True


@dataclass(frozen=True)
class Implies(NodeExpr):
    left: NodeExpr
    right: NodeExpr
    sugar = True


@dataclass(frozen=True)
class Top(NodeExpr):
    sugar = True


@dataclass(frozen=True)
class Bot(NodeExpr):
    sugar = True


@dataclass(frozen=True)
class Diamond(NodeExpr):
    path: PathExpr
    body: NodeExpr
    sugar = True


@dataclass(frozen=True)
class Box(NodeExpr):
    path: PathExpr
    body: NodeExpr
    sugar = True


@dataclass(frozen=True)
class AtF(NodeExpr):
    nominal: str
    body: NodeExpr
    sugar = True


COMPARISONS = (Eq, Neq)


def is_comparison(expr):
    return isinstance(expr, COMPARISONS)


def conj(items):
    """Left-nested conjunction; the empty conjunction is ``Top``."""
    items = list(items)
    if not items:
        return Top()
    out = items[0]
    for item in items[1:]:
        out = And(out, item)
    return out


def disj(items):
    items = list(items)
    if not items:
        return Bot()
    out = items[0]
    for item in items[1:]:
        out = Or(out, item)
    return out


def seq(steps):
    """Right-nested composition of a non-empty list of paths."""
    steps = list(steps)
    out = steps[-1]
    for step in reversed(steps[:-1]):
        out = Seq(step, out)
    return out


def iff(left, right):
    return And(Implies(left, right), Implies(right, left))


# -- tokenizer -------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op>->|!=|[<>=!&|()\[\]@'/+?])
  | (?P<name>[A-Za-z0-9_]+)
""", re.VERBOSE)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise SyntaxErrorAt("unexpected character %r" % text[pos], pos)
        if match.lastgroup != "ws":
            tokens.append((match.group(), pos))
        pos = match.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, sig):
        self.tokens = _tokenize(text)
        self.idx = 0
        self.sig = sig

    def peek(self, ahead=0):
        return self.tokens[min(self.idx + ahead, len(self.tokens) - 1)][0]

    @property
    def pos(self):
        return self.tokens[self.idx][1]

    def take(self, expected=None):
        tok, pos = self.tokens[self.idx]
        if expected is not None and tok != expected:
            shown = repr(tok) if tok else "end of input"
            raise SyntaxErrorAt("expected %r, found %s" % (expected, shown), pos)
        if tok == "":
            raise SyntaxErrorAt("unexpected end of input", pos)
        self.idx += 1
        return tok

    def ident(self, kind):
        tok, pos = self.tokens[self.idx]
        if not IDENT_RE.match(tok) or tok in KEYWORDS:
            shown = repr(tok) if tok else "end of input"
            raise SyntaxErrorAt("expected %s name, found %s" % (kind, shown), pos)
        self.idx += 1
        self.declared(kind, tok)
        return tok

    def nominal(self):
        self.take("'")
        tok, pos = self.tokens[self.idx]
        if not NOMINAL_RE.match(tok):
            shown = repr(tok) if tok else "end of input"
            raise SyntaxErrorAt("expected nominal name, found %s" % shown, pos)
        self.idx += 1
        self.declared("nominal", tok)
        return tok

    def declared(self, kind, name):
        if self.sig is None:
            return
        pool = {"proposition": self.sig.props, "nominal": self.sig.noms,
                "modality": self.sig.mods, "equality symbol": self.sig.eqs}[kind]
        if name not in pool:
            raise UndeclaredSymbol(kind, name)

    # node grammar
    def node(self):
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.node())
        return left

    def disj(self):
        out = self.conj()
        while self.peek() == "|":
            self.take()
            out = Or(out, self.conj())
        return out

    def conj(self):
        out = self.neg()
        while self.peek() == "&":
            self.take()
            out = And(out, self.neg())
        return out

    def neg(self):
        if self.peek() == "!":
            self.take()
            return Not(self.neg())
        return self.atom()

    def atom(self):
        tok = self.peek()
        if tok == "true":
            self.take()
            return Top()
        if tok == "false":
            self.take()
            return Bot()
        if tok == "'":
            return Nom(self.nominal())
        if tok == "<":
            self.take()
            left = self.path()
            if self.peek() in ("=", "!="):
                op = self.take()
                eq = self.ident("equality symbol")
                right = self.path()
                self.take(">")
                return (Eq if op == "=" else Neq)(left, eq, right)
            self.take(">")
            return Diamond(left, self.neg())
        if tok == "[":
            self.take()
            path = self.path()
            self.take("]")
            return Box(path, self.neg())
        if tok == "@":
            self.take()
            name = self.nominal()
            return AtF(name, self.neg())
        if tok == "(":
            self.take()
            inner = self.node()
            self.take(")")
            return inner
        return Prop(self.ident("proposition"))

    # path grammar
    def path(self):
        left = self.seq()
        if self.peek() == "+":
            self.take()
            return Union(left, self.path())
        return left

    def seq(self):
        left = self.step()
        if self.peek() == "/":
            self.take()
            return Seq(left, self.seq())
        return left

    def step(self):
        tok = self.peek()
        if tok == "eps":
            self.take()
            return Eps()
        if tok == "@":
            self.take()
            return At(self.nominal())
        if tok == "?":
            self.take()
            self.take("(")
            body = self.node()
            self.take(")")
            return Test(body)
        if tok == "(":
            self.take()
            inner = self.path()
            self.take(")")
            return inner
        return Mod(self.ident("modality"))


def parse(text, kind="node", sig=None):
    """Parse ``text`` as a node (default) or path expression.

    When ``sig`` is given every identifier must be declared in it.
    """
    parser = _Parser(text, sig)
    if kind == "node":
        out = parser.node()
    elif kind == "path":
        out = parser.path()
    else:
        raise ValueError("kind must be 'node' or 'path', not %r" % (kind,))
    if parser.peek() != "":
        raise SyntaxErrorAt("unexpected %r" % parser.peek(), parser.pos)
    return out


def parse_node(text, sig=None):
    return parse(text, "node", sig)


def parse_path(text, sig=None):
    return parse(text, "path", sig)


# -- rendering ---------------------------------------------------------------

def render(expr):
    if isinstance(expr, PathExpr):
        return _render_path(expr, 0)
    return _render_node(expr, 0)


def _wrap(text, needed):
    return "(" + text + ")" if needed else text


def _render_node(x, level):
    if isinstance(x, Prop):
        return x.name
    if isinstance(x, Nom):
        return "'" + x.name
    if isinstance(x, Top):
        return "true"
    if isinstance(x, Bot):
        return "false"
    if isinstance(x, Not):
        return "!" + _render_node(x.body, 3)
    if isinstance(x, And):
        text = _render_node(x.left, 2) + " & " + _render_node(x.right, 3)
        return _wrap(text, level > 2)
    if isinstance(x, Or):
        text = _render_node(x.left, 1) + " | " + _render_node(x.right, 2)
        return _wrap(text, level > 1)
    if isinstance(x, Implies):
        text = _render_node(x.left, 1) + " -> " + _render_node(x.right, 0)
        return _wrap(text, level > 0)
    if isinstance(x, (Eq, Neq)):
        op = "=" if isinstance(x, Eq) else "!="
        return "< %s %s %s %s >" % (_render_path(x.left, 0), op, x.eq,
                                  _render_path(x.right, 0))
    if isinstance(x, Diamond):
        return "<%s> %s" % (_render_path(x.path, 0), _render_node(x.body, 3))
    if isinstance(x, Box):
        return "[%s] %s" % (_render_path(x.path, 0), _render_node(x.body, 3))
    if isinstance(x, AtF):
        return "@'%s %s" % (x.nominal, _render_node(x.body, 3))
    raise TypeError("not a node expression: %r" % (x,))


def _render_path(x, level):
    if isinstance(x, Mod):
        return x.name
    if isinstance(x, At):
        return "@'" + x.nominal
    if isinstance(x, Eps):
        return "eps"
    if isinstance(x, Test):
        return "?(" + _render_node(x.body, 0) + ")"
    if isinstance(x, Seq):
        text = _render_path(x.first, 2) + "/" + _render_path(x.second, 1)
        return _wrap(text, level > 1)
    if isinstance(x, Union):
        text = _render_path(x.left, 1) + " + " + _render_path(x.right, 0)
        return _wrap(text, level > 0)
    raise TypeError("not a path expression: %r" % (x,))


# -- traversal helpers ---------------------------------------------------------

def children(x):
    """Immediate sub-expressions, in left-to-right order."""
    if isinstance(x, (Not, Test)):
        return (x.body,)
    if isinstance(x, (And, Or, Implies, Union)):
        return (x.left, x.right)
    if isinstance(x, (Eq, Neq)):
        return (x.left, x.right)
    if isinstance(x, Seq):
        return (x.first, x.second)
    if isinstance(x, (Diamond, Box)):
        return (x.path, x.body)
    if isinstance(x, AtF):
        return (x.body,)
    return ()


def postorder(x):
    """All sub-expression occurrences, children before parents."""
    out = []
    stack = [(x, False)]
    while stack:
        item, expanded = stack.pop()
        if expanded:
            out.append(item)
            continue
        stack.append((item, True))
        for child in reversed(children(item)):
            stack.append((child, False))
    return out


def symbols_of(x):
    """Signature containing exactly the symbols used by ``x``."""
    props, noms, mods, eqs = set(), set(), set(), set()
    for item in postorder(x):
        if isinstance(item, Prop):
            props.add(item.name)
        elif isinstance(item, Nom):
            noms.add(item.name)
        elif isinstance(item, (At, AtF)):
            noms.add(item.nominal)
        elif isinstance(item, Mod):
            mods.add(item.name)
        elif isinstance(item, (Eq, Neq)):
            eqs.add(item.eq)
    return Signature(props, noms, mods, eqs)


def nominals_of(x):
    return set(symbols_of(x).noms)


def props_of(x):
    return set(symbols_of(x).props)


def is_pure(x):
    """True when no proposition symbol occurs.

    ``true``/``false`` count as pure since ``'i | !'i`` defines them.
    """
    return not any(isinstance(item, Prop) for item in postorder(x))


def substitute_nominals(x, mapping):
    """Simultaneously rename nominals according to ``mapping``."""
    if not mapping:
        return x
    return _map(x, lambda name: mapping.get(name, name))


def _map(x, rename):
    if isinstance(x, Nom):
        return Nom(rename(x.name))
    if isinstance(x, At):
        return At(rename(x.nominal))
    if isinstance(x, AtF):
        return AtF(rename(x.nominal), _map(x.body, rename))
    if isinstance(x, (Prop, Mod, Eps, Top, Bot)):
        return x
    if isinstance(x, (Not, Test)):
        return type(x)(_map(x.body, rename))
    if isinstance(x, (And, Or, Implies, Union)):
        return type(x)(_map(x.left, rename), _map(x.right, rename))
    if isinstance(x, (Eq, Neq)):
        return type(x)(_map(x.left, rename), x.eq, _map(x.right, rename))
    if isinstance(x, Seq):
        return Seq(_map(x.first, rename), _map(x.second, rename))
    if isinstance(x, (Diamond, Box)):
        return type(x)(_map(x.path, rename), _map(x.body, rename))
    raise TypeError("not an expression: %r" % (x,))


# -- abbreviations -------------------------------------------------------------

def top_atom(x, sig=None):
    """The atom used to spell out ``true`` as ``a | !a`` when desugaring ``x``."""
    used = symbols_of(x)
    for pool, make in ((used.props, Prop), (used.noms, Nom)):
        if pool:
            return make(min(pool))
    if sig is not None:
        for pool, make in ((sig.props, Prop), (sig.noms, Nom)):
            if pool:
                return make(min(pool))
    return Prop("p")


def desugar(x, e0, sig=None, atom=None):
    """Rewrite ``x`` into the core language.

    The result only uses Prop, Nom, Not, And, Eq, Neq, Mod, At, Test and
    Seq.  Diamonds become reflexive comparisons under ``e0``, unions inside
    comparisons are distributed into disjunctions, and ``true`` becomes
    ``atom | !atom`` (see :func:`top_atom`).
    """
    if atom is None:
        atom = top_atom(x, sig)
    return _Desugarer(e0, atom).node(x)


class _Desugarer:
    def __init__(self, e0, atom):
        self.e0 = e0
        self.top = Not(And(Not(atom), Not(Not(atom))))

    def node(self, x):
        if isinstance(x, (Prop, Nom)):
            return x
        if isinstance(x, Top):
            return self.top
        if isinstance(x, Bot):
            return Not(self.top)
        if isinstance(x, Not):
            return Not(self.node(x.body))
        if isinstance(x, And):
            return And(self.node(x.left), self.node(x.right))
        if isinstance(x, Or):
            return Not(And(Not(self.node(x.left)), Not(self.node(x.right))))
        if isinstance(x, Implies):
            return Not(And(self.node(x.left), Not(self.node(x.right))))
        if isinstance(x, (Eq, Neq)):
            return self.compare(type(x), x.left, x.eq, x.right)
        if isinstance(x, Diamond):
            return self.diamond(x.path, x.body)
        if isinstance(x, Box):
            return Not(self.diamond(x.path, Not(x.body)))
        if isinstance(x, AtF):
            return self.diamond(At(x.nominal), x.body)
        raise TypeError("not a node expression: %r" % (x,))

    def diamond(self, path, body):
        full = Seq(path, Test(body))
        return self.compare(Eq, full, self.e0, full)

    def compare(self, kind, left, eq, right):
        pairs = [kind(l, eq, r) for l in self.branches(left)
                 for r in self.branches(right)]
        out = pairs[0]
        for item in pairs[1:]:
            out = Not(And(Not(out), Not(item)))
        return out

    def branches(self, path):
        """Union-free alternatives of ``path`` (desugared)."""
        if isinstance(path, (Mod, At)):
            return [path]
        if isinstance(path, Eps):
            return [Test(self.top)]
        if isinstance(path, Test):
            return [Test(self.node(path.body))]
        if isinstance(path, Union):
            return self.branches(path.left) + self.branches(path.right)
        if isinstance(path, Seq):
            return [Seq(a, b) for a in self.branches(path.first)
                    for b in self.branches(path.second)]
        raise TypeError("not a path expression: %r" % (path,))


def diamond_top(path):
    """The formula ``<path> true`` as stored in subformula sets."""
    return Diamond(path, Top())


# -- paths as step lists -----------------------------------------------------------

def path_steps(path):
    """Flatten compositions into a list of non-composite steps."""
    if isinstance(path, Seq):
        return path_steps(path.first) + path_steps(path.second)
    return [path]


def normalize_path(path):
    """Right-nested composition whose heads are single steps.

    ``eps`` becomes ``?(true)``; tests and union branches are normalised
    recursively.
    """
    steps = []
    for step in path_steps(path):
        if isinstance(step, Eps):
            steps.append(Test(Top()))
        elif isinstance(step, Test):
            steps.append(Test(normalize_node(step.body)))
        elif isinstance(step, Union):
            steps.append(Union(normalize_path(step.left),
                               normalize_path(step.right)))
        else:
            steps.append(step)
    return seq(steps)


def normalize_node(x):
    """Apply :func:`normalize_path` to every path inside ``x``."""
    if isinstance(x, (Prop, Nom, Top, Bot)):
        return x
    if isinstance(x, Not):
        return Not(normalize_node(x.body))
    if isinstance(x, (And, Or, Implies)):
        return type(x)(normalize_node(x.left), normalize_node(x.right))
    if isinstance(x, (Eq, Neq)):
        return type(x)(normalize_path(x.left), x.eq, normalize_path(x.right))
    if isinstance(x, (Diamond, Box)):
        return type(x)(normalize_path(x.path), normalize_node(x.body))
    if isinstance(x, AtF):
        return AtF(x.nominal, normalize_node(x.body))
    raise TypeError("not a node expression: %r" % (x,))


# -- metrics ---------------------------------------------------------------------

def modal_depth(x):
    """Nesting depth of modality steps; ``@`` jumps and tests add nothing."""
    if isinstance(x, PathExpr):
        return _path_depth(x, 0)
    if isinstance(x, (Prop, Nom, Top, Bot)):
        return 0
    if isinstance(x, Not):
        return modal_depth(x.body)
    if isinstance(x, (And, Or, Implies)):
        return max(modal_depth(x.left), modal_depth(x.right))
    if isinstance(x, (Eq, Neq)):
        return max(_path_depth(x.left, 0), _path_depth(x.right, 0))
    if isinstance(x, (Diamond, Box)):
        return _path_depth(x.path, modal_depth(x.body))
    if isinstance(x, AtF):
        return modal_depth(x.body)
    raise TypeError("not an expression: %r" % (x,))


def _path_depth(path, after):
    """Depth of ``path`` followed by something of depth ``after``."""
    if isinstance(path, Mod):
        return 1 + after
    if isinstance(path, (At, Eps)):
        return after
    if isinstance(path, Test):
        return max(modal_depth(path.body), after)
    if isinstance(path, Seq):
        return _path_depth(path.first, _path_depth(path.second, after))
    if isinstance(path, Union):
        return max(_path_depth(path.left, after), _path_depth(path.right, after))
    raise TypeError("not a path expression: %r" % (path,))


_TOP_SIZE = 2  # |p | !p| = |p| + |!p|


def expr_size(x):
    if isinstance(x, Mod):
        return 2
    if isinstance(x, (At, Prop, Nom)):
        return 1
    if isinstance(x, Test):
        return 1 + expr_size(x.body)
    if isinstance(x, Eps):
        return 1 + _TOP_SIZE
    if isinstance(x, (Seq, Union)):
        return sum(expr_size(c) for c in children(x))
    if isinstance(x, (Top, Bot)):
        return _TOP_SIZE
    if isinstance(x, Not):
        return expr_size(x.body)
    if isinstance(x, (And, Or, Implies, Eq, Neq)):
        return expr_size(x.left) + expr_size(x.right)
    if isinstance(x, (Diamond, Box)):
        return 2 * (expr_size(x.path) + 1 + expr_size(x.body))
    if isinstance(x, AtF):
        return 2 * (2 + expr_size(x.body))
    raise TypeError("not an expression: %r" % (x,))


def subformulas(x):
    """Subformula set, recording ``<suffix> true`` for every path suffix."""
    out = set()
    _sub_node(x, out)
    return out


def _sub_node(x, out):
    out.add(x)
    if isinstance(x, (Not, And, Or, Implies)):
        for child in children(x):
            _sub_node(child, out)
    elif isinstance(x, (Eq, Neq)):
        _sub_path(path_steps(normalize_path(x.left)), out)
        _sub_path(path_steps(normalize_path(x.right)), out)
    elif isinstance(x, Diamond):
        _sub_path(path_steps(normalize_path(Seq(x.path, Test(x.body)))), out)
    elif isinstance(x, Box):
        _sub_node(Diamond(x.path, Not(x.body)), out)
    elif isinstance(x, AtF):
        _sub_path([At(x.nominal), Test(x.body)], out)


def _sub_path(steps, out):
    for idx, step in enumerate(steps):
        out.add(diamond_top(seq(steps[idx:])))
        if isinstance(step, Test):
            _sub_node(step.body, out)
        elif isinstance(step, At):
            out.add(Nom(step.nominal))
        elif isinstance(step, Union):
            rest = steps[idx + 1:]
            _sub_path(path_steps(step.left) + rest, out)
            _sub_path(path_steps(step.right) + rest, out)
            return
