"""Finite abstract and concrete hybrid data models.

An abstract model keeps, for every equality symbol, a partition of the
states; a concrete model instead maps (symbol, state) to a data value and
two states share data exactly when their values are equal.
"""

import enum
import json
import random
from collections import defaultdict

from .syntax import Signature


class UnassignedNominal(LookupError):
    def __init__(self, nominal):
        super().__init__("nominal %r is not assigned to any state" % nominal)
        self.nominal = nominal


class ModelClass(enum.Enum):
    ALL = "all"
    TREE = "tree"
    FOREST_MINUS = "forest-"

    @classmethod
    def parse(cls, text):
        for item in cls:
            if item.value == text.lower():
                return item
        raise ValueError("unknown model class %r" % text)


class Model:
    """Abstract hybrid data model.

    :param sig: the :class:`Signature`
    :param states: ordered state ids
    :param rel: modality -> iterable of (source, target)
    :param eq: equality symbol -> iterable of classes; states not listed
        for a symbol become singleton classes
    :param val: state -> iterable of propositions
    :param nom: nominal -> state (may be partial)
    """

    def __init__(self, sig, states, rel=None, eq=None, val=None, nom=None):
        self.sig = sig
        self.states = tuple(states)
        rel = rel or {}
        eq = eq or {}
        val = val or {}
        self.rel = {}
        for mod in sorted(set(sig.mods) | set(rel)):
            self.rel[mod] = frozenset(tuple(p) for p in rel.get(mod, ()))
        self.eq = {}
        for sym in sorted(set(sig.eqs) | set(eq)):
            classes = [tuple(c) for c in eq.get(sym, ())]
            listed = {s for c in classes for s in c}
            classes += [(s,) for s in self.states if s not in listed]
            self.eq[sym] = tuple(classes)
        self.val = {s: frozenset(val.get(s, ())) for s in self.states}
        for s in val:
            if s not in self.val:
                self.val[s] = frozenset(val[s])
        self.nom = dict(nom or {})
        self._index = None

    # -- derived lookup tables ------------------------------------------------
    def _build(self):
        succ = {m: defaultdict(list) for m in self.rel}
        pred = {m: defaultdict(list) for m in self.rel}
        order = {s: k for k, s in enumerate(self.states)}
        for m, pairs in self.rel.items():
            for a, b in sorted(pairs, key=lambda p: (order.get(p[0], -1), order.get(p[1], -1))):
                succ[m][a].append(b)
                pred[m][b].append(a)
        cls = {}
        for sym, classes in self.eq.items():
            table = {}
            for k, c in enumerate(classes):
                for s in c:
                    table.setdefault(s, k)
            cls[sym] = table
        self._index = (succ, pred, cls, order)

    @property
    def index(self):
        if self._index is None:
            self._build()
        return self._index

    def successors(self, mod, state):
        return self.index[0].get(mod, {}).get(state, [])

    def predecessors(self, mod, state):
        return self.index[1].get(mod, {}).get(state, [])

    def class_of(self, sym, state):
        return self.index[2][sym][state]

    def same_data(self, sym, a, b):
        table = self.index[2][sym]
        return table[a] == table[b]

    def position(self, state):
        return self.index[3][state]

    def nominal_target(self, name):
        try:
            return self.nom[name]
        except KeyError:
            raise UnassignedNominal(name) from None

    def holds(self, prop, state):
        return prop in self.val[state]

    def partition(self, sym):
        """The classes of ``sym`` as a set of frozensets."""
        return frozenset(frozenset(c) for c in self.eq[sym])

    # -- copies ------------------------------------------------------------------
    def replace(self, **changes):
        fields = dict(sig=self.sig, states=self.states, rel=self.rel,
                      eq=self.eq, val=self.val, nom=self.nom)
        fields.update(changes)
        return Model(**fields)

    def with_signature(self, sig):
        return self.replace(sig=sig)

    def totalize_nom(self, target=None):
        """Send every unassigned declared nominal to ``target``.

        ``target`` defaults to the first state.
        """
        target = self.states[0] if target is None else target
        nom = dict(self.nom)
        for name in sorted(self.sig.noms):
            nom.setdefault(name, target)
        return self.replace(nom=nom)

    def drop_nominals(self):
        """Same model over a signature without nominals."""
        sig = Signature(self.sig.props, (), self.sig.mods, self.sig.eqs)
        return self.replace(sig=sig, nom={})

    # -- comparison and serialisation ----------------------------------------------
    def canonical(self):
        return (self.sig, self.states,
                tuple(sorted((m, frozenset(p)) for m, p in self.rel.items())),
                tuple(sorted((e, self.partition(e)) for e in self.eq)),
                tuple(sorted(self.val.items())),
                tuple(sorted(self.nom.items())))

    def __eq__(self, other):
        return isinstance(other, Model) and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return "Model(%d states, mods=%s)" % (len(self.states), sorted(self.rel))

    def to_json(self):
        order = {s: k for k, s in enumerate(self.states)}

        def key(pair):
            return (order.get(pair[0], -1), order.get(pair[1], -1), pair)

        return {
            "signature": self.sig.to_json(),
            "states": list(self.states),
            "rel": {m: [list(p) for p in sorted(pairs, key=key)]
                    for m, pairs in sorted(self.rel.items())},
            "val": {s: sorted(ps) for s, ps in self.val.items() if ps},
            "nom": dict(sorted(self.nom.items())),
            "eq_classes": {e: [list(c) for c in classes if len(c) > 1]
                           for e, classes in sorted(self.eq.items())},
        }


class ConcreteModel:
    """Model whose data are explicit string values per (symbol, state)."""

    def __init__(self, sig, states, rel=None, data=None, val=None, nom=None):
        self.sig = sig
        self.states = tuple(states)
        self.rel = {m: frozenset(tuple(p) for p in (rel or {}).get(m, ()))
                    for m in sorted(set(sig.mods) | set(rel or {}))}
        self.data = dict(data or {})
        self.val = {s: frozenset((val or {}).get(s, ())) for s in self.states}
        self.nom = dict(nom or {})

    def value(self, sym, state):
        return self.data[(sym, state)]

    def to_json(self):
        by_sym = defaultdict(dict)
        for (sym, state), value in self.data.items():
            by_sym[sym][state] = value
        return {
            "signature": self.sig.to_json(),
            "states": list(self.states),
            "rel": {m: sorted(list(p) for p in pairs) for m, pairs in sorted(self.rel.items())},
            "val": {s: sorted(ps) for s, ps in self.val.items() if ps},
            "nom": dict(sorted(self.nom.items())),
            "data": {sym: dict(v) for sym, v in sorted(by_sym.items())},
        }


def validate(m):
    """Return a list of diagnostics; empty means the model is well formed."""
    out = ["signature: " + p for p in m.sig.problems()]
    if not m.states:
        out.append("model has no states")
    seen = set()
    for s in m.states:
        if s in seen:
            out.append("state %r listed twice" % (s,))
        seen.add(s)
    for mod, pairs in sorted(m.rel.items()):
        if mod not in m.sig.mods:
            out.append("relation for undeclared modality %r" % (mod,))
        for a, b in sorted(pairs):
            for s in (a, b):
                if s not in seen:
                    out.append("relation %r pair (%r, %r) names undeclared state %r"
                               % (mod, a, b, s))
    if isinstance(m, ConcreteModel):
        for sym in sorted(m.sig.eqs):
            for s in m.states:
                if (sym, s) not in m.data:
                    out.append("no %r data value for state %r" % (sym, s))
        for sym, s in sorted(m.data):
            if sym not in m.sig.eqs:
                out.append("data for undeclared equality symbol %r" % (sym,))
            if s not in seen:
                out.append("data for undeclared state %r" % (s,))
    else:
        for sym, classes in sorted(m.eq.items()):
            if sym not in m.sig.eqs:
                out.append("partition for undeclared equality symbol %r" % (sym,))
            owner = {}
            for k, c in enumerate(classes):
                for s in c:
                    if s not in seen:
                        out.append("%r class %d names undeclared state %r" % (sym, k, s))
                    elif s in owner:
                        out.append("state %r is in two %r classes (%d and %d)"
                                   % (s, sym, owner[s], k))
                    else:
                        owner[s] = k
    for s, props in sorted(m.val.items()):
        if s not in seen:
            out.append("valuation for undeclared state %r" % (s,))
        for p in sorted(props):
            if p not in m.sig.props:
                out.append("state %r carries undeclared proposition %r" % (s, p))
    for name, target in sorted(m.nom.items()):
        if name not in m.sig.noms:
            out.append("assignment for undeclared nominal %r" % (name,))
        if target not in seen:
            out.append("nominal %r points to undeclared state %r" % (name, target))
    return out


def abstract_of(c):
    eq = {}
    for sym in sorted(c.sig.eqs):
        groups = {}
        for s in c.states:
            groups.setdefault(c.data[(sym, s)], []).append(s)
        eq[sym] = list(groups.values())
    return Model(c.sig, c.states, c.rel, eq, c.val, c.nom)


def concretize(m):
    """Use the index of each data class as the data value."""
    data = {}
    for sym in sorted(m.eq):
        for s in m.states:
            data[(sym, s)] = "%s%d" % (sym, m.class_of(sym, s))
    return ConcreteModel(m.sig, m.states, m.rel, data, m.val, m.nom)


# -- structural classes ------------------------------------------------------------

def _graph(m, r):
    succ = {s: [] for s in m.states}
    indeg = {s: 0 for s in m.states}
    for a, b in m.rel.get(r, ()):
        succ[a].append(b)
        indeg[b] += 1
    return succ, indeg


def _acyclic(m, succ):
    colour = {s: 0 for s in m.states}
    for start in m.states:
        if colour[start]:
            continue
        stack = [(start, iter(succ[start]))]
        colour[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[node] = 2
                stack.pop()
            elif colour[nxt] == 1:
                return False
            elif colour[nxt] == 0:
                colour[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
    return True


def is_forest_minus(m, r):
    succ, indeg = _graph(m, r)
    return all(d <= 1 for d in indeg.values()) and _acyclic(m, succ)


def is_tree(m, r):
    succ, indeg = _graph(m, r)
    roots = [s for s in m.states if indeg[s] == 0]
    if len(roots) != 1 or any(d > 1 for d in indeg.values()):
        return False
    reached = {roots[0]}
    frontier = [roots[0]]
    while frontier:
        for nxt in succ[frontier.pop()]:
            if nxt not in reached:
                reached.add(nxt)
                frontier.append(nxt)
    return len(reached) == len(m.states) and _acyclic(m, succ)


def in_class(m, cls, r):
    if cls is ModelClass.TREE:
        return is_tree(m, r)
    if cls is ModelClass.FOREST_MINUS:
        return is_forest_minus(m, r)
    return True


def union_relation(m, name, parts):
    """Set ``rel(name)`` to the union of the relations in ``parts``.

    ``name`` is added to the signature when missing.
    """
    pairs = set()
    for part in parts:
        pairs |= m.rel.get(part, frozenset())
    rel = dict(m.rel)
    rel[name] = frozenset(pairs)
    sig = m.sig if name in m.sig.mods else m.sig.extend(mods=[name])
    return m.replace(sig=sig, rel=rel)


# -- generation --------------------------------------------------------------------

def random_model(sig, max_states, density=0.3, seed=0, min_states=1, rng=None):
    """Seeded random model over ``sig`` with every nominal assigned."""
    if max_states < 1:
        raise ValueError("max_states must be at least 1")
    rng = rng or random.Random(seed)
    size = rng.randint(min(min_states, max_states), max_states)
    states = ["s%d" % k for k in range(size)]
    rel = {}
    for mod in sorted(sig.mods):
        rel[mod] = [(a, b) for a in states for b in states if rng.random() < density]
    eq = {}
    for sym in sorted(sig.eqs):
        buckets = rng.randint(1, size)
        groups = defaultdict(list)
        for s in states:
            groups[rng.randrange(buckets)].append(s)
        eq[sym] = [groups[k] for k in sorted(groups)]
    val = {s: [p for p in sorted(sig.props) if rng.random() < 0.5] for s in states}
    nom = {n: rng.choice(states) for n in sorted(sig.noms)}
    return Model(sig, states, rel, eq, val, nom)


def random_tree(sig, max_states, r, seed=0, rng=None, density=0.3):
    """Random model whose ``r`` relation is a rooted tree with root ``s0``.

    Other modalities are random with the given density.
    """
    rng = rng or random.Random(seed)
    base = random_model(sig, max_states, density, rng=rng)
    states = base.states
    pairs = [(states[rng.randrange(k)], states[k]) for k in range(1, len(states))]
    rel = dict(base.rel)
    rel[r] = frozenset(pairs)
    sig2 = sig if r in sig.mods else sig.extend(mods=[r])
    return base.replace(sig=sig2, rel=rel)


# -- files -----------------------------------------------------------------------------

class ModelFileError(ValueError):
    pass


def model_from_json(data):
    """Build a :class:`Model` or :class:`ConcreteModel` from parsed JSON."""
    try:
        sig = Signature.from_json(data["signature"])
        states = list(data["states"])
    except (KeyError, TypeError) as exc:
        raise ModelFileError("model file needs 'signature' and 'states' (%s)" % exc)
    has_classes = "eq_classes" in data
    has_data = "data" in data
    if has_classes == has_data:
        raise ModelFileError("model file needs exactly one of 'eq_classes' or 'data'")
    rel = {m: [tuple(p) for p in pairs] for m, pairs in data.get("rel", {}).items()}
    for mod, pairs in rel.items():
        for p in pairs:
            if len(p) != 2:
                raise ModelFileError("relation %r has a pair of length %d" % (mod, len(p)))
    val = data.get("val", {})
    nom = data.get("nom", {})
    if has_data:
        flat = {(sym, s): str(v) for sym, table in data["data"].items()
                for s, v in table.items()}
        return ConcreteModel(sig, states, rel, flat, val, nom)
    return Model(sig, states, rel, data["eq_classes"], val, nom)


def load_model(path, abstract=True):
    """Read a model file; concrete models are abstracted unless asked not to."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFileError("%s: line %d column %d: %s"
                                 % (path, exc.lineno, exc.colno, exc.msg))
    out = model_from_json(data)
    problems = validate(out)
    if problems:
        raise ModelFileError("%s: %s" % (path, "; ".join(problems)))
    if abstract and isinstance(out, ConcreteModel):
        return abstract_of(out)
    return out


def save_model(m, path):
    with open(path, "w") as fh:
        json.dump(m.to_json(), fh, indent=2)
        fh.write("\n")
