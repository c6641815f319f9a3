"""Bounded satisfiability and the Lin(n) family.

For each size ``n = 1..k`` the question "is there an ``n``-state model of
the class where φ holds" is encoded as CNF and handed to a CDCL solver.
Tree and forest⁻ shapes are enumerated outside the solver with parents
numbered before children (the root of a tree is state 0), so the solver
only picks edge labels, data classes, valuations and nominals.
"""

import itertools
from dataclasses import dataclass

from pysat.formula import IDPool
from pysat.solvers import Solver

from .evaluation import eval_node
from .model import Model, ModelClass, in_class, union_relation
from .syntax import (And, At, AtF, Bot, Box, Diamond, Eps, Eq, Implies, Mod,
                     Neq, Nom, Not, Or, Prop, Seq, Signature, Test, Top, Union,
                     conj, symbols_of)

SOLVER = "m22"


@dataclass
class Sat:
    model: Model
    state: str
    size: int

    def __bool__(self):
        return True


@dataclass
class UnsatUpTo:
    bound: int

    def __bool__(self):
        return False


@dataclass
class BudgetExceeded:
    bound: int          # largest size fully searched
    budget: int

    def __bool__(self):
        return False


class Countermodel(Sat):
    """A model and state where the formula fails."""


class ValidUpTo(UnsatUpTo):
    """No countermodel with at most ``bound`` states."""


def tree_relation(sig):
    """Name of the relation whose shape the tree classes constrain.

    One modality: that modality.  Several: their union (read as the
    defined modality ``a`` with ``<a> true <-> <b1 + ... + bn> true``).
    """
    mods = sorted(sig.mods)
    return mods[0] if len(mods) == 1 else None


# -- shapes -----------------------------------------------------------------------------

def _shapes(n, cls, has_mods):
    """Parent arrays (``None`` for roots); ``None`` means unconstrained."""
    if cls is ModelClass.ALL:
        yield None
        return
    if not has_mods:
        # without modalities every model is edgeless: a tree only when n == 1
        if cls is ModelClass.FOREST_MINUS or n == 1:
            yield (None,) * n
        return
    if cls is ModelClass.TREE:
        ranges = [range(v) for v in range(1, n)]
        for parents in itertools.product(*ranges):
            yield (None,) + parents
        return
    ranges = [[None] + list(range(v)) for v in range(n)]
    yield from itertools.product(*ranges)


# -- encoding ------------------------------------------------------------------------

class _Encoder:
    def __init__(self, sig, n):
        self.sig = sig
        self.n = n
        self.pool = IDPool()
        self.clauses = []
        self.true = self.pool.id(("true",))
        self.clauses.append([self.true])
        self.node_cache = {}
        self.path_cache = {}
        for i in sorted(sig.noms):
            cells = [self.nom(i, x) for x in range(n)]
            self.clauses.append(cells)
            for a, b in itertools.combinations(cells, 2):
                self.clauses.append([-a, -b])
        for e in sorted(sig.eqs):
            for x, y, z in itertools.permutations(range(n), 3):
                self.clauses.append([-self.eq(e, x, y), -self.eq(e, y, z), self.eq(e, x, z)])

    # base variables
    def rel(self, a, x, y):
        return self.pool.id(("R", a, x, y))

    def prop(self, p, x):
        return self.pool.id(("P", p, x))

    def nom(self, i, x):
        return self.pool.id(("N", i, x))

    def eq(self, e, x, y):
        if x == y:
            return self.true
        lo, hi = min(x, y), max(x, y)
        return self.pool.id(("E", e, lo, hi))

    # Tseitin helpers
    def _and(self, lits):
        lits = [l for l in lits if l != self.true]
        if any(l == -self.true for l in lits):
            return -self.true
        if not lits:
            return self.true
        if len(lits) == 1:
            return lits[0]
        v = self.pool.id(("and",) + tuple(sorted(lits)))
        for l in lits:
            self.clauses.append([-v, l])
        self.clauses.append([v] + [-l for l in lits])
        return v

    def _or(self, lits):
        return -self._and([-l for l in lits])

    # expressions
    def node(self, x, s):
        key = (x, s)
        if key not in self.node_cache:
            self.node_cache[key] = self._node(x, s)
        return self.node_cache[key]

    def _node(self, x, s):
        n = range(self.n)
        if isinstance(x, Top):
            return self.true
        if isinstance(x, Bot):
            return -self.true
        if isinstance(x, Prop):
            return self.prop(x.name, s)
        if isinstance(x, Nom):
            return self.nom(x.name, s)
        if isinstance(x, Not):
            return -self.node(x.body, s)
        if isinstance(x, And):
            return self._and([self.node(x.left, s), self.node(x.right, s)])
        if isinstance(x, Or):
            return self._or([self.node(x.left, s), self.node(x.right, s)])
        if isinstance(x, Implies):
            return self._or([-self.node(x.left, s), self.node(x.right, s)])
        if isinstance(x, Diamond):
            return self._or([self._and([self.path(x.path, s, t), self.node(x.body, t)]) for t in n])
        if isinstance(x, Box):
            return self._and([self._or([-self.path(x.path, s, t), self.node(x.body, t)]) for t in n])
        if isinstance(x, AtF):
            return self._or([self._and([self.nom(x.nominal, t), self.node(x.body, t)]) for t in n])
        if isinstance(x, (Eq, Neq)):
            sign = 1 if isinstance(x, Eq) else -1
            return self._or([self._and([self.path(x.left, s, t), self.path(x.right, s, u),
                                        sign * self.eq(x.eq, t, u)])
                             for t in n for u in n])
        raise TypeError("not a node expression: %r" % (x,))

    def path(self, x, s, t):
        key = (x, s, t)
        if key not in self.path_cache:
            self.path_cache[key] = self._path(x, s, t)
        return self.path_cache[key]

    def _path(self, x, s, t):
        if isinstance(x, Mod):
            return self.rel(x.name, s, t)
        if isinstance(x, At):
            return self.nom(x.nominal, t)
        if isinstance(x, Eps):
            return self.true if s == t else -self.true
        if isinstance(x, Test):
            return self.node(x.body, s) if s == t else -self.true
        if isinstance(x, Union):
            return self._or([self.path(x.left, s, t), self.path(x.right, s, t)])
        if isinstance(x, Seq):
            return self._or([self._and([self.path(x.first, s, u), self.path(x.second, u, t)])
                             for u in range(self.n)])
        raise TypeError("not a path expression: %r" % (x,))

    def shape(self, parents):
        mods = sorted(self.sig.mods)
        out = []
        for x in range(self.n):
            for y in range(self.n):
                edge = parents[y] == x
                lits = [self.rel(a, x, y) for a in mods]
                if edge:
                    out.append(lits)
                else:
                    out.extend([-l] for l in lits)
        return out

    def decode(self, values, states):
        sig = self.sig
        rng = range(self.n)
        rel = {a: [(states[x], states[y]) for x in rng for y in rng
                   if values.get(self.rel(a, x, y), False)] for a in sorted(sig.mods)}
        eq = {}
        for e in sorted(sig.eqs):
            classes, seen = [], set()
            for x in rng:
                if x in seen:
                    continue
                cls = [y for y in rng if y == x or values.get(self.eq(e, x, y), False)]
                seen.update(cls)
                classes.append([states[y] for y in cls])
            eq[e] = classes
        val = {states[x]: [p for p in sorted(sig.props) if values.get(self.prop(p, x), False)]
               for x in rng}
        nom = {i: states[x] for i in sorted(sig.noms) for x in rng
               if values.get(self.nom(i, x), False)}
        return Model(sig, states, rel, eq, val, nom)


def _search_sig(phi, sig):
    used = symbols_of(phi)
    if sig is None:
        return used
    return Signature(used.props, used.noms, set(used.mods) | set(sig.mods), used.eqs)


def sat_bounded(phi, k, cls=ModelClass.ALL, sig=None, budget=None):
    """Look for a model of at most ``k`` states in ``cls`` where ``phi`` holds.

    Only the symbols of ``phi`` are interpreted; the modalities of ``sig``
    are added so that tree shapes account for all of them.  ``budget``
    bounds the total number of solver conflicts.  Sizes are tried from 1
    upwards, so a returned model is as small as possible.  For the class
    ALL the evaluation point is state 0; in the tree classes it may be
    any state.
    """
    if k < 1:
        raise ValueError("the size bound must be at least 1")
    if isinstance(cls, str):
        cls = ModelClass.parse(cls)
    search = _search_sig(phi, sig)
    spent = 0
    for n in range(1, k + 1):
        states = tuple("s%d" % x for x in range(n))
        for parents in _shapes(n, cls, bool(search.mods)):
            enc = _Encoder(search, n)
            if cls is ModelClass.ALL:
                goal = [[enc.node(phi, 0)]]
            else:
                goal = [[enc.node(phi, x) for x in range(n)]]
            shape = enc.shape(parents) if parents is not None else []
            with Solver(name=SOLVER, bootstrap_with=enc.clauses + shape + goal) as solver:
                if budget is None:
                    found = solver.solve()
                else:
                    left = budget - spent
                    if left <= 0:
                        return BudgetExceeded(n - 1, budget)
                    solver.conf_budget(left)
                    found = solver.solve_limited()
                    spent += solver.accum_stats().get("conflicts", 0)
                    if found is None:
                        return BudgetExceeded(n - 1, budget)
                if found:
                    values = {abs(l): l > 0 for l in solver.get_model()}
                    m = enc.decode(values, states)
                    point = next(states[x] for x in range(n)
                                 if _holds(values, enc.node(phi, x)))
                    _certify(m, point, phi, cls)
                    return Sat(m, point, n)
    return UnsatUpTo(k)


def _holds(values, lit):
    return values.get(abs(lit), False) == (lit > 0)


def _certify(m, s, phi, cls):
    r = tree_relation(m.sig)
    if r is None and m.sig.mods:
        name = "_".join(sorted(m.sig.mods)) + "_union"
        check = union_relation(m, name, sorted(m.sig.mods))
        ok = in_class(check, cls, name)
    elif r is None:
        ok = cls is ModelClass.ALL or len(m.states) == 1 or cls is ModelClass.FOREST_MINUS
    else:
        ok = in_class(m, cls, r)
    if not ok or not eval_node(m, s, phi):
        raise AssertionError("solver model fails its own certificate")


def valid_bounded(phi, k, cls=ModelClass.ALL, sig=None, budget=None):
    """Search for a countermodel of ``phi`` with at most ``k`` states."""
    out = sat_bounded(Not(phi), k, cls, sig, budget)
    if isinstance(out, Sat):
        return Countermodel(out.model, out.state, out.size)
    if isinstance(out, UnsatUpTo):
        return ValidUpTo(out.bound)
    return out


# -- the Lin(n) family ---------------------------------------------------------------

def only(n, k):
    """``@k`` of the conjunction of ``!j`` for every ``j <= n`` other than ``k``."""
    return AtF(str(k), conj([Not(Nom(str(j))) for j in range(n + 1) if j != k]))


def lin_formula(n, sig=None, mod="a"):
    """A chain ``n -> n-1 -> ... -> 0`` of pairwise distinct named states."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if sig is not None:
        missing = [str(j) for j in range(n + 1) if str(j) not in sig.noms]
        if missing:
            raise ValueError("signature lacks nominals %s" % ", ".join(missing))
    steps = [AtF(str(i), Diamond(Mod(mod), Nom(str(i - 1)))) for i in range(1, n + 1)]
    return conj(steps + [only(n, k) for k in range(n + 1)])


def lin_prefix(n, mod="a"):
    """``Lin(0) & ... & Lin(n)``."""
    return conj([lin_formula(m, mod=mod) for m in range(n + 1)])
