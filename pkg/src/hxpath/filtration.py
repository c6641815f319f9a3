"""Closed formula sets, Σ-equivalence and smallest filtrations.

A closed set is stored with every ``<α> true`` member kept as a
``Diamond(α, Top)`` atom.  Other sugar in a seed is first rewritten into
that shape (``<α>φ`` as ``<α/?(φ)> true``, ``@i φ`` as ``<@i/?(φ)> true``)
so no equality symbol is needed to close a set.
"""

from dataclasses import dataclass, field

from .evaluation import _Evaluator, check_nominals
from .model import Model
from .syntax import (And, At, AtF, Bot, Box, Diamond, Eq, Implies, Mod, Neq,
                     Nom, Not, Or, Prop, Seq, Test, Top, Union, normalize_path)


class FiltrationDataError(ValueError):
    """The data clause of a filtration depends on the chosen representatives."""

    def __init__(self, eq, witness):
        rep, other = witness
        super().__init__(
            "data relation %r is not well defined on classes: %s and %s are "
            "Σ-equivalent but not %r-related" % (eq, rep, other, eq))
        self.eq = eq
        self.witness = witness


def _core(x):
    """Rewrite sugar (other than ``<α> true``) into closure-friendly form."""
    if isinstance(x, (Prop, Nom, Top)):
        return x
    if isinstance(x, Bot):
        return Not(Top())
    if isinstance(x, Not):
        return Not(_core(x.body))
    if isinstance(x, And):
        return And(_core(x.left), _core(x.right))
    if isinstance(x, Or):
        return Not(And(Not(_core(x.left)), Not(_core(x.right))))
    if isinstance(x, Implies):
        return Not(And(_core(x.left), Not(_core(x.right))))
    if isinstance(x, (Eq, Neq)):
        return type(x)(_core_path(x.left), x.eq, _core_path(x.right))
    if isinstance(x, Diamond):
        if isinstance(x.body, Top):
            return Diamond(_core_path(x.path), Top())
        return Diamond(_core_path(Seq(x.path, Test(x.body))), Top())
    if isinstance(x, Box):
        return Not(_core(Diamond(x.path, Not(x.body))))
    if isinstance(x, AtF):
        return _core(Diamond(At(x.nominal), x.body))
    raise TypeError("not a node expression: %r" % (x,))


def _core_path(path):
    path = normalize_path(path)
    return _map_tests(path)


def _map_tests(path):
    if isinstance(path, Test):
        return Test(_core(path.body))
    if isinstance(path, Seq):
        return Seq(_map_tests(path.first), _map_tests(path.second))
    if isinstance(path, Union):
        return Union(_map_tests(path.left), _map_tests(path.right))
    return path


def _required(x):
    """Members that the closure clauses demand once ``x`` is present."""
    if isinstance(x, Not):
        return [x.body]
    if isinstance(x, And):
        return [x.left, x.right]
    if isinstance(x, (Eq, Neq)):
        return [Diamond(x.left, Top()), Diamond(x.right, Top())]
    if isinstance(x, Diamond) and isinstance(x.body, Top):
        p = x.path
        if isinstance(p, Test):
            return [p.body]
        if isinstance(p, At):
            return [Nom(p.nominal)]
        if isinstance(p, (Seq, Union)):
            a, b = (p.first, p.second) if isinstance(p, Seq) else (p.left, p.right)
            return [Diamond(a, Top()), Diamond(b, Top())]
    return []


@dataclass(frozen=True)
class ClosedSet:
    formulas: frozenset = field(default_factory=frozenset)

    def __iter__(self):
        return iter(sorted(self.formulas, key=repr))

    def __len__(self):
        return len(self.formulas)

    def __contains__(self, x):
        return x in self.formulas

    def violations(self):
        """``(member, missing)`` pairs for every unmet closure clause."""
        out = []
        for x in self:
            for need in _required(x):
                if need not in self.formulas:
                    out.append((x, need))
        return out

    def is_closed(self):
        return not self.violations()


def closure(seed):
    """Least closed superset of ``seed``."""
    if isinstance(seed, ClosedSet):
        return seed
    todo = [_core(x) for x in seed]
    done = set()
    while todo:
        x = todo.pop()
        if x in done:
            continue
        done.add(x)
        todo.extend(_required(x))
    return ClosedSet(frozenset(done))


def _as_closed(sigma):
    return sigma if isinstance(sigma, ClosedSet) else closure(sigma)


def sigma_partition(m, sigma):
    """Classes of states agreeing on every member of Σ, in model order."""
    sigma = _as_closed(sigma)
    members = list(sigma)
    for x in members:
        check_nominals(m, x)
    ev = _Evaluator(m)
    groups = {}
    for s in m.states:
        profile = tuple(ev.node(s, x) for x in members)
        groups.setdefault(profile, []).append(s)
    return [tuple(g) for g in sorted(groups.values(), key=lambda g: m.position(g[0]))]


def smallest_filtration(m, sigma):
    """Quotient of ``m`` by Σ-equivalence with existential relations.

    Each class is named by its least member.  Returns ``(f, mapping)``
    where ``mapping`` sends every state to its class.  Raises
    :class:`FiltrationDataError` when some equality symbol cannot be
    lifted to classes independently of the representatives.
    """
    classes = sigma_partition(m, sigma)
    mapping = {s: c[0] for c in classes for s in c}
    states = [c[0] for c in classes]
    rel = {mod: {(mapping[a], mapping[b]) for a, b in pairs}
           for mod, pairs in m.rel.items()}
    eq = {}
    for sym in m.eq:
        for c in classes:
            odd = [s for s in c if not m.same_data(sym, c[0], s)]
            if odd:
                raise FiltrationDataError(sym, (c[0], odd[0]))
        groups = {}
        for c in classes:
            groups.setdefault(m.class_of(sym, c[0]), []).append(c[0])
        eq[sym] = [tuple(g) for g in groups.values()]
    val = {c[0]: m.val[c[0]] for c in classes}
    nom = {name: mapping[t] for name, t in m.nom.items()}
    return Model(m.sig, states, rel, eq, val, nom), mapping


@dataclass
class FiltrationReport:
    """Failures per filtration bullet (1..6); empty lists mean pass."""

    failures: dict

    def passed(self, bullet):
        return not self.failures[bullet]

    @property
    def certified(self):
        return all(not v for v in self.failures.values())

    def summary(self):
        return {k: ("pass" if not v else "fail: %s" % (v[0],))
                for k, v in sorted(self.failures.items())}


def filtration_check(m, f, mapping, sigma):
    """Check each bullet of the filtration definition for ``f``."""
    sigma = _as_closed(sigma)
    fails = {k: [] for k in range(1, 7)}
    members = {}
    for s in m.states:
        members.setdefault(mapping[s], []).append(s)

    # 1: the states of f are exactly the Σ-classes
    expected = {frozenset(c) for c in sigma_partition(m, sigma)}
    got = {frozenset(v) for v in members.values()}
    if got != expected:
        fails[1].append(("classes differ", sorted(map(sorted, got ^ expected))))
    stray = set(f.states) - set(members)
    if stray:
        fails[1].append(("states without members", sorted(stray)))

    # 2: edges of m survive
    for mod, pairs in sorted(m.rel.items()):
        have = f.rel.get(mod, frozenset())
        for a, b in sorted(pairs):
            if (mapping[a], mapping[b]) not in have:
                fails[2].append((mod, a, b))

    # 3: class edges are backed from every member, for <a> true in Σ
    for mod, pairs in sorted(f.rel.items()):
        if Diamond(Mod(mod), Top()) not in sigma:
            continue
        for ca, cb in sorted(pairs):
            targets = set(members.get(cb, ()))
            for s in members.get(ca, ()):
                if targets.isdisjoint(m.successors(mod, s)):
                    fails[3].append((mod, ca, cb, s))

    # 4: data agree with every pair of representatives
    for sym in sorted(m.eq):
        for s in m.states:
            for t in m.states:
                if f.same_data(sym, mapping[s], mapping[t]) != m.same_data(sym, s, t):
                    fails[4].append((sym, s, t))

    # 5: nominals
    for name, target in sorted(m.nom.items()):
        if f.nom.get(name) != mapping[target]:
            fails[5].append((name, f.nom.get(name), mapping[target]))

    # 6: valuation
    for s in m.states:
        if f.val[mapping[s]] != m.val[s]:
            fails[6].append((s, sorted(m.val[s]), sorted(f.val[mapping[s]])))
    return FiltrationReport(fails)
