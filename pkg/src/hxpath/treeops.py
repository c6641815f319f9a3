"""Restriction, root-join and selection quotients of tree-like models.

Together they turn a pointed model satisfying a formula into a finite
tree that still satisfies it: cut the model to the states reachable in
``md(φ)`` steps from the relevant named states, hang the pieces under a
fresh root, then keep one representative per sibling group with the
same ``Sub(φ)`` profile.
"""

from .evaluation import _Evaluator, check_nominals
from .model import Model, _graph, is_forest_minus, is_tree
from .syntax import Signature, modal_depth, nominals_of, subformulas


class TreeShapeError(ValueError):
    pass


class SelectionFunction(dict):
    """Maps each equivalence class (a frozenset) to a chosen member."""

    def __setitem__(self, cls, rep):
        if rep not in cls:
            raise ValueError("representative %r is outside its class" % (rep,))
        super().__setitem__(cls, rep)

    @classmethod
    def least(cls, m, classes):
        out = cls()
        for c in classes:
            out[frozenset(c)] = min(c, key=m.position)
        return out


def _restricted(m, keep, nom):
    keep_set = set(keep)
    rel = {mod: {(a, b) for a, b in pairs if a in keep_set and b in keep_set}
           for mod, pairs in m.rel.items()}
    eq = {sym: [[s for s in c if s in keep_set] for c in classes]
          for sym, classes in m.eq.items()}
    eq = {sym: [c for c in classes if c] for sym, classes in eq.items()}
    val = {s: m.val[s] for s in keep}
    return Model(m.sig, keep, rel, eq, val, nom)


def restrict(m, n, names, r):
    """Keep the states reachable in at most ``n`` ``r``-steps from ``names``.

    Nominals outside ``names`` are sent to the first kept state.
    """
    names = set(names)
    if not names:
        raise ValueError("restriction needs at least one nominal")
    if n < 0:
        raise ValueError("step bound must be non-negative")
    start = {m.nominal_target(i) for i in sorted(names)}
    reached = set(start)
    frontier = set(start)
    for _ in range(n):
        frontier = {t for s in frontier for t in m.successors(r, s)} - reached
        if not frontier:
            break
        reached |= frontier
    keep = [s for s in m.states if s in reached]
    nom = {}
    for name in sorted(set(m.sig.noms) | set(m.nom)):
        nom[name] = m.nom[name] if name in names else keep[0]
    return _restricted(m, keep, nom)


def _fresh_state(m, base="root"):
    taken = set(m.states)
    if base not in taken:
        return base
    k = 0
    while "%s%d" % (base, k) in taken:
        k += 1
    return "%s%d" % (base, k)


def root_join(m, r):
    """Add a fresh root with ``r``-edges to every state without a parent.

    The new state has no propositions, no nominal and its own data class
    for every equality symbol.  Returns ``(model, root)``.
    """
    if not is_forest_minus(m, r):
        raise TreeShapeError("root_join needs an acyclic %r-forest" % r)
    _, indeg = _graph(m, r)
    root = _fresh_state(m)
    tops = [s for s in m.states if indeg[s] == 0]
    rel = dict(m.rel)
    rel[r] = set(m.rel.get(r, ())) | {(root, s) for s in tops}
    sig = m.sig if r in m.sig.mods else m.sig.extend(mods=[r])
    out = Model(sig, (root,) + m.states, rel, m.eq, m.val, m.nom)
    return out, root


def _parent_of(m, r):
    parent = {s: None for s in m.states}
    for a, b in m.rel.get(r, ()):
        parent[b] = a
    return parent


def quotient_tree(m, phi, r, selection=None):
    """Keep one representative per group of same-parent, same-profile states.

    Two states are grouped when they have the same ``r``-parent and agree
    on every formula of ``Sub(φ)``.  Representatives whose parent was not
    kept are dropped as well, so the result stays a tree.  Returns
    ``(model, mapping)`` where ``mapping`` sends every state whose
    representative survives to that representative.
    """
    if not is_tree(m, r):
        raise TreeShapeError("quotient_tree needs a %r-tree" % r)
    check_nominals(m, phi)
    subs = sorted(subformulas(phi), key=repr)
    ev = _Evaluator(m)
    parent = _parent_of(m, r)
    groups = {}
    for s in m.states:
        key = (parent[s], tuple(ev.node(s, x) for x in subs))
        groups.setdefault(key, []).append(s)
    if selection is None:
        selection = SelectionFunction.least(m, groups.values())
    rep = {}
    for members in groups.values():
        chosen = selection[frozenset(members)]
        for s in members:
            rep[s] = chosen
    chosen = set(rep.values())

    root = next(s for s in m.states if parent[s] is None)
    kept = {root}
    frontier = [root]
    while frontier:
        for t in m.successors(r, frontier.pop()):
            if t in chosen and t not in kept:
                kept.add(t)
                frontier.append(t)
    keep = [s for s in m.states if s in kept]

    for name in sorted(nominals_of(phi)):
        if m.nom[name] not in kept:
            raise TreeShapeError("nominal %r of the formula names a dropped state" % name)
    local = nominals_of(phi)
    nom = {name: (target if name in local else keep[0])
           for name, target in m.nom.items()}
    mapping = {s: rep[s] for s in m.states if rep[s] in kept}
    return _restricted(m, keep, nom), mapping


def finite_tree_pipeline(m, s, phi, r):
    """Finite tree model of ``phi`` built around state ``s``.

    Names ``s`` with a fresh nominal, restricts to ``md(phi)`` steps from
    the nominals of ``phi`` and that name, adds a root and takes the
    selection quotient.  Returns ``(model, state)``; the helper nominal is
    not part of the result.
    """
    taken = set(m.sig.noms) | nominals_of(phi)
    fresh = m.sig.fresh_nominals(1, prefix="i_s", avoid=taken)[0]
    named = m.replace(sig=m.sig.extend(noms=[fresh]), nom={**m.nom, fresh: s})
    cut = restrict(named, modal_depth(phi), nominals_of(phi) | {fresh}, r)
    joined, _ = root_join(cut, r)
    tree, mapping = quotient_tree(joined, phi, r)
    if s not in mapping:
        raise TreeShapeError("the evaluation state was dropped by the quotient")
    nom = {k: v for k, v in tree.nom.items() if k != fresh}
    sig = Signature(tree.sig.props, tree.sig.noms - {fresh}, tree.sig.mods, tree.sig.eqs)
    return tree.replace(sig=sig, nom=nom), mapping[s]


def tree_size_bound(phi):
    """Upper bound on the pipeline output size for ``phi``.

    Height is at most ``md(φ) + 1`` and each node has at most one child
    per ``Sub(φ)`` profile.
    """
    width = 2 ** len(subformulas(phi))
    return sum(width ** h for h in range(modal_depth(phi) + 2))

