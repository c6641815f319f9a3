"""Truth of node and path expressions in finite models.

Two independent engines live here: :func:`eval_node` walks the formula
recursively, while :func:`label` fills tables bottom-up over the
subexpressions ordered by size.  They must always agree.
"""

from collections import defaultdict
from dataclasses import dataclass

from .model import UnassignedNominal
from .syntax import (And, At, AtF, Bot, Box, Diamond, Eps, Eq, Implies, Mod,
                     Neq, Nom, Not, Or, Prop, Seq, Test, Top, Union,
                     desugar, expr_size, nominals_of, normalize_node, postorder)


def check_nominals(m, expr):
    for name in sorted(nominals_of(expr)):
        if name not in m.nom:
            raise UnassignedNominal(name)


def eval_node(m, s, phi):
    """Whether ``phi`` holds at state ``s`` of ``m``."""
    check_nominals(m, phi)
    return _Evaluator(m).node(s, phi)


def eval_path(m, s, t, alpha):
    """Whether the pair ``(s, t)`` is in the relation denoted by ``alpha``."""
    check_nominals(m, alpha)
    return t in _Evaluator(m).targets(s, alpha)


def path_targets(m, s, alpha):
    check_nominals(m, alpha)
    return _Evaluator(m).targets(s, alpha)


class _Evaluator:
    def __init__(self, m):
        self.m = m
        self.memo = {}

    def node(self, s, x):
        key = (s, x)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = self._node(s, x)
        return hit

    def _node(self, s, x):
        m = self.m
        if isinstance(x, Prop):
            return x.name in m.val[s]
        if isinstance(x, Nom):
            return m.nominal_target(x.name) == s
        if isinstance(x, Top):
            return True
        if isinstance(x, Bot):
            return False
        if isinstance(x, Not):
            return not self.node(s, x.body)
        if isinstance(x, And):
            return self.node(s, x.left) and self.node(s, x.right)
        if isinstance(x, Or):
            return self.node(s, x.left) or self.node(s, x.right)
        if isinstance(x, Implies):
            return (not self.node(s, x.left)) or self.node(s, x.right)
        if isinstance(x, (Eq, Neq)):
            left = {m.class_of(x.eq, t) for t in self.targets(s, x.left)}
            if not left:
                return False
            right = {m.class_of(x.eq, t) for t in self.targets(s, x.right)}
            if not right:
                return False
            if isinstance(x, Eq):
                return not left.isdisjoint(right)
            return len(left | right) > 1
        if isinstance(x, Diamond):
            return any(self.node(t, x.body) for t in self.targets(s, x.path))
        if isinstance(x, Box):
            return all(self.node(t, x.body) for t in self.targets(s, x.path))
        if isinstance(x, AtF):
            return self.node(m.nominal_target(x.nominal), x.body)
        raise TypeError("not a node expression: %r" % (x,))

    def targets(self, s, path):
        key = (s, path)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = frozenset(self._targets(s, path))
        return hit

    def _targets(self, s, path):
        if isinstance(path, Mod):
            return self.m.successors(path.name, s)
        if isinstance(path, At):
            return (self.m.nominal_target(path.nominal),)
        if isinstance(path, Eps):
            return (s,)
        if isinstance(path, Test):
            return (s,) if self.node(s, path.body) else ()
        if isinstance(path, Seq):
            out = set()
            for mid in self.targets(s, path.first):
                out |= self.targets(mid, path.second)
            return out
        if isinstance(path, Union):
            return self.targets(s, path.left) | self.targets(s, path.right)
        raise TypeError("not a path expression: %r" % (path,))


# -- labeling ----------------------------------------------------------------------

@dataclass
class LabelTables:
    """``ne[state]`` holds node subexpressions, ``pe[(s, t)]`` path ones."""

    ne: dict
    pe: dict
    order: list


_SUGAR = (Diamond, Box, AtF, Or, Implies)


def label_order(phi):
    """Distinct subexpressions by nondecreasing size, ties in postorder."""
    first = {}
    for pos, item in enumerate(postorder(phi)):
        first.setdefault(item, pos)
    return sorted(first, key=lambda item: (expr_size(item), first[item]))


def label(m, phi):
    """Label every state and pair with the subexpressions true there.

    ``phi`` must be free of diamonds, boxes, ``@``-formulas, ``|`` and
    ``->``; paths are normalised first so composite paths have a single
    step as head.  ``true``/``false``, ``eps`` and unions are accepted.
    """
    phi = normalize_node(phi)
    check_nominals(m, phi)
    order = label_order(phi)
    states = m.states
    node_ext = {}
    path_ext = {}

    for x in order:
        if isinstance(x, _SUGAR):
            raise ValueError("label expects a desugared formula, found %s" % type(x).__name__)
        if isinstance(x, Mod):
            out = defaultdict(set)
            for a, b in m.rel.get(x.name, ()):
                out[a].add(b)
            path_ext[x] = out
        elif isinstance(x, At):
            target = m.nominal_target(x.nominal)
            path_ext[x] = {s: {target} for s in states}
        elif isinstance(x, Test):
            path_ext[x] = {s: {s} for s in states if s in node_ext[x.body]}
        elif isinstance(x, Eps):
            path_ext[x] = {s: {s} for s in states}
        elif isinstance(x, Union):
            left, right = path_ext[x.left], path_ext[x.right]
            path_ext[x] = {s: left.get(s, set()) | right.get(s, set()) for s in states}
        elif isinstance(x, Seq):
            path_ext[x] = _label_seq(m, x, node_ext, path_ext)
        elif isinstance(x, Prop):
            node_ext[x] = {s for s in states if x.name in m.val[s]}
        elif isinstance(x, Nom):
            node_ext[x] = {m.nominal_target(x.name)}
        elif isinstance(x, Top):
            node_ext[x] = set(states)
        elif isinstance(x, Bot):
            node_ext[x] = set()
        elif isinstance(x, Not):
            node_ext[x] = set(states) - node_ext[x.body]
        elif isinstance(x, And):
            node_ext[x] = node_ext[x.left] & node_ext[x.right]
        elif isinstance(x, (Eq, Neq)):
            node_ext[x] = _label_compare(m, x, path_ext)
        else:
            raise TypeError("not an expression: %r" % (x,))

    ne = {s: set() for s in states}
    for x, ext in node_ext.items():
        for s in ext:
            ne[s].add(x)
    pe = defaultdict(set)
    for x, ext in path_ext.items():
        for s, targets in ext.items():
            for t in targets:
                pe[(s, t)].add(x)
    return LabelTables(ne, dict(pe), order)


def _label_seq(m, x, node_ext, path_ext):
    head, tail = x.first, x.second
    tail_ext = path_ext[tail]
    out = {}
    if isinstance(head, Mod):
        # rule: a.alpha holds from m1 to m2 when some a-successor reaches m2
        for m1 in m.states:
            acc = set()
            for m3 in m.successors(head.name, m1):
                acc |= tail_ext.get(m3, set())
            if acc:
                out[m1] = acc
    elif isinstance(head, At):
        reach = tail_ext.get(m.nominal_target(head.nominal), set())
        if reach:
            out = {m1: set(reach) for m1 in m.states}
    elif isinstance(head, Test):
        for m1 in node_ext[head.body]:
            if tail_ext.get(m1):
                out[m1] = set(tail_ext[m1])
    else:
        # union heads: plain relational composition
        head_ext = path_ext[head]
        for m1, mids in head_ext.items():
            acc = set()
            for m3 in mids:
                acc |= tail_ext.get(m3, set())
            if acc:
                out[m1] = acc
    return out


def _label_compare(m, x, path_ext):
    left, right = path_ext[x.left], path_ext[x.right]
    out = set()
    for s in m.states:
        lc = {m.class_of(x.eq, t) for t in left.get(s, ())}
        rc = {m.class_of(x.eq, t) for t in right.get(s, ())}
        if not lc or not rc:
            continue
        if isinstance(x, Eq):
            if not lc.isdisjoint(rc):
                out.add(s)
        elif len(lc | rc) > 1:
            out.add(s)
    return out


def sat_states(m, phi, via=None):
    """States where ``phi`` holds.

    Large formulas go through :func:`label` after desugaring (when the
    model has an equality symbol for the diamonds); small ones use
    :func:`eval_node`.  ``via`` forces ``"label"`` or ``"eval"``.
    """
    check_nominals(m, phi)
    if via is None:
        via = "label" if expr_size(phi) > 40 and m.sig.eqs else "eval"
    if via == "label":
        core = desugar(phi, min(m.sig.eqs), m.sig) if m.sig.eqs else phi
        core = normalize_node(core)
        tables = label(m, core)
        return {s for s in m.states if core in tables.ne[s]}
    ev = _Evaluator(m)
    return {s for s in m.states if ev.node(s, phi)}


def consequence_on_model(m, gamma, phi):
    """Local consequence restricted to the states of ``m``."""
    for x in list(gamma) + [phi]:
        check_nominals(m, x)
    ev = _Evaluator(m)
    for s in m.states:
        if all(ev.node(s, g) for g in gamma) and not ev.node(s, phi):
            return False
    return True


def path_consequence_reduce(premises, alpha, variant=1, sig=None):
    """Turn a path consequence into a node consequence with fresh nominals.

    Variant 1 keeps the endpoints: ``{@i<b>j | b in premises}`` entails
    ``@i<alpha>j``.  Variant 2 concludes ``@k<alpha>l`` for two more
    fresh nominals.  Returns ``(hypotheses, conclusion)``.
    """
    if variant not in (1, 2):
        raise ValueError("variant must be 1 or 2")
    taken = set()
    for p in list(premises) + [alpha]:
        taken |= nominals_of(p)
    if sig is not None:
        taken |= set(sig.noms)
    names = []
    for cand in ("i", "j", "k", "l"):
        if cand not in taken:
            names.append(cand)
            taken.add(cand)
    idx = 0
    while len(names) < 4:
        cand = "n%d" % idx
        if cand not in taken:
            names.append(cand)
            taken.add(cand)
        idx += 1
    i, j, k, l = names
    hyps = [AtF(i, Diamond(beta, Nom(j))) for beta in premises]
    if variant == 1:
        return hyps, AtF(i, Diamond(alpha, Nom(j)))
    return hyps, AtF(k, Diamond(alpha, Nom(l)))
