"""Seeded random node and path expressions for fuzzing."""

import random

from .syntax import (And, At, AtF, Bot, Box, Diamond, Eps, Eq, Implies, Mod,
                     Neq, Nom, Not, Or, Prop, Seq, Test, Top, Union, modal_depth)


class _Gen:
    def __init__(self, sig, rng, sugar, unions):
        self.props = sorted(sig.props)
        self.noms = sorted(sig.noms)
        self.mods = sorted(sig.mods)
        self.eqs = sorted(sig.eqs)
        self.rng = rng
        self.sugar = sugar
        self.unions = unions

    def leaf(self):
        pool = [Prop(p) for p in self.props] + [Nom(i) for i in self.noms]
        if self.sugar:
            pool += [Top(), Bot()]
        if not pool:
            return Top()
        return self.rng.choice(pool)

    def node(self, depth, size):
        rng = self.rng
        if size <= 1:
            return self.leaf()
        kinds = ["leaf", "not", "and"]
        if self.sugar:
            kinds += ["or", "implies"]
        if depth > 0 and self.mods:
            kinds += ["cmp", "cmp"] if self.eqs else []
            if self.sugar:
                kinds += ["diamond", "box"]
        if self.eqs and self.noms:
            kinds.append("cmp")
        if self.sugar and self.noms:
            kinds.append("at")
        kind = rng.choice(kinds)
        if kind == "leaf":
            return self.leaf()
        if kind == "not":
            return Not(self.node(depth, size - 1))
        if kind in ("and", "or", "implies"):
            cut = rng.randint(1, max(1, size - 2))
            make = {"and": And, "or": Or, "implies": Implies}[kind]
            return make(self.node(depth, cut), self.node(depth, max(1, size - 1 - cut)))
        if kind == "cmp":
            make = rng.choice((Eq, Neq))
            return make(self.path(depth, rng.randint(1, 3)), rng.choice(self.eqs),
                        self.path(depth, rng.randint(1, 3)))
        if kind in ("diamond", "box"):
            make = Diamond if kind == "diamond" else Box
            return make(self.path(depth, rng.randint(1, 3)), self.node(depth - 1, size - 2))
        return AtF(rng.choice(self.noms), self.node(depth, size - 1))

    def step(self, depth):
        rng = self.rng
        kinds = ["test", "eps"]
        if depth > 0 and self.mods:
            kinds += ["mod", "mod", "mod"]
        if self.noms:
            kinds.append("at")
        kind = rng.choice(kinds)
        if kind == "mod":
            return Mod(rng.choice(self.mods))
        if kind == "at":
            return At(rng.choice(self.noms))
        if kind == "eps":
            return Eps()
        return Test(self.node(max(0, depth - 1), 2))

    def path(self, depth, size):
        if self.unions and size > 1 and self.rng.random() < 0.2:
            cut = self.rng.randint(1, size - 1)
            return Union(self.path(depth, cut), self.path(depth, size - cut))
        steps = [self.step(depth) for _ in range(max(1, size))]
        out = steps[-1]
        for s in reversed(steps[:-1]):
            out = Seq(s, out)
        return out


def random_node(sig, depth=2, size=6, rng=None, seed=0, sugar=True, unions=False):
    """A random formula over ``sig`` with modal depth at most ``depth``."""
    rng = rng or random.Random(seed)
    gen = _Gen(sig, rng, sugar, unions)
    while True:
        x = gen.node(depth, rng.randint(1, size))
        if modal_depth(x) <= depth:
            return x


def random_path(sig, depth=2, size=3, rng=None, seed=0, sugar=True, unions=False):
    """A random path with at most ``size`` steps and modal depth ``<= depth``."""
    rng = rng or random.Random(seed)
    gen = _Gen(sig, rng, sugar, unions)
    while True:
        x = gen.path(depth, rng.randint(1, size))
        if modal_depth(x) <= depth:
            return x
