"""Seeded random generation of closed guarded process terms."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .flows import count_paths
from .proc import NIL, Par, Prefix, Rec, Restrict, Sum, Term, Unfolding, Var, check_term, size
from .semantics import interp
from .syncalg import SyncAlgebra, builtin

CCS_ACTIONS = ("a", "coa", "b", "cob", "tau")
TRIVIAL_ACTIONS = ("a", "b", "c")


def random_term(rng: random.Random, actions: Sequence[str], max_size: int = 12) -> Term:
    """A closed term with at most *max_size* nodes in which every variable is guarded."""
    names = iter(("x", "y", "z", "w", "v", "u"))

    def gen(budget: int, unguarded: frozenset[str], guarded: frozenset[str]) -> Term:
        if budget <= 1:
            if guarded and rng.random() < 0.5:
                return Var(rng.choice(sorted(guarded)))
            return NIL
        kinds = ["prefix"] * 4
        if budget >= 3:
            kinds += ["sum", "par", "par"]
        if budget >= 2:
            kinds += ["nu"]
        if budget >= 3:
            kinds += ["rec"]
        kind = rng.choice(kinds)
        if kind == "prefix":
            return Prefix(rng.choice(actions), gen(budget - 1, frozenset(), guarded | unguarded))
        if kind == "nu":
            return Restrict(rng.choice(actions), gen(budget - 1, unguarded, guarded))
        if kind == "rec":
            x = next(names, None)
            if x is None:
                return Prefix(rng.choice(actions), gen(budget - 1, frozenset(), guarded | unguarded))
            return Rec(x, gen(budget - 1, unguarded | {x}, guarded))
        left = rng.randint(1, budget - 2)
        node = Sum if kind == "sum" else Par
        return node(gen(left, unguarded, guarded), gen(budget - 1 - left, unguarded, guarded))

    while True:
        t = gen(rng.randint(1, max_size), frozenset(), frozenset())
        if size(t) <= max_size:
            check_term(t)
            return t


@dataclass(frozen=True)
class CorpusEntry:
    algebra: str
    term: Term
    depth: int


def unfolded_size(term: Term, depth: int) -> int:
    return size(Unfolding(depth).unfold(term))


def corpus(seed: int = 2024, per_algebra: int = 120, max_size: int = 12, max_depth: int = 6,
           max_unfolded: int = 40, max_paths: int | None = 20000,
           algebras: Sequence[str] = ("trivial", "ccs")) -> list[CorpusEntry]:
    """Random terms per algebra, each with an unfolding depth of at most *max_depth*.

    The depth is drawn uniformly and then lowered until the unfolded term has
    at most *max_unfolded* nodes and its interpretation at most *max_paths*
    directed paths, which keeps every entry desk-sized.
    """
    rng = random.Random(seed)
    out = []
    for name in algebras:
        actions = CCS_ACTIONS if name == "ccs" else TRIVIAL_ACTIONS
        alg = corpus_algebra(name)
        for _ in range(per_algebra):
            t = random_term(rng, actions, max_size)
            d = rng.randint(1, max_depth)
            while d > 0 and unfolded_size(t, d) > max_unfolded:
                d -= 1
            if max_paths is not None:
                while d > 0 and count_paths(interp(alg, t, d).pcset) > max_paths:
                    d -= 1
            out.append(CorpusEntry(name, t, d))
    return out


def corpus_algebra(name: str) -> SyncAlgebra:
    return builtin(name, CCS_ACTIONS if name == "ccs" else TRIVIAL_ACTIONS)
