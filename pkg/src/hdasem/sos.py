"""Structural operational semantics and bounded transition-system unfolding."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import check_guard
from .proc import (Horizon, Nil, OpenTermError, Par, Prefix, Rec, Restrict, Sum,
                   Term, Unfolding, Var, exposed_horizon, format_term, size, unfold_once)
from .syncalg import BOT, SyncAlgebra

FORMAT = "hda-sem/1"


class Transition(NamedTuple):
    label: str
    target: Term


def step(alg: SyncAlgebra, term: Term, _memo: dict | None = None) -> frozenset[Transition]:
    """All one-step transitions of a closed guarded term.

    Interleaving moves of a parallel composition are only allowed for
    asynchronous actions; a horizon leaf has no moves.
    """
    if _memo is not None:
        hit = _memo.get(term)
        if hit is not None:
            return hit
    if isinstance(term, (Nil, Horizon)):
        out: frozenset[Transition] = frozenset()
    elif isinstance(term, Var):
        raise OpenTermError(f"free variable {term.name!r}")
    elif isinstance(term, Prefix):
        alg.rank(term.action)
        out = frozenset({Transition(term.action, term.body)})
    elif isinstance(term, Restrict):
        a = term.action
        out = frozenset(Transition(mu, Restrict(a, t)) for mu, t in step(alg, term.body, _memo)
                        if mu != a and alg.sync(mu, a) == BOT)
    elif isinstance(term, Sum):
        out = step(alg, term.left, _memo) | step(alg, term.right, _memo)
    elif isinstance(term, Par):
        left = step(alg, term.left, _memo)
        right = step(alg, term.right, _memo)
        moves = {Transition(mu, Par(t, term.right)) for mu, t in left if alg.asynchronous(mu)}
        moves |= {Transition(mu, Par(term.left, t)) for mu, t in right if alg.asynchronous(mu)}
        for a, p2 in left:
            for b, q2 in right:
                s = alg.sync(a, b)
                if s != BOT:
                    moves.add(Transition(s, Par(p2, q2)))
        out = frozenset(moves)
    elif isinstance(term, Rec):
        out = step(alg, unfold_once(term), _memo)
    else:
        raise TypeError(f"not a process term: {term!r}")
    if _memo is not None:
        _memo[term] = out
    return out


@dataclass
class DecoratedLTS:
    states: list[int]
    initial: int
    decoration: dict[int, Term]
    transitions: list[tuple[int, str, int]]
    depth: dict[int, int]
    keys: dict[int, Term] = field(default_factory=dict)
    truncated: bool = False

    def to_json(self) -> dict:
        return {
            "format": FORMAT,
            "states": [{"id": s, "decoration": format_term(self.decoration[s]), "depth": self.depth[s]}
                       for s in self.states],
            "initial": self.initial,
            "transitions": [{"src": s, "label": a, "dst": t} for s, a, t in self.transitions],
            "truncated": self.truncated,
        }

    def to_dot(self, header: str = "") -> str:
        lines = [f"// {header}"] if header else []
        lines.append("digraph lts {")
        lines.append("  rankdir=LR;")
        for s in self.states:
            shape = ", shape=doublecircle" if s == self.initial else ""
            lines.append(f"  s{s} [label={json.dumps(format_term(self.decoration[s]))}{shape}];")
        for s, a, t in self.transitions:
            lines.append(f"  s{s} -> s{t} [label={json.dumps(a)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_lts(alg: SyncAlgebra, term: Term, depth_bound: int = 16) -> DecoratedLTS:
    """Breadth-first exploration of the derivatives of *term*.

    Recursion is unfolded ``depth_bound`` times first, so the result is
    finite and acyclic; states are identified by their (unfolded) term.
    ``truncated`` records whether some state reached the unfolding horizon.
    """
    if depth_bound < 0:
        raise ValueError("depth_bound must be >= 0")
    unf = Unfolding(depth_bound)
    root = unf.unfold(term)
    memo: dict = {}
    ids: dict[Term, int] = {root: 0}
    keys = [root]
    transitions: list[tuple[int, str, int]] = []
    queue = deque([root])
    while queue:
        t = queue.popleft()
        src = ids[t]
        for mu, t2 in sorted(step(alg, t, memo), key=lambda tr: (alg.rank(tr.label), format_term(tr.target))):
            dst = ids.get(t2)
            if dst is None:
                dst = ids[t2] = len(keys)
                keys.append(t2)
                check_guard("states", len(keys))
                queue.append(t2)
            transitions.append((src, mu, dst))
    # term size strictly decreases along transitions, so this order is topological
    depth = {s: 0 for s in range(len(keys))}
    order = sorted(range(len(keys)), key=lambda s: -size(keys[s]))
    out_edges: dict[int, list[int]] = {s: [] for s in range(len(keys))}
    for s, _, t in transitions:
        out_edges[s].append(t)
    for s in order:
        for t in out_edges[s]:
            depth[t] = max(depth[t], depth[s] + 1)
    decoration = {s: unf.fold(k) for s, k in enumerate(keys)}
    decoration[0] = term
    return DecoratedLTS(
        states=list(range(len(keys))), initial=0, decoration=decoration,
        transitions=transitions, depth=depth, keys=dict(enumerate(keys)),
        truncated=any(exposed_horizon(k) for k in keys))
