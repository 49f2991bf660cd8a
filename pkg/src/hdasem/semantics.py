"""Denotational semantics of process terms as labelled precubical sets.

Every vertex is identified by a rec-free *key*: the derivative of the
unfolded term it stands for.  Keys stay distinct within one set (the sum
construction merges vertices whose keys agree), and the displayed
decoration of a vertex is its key with recursion folded back.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Any

from .pcset import PCSet, disjoint_union, iso_check, merge_vertices, same_up_to_coordinate_order
from .proc import (Horizon, Nil, NIL, OpenTermError, ProcError, Par, Prefix, Rec, Restrict, Sum,
                   Term, Unfolding, Var, check_term, exposed_horizon, has_horizon, subterms)
from .report import Report
from .sos import build_lts, step
from .syncalg import SyncAlgebra
from .tensor import tensor


@dataclass
class Interpretation:
    pcset: PCSet
    keys: dict[int, Term]
    meta: dict[str, Any] = field(default_factory=dict)
    unfolding: Unfolding | None = field(default=None, repr=False)

    @property
    def census(self) -> tuple[int, ...]:
        return self.pcset.census()


class _Builder:
    def __init__(self, alg: SyncAlgebra):
        self.alg = alg
        self.memo: dict[Term, PCSet] = {}

    def build(self, t: Term) -> PCSet:
        hit = self.memo.get(t)
        if hit is not None:
            return hit
        if isinstance(t, (Nil, Horizon)):
            out = PCSet()
            out.initial = out.add_vertex(t)
        elif isinstance(t, Var):
            raise OpenTermError(f"free variable {t.name!r}")
        elif isinstance(t, Prefix):
            out = self.prefix(t)
        elif isinstance(t, Sum):
            out = self.sum(t)
        elif isinstance(t, Restrict):
            out = self.restrict(t)
        elif isinstance(t, Par):
            out = tensor(self.alg, self.build(t.left), self.build(t.right), decorate=Par)
        else:
            raise TypeError(f"unexpected node {t!r} in an unfolded term")
        self.memo[t] = out
        return out

    def prefix(self, t: Prefix) -> PCSet:
        self.alg.rank(t.action)
        body = self.build(t.body)
        edge = PCSet()
        s = edge.add_vertex(t)
        e = edge.add_vertex()
        edge.add_cube((t.action,), (s, e), check=False)
        both, me, mb = disjoint_union(edge, body)
        both.initial = me[s]
        return merge_vertices(both, [(me[e], mb[body.initial])],
                              decorate=lambda rep, members: both.decorations.get(max(members)))

    def sum(self, t: Sum) -> PCSet:
        K, L = self.build(t.left), self.build(t.right)
        both, mk, ml = disjoint_union(K, L)
        ik, il = mk[K.initial], ml[L.initial]
        both.decorations[ik] = both.decorations[il] = t
        owner: dict[Term, int] = {}
        pairs = [(ik, il)]
        for v in both.vertices:
            k = both.decorations[v]
            if k in owner:
                pairs.append((owner[k], v))
            else:
                owner[k] = v
        both.initial = ik
        return merge_vertices(both, pairs)

    def restrict(self, t: Restrict) -> PCSet:
        K = self.build(t.body)
        allowed = self.alg.restricted_alphabet(t.action)
        out, _ = K.rebuild(keep=lambda c: all(a in allowed for a in K.labels(c)), dedup=False)
        out.decorations = {v: Restrict(t.action, k) for v, k in out.decorations.items()}
        return out


def interp(alg: SyncAlgebra, term: Term, depth_bound: int = 16) -> Interpretation:
    """The labelled precubical set of *term*, with recursion unfolded ``depth_bound`` times."""
    check_term(term, alg)
    if depth_bound < 0:
        raise ValueError("depth_bound must be >= 0")
    unf = Unfolding(depth_bound)
    root = unf.unfold(term)
    built = _Builder(alg).build(root)
    keys = dict(built.decorations)
    K, _ = built.rebuild(dedup=False)
    K.decorations = {v: unf.fold(k) for v, k in keys.items()}
    K.decorations[K.initial] = term
    recs = [n for n in subterms(term) if isinstance(n, Rec)]
    meta = {
        "depth_bound": depth_bound,
        "stabilized": not has_horizon(root),
        "vacuous_recs": len(unf.vacuous),
        "recs": len(recs),
        "truncated": sum(1 for k in keys.values() if exposed_horizon(k)),
        "census": K.census(),
    }
    return Interpretation(K, keys, meta, unf)


# -- verifiers ----------------------------------------------------------------


def verify_paradigm(K: PCSet, alg: SyncAlgebra | None = None) -> Report:
    """Every labelled shell of *K* has at most one filler."""
    rep = Report("paradigm")
    groups: dict[tuple, list[int]] = {}
    for n in range(1, K.max_dim + 1):
        for c in K.cubes(n):
            groups.setdefault((K.labels(c), K.flat_faces(c)), []).append(c)
    for (labels, faces), cs in groups.items():
        if len(cs) > 1:
            rep.add("multiple-fillers", {"labels": labels, "faces": faces, "fillers": cs},
                    f"{len(cs)} cubes fill the same shell")
    rep.stats["shells_filled"] = len(groups)
    return rep


def _distances(K: PCSet) -> dict[int, int]:
    out = K.out_edges()
    dist = {K.initial: 0}
    queue = deque([K.initial])
    while queue:
        v = queue.popleft()
        for e in out[v]:
            w = K.tgt(e)
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def verify_restrict1(alg: SyncAlgebra, term: Term, I: Interpretation) -> Report:
    """The reachable 1-skeleton of *I* against the operational semantics.

    Three checks: outgoing edges of every reachable vertex agree exactly with
    the transitions of its key; reachable state and edge counts agree with
    :func:`build_lts`; and where folding back recursion is exact (no horizon,
    or closer than the unfolding depth to the start) the displayed
    decorations obey the transition rules of the displayed terms.
    """
    rep = Report("restrict1")
    K = I.pcset
    d = I.meta["depth_bound"]
    memo: dict = {}
    dist = _distances(K)
    out = K.out_edges()
    reach_edges = 0
    for v in dist:
        got = Counter((K.labels(e)[0], I.keys[K.tgt(e)]) for e in out[v])
        reach_edges += len(out[v])
        want = Counter(step(alg, I.keys[v], memo))
        if got != want:
            rep.add("edge-mismatch", v, f"pcset {sorted(map(str, got.elements()))} vs sos {sorted(map(str, want.elements()))}")
    lts = build_lts(alg, term, d)
    if len(dist) != len(lts.states):
        rep.add("state-count", (len(dist), len(lts.states)))
    if reach_edges != len(lts.transitions):
        rep.add("edge-count", (reach_edges, len(lts.transitions)))
    fold = I.unfolding.fold if I.unfolding is not None else (lambda q: q)
    shown = 0
    for v, k in dist.items():
        if has_horizon(I.keys[v]) and k >= d:
            continue
        if v not in K.decorations:
            rep.add("decoration-mismatch", v, "vertex has no decoration")
            continue
        shown += 1
        got_d = {(K.labels(e)[0], K.decorations.get(K.tgt(e))) for e in out[v]}
        want_d = {(mu, fold(q)) for mu, q in step(alg, K.decorations[v], memo)}
        if got_d != want_d:
            rep.add("decoration-mismatch", v, f"{sorted(map(str, got_d))} vs {sorted(map(str, want_d))}")
    rep.stats.update(states=len(dist), edges=reach_edges, unreachable=len(K.vertices) - len(dist),
                     decorations_checked=shown)
    return rep


def check_unit(alg: SyncAlgebra, term: Term, depth_bound: int = 16) -> Report:
    rep = Report("unit")
    base = interp(alg, term, depth_bound).pcset
    for variant in (Par(term, NIL), Par(NIL, term)):
        if iso_check(interp(alg, variant, depth_bound).pcset, base) is None:
            rep.add("not-isomorphic", str(variant))
    return rep


def check_comm(alg: SyncAlgebra, term: Term, depth_bound: int = 16) -> Report:
    rep = Report("comm")
    for node in set(subterms(term)):
        if isinstance(node, Par) and _closed(node):
            a = interp(alg, node, depth_bound)
            b = interp(alg, Par(node.right, node.left), depth_bound)
            where = {k: v for v, k in b.keys.items()}
            vmap = {v: where.get(Par(k.right, k.left)) for v, k in a.keys.items()}
            if None in vmap.values() or not same_up_to_coordinate_order(a.pcset, b.pcset, vmap):
                rep.add("not-isomorphic", str(node))
    return rep


def check_assoc(alg: SyncAlgebra, term: Term, depth_bound: int = 16) -> Report:
    rep = Report("assoc")
    for node in set(subterms(term)):
        if not isinstance(node, Par) or not _closed(node):
            continue
        for other in ((Par(node.left.left, Par(node.left.right, node.right)),)
                      if isinstance(node.left, Par) else ()) + \
                     ((Par(Par(node.left, node.right.left), node.right.right),)
                      if isinstance(node.right, Par) else ()):
            a = interp(alg, node, depth_bound).pcset
            b = interp(alg, other, depth_bound).pcset
            if iso_check(a, b) is None:
                rep.add("not-isomorphic", (str(node), str(other)))
    return rep


def _closed(t: Term) -> bool:
    try:
        check_term(t)
    except ProcError:
        return False
    return True
