"""Execution paths: the path category of a precubical set and trace normal forms."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from . import _kernels
from .errors import HDAError, check_guard
from .pcset import PCSet, _UnionFind
from .syncalg import SyncAlgebra

Path = tuple[int, ...]


class FlowError(HDAError, ValueError):
    kind = "flow"


@dataclass
class PathCategory:
    """Nonempty directed paths of the 1-skeleton, up to the squares' commutations.

    Each 2-cube ``c`` relates ``d_1^0 c . d_2^1 c`` and ``d_2^0 c . d_1^1 c``
    (written in traversal order); the congruence is generated by rewriting
    one such pair inside any path.
    """

    K: PCSet
    paths: list[Path]
    index: dict[Path, int]
    relations: list[tuple[Path, Path]]
    _uf: _UnionFind = field(repr=False)

    def source(self, p: Path) -> int:
        return self.K.src(p[0])

    def target(self, p: Path) -> int:
        return self.K.tgt(p[-1])

    def class_id(self, p: Path) -> int:
        return self._uf.find(self.index[tuple(p)])

    def congruent(self, p: Path, q: Path) -> bool:
        return self.class_id(p) == self.class_id(q)

    def classes(self, alpha: int, beta: int) -> list[list[Path]]:
        """Congruence classes of paths from *alpha* to *beta*, each sorted, listed by representative."""
        groups: dict[int, list[Path]] = defaultdict(list)
        for p in self.paths:
            if self.source(p) == alpha and self.target(p) == beta:
                groups[self.class_id(p)].append(p)
        return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])

    def is_congruence(self) -> bool:
        """Saturation check: congruent paths stay congruent after adding an edge on either side."""
        out = self.K.out_edges()
        inc = self.K.in_edges()
        reps: dict[int, Path] = {}
        for p in self.paths:
            r = self.class_id(p)
            q = reps.setdefault(r, p)
            if q is p:
                continue
            for e in out[self.target(p)]:
                if not self.congruent(p + (e,), q + (e,)):
                    return False
            for e in inc[self.source(p)]:
                if not self.congruent((e,) + p, (e,) + q):
                    return False
        return True


def enumerate_paths(K: PCSet) -> list[Path]:
    """Every nonempty directed path, by depth-first extension from each vertex."""
    out = K.out_edges()
    K.topological_order()
    paths: list[Path] = []
    stack: list[Path] = [(e,) for e in reversed(K.edges)]
    while stack:
        p = stack.pop()
        paths.append(p)
        check_guard("paths", len(paths))
        for e in reversed(out[K.tgt(p[-1])]):
            stack.append(p + (e,))
    return paths


def count_paths(K: PCSet) -> int:
    """Number of nonempty directed paths, without listing them."""
    out = K.out_edges()
    below: dict[int, int] = {}
    for v in reversed(K.topological_order()):
        below[v] = sum(1 + below[K.tgt(e)] for e in out[v])
    return sum(below.values())


def bad_realization(K: PCSet) -> PathCategory:
    """The path category of *K*: free on the 1-skeleton, modulo 2-cube commutations."""
    paths = enumerate_paths(K)
    index = {p: i for i, p in enumerate(paths)}
    relations = []
    rewrite: dict[Path, list[Path]] = defaultdict(list)
    for c in K.cubes(2):
        lhs = (K.face(c, 1, 0), K.face(c, 2, 1))
        rhs = (K.face(c, 2, 0), K.face(c, 1, 1))
        relations.append((lhs, rhs))
        rewrite[lhs].append(rhs)
        rewrite[rhs].append(lhs)
    uf = _UnionFind()
    for p in paths:
        for i in range(len(p) - 1):
            for alt in rewrite.get(p[i:i + 2], ()):
                uf.union(index[p], index[p[:i] + alt + p[i + 2:]])
    return PathCategory(K, paths, index, relations, uf)


def path_class_counts(pc: PathCategory, alpha: int, beta: int) -> int:
    return len(pc.classes(alpha, beta))


def path_label(K: PCSet, path: Sequence[int]) -> tuple[str, ...]:
    for e, f in zip(path, path[1:]):
        if K.tgt(e) != K.src(f):
            raise FlowError(f"edges {e} and {f} do not compose")
    return tuple(K.labels(e)[0] for e in path)


def independent(alg: SyncAlgebra, a: str, b: str) -> bool:
    return alg.asynchronous(a) and alg.asynchronous(b)


def trace_normal_form(alg: SyncAlgebra, word: Sequence[str]) -> tuple[str, ...]:
    """Least word, in the alphabet's declared order, congruent to *word*."""
    if not word:
        raise FlowError("the trace monoid has no empty word")
    letters = alg.alphabet
    codes = [alg.rank(a) for a in word]
    flags = [1 if alg.asynchronous(a) else 0 for a in letters]
    indep = [[fa & fb for fb in flags] for fa in flags]
    return tuple(letters[c] for c in _kernels.lex_normal_form(codes, indep))


def swap_closure(alg: SyncAlgebra, word: Sequence[str]) -> set[tuple[str, ...]]:
    """All words reachable by swapping adjacent independent letters (brute force)."""
    start = tuple(word)
    seen = {start}
    todo = [start]
    while todo:
        w = todo.pop()
        for i in range(len(w) - 1):
            if w[i] != w[i + 1] and independent(alg, w[i], w[i + 1]):
                v = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
                if v not in seen:
                    seen.add(v)
                    todo.append(v)
    return seen
