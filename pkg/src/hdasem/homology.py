"""Order complexes of finite posets and their reduced integer homology."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable

from . import _kernels
from .errors import HDAError, check_guard


class HomologyError(HDAError, ValueError):
    kind = "homology"


@dataclass(frozen=True)
class FinitePoset:
    """Elements plus a strict order given as a set of pairs ``(x, y)`` meaning ``x < y``."""

    elements: tuple
    less: frozenset

    def lt(self, x: Hashable, y: Hashable) -> bool:
        return (x, y) in self.less

    def validate(self) -> list[str]:
        """Problems with the order relation (empty when it is a strict order)."""
        errs = []
        for x in self.elements:
            if (x, x) in self.less:
                errs.append(f"reflexive at {x!r}")
        for x, y in self.less:
            for z in self.elements:
                if (y, z) in self.less and (x, z) not in self.less:
                    errs.append(f"not transitive at {x!r} < {y!r} < {z!r}")
        return errs


def open_interval_poset(n: int) -> FinitePoset:
    """``{0<1}^n`` without its bottom and top; elements are bitmasks, ordered by inclusion."""
    if n < 2:
        raise HomologyError("open_interval_poset needs n >= 2")
    elems = tuple(range(1, (1 << n) - 1))
    less = frozenset((x, y) for x in elems for y in elems if x != y and x & y == x)
    return FinitePoset(elems, less)


@dataclass
class SimplicialComplex:
    """Simplices graded by dimension, each a sorted tuple of vertex indices."""

    vertices: list
    simplices: list[list[tuple[int, ...]]] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def counts(self) -> list[int]:
        return [len(s) for s in self.simplices]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.counts()))

    def boundary(self, k: int) -> list[list[int]]:
        """Matrix of ``d_k`` from ``k``-chains to ``(k-1)``-chains, rows indexed by faces.

        ``d_0`` is the augmentation (a single row of ones).
        """
        if k < 0 or k > self.dim:
            return []
        cols = self.simplices[k]
        if k == 0:
            return [[1] * len(cols)]
        rows = self.simplices[k - 1]
        check_guard("matrix", len(rows) * len(cols))
        where = {s: i for i, s in enumerate(rows)}
        mat = [[0] * len(cols) for _ in rows]
        for j, s in enumerate(cols):
            for i in range(len(s)):
                mat[where[s[:i] + s[i + 1:]]][j] = -1 if i % 2 else 1
        return mat

    @classmethod
    def from_simplices(cls, simplices: Iterable[Iterable]) -> "SimplicialComplex":
        """Close a list of simplices (vertex lists) under taking faces."""
        tops = [tuple(sorted(set(s), key=repr)) for s in simplices]
        verts = sorted({v for s in tops for v in s}, key=repr)
        pos = {v: i for i, v in enumerate(verts)}
        seen: set[tuple[int, ...]] = set()
        for s in tops:
            idx = tuple(sorted(pos[v] for v in s))
            for r in range(1, len(idx) + 1):
                seen.update(combinations(idx, r))
        top = max((len(s) for s in seen), default=0)
        graded = [sorted(s for s in seen if len(s) == k + 1) for k in range(top)]
        return cls(verts, graded)


def order_complex(P: FinitePoset) -> SimplicialComplex:
    """Simplices are the strict chains of *P*."""
    elems = list(P.elements)
    pos = {x: i for i, x in enumerate(elems)}
    above: dict[int, list[int]] = {i: [] for i in range(len(elems))}
    for x, y in P.less:
        above[pos[x]].append(pos[y])
    graded: list[list[tuple[int, ...]]] = []

    def grow(chain: tuple[int, ...]) -> None:
        k = len(chain) - 1
        while len(graded) <= k:
            graded.append([])
        graded[k].append(tuple(sorted(chain)))
        for y in above[chain[-1]]:
            grow(chain + (y,))

    for i in range(len(elems)):
        grow((i,))
    return SimplicialComplex(elems, [sorted(g) for g in graded])


@dataclass(frozen=True)
class HomologyGroup:
    rank: int
    torsion: tuple[int, ...] = ()

    @property
    def trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def _rank_and_torsion(mat: list[list[int]], ncols: int) -> tuple[int, list[int]]:
    if not mat or not ncols:
        return 0, []
    diag = _kernels.smith_diagonal(mat, ncols)
    return len(diag), [d for d in diag if d > 1]


def integer_homology(C: SimplicialComplex) -> dict[int, HomologyGroup]:
    """Reduced integer homology in degrees ``-1 .. dim``."""
    counts = C.counts()
    top = C.dim
    ranks: dict[int, int] = {}
    torsion: dict[int, list[int]] = {}
    for k in range(0, top + 1):
        ranks[k], torsion[k] = _rank_and_torsion(C.boundary(k), counts[k])
    ranks[top + 1], torsion[top + 1] = 0, []
    out = {}
    # the augmented complex has a single (-1)-chain
    sizes = {-1: 1, **{k: counts[k] for k in range(top + 1)}}
    ranks[-1] = 0
    for k in range(-1, top + 1):
        free = sizes[k] - ranks[k] - ranks[k + 1]
        out[k] = HomologyGroup(free, tuple(sorted(torsion[k + 1])))
    return out


def boundary_squares_vanish(C: SimplicialComplex) -> bool:
    """Exact check that every composite ``d_{k-1} d_k`` is zero, augmentation included."""
    for k in range(1, C.dim + 1):
        a, b = C.boundary(k - 1), C.boundary(k)
        for i in range(len(a)):
            row = a[i]
            for j in range(len(b[0]) if b else 0):
                if sum(row[t] * b[t][j] for t in range(len(b)) if row[t]):
                    return False
    return True


def format_homology(h: dict[int, HomologyGroup], show_trivial: bool = False) -> str:
    lines = [f"H~{k} = {g}" for k, g in sorted(h.items()) if show_trivial or not g.trivial]
    return "\n".join(lines) if lines else "all reduced homology vanishes"


def load_complex(path: str) -> SimplicialComplex:
    with open(path) as fh:
        obj = json.load(fh)
    try:
        return SimplicialComplex.from_simplices(obj["simplices"])
    except (KeyError, TypeError) as exc:
        raise HomologyError(f"malformed complex JSON: {exc!r}") from None
