"""Labelled precubical sets.

A :class:`PCSet` stores cubes of every dimension under integer ids.  An
``n``-cube carries an ``n``-tuple of action labels and ``2n`` face ids kept
flat in ``(i, alpha)`` order: ``faces[2*(i-1) + alpha]`` is ``d_i^alpha``.
Vertex maps are tuples indexed by bitmask, with bit ``i-1`` holding ``eps_i``.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

from .errors import CycleError, PCSetError, ResourceLimitError, check_guard, guard
from .report import Report
from .syncalg import SyncAlgebra

FORMAT = "hda-sem/1"


class PCSet:
    """A finite labelled precubical set with optional initial vertex and decorations."""

    def __init__(self) -> None:
        self._dim: list[int] = []
        self._labels: list[tuple[str, ...]] = []
        self._faces: list[tuple[int, ...]] = []
        self._by_dim: list[list[int]] = [[]]
        self._index: dict[tuple, int] = {}
        self._vmaps: dict[int, tuple[int, ...]] = {}
        self.decorations: dict[int, Any] = {}
        self.initial: int | None = None

    # -- construction ----------------------------------------------------

    def add_vertex(self, decoration: Any = None) -> int:
        cid = len(self._dim)
        self._dim.append(0)
        self._labels.append(())
        self._faces.append(())
        self._by_dim[0].append(cid)
        if decoration is not None:
            self.decorations[cid] = decoration
        return cid

    def add_cube(self, labels: Sequence[str], faces: Sequence, *, dedup: bool = True,
                 check: bool = True) -> int:
        """Insert a cube of dimension ``len(labels)``.

        *faces* is either the flat ``2n`` sequence or ``n`` pairs
        ``(d_i^0, d_i^1)``.  With *dedup* an existing cube with the same labels
        and faces is returned instead of a new one.  With *check* the face
        dimensions and cubical relations are verified first.
        """
        labels = tuple(labels)
        n = len(labels)
        if n == 0:
            raise PCSetError("use add_vertex for 0-cubes")
        flat = tuple(itertools.chain.from_iterable(faces)) if faces and isinstance(faces[0], (tuple, list)) else tuple(faces)
        if len(flat) != 2 * n:
            raise PCSetError(f"a {n}-cube needs {2 * n} faces, got {len(flat)}")
        key = (labels, flat)
        if dedup:
            hit = self._index.get(key)
            if hit is not None:
                return hit
        if check:
            self._check_new(labels, flat)
        cid = len(self._dim)
        self._dim.append(n)
        self._labels.append(labels)
        self._faces.append(flat)
        while len(self._by_dim) <= n:
            self._by_dim.append([])
        self._by_dim[n].append(cid)
        self._index.setdefault(key, cid)
        return cid

    def _check_new(self, labels: tuple[str, ...], flat: tuple[int, ...]) -> None:
        n = len(labels)
        for f in flat:
            if not 0 <= f < len(self._dim) or self._dim[f] != n - 1:
                raise PCSetError(f"face {f} is not a {n - 1}-cube")
        for i in range(1, n + 1):
            want = labels[:i - 1] + labels[i:]
            for a in (0, 1):
                if self._labels[flat[2 * (i - 1) + a]] != want:
                    raise PCSetError(f"face d_{i}^{a} has labels {self._labels[flat[2 * (i - 1) + a]]}, expected {want}")
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                for a in (0, 1):
                    for b in (0, 1):
                        lhs = self.face(flat[2 * (j - 1) + b], i, a)
                        rhs = self.face(flat[2 * (i - 1) + a], j - 1, b)
                        if lhs != rhs:
                            raise PCSetError(f"cubical relation fails for i={i}, j={j}, alpha={a}, beta={b}")

    # -- queries ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self._dim)

    def __contains__(self, cid: int) -> bool:
        return isinstance(cid, int) and 0 <= cid < len(self._dim)

    def dim(self, c: int) -> int:
        return self._dim[c]

    def labels(self, c: int) -> tuple[str, ...]:
        return self._labels[c]

    def face(self, c: int, i: int, alpha: int) -> int:
        return self._faces[c][2 * (i - 1) + alpha]

    def flat_faces(self, c: int) -> tuple[int, ...]:
        return self._faces[c]

    def faces(self, c: int) -> list[tuple[int, int]]:
        f = self._faces[c]
        return [(f[2 * k], f[2 * k + 1]) for k in range(len(f) // 2)]

    def cubes(self, n: int | None = None) -> list[int]:
        if n is None:
            return list(range(len(self._dim)))
        return list(self._by_dim[n]) if n < len(self._by_dim) else []

    @property
    def vertices(self) -> list[int]:
        return list(self._by_dim[0])

    @property
    def edges(self) -> list[int]:
        return self.cubes(1)

    @property
    def max_dim(self) -> int:
        """Largest dimension holding a cube, or -1 when empty."""
        for n in range(len(self._by_dim) - 1, -1, -1):
            if self._by_dim[n]:
                return n
        return -1

    def census(self) -> tuple[int, ...]:
        return tuple(len(self._by_dim[n]) for n in range(self.max_dim + 1))

    def src(self, e: int) -> int:
        return self._faces[e][0]

    def tgt(self, e: int) -> int:
        return self._faces[e][1]

    def find(self, labels: Sequence[str], faces: Sequence[int]) -> int | None:
        return self._index.get((tuple(labels), tuple(faces)))

    def vertex_map(self, c: int) -> tuple[int, ...]:
        """Corner vertices of *c* indexed by bitmask; the ``d_n`` split gives the top bit."""
        hit = self._vmaps.get(c)
        if hit is not None:
            return hit
        n = self._dim[c]
        if n == 0:
            out: tuple[int, ...] = (c,)
        else:
            f = self._faces[c]
            out = self.vertex_map(f[2 * n - 2]) + self.vertex_map(f[2 * n - 1])
        self._vmaps[c] = out
        return out

    def out_edges(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {v: [] for v in self._by_dim[0]}
        for e in self.edges:
            out[self.src(e)].append(e)
        return out

    def in_edges(self) -> dict[int, list[int]]:
        inc: dict[int, list[int]] = {v: [] for v in self._by_dim[0]}
        for e in self.edges:
            inc[self.tgt(e)].append(e)
        return inc

    def topological_order(self) -> list[int]:
        """Vertices in an order compatible with the edges; raises on a directed cycle."""
        indeg = {v: 0 for v in self._by_dim[0]}
        out = self.out_edges()
        for e in self.edges:
            indeg[self.tgt(e)] += 1
        ready = [v for v in self._by_dim[0] if indeg[v] == 0]
        order = []
        while ready:
            v = ready.pop()
            order.append(v)
            for e in out[v]:
                w = self.tgt(e)
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
        if len(order) != len(indeg):
            raise CycleError("the 1-skeleton has a directed cycle")
        return order

    def reachable(self, start: int | None = None) -> set[int]:
        start = self.initial if start is None else start
        if start is None:
            return set()
        out = self.out_edges()
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for e in out[v]:
                w = self.tgt(e)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    # -- rebuilding ------------------------------------------------------

    def rebuild(self, keep: Callable[[int], bool] | None = None,
                vertex_rep: Callable[[int], int] | None = None,
                dedup: bool = True) -> tuple["PCSet", dict[int, int]]:
        """Copy in dimension order, optionally dropping cubes and identifying vertices.

        Returns the new set and the id map (dropped cubes are absent from it).
        A cube is kept only if *keep* accepts it and all its faces were kept.
        """
        out = PCSet()
        idmap: dict[int, int] = {}
        for v in self._by_dim[0]:
            if keep is not None and not keep(v):
                continue
            rep = vertex_rep(v) if vertex_rep is not None else v
            if rep != v:
                continue
            idmap[v] = out.add_vertex()
        if vertex_rep is not None:
            for v in self._by_dim[0]:
                rep = vertex_rep(v)
                if rep != v and rep in idmap and (keep is None or keep(v)):
                    idmap[v] = idmap[rep]
        for n in range(1, len(self._by_dim)):
            for c in self._by_dim[n]:
                if keep is not None and not keep(c):
                    continue
                f = self._faces[c]
                if any(x not in idmap for x in f):
                    continue
                idmap[c] = out.add_cube(self._labels[c], tuple(idmap[x] for x in f),
                                        dedup=dedup, check=False)
        for v, d in self.decorations.items():
            if v in idmap and idmap[v] not in out.decorations:
                out.decorations[idmap[v]] = d
        if self.initial is not None and self.initial in idmap:
            out.initial = idmap[self.initial]
        return out, idmap

    def copy(self) -> "PCSet":
        out, _ = self.rebuild(dedup=False)
        return out

    # -- export ----------------------------------------------------------

    def to_json(self, decorate: Callable[[Any], str] = str) -> dict:
        cubes = []
        for c in range(len(self._dim)):
            entry: dict[str, Any] = {"id": c, "dim": self._dim[c], "labels": list(self._labels[c])}
            entry["faces"] = [list(p) for p in self.faces(c)]
            cubes.append(entry)
        decs = {str(v): decorate(d) for v, d in sorted(self.decorations.items())}
        return {"format": FORMAT, "cubes": cubes, "initial": self.initial, "decorations": decs}

    def dumps(self, decorate: Callable[[Any], str] = str) -> str:
        return json.dumps(self.to_json(decorate), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, obj: dict) -> "PCSet":
        """Load the JSON produced by :meth:`to_json`; ids may be arbitrary."""
        try:
            raw = sorted(obj["cubes"], key=lambda c: (c["dim"], c["id"]))
            out = cls()
            idmap: dict[Any, int] = {}
            for c in raw:
                if c["dim"] == 0:
                    idmap[c["id"]] = out.add_vertex()
                else:
                    faces = [idmap[f] for pair in c["faces"] for f in pair]
                    if len(c["labels"]) != c["dim"]:
                        raise PCSetError(f"cube {c['id']}: dim and label count disagree")
                    idmap[c["id"]] = out.add_cube(c["labels"], faces, dedup=False)
            for k, d in obj.get("decorations", {}).items():
                out.decorations[idmap[int(k)]] = d
            if obj.get("initial") is not None:
                out.initial = idmap[obj["initial"]]
        except (KeyError, TypeError, IndexError) as exc:
            raise PCSetError(f"malformed pcset JSON: {exc!r}") from None
        return out

    def to_dot(self, header: str = "", decorate: Callable[[Any], str] = str) -> str:
        lines = []
        if header:
            lines.append(f"// {header}")
        lines.append("digraph pcset {")
        lines.append("  rankdir=LR;")
        for v in self._by_dim[0]:
            text = decorate(self.decorations[v]) if v in self.decorations else str(v)
            shape = ", shape=doublecircle" if v == self.initial else ""
            lines.append(f"  v{v} [label={json.dumps(text)}{shape}];")
        for e in self.edges:
            lines.append(f"  v{self.src(e)} -> v{self.tgt(e)} [label={json.dumps(self._labels[e][0])}];")
        for c in self.cubes(2):
            f = self._faces[c]
            lines.append(f"  // square {c} ({','.join(self._labels[c])}): edges {f[0]} {f[1]} {f[2]} {f[3]}")
        lines.append("}")
        return "\n".join(lines) + "\n"


# -- validation ---------------------------------------------------------------

def validate(K: PCSet, alg: SyncAlgebra | None = None) -> Report:
    """Check face references, cubical relations, label coherence and the initial vertex.

    With *alg*, labels must be actions of it, and every cube of dimension two
    or more must carry asynchronous labels only.  Edges are exempt: a
    synchronized diagonal may carry a label that cannot occur alone.
    """
    rep = Report("pcset")
    total = len(K)
    for c in K.cubes():
        n = K.dim(c)
        f = K.flat_faces(c)
        if len(f) != 2 * n or len(K.labels(c)) != n:
            rep.add("dimension", c, "face or label count does not match the dimension")
            continue
        if any(not 0 <= x < total or K.dim(x) != n - 1 for x in f):
            rep.add("dangling-face", c)
            continue
        for i in range(1, n + 1):
            want = K.labels(c)[:i - 1] + K.labels(c)[i:]
            for a in (0, 1):
                if K.labels(f[2 * (i - 1) + a]) != want:
                    rep.add("label-coherence", (c, i, a), f"{K.labels(f[2 * (i - 1) + a])} != {want}")
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                for a in (0, 1):
                    for b in (0, 1):
                        if K.face(K.face(c, j, b), i, a) != K.face(K.face(c, i, a), j - 1, b):
                            rep.add("cubical-relation", (c, i, j, a, b))
        if alg is not None:
            for lab in K.labels(c):
                if lab not in alg.alphabet:
                    rep.add("unknown-label", (c, lab))
                elif n >= 2 and not alg.asynchronous(lab):
                    rep.add("asynchrony", (c, lab), "label cannot occur asynchronously")
    if rep.ok:
        for e in K.edges:
            if K.src(e) == K.tgt(e):
                rep.add("loop", e)
        try:
            K.topological_order()
        except CycleError:
            rep.add("cycle", None)
    if K.initial is not None:
        if K.initial not in K or K.dim(K.initial) != 0:
            rep.add("initial", K.initial, "not a 0-cube")
        elif rep.ok and any(K.tgt(e) == K.initial for e in K.edges):
            rep.add("initial", K.initial, "target of an edge")
    rep.stats["census"] = K.census()
    return rep


# -- standard constructions -----------------------------------------------

def standard_cube(labels: Sequence[str], alg: SyncAlgebra | None = None) -> PCSet:
    """The labelled cube: one cube per word over {0, 1, *}; vertex ids are bitmasks."""
    labels = tuple(labels)
    n = len(labels)
    if alg is not None:
        for a in labels:
            if not alg.asynchronous(a):
                raise PCSetError(f"label {a!r} cannot occur asynchronously")
    K = PCSet()
    ids: dict[tuple, int] = {}
    for mask in range(1 << n):
        ids[tuple((mask >> k) & 1 for k in range(n))] = K.add_vertex()
    for k in range(1, n + 1):
        for stars in itertools.combinations(range(n), k):
            rest = [p for p in range(n) if p not in stars]
            for bits in itertools.product((0, 1), repeat=n - k):
                word = [None] * n
                for p, b in zip(rest, bits):
                    word[p] = b
                faces = []
                for s in stars:
                    for a in (0, 1):
                        w = list(word)
                        w[s] = a
                        faces.append(ids[tuple("*" if x is None else x for x in w)])
                ids[tuple("*" if x is None else x for x in word)] = K.add_cube(
                    tuple(labels[s] for s in stars), faces, check=False)
    K.initial = 0
    return K


def skeleton(K: PCSet, n: int) -> PCSet:
    out, _ = K.rebuild(keep=lambda c: K.dim(c) <= n, dedup=False)
    return out


def boundary(K: PCSet) -> PCSet:
    """Drop the top cube of a standard cube; the boundary of a point is empty."""
    top = K.max_dim
    if top <= 0:
        return PCSet() if top == 0 and len(K) == 1 else skeleton(K, top - 1)
    return skeleton(K, top - 1)


def disjoint_union(K: PCSet, L: PCSet) -> tuple[PCSet, dict[int, int], dict[int, int]]:
    out = PCSet()
    maps: list[dict[int, int]] = [{}, {}]
    for side, M in enumerate((K, L)):
        for v in M.vertices:
            maps[side][v] = out.add_vertex(M.decorations.get(v))
    top = max(K.max_dim, L.max_dim)
    for n in range(1, top + 1):
        for side, M in enumerate((K, L)):
            m = maps[side]
            for c in M.cubes(n):
                m[c] = out.add_cube(M.labels(c), tuple(m[x] for x in M.flat_faces(c)),
                                    dedup=False, check=False)
    return out, maps[0], maps[1]


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


def merge_vertices(K: PCSet, pairs: Iterable[tuple[int, int]],
                   decorate: Callable[[int, list[int]], Any] | None = None) -> PCSet:
    """Quotient by the equivalence generated by *pairs* of vertices.

    Cubes that become equal (same labels, same faces) are identified.
    *decorate(rep, members)* chooses the decoration of each merged class;
    by default the smallest member's decoration wins.  Identifications that
    would create a loop or a directed cycle raise :class:`CycleError`.
    """
    uf = _UnionFind()
    for u, v in pairs:
        for x in (u, v):
            if x not in K or K.dim(x) != 0:
                raise PCSetError(f"{x} is not a vertex")
        uf.union(u, v)
    out, idmap = K.rebuild(vertex_rep=uf.find)
    classes: dict[int, list[int]] = defaultdict(list)
    for v in K.vertices:
        classes[uf.find(v)].append(v)
    out.decorations = {}
    for rep, members in classes.items():
        if decorate is not None:
            d = decorate(rep, members)
        else:
            d = next((K.decorations[m] for m in members if m in K.decorations), None)
        if d is not None:
            out.decorations[idmap[rep]] = d
    for e in out.edges:
        if out.src(e) == out.tgt(e):
            raise CycleError(f"merging creates a loop at vertex {out.src(e)}")
    out.topological_order()
    return out


# -- isomorphism ------------------------------------------------------------

@dataclass
class Isomorphism:
    cubes: dict[int, int]

    @property
    def vertices(self) -> dict[int, int]:
        return self.cubes


class _Shape:
    """Per-vertex incidence data used by colour refinement."""

    def __init__(self, K: PCSet):
        self.K = K
        self.vertices = K.vertices
        self.pos = {v: k for k, v in enumerate(self.vertices)}
        adj: list[list[tuple]] = [[] for _ in self.vertices]
        for n in range(1, K.max_dim + 1):
            for c in K.cubes(n):
                corners = tuple(self.pos[v] for v in K.vertex_map(c))
                for eps, v in enumerate(corners):
                    adj[v].append((K.labels(c), eps, corners))
        self.adj = adj
        init = self.pos.get(K.initial, -1) if K.initial is not None else -1
        self.base = [(k == init, tuple(sorted((lab, eps) for lab, eps, _ in adj[k])))
                     for k in range(len(self.vertices))]


def _refine(shapes: list[_Shape], colours: list[list[int]]) -> list[list[int]]:
    """Colour refinement run jointly so colour ids are comparable across shapes."""
    while True:
        table: dict[tuple, int] = {}
        new = []
        for sh, col in zip(shapes, colours):
            out = []
            for k in range(len(col)):
                sig = (col[k], tuple(sorted((lab, eps, tuple(col[x] for x in corners))
                                            for lab, eps, corners in sh.adj[k])))
                out.append(table.setdefault(sig, len(table)))
            new.append(out)
        if all(len(set(n)) == len(set(o)) for n, o in zip(new, colours)):
            return new
        colours = new


def iso_check(K: PCSet, L: PCSet) -> Isomorphism | None:
    """Find a label-, face- and initial-preserving bijection, or return ``None``.

    Decorations are ignored.  Vertices are matched by colour refinement plus
    backtracking; higher cubes are then matched by their labels and images
    of their faces, which is exact once vertices are fixed unless a set holds
    two cubes with identical labels and faces (such groups are paired in
    order).
    """
    limit = guard("iso_cubes")
    for M in (K, L):
        if len(M) > limit:
            raise ResourceLimitError(f"iso_cubes guard exceeded: {len(M)} > {limit}")
    if K.census() != L.census() or (K.initial is None) != (L.initial is None):
        return None
    for n in range(1, K.max_dim + 1):
        if sorted(K.labels(c) for c in K.cubes(n)) != sorted(L.labels(c) for c in L.cubes(n)):
            return None
    shapes = [_Shape(K), _Shape(L)]
    table: dict[tuple, int] = {}
    colours = [[table.setdefault(b, len(table)) for b in sh.base] for sh in shapes]
    colours = _refine(shapes, colours)
    return _search(K, L, shapes, colours)


def _search(K: PCSet, L: PCSet, shapes: list[_Shape], colours: list[list[int]]) -> Isomorphism | None:
    ck, cl = colours
    if sorted(ck) != sorted(cl):
        return None
    groups: dict[int, list[int]] = defaultdict(list)
    for k, c in enumerate(ck):
        groups[c].append(k)
    ambiguous = [g for g in groups.values() if len(g) > 1]
    if not ambiguous:
        where = {c: k for k, c in enumerate(cl)}
        vmap = {shapes[0].vertices[k]: shapes[1].vertices[where[c]] for k, c in enumerate(ck)}
        return _extend(K, L, vmap)
    cell = min(ambiguous, key=len)
    pick = cell[0]
    fresh = max(max(ck), max(cl)) + 1
    for cand in [k for k, c in enumerate(cl) if c == ck[pick]]:
        nk, nl = list(ck), list(cl)
        nk[pick] = fresh
        nl[cand] = fresh
        found = _search(K, L, shapes, _refine(shapes, [nk, nl]))
        if found is not None:
            return found
    return None


def _extend(K: PCSet, L: PCSet, vmap: dict[int, int]) -> Isomorphism | None:
    cmap = dict(vmap)
    if K.initial is not None and cmap.get(K.initial) != L.initial:
        return None
    for n in range(1, K.max_dim + 1):
        mine: dict[tuple, list[int]] = defaultdict(list)
        theirs: dict[tuple, list[int]] = defaultdict(list)
        for c in K.cubes(n):
            mine[(K.labels(c), tuple(cmap[x] for x in K.flat_faces(c)))].append(c)
        for c in L.cubes(n):
            theirs[(L.labels(c), L.flat_faces(c))].append(c)
        if len(mine) != len(theirs):
            return None
        for key, cs in mine.items():
            ds = theirs.get(key)
            if ds is None or len(ds) != len(cs):
                return None
            cmap.update(zip(cs, ds))
    return Isomorphism(cmap)


def isomorphic(K: PCSet, L: PCSet) -> bool:
    return iso_check(K, L) is not None


def census_guard(n: int) -> None:
    check_guard("cubes", n)


def _canonical_cube(K: PCSet, c: int, f: Callable[[int], int]) -> tuple:
    """Cube *c* with vertices renamed by *f* and coordinates sorted by their first step."""
    vm = K.vertex_map(c)
    n = K.dim(c)
    labs = K.labels(c)
    order = sorted(range(n), key=lambda i: (f(vm[1 << i]), labs[i]))
    corners = []
    for eps in range(1 << n):
        src = 0
        for k, i in enumerate(order):
            if (eps >> k) & 1:
                src |= 1 << i
        corners.append(f(vm[src]))
    return (n, tuple(labs[i] for i in order), tuple(corners))


def same_up_to_coordinate_order(K: PCSet, L: PCSet, vmap: dict[int, int]) -> bool:
    """Whether *vmap* carries the cubes of *K* onto those of *L*, ignoring coordinate order.

    This is the right notion for comparing ``K (x) L`` with ``L (x) K``:
    swapping factors reverses the coordinate order of every cube.
    """
    if sorted(vmap) != sorted(K.vertices) or sorted(vmap.values()) != sorted(L.vertices):
        return False
    if (K.initial is None) != (L.initial is None):
        return False
    if K.initial is not None and vmap[K.initial] != L.initial:
        return False
    mine = Counter(_canonical_cube(K, c, vmap.__getitem__) for c in K.cubes())
    theirs = Counter(_canonical_cube(L, c, lambda v: v) for c in L.cubes())
    return mine == theirs
