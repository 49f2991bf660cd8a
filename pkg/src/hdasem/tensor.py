"""Synchronized product, directed coskeleton and synchronized tensor product."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Iterator, Sequence

from .errors import PCSetError, check_guard
from .pcset import PCSet, skeleton, standard_cube
from .syncalg import BOT, SyncAlgebra

# -- the 1-dimensional synchronized product -----------------------------------


def _pair_vertices(K: PCSet, L: PCSet, out: PCSet,
                   decorate: Callable[[Any, Any], Any] | None) -> dict[tuple[int, int], int]:
    """Insert ``K_0 x L_0`` so that ``(u, v)`` gets id ``index(u) + |K_0| * index(v)``."""
    pos = {}
    for v in L.vertices:
        for u in K.vertices:
            dec = None
            if decorate is not None and u in K.decorations and v in L.decorations:
                dec = decorate(K.decorations[u], L.decorations[v])
            pos[(u, v)] = out.add_vertex(dec)
    if K.initial is not None and L.initial is not None:
        out.initial = pos[(K.initial, L.initial)]
    return pos


def product1(alg: SyncAlgebra, K: PCSet, L: PCSet,
             decorate: Callable[[Any, Any], Any] | None = None) -> PCSet:
    """``K x_sigma L`` for sets of dimension at most one.

    Left and right moves need an asynchronous label; a diagonal ``(x, y)``
    exists whenever ``sync(l(x), l(y))`` is defined and carries that label.
    """
    if K.max_dim > 1 or L.max_dim > 1:
        raise PCSetError("product1 takes sets of dimension at most 1")
    out = PCSet()
    pos = _pair_vertices(K, L, out, decorate)
    for v in L.vertices:
        for x in K.edges:
            if alg.asynchronous(K.labels(x)[0]):
                out.add_cube(K.labels(x), (pos[(K.src(x), v)], pos[(K.tgt(x), v)]), check=False)
    for y in L.edges:
        if alg.asynchronous(L.labels(y)[0]):
            for u in K.vertices:
                out.add_cube(L.labels(y), (pos[(u, L.src(y))], pos[(u, L.tgt(y))]), check=False)
    for x in K.edges:
        for y in L.edges:
            s = alg.sync(K.labels(x)[0], L.labels(y)[0])
            if s != BOT:
                out.add_cube((s,), (pos[(K.src(x), L.src(y))], pos[(K.tgt(x), L.tgt(y))]), check=False)
    return out


# -- non-twisted maps and the directed coskeleton ----------------------------


@dataclass(frozen=True)
class NonTwistedMap:
    """A vertex map ``{0,1}^n -> {0,1}^m`` given coordinate by coordinate.

    ``coords[j]`` is ``0`` or ``1`` for a constant coordinate, or ``("e", k)``
    when target coordinate ``j`` copies ``eps_k`` (``k`` is 1-based).
    """

    coords: tuple
    n: int

    @property
    def word(self) -> tuple[int, ...]:
        return tuple(c[1] for c in self.coords if isinstance(c, tuple))

    def is_non_twisted(self) -> bool:
        seen = 0
        for k in self.word:
            if k > seen + 1:
                return False
            seen = max(seen, k)
        return seen == self.n

    def vertices(self) -> tuple[int, ...]:
        out = []
        for eps in range(1 << self.n):
            v = 0
            for j, c in enumerate(self.coords):
                bit = ((eps >> (c[1] - 1)) & 1) if isinstance(c, tuple) else c
                v |= bit << j
            out.append(v)
        return tuple(out)

    def face(self, i: int, alpha: int) -> "NonTwistedMap":
        coords = []
        for c in self.coords:
            if isinstance(c, tuple):
                k = c[1]
                c = alpha if k == i else ("e", k - 1) if k > i else c
            coords.append(c)
        return NonTwistedMap(tuple(coords), self.n - 1)


def non_twisted_maps(n: int, m: int) -> Iterator[NonTwistedMap]:
    """All non-twisted maps ``{0,1}^n -> {0,1}^m``."""

    def rec(j: int, top: int, acc: list) -> Iterator[tuple]:
        if j == m:
            if top == n:
                yield tuple(acc)
            return
        if n - top > m - j:
            return
        for c in (0, 1):
            acc.append(c)
            yield from rec(j + 1, top, acc)
            acc.pop()
        for k in range(1, min(top + 1, n) + 1):
            acc.append(("e", k))
            yield from rec(j + 1, max(top, k), acc)
            acc.pop()

    for coords in rec(0, 0, []):
        yield NonTwistedMap(coords, n)


def _grid_dim(K: PCSet) -> int:
    verts = K.vertices
    m = max(len(verts).bit_length() - 1, 0)
    if verts != list(range(len(verts))) or len(verts) != 1 << m:
        raise PCSetError("vertex set must be {0,1}^m with vertex ids 0 .. 2^m - 1")
    return m


def _relations_hold(K: PCSet, flat: Sequence[int]) -> bool:
    n = len(flat) // 2
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for a in (0, 1):
                for b in (0, 1):
                    if K.face(flat[2 * (j - 1) + b], i, a) != K.face(flat[2 * (i - 1) + a], j - 1, b):
                        return False
    return True


def _shell_labels(alg: SyncAlgebra, K: PCSet, flat: Sequence[int]) -> tuple[str, ...] | None:
    """The single label tuple a shell's faces factor through, if any."""
    n = len(flat) // 2
    if n == 1:
        return None
    first = K.labels(flat[2 * (n - 1)])[:1] + K.labels(flat[0])
    for i in range(1, n + 1):
        want = first[:i - 1] + first[i:]
        if K.labels(flat[2 * (i - 1)]) != want or K.labels(flat[2 * (i - 1) + 1]) != want:
            return None
    if not all(alg.asynchronous(a) for a in first):
        return None
    return first


def enumerate_shells(alg: SyncAlgebra, K: PCSet, filled: PCSet, n: int) -> list[tuple[tuple[int, ...], tuple[str, ...], NonTwistedMap]]:
    """Non-twisted labelled ``n``-shells of *filled*, as ``(faces, labels, map)``.

    *K* fixes the vertex grid ``{0,1}^m``; *filled* holds all cubes of
    dimension at most ``n`` built so far over the same vertices.  Each result
    is the boundary of a would-be ``(n+1)``-cube.
    """
    m = _grid_dim(K)
    if filled.vertices != K.vertices:
        raise PCSetError("filled must share the vertex grid of K")
    by_corners: dict[tuple[int, ...], list[int]] = {}
    for c in filled.cubes(n):
        by_corners.setdefault(filled.vertex_map(c), []).append(c)
    out = []
    for g in non_twisted_maps(n + 1, m):
        options = []
        for i in range(1, n + 2):
            for a in (0, 1):
                hit = by_corners.get(g.face(i, a).vertices())
                if not hit:
                    break
                options.append(hit)
            else:
                continue
            break
        else:
            for flat in itertools.product(*options):
                labels = _shell_labels(alg, filled, flat)
                if labels is not None and _relations_hold(filled, flat):
                    out.append((tuple(flat), labels, g))
    return out


def cosk_dir(alg: SyncAlgebra, K: PCSet) -> PCSet:
    """Fill every non-twisted labelled shell, dimension by dimension."""
    m = _grid_dim(K)
    if K.max_dim > 1:
        raise PCSetError("cosk_dir takes a set of dimension at most 1")
    out = K.copy()
    for n in range(1, m):
        shells = enumerate_shells(alg, K, out, n)
        if not shells:
            break
        for flat, labels, _ in shells:
            out.add_cube(labels, flat, check=False)
        check_guard("cubes", len(out))
    return out


def cosk_undirected(alg: SyncAlgebra, K: PCSet) -> PCSet:
    """Fill every labelled shell, twisted or not (debug oracle only).

    Shells are found from pairs of opposite faces ``(d_1^0, d_1^1)``: the
    remaining faces are then pinned down by the cubical relations.
    """
    if K.max_dim > 1:
        raise PCSetError("cosk_undirected takes a set of dimension at most 1")
    out = K.copy()
    n = 1
    while out.cubes(n):
        by_ends: dict[tuple[int, int], list[int]] = {}
        for c in out.cubes(n):
            if n == 1:
                by_ends.setdefault((c,), []).append(c)
            by_ends.setdefault((out.face(c, 1, 0), out.face(c, 1, 1)), []).append(c)
        found = []
        cs = out.cubes(n)
        for x0, x1 in itertools.product(cs, repeat=2):
            if x0 == x1 or out.labels(x0) != out.labels(x1):
                continue
            options: list[list[int]] = []
            for j in range(2, n + 2):
                for a in (0, 1):
                    options.append(by_ends.get((out.face(x0, j - 1, a), out.face(x1, j - 1, a)), []))
            for rest in itertools.product(*options):
                flat = (x0, x1) + tuple(rest)
                labels = _shell_labels(alg, out, flat)
                if labels is not None and _relations_hold(out, flat):
                    found.append((flat, labels))
        if not found:
            break
        for flat, labels in found:
            out.add_cube(labels, flat, check=False)
        check_guard("cubes", len(out))
        n += 1
    return out


# -- tensor descriptors -------------------------------------------------------


@dataclass(frozen=True)
class TensorCubeDescriptor:
    """A cube of ``[p] (x) [q]`` named by a partition of the coordinates ``1..p+q``.

    ``pairing`` lists ``(i, f(i))`` for the synchronized left coordinates;
    ``A`` holds the coordinates moving alone, ``c_minus``/``c_plus`` the
    coordinates frozen at 0 and 1.
    """

    p: int
    q: int
    A: frozenset[int]
    pairing: tuple[tuple[int, int], ...]
    c_minus: frozenset[int]
    c_plus: frozenset[int]

    @property
    def B(self) -> frozenset[int]:
        return frozenset(itertools.chain.from_iterable(self.pairing))

    @property
    def free(self) -> tuple[int, ...]:
        """Cube coordinates: ``A`` and the left half of ``B``, in increasing order."""
        return tuple(sorted(self.A | {i for i, _ in self.pairing}))

    @property
    def dim(self) -> int:
        return len(self.A) + len(self.pairing)

    def labels(self, alg: SyncAlgebra, left: Sequence[str], right: Sequence[str]) -> tuple[str, ...]:
        allowed = tuple(left) + tuple(right)
        f = dict(self.pairing)
        return tuple(alg.sync(allowed[j - 1], allowed[f[j] - 1]) if j in f else allowed[j - 1]
                     for j in self.free)

    def valid(self, alg: SyncAlgebra, left: Sequence[str], right: Sequence[str]) -> bool:
        labs = tuple(left) + tuple(right)
        for j in self.A:
            if not alg.asynchronous(labs[j - 1]):
                return False
        for i, j in self.pairing:
            if alg.sync(labs[i - 1], labs[j - 1]) == BOT:
                return False
        if self.dim >= 2:
            return all(alg.asynchronous(a) for a in self.labels(alg, left, right))
        return True

    def vertex_map(self) -> tuple[int, ...]:
        """Corner bitmasks over ``p + q`` coordinates (left coordinates in the low bits)."""
        free = self.free
        f = dict(self.pairing)
        base = sum(1 << (j - 1) for j in self.c_plus)
        out = []
        for eps in range(1 << len(free)):
            v = base
            for k, j in enumerate(free):
                if (eps >> k) & 1:
                    v |= 1 << (j - 1)
                    if j in f:
                        v |= 1 << (f[j] - 1)
            out.append(v)
        return tuple(out)

    def face(self, k: int, alpha: int) -> "TensorCubeDescriptor":
        j = self.free[k - 1]
        f = dict(self.pairing)
        moved = {j} | ({f[j]} if j in f else set())
        return TensorCubeDescriptor(
            self.p, self.q, self.A - moved,
            tuple(pr for pr in self.pairing if pr[0] != j),
            self.c_minus | moved if alpha == 0 else self.c_minus,
            self.c_plus | moved if alpha == 1 else self.c_plus)


def _matchings(p: int, q: int, ok: Callable[[int, int], bool]) -> Iterator[tuple[tuple[int, int], ...]]:
    """Partial injections ``{1..p} -> {1..q}`` (as sorted pairs) whose pairs pass *ok*."""

    def rec(i: int, used: frozenset[int], acc: list) -> Iterator[tuple]:
        if i > p:
            yield tuple(acc)
            return
        yield from rec(i + 1, used, acc)
        for j in range(1, q + 1):
            if j not in used and ok(i, j):
                acc.append((i, j))
                yield from rec(i + 1, used | {j}, acc)
                acc.pop()

    yield from rec(1, frozenset(), [])


def descriptors(alg: SyncAlgebra, left: Sequence[str], right: Sequence[str]) -> list[TensorCubeDescriptor]:
    """Every valid descriptor of ``[p] (x)_sigma [q]``, sorted by dimension."""
    p, q = len(left), len(right)
    labs = tuple(left) + tuple(right)
    out = []
    for pairing in _matchings(p, q, lambda i, j: alg.sync(labs[i - 1], labs[p + j - 1]) != BOT):
        pairing = tuple((i, p + j) for i, j in pairing)
        used = {x for pr in pairing for x in pr}
        rest = [j for j in range(1, p + q + 1) if j not in used]
        for roles in itertools.product("A-+", repeat=len(rest)):
            d = TensorCubeDescriptor(
                p, q,
                frozenset(j for j, r in zip(rest, roles) if r == "A"),
                pairing,
                frozenset(j for j, r in zip(rest, roles) if r == "-"),
                frozenset(j for j, r in zip(rest, roles) if r == "+"))
            if d.valid(alg, left, right):
                out.append(d)
    out.sort(key=lambda d: (d.dim, d.vertex_map()))
    return out


def cube_tensor(alg: SyncAlgebra, left: Sequence[str], right: Sequence[str]) -> PCSet:
    """``[p] (x)_sigma [q]`` built directly from descriptors.

    Vertex ``(u, v)`` has id ``u | v << p`` as in :func:`product1` applied to
    two standard cubes.
    """
    for a in tuple(left) + tuple(right):
        if not alg.asynchronous(a):
            raise PCSetError(f"label {a!r} cannot occur asynchronously")
    out = PCSet()
    ids: dict[TensorCubeDescriptor, int] = {}
    by_vertex: dict[int, TensorCubeDescriptor] = {}
    for d in descriptors(alg, left, right):
        if d.dim == 0:
            by_vertex[d.vertex_map()[0]] = d
    for v in sorted(by_vertex):
        ids[by_vertex[v]] = out.add_vertex()
    for d in descriptors(alg, left, right):
        if d.dim == 0:
            continue
        faces = [ids[d.face(k, a)] for k in range(1, d.dim + 1) for a in (0, 1)]
        ids[d] = out.add_cube(d.labels(alg, left, right), faces, check=False)
    out.initial = 0
    return out


def standard_skeleton(labels: Sequence[str]) -> PCSet:
    """The 1-skeleton of the labelled standard cube."""
    return skeleton(standard_cube(labels), 1)


# -- the general tensor product -----------------------------------------------


def tensor(alg: SyncAlgebra, K: PCSet, L: PCSet,
           decorate: Callable[[Any, Any], Any] | None = None) -> PCSet:
    """``K (x)_sigma L``: every interior tensor cube of every pair ``(x, y)``.

    A cube of ``[p] (x) [q]`` that freezes a coordinate is the interior cube
    of a face pair, so enumerating matchings per pair covers the colimit
    exactly once.  Pairs are visited by increasing ``dim x + dim y`` so every
    face is already present.
    """
    out = PCSet()
    pos = _pair_vertices(K, L, out, decorate)
    made: dict[tuple, int] = {(u, v, ()): c for (u, v), c in pos.items()}
    asyncK = {c: all(alg.asynchronous(a) for a in K.labels(c)) for c in K.cubes()}
    asyncL = {c: all(alg.asynchronous(a) for a in L.labels(c)) for c in L.cubes()}
    top = K.max_dim + L.max_dim
    for s in range(1, top + 1):
        for p in range(max(0, s - L.max_dim), min(s, K.max_dim) + 1):
            q = s - p
            for x in K.cubes(p):
                lx = K.labels(x)
                for y in L.cubes(q):
                    ly = L.labels(y)
                    for pairing in _matchings(p, q, lambda i, j: alg.sync(lx[i - 1], ly[j - 1]) != BOT):
                        cube = _interior_cube(alg, K, L, x, y, pairing, made, out, asyncK, asyncL)
                        if cube is not None:
                            made[(x, y, pairing)] = cube
            check_guard("cubes", len(out))
    return out


def _interior_cube(alg, K, L, x, y, pairing, made, out, asyncK, asyncL):
    lx, ly = K.labels(x), L.labels(y)
    p, q = len(lx), len(ly)
    f = dict(pairing)
    matched_right = set(f.values())
    lone_right = [j for j in range(1, q + 1) if j not in matched_right]
    labels = []
    for i in range(1, p + 1):
        labels.append(alg.sync(lx[i - 1], ly[f[i] - 1]) if i in f else lx[i - 1])
    labels.extend(ly[j - 1] for j in lone_right)
    r = len(labels)
    if r == 0:
        return None
    for i in range(1, p + 1):
        if i not in f and not alg.asynchronous(lx[i - 1]):
            return None
    for j in lone_right:
        if not alg.asynchronous(ly[j - 1]):
            return None
    if r >= 2 and not all(alg.asynchronous(a) for a in labels):
        return None
    faces = []
    for k in range(1, r + 1):
        for a in (0, 1):
            if k <= p:
                i = k
                x2 = K.face(x, i, a)
                if i in f:
                    j = f[i]
                    y2 = L.face(y, j, a)
                    pr = tuple((i2 - (i2 > i), j2 - (j2 > j)) for i2, j2 in pairing if i2 != i)
                else:
                    y2 = y
                    pr = tuple((i2 - (i2 > i), j2) for i2, j2 in pairing)
            else:
                j = lone_right[k - p - 1]
                x2 = x
                y2 = L.face(y, j, a)
                pr = tuple((i2, j2 - (j2 > j)) for i2, j2 in pairing)
            faces.append(made[(x2, y2, pr)])
    return out.add_cube(tuple(labels), faces, check=False)


def swap_vertices(K: PCSet, L: PCSet) -> dict[int, int]:
    """Vertex id map from ``K (x) L`` to ``L (x) K`` sending ``(u, v)`` to ``(v, u)``."""
    nk, nl = len(K.vertices), len(L.vertices)
    return {iu + nk * iv: iv + nl * iu for iv in range(nl) for iu in range(nk)}
