"""Pure-Python versions of the compiled kernels (same signatures, same results)."""

from __future__ import annotations


def lex_normal_form(word: list[int], indep: list[list[int]]) -> list[int]:
    """Lexicographically least word in the commutation class of *word*.

    Letters are integer codes ordered by value; ``indep[a][b]`` is nonzero
    when ``a`` and ``b`` commute.  Greedy: repeatedly emit the smallest
    letter that commutes past everything still before it.
    """
    rest = list(word)
    out = []
    while rest:
        best = -1
        best_pos = -1
        for pos, x in enumerate(rest):
            if best != -1 and x >= best:
                blocked = True
            else:
                blocked = False
                for y in rest[:pos]:
                    if not indep[x][y]:
                        blocked = True
                        break
            if not blocked:
                best, best_pos = x, pos
        out.append(best)
        del rest[best_pos]
    return out


def smith_diagonal(rows: list[list[int]], ncols: int) -> list[int]:
    """Nonzero invariant factors of an integer matrix, pivoting on least absolute value."""
    a = [list(r) for r in rows if any(r)]
    m = len(a)
    n = ncols
    diag = []
    t = 0
    while t < m and t < n:
        piv = None
        best = 0
        for i in range(t, m):
            ri = a[i]
            for j in range(t, n):
                v = ri[j]
                if v and (not best or abs(v) < best):
                    best, piv = abs(v), (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if piv is None:
            break
        _move_pivot(a, t, piv)
        while True:
            p = a[t][t]
            row_t = a[t]
            dirty = False
            for i in range(t + 1, m):
                v = a[i][t]
                if v:
                    q = v // p
                    ri = a[i]
                    for j in range(t, n):
                        if row_t[j]:
                            ri[j] -= q * row_t[j]
                    if ri[t]:
                        dirty = True
            for j in range(t + 1, n):
                v = row_t[j]
                if v:
                    q = v // p
                    for i in range(t, m):
                        if a[i][t]:
                            a[i][j] -= q * a[i][t]
                    if row_t[j]:
                        dirty = True
            if dirty:
                piv = _least(a, t, m, n)
                _move_pivot(a, t, piv)
                continue
            if abs(p) > 1:
                bad = next((i for i in range(t + 1, m) if any(a[i][j] % p for j in range(t + 1, n))), None)
                if bad is not None:
                    ri = a[bad]
                    for j in range(t, n):
                        row_t[j] += ri[j]
                    continue
            break
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def _least(a, t, m, n):
    best, piv = 0, (t, t)
    for i in range(t, m):
        v = a[i][t]
        if v and (not best or abs(v) < best):
            best, piv = abs(v), (i, t)
    for j in range(t, n):
        v = a[t][j]
        if v and (not best or abs(v) < best):
            best, piv = abs(v), (t, j)
    return piv


def _move_pivot(a, t, piv):
    i, j = piv
    if i != t:
        a[t], a[i] = a[i], a[t]
    if j != t:
        for r in a:
            r[t], r[j] = r[j], r[t]
