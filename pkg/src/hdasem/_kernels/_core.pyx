# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=False
"""Compiled kernels: lexicographic trace normal form and Smith diagonal."""

from libc.stdlib cimport malloc, free, llabs

cdef long long LIMIT = 1LL << 31


def lex_normal_form(list word, list indep):
    cdef Py_ssize_t n = len(word), k = len(indep), i, j, pos, best_pos
    cdef int *w = <int *> malloc(n * sizeof(int))
    cdef char *ind = <char *> malloc(k * k * sizeof(char) + 1)
    cdef int x, best, alive
    out = []
    if w == NULL or ind == NULL:
        free(w)
        free(ind)
        raise MemoryError()
    try:
        for i in range(n):
            w[i] = word[i]
        for i in range(k):
            row = indep[i]
            for j in range(k):
                ind[i * k + j] = 1 if row[j] else 0
        alive = n
        while alive > 0:
            best = -1
            best_pos = -1
            for pos in range(alive):
                x = w[pos]
                if best != -1 and x >= best:
                    continue
                for j in range(pos):
                    if not ind[x * k + w[j]]:
                        break
                else:
                    best = x
                    best_pos = pos
            out.append(best)
            for pos in range(best_pos, alive - 1):
                w[pos] = w[pos + 1]
            alive -= 1
    finally:
        free(w)
        free(ind)
    return out


cdef inline long long fdiv(long long a, long long b):
    # cdivision is off, so // floors like Python
    return a // b


cdef inline long long fmod(long long a, long long b):
    return a % b


def smith_diagonal(list rows, Py_ssize_t ncols):
    """Same contract as the fallback; raises OverflowError if entries leave 31 bits."""
    rows = [r for r in rows if any(r)]
    cdef Py_ssize_t m = len(rows), n = ncols, i, j, t, bi, bj, bad
    cdef long long *a = <long long *> malloc((m * n + 1) * sizeof(long long))
    cdef long long v, p, q, best, tmp
    cdef bint dirty, found
    diag = []
    if a == NULL:
        raise MemoryError()
    try:
        for i in range(m):
            r = rows[i]
            for j in range(n):
                v = r[j]
                if llabs(v) >= LIMIT:
                    raise OverflowError("entry too large for the compiled kernel")
                a[i * n + j] = v
        t = 0
        while t < m and t < n:
            best = 0
            bi = -1
            bj = -1
            for i in range(t, m):
                for j in range(t, n):
                    v = a[i * n + j]
                    if v != 0 and (best == 0 or llabs(v) < best):
                        best = llabs(v)
                        bi = i
                        bj = j
                        if best == 1:
                            break
                if best == 1:
                    break
            if bi < 0:
                break
            _swap(a, m, n, t, bi, bj)
            while True:
                p = a[t * n + t]
                dirty = False
                for i in range(t + 1, m):
                    v = a[i * n + t]
                    if v != 0:
                        q = fdiv(v, p)
                        for j in range(t, n):
                            if a[t * n + j] != 0:
                                a[i * n + j] -= q * a[t * n + j]
                                if llabs(a[i * n + j]) >= LIMIT:
                                    raise OverflowError("entry growth")
                        if a[i * n + t] != 0:
                            dirty = True
                for j in range(t + 1, n):
                    v = a[t * n + j]
                    if v != 0:
                        q = fdiv(v, p)
                        for i in range(t, m):
                            if a[i * n + t] != 0:
                                a[i * n + j] -= q * a[i * n + t]
                                if llabs(a[i * n + j]) >= LIMIT:
                                    raise OverflowError("entry growth")
                        if a[t * n + j] != 0:
                            dirty = True
                if dirty:
                    best = 0
                    bi = t
                    bj = t
                    for i in range(t, m):
                        v = a[i * n + t]
                        if v != 0 and (best == 0 or llabs(v) < best):
                            best = llabs(v)
                            bi = i
                            bj = t
                    for j in range(t, n):
                        v = a[t * n + j]
                        if v != 0 and (best == 0 or llabs(v) < best):
                            best = llabs(v)
                            bi = t
                            bj = j
                    _swap(a, m, n, t, bi, bj)
                    continue
                if llabs(p) > 1:
                    bad = -1
                    for i in range(t + 1, m):
                        found = False
                        for j in range(t + 1, n):
                            if fmod(a[i * n + j], p) != 0:
                                found = True
                                break
                        if found:
                            bad = i
                            break
                    if bad >= 0:
                        for j in range(t, n):
                            a[t * n + j] += a[bad * n + j]
                            if llabs(a[t * n + j]) >= LIMIT:
                                raise OverflowError("entry growth")
                        continue
                break
            diag.append(int(llabs(a[t * n + t])))
            t += 1
    finally:
        free(a)
    return diag


cdef void _swap(long long *a, Py_ssize_t m, Py_ssize_t n, Py_ssize_t t, Py_ssize_t i, Py_ssize_t j):
    cdef Py_ssize_t k
    cdef long long tmp
    if i != t:
        for k in range(n):
            tmp = a[t * n + k]
            a[t * n + k] = a[i * n + k]
            a[i * n + k] = tmp
    if j != t:
        for k in range(m):
            tmp = a[k * n + t]
            a[k * n + t] = a[k * n + j]
            a[k * n + j] = tmp
