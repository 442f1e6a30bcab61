# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the pure-Python kernels in ``_pure``.

Semantics (including every tie-break) are kept in lockstep with ``_pure``,
which documents the reference behaviour; this module only exists to make
the inner loops fast. The parity tests in ``tests/test_kernels.py`` hold
the two implementations to bit-identical outputs.
"""

from libc.stdlib cimport calloc, free, malloc, realloc

import numpy as np

IS_COMPILED = True

MAX_RATING_NET_SIZE = 512

ctypedef long long i64
ctypedef signed char i8
ctypedef unsigned char u8

DEF RATING_NET_LIMIT = 512


# ---------------------------------------------------------------------------
# (key1, key2) lexicographic min-heap

cdef struct MinHeap:
    i64* k1
    int* k2
    Py_ssize_t size
    Py_ssize_t cap


cdef inline bint _less(i64 a1, int a2, i64 b1, int b2) nogil:
    if a1 != b1:
        return a1 < b1
    return a2 < b2


cdef bint heap_init(MinHeap* h, Py_ssize_t cap) nogil:
    if cap < 16:
        cap = 16
    h.k1 = <i64*>malloc(cap * sizeof(i64))
    h.k2 = <int*>malloc(cap * sizeof(int))
    h.size = 0
    h.cap = cap
    return h.k1 != NULL and h.k2 != NULL


cdef void heap_free(MinHeap* h) nogil:
    if h.k1 != NULL:
        free(h.k1)
    if h.k2 != NULL:
        free(h.k2)
    h.k1 = NULL
    h.k2 = NULL


cdef bint heap_push(MinHeap* h, i64 a, int b) nogil:
    cdef Py_ssize_t i, parent
    cdef i64* n1
    cdef int* n2
    if h.size == h.cap:
        h.cap = h.cap * 2
        n1 = <i64*>realloc(h.k1, h.cap * sizeof(i64))
        if n1 == NULL:
            return False
        h.k1 = n1
        n2 = <int*>realloc(h.k2, h.cap * sizeof(int))
        if n2 == NULL:
            return False
        h.k2 = n2
    i = h.size
    h.size += 1
    while i > 0:
        parent = (i - 1) >> 1
        if _less(a, b, h.k1[parent], h.k2[parent]):
            h.k1[i] = h.k1[parent]
            h.k2[i] = h.k2[parent]
            i = parent
        else:
            break
    h.k1[i] = a
    h.k2[i] = b
    return True


cdef void heap_pop(MinHeap* h, i64* a, int* b) nogil:
    cdef Py_ssize_t i = 0, child
    cdef i64 la
    cdef int lb
    a[0] = h.k1[0]
    b[0] = h.k2[0]
    h.size -= 1
    la = h.k1[h.size]
    lb = h.k2[h.size]
    while True:
        child = 2 * i + 1
        if child >= h.size:
            break
        if child + 1 < h.size and _less(h.k1[child + 1], h.k2[child + 1],
                                        h.k1[child], h.k2[child]):
            child += 1
        if _less(h.k1[child], h.k2[child], la, lb):
            h.k1[i] = h.k1[child]
            h.k2[i] = h.k2[child]
            i = child
        else:
            break
    h.k1[i] = la
    h.k2[i] = lb


# ---------------------------------------------------------------------------
# kernels

def lpt_assign(weights, int k, initial):
    """See ``_pure.lpt_assign``."""
    w_arr = np.ascontiguousarray(weights, dtype=np.int64)
    loads_arr = np.array(initial, dtype=np.int64, copy=True)
    assignment_arr = np.empty(w_arr.shape[0], dtype=np.int32)
    cdef const i64[::1] w = w_arr
    cdef i64[::1] loads = loads_arr
    cdef int[::1] assignment = assignment_arr
    cdef Py_ssize_t n = w.shape[0]
    cdef Py_ssize_t i
    cdef i64 load
    cdef int b
    cdef MinHeap h
    if not heap_init(&h, k):
        heap_free(&h)
        raise MemoryError("lpt_assign: heap allocation failed")
    with nogil:
        for b in range(k):
            heap_push(&h, loads[b], b)
        for i in range(n):
            heap_pop(&h, &load, &b)
            assignment[i] = b
            load += w[i]
            loads[b] = load
            heap_push(&h, load, b)
    heap_free(&h)
    return assignment_arr, loads_arr


def km1(xpins, pins, net_weights, block_of, int k):
    """See ``_pure.km1``."""
    cdef const i64[::1] xp = np.ascontiguousarray(xpins, dtype=np.int64)
    cdef const int[::1] p = np.ascontiguousarray(pins, dtype=np.int32)
    cdef const i64[::1] nw = np.ascontiguousarray(net_weights, dtype=np.int64)
    cdef const int[::1] blk = np.ascontiguousarray(block_of, dtype=np.int32)
    cdef Py_ssize_t m = nw.shape[0]
    cdef Py_ssize_t e, pi
    cdef i64 total = 0
    cdef i64 lam
    cdef int b
    if m == 0:
        return 0
    cdef i64* stamp = <i64*>calloc(k, sizeof(i64))
    if stamp == NULL:
        raise MemoryError("km1: marker allocation failed")
    with nogil:
        for e in range(m):
            lam = 0
            for pi in range(xp[e], xp[e + 1]):
                b = blk[p[pi]]
                if stamp[b] != e + 1:
                    stamp[b] = e + 1
                    lam += 1
            total += (lam - 1) * nw[e]
    free(stamp)
    return int(total)


def match_vertices(xpins, pins, net_weights, xnets, vnets, vweights, is_fixed,
                   cap, order):
    """See ``_pure.match_vertices``."""
    cdef const i64[::1] xp = np.ascontiguousarray(xpins, dtype=np.int64)
    cdef const int[::1] p = np.ascontiguousarray(pins, dtype=np.int32)
    cdef const i64[::1] nw = np.ascontiguousarray(net_weights, dtype=np.int64)
    cdef const i64[::1] xn = np.ascontiguousarray(xnets, dtype=np.int64)
    cdef const int[::1] vn = np.ascontiguousarray(vnets, dtype=np.int32)
    cdef const i64[::1] vw = np.ascontiguousarray(vweights, dtype=np.int64)
    cdef const u8[::1] fx = np.ascontiguousarray(is_fixed, dtype=np.uint8)
    cdef const int[::1] ordr = np.ascontiguousarray(order, dtype=np.int32)
    cdef i64 capw = cap
    cdef Py_ssize_t n = vw.shape[0]
    match_arr = np.arange(n, dtype=np.int32)
    cdef int[::1] match = match_arr
    cdef u8* matched = <u8*>calloc(n if n else 1, sizeof(u8))
    cdef double* rating = <double*>calloc(n if n else 1, sizeof(double))
    cdef int* touched = <int*>malloc((n if n else 1) * sizeof(int))
    if matched == NULL or rating == NULL or touched == NULL:
        free(matched); free(rating); free(touched)
        raise MemoryError("match_vertices: scratch allocation failed")
    cdef Py_ssize_t oi, ei, pi, ti, ntouched
    cdef int v, u, e, best_u
    cdef i64 wv, lo, hi, size
    cdef double score, r, best_r
    with nogil:
        for oi in range(ordr.shape[0]):
            v = ordr[oi]
            if matched[v] or fx[v]:
                continue
            wv = vw[v]
            ntouched = 0
            for ei in range(xn[v], xn[v + 1]):
                e = vn[ei]
                lo = xp[e]
                hi = xp[e + 1]
                size = hi - lo
                if size < 2 or size > RATING_NET_LIMIT:
                    continue
                score = (<double>nw[e]) / (<double>(size - 1))
                for pi in range(lo, hi):
                    u = p[pi]
                    if u == v or matched[u] or fx[u]:
                        continue
                    if wv + vw[u] > capw:
                        continue
                    if rating[u] == 0.0:
                        touched[ntouched] = u
                        ntouched += 1
                    rating[u] += score
            best_u = -1
            best_r = 0.0
            for ti in range(ntouched):
                u = touched[ti]
                r = rating[u]
                if r > best_r or (r == best_r and u < best_u):
                    best_r = r
                    best_u = u
                rating[u] = 0.0
            if best_u >= 0:
                match[v] = best_u
                match[best_u] = v
                matched[v] = 1
                matched[best_u] = 1
    free(matched)
    free(rating)
    free(touched)
    return match_arr


def fm_pass(xpins, pins, net_weights, xnets, vnets, vweights, side, is_fixed,
            cap, cap_move, load0, load1, obj):
    """See ``_pure.fm_pass``. ``side`` is modified in place."""
    cdef const i64[::1] xp = np.ascontiguousarray(xpins, dtype=np.int64)
    cdef const int[::1] p = np.ascontiguousarray(pins, dtype=np.int32)
    cdef const i64[::1] nw = np.ascontiguousarray(net_weights, dtype=np.int64)
    cdef const i64[::1] xn = np.ascontiguousarray(xnets, dtype=np.int64)
    cdef const int[::1] vn = np.ascontiguousarray(vnets, dtype=np.int32)
    cdef const i64[::1] vw = np.ascontiguousarray(vweights, dtype=np.int64)
    cdef i8[::1] sd = side
    cdef const u8[::1] fx = np.ascontiguousarray(is_fixed, dtype=np.uint8)
    cdef i64 capw = cap
    cdef i64 capm = cap_move
    cdef Py_ssize_t n = vw.shape[0]
    cdef Py_ssize_t m = nw.shape[0]

    cdef i64* pc0 = <i64*>calloc(m if m else 1, sizeof(i64))
    cdef i64* pc1 = <i64*>calloc(m if m else 1, sizeof(i64))
    cdef i64* gains = <i64*>calloc(n if n else 1, sizeof(i64))
    cdef u8* consumed = <u8*>calloc(n if n else 1, sizeof(u8))
    cdef int* moves = <int*>malloc((n if n else 1) * sizeof(int))
    cdef MinHeap h
    cdef bint heap_ok = heap_init(&h, 2 * (n + 16))
    if (pc0 == NULL or pc1 == NULL or gains == NULL or consumed == NULL or
            moves == NULL or not heap_ok):
        free(pc0); free(pc1); free(gains); free(consumed); free(moves)
        heap_free(&h)
        raise MemoryError("fm_pass: scratch allocation failed")

    cdef Py_ssize_t e, pi, ei, i
    cdef int v, u, s, t, b32
    cdef i64 g, we, a, b, w, gv, neg_g
    cdef i64 loads0 = load0, loads1 = load1
    cdef i64 cur_obj = obj
    cdef i64 excess, best_excess, best_obj, best_l0, best_l1
    cdef Py_ssize_t nmoves = 0, best_len = 0
    cdef bint ok = True, feasible

    with nogil:
        for e in range(m):
            for pi in range(xp[e], xp[e + 1]):
                if sd[p[pi]] == 0:
                    pc0[e] += 1
                else:
                    pc1[e] += 1
        for i in range(n):
            g = 0
            for ei in range(xn[i], xn[i + 1]):
                e = vn[ei]
                if sd[i] == 0:
                    a = pc0[e]
                    b = pc1[e]
                else:
                    a = pc1[e]
                    b = pc0[e]
                if a == 1:
                    g += nw[e]
                if b == 0:
                    g -= nw[e]
            gains[i] = g
            if fx[i]:
                consumed[i] = 1
            else:
                if not heap_push(&h, -g, <int>i):
                    ok = False
                    break

        excess = 0
        if loads0 > capw:
            excess += loads0 - capw
        if loads1 > capw:
            excess += loads1 - capw
        best_excess = excess
        best_obj = cur_obj
        best_l0 = loads0
        best_l1 = loads1

        while ok and h.size > 0:
            heap_pop(&h, &neg_g, &b32)
            v = b32
            if consumed[v]:
                continue
            gv = gains[v]
            if -neg_g != gv:
                if not heap_push(&h, -gv, v):
                    ok = False
                continue
            consumed[v] = 1
            s = sd[v]
            t = 1 - s
            w = vw[v]
            if s == 0:
                feasible = (loads1 + w <= capm) or (loads0 > capw and loads1 + w < loads0)
            else:
                feasible = (loads0 + w <= capm) or (loads1 > capw and loads0 + w < loads1)
            if not feasible:
                continue
            sd[v] = <i8>t
            if s == 0:
                loads0 -= w
                loads1 += w
            else:
                loads1 -= w
                loads0 += w
            cur_obj -= gv
            moves[nmoves] = v
            nmoves += 1
            for ei in range(xn[v], xn[v + 1]):
                e = vn[ei]
                we = nw[e]
                if s == 0:
                    a = pc0[e]
                    b = pc1[e]
                else:
                    a = pc1[e]
                    b = pc0[e]
                if b == 0:
                    for pi in range(xp[e], xp[e + 1]):
                        u = p[pi]
                        if not consumed[u]:
                            gains[u] += we
                            if not heap_push(&h, -gains[u], u):
                                ok = False
                elif b == 1:
                    for pi in range(xp[e], xp[e + 1]):
                        u = p[pi]
                        if not consumed[u] and sd[u] == t:
                            gains[u] -= we
                            if not heap_push(&h, -gains[u], u):
                                ok = False
                if s == 0:
                    pc0[e] = a - 1
                    pc1[e] = b + 1
                else:
                    pc1[e] = a - 1
                    pc0[e] = b + 1
                if a - 1 == 0:
                    for pi in range(xp[e], xp[e + 1]):
                        u = p[pi]
                        if not consumed[u]:
                            gains[u] -= we
                            if not heap_push(&h, -gains[u], u):
                                ok = False
                elif a - 1 == 1:
                    for pi in range(xp[e], xp[e + 1]):
                        u = p[pi]
                        if not consumed[u] and sd[u] == s:
                            gains[u] += we
                            if not heap_push(&h, -gains[u], u):
                                ok = False
            excess = 0
            if loads0 > capw:
                excess += loads0 - capw
            if loads1 > capw:
                excess += loads1 - capw
            if excess < best_excess or (excess == best_excess and cur_obj < best_obj):
                best_excess = excess
                best_obj = cur_obj
                best_l0 = loads0
                best_l1 = loads1
                best_len = nmoves

        for i in range(best_len, nmoves):
            v = moves[i]
            sd[v] = <i8>(1 - sd[v])

    free(pc0)
    free(pc1)
    free(gains)
    free(consumed)
    free(moves)
    heap_free(&h)
    if not ok:
        raise MemoryError("fm_pass: heap growth failed")
    return int(best_obj), int(best_l0), int(best_l1), int(best_len)
