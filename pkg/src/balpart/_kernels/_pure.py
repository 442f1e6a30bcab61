"""Pure-Python kernels, used when the compiled extension is unavailable.

Every function here mirrors its counterpart in ``_core.pyx`` operation for
operation, including tie-breaking, so both implementations produce
bit-identical results. The compiled module is only a faster twin.
"""

from __future__ import annotations

import heapq

import numpy as np

IS_COMPILED = False

# Nets larger than this are ignored while rating contraction partners;
# their per-pin contribution is negligible and scanning them is quadratic.
MAX_RATING_NET_SIZE = 512


def lpt_assign(weights, k, initial):
    """Greedily assign ``weights`` (sorted non-increasing) to the lightest of
    ``k`` bins preloaded with ``initial``; ties go to the lowest bin index.

    Returns ``(assignment, loads)``.
    """
    n = len(weights)
    loads = np.array(initial, dtype=np.int64, copy=True)
    assignment = np.empty(n, dtype=np.int32)
    heap = [(int(loads[b]), b) for b in range(k)]
    heapq.heapify(heap)
    for i in range(n):
        load, b = heapq.heappop(heap)
        assignment[i] = b
        load += int(weights[i])
        loads[b] = load
        heapq.heappush(heap, (load, b))
    return assignment, loads


def km1(xpins, pins, net_weights, block_of, k):
    """Connectivity objective: sum over nets of (blocks touched - 1) * weight."""
    m = len(net_weights)
    if m == 0:
        return 0
    xpins = np.asarray(xpins)
    sizes = np.diff(xpins)
    net_ids = np.repeat(np.arange(m, dtype=np.int64), sizes)
    pair = net_ids * int(k) + np.asarray(block_of, dtype=np.int64)[pins]
    uniq = np.unique(pair)
    lam = np.bincount(uniq // int(k), minlength=m)
    return int(((lam - 1) * np.asarray(net_weights, dtype=np.int64)).sum())


def match_vertices(xpins, pins, net_weights, xnets, vnets, vweights, is_fixed,
                   cap, order):
    """One round of heavy-edge matching for coarsening.

    Visits vertices in ``order``; each unmatched ordinary vertex picks the
    unmatched ordinary neighbour with the highest total net rating
    (weight / (size - 1)), skipping pairs whose merged weight exceeds
    ``cap``. Ties prefer the smaller vertex id. Returns the match array
    (``match[v] == v`` means unmatched).
    """
    n = len(vweights)
    match = np.arange(n, dtype=np.int32)
    matched = np.zeros(n, dtype=bool)
    rating = np.zeros(n, dtype=np.float64)
    touched = []
    for v in order:
        v = int(v)
        if matched[v] or is_fixed[v]:
            continue
        wv = int(vweights[v])
        touched.clear()
        for ei in range(int(xnets[v]), int(xnets[v + 1])):
            e = int(vnets[ei])
            lo, hi = int(xpins[e]), int(xpins[e + 1])
            size = hi - lo
            if size < 2 or size > MAX_RATING_NET_SIZE:
                continue
            score = int(net_weights[e]) / (size - 1)
            for pi in range(lo, hi):
                u = int(pins[pi])
                if u == v or matched[u] or is_fixed[u]:
                    continue
                if wv + int(vweights[u]) > cap:
                    continue
                if rating[u] == 0.0:
                    touched.append(u)
                rating[u] += score
        best_u = -1
        best_r = 0.0
        for u in touched:
            r = rating[u]
            if r > best_r or (r == best_r and u < best_u):
                best_r = r
                best_u = u
            rating[u] = 0.0
        if best_u >= 0:
            match[v] = best_u
            match[best_u] = v
            matched[v] = True
            matched[best_u] = True
    return match


def fm_pass(xpins, pins, net_weights, xnets, vnets, vweights, side, is_fixed,
            cap, cap_move, load0, load1, obj):
    """One Fiduccia-Mattheyses pass over a bipartition.

    Considers every movable vertex at most once in descending gain order
    (gain = connectivity decrease). A tentative move may overshoot ``cap``
    up to ``cap_move`` (the headroom that makes pairwise swaps reachable),
    or shrink an already-overweight source side. Afterwards ``side`` is
    rolled back to the best prefix, judged lexicographically by (weight
    excess over ``cap``, objective); the input state is prefix zero, so a
    feasible input never ends up worse than ``cap``.

    Returns ``(objective, load0, load1, moves_kept)`` at the best prefix.
    """
    n = len(vweights)
    m = len(net_weights)
    net_ids = np.repeat(np.arange(m, dtype=np.int64), np.diff(np.asarray(xpins)))
    side_of_pins = np.asarray(side)[pins]
    pc = np.zeros((2, m), dtype=np.int64)
    pc[0] = np.bincount(net_ids[side_of_pins == 0], minlength=m)
    pc[1] = np.bincount(net_ids[side_of_pins == 1], minlength=m)

    gains = np.zeros(n, dtype=np.int64)
    v_of_inc = np.repeat(np.arange(n, dtype=np.int64), np.diff(np.asarray(xnets)))
    e_of_inc = np.asarray(vnets, dtype=np.int64)
    sv = np.asarray(side)[v_of_inc].astype(np.int64)
    own = pc[sv, e_of_inc]
    other = pc[1 - sv, e_of_inc]
    contrib = np.asarray(net_weights, dtype=np.int64)[e_of_inc] * (
        (own == 1).astype(np.int64) - (other == 0).astype(np.int64))
    np.add.at(gains, v_of_inc, contrib)

    heap = [(-int(gains[v]), v) for v in range(n) if not is_fixed[v]]
    heapq.heapify(heap)
    consumed = np.asarray(is_fixed, dtype=bool).copy()
    loads = [int(load0), int(load1)]
    cur_obj = int(obj)
    excess = max(0, loads[0] - cap) + max(0, loads[1] - cap)
    best = (excess, cur_obj)
    best_state = (cur_obj, loads[0], loads[1], 0)
    moves = []

    while heap:
        neg_g, v = heapq.heappop(heap)
        if consumed[v]:
            continue
        gv = int(gains[v])
        if -neg_g != gv:
            heapq.heappush(heap, (-gv, v))
            continue
        consumed[v] = True
        s = int(side[v])
        t = 1 - s
        w = int(vweights[v])
        if not (loads[t] + w <= cap_move
                or (loads[s] > cap and loads[t] + w < loads[s])):
            continue
        side[v] = t
        loads[s] -= w
        loads[t] += w
        cur_obj -= gv
        moves.append(v)
        for ei in range(int(xnets[v]), int(xnets[v + 1])):
            e = int(vnets[ei])
            we = int(net_weights[e])
            lo, hi = int(xpins[e]), int(xpins[e + 1])
            a = int(pc[s, e])
            b = int(pc[t, e])
            if b == 0:
                for pi in range(lo, hi):
                    u = int(pins[pi])
                    if not consumed[u]:
                        gains[u] += we
                        heapq.heappush(heap, (-int(gains[u]), u))
            elif b == 1:
                for pi in range(lo, hi):
                    u = int(pins[pi])
                    if not consumed[u] and side[u] == t:
                        gains[u] -= we
                        heapq.heappush(heap, (-int(gains[u]), u))
            pc[s, e] = a - 1
            pc[t, e] = b + 1
            if a - 1 == 0:
                for pi in range(lo, hi):
                    u = int(pins[pi])
                    if not consumed[u]:
                        gains[u] -= we
                        heapq.heappush(heap, (-int(gains[u]), u))
            elif a - 1 == 1:
                for pi in range(lo, hi):
                    u = int(pins[pi])
                    if not consumed[u] and side[u] == s:
                        gains[u] += we
                        heapq.heappush(heap, (-int(gains[u]), u))
        excess = max(0, loads[0] - cap) + max(0, loads[1] - cap)
        if (excess, cur_obj) < best:
            best = (excess, cur_obj)
            best_state = (cur_obj, loads[0], loads[1], len(moves))

    for v in moves[best_state[3]:]:
        side[v] = 1 - side[v]
    return best_state
