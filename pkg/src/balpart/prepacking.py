"""Deep-balance checking and the prepacking construction.

A prepacking pre-assigns the heaviest vertices of a sub-instance to the two
sides of the upcoming bipartition. When the packing passes the balance
certificate checked here, *every* balanced bipartition that respects it can
still be recursively split all the way down without breaking the original
per-block bound, so the refinement heuristics are free to optimize the
objective on the remaining vertices.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .balance import (BalanceContext, adaptive_epsilon, bipartition_bound,
                      ceil_div, fits, weight_cap)
from .hypergraph import Hypergraph, Partition
from .lpt import WeightIndex, lpt_makespan
from . import _kernels

import numpy as np


@dataclass
class Prepacking:
    """A partial two-sided assignment of fixed vertices (local vertex ids),
    together with the k'-way packing it was folded from."""

    side_of: dict[int, int]
    p1_weight: int
    p2_weight: int
    k_prime: int
    packing_assignment: dict[int, int]
    packing_loads: list[int]
    exhausted: bool = False
    prefix_len: int = 0
    property_evaluations: int = 0

    @classmethod
    def empty(cls, k_prime: int = 2) -> "Prepacking":
        return cls({}, 0, 0, k_prime, {}, [0] * k_prime)

    @property
    def fixed_count(self) -> int:
        return len(self.side_of)

    @property
    def max_side_weight(self) -> int:
        return max(self.p1_weight, self.p2_weight)

    def side_arrays(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """(is_fixed, side) arrays for a hypergraph with ``n`` vertices."""
        is_fixed = np.zeros(n, dtype=np.uint8)
        side = np.zeros(n, dtype=np.int8)
        for v, s in self.side_of.items():
            is_fixed[v] = 1
            side[v] = s
        return is_fixed, side


def check_deep_balance(ctx: BalanceContext, hg_sub: Hypergraph,
                       bipartition: Partition, k1: int, k2: int) -> bool:
    """True if greedy scheduling splits both sides of ``bipartition`` into
    k1 resp. k2 blocks within the original global bound.

    One-sided: True proves the bipartition is deeply balanced; False may be
    a false negative (the scheduler is a heuristic) and only means the
    prepacking fallback is warranted.
    """
    if k1 < 1 or k2 < 1:
        raise ValueError("deep-balance check needs k1, k2 >= 1")
    w = hg_sub.vertex_weights
    blocks = bipartition.block_of
    m1 = lpt_makespan(w[blocks == 0], k1)
    m2 = lpt_makespan(w[blocks == 1], k2)
    bound = ctx.L_k_exact
    return fits(m1, bound) and fits(m2, bound)


def satisfies_balance_property(prepacking: Prepacking, index: WeightIndex,
                               ctx: BalanceContext, bound_two,
                               k1: int, k2: int) -> bool:
    """Side-separated balance certificate for a prepacking whose fixed set
    is the heaviest prefix of ``index``.

    Checks
      (i)   the stored k'-way packing keeps every bin within the global
            bound,
      (ii)  side 1: c(P1)/k1 plus the greedy-fill bound of the t1 heaviest
            ordinary vertices stays within the global bound, where t1 is
            the smallest count lifting c(P1) to the bipartition bound,
      (iii) the symmetric condition for side 2 with k2.

    All comparisons run in exact rational arithmetic under the standard
    relative guard. An unreachable threshold counts as "take all remaining
    vertices".
    """
    bound_k = ctx.L_k_exact
    for load in prepacking.packing_loads:
        if not fits(load, bound_k):
            return False
    start = prepacking.prefix_len
    n = len(index)
    for c_side, d in ((prepacking.p1_weight, k1),
                      (prepacking.p2_weight, k2)):
        t = index.smallest_t(start, c_side, bound_two)
        if t is None:
            t = n - start
        lhs = Fraction(c_side, d) + index.af_bound(start, start + t - 1, d)
        if not fits(lhs, bound_k):
            return False
    return True


def compute_prepacking(ctx: BalanceContext, hg_sub: Hypergraph,
                       k_prime: int, bound_two=None,
                       index: WeightIndex | None = None) -> Prepacking:
    """Grow a prepacking over the vertices of ``hg_sub`` in decreasing
    weight order until the balance certificate accepts it.

    Each vertex is packed into the lightest of k' bins; the bins are folded
    into two sides (first ceil(k'/2) bins vs. the rest) and, while the
    packing itself is still within bounds, the side-separated certificate
    of ``satisfies_balance_property`` is evaluated. The certificate must be
    per-side: a single test through the heavier side admits prepackings
    whose light side can still absorb unsplittable ordinary vertices (its
    window is empty exactly when the heavy side is full, not the light
    one). If no prefix is accepted, all vertices become fixed and the
    returned sides are a plain two-bin greedy schedule; ``exhausted`` marks
    that outcome.
    """
    if k_prime < 2:
        raise ValueError("prepacking needs k' >= 2")
    if index is None:
        index = WeightIndex.from_hypergraph(hg_sub)
    n = len(index)
    total = hg_sub.total_weight
    if bound_two is None:
        eps_prime = adaptive_epsilon(ctx, total, k_prime)
        bound_two = bipartition_bound(total, eps_prime)
    k1 = ceil_div(k_prime, 2)
    k2 = k_prime // 2
    cap_two = weight_cap(bound_two)
    cap_k = weight_cap(ctx.L_k_exact)
    bound_k = ctx.L_k_exact
    bound_two_frac = Fraction(bound_two)

    heap = [(0, j) for j in range(k_prime)]
    bin_loads = [0] * k_prime
    bin_of: dict[int, int] = {}
    c_p1 = 0
    c_p2 = 0
    max_load = 0
    evals = 0

    for pos in range(n):
        v = int(index.order[pos])
        w = index.weight_at(pos)
        load, j = heapq.heappop(heap)
        load += w
        bin_loads[j] = load
        heapq.heappush(heap, (load, j))
        bin_of[v] = j
        if j < k1:
            c_p1 += w
        else:
            c_p2 += w
        if load > max_load:
            max_load = load
        max_fold = max(c_p1, c_p2)
        # both quantities only ever grow, so a failed guard never recovers
        if max_load > cap_k or max_fold > cap_two:
            break
        evals += 1
        start = pos + 1
        accepted = True
        for c_side, d in ((c_p1, k1), (c_p2, k2)):
            t = index.smallest_t(start, c_side, bound_two_frac)
            if t is None:
                t = n - start
            lhs = (Fraction(c_side, d)
                   + index.af_bound(start, start + t - 1, d))
            if not fits(lhs, bound_k):
                accepted = False
                break
        if accepted:
            side_of = {int(index.order[i]): (0 if bin_of[int(index.order[i])] < k1 else 1)
                       for i in range(pos + 1)}
            return Prepacking(side_of, c_p1, c_p2, k_prime, dict(bin_of),
                              list(bin_loads), exhausted=False,
                              prefix_len=pos + 1,
                              property_evaluations=evals)

    # no prefix certified: fix everything, sides from a two-bin schedule
    return _exhausted_prepacking(index, k_prime, bin_of, bin_loads, evals)


def _exhausted_prepacking(index: WeightIndex, k_prime: int,
                          bin_of: dict[int, int], bin_loads: list[int],
                          evals: int) -> Prepacking:
    """All vertices fixed; the sides are the plain two-bin greedy schedule
    of the full weight sequence."""
    n = len(index)
    assignment, loads = _kernels.lpt_assign(index.sorted_weights, 2,
                                            np.zeros(2, dtype=np.int64))
    side_of = {int(index.order[i]): int(assignment[i]) for i in range(n)}
    # complete the k'-way packing over the tail for provenance
    heap = [(bin_loads[j], j) for j in range(k_prime)]
    heapq.heapify(heap)
    packing = dict(bin_of)
    packing_loads = list(bin_loads)
    for pos in range(len(bin_of), n):
        v = int(index.order[pos])
        w = index.weight_at(pos)
        load, j = heapq.heappop(heap)
        load += w
        packing_loads[j] = load
        heapq.heappush(heap, (load, j))
        packing[v] = j
    return Prepacking(side_of, int(loads[0]), int(loads[1]), k_prime,
                      packing, packing_loads, exhausted=True, prefix_len=n,
                      property_evaluations=evals)
