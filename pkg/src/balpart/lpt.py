"""Longest-processing-time scheduling, its worst-case fill bound, and the
weight-index structures (prefix sums + range-maximum table) behind the
prepacking certificate. Includes the exhaustive oracle used by the tests."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels

ORACLE_MAX_N = 14
ORACLE_MAX_K = 4


@dataclass(frozen=True)
class LptResult:
    """Outcome of a greedy lightest-bin assignment."""

    assignment: np.ndarray  # bin id per input item
    loads: np.ndarray       # final bin loads, including initial fill
    makespan: int

    @property
    def bins(self) -> list[list[int]]:
        """Item indices grouped by bin."""
        out: list[list[int]] = [[] for _ in range(len(self.loads))]
        for i, b in enumerate(self.assignment):
            out[int(b)].append(i)
        return out


def lpt_extend(weights_desc, k: int, initial_bins=None,
               bin_assignments=None) -> LptResult:
    """Assign ``weights_desc`` (sorted non-increasing) one by one to the
    currently lightest of ``k`` bins, preloaded with ``initial_bins``.

    Ties break to the lowest bin index, which makes the result
    deterministic. ``bin_assignments``, if given, must be ``k`` lists of
    labels already occupying the bins; they are echoed into the result's
    ``bins`` through the returned loads only (labels are caller-side).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    w = np.asarray(list(weights_desc), dtype=np.int64)
    if len(w) > 1 and np.any(np.diff(w) > 0):
        raise ValueError("weights must be sorted in non-increasing order")
    if initial_bins is None:
        initial = np.zeros(k, dtype=np.int64)
    else:
        initial = np.asarray(list(initial_bins), dtype=np.int64)
        if len(initial) != k:
            raise ValueError(f"expected {k} initial bins, got {len(initial)}")
    if bin_assignments is not None and len(bin_assignments) != k:
        raise ValueError(f"expected {k} bin assignment lists")
    assignment, loads = _kernels.lpt_assign(w, k, initial)
    return LptResult(assignment, loads, int(loads.max()))


def lpt_makespan(weights, k: int) -> int:
    """Makespan of plain LPT scheduling (weights sorted internally)."""
    w = np.sort(np.asarray(list(weights), dtype=np.int64))[::-1]
    if len(w) == 0:
        return 0
    _, loads = _kernels.lpt_assign(np.ascontiguousarray(w), k,
                                   np.zeros(k, dtype=np.int64))
    return int(loads.max())


def brute_force_most_balanced(weights, k: int) -> int:
    """Exact minimum achievable heaviest-bin weight, by exhaustive search.

    Deliberately independent of the greedy scheduler so it can serve as a
    test oracle. Guard-railed to small instances.
    """
    w = sorted((int(x) for x in weights), reverse=True)
    n = len(w)
    if n > ORACLE_MAX_N or k > ORACLE_MAX_K:
        raise ValueError(
            f"oracle limited to n <= {ORACLE_MAX_N}, k <= {ORACLE_MAX_K} "
            f"(got n={n}, k={k})")
    if k < 1:
        raise ValueError("k must be >= 1")
    if n == 0:
        return 0
    if k == 1:
        return sum(w)
    if k == 2:
        return _opt2_subset_sums(w)
    return _opt_dfs(w, k)


def _opt2_subset_sums(w: list[int]) -> int:
    """k=2: enumerate all reachable subset sums with a bitmask."""
    total = sum(w)
    reachable = 1
    for x in w:
        reachable |= reachable << x
    best = total
    s = 0
    while reachable:
        if reachable & 1:
            best = min(best, max(s, total - s))
        reachable >>= 1
        s += 1
    return best


def _opt_dfs(w: list[int], k: int) -> int:
    """k in {3, 4}: branch and bound over canonical bin assignments."""
    n = len(w)
    # greedy seed for pruning; exactness comes from the exhaustive search
    seed_loads = [0] * k
    for x in w:
        seed_loads[seed_loads.index(min(seed_loads))] += x
    best = max(seed_loads)
    loads = [0] * k
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + w[i]

    def rec(i: int, used: int, cur_max: int):
        nonlocal best
        if cur_max >= best:
            return
        if i == n:
            best = cur_max
            return
        # lower bound: remaining weight spread perfectly over k bins
        lb = max(cur_max, (sum(loads) + suffix[i] + k - 1) // k)
        if lb >= best:
            return
        x = w[i]
        seen = set()
        limit = min(used + 1, k)  # open at most one new bin (symmetry)
        for b in range(limit):
            if loads[b] in seen:
                continue
            seen.add(loads[b])
            loads[b] += x
            rec(i + 1, max(used, b + 1), max(cur_max, loads[b]))
            loads[b] -= x
    rec(0, 0, 0)
    return best


def af_bound_seq(weights, divisor: int) -> Fraction:
    """Greedy-fill bound of an explicit sequence: the max over prefixes of
    (item weight + sum of heavier items / divisor). Exact rational; the
    empty sequence gives 0.

    This direct evaluation is the naive counterpart of the indexed
    ``WeightIndex.af_bound`` and is kept independent for testing.
    """
    if divisor < 1:
        raise ValueError("divisor must be >= 1")
    best = Fraction(0)
    acc = 0
    for w in weights:
        cand = Fraction(int(w) * divisor + acc, divisor)
        if cand > best:
            best = cand
        acc += int(w)
    return best


class SparseMaxTable:
    """O(1) range-maximum queries over a static int64 array after an
    O(n log n) build."""

    def __init__(self, values: np.ndarray):
        values = np.ascontiguousarray(values, dtype=np.int64)
        self._levels = [values]
        n = len(values)
        j = 1
        while (1 << j) <= n:
            prev = self._levels[-1]
            half = 1 << (j - 1)
            self._levels.append(np.maximum(prev[:n - (1 << j) + 1],
                                           prev[half:n - (1 << j) + 1 + half]))
            j += 1

    def query(self, lo: int, hi: int) -> int:
        """Maximum over the inclusive index range [lo, hi]."""
        if lo > hi:
            raise IndexError(f"bad range [{lo}, {hi}]")
        span = hi - lo + 1
        j = span.bit_length() - 1
        level = self._levels[j]
        return int(max(level[lo], level[hi - (1 << j) + 1]))


class WeightIndex:
    """Vertices in decreasing-weight order with prefix sums and, per
    divisor, a range-maximum table over the divisor-scaled fill values.

    ``scaled(d)[i] = d * w[i] + prefix[i]`` is ``d`` times the fill value
    of position ``i``, kept integral so that all queries stay exact.
    """

    def __init__(self, weights, ids=None):
        w = np.asarray(list(weights), dtype=np.int64)
        n = len(w)
        if ids is None:
            ids = np.arange(n, dtype=np.int64)
        else:
            ids = np.asarray(list(ids), dtype=np.int64)
        # decreasing weight, ties by increasing id
        order = np.lexsort((ids, -w))
        self.order = ids[order]
        self.sorted_weights = w[order]
        self.prefix = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(self.sorted_weights, out=self.prefix[1:])
        self._scaled: dict[int, tuple[np.ndarray, SparseMaxTable]] = {}

    @classmethod
    def from_hypergraph(cls, hg) -> "WeightIndex":
        return cls(hg.vertex_weights)

    def __len__(self):
        return len(self.sorted_weights)

    def weight_at(self, pos: int) -> int:
        return int(self.sorted_weights[pos])

    def prefix_weight(self, count: int) -> int:
        """Total weight of the ``count`` heaviest vertices."""
        return int(self.prefix[count])

    def _table(self, d: int) -> tuple[np.ndarray, SparseMaxTable]:
        if d < 1:
            raise ValueError("divisor must be >= 1")
        entry = self._scaled.get(d)
        if entry is None:
            scaled = d * self.sorted_weights + self.prefix[:-1]
            entry = (scaled, SparseMaxTable(scaled))
            self._scaled[d] = entry
        return entry

    def range_max(self, d: int, lo: int, hi: int) -> Fraction:
        """Max fill value w[i] + prefix[i]/d over positions [lo, hi]
        (inclusive, 0-indexed), as an exact rational."""
        n = len(self)
        if lo < 0 or hi >= n or lo > hi:
            raise IndexError(f"bad range [{lo}, {hi}] for {n} positions")
        _, table = self._table(d)
        return Fraction(table.query(lo, hi), d)

    def af_bound(self, lo: int, hi: int, d: int) -> Fraction:
        """Greedy-fill bound of the window [lo, hi] (inclusive): the
        window-local version of ``af_bound_seq`` answered in O(1).

        An empty window (lo > hi) gives 0.
        """
        if lo > hi:
            return Fraction(0)
        n = len(self)
        if lo < 0 or hi >= n:
            raise IndexError(f"bad range [{lo}, {hi}] for {n} positions")
        _, table = self._table(d)
        return Fraction(table.query(lo, hi) - int(self.prefix[lo]), d)

    def smallest_t(self, start_pos: int, base_weight, threshold):
        """Smallest t >= 0 with base_weight + (weight of the t heaviest
        vertices at or after ``start_pos``) >= threshold, or None if even
        taking all of them falls short."""
        n = len(self)
        if start_pos < 0 or start_pos > n:
            raise IndexError(f"bad start position {start_pos}")
        base = Fraction(base_weight)
        target = Fraction(threshold) - base
        if target <= 0:
            return 0
        # prefix sums are strictly increasing (weights positive), so a
        # binary search on the absolute prefix array finds the window size
        target_abs = target + int(self.prefix[start_pos])
        pos = bisect.bisect_left(self.prefix, target_abs, start_pos, n + 1)
        if pos > n:
            return None
        return pos - start_pos


# Thin wrappers so the index operations are also reachable as module-level
# functions.

def af_bound(index: WeightIndex, lo: int, hi: int, divisor: int) -> Fraction:
    return index.af_bound(lo, hi, divisor)


def range_max(index: WeightIndex, divisor: int, lo: int, hi: int) -> Fraction:
    return index.range_max(divisor, lo, hi)


def smallest_t(index: WeightIndex, start_pos: int, base_weight, threshold):
    return index.smallest_t(start_pos, base_weight, threshold)
