"""Recursive bipartitioning with deep-balance checks and prepacking
restarts, plus the end-to-end pipeline (heavy-vertex preprocessing, the
modified imbalance, and re-attachment of removed vertices)."""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .balance import (BalanceContext, adaptive_epsilon, bipartition_bound,
                      ceil_div, fits, modified_epsilon,
                      preprocess_remove_heavy, weight_cap)
from .hypergraph import (Hypergraph, HypergraphError, Partition, VertexSubset,
                         connectivity, subhypergraph)
from .lpt import lpt_makespan
from .multilevel import (DEFAULT_MAX_PASSES, DEFAULT_TRIALS,
                         BipartitionResult, multilevel_bipartition)
from .prepacking import Prepacking, check_deep_balance, compute_prepacking


@dataclass
class DriverStats:
    """Aggregated instrumentation of one recursive-bipartitioning run."""

    bipartition_calls: int = 0
    deep_checks: int = 0
    deep_check_failures: int = 0
    prepack_triggered: int = 0
    prepack_exhausted: int = 0
    fixed_vertices_total: int = 0
    property_evaluations: int = 0
    restarts: int = 0
    uncertified_nodes: int = 0

    def merge(self, other: "DriverStats") -> None:
        for name in self.__dataclass_fields__:
            setattr(self, name, getattr(self, name) + getattr(other, name))


@dataclass
class RBResult:
    partition: Partition
    stats: DriverStats
    certified: bool


class _ThreadBudget:
    """Permits for running recursion children concurrently; acquiring never
    blocks, so an exhausted budget just means inline execution."""

    def __init__(self, extra_threads: int):
        self._sem = threading.Semaphore(max(0, extra_threads))

    def try_acquire(self) -> bool:
        return self._sem.acquire(blocking=False)

    def release(self) -> None:
        self._sem.release()


def _lpt_bipartition(hg_node: Hypergraph, cap: int) -> BipartitionResult:
    """Deterministic two-bin greedy schedule of all vertices; the fallback
    bipartition when nothing better is balanced."""
    n = hg_node.num_vertices
    w = hg_node.vertex_weights
    order = np.lexsort((np.arange(n), -w))
    assignment, loads = _kernels.lpt_assign(
        np.ascontiguousarray(w[order]), 2, np.zeros(2, dtype=np.int64))
    side = np.empty(n, dtype=np.int32)
    side[order] = assignment
    part = Partition.from_block_of(hg_node, side, 2)
    obj = connectivity(hg_node, part)
    l0, l1 = int(loads[0]), int(loads[1])
    return BipartitionResult(part, l0 <= cap and l1 <= cap, obj, (l0, l1))


def _result_score(res: BipartitionResult, cap: int) -> tuple[int, int]:
    excess = max(0, res.loads[0] - cap) + max(0, res.loads[1] - cap)
    return excess, res.objective


def recursive_bipartition(hg: Hypergraph, k: int, epsilon: float, seed,
                          trials: int = DEFAULT_TRIALS,
                          max_passes: int = DEFAULT_MAX_PASSES,
                          threads: int = 1) -> RBResult:
    """Split ``hg`` into ``k`` blocks by recursive bipartitioning.

    Before recursing, each bipartition is checked for deep balance with the
    greedy scheduler; on failure the bipartition is recomputed around a
    prepacking of the heaviest vertices. A node whose bipartition stays
    over the bound proceeds with the best attempt and drops the
    feasibility-certified flag. Expects preprocessed input (no vertex above
    its bound); infeasibility is reported, never raised.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if hg.num_vertices == 0:
        raise HypergraphError("empty hypergraph")
    ctx = BalanceContext.for_hypergraph(hg, k, epsilon)
    budget = _ThreadBudget(threads - 1)
    blocks, stats, certified = _solve_node(hg, k, ctx, int(seed), (),
                                           trials, max_passes, budget)
    return RBResult(Partition.from_block_of(hg, blocks, k), stats, certified)


def _solve_node(hg_node, k_prime, ctx, seed, path, trials, max_passes,
                budget):
    """Returns (block ids in [0, k'), stats, certified) for one node."""
    stats = DriverStats()
    n = hg_node.num_vertices
    if k_prime == 1:
        return (np.zeros(n, dtype=np.int32), stats,
                fits(hg_node.total_weight, ctx.L_k_exact))

    if k_prime == 2:
        # both sides are final blocks: the original bound is binding here,
        # not the per-step bound, whose ceiling can sit one unit above it
        bound_two = ctx.L_k_exact
    else:
        eps_prime = adaptive_epsilon(ctx, hg_node.total_weight, k_prime)
        bound_two = bipartition_bound(hg_node.total_weight, eps_prime)
    cap = weight_cap(bound_two)
    k1 = ceil_div(k_prime, 2)
    k2 = k_prime // 2

    rng_key = np.random.SeedSequence(seed, spawn_key=(*path, 0))
    res = multilevel_bipartition(hg_node, bound_two, Prepacking.empty(k_prime),
                                 rng_key, trials, max_passes)
    stats.bipartition_calls += 1
    chosen = res
    certified = True

    if k_prime > 2:
        stats.deep_checks += 1
        deep_ok = check_deep_balance(ctx, hg_node, res.partition, k1, k2)
        if not deep_ok:
            stats.deep_check_failures += 1
            stats.prepack_triggered += 1
            prepack = compute_prepacking(ctx, hg_node, k_prime, bound_two)
            stats.fixed_vertices_total += prepack.fixed_count
            stats.property_evaluations += prepack.property_evaluations
            if prepack.exhausted:
                stats.prepack_exhausted += 1
            rng_key2 = np.random.SeedSequence(seed, spawn_key=(*path, 1))
            res2 = multilevel_bipartition(hg_node, bound_two, prepack,
                                          rng_key2, trials, max_passes)
            stats.bipartition_calls += 1
            stats.restarts += 1
            if res2.balanced:
                chosen = res2
                certified = not prepack.exhausted
            else:
                candidates = [res, res2]
                if not prepack.exhausted:
                    candidates.append(_lpt_bipartition(hg_node, cap))
                    stats.restarts += 1
                chosen = min(candidates, key=lambda r: _result_score(r, cap))
                certified = False
    elif not chosen.balanced:
        fallback = _lpt_bipartition(hg_node, cap)
        stats.restarts += 1
        chosen = min([chosen, fallback], key=lambda r: _result_score(r, cap))
        certified = chosen.balanced

    if not chosen.balanced:
        stats.uncertified_nodes += 1
        certified = False

    if k_prime == 2:
        return chosen.partition.block_of.copy(), stats, certified

    side = chosen.partition.block_of
    idx0 = np.flatnonzero(side == 0)
    idx1 = np.flatnonzero(side == 1)
    blocks = np.empty(n, dtype=np.int32)

    def _child(idx, k_child, branch):
        if len(idx) == 0:
            return np.empty(0, dtype=np.int32), DriverStats(), True
        sub = subhypergraph(hg_node,
                            VertexSubset.from_ids(idx, n))
        return _solve_node(sub, k_child, ctx, seed, (*path, branch), trials,
                           max_passes, budget)

    if budget.try_acquire():
        holder: dict = {}

        def _run():
            try:
                holder["res"] = _child(idx0, k1, 2)
            except BaseException as exc:  # propagate into the parent
                holder["exc"] = exc

        worker = threading.Thread(target=_run)
        worker.start()
        try:
            blocks1, stats1, cert1 = _child(idx1, k2, 3)
        finally:
            worker.join()
            budget.release()
        if "exc" in holder:
            raise holder["exc"]
        blocks0, stats0, cert0 = holder["res"]
    else:
        blocks0, stats0, cert0 = _child(idx0, k1, 2)
        blocks1, stats1, cert1 = _child(idx1, k2, 3)

    blocks[idx0] = blocks0
    blocks[idx1] = blocks1 + k1
    stats.merge(stats0)
    stats.merge(stats1)
    return blocks, stats, certified and cert0 and cert1


@dataclass
class PipelineReport:
    """Everything the CLI reports about one partitioning run."""

    num_vertices: int
    num_nets: int
    k: int
    k_prime: int
    epsilon: float
    epsilon_hat: float
    seed: int
    removed_vertices: list[int]
    km1: int
    km1_reduced: int
    alpha: int
    block_weights: list[int]
    max_block_weight: int
    bound_l_lpt: float
    bound_standard: float
    balanced: bool
    certified: bool
    empty_blocks: list[int]
    prepack_triggered: int
    prepack_exhausted: int
    fixed_vertex_fraction: float
    deep_checks: int
    deep_check_failures: int
    restarts: int
    runtime_s: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def partition_pipeline(hg: Hypergraph, k: int, epsilon: float, seed,
                       trials: int = DEFAULT_TRIALS,
                       max_passes: int = DEFAULT_MAX_PASSES,
                       threads: int = 1) -> tuple[Partition, PipelineReport]:
    """Preprocess, partition the reduced instance into k' blocks under the
    modified imbalance, then re-attach each removed vertex as its own
    block. The balance verdict is recomputed from scratch against the
    attainable bound."""
    started = time.perf_counter()
    if k < 1:
        raise ValueError("k must be >= 1")
    pre = preprocess_remove_heavy(hg, k, epsilon)
    hg_red = subhypergraph(hg, pre.subset)
    k_prime = pre.k_prime
    eps_hat = modified_epsilon(hg_red, k_prime, epsilon)

    rb = recursive_bipartition(hg_red, k_prime, eps_hat, seed, trials,
                               max_passes, threads)

    n_removed = len(pre.removed)
    k_total = k_prime + n_removed
    block_of = np.empty(hg.num_vertices, dtype=np.int32)
    block_of[pre.subset.ids] = rb.partition.block_of
    for i, v in enumerate(pre.removed):
        block_of[v] = k_prime + i
    part_full = Partition.from_block_of(hg, block_of, k_total)

    km1_full = connectivity(hg, part_full)
    km1_red = connectivity(hg_red, rb.partition)

    makespan = lpt_makespan(hg_red.vertex_weights, k_prime)
    bound_exact = (1 + Fraction(epsilon)) * makespan
    reduced_weights = [int(x) for x in rb.partition.block_weights]
    balanced = all(fits(w, bound_exact) for w in reduced_weights)

    n_red = hg_red.num_vertices
    report = PipelineReport(
        num_vertices=hg.num_vertices,
        num_nets=hg.num_nets,
        k=k,
        k_prime=k_prime,
        epsilon=epsilon,
        epsilon_hat=eps_hat,
        seed=int(seed),
        removed_vertices=list(pre.removed),
        km1=km1_full,
        km1_reduced=km1_red,
        alpha=km1_full - km1_red,
        block_weights=[int(x) for x in part_full.block_weights],
        max_block_weight=max(reduced_weights) if reduced_weights else 0,
        bound_l_lpt=float(bound_exact),
        bound_standard=float((1 + Fraction(epsilon))
                             * ceil_div(hg_red.total_weight, k_prime)),
        balanced=balanced,
        certified=rb.certified,
        empty_blocks=part_full.empty_blocks(),
        prepack_triggered=rb.stats.prepack_triggered,
        prepack_exhausted=rb.stats.prepack_exhausted,
        fixed_vertex_fraction=(rb.stats.fixed_vertices_total / n_red
                               if n_red else 0.0),
        deep_checks=rb.stats.deep_checks,
        deep_check_failures=rb.stats.deep_check_failures,
        restarts=rb.stats.restarts,
        runtime_s=time.perf_counter() - started,
    )
    return part_full, report
