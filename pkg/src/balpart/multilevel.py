"""Multilevel bipartitioning with fixed-vertex support: heavy-edge
coarsening, portfolio initial partitioning, and pass-based FM refinement
under an explicit block-weight bound."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .balance import ceil_div, weight_cap
from .hypergraph import Hypergraph, Partition, _from_csr
from .prepacking import Prepacking

COARSEN_FLOOR = 160
COARSEN_MIN_SHRINK = 0.05
VERTEX_CAP_DIVISOR = 16  # coarse vertices stay below total/(2 blocks * 8)
DEFAULT_TRIALS = 16
DEFAULT_MAX_PASSES = 8


@dataclass
class CoarseLevel:
    """One contraction step: the finer hypergraph, the coarser one, and the
    fine-to-coarse vertex map, plus the projected fixed-vertex state."""

    fine: Hypergraph
    coarse: Hypergraph
    cmap: np.ndarray
    coarse_fixed: np.ndarray
    coarse_side: np.ndarray


@dataclass
class RefineStats:
    """Per-pass bookkeeping of one refinement run."""

    objective_initial: int = 0
    objective_final: int = 0
    pass_objectives: list[int] = field(default_factory=list)
    pass_loads: list[tuple[int, int]] = field(default_factory=list)
    pass_moves: list[int] = field(default_factory=list)


@dataclass
class BipartitionResult:
    partition: Partition
    balanced: bool
    objective: int
    loads: tuple[int, int]
    num_levels: int = 0


def _contract(hg: Hypergraph, match: np.ndarray):
    """Merge matched vertex pairs; returns (coarse hypergraph, fine->coarse
    map). Nets shrink to their distinct coarse pins; single-pin nets are
    dropped (they can never be cut again)."""
    n = hg.num_vertices
    ids = np.arange(n, dtype=np.int64)
    rep = np.minimum(ids, match.astype(np.int64))
    is_rep = rep == ids
    coarse_of_rep = np.cumsum(is_rep) - 1
    cmap = coarse_of_rep[rep].astype(np.int32)
    nc = int(is_rep.sum())
    cw = np.zeros(nc, dtype=np.int64)
    np.add.at(cw, cmap, hg.vertex_weights)

    m = hg.num_nets
    if m == 0:
        return _from_csr(cw, np.empty(0, np.int64), np.zeros(1, np.int64),
                         np.empty(0, np.int32)), cmap
    sizes = np.diff(hg.xpins)
    net_ids = np.repeat(np.arange(m, dtype=np.int64), sizes)
    cpins = cmap[hg.pins].astype(np.int64)
    order = np.lexsort((cpins, net_ids))
    sn = net_ids[order]
    sp = cpins[order]
    first = np.ones(len(sp), dtype=bool)
    if len(sp) > 1:
        first[1:] = (sn[1:] != sn[:-1]) | (sp[1:] != sp[:-1])
    kn = sn[first]
    kp = sp[first]
    csizes = np.bincount(kn, minlength=m)
    keep_net = csizes >= 2
    keep_pin = keep_net[kn]
    new_sizes = csizes[keep_net]
    xpins = np.zeros(len(new_sizes) + 1, dtype=np.int64)
    np.cumsum(new_sizes, out=xpins[1:])
    coarse = _from_csr(cw, hg.net_weights[keep_net], xpins,
                       kp[keep_pin].astype(np.int32))
    return coarse, cmap


def coarsen(hg: Hypergraph, fixed: Prepacking, max_vertex_weight: int,
            rng=None, floor: int = COARSEN_FLOOR) -> list[CoarseLevel]:
    """Repeated heavy-edge matching rounds. A contraction is rejected when
    the merged weight would exceed ``max_vertex_weight``; fixed vertices are
    never contracted. Stops when a round shrinks the vertex count by less
    than 5% or the count reaches ``floor``."""
    if rng is None:
        rng = np.random.default_rng(0)
    is_fixed, side = fixed.side_arrays(hg.num_vertices)
    levels: list[CoarseLevel] = []
    cur, cur_fixed, cur_side = hg, is_fixed, side
    while cur.num_vertices > floor:
        order = rng.permutation(cur.num_vertices).astype(np.int32)
        match = _kernels.match_vertices(
            cur.xpins, cur.pins, cur.net_weights, cur.xnets, cur.vnets,
            cur.vertex_weights, cur_fixed, max_vertex_weight, order)
        pairs = int((match != np.arange(cur.num_vertices)).sum()) // 2
        if pairs == 0:
            break
        coarse, cmap = _contract(cur, match)
        nxt_fixed = np.zeros(coarse.num_vertices, dtype=np.uint8)
        nxt_side = np.zeros(coarse.num_vertices, dtype=np.int8)
        nxt_fixed[cmap[cur_fixed == 1]] = 1
        nxt_side[cmap[cur_fixed == 1]] = cur_side[cur_fixed == 1]
        levels.append(CoarseLevel(cur, coarse, cmap, nxt_fixed, nxt_side))
        shrunk = cur.num_vertices - coarse.num_vertices
        too_slow = shrunk < COARSEN_MIN_SHRINK * cur.num_vertices
        cur, cur_fixed, cur_side = coarse, nxt_fixed, nxt_side
        if too_slow:
            break
    return levels


def _score(hg: Hypergraph, side: np.ndarray, cap: int) -> tuple[int, int]:
    """(weight excess over cap, objective) — lower is better."""
    loads = _side_loads(hg, side)
    excess = max(0, loads[0] - cap) + max(0, loads[1] - cap)
    return excess, _kernels.km1(hg.xpins, hg.pins, hg.net_weights, side, 2)


def _side_loads(hg: Hypergraph, side: np.ndarray) -> tuple[int, int]:
    l1 = int(hg.vertex_weights[side == 1].sum())
    return hg.total_weight - l1, l1


def _candidate_lpt_fold(hg, is_fixed, side_fixed, fixed_loads):
    side = side_fixed.copy()
    ordinary = np.flatnonzero(is_fixed == 0)
    if len(ordinary):
        w = hg.vertex_weights[ordinary]
        order = np.lexsort((ordinary, -w))
        assignment, _ = _kernels.lpt_assign(
            np.ascontiguousarray(w[order]), 2,
            np.asarray(fixed_loads, dtype=np.int64))
        side[ordinary[order]] = assignment.astype(np.int8)
    return side


def _candidate_random_fill(hg, is_fixed, side_fixed, fixed_loads, cap, rng):
    side = side_fixed.copy()
    w = hg.vertex_weights
    loads = [fixed_loads[0], fixed_loads[1]]
    for v in rng.permutation(np.flatnonzero(is_fixed == 0)):
        wv = int(w[v])
        room0 = cap - loads[0]
        room1 = cap - loads[1]
        if room0 >= room1:
            s = 0 if wv <= room0 else (1 if wv <= room1 else
                                       (0 if loads[0] <= loads[1] else 1))
        else:
            s = 1 if wv <= room1 else (0 if wv <= room0 else
                                       (0 if loads[0] <= loads[1] else 1))
        side[v] = s
        loads[s] += wv
    return side


def _candidate_net_growth(hg, is_fixed, side_fixed, fixed_loads, cap, rng):
    """Grow side 0 from a random seed vertex along incident nets until it
    holds about half the weight; the rest goes to side 1."""
    side = side_fixed.copy()
    ordinary = np.flatnonzero(is_fixed == 0)
    side[ordinary] = 1
    w = hg.vertex_weights
    xpins, pins = hg.xpins, hg.pins
    xnets, vnets = hg.xnets, hg.vnets
    target = hg.total_weight // 2
    load0 = fixed_loads[0]
    visited = (is_fixed == 1)
    dq: deque[int] = deque()
    for seed_v in rng.permutation(ordinary):
        if load0 >= target:
            break
        if visited[seed_v]:
            continue
        visited[seed_v] = True
        dq.append(int(seed_v))
        while dq and load0 < target:
            v = dq.popleft()
            wv = int(w[v])
            if load0 + wv > cap:
                continue
            side[v] = 0
            load0 += wv
            for ei in range(int(xnets[v]), int(xnets[v + 1])):
                e = int(vnets[ei])
                for pi in range(int(xpins[e]), int(xpins[e + 1])):
                    u = int(pins[pi])
                    if not visited[u]:
                        visited[u] = True
                        dq.append(u)
    return side


def initial_bipartition(hg: Hypergraph, prepack: Prepacking, bound_two,
                        seed, trials: int = DEFAULT_TRIALS) -> Partition:
    """Best of ``trials`` candidate bipartitions (greedy schedule fold,
    random fill, net growth), scored by balance under ``bound_two`` first
    and connectivity second. Fixed vertices are pre-assigned and immovable;
    the result may be flagged imbalanced when no candidate fits."""
    rng = np.random.default_rng(seed)
    side = _initial_side(hg, *prepack.side_arrays(hg.num_vertices),
                         weight_cap(bound_two), rng, trials)
    return Partition.from_block_of(hg, side.astype(np.int32), 2)


def _initial_side(hg, is_fixed, side_fixed, cap, rng, trials):
    fixed_loads = (
        int(hg.vertex_weights[(is_fixed == 1) & (side_fixed == 0)].sum()),
        int(hg.vertex_weights[(is_fixed == 1) & (side_fixed == 1)].sum()))
    best_side = _candidate_lpt_fold(hg, is_fixed, side_fixed, fixed_loads)
    best_score = _score(hg, best_side, cap)
    for t in range(max(0, trials - 1)):
        if t % 2 == 0:
            cand = _candidate_random_fill(hg, is_fixed, side_fixed,
                                          fixed_loads, cap, rng)
        else:
            cand = _candidate_net_growth(hg, is_fixed, side_fixed,
                                         fixed_loads, cap, rng)
        score = _score(hg, cand, cap)
        if score < best_score:
            best_side, best_score = cand, score
    return best_side


def _refine_side(hg, side, is_fixed, cap, max_passes, stats, validate=False):
    """Run FM passes until one yields no improvement."""
    loads = _side_loads(hg, side)
    obj = _kernels.km1(hg.xpins, hg.pins, hg.net_weights, side, 2)
    stats.objective_initial = obj
    # headroom so that the heaviest movable vertex can cross tentatively;
    # the best-prefix rollback still enforces the true cap on the result
    movable = hg.vertex_weights[is_fixed == 0]
    cap_move = cap + (int(movable.max()) if len(movable) else 0)
    l0, l1 = loads
    for _ in range(max_passes):
        obj, l0, l1, kept = _kernels.fm_pass(
            hg.xpins, hg.pins, hg.net_weights, hg.xnets, hg.vnets,
            hg.vertex_weights, side, is_fixed, cap, cap_move, l0, l1, obj)
        stats.pass_objectives.append(obj)
        stats.pass_loads.append((l0, l1))
        stats.pass_moves.append(kept)
        if validate:
            fresh = _kernels.km1(hg.xpins, hg.pins, hg.net_weights, side, 2)
            if fresh != obj:
                raise AssertionError(
                    f"incremental objective {obj} != recomputed {fresh}")
        if kept == 0:
            break
    stats.objective_final = obj
    return obj, (l0, l1)


def fm_refine(hg: Hypergraph, partition: Partition, fixed: Prepacking,
              bound_two, max_passes: int = DEFAULT_MAX_PASSES,
              validate: bool = False) -> tuple[Partition, RefineStats]:
    """Pass-based FM refinement of a bipartition under ``bound_two``.

    Never unfixes a vertex, never increases connectivity, and never pushes
    a block past the bound if the input satisfied it; an input already in
    violation is first steered toward balance."""
    is_fixed, fixed_side = fixed.side_arrays(hg.num_vertices)
    side = partition.block_of.astype(np.int8).copy()
    if np.any((is_fixed == 1) & (side != fixed_side)):
        raise ValueError("partition does not respect the fixed vertices")
    stats = RefineStats()
    _refine_side(hg, side, is_fixed, weight_cap(bound_two), max_passes,
                 stats, validate)
    return Partition.from_block_of(hg, side.astype(np.int32), 2), stats


def multilevel_bipartition(hg_sub: Hypergraph, bound_two,
                           prepack: Prepacking, seed,
                           trials: int = DEFAULT_TRIALS,
                           max_passes: int = DEFAULT_MAX_PASSES,
                           validate: bool = False) -> BipartitionResult:
    """Coarsen, bipartition the coarsest level, then uncoarsen with FM
    refinement per level. Fixed vertices keep their side throughout."""
    n = hg_sub.num_vertices
    is_fixed, fixed_side = prepack.side_arrays(n)
    cap = weight_cap(bound_two)
    rng = np.random.default_rng(seed)

    ordinary_w = hg_sub.vertex_weights[is_fixed == 0]
    heaviest = int(ordinary_w.max()) if len(ordinary_w) else 1
    vertex_cap = max(ceil_div(hg_sub.total_weight, VERTEX_CAP_DIVISOR),
                     heaviest)
    levels = coarsen(hg_sub, prepack, vertex_cap, rng=rng)

    if levels:
        top = levels[-1]
        top_hg, top_fixed, top_side_fixed = top.coarse, top.coarse_fixed, \
            top.coarse_side
    else:
        top_hg, top_fixed, top_side_fixed = hg_sub, is_fixed, fixed_side

    side = _initial_side(top_hg, top_fixed, top_side_fixed, cap, rng, trials)
    stats = RefineStats()
    _refine_side(top_hg, side, top_fixed, cap, max_passes, stats, validate)

    for i in range(len(levels) - 1, -1, -1):
        level = levels[i]
        side = side[level.cmap]
        fine_fixed = levels[i - 1].coarse_fixed if i > 0 else is_fixed
        stats = RefineStats()
        _refine_side(level.fine, side, fine_fixed, cap, max_passes, stats,
                     validate)

    loads = _side_loads(hg_sub, side)
    obj = _kernels.km1(hg_sub.xpins, hg_sub.pins, hg_sub.net_weights, side, 2)
    balanced = loads[0] <= cap and loads[1] <= cap
    part = Partition.from_block_of(hg_sub, side.astype(np.int32), 2)
    return BipartitionResult(part, balanced, obj, loads, len(levels))
