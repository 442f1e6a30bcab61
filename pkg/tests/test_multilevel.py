import numpy as np
import pytest

import balpart as bp
from balpart import _kernels
from balpart.multilevel import (coarsen, fm_refine, initial_bipartition,
                                multilevel_bipartition)
from balpart.prepacking import Prepacking

from conftest import random_hypergraph


class TestCoarsen:
    def test_pair_contraction(self):
        hg = bp.build_hypergraph([1, 1], [[0, 1]])
        levels = coarsen(hg, Prepacking.empty(), 4, floor=1)
        assert len(levels) == 1
        assert levels[0].coarse.num_vertices == 1
        assert levels[0].coarse.vertex_weights[0] == 2

    def test_weight_cap_blocks_contraction(self):
        hg = bp.build_hypergraph([5, 5], [[0, 1]])
        levels = coarsen(hg, Prepacking.empty(), 8, floor=1)
        assert levels == []

    def test_fixed_vertex_never_contracted(self, rng):
        hg = bp.build_hypergraph([1, 1, 1], [[0, 1], [1, 2]])
        pack = Prepacking({1: 0}, 1, 0, 2, {1: 0}, [1, 0], prefix_len=1)
        levels = coarsen(hg, pack, 10, rng=rng, floor=1)
        for level in levels:
            fixed_fine = np.flatnonzero(
                level.coarse_fixed[level.cmap] == 1)
            # the fixed vertex stays a singleton coarse vertex
            coarse_id = level.cmap[1] if level.fine.num_vertices == 3 else None
            if coarse_id is not None:
                assert int((level.cmap == coarse_id).sum()) == 1

    def test_coarse_weights_sum(self, rng):
        hg = random_hypergraph(rng, 300, 400, unit=True)
        levels = coarsen(hg, Prepacking.empty(), 50, rng=rng, floor=10)
        assert levels
        for level in levels:
            assert level.coarse.total_weight == level.fine.total_weight
            cw = np.zeros(level.coarse.num_vertices, dtype=np.int64)
            np.add.at(cw, level.cmap, level.fine.vertex_weights)
            assert np.array_equal(cw, level.coarse.vertex_weights)

    def test_projection_preserves_objective(self, rng):
        # single-pin nets vanish, merged pins stay together: the objective
        # of any coarse side assignment equals its fine projection
        hg = random_hypergraph(rng, 200, 300)
        levels = coarsen(hg, Prepacking.empty(), hg.total_weight,
                         rng=rng, floor=10)
        assert levels
        for level in levels:
            side = rng.integers(0, 2, size=level.coarse.num_vertices)
            side = side.astype(np.int8)
            coarse_obj = _kernels.km1(level.coarse.xpins, level.coarse.pins,
                                      level.coarse.net_weights, side, 2)
            fine_obj = _kernels.km1(level.fine.xpins, level.fine.pins,
                                    level.fine.net_weights, side[level.cmap],
                                    2)
            assert coarse_obj == fine_obj


class TestInitialBipartition:
    def test_all_fixed_returns_prepacking(self):
        hg = bp.build_hypergraph([6, 6, 4], [])
        pack = Prepacking({0: 0, 1: 1, 2: 1}, 6, 10, 2,
                          {0: 0, 1: 1, 2: 1}, [6, 10], prefix_len=3)
        part = initial_bipartition(hg, pack, 16.0, seed=0)
        assert list(part.block_of) == [0, 1, 1]

    def test_finds_zero_objective_split(self):
        hg = bp.build_hypergraph([1] * 4, [[0, 1], [2, 3]])
        part = initial_bipartition(hg, Prepacking.empty(), 2.0, seed=3,
                                   trials=8)
        assert bp.connectivity(hg, part) == 0
        assert sorted(bp.block_weights(hg, part)) == [2, 2]

    def test_deterministic_given_seed(self, rng):
        hg = random_hypergraph(rng, 60, 80)
        for trials in (1, 8):
            a = initial_bipartition(hg, Prepacking.empty(),
                                    hg.total_weight, seed=9, trials=trials)
            b = initial_bipartition(hg, Prepacking.empty(),
                                    hg.total_weight, seed=9, trials=trials)
            assert np.array_equal(a.block_of, b.block_of)

    def test_respects_fixed_sides(self, rng):
        hg = random_hypergraph(rng, 40, 50, unit=True)
        pack = Prepacking({0: 1, 5: 0}, 1, 1, 2, {0: 1, 5: 0}, [1, 1],
                          prefix_len=2)
        part = initial_bipartition(hg, pack, 30.0, seed=1)
        assert part.block_of[0] == 1
        assert part.block_of[5] == 0


class TestFmRefine:
    def test_locally_optimal_unchanged(self):
        hg = bp.build_hypergraph([1] * 4, [[0, 1], [2, 3]])
        part = bp.Partition.from_block_of(hg, [0, 0, 1, 1], 2)
        refined, stats = fm_refine(hg, part, Prepacking.empty(), 2.0)
        assert bp.connectivity(hg, refined) == 0
        assert np.array_equal(refined.block_of, part.block_of)

    def test_improves_crossed_nets(self):
        hg = bp.build_hypergraph([1] * 4, [[0, 1], [2, 3]])
        part = bp.Partition.from_block_of(hg, [0, 1, 0, 1], 2)
        assert bp.connectivity(hg, part) == 2
        refined, stats = fm_refine(hg, part, Prepacking.empty(), 2.0,
                                   validate=True)
        assert bp.connectivity(hg, refined) == 0
        assert stats.objective_final == 0
        assert sorted(bp.block_weights(hg, refined)) == [2, 2]

    def test_respects_bound(self, rng):
        for _ in range(20):
            hg = random_hypergraph(rng, 30, 40)
            bound = bp.standard_bound(hg.total_weight, 2, 0.05)
            part = initial_bipartition(hg, Prepacking.empty(), bound, seed=2)
            if max(bp.block_weights(hg, part)) > bound:
                continue
            refined, _ = fm_refine(hg, part, Prepacking.empty(), bound)
            assert max(bp.block_weights(hg, refined)) <= bound

    def test_restores_balance_when_possible(self):
        hg = bp.build_hypergraph([3, 1, 1, 1], [])
        part = bp.Partition.from_block_of(hg, [0, 0, 0, 1], 2)  # 5 | 1
        refined, _ = fm_refine(hg, part, Prepacking.empty(), 3.0)
        assert max(bp.block_weights(hg, refined)) <= 3

    def test_never_unfixes(self, rng):
        hg = random_hypergraph(rng, 30, 40, unit=True)
        pack = Prepacking({3: 0, 7: 1}, 1, 1, 2, {3: 0, 7: 1}, [1, 1],
                          prefix_len=2)
        part = initial_bipartition(hg, pack, 18.0, seed=5)
        refined, _ = fm_refine(hg, part, pack, 18.0)
        assert refined.block_of[3] == 0
        assert refined.block_of[7] == 1

    def test_rejects_partition_violating_fixed(self):
        hg = bp.build_hypergraph([1, 1], [[0, 1]])
        pack = Prepacking({0: 1}, 0, 1, 2, {0: 1}, [0, 1], prefix_len=1)
        part = bp.Partition.from_block_of(hg, [0, 1], 2)
        with pytest.raises(ValueError, match="respect"):
            fm_refine(hg, part, pack, 2.0)

    def test_monotone_and_incremental_consistency(self, rng):
        for _ in range(25):
            hg = random_hypergraph(rng, 50, 70)
            bound = bp.standard_bound(hg.total_weight, 2, 0.1)
            part = initial_bipartition(hg, Prepacking.empty(), bound,
                                       seed=11, trials=4)
            refined, stats = fm_refine(hg, part, Prepacking.empty(), bound,
                                       validate=True)
            objectives = [stats.objective_initial] + stats.pass_objectives
            assert all(b <= a for a, b in zip(objectives, objectives[1:]))
            assert stats.objective_final == bp.connectivity(hg, refined)


class TestMultilevelBipartition:
    def test_unit_weights_balanced(self, rng):
        hg = random_hypergraph(rng, 500, 700, unit=True)
        bound = bp.standard_bound(500, 2, 0.03)
        res = multilevel_bipartition(hg, bound, Prepacking.empty(), seed=1)
        assert res.balanced
        assert max(res.loads) <= bound
        assert res.objective == bp.connectivity(hg, res.partition)

    def test_prepacking_forces_unique_completion(self):
        hg = bp.build_hypergraph([6, 6, 4, 4, 2, 2], [])
        pack = Prepacking({0: 0, 1: 0}, 12, 0, 4, {0: 0, 1: 1},
                          [6, 6, 0, 0], prefix_len=2)
        res = multilevel_bipartition(hg, 12.0, pack, seed=7)
        assert res.balanced
        assert list(res.partition.block_of) == [0, 0, 1, 1, 1, 1]

    def test_infeasible_bound_flagged(self):
        hg = bp.build_hypergraph([5, 1, 1], [])
        res = multilevel_bipartition(hg, 4.0, Prepacking.empty(), seed=1)
        assert not res.balanced

    def test_fixed_vertices_survive_pipeline(self, rng):
        hg = random_hypergraph(rng, 400, 500, unit=True)
        fixed = {int(v): int(s) for v, s in
                 zip(rng.choice(400, size=12, replace=False),
                     rng.integers(0, 2, size=12))}
        p1 = sum(1 for s in fixed.values() if s == 0)
        pack = Prepacking(fixed, p1, len(fixed) - p1, 2,
                          dict(fixed), [p1, len(fixed) - p1],
                          prefix_len=len(fixed))
        res = multilevel_bipartition(hg, bp.standard_bound(400, 2, 0.1),
                                     pack, seed=3)
        for v, s in fixed.items():
            assert res.partition.block_of[v] == s

    def test_deterministic(self, rng):
        hg = random_hypergraph(rng, 300, 400)
        bound = bp.standard_bound(hg.total_weight, 2, 0.1)
        a = multilevel_bipartition(hg, bound, Prepacking.empty(), seed=42)
        b = multilevel_bipartition(hg, bound, Prepacking.empty(), seed=42)
        assert np.array_equal(a.partition.block_of, b.partition.block_of)
        assert a.objective == b.objective

    def test_unit_weight_reliability_gate(self, rng):
        # smoke-level reliability: unit weights at eps >= 0.03 come out
        # balanced on at least 99% of random instances
        balanced = 0
        runs = 200
        for i in range(runs):
            n = int(rng.integers(100, 2001))
            hg = random_hypergraph(rng, n, int(n * 1.3), unit=True)
            bound = bp.standard_bound(n, 2, 0.03)
            res = multilevel_bipartition(hg, bound, Prepacking.empty(),
                                         seed=i, trials=8)
            balanced += res.balanced
        assert balanced >= 0.99 * runs
