import numpy as np
import pytest

import balpart as bp
from balpart.hypergraph import MAX_TOTAL_WEIGHT

from conftest import random_hypergraph


class TestBuild:
    def test_minimal_instance(self):
        hg = bp.build_hypergraph([1, 1], [[0, 1]], [1])
        assert hg.total_weight == 2
        assert hg.num_vertices == 2
        assert hg.num_nets == 1

    def test_netless_weighted(self):
        hg = bp.build_hypergraph([4, 4, 4], [], [])
        assert hg.total_weight == 12
        assert hg.num_nets == 0

    def test_default_net_weights(self):
        hg = bp.build_hypergraph([1, 1, 1], [[0, 1], [1, 2]])
        assert list(hg.net_weights) == [1, 1]

    def test_rejects_non_positive_weight(self):
        with pytest.raises(bp.HypergraphError, match="non-positive weight"):
            bp.build_hypergraph([1, 0], [[0, 1]])

    def test_rejects_empty_net(self):
        with pytest.raises(bp.HypergraphError, match="empty"):
            bp.build_hypergraph([1, 1], [[]])

    def test_rejects_out_of_range_id(self):
        with pytest.raises(bp.HypergraphError, match="outside"):
            bp.build_hypergraph([1, 1], [[0, 2]])

    def test_rejects_duplicate_ids(self):
        with pytest.raises(bp.HypergraphError, match="duplicate"):
            bp.build_hypergraph([1, 1], [[0, 0]])

    def test_rejects_negative_net_weight(self):
        with pytest.raises(bp.HypergraphError, match="net 0"):
            bp.build_hypergraph([1, 1], [[0, 1]], [0])

    def test_rejects_weight_overflow(self):
        half = MAX_TOTAL_WEIGHT // 2 + 1
        with pytest.raises(bp.HypergraphError, match="overflow"):
            bp.build_hypergraph([half, half], [])

    def test_incidence_consistency(self, rng):
        hg = random_hypergraph(rng, 40, 60)
        for v in range(hg.num_vertices):
            for e in hg.incident_nets(v):
                assert v in hg.net(int(e))
        for e in range(hg.num_nets):
            for v in hg.net(e):
                assert e in hg.incident_nets(int(v))


class TestSubhypergraph:
    def test_direct_restriction(self):
        hg = bp.build_hypergraph([1, 1, 1], [[0, 1, 2]])
        sub = bp.subhypergraph(hg, bp.VertexSubset.from_ids([0, 1], 3))
        assert sub.num_nets == 1
        assert list(sub.net(0)) == [0, 1]

    def test_empty_intersection_dropped(self):
        hg = bp.build_hypergraph([1, 1, 1, 1], [[2, 3]])
        sub = bp.subhypergraph(hg, bp.VertexSubset.from_ids([0, 1], 4))
        assert sub.num_nets == 0

    def test_single_vertex_residual_kept(self):
        hg = bp.build_hypergraph([1, 1, 1], [[0, 1], [1, 2]])
        sub = bp.subhypergraph(hg, bp.VertexSubset.from_ids([1], 3))
        assert sub.num_nets == 2
        assert [list(sub.net(e)) for e in range(2)] == [[0], [0]]
        part = bp.Partition.from_block_of(sub, [0], 1)
        assert bp.connectivity(sub, part) == 0

    def test_weights_inherited(self, rng):
        hg = random_hypergraph(rng, 30, 40)
        ids = np.sort(rng.choice(30, size=11, replace=False))
        sub = bp.subhypergraph(hg, bp.VertexSubset.from_ids(ids, 30))
        assert list(sub.vertex_weights) == [int(hg.vertex_weights[v])
                                            for v in ids]

    def test_empty_subset_rejected(self):
        hg = bp.build_hypergraph([1, 1], [[0, 1]])
        with pytest.raises(bp.HypergraphError, match="empty"):
            bp.VertexSubset.from_ids([], 2)

    def test_sub_objective_bounded_by_parent(self, rng):
        # restricting can only merge pins, never split a net across more
        # blocks than in the parent
        for _ in range(20):
            hg = random_hypergraph(rng, 20, 30)
            k = 4
            blocks = rng.integers(0, k, size=20).astype(np.int32)
            part = bp.Partition.from_block_of(hg, blocks, k)
            ids = np.sort(rng.choice(20, size=int(rng.integers(2, 18)),
                                     replace=False))
            subset = bp.VertexSubset.from_ids(ids, 20)
            sub = bp.subhypergraph(hg, subset)
            sub_part = bp.Partition.from_block_of(sub, blocks[ids], k)
            mask = np.zeros(20, dtype=bool)
            mask[ids] = True
            parent_restricted = sum(
                (len(set(blocks[p] for p in hg.net(e))) - 1)
                * int(hg.net_weights[e])
                for e in range(hg.num_nets)
                if mask[hg.net(e)].any())
            assert bp.connectivity(sub, sub_part) <= parent_restricted


class TestConnectivity:
    def test_single_block_zero(self):
        hg = bp.build_hypergraph([1, 1, 1], [[0, 1, 2]], [5])
        part = bp.Partition.from_block_of(hg, [0, 0, 0], 1)
        assert bp.connectivity(hg, part) == 0

    def test_net_spanning_three_blocks(self):
        hg = bp.build_hypergraph([1, 1, 1], [[0, 1, 2]], [2])
        part = bp.Partition.from_block_of(hg, [0, 1, 2], 3)
        assert bp.connectivity(hg, part) == 4

    def test_two_cut_nets(self):
        hg = bp.build_hypergraph([1] * 4, [[0, 1], [2, 3]])
        part = bp.Partition.from_block_of(hg, [0, 1, 0, 1], 2)
        assert bp.connectivity(hg, part) == 2

    def test_block_permutation_invariance(self, rng):
        for _ in range(15):
            hg = random_hypergraph(rng, 25, 35)
            k = int(rng.integers(2, 6))
            blocks = rng.integers(0, k, size=25).astype(np.int32)
            part = bp.Partition.from_block_of(hg, blocks, k)
            perm = rng.permutation(k).astype(np.int32)
            part2 = bp.Partition.from_block_of(hg, perm[blocks], k)
            assert bp.connectivity(hg, part) == bp.connectivity(hg, part2)

    def test_partition_must_cover(self):
        hg = bp.build_hypergraph([1, 1], [[0, 1]])
        part = bp.Partition(np.zeros(1, dtype=np.int32), 1, None)
        with pytest.raises(bp.HypergraphError):
            bp.connectivity(hg, part)


class TestBlockWeights:
    def test_split_example(self):
        hg = bp.build_hypergraph([4, 4, 4], [])
        part = bp.Partition.from_block_of(hg, [0, 1, 1], 2)
        assert bp.block_weights(hg, part) == [4, 8]
        assert bp.max_block_weight(hg, part) == 8

    def test_single_block(self):
        hg = bp.build_hypergraph([4, 4, 4], [])
        part = bp.Partition.from_block_of(hg, [0, 0, 0], 1)
        assert bp.block_weights(hg, part) == [12]

    def test_even_split(self):
        hg = bp.build_hypergraph([6, 6, 4, 4, 2, 2], [])
        part = bp.Partition.from_block_of(hg, [0, 0, 1, 1, 1, 1], 2)
        assert bp.block_weights(hg, part) == [12, 12]
        assert bp.max_block_weight(hg, part) == 12

    def test_weights_sum_to_total(self, rng):
        hg = random_hypergraph(rng, 30, 20)
        blocks = rng.integers(0, 3, size=30).astype(np.int32)
        part = bp.Partition.from_block_of(hg, blocks, 3)
        weights = bp.block_weights(hg, part)
        assert sum(weights) == hg.total_weight
        assert bp.max_block_weight(hg, part) == max(weights)

    def test_empty_blocks_flagged(self):
        hg = bp.build_hypergraph([1, 1], [])
        part = bp.Partition.from_block_of(hg, [0, 0], 3)
        assert part.empty_blocks() == [1, 2]
