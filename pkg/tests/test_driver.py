from fractions import Fraction

import numpy as np
import pytest

import balpart as bp
from balpart.balance import fits

from conftest import random_hypergraph


class TestRecursiveBipartition:
    def test_perfect_four_way_split(self):
        # max-6 four-way partitions of [6,6,4,4,2,2] exist; find one
        hg = bp.build_hypergraph([6, 6, 4, 4, 2, 2], [])
        res = bp.recursive_bipartition(hg, 4, 0.0, seed=1)
        assert sorted(bp.block_weights(hg, res.partition)) == [6, 6, 6, 6]
        assert res.certified

    def test_two_way_skips_deep_check(self, rng):
        hg = random_hypergraph(rng, 50, 60)
        res = bp.recursive_bipartition(hg, 2, 0.1, seed=1)
        assert res.stats.deep_checks == 0
        assert res.stats.prepack_triggered == 0

    def test_unit_weights_never_prepack(self):
        hg = bp.build_hypergraph([1] * 16, [[i, (i + 1) % 16]
                                            for i in range(16)])
        res = bp.recursive_bipartition(hg, 4, 0.03, seed=1)
        assert res.stats.prepack_triggered == 0
        assert res.certified
        assert max(bp.block_weights(hg, res.partition)) <= \
            bp.standard_bound(16, 4, 0.03)

    def test_prepacking_only_after_failed_deep_check(self, rng):
        # instrumentation invariant: triggers never exceed failures
        for _ in range(10):
            hg = random_hypergraph(rng, 25, 30, max_weight=20)
            res = bp.recursive_bipartition(hg, 4, 0.01, seed=2)
            assert res.stats.prepack_triggered == \
                res.stats.deep_check_failures

    def test_block_ids_cover_range(self, rng):
        hg = random_hypergraph(rng, 64, 80, unit=True)
        for k in (3, 5, 8):
            res = bp.recursive_bipartition(hg, k, 0.1, seed=3)
            assert res.partition.k == k
            present = set(int(b) for b in res.partition.block_of)
            assert present == set(range(k))

    def test_determinism(self, rng):
        hg = random_hypergraph(rng, 120, 150)
        a = bp.recursive_bipartition(hg, 8, 0.1, seed=77)
        b = bp.recursive_bipartition(hg, 8, 0.1, seed=77)
        assert np.array_equal(a.partition.block_of, b.partition.block_of)

    def test_threads_match_sequential(self, rng):
        hg = random_hypergraph(rng, 200, 250)
        seq = bp.recursive_bipartition(hg, 8, 0.1, seed=5, threads=1)
        par = bp.recursive_bipartition(hg, 8, 0.1, seed=5, threads=4)
        assert np.array_equal(seq.partition.block_of, par.partition.block_of)
        assert seq.certified == par.certified

    def test_k_one_single_block(self, rng):
        hg = random_hypergraph(rng, 10, 12)
        res = bp.recursive_bipartition(hg, 1, 0.0, seed=1)
        assert list(res.partition.block_of) == [0] * 10

    def test_fewer_vertices_than_blocks(self):
        hg = bp.build_hypergraph([1, 1, 1], [[0, 1, 2]])
        res = bp.recursive_bipartition(hg, 4, 0.5, seed=1)
        assert res.partition.k == 4
        assert len(res.partition.empty_blocks()) >= 1


class TestPipeline:
    def test_heavy_vertex_becomes_own_block(self):
        hg = bp.build_hypergraph([10, 1, 1, 1, 1],
                                 [[1, 2], [2, 3], [3, 4]])
        part, report = bp.partition_pipeline(hg, 4, 0.0, seed=1)
        assert report.k_prime == 3
        assert report.removed_vertices == [0]
        # the removed vertex sits alone in the last block
        assert part.block_of[0] == 3
        assert int(part.block_weights[3]) == 10
        assert report.balanced

    def test_unweighted_reduces_to_plain_rb(self, rng):
        hg = random_hypergraph(rng, 40, 50, unit=True)
        part, report = bp.partition_pipeline(hg, 4, 0.03, seed=1)
        assert report.k_prime == 4
        assert report.removed_vertices == []
        assert report.epsilon_hat == pytest.approx(0.03, abs=1e-12)
        assert report.alpha == 0

    def test_k_one_trivially_balanced(self, rng):
        hg = random_hypergraph(rng, 12, 15)
        part, report = bp.partition_pipeline(hg, 1, 0.0, seed=1)
        assert report.balanced
        assert report.km1 == 0

    def test_alpha_is_removed_nets_contribution(self, rng):
        # the objective difference comes exactly from nets touching the
        # removed vertices
        for _ in range(10):
            n = 15
            hg = random_hypergraph(rng, n, 20, max_weight=6)
            # plant one dominating vertex so preprocessing removes it
            weights = [int(w) for w in hg.vertex_weights]
            weights[0] = sum(weights) + 5
            nets = [sorted(int(v) for v in hg.net(e))
                    for e in range(hg.num_nets)]
            hg = bp.build_hypergraph(weights, nets,
                                     [int(w) for w in hg.net_weights])
            part, report = bp.partition_pipeline(hg, 3, 0.0, seed=4)
            if not report.removed_vertices:
                continue
            removed = set(report.removed_vertices)
            manual = 0
            for e in range(hg.num_nets):
                pins = [int(v) for v in hg.net(e)]
                if not removed.intersection(pins):
                    continue
                full = len(set(int(part.block_of[v]) for v in pins)) - 1
                rest = [v for v in pins if v not in removed]
                reduced = (len(set(int(part.block_of[v]) for v in rest)) - 1
                           if rest else 0)
                manual += (full - reduced) * int(hg.net_weights[e])
            assert report.alpha == manual
            assert report.alpha >= 0

    def test_balanced_verdict_is_from_scratch(self, rng):
        for _ in range(10):
            hg = random_hypergraph(rng, 60, 80, max_weight=15)
            part, report = bp.partition_pipeline(hg, 4, 0.03, seed=6)
            bound = Fraction(report.bound_l_lpt)
            reduced_blocks = [w for b, w in enumerate(report.block_weights)
                              if b < report.k_prime]
            assert report.balanced == all(fits(w, bound)
                                          for w in reduced_blocks)

    def test_report_roundtrip_dict(self, rng):
        hg = random_hypergraph(rng, 30, 40)
        _, report = bp.partition_pipeline(hg, 2, 0.1, seed=1)
        d = report.to_dict()
        assert d["k"] == 2
        assert isinstance(d["block_weights"], list)
        assert d["km1"] == d["km1_reduced"] + d["alpha"]

    def test_determinism(self, rng):
        hg = random_hypergraph(rng, 80, 100, max_weight=25)
        a, ra = bp.partition_pipeline(hg, 8, 0.03, seed=9)
        b, rb = bp.partition_pipeline(hg, 8, 0.03, seed=9)
        assert np.array_equal(a.block_of, b.block_of)
        assert ra.km1 == rb.km1

    def test_rejects_bad_k(self, rng):
        hg = random_hypergraph(rng, 10, 10)
        with pytest.raises(ValueError):
            bp.partition_pipeline(hg, 0, 0.1, seed=1)
