#!/usr/bin/env python3
"""Benchmark the compiled kernels against their pure-Python twins.

Both implementations produce identical outputs (asserted here); this script
reports how much the compiled core buys on each hot loop.

    python3 benchmarks/bench_kernels.py --n 20000 --nets 20000 --repeats 5
"""

import argparse
import time

import numpy as np

import balpart as bp
from balpart._kernels import _pure

try:
    from balpart._kernels import _core
except ImportError:
    _core = None


def build_instance(n, m, seed):
    rng = np.random.default_rng(seed)
    sizes = rng.integers(2, 6, size=m)
    nets = [[int(v) for v in rng.choice(n, size=int(s), replace=False)]
            for s in sizes]
    weights = [int(w) for w in rng.integers(1, 40, size=n)]
    return bp.build_hypergraph(weights, nets), rng


def timeit(fn, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=20000)
    parser.add_argument("--nets", type=int, default=20000)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    if _core is None:
        print("compiled kernels unavailable; nothing to compare")
        return 1

    hg, rng = build_instance(args.n, args.nets, args.seed)
    n = hg.num_vertices
    print(f"instance: n={n} nets={hg.num_nets} pins={hg.num_pins}")
    print(f"{'kernel':<16}{'pure [ms]':>12}{'compiled [ms]':>15}"
          f"{'speedup':>10}")

    rows = []

    w_desc = np.ascontiguousarray(np.sort(hg.vertex_weights)[::-1])
    initial = np.zeros(64, dtype=np.int64)
    rows.append(("lpt_assign",
                 lambda: _pure.lpt_assign(w_desc, 64, initial),
                 lambda: _core.lpt_assign(w_desc, 64, initial)))

    blocks = rng.integers(0, 8, size=n).astype(np.int32)
    rows.append(("km1",
                 lambda: _pure.km1(hg.xpins, hg.pins, hg.net_weights,
                                   blocks, 8),
                 lambda: _core.km1(hg.xpins, hg.pins, hg.net_weights,
                                   blocks, 8)))

    fixed = np.zeros(n, dtype=np.uint8)
    order = rng.permutation(n).astype(np.int32)
    cap = int(hg.vertex_weights.max()) * 3
    rows.append(("match_vertices",
                 lambda: _pure.match_vertices(hg.xpins, hg.pins,
                                              hg.net_weights, hg.xnets,
                                              hg.vnets, hg.vertex_weights,
                                              fixed, cap, order),
                 lambda: _core.match_vertices(hg.xpins, hg.pins,
                                              hg.net_weights, hg.xnets,
                                              hg.vnets, hg.vertex_weights,
                                              fixed, cap, order)))

    side0 = rng.integers(0, 2, size=n).astype(np.int8)
    load1 = int(hg.vertex_weights[side0 == 1].sum())
    load0 = hg.total_weight - load1
    fm_cap = int(hg.total_weight * 0.55)
    fm_cap_move = fm_cap + int(hg.vertex_weights.max())
    obj0 = _core.km1(hg.xpins, hg.pins, hg.net_weights, side0, 2)

    def run_fm(impl):
        side = side0.copy()
        out = impl.fm_pass(hg.xpins, hg.pins, hg.net_weights, hg.xnets,
                           hg.vnets, hg.vertex_weights, side, fixed, fm_cap,
                           fm_cap_move, load0, load1, obj0)
        return out, side

    rows.append(("fm_pass",
                 lambda: run_fm(_pure),
                 lambda: run_fm(_core)))

    for name, pure_fn, core_fn in rows:
        t_pure, r_pure = timeit(pure_fn, args.repeats)
        t_core, r_core = timeit(core_fn, args.repeats)
        if name in ("lpt_assign",):
            same = all(np.array_equal(a, b) for a, b in zip(r_pure, r_core))
        elif name == "km1":
            same = r_pure == r_core
        elif name == "match_vertices":
            same = np.array_equal(r_pure, r_core)
        else:
            same = r_pure[0] == r_core[0] and np.array_equal(r_pure[1],
                                                             r_core[1])
        assert same, f"{name}: implementations disagree"
        print(f"{name:<16}{t_pure * 1e3:>12.2f}{t_core * 1e3:>15.2f}"
              f"{t_pure / t_core:>9.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
