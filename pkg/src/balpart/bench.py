"""Benchmark sweep: k x epsilon x seeds over a set of .hgr instances,
aggregated into balanced-rate and fixed-vertex statistics per cell."""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor

from .driver import partition_pipeline
from .hgr_io import load_hgr

# Version of the CSV schema below; bump when columns change.
BENCH_SCHEMA_VERSION = 1

BENCH_COLUMNS = [
    "instance", "k", "epsilon", "seeds", "balanced_runs", "imbalanced_runs",
    "balanced_rate", "mean_km1", "mean_runtime_s", "prepack_triggered_runs",
    "mean_fixed_fraction", "max_fixed_fraction", "certified_runs",
]


def _run_cell(args):
    """One worker task: a fully isolated (instance, k, epsilon, seed) run."""
    path, k, epsilon, seed, trials, max_passes = args
    hg = load_hgr(path)
    _, report = partition_pipeline(hg, k, epsilon, seed, trials=trials,
                                   max_passes=max_passes)
    return {
        "instance": os.path.basename(path),
        "k": k,
        "epsilon": epsilon,
        "seed": seed,
        "balanced": report.balanced,
        "certified": report.certified,
        "km1": report.km1,
        "runtime_s": report.runtime_s,
        "prepack_triggered": report.prepack_triggered,
        "fixed_fraction": report.fixed_vertex_fraction,
    }


def run_bench(paths, ks, epsilons, num_seeds, base_seed=1, threads=1,
              trials=16, max_passes=8):
    """Run the sweep and aggregate one row per (instance, k, epsilon)."""
    tasks = [(str(p), k, eps, base_seed + s, trials, max_passes)
             for p in paths for k in ks for eps in epsilons
             for s in range(num_seeds)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_cell, tasks))
    else:
        results = [_run_cell(t) for t in tasks]

    grouped: dict[tuple, list[dict]] = {}
    for r in results:
        grouped.setdefault((r["instance"], r["k"], r["epsilon"]), []).append(r)

    rows = []
    for (instance, k, eps), cell in sorted(grouped.items()):
        runs = len(cell)
        balanced = sum(1 for r in cell if r["balanced"])
        rows.append({
            "instance": instance,
            "k": k,
            "epsilon": eps,
            "seeds": runs,
            "balanced_runs": balanced,
            "imbalanced_runs": runs - balanced,
            "balanced_rate": balanced / runs,
            "mean_km1": sum(r["km1"] for r in cell) / runs,
            "mean_runtime_s": sum(r["runtime_s"] for r in cell) / runs,
            "prepack_triggered_runs": sum(
                1 for r in cell if r["prepack_triggered"] > 0),
            "mean_fixed_fraction": sum(
                r["fixed_fraction"] for r in cell) / runs,
            "max_fixed_fraction": max(r["fixed_fraction"] for r in cell),
            "certified_runs": sum(1 for r in cell if r["certified"]),
        })
    return rows


def write_bench_csv(rows, path_or_file) -> None:
    if hasattr(path_or_file, "write"):
        _write_rows(rows, path_or_file)
    else:
        with open(path_or_file, "w", encoding="utf-8", newline="") as fh:
            _write_rows(rows, fh)


def _write_rows(rows, fh):
    writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
