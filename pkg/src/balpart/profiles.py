"""Performance profiles: per algorithm, the fraction of instances whose
quality is within a factor tau of the per-instance best."""

from __future__ import annotations

import math


def performance_profile(quality: dict) -> dict[str, list[tuple[float, float]]]:
    """Build profile step functions from a quality table.

    ``quality`` maps algorithm name -> per-instance qualities (all tables
    aligned and non-negative). The result maps each algorithm to its sorted
    (tau, fraction) breakpoints; fractions are non-decreasing in tau.

    On instances where the best quality is 0, an algorithm qualifies at any
    tau only if its own quality is also 0.
    """
    if not quality:
        raise ValueError("empty quality table")
    lengths = {len(v) for v in quality.values()}
    if len(lengths) != 1:
        raise ValueError("algorithms report different instance counts")
    n_inst = lengths.pop()
    if n_inst == 0:
        raise ValueError("quality table has no instances")
    for alg, values in quality.items():
        if any(q < 0 for q in values):
            raise ValueError(f"negative quality for {alg!r}")

    algs = list(quality)
    best = [min(quality[a][i] for a in algs) for i in range(n_inst)]

    curves: dict[str, list[tuple[float, float]]] = {}
    for alg in algs:
        ratios = []
        for i in range(n_inst):
            q = quality[alg][i]
            if best[i] == 0:
                ratios.append(1.0 if q == 0 else math.inf)
            else:
                ratios.append(q / best[i])
        finite = sorted(r for r in ratios if math.isfinite(r))
        taus = sorted({1.0, *finite})
        curve = []
        for tau in taus:
            frac = sum(1 for r in ratios if r <= tau) / n_inst
            curve.append((tau, frac))
        curves[alg] = curve
    return curves


def profile_fraction_at(curve: list[tuple[float, float]], tau: float) -> float:
    """Evaluate a profile step function at ``tau``."""
    frac = 0.0
    for t, f in curve:
        if t <= tau:
            frac = f
        else:
            break
    return frac
