"""Block-weight bound family, adaptive per-bipartition imbalance, and the
heavy-vertex preprocessing that guarantees a feasible partitioning request."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hypergraph import Hypergraph, HypergraphError, VertexSubset
from .lpt import lpt_makespan

log = logging.getLogger(__name__)

# Block weights are integers; bounds are reals. A block "fits" a bound when
# weight <= bound * (1 + BALANCE_RTOL), evaluated in exact rational
# arithmetic. The relative guard removes floating-point boundary flakiness
# without ever admitting a genuinely overweight block.
BALANCE_RTOL = Fraction(1, 10 ** 9)

EPSILON_PRIME_FLOOR = -0.5


def fits(weight, bound) -> bool:
    """Exact check of ``weight <= bound`` under the relative guard."""
    w = weight if isinstance(weight, Fraction) else Fraction(weight)
    b = bound if isinstance(bound, Fraction) else Fraction(bound)
    return w <= b + BALANCE_RTOL * b


def weight_cap(bound) -> int:
    """Largest integer weight that ``fits`` the bound; lets the integer-only
    kernels enforce the same rule."""
    b = bound if isinstance(bound, Fraction) else Fraction(bound)
    guarded = b + BALANCE_RTOL * b
    return guarded.numerator // guarded.denominator


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def standard_bound(total: int, k: int, epsilon: float) -> float:
    """Classic per-block bound (1 + eps) * ceil(total / k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return (1.0 + epsilon) * ceil_div(int(total), k)


def standard_bound_exact(total: int, k: int, epsilon) -> Fraction:
    return (1 + Fraction(epsilon)) * ceil_div(int(total), k)


def fm_bound(total: int, k: int, epsilon: float,
             max_vertex_weight: int) -> float:
    """Move-headroom bound: the standard bound plus the heaviest vertex.
    Reported for comparison only."""
    if max_vertex_weight <= 0:
        raise ValueError("max vertex weight must be positive")
    return standard_bound(total, k, epsilon) + max_vertex_weight


def lpt_balance_bound(hg_or_weights, k: int, epsilon: float) -> float:
    """Guaranteed-attainable bound: (1 + eps) times the greedy scheduler's
    makespan over all vertex weights."""
    weights = getattr(hg_or_weights, "vertex_weights", hg_or_weights)
    return (1.0 + epsilon) * lpt_makespan(weights, k)


@dataclass(frozen=True)
class BalanceContext:
    """The global partitioning request: block count, imbalance, and the
    derived bounds every balance decision refers back to."""

    k: int
    epsilon: float
    total_weight: int
    L_k: float
    L_lpt: float
    epsilon_hat: float

    @classmethod
    def for_hypergraph(cls, hg: Hypergraph, k: int,
                       epsilon: float) -> "BalanceContext":
        total = hg.total_weight
        l_k = standard_bound(total, k, epsilon)
        makespan = lpt_makespan(hg.vertex_weights, k)
        l_lpt = (1.0 + epsilon) * makespan
        eps_hat = l_lpt / ceil_div(total, k) - 1.0
        return cls(k, epsilon, total, l_k, l_lpt, eps_hat)

    @property
    def L_k_exact(self) -> Fraction:
        return standard_bound_exact(self.total_weight, self.k, self.epsilon)


def adaptive_epsilon(ctx: BalanceContext, c_vprime: int,
                     k_prime: int) -> float:
    """Imbalance for the next bipartition, chosen so that ceil(log2 k')
    nested bipartitions compose back to the global bound."""
    if k_prime < 2:
        raise ValueError("adaptive imbalance needs k' >= 2")
    if c_vprime <= 0:
        raise ValueError("subset weight must be positive")
    radicand = ((1.0 + ctx.epsilon) * (ctx.total_weight / ctx.k)
                * (k_prime / c_vprime))
    if radicand <= 0.0:
        raise ValueError(
            f"infeasible recursion weight: radicand {radicand} <= 0")
    levels = (k_prime - 1).bit_length()  # == ceil(log2(k'))
    eps_prime = radicand ** (1.0 / levels) - 1.0
    if eps_prime < EPSILON_PRIME_FLOOR:
        log.warning(
            "adaptive imbalance %.6f below floor for k'=%d, c(V')=%d; "
            "clamping to %.1f", eps_prime, k_prime, c_vprime,
            EPSILON_PRIME_FLOOR)
        eps_prime = EPSILON_PRIME_FLOOR
    return eps_prime


def bipartition_bound(c_vprime: int, eps_prime: float) -> float:
    """Block-weight bound for one bipartition step."""
    return (1.0 + eps_prime) * ceil_div(int(c_vprime), 2)


@dataclass(frozen=True)
class PreprocessResult:
    """Outcome of the heavy-vertex removal pass."""

    subset: VertexSubset        # remaining vertices, increasing ids
    removed: list[int]          # removed vertex ids, heaviest first
    k_prime: int


def preprocess_remove_heavy(hg: Hypergraph, k: int,
                            epsilon: float) -> PreprocessResult:
    """Iteratively remove the heaviest vertex while it exceeds the current
    standard bound, reducing k by one per removal, until a fixed point.

    The bound is re-derived after every single removal, which is the most
    conservative schedule and reaches the same fixed point as whole-round
    removal.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    weights = hg.vertex_weights
    # heaviest first, ties by increasing id
    order = np.lexsort((np.arange(hg.num_vertices), -weights))
    removed: list[int] = []
    total = hg.total_weight
    k_cur = k
    pos = 0
    while pos < len(order):
        v = int(order[pos])
        w = int(weights[v])
        bound = standard_bound_exact(total, k_cur, epsilon)
        if fits(w, bound):
            break
        removed.append(v)
        total -= w
        k_cur -= 1
        pos += 1
        if k_cur == 0:
            raise HypergraphError(
                "preprocessing removed as many vertices as blocks; "
                "degenerate input")
    if pos == len(order):
        raise HypergraphError(
            "preprocessing removed every vertex; degenerate input")
    keep = np.setdiff1d(np.arange(hg.num_vertices), np.asarray(removed,
                                                               dtype=np.int64))
    subset = VertexSubset.from_ids(keep, hg.num_vertices)
    return PreprocessResult(subset, removed, k_cur)


def modified_epsilon(hg_reduced: Hypergraph, k_prime: int,
                     epsilon: float) -> float:
    """Imbalance that makes the standard bound on the reduced instance
    coincide with the attainable LPT-based bound."""
    if k_prime < 1:
        raise ValueError("k' must be >= 1")
    l_lpt = lpt_balance_bound(hg_reduced, k_prime, epsilon)
    return l_lpt / ceil_div(hg_reduced.total_weight, k_prime) - 1.0
