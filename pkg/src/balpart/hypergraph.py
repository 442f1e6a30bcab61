"""Weighted hypergraph core: validated construction, subhypergraphs,
partitions, and the connectivity objective."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels

# Keeps every divisor-scaled prefix sum used by the bound machinery inside
# int64; sums beyond this are rejected at construction time.
MAX_TOTAL_WEIGHT = 1 << 44


class HypergraphError(ValueError):
    """Structurally invalid hypergraph input."""


class Hypergraph:
    """Immutable weighted hypergraph in CSR form.

    Vertices and nets are 0-indexed. ``xpins``/``pins`` list the pins of
    each net, ``xnets``/``vnets`` the nets incident to each vertex. The
    structure is read-only after construction and safe to share across
    threads.
    """

    __slots__ = ("vertex_weights", "net_weights", "xpins", "pins", "xnets",
                 "vnets", "total_weight")

    def __init__(self, vertex_weights, net_weights, xpins, pins, *,
                 _validated=False):
        if not _validated:
            raise HypergraphError("use build_hypergraph() to construct")
        self.vertex_weights = vertex_weights
        self.net_weights = net_weights
        self.xpins = xpins
        self.pins = pins
        self.total_weight = int(sum(int(w) for w in vertex_weights))
        self.xnets, self.vnets = _build_incidence(
            len(vertex_weights), xpins, pins)
        for arr in (self.vertex_weights, self.net_weights, self.xpins,
                    self.pins, self.xnets, self.vnets):
            arr.setflags(write=False)

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_weights)

    @property
    def num_nets(self) -> int:
        return len(self.net_weights)

    @property
    def num_pins(self) -> int:
        return len(self.pins)

    @property
    def max_vertex_weight(self) -> int:
        return int(self.vertex_weights.max()) if self.num_vertices else 0

    def net(self, e: int) -> np.ndarray:
        """Pins of net ``e`` (a read-only view)."""
        return self.pins[self.xpins[e]:self.xpins[e + 1]]

    def nets(self):
        """Iterate over all nets as pin arrays."""
        for e in range(self.num_nets):
            yield self.net(e)

    def incident_nets(self, v: int) -> np.ndarray:
        return self.vnets[self.xnets[v]:self.xnets[v + 1]]

    def __repr__(self):
        return (f"Hypergraph(n={self.num_vertices}, m={self.num_nets}, "
                f"pins={self.num_pins}, c(V)={self.total_weight})")


def _build_incidence(n, xpins, pins):
    """Vertex -> incident-net CSR, consistent with the net list."""
    m = len(xpins) - 1
    degrees = np.bincount(pins, minlength=n).astype(np.int64)
    xnets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(degrees, out=xnets[1:])
    net_ids = np.repeat(np.arange(m, dtype=np.int32), np.diff(xpins))
    # stable sort groups pins by vertex and keeps nets in increasing id order
    order = np.argsort(pins, kind="stable")
    vnets = np.ascontiguousarray(net_ids[order])
    return xnets, vnets


def build_hypergraph(vertex_weights, nets, net_weights=None) -> Hypergraph:
    """Validate and build a hypergraph.

    ``nets`` is an iterable of vertex-id lists; ``net_weights`` defaults to
    all ones. Rejects non-positive weights, empty nets, out-of-range ids,
    and duplicate ids within a net.
    """
    vw = np.asarray(list(vertex_weights), dtype=np.int64)
    n = len(vw)
    if n == 0:
        raise HypergraphError("hypergraph needs at least one vertex")
    if np.any(vw <= 0):
        bad = int(np.argmax(vw <= 0))
        raise HypergraphError(
            f"vertex {bad} has non-positive weight {int(vw[bad])}")
    total = int(vw.astype(object).sum())
    if total > MAX_TOTAL_WEIGHT:
        raise HypergraphError(
            f"total vertex weight {total} exceeds the supported maximum "
            f"{MAX_TOTAL_WEIGHT} (would overflow bound arithmetic)")

    nets = [np.asarray(e, dtype=np.int64) for e in nets]
    m = len(nets)
    if net_weights is None:
        nw = np.ones(m, dtype=np.int64)
    else:
        nw = np.asarray(list(net_weights), dtype=np.int64)
        if len(nw) != m:
            raise HypergraphError(
                f"{m} nets but {len(nw)} net weights")
        if m and np.any(nw <= 0):
            bad = int(np.argmax(nw <= 0))
            raise HypergraphError(
                f"net {bad} has non-positive weight {int(nw[bad])}")

    xpins = np.zeros(m + 1, dtype=np.int64)
    for e, pins_e in enumerate(nets):
        if len(pins_e) == 0:
            raise HypergraphError(f"net {e} is empty")
        if pins_e.min(initial=0) < 0 or pins_e.max(initial=0) >= n:
            raise HypergraphError(f"net {e} references a vertex id outside "
                                  f"[0, {n})")
        if len(np.unique(pins_e)) != len(pins_e):
            raise HypergraphError(f"net {e} contains duplicate vertex ids")
        xpins[e + 1] = xpins[e] + len(pins_e)
    pins = (np.concatenate(nets).astype(np.int32) if m
            else np.empty(0, dtype=np.int32))
    return Hypergraph(vw, nw, xpins, pins, _validated=True)


def _from_csr(vertex_weights, net_weights, xpins, pins) -> Hypergraph:
    """Internal fast path for already-consistent CSR data."""
    return Hypergraph(
        np.ascontiguousarray(vertex_weights, dtype=np.int64),
        np.ascontiguousarray(net_weights, dtype=np.int64),
        np.ascontiguousarray(xpins, dtype=np.int64),
        np.ascontiguousarray(pins, dtype=np.int32),
        _validated=True)


@dataclass(frozen=True)
class VertexSubset:
    """Strictly increasing vertex ids of a parent hypergraph, with the
    implied parent-id <-> local-id bijection."""

    ids: np.ndarray
    parent_size: int

    @classmethod
    def from_ids(cls, ids, parent_size: int) -> "VertexSubset":
        arr = np.asarray(ids, dtype=np.int64)
        if len(arr) == 0:
            raise HypergraphError("vertex subset is empty")
        if np.any(np.diff(arr) <= 0):
            raise HypergraphError("subset ids must be strictly increasing")
        if arr[0] < 0 or arr[-1] >= parent_size:
            raise HypergraphError("subset ids out of range")
        arr = arr.copy()
        arr.setflags(write=False)
        return cls(arr, parent_size)

    def __len__(self):
        return len(self.ids)

    def to_local(self, parent_ids):
        return np.searchsorted(self.ids, parent_ids).astype(np.int64)

    def to_parent(self, local_ids):
        return self.ids[np.asarray(local_ids)]


def subhypergraph(hg: Hypergraph, subset: VertexSubset) -> Hypergraph:
    """Restrict ``hg`` to ``subset``: every net becomes its intersection
    with the subset, empty intersections are dropped, single-pin residual
    nets are kept (they never contribute to connectivity)."""
    if len(subset) == 0:
        raise HypergraphError("vertex subset is empty")
    mask = np.zeros(hg.num_vertices, dtype=bool)
    mask[subset.ids] = True
    keep_pin = mask[hg.pins]
    m = hg.num_nets
    net_ids = np.repeat(np.arange(m, dtype=np.int64), np.diff(hg.xpins))
    kept_nets = net_ids[keep_pin]
    kept_pins = hg.pins[keep_pin]
    sizes = np.bincount(kept_nets, minlength=m)
    keep_net = sizes > 0
    new_sizes = sizes[keep_net]
    xpins = np.zeros(len(new_sizes) + 1, dtype=np.int64)
    np.cumsum(new_sizes, out=xpins[1:])
    local_pins = subset.to_local(kept_pins).astype(np.int32)
    return _from_csr(hg.vertex_weights[subset.ids], hg.net_weights[keep_net],
                     xpins, local_pins)


@dataclass
class Partition:
    """Assignment of every vertex to one of ``k`` blocks."""

    block_of: np.ndarray
    k: int
    block_weights: np.ndarray = field(default=None)  # type: ignore[assignment]

    @classmethod
    def from_block_of(cls, hg: Hypergraph, block_of, k: int) -> "Partition":
        arr = np.ascontiguousarray(block_of, dtype=np.int32)
        if len(arr) != hg.num_vertices:
            raise HypergraphError(
                f"partition covers {len(arr)} vertices, hypergraph has "
                f"{hg.num_vertices}")
        if len(arr) and (arr.min() < 0 or arr.max() >= k):
            raise HypergraphError(f"block ids must lie in [0, {k})")
        bw = np.zeros(k, dtype=np.int64)
        np.add.at(bw, arr, hg.vertex_weights)
        return cls(arr, k, bw)

    def empty_blocks(self):
        counts = np.bincount(self.block_of, minlength=self.k)
        return [b for b in range(self.k) if counts[b] == 0]

    def copy(self) -> "Partition":
        return Partition(self.block_of.copy(), self.k,
                         self.block_weights.copy())


def block_weights(hg: Hypergraph, partition: Partition) -> list[int]:
    """Per-block weights recomputed from scratch."""
    bw = np.zeros(partition.k, dtype=np.int64)
    np.add.at(bw, partition.block_of, hg.vertex_weights)
    return [int(x) for x in bw]


def max_block_weight(hg: Hypergraph, partition: Partition) -> int:
    return max(block_weights(hg, partition))


def connectivity(hg: Hypergraph, partition: Partition) -> int:
    """Exact connectivity objective of ``partition`` on ``hg``."""
    if len(partition.block_of) != hg.num_vertices:
        raise HypergraphError("partition does not cover the hypergraph")
    return _kernels.km1(hg.xpins, hg.pins, hg.net_weights,
                        partition.block_of, partition.k)
