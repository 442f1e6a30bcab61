"""hMetis-style .hgr hypergraph files, partition files, and the
weighted-instance generator."""

from __future__ import annotations

import logging

import numpy as np

from .hypergraph import Hypergraph, Partition, _from_csr, build_hypergraph

log = logging.getLogger(__name__)

FMT_NET_WEIGHTS = 1
FMT_VERTEX_WEIGHTS = 10


class HgrFormatError(ValueError):
    """Malformed .hgr or partition file; the message carries a line number."""


def _content_lines(text: str):
    """Yield (line_number, stripped_line), skipping comments and blanks."""
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        yield ln, line


def parse_hgr(data) -> Hypergraph:
    """Parse .hgr text: header ``|E| |V| [fmt]``, fmt bit 1 = net weights
    lead each net line, fmt bit 10 = one vertex weight per trailing line;
    vertices are 1-indexed in the file, 0-indexed in the result."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lines = _content_lines(data)
    try:
        header_ln, header = next(lines)
    except StopIteration:
        raise HgrFormatError("line 1: empty file") from None
    fields = header.split()
    if len(fields) not in (2, 3) or not all(f.lstrip("-").isdigit()
                                            for f in fields):
        raise HgrFormatError(f"line {header_ln}: malformed header {header!r}")
    num_nets, num_vertices = int(fields[0]), int(fields[1])
    fmt = int(fields[2]) if len(fields) == 3 else 0
    if fmt not in (0, 1, 10, 11):
        raise HgrFormatError(f"line {header_ln}: unsupported fmt {fmt}")
    if num_nets < 0 or num_vertices <= 0:
        raise HgrFormatError(f"line {header_ln}: bad counts in header")
    has_net_weights = fmt in (1, 11)
    has_vertex_weights = fmt in (10, 11)

    nets = []
    net_weights = []
    for e in range(num_nets):
        try:
            ln, line = next(lines)
        except StopIteration:
            raise HgrFormatError(
                f"line {header_ln}: header promises {num_nets} nets, file "
                f"has {e}") from None
        tokens = line.split()
        try:
            values = [int(t) for t in tokens]
        except ValueError:
            raise HgrFormatError(f"line {ln}: non-integer token") from None
        if has_net_weights:
            if not values:
                raise HgrFormatError(f"line {ln}: missing net weight")
            weight, values = values[0], values[1:]
            if weight <= 0:
                raise HgrFormatError(
                    f"line {ln}: non-positive net weight {weight}")
        else:
            weight = 1
        if not values:
            raise HgrFormatError(f"line {ln}: net {e} is empty")
        pins = []
        seen = set()
        for v in values:
            if v < 1 or v > num_vertices:
                raise HgrFormatError(
                    f"line {ln}: vertex id {v} outside [1, {num_vertices}]")
            if v in seen:
                raise HgrFormatError(
                    f"line {ln}: duplicate vertex id {v} within net {e}")
            seen.add(v)
            pins.append(v - 1)
        nets.append(pins)
        net_weights.append(weight)

    if has_vertex_weights:
        weights = []
        for v in range(num_vertices):
            try:
                ln, line = next(lines)
            except StopIteration:
                raise HgrFormatError(
                    f"line {header_ln}: expected {num_vertices} vertex "
                    f"weights, file has {v}") from None
            token = line.split()[0]
            try:
                w = int(token)
            except ValueError:
                raise HgrFormatError(
                    f"line {ln}: non-integer vertex weight") from None
            if w <= 0:
                raise HgrFormatError(
                    f"line {ln}: non-positive vertex weight {w}")
            weights.append(w)
    else:
        weights = [1] * num_vertices

    for ln, _ in lines:
        raise HgrFormatError(f"line {ln}: trailing content after the "
                             f"declared nets and weights")
    return build_hypergraph(weights, nets, net_weights)


def load_hgr(path) -> Hypergraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_hgr(fh.read())


def write_hgr(hg: Hypergraph, path) -> None:
    """Canonical .hgr writer: emits only the fmt bits the instance needs."""
    has_nw = bool(np.any(hg.net_weights != 1))
    has_vw = bool(np.any(hg.vertex_weights != 1))
    fmt = (FMT_NET_WEIGHTS if has_nw else 0) + \
        (FMT_VERTEX_WEIGHTS if has_vw else 0)
    with open(path, "w", encoding="utf-8") as fh:
        header = f"{hg.num_nets} {hg.num_vertices}"
        if fmt:
            header += f" {fmt}"
        fh.write(header + "\n")
        for e in range(hg.num_nets):
            pins = " ".join(str(int(v) + 1) for v in hg.net(e))
            if has_nw:
                fh.write(f"{int(hg.net_weights[e])} {pins}\n")
            else:
                fh.write(pins + "\n")
        if has_vw:
            for w in hg.vertex_weights:
                fh.write(f"{int(w)}\n")


def write_partition(partition: Partition, path) -> None:
    """One block id per line, in vertex order."""
    with open(path, "w", encoding="utf-8") as fh:
        for b in partition.block_of:
            fh.write(f"{int(b)}\n")


def read_partition(path, n: int) -> Partition:
    """Read a partition file for an ``n``-vertex hypergraph."""
    blocks = []
    with open(path, "r", encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            try:
                b = int(line.split()[0])
            except ValueError:
                raise HgrFormatError(
                    f"line {ln}: non-integer block id") from None
            if b < 0:
                raise HgrFormatError(f"line {ln}: negative block id {b}")
            blocks.append(b)
    if len(blocks) != n:
        raise HgrFormatError(
            f"partition file has {len(blocks)} entries, expected {n}")
    arr = np.asarray(blocks, dtype=np.int32)
    k = int(arr.max()) + 1 if len(arr) else 1
    # block weights stay unbound until a hypergraph is attached
    return Partition(arr, k, None)


# --- artificial weighted instances -----------------------------------------

HEAVY_COUNT_TARGET = 120
HEAVY_TOTAL_SHARE_DIVISOR = 60  # from: expected heavy total == light total


def generate_artificial(hg_base: Hypergraph, seed: int) -> Hypergraph:
    """Re-weight a hypergraph so that in expectation 120 vertices carry a
    non-unit weight and those vertices hold half the total weight.

    Each vertex independently becomes heavy with probability 120/n; heavy
    weights are uniform integers in [1, W] with W chosen so that the
    expected heavy total, 120 * (W + 1) / 2, matches the expected light
    total, n - 120. The net structure is reused unchanged.
    """
    n = hg_base.num_vertices
    if n <= HEAVY_COUNT_TARGET:
        raise ValueError(
            f"generator needs more than {HEAVY_COUNT_TARGET} vertices, "
            f"got {n}")
    p = HEAVY_COUNT_TARGET / n
    w_max = round((n - HEAVY_COUNT_TARGET) / HEAVY_TOTAL_SHARE_DIVISOR - 1)
    if w_max < 1:
        log.warning("degenerate heavy-weight range for n=%d; clamping W to 1",
                    n)
        w_max = 1
    rng = np.random.default_rng(seed)
    heavy = rng.random(n) < p
    weights = np.ones(n, dtype=np.int64)
    weights[heavy] = rng.integers(1, w_max + 1, size=int(heavy.sum()),
                                  dtype=np.int64)
    return _from_csr(weights, hg_base.net_weights, hg_base.xpins,
                     hg_base.pins)
