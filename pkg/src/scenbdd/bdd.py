"""Reduced ordered BDDs for monotone Boolean functions given by minimal true points.

Node references are ints: ``FALSE = 0``, ``TRUE = 1``, and internal node
``i`` (index into :attr:`Bdd.nodes`) has reference ``i + 2``. Layers are
1-based positions in the variable order; ``order[layer - 1]`` is the edge
tested at that layer. Node indices are canonical: sorted by layer, ties broken by
depth-first preorder (FALSE-child first), so parents precede children.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import BddSizeError, InvariantError
from .recourse import CriticalLadder, minimal_family

FALSE = 0
TRUE = 1
DEFAULT_NODE_CAP = 10_000_000


class Ordering(enum.Enum):
    OCCURRENCE = "occ"
    CUTHILL_MCKEE = "cmk"
    IDENTITY = "id"


@dataclass(frozen=True)
class Bdd:
    num_vars: int
    order: tuple[int, ...]
    nodes: tuple[tuple[int, int, int], ...]  # (layer, lo, hi)
    root: int

    def node(self, ref: int) -> tuple[int, int, int]:
        return self.nodes[ref - 2]

    @property
    def num_internal(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class BddStats:
    total_size: int
    width: int
    layer_widths: tuple[int, ...]


def _check_permutation(order, num_edges):
    if sorted(order) != list(range(1, num_edges + 1)):
        raise ValueError(f"order {tuple(order)} is not a permutation of 1..{num_edges}")


def order_edges(points, num_edges: int, heuristic=Ordering.OCCURRENCE) -> tuple[int, ...]:
    """Variable order for a family of minimal true points (edge bitmasks).

    ``heuristic`` is an :class:`Ordering` or an explicit permutation of
    edge ids. Occurrence ordering puts rarely used edges first; edges in no
    point come first of all and never produce a node.
    """
    if not isinstance(heuristic, Ordering):
        order = tuple(int(e) for e in heuristic)
        _check_permutation(order, num_edges)
        return order
    edges = range(1, num_edges + 1)
    if heuristic is Ordering.IDENTITY:
        return tuple(edges)
    points = list(points)
    count = {e: sum(m >> (e - 1) & 1 for m in points) for e in edges}
    if heuristic is Ordering.OCCURRENCE:
        if not points:
            raise ValueError("occurrence ordering needs a nonempty family")
        return tuple(sorted(edges, key=lambda e: (count[e], e)))

    # Cuthill-McKee on the co-occurrence graph
    nbrs = {e: set() for e in edges}
    for m in points:
        members = [e for e in edges if m >> (e - 1) & 1]
        for a in members:
            nbrs[a].update(b for b in members if b != a)
    order = [e for e in edges if count[e] == 0]
    seen = set(order)

    def deg_key(e):
        return (len(nbrs[e]), e)

    while len(order) < num_edges:
        start = min((e for e in edges if e not in seen), key=deg_key)
        seen.add(start)
        queue = deque([start])
        while queue:
            u = queue.popleft()
            order.append(u)
            for v in sorted(nbrs[u] - seen, key=deg_key):
                seen.add(v)
                queue.append(v)
    return tuple(order)


def _canonicalize(num_vars, order, root, get) -> Bdd:
    """Renumber the nodes reachable from ``root`` by (layer, preorder rank).

    Preorder (lo before hi) alone is not topological on a DAG; sorting by
    layer first makes every parent precede its children.
    """
    if root in (FALSE, TRUE):
        return Bdd(num_vars, tuple(order), (), root)
    rank: dict[int, int] = {}
    stack = [root]
    while stack:
        r = stack.pop()
        if r in (FALSE, TRUE) or r in rank:
            continue
        rank[r] = len(rank)
        _, lo, hi = get(r)
        stack.append(hi)
        stack.append(lo)
    seq = sorted(rank, key=lambda r: (get(r)[0], rank[r]))
    new_ref = {r: k + 2 for k, r in enumerate(seq)}
    nodes = []
    for r in seq:
        layer, lo, hi = get(r)
        nodes.append((layer, new_ref.get(lo, lo), new_ref.get(hi, hi)))
    return Bdd(num_vars, tuple(order), tuple(nodes), 2)


def compile_monotone(points, order: Sequence[int], node_cap: int = DEFAULT_NODE_CAP) -> Bdd:
    """BDD of ``xi -> any(m <= xi for m in points)`` under the given edge order.

    Top-down: each distinct residual family (after removing non-minimal
    members) is one node, so equal subfunctions merge on first sight.
    """
    num_vars = len(order)
    _check_permutation(order, num_vars)
    pos = {e: k for k, e in enumerate(order)}

    def to_layers(m):
        out = 0
        e = 1
        while m:
            if m & 1:
                out |= 1 << pos[e]
            m >>= 1
            e += 1
        return out

    family = tuple(minimal_family(to_layers(m) for m in points))
    memo: dict[tuple[int, ...], int] = {}
    unique: dict[tuple[int, int, int], int] = {}
    raw: list[tuple[int, int, int]] = []

    def build(fam):
        if not fam:
            return FALSE
        if fam[0] == 0:
            return TRUE
        ref = memo.get(fam)
        if ref is not None:
            return ref
        union = 0
        for m in fam:
            union |= m
        bit = union & -union
        with_v = [m ^ bit for m in fam if m & bit]
        without = [m for m in fam if not m & bit]
        hi_fam = sorted(
            with_v + [a for a in without if not any(b & a == b for b in with_v)]
        )
        lo = build(tuple(without))
        hi = build(tuple(hi_fam))
        key = (bit.bit_length(), lo, hi)
        ref = unique.get(key)
        if ref is None:
            ref = len(raw) + 2
            unique[key] = ref
            raw.append(key)
            if len(raw) > node_cap:
                widths = [0] * num_vars
                for layer, _, _ in raw:
                    widths[layer - 1] += 1
                raise BddSizeError(node_cap, len(raw), widths)
        memo[fam] = ref
        return ref

    root = build(family)
    return _canonicalize(num_vars, order, root, lambda r: raw[r - 2])


def compile_ladder(
    ladder: CriticalLadder, order: Sequence[int], node_cap: int = DEFAULT_NODE_CAP
) -> list[Bdd]:
    """One BDD per level for the sublevel indicator, all on one shared order."""
    return [
        compile_monotone(ladder.cumulative_family(i), order, node_cap)
        for i in range(len(ladder.levels))
    ]


def dual_bdd(b: Bdd) -> Bdd:
    """Swap the FALSE/TRUE arcs of every node.

    For a monotone function this encodes the negated dual, on the same graph.
    """
    if b.root in (FALSE, TRUE):
        return b

    def swapped(r):
        layer, lo, hi = b.node(r)
        return layer, hi, lo

    return _canonicalize(b.num_vars, b.order, b.root, swapped)


def evaluate(b: Bdd, xi: int) -> int:
    """Follow TRUE-arcs for surviving edges in ``xi`` (bitmask); 1 iff TRUE is reached."""
    r = b.root
    while r > TRUE:
        layer, lo, hi = b.nodes[r - 2]
        r = hi if xi >> (b.order[layer - 1] - 1) & 1 else lo
    return r


def stats(b: Bdd) -> BddStats:
    widths = [0] * b.num_vars
    for layer, _, _ in b.nodes:
        widths[layer - 1] += 1
    terminals = 1 if b.root in (FALSE, TRUE) else 2
    return BddStats(len(b.nodes) + terminals, max(widths, default=0), tuple(widths))


def structure_violations(b: Bdd) -> list[str]:
    """Orderedness, reducedness and canonical-numbering checks."""
    out = []
    seen = {}
    n = len(b.nodes)
    if b.root not in (FALSE, TRUE) and b.root != 2:
        out.append(f"root reference {b.root} is not the first node")
    for i, (layer, lo, hi) in enumerate(b.nodes):
        ref = i + 2
        if not 1 <= layer <= b.num_vars:
            out.append(f"node {i}: layer {layer} out of range")
        for child in (lo, hi):
            if not 0 <= child < n + 2:
                out.append(f"node {i}: dangling child {child}")
            elif child > TRUE:
                if child <= ref:
                    out.append(f"node {i}: child {child - 2} does not come later")
                if b.nodes[child - 2][0] <= layer:
                    out.append(f"node {i}: arc does not go to a deeper layer")
        if lo == hi:
            out.append(f"node {i}: redundant (lo == hi)")
        key = (layer, lo, hi)
        if key in seen:
            out.append(f"nodes {seen[key]} and {i} are duplicates")
        seen[key] = i
    reach = set()
    stack = [b.root]
    while stack:
        r = stack.pop()
        if r > TRUE and r not in reach:
            reach.add(r)
            _, lo, hi = b.nodes[r - 2]
            stack += [lo, hi]
    if len(reach) != n:
        out.append(f"{n - len(reach)} unreachable nodes")
    return out


def dump_bdd(b: Bdd) -> str:
    """Text dump: header lines, then ``<id> <edge> <lo> <hi>`` per node, terminals T/F."""

    def name(r):
        return "F" if r == FALSE else "T" if r == TRUE else str(r - 2)

    lines = [
        f"bdd vars={b.num_vars} order={','.join(map(str, b.order))}",
        f"root {name(b.root)}",
    ]
    for i, (layer, lo, hi) in enumerate(b.nodes):
        lines.append(f"{i} {b.order[layer - 1]} {name(lo)} {name(hi)}")
    return "\n".join(lines) + "\n"


def load_bdd(text: str) -> Bdd:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = dict(tok.split("=", 1) for tok in lines[0].split()[1:])
    num_vars = int(head["vars"])
    order = tuple(int(e) for e in head["order"].split(",")) if num_vars else ()
    layer_of = {e: k + 1 for k, e in enumerate(order)}

    def ref(tok):
        return FALSE if tok == "F" else TRUE if tok == "T" else int(tok) + 2

    root = ref(lines[1].split()[1])
    nodes = []
    for k, ln in enumerate(lines[2:]):
        i, edge, lo, hi = ln.split()
        if int(i) != k:
            raise InvariantError(f"BDD dump node ids must be consecutive, got {i} at {k}")
        nodes.append((layer_of[int(edge)], ref(lo), ref(hi)))
    return Bdd(num_vars, order, tuple(nodes), root)


def incidence_bandwidth(points, order: Sequence[int]) -> int:
    """Largest column span of a point's ones in the incidence matrix under ``order``."""
    pos = {e: k for k, e in enumerate(order)}
    best = 0
    for m in points:
        cols = [pos[e] for e in range(1, len(order) + 1) if m >> (e - 1) & 1]
        if cols:
            best = max(best, max(cols) - min(cols) + 1)
    return best
