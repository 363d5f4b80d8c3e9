"""Critical values and minimal survivable scenarios of the recourse function.

A :class:`CriticalLadder` lists the distinct recourse values in the order in
which their sublevel sets grow, and for each value the inclusion-minimal
surviving-edge sets attaining it. Shortest-path ladders come from bounded
simple-path enumeration; max-flow ladders from brute force over all
scenarios with a max-flow oracle.

For max flow, larger is "better", so the ladder is kept over negated values:
``alpha = -flow`` and the sublevel test ``-flow <= alpha`` reads
``flow >= v``. :meth:`CriticalLadder.value` undoes the negation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LadderError, RecourseUndefinedError, SizeCapError
from .instance import Mode, NetworkInstance, bits_to_mask, fmt_num, mask_to_bits
from .netalg import FlowNetwork, adjacency, dijkstra

VALUE_TOL = 1e-9
DEFAULT_ORACLE_LIMIT = 24
DEFAULT_PATH_CAP = 1_000_000
DEFAULT_CLUTTER_CAP = 100_000


@dataclass(frozen=True)
class Level:
    alpha: float
    min_true_points: tuple[int, ...]


@dataclass(frozen=True)
class CriticalLadder:
    num_edges: int
    levels: tuple[Level, ...]
    penalty: float | None = None
    sense: str = "min"

    def value(self, i: int) -> float:
        """Recourse value of level ``i`` (undoes the max-flow negation)."""
        a = self.levels[i].alpha
        return -a + 0.0 if self.sense == "max" else a

    @property
    def values(self) -> list[float]:
        return [self.value(i) for i in range(len(self.levels))]

    def cumulative_family(self, i: int) -> list[int]:
        """Minimal true points of the sublevel indicator at level ``i``."""
        fam = [m for lv in self.levels[: i + 1] for m in lv.min_true_points]
        return minimal_family(fam)

    def all_points(self) -> list[int]:
        return [m for lv in self.levels for m in lv.min_true_points]


def _popcount(m: int) -> int:
    return bin(m).count("1")


def minimal_family(family) -> list[int]:
    """Inclusion-minimal members of a family of bitmasks, sorted, deduplicated."""
    out: list[int] = []
    for m in sorted(set(family), key=lambda m: (_popcount(m), m)):
        if not any(k & m == k for k in out):
            out.append(m)
    return sorted(out)


def _cluster(values, tol=VALUE_TOL):
    """Group sorted values whose spread from the group's first member is <= tol."""
    groups: list[list] = []
    for v in values:
        if groups and v - groups[-1][0] <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    return groups


def _ladder_from_points(points, num_edges, penalty, sense) -> CriticalLadder:
    """``points``: iterable of (alpha, mask). Groups by alpha and prunes non-minimal masks."""
    pts = sorted(points)
    levels = []
    kept: list[int] = []
    i = 0
    while i < len(pts):
        a0 = pts[i][0]
        j = i
        while j < len(pts) and pts[j][0] - a0 <= VALUE_TOL:
            j += 1
        cand = minimal_family(m for _, m in pts[i:j])
        fresh = [m for m in cand if not any(k & m == k for k in kept)]
        if fresh:
            levels.append(Level(a0, tuple(fresh)))
            kept.extend(fresh)
        i = j
    return CriticalLadder(num_edges, tuple(levels), penalty, sense)


def _simple_paths(inst: NetworkInstance, cutoff: float, cap: int):
    """Simple source-sink paths of length <= cutoff as (length, edge mask).

    Restricted backtracking: a branch is entered only if the sink stays
    reachable within the remaining length while avoiding the current path,
    so every explored branch yields at least one path.
    """
    adj = adjacency(inst)
    radj = adjacency(inst, reverse=True)
    s, t = inst.node_index(inst.source), inst.node_index(inst.sink)
    limit = cutoff + VALUE_TOL
    out = []
    on_path = {s}

    def extend(u, length, mask):
        if u == t:
            out.append((length, mask))
            if len(out) > cap:
                raise SizeCapError(f"more than {cap} simple paths within the cutoff")
            return
        to_sink = dijkstra(radj, t, blocked=on_path)
        for v, eid, w in adj[u]:
            if v in on_path or length + w + to_sink[v] > limit:
                continue
            on_path.add(v)
            extend(v, length + w, mask | 1 << (eid - 1))
            on_path.discard(v)

    if dijkstra(radj, t)[s] <= limit:
        extend(s, 0.0, 0)
    return out


def enumerate_shortest_paths(
    inst: NetworkInstance, path_cap: int = DEFAULT_PATH_CAP
) -> CriticalLadder:
    if inst.mode is not Mode.SHORTEST_PATH:
        raise ValueError("enumerate_shortest_paths needs a shortest_path instance")
    paths = _simple_paths(inst, inst.cutoff, path_cap)
    if not paths and inst.penalty is None:
        raise RecourseUndefinedError(
            "recourse undefined: no source-sink path and no penalty defined"
        )
    ladder = _ladder_from_points(paths, inst.num_edges, inst.penalty, "min")
    if inst.penalty is not None and ladder.levels and not inst.penalty > ladder.levels[-1].alpha:
        raise LadderError(
            f"penalty {fmt_num(inst.penalty)} must exceed every tracked path length "
            f"(longest is {fmt_num(ladder.levels[-1].alpha)})"
        )
    return ladder


def flow_table(inst: NetworkInstance) -> np.ndarray:
    """Max-flow value of every scenario, indexed by surviving-edge mask."""
    net = FlowNetwork(inst)
    return np.array([net.max_flow(m) for m in range(1 << inst.num_edges)])


def enumerate_flow_levels(
    inst: NetworkInstance, oracle_limit: int = DEFAULT_ORACLE_LIMIT
) -> CriticalLadder:
    if inst.mode is not Mode.MAX_FLOW:
        raise ValueError("enumerate_flow_levels needs a max_flow instance")
    n = inst.num_edges
    if n > oracle_limit:
        raise SizeCapError(
            f"|E|={n} exceeds the brute-force limit {oracle_limit}; "
            "supply an external ladder file instead"
        )
    flows = flow_table(inst)
    groups = _cluster(np.unique(flows).tolist())
    reps = np.array([g[0] for g in groups])
    tops = np.array([g[-1] for g in groups])
    cid = np.searchsorted(tops, flows, side="left")
    masks = np.arange(1 << n)
    non_minimal = np.zeros(1 << n, dtype=bool)
    for e in range(n):
        has = (masks >> e & 1).astype(bool)
        non_minimal |= has & (cid[masks ^ (1 << e)] >= cid)
    points = [(0.0 - float(reps[c]), int(m)) for m, c in zip(masks[~non_minimal], cid[~non_minimal])]
    return _ladder_from_points(points, n, None, "max")


def build_ladder(inst: NetworkInstance, **caps) -> CriticalLadder:
    if inst.mode is Mode.SHORTEST_PATH:
        return enumerate_shortest_paths(inst, caps.get("path_cap", DEFAULT_PATH_CAP))
    return enumerate_flow_levels(inst, caps.get("oracle_limit", DEFAULT_ORACLE_LIMIT))


def ladder_violations(ladder: CriticalLadder) -> list[str]:
    """Structural checks: increasing alphas, nonempty levels, antichains, cross-level minimality."""
    out = []
    w = ladder.num_edges
    if ladder.sense not in ("min", "max"):
        out.append(f"unknown sense {ladder.sense!r}")
    for i, lv in enumerate(ladder.levels):
        if i and not lv.alpha > ladder.levels[i - 1].alpha:
            out.append(
                f"alphas not strictly increasing: level {i} alpha={fmt_num(lv.alpha)} "
                f"after alpha={fmt_num(ladder.levels[i - 1].alpha)}"
            )
        if not lv.min_true_points:
            out.append(f"level {i} is empty")
        for m in lv.min_true_points:
            if m >> w:
                out.append(f"level {i}: scenario references an edge beyond |E|={w}")
        pts = lv.min_true_points
        for a in range(len(pts)):
            for b in range(len(pts)):
                if a != b and pts[a] & pts[b] == pts[a]:
                    out.append(
                        f"antichain violation in level {i}: "
                        f"{mask_to_bits(pts[a], w)} is contained in {mask_to_bits(pts[b], w)}"
                    )
        for j in range(i):
            for k in ladder.levels[j].min_true_points:
                for m in pts:
                    if k & m == k:
                        out.append(
                            f"minimality violation: level {i} scenario {mask_to_bits(m, w)} "
                            f"contains level {j} scenario {mask_to_bits(k, w)}"
                        )
    if ladder.penalty is not None and ladder.levels and ladder.sense == "min":
        if not ladder.penalty > ladder.levels[-1].alpha:
            out.append("penalty level must lie above every level")
    return out


def check_ladder(ladder: CriticalLadder) -> CriticalLadder:
    bad = ladder_violations(ladder)
    if bad:
        raise LadderError("; ".join(bad))
    return ladder


def dump_ladder(ladder: CriticalLadder) -> str:
    lines = []
    if ladder.sense != "min":
        lines.append(f"[ladder] sense={ladder.sense}")
    for lv in ladder.levels:
        lines.append(f"[level] alpha={fmt_num(lv.alpha)}")
        lines.extend(mask_to_bits(m, ladder.num_edges) for m in lv.min_true_points)
    if ladder.penalty is not None:
        lines.append(f"[penalty] alpha={fmt_num(ladder.penalty)}")
    return "\n".join(lines) + "\n"


def _header_alpha(rest: str, lineno: int) -> float:
    key, _, val = rest.strip().partition("=")
    if key != "alpha" or not val:
        raise LadderError(f"line {lineno}: expected alpha=<real>")
    try:
        return float(val)
    except ValueError:
        raise LadderError(f"line {lineno}: bad alpha {val!r}") from None


def load_ladder(text: str, inst: NetworkInstance) -> CriticalLadder:
    """Parse a ladder file and verify every structural invariant."""
    w = inst.num_edges
    sense = "max" if inst.mode is Mode.MAX_FLOW else "min"
    levels: list[tuple[float, list[int]]] = []
    penalty = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[ladder]"):
            key, _, val = line[len("[ladder]") :].strip().partition("=")
            if key != "sense" or val not in ("min", "max"):
                raise LadderError(f"line {lineno}: expected sense=min|max")
            sense = val
        elif line.startswith("[level]"):
            levels.append((_header_alpha(line[len("[level]") :], lineno), []))
        elif line.startswith("[penalty]"):
            penalty = _header_alpha(line[len("[penalty]") :], lineno)
        else:
            if not levels:
                raise LadderError(f"line {lineno}: scenario before any [level]")
            if len(line) != w or set(line) - {"0", "1"}:
                raise LadderError(
                    f"line {lineno}: scenario must be a 0/1 string of width {w}"
                )
            levels[-1][1].append(bits_to_mask(line))
    ladder = CriticalLadder(
        w, tuple(Level(a, tuple(sorted(ms))) for a, ms in levels), penalty, sense
    )
    return check_ladder(ladder)


def failure_clutter(
    ladder: CriticalLadder, level: int, max_size: int = DEFAULT_CLUTTER_CAP
) -> list[int]:
    """Minimal edge-failure sets that push the recourse value above level ``level``.

    These are the minimal transversals of the minimal true points of levels
    0..level, built by adding one set at a time (Berge's method).
    """
    if not 0 <= level < len(ladder.levels):
        raise IndexError(f"level {level} out of range")
    return minimal_transversals(ladder.cumulative_family(level), max_size)


def minimal_transversals(family, max_size: int = DEFAULT_CLUTTER_CAP) -> list[int]:
    trans = [0]
    for s in minimal_family(family):
        hit = [t for t in trans if t & s]
        miss = [t for t in trans if not t & s]
        grown = []
        bit = 1
        rest = s
        while rest:
            if rest & 1:
                grown.extend(t | bit for t in miss)
            rest >>= 1
            bit <<= 1
        trans = minimal_family(hit + grown)
        if len(trans) > max_size:
            raise SizeCapError(
                f"failure clutter exceeds {max_size} sets (at least {len(trans)})"
            )
    return trans
