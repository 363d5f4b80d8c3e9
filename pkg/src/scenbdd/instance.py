"""Network instances: data model, validation and the sectioned text format.

Instance file layout::

    # comment
    [meta] mode=shortest_path directed=0 source=s sink=t cutoff=inf penalty=120 budget=1
    [nodes]
    s
    t
    [edges]
    # tail head length-or-capacity p delta cost decidable
    s t 7 0.9 0.05 1 1

``key=value`` pairs of ``[meta]`` may sit on the header line or on the lines
below it. The order of the ``[edges]`` lines fixes the edge indices 1..|E|.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InstanceError, InstanceSyntaxError

# slack for float round-off in p + delta range checks
PROB_TOL = 1e-12


class Mode(enum.Enum):
    SHORTEST_PATH = "shortest_path"
    MAX_FLOW = "max_flow"


@dataclass(frozen=True)
class Edge:
    id: int
    tail: str
    head: str
    weight: float  # length (shortest path) or capacity (max flow)
    p: float
    delta: float = 0.0
    cost: float = 1.0
    decidable: bool = True

    @property
    def bit(self) -> int:
        return 1 << (self.id - 1)


@dataclass(frozen=True)
class NetworkInstance:
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    mode: Mode
    source: str
    sink: str
    directed: bool
    cutoff: float = math.inf
    penalty: float | None = None
    budget: float = 0.0
    _node_index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_node_index", {v: i for i, v in enumerate(self.nodes)}
        )

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def node_index(self, node: str) -> int:
        return self._node_index[node]

    @property
    def decidable_edges(self) -> tuple[int, ...]:
        return tuple(e.id for e in self.edges if e.decidable)

    @property
    def probabilities(self) -> tuple[float, ...]:
        return tuple(e.p for e in self.edges)

    @property
    def deltas(self) -> tuple[float, ...]:
        return tuple(e.delta for e in self.edges)

    def shifted_probabilities(self, x) -> list[float]:
        """Per-edge survival probabilities p_e + x_e * delta_e under decision ``x``."""
        return shifted(self.probabilities, self.deltas, x)

    def cost_of(self, x) -> float:
        return sum(e.cost for e, xe in zip(self.edges, x) if xe)


def shifted(p, delta, x) -> list[float]:
    out = []
    for pi, di, xi in zip(p, delta, x):
        q = pi + di if xi else pi
        out.append(min(1.0, max(0.0, q)))
    return out


def check_decision(inst: NetworkInstance, x) -> tuple[int, ...]:
    """Normalize a decision vector and reject bits on non-decidable edges."""
    if isinstance(x, str):
        if set(x) - {"0", "1"}:
            raise InstanceError([f"decision vector {x!r} is not a bit string"])
        x = [int(c) for c in x]
    x = tuple(int(v) for v in x)
    if len(x) != inst.num_edges:
        raise InstanceError(
            [f"decision vector has length {len(x)}, expected {inst.num_edges}"]
        )
    for e, xe in zip(inst.edges, x):
        if xe not in (0, 1):
            raise InstanceError([f"decision on edge {e.id} is not 0/1"])
        if xe and not e.decidable:
            raise InstanceError([f"edge {e.id} is not decidable but x={xe}"])
    return x


def validate_instance(inst: NetworkInstance) -> list[str]:
    """Return a list of violated invariants; empty means valid."""
    out = []
    seen = set()
    for v in inst.nodes:
        if v in seen:
            out.append(f"duplicate node {v!r}")
        seen.add(v)
    for role, v in (("source", inst.source), ("sink", inst.sink)):
        if v not in seen:
            out.append(f"{role} {v!r} is not a declared node")
    if inst.source == inst.sink:
        out.append("source equals sink")
    if math.isnan(inst.cutoff) or inst.cutoff < 0:
        out.append("cutoff must be >= 0")
    if math.isfinite(inst.cutoff):
        if inst.penalty is None:
            out.append("penalty required when cutoff is finite")
        elif not inst.penalty > inst.cutoff:
            out.append(f"penalty {inst.penalty} must exceed cutoff {inst.cutoff}")
    if not inst.budget >= 0:
        out.append("budget must be >= 0")
    what = "length" if inst.mode is Mode.SHORTEST_PATH else "capacity"
    for k, e in enumerate(inst.edges, start=1):
        if e.id != k:
            out.append(f"edge indices not contiguous: found {e.id} at position {k}")
        for end in (e.tail, e.head):
            if end not in seen:
                out.append(f"edge {e.id}: endpoint {end!r} is not a declared node")
        if not (e.weight > 0 and math.isfinite(e.weight)):
            out.append(f"edge {e.id}: {what} must be a positive finite number")
        if not 0.0 <= e.p <= 1.0:
            out.append(f"edge {e.id}: p={e.p} out of [0,1]")
        elif not -e.p - PROB_TOL <= e.delta <= 1.0 - e.p + PROB_TOL:
            out.append(f"edge {e.id}: delta out of [-p,1-p] on edge {e.id}")
        if not e.cost >= 0:
            out.append(f"edge {e.id}: cost must be >= 0")
        if not e.decidable and e.delta != 0:
            out.append(f"edge {e.id}: delta must be 0 on a non-decidable edge")
    return out


def make_instance(**kwargs) -> NetworkInstance:
    """Build and validate; raises InstanceError listing every violation."""
    inst = NetworkInstance(**kwargs)
    violations = validate_instance(inst)
    if violations:
        raise InstanceError(violations)
    return inst


def _num(tok: str, lineno: int, what: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise InstanceSyntaxError(lineno, f"{what}: {tok!r} is not a number") from None


def _flag(tok: str, lineno: int, what: str) -> bool:
    if tok not in ("0", "1"):
        raise InstanceSyntaxError(lineno, f"{what} must be 0 or 1, got {tok!r}")
    return tok == "1"


_META_KEYS = {"mode", "directed", "source", "sink", "cutoff", "penalty", "budget"}


def parse_instance(text: str) -> NetworkInstance:
    meta: dict[str, tuple[str, int]] = {}
    nodes: list[str] = []
    raw_edges: list[tuple[list[str], int]] = []
    section = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            close = line.find("]")
            if close < 0:
                raise InstanceSyntaxError(lineno, "unterminated section header")
            section = line[1:close].strip()
            if section not in ("meta", "nodes", "edges"):
                raise InstanceSyntaxError(lineno, f"unknown section [{section}]")
            line = line[close + 1 :].strip()
            if not line:
                continue
            if section != "meta":
                raise InstanceSyntaxError(lineno, f"unexpected text after [{section}]")
        if section is None:
            raise InstanceSyntaxError(lineno, "content before the first section")
        toks = line.split()
        if section == "meta":
            for tok in toks:
                key, eq, value = tok.partition("=")
                if not eq or not value:
                    raise InstanceSyntaxError(lineno, f"expected key=value, got {tok!r}")
                if key not in _META_KEYS:
                    raise InstanceSyntaxError(lineno, f"unknown meta key {key!r}")
                if key in meta:
                    raise InstanceSyntaxError(lineno, f"duplicate meta key {key!r}")
                meta[key] = (value, lineno)
        elif section == "nodes":
            if len(toks) != 1:
                raise InstanceSyntaxError(lineno, "expected one node id per line")
            nodes.append(toks[0])
        else:
            if len(toks) != 7:
                raise InstanceSyntaxError(
                    lineno,
                    "edge line needs 7 fields: tail head weight p delta cost decidable",
                )
            raw_edges.append((toks, lineno))

    for key in ("mode", "source", "sink"):
        if key not in meta:
            raise InstanceSyntaxError(None, f"[meta] is missing required key {key!r}")
    mode_s, ln = meta["mode"]
    try:
        mode = Mode(mode_s)
    except ValueError:
        raise InstanceSyntaxError(ln, f"unknown mode {mode_s!r}") from None
    if "directed" in meta:
        directed = _flag(meta["directed"][0], meta["directed"][1], "directed")
    else:
        directed = mode is Mode.MAX_FLOW
    cutoff = math.inf
    if "cutoff" in meta:
        cutoff = _num(meta["cutoff"][0], meta["cutoff"][1], "cutoff")
    penalty = None
    if "penalty" in meta:
        penalty = _num(meta["penalty"][0], meta["penalty"][1], "penalty")
    budget = 0.0
    if "budget" in meta:
        budget = _num(meta["budget"][0], meta["budget"][1], "budget")

    edges = []
    for k, (toks, ln) in enumerate(raw_edges, start=1):
        tail, head = toks[0], toks[1]
        edges.append(
            Edge(
                id=k,
                tail=tail,
                head=head,
                weight=_num(toks[2], ln, "weight"),
                p=_num(toks[3], ln, "p"),
                delta=_num(toks[4], ln, "delta"),
                cost=_num(toks[5], ln, "cost"),
                decidable=_flag(toks[6], ln, "decidable"),
            )
        )
    return make_instance(
        nodes=tuple(nodes),
        edges=tuple(edges),
        mode=mode,
        source=meta["source"][0],
        sink=meta["sink"][0],
        directed=directed,
        cutoff=cutoff,
        penalty=penalty,
        budget=budget,
    )


def fmt_num(x: float) -> str:
    """Shortest exact text for a float; integral values without a fraction."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def serialize_instance(inst: NetworkInstance) -> str:
    meta = [
        f"mode={inst.mode.value}",
        f"directed={int(inst.directed)}",
        f"source={inst.source}",
        f"sink={inst.sink}",
        f"cutoff={fmt_num(inst.cutoff)}",
    ]
    if inst.penalty is not None:
        meta.append(f"penalty={fmt_num(inst.penalty)}")
    meta.append(f"budget={fmt_num(inst.budget)}")
    lines = ["[meta]", *meta, "[nodes]", *inst.nodes, "[edges]"]
    for e in inst.edges:
        lines.append(
            " ".join(
                [
                    e.tail,
                    e.head,
                    fmt_num(e.weight),
                    fmt_num(e.p),
                    fmt_num(e.delta),
                    fmt_num(e.cost),
                    str(int(e.decidable)),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def load_instance(path) -> NetworkInstance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


# Scenario helpers. A scenario is an int bitmask over edges: bit e-1 set means
# edge e survives.


def mask_of(edge_ids) -> int:
    m = 0
    for e in edge_ids:
        m |= 1 << (e - 1)
    return m


def edges_of(mask: int) -> tuple[int, ...]:
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


def mask_to_bits(mask: int, width: int) -> str:
    """Leftmost character is edge 1."""
    return "".join("1" if mask >> i & 1 else "0" for i in range(width))


def bits_to_mask(bits: str) -> int:
    m = 0
    for i, c in enumerate(bits):
        if c == "1":
            m |= 1 << i
        elif c != "0":
            raise ValueError(f"not a bit string: {bits!r}")
    return m


def feasible_decisions(inst: NetworkInstance, tol: float = 1e-9):
    """Budget-feasible decision vectors in lexicographic order (edge 1 most significant)."""
    ids = inst.decidable_edges
    cost = {e.id: e.cost for e in inst.edges}
    for bits in itertools.product((0, 1), repeat=len(ids)):
        if sum(cost[e] for e, b in zip(ids, bits) if b) > inst.budget + tol:
            continue
        x = [0] * inst.num_edges
        for e, b in zip(ids, bits):
            x[e - 1] = b
        yield tuple(x)


TIE_TOL = 1e-12


def decision_key(x) -> tuple[int, ...]:
    """Tie-break key: the chosen edge ids in increasing order, compared lexicographically.

    The empty decision comes first and, among single edges, the lower id wins.
    """
    return tuple(e for e, xe in enumerate(x, start=1) if xe)


def better(value: float, x, best: float, best_x) -> bool:
    if best_x is None or value < best - TIE_TOL:
        return True
    return value <= best + TIE_TOL and decision_key(x) < decision_key(best_x)
