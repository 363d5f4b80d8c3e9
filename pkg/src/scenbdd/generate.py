"""Random instances for property tests and grid-like road networks for the benchmark."""

from __future__ import annotations

import math
import random

from .instance import Edge, Mode, NetworkInstance, make_instance


def _random_p(rng: random.Random) -> float:
    r = rng.random()
    if r < 0.1:
        return 1.0
    if r < 0.15:
        return 0.0
    return round(rng.uniform(0.05, 0.95), 3)


def random_instance(
    rng: random.Random,
    mode: Mode | None = None,
    max_edges: int = 14,
    max_decidable: int = 5,
    max_nodes: int = 7,
) -> NetworkInstance:
    """A small connected-ish network with random p, delta, costs and budget."""
    if mode is None:
        mode = rng.choice(list(Mode))
    k = rng.randint(2, max_nodes)
    nodes = tuple(["s", "t"] + [f"v{i}" for i in range(k - 2)])
    m = rng.randint(k - 1, max(k - 1, max_edges))
    directed = mode is Mode.MAX_FLOW or rng.random() < 0.3

    pairs = []
    shuffled = list(nodes)
    rng.shuffle(shuffled)
    for i in range(1, k):
        pairs.append((shuffled[rng.randrange(i)], shuffled[i]))
    while len(pairs) < m:
        a, b = rng.sample(nodes, 2)
        pairs.append((a, b))
    rng.shuffle(pairs)
    if directed:
        # lean towards s -> t orientation so flows and paths exist
        pairs = [(b, a) if b == "s" or a == "t" else (a, b) for a, b in pairs]

    dec_ids = set(rng.sample(range(1, m + 1), rng.randint(0, min(max_decidable, m))))
    edges = []
    for eid, (a, b) in enumerate(pairs, start=1):
        if mode is Mode.MAX_FLOW:
            w = float(rng.choice([1, 1, 2, 3, 5]))
        elif rng.random() < 0.5:
            w = float(rng.randint(1, 6))
        else:
            w = round(rng.uniform(0.5, 10.0), 2)
        p = _random_p(rng)
        decidable = eid in dec_ids
        delta = round(rng.uniform(-p, 1.0 - p), 3) if decidable else 0.0
        delta = min(max(delta, -p), 1.0 - p)
        cost = float(rng.choice([1, 1, 2, 3])) if decidable else 1.0
        edges.append(Edge(eid, a, b, w, p, delta, cost, decidable))

    cutoff, penalty = math.inf, None
    if mode is Mode.SHORTEST_PATH:
        total = sum(e.weight for e in edges)
        penalty = total + 10.0
        if rng.random() < 0.6:
            cutoff = round(rng.uniform(0.3, 1.0) * total, 2)
    dec_cost = sum(e.cost for e in edges if e.decidable)
    budget = float(rng.randint(0, int(dec_cost))) if dec_cost else 0.0
    return make_instance(
        nodes=nodes,
        edges=tuple(edges),
        mode=mode,
        source="s",
        sink="t",
        directed=directed,
        cutoff=cutoff,
        penalty=penalty,
        budget=budget,
    )


def random_grid(n: int, rng: random.Random, density: float = 1.2):
    """Connected grid-like road network on (n+1)^2 jittered points.

    Candidate edges are the grid edges plus one random diagonal per cell. A
    random spanning tree (Kruskal on shuffled candidates) guarantees
    connectivity, then further candidates are added until the edge count
    reaches ``round(density * nodes)``. Lengths are Euclidean.
    Returns ``(names, coords, pairs, lengths)``.
    """
    side = n + 1
    names = [f"g{i}_{j}" for i in range(side) for j in range(side)]
    coords = [
        (i + rng.uniform(-0.3, 0.3), j + rng.uniform(-0.3, 0.3))
        for i in range(side)
        for j in range(side)
    ]

    def idx(i, j):
        return i * side + j

    cand = []
    for i in range(side):
        for j in range(side):
            if i + 1 < side:
                cand.append((idx(i, j), idx(i + 1, j)))
            if j + 1 < side:
                cand.append((idx(i, j), idx(i, j + 1)))
            if i + 1 < side and j + 1 < side:
                if rng.random() < 0.5:
                    cand.append((idx(i, j), idx(i + 1, j + 1)))
                else:
                    cand.append((idx(i + 1, j), idx(i, j + 1)))
    rng.shuffle(cand)

    parent = list(range(len(names)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    tree, rest = [], []
    for a, b in cand:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            tree.append((a, b))
        else:
            rest.append((a, b))
    target = max(len(tree), min(len(cand), round(density * len(names))))
    chosen = sorted(tree + rest[: target - len(tree)])
    lengths = [round(math.dist(coords[a], coords[b]), 6) for a, b in chosen]
    return names, coords, chosen, lengths


def grid_instance(
    names, pairs, lengths, source: str, sink: str, cutoff: float, penalty: float | None
) -> NetworkInstance:
    edges = tuple(
        Edge(k, names[a], names[b], w, 0.5, 0.0, 1.0, False)
        for k, ((a, b), w) in enumerate(zip(pairs, lengths), start=1)
    )
    return make_instance(
        nodes=tuple(names),
        edges=edges,
        mode=Mode.SHORTEST_PATH,
        source=source,
        sink=sink,
        directed=False,
        cutoff=cutoff,
        penalty=penalty,
        budget=0.0,
    )
