"""Random road-network benchmark: summed BDD sizes over all origin-destination pairs."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

import numpy as np

from .bdd import DEFAULT_NODE_CAP, Ordering, stats
from .generate import grid_instance, random_grid
from .netalg import adjacency, dijkstra
from .pipeline import compile_instance

QUANTILES = (0, 25, 50, 75, 99, 100)


@dataclass(frozen=True)
class BenchResult:
    n: int
    alpha_factor: float
    arcs: int
    pairs: int
    sizes: tuple[int, ...]

    def quantiles(self) -> tuple[int, ...]:
        q = np.percentile(np.array(self.sizes), QUANTILES, method="inverted_cdf")
        return tuple(int(v) for v in q)


def bench_grid(
    n: int,
    alpha_factor: float,
    reps: int = 32,
    seed: int = 0,
    density: float = 1.2,
    heuristic=Ordering.OCCURRENCE,
    node_cap: int = DEFAULT_NODE_CAP,
) -> BenchResult:
    """Sample ``reps`` networks and compile the ladder of every unordered O-D pair.

    The cutoff is ``alpha_factor * d`` with ``d`` the pair's shortest distance;
    a finite cutoff gets penalty ``2 * cutoff + 1``. One sample is the total
    size summed over the per-level BDDs of a pair.
    """
    rng = random.Random(seed)
    sizes = []
    arcs = 0
    for _ in range(reps):
        names, _, pairs, lengths = random_grid(n, rng, density)
        arcs = max(arcs, len(pairs))
        probe = grid_instance(names, pairs, lengths, names[0], names[1], math.inf, None)
        adj = adjacency(probe)
        for a, b in itertools.combinations(range(len(names)), 2):
            d = dijkstra(adj, a)[b]
            cutoff = alpha_factor * d
            penalty = 2 * cutoff + 1 if math.isfinite(cutoff) else None
            inst = grid_instance(names, pairs, lengths, names[a], names[b], cutoff, penalty)
            comp = compile_instance(inst, heuristic=heuristic, node_cap=node_cap)
            sizes.append(sum(stats(bdd).total_size for bdd in comp.bdds))
    return BenchResult(n, alpha_factor, arcs, len(sizes), tuple(sizes))


def format_table(results) -> str:
    head = f"{'alpha':>6} {'n':>3} {'arcs':>5} {'pairs':>6} " + " ".join(
        f"{lab:>7}" for lab in ("min", "25%", "median", "75%", "99%", "max")
    )
    lines = [head]
    for r in results:
        alpha = "inf" if math.isinf(r.alpha_factor) else f"{r.alpha_factor:g}"
        q = " ".join(f"{v:>7d}" for v in r.quantiles())
        lines.append(f"{alpha:>6} {r.n:>3} {r.arcs:>5} {r.pairs:>6} {q}")
    return "\n".join(lines) + "\n"
