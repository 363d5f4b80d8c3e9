"""Brute-force ground truth: every scenario, its probability and its recourse value.

Nothing here goes through ladders or BDDs; the recourse value of each
scenario is recomputed from the graph (Dijkstra or max flow).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import RecourseUndefinedError, SizeCapError
from .instance import (
    Mode,
    NetworkInstance,
    better,
    check_decision,
    feasible_decisions,
    mask_to_bits,
)
from .netalg import FlowNetwork, adjacency, dijkstra

ORACLE_EDGE_LIMIT = 24
ORACLE_DECISION_LIMIT = 20
VALUE_TOL = 1e-9


@dataclass(frozen=True)
class OracleResult:
    distribution: dict[float, float]
    expected_value: float
    table: tuple[tuple[int, float, float], ...] | None = None


def _guard(inst: NetworkInstance, limit: int):
    if inst.num_edges > limit:
        raise SizeCapError(f"oracle limited to {limit} edges, instance has {inst.num_edges}")


@functools.lru_cache(maxsize=16)
def recourse_table(inst: NetworkInstance) -> np.ndarray:
    """f(xi) for every surviving-edge mask; NaN where f is undefined."""
    n = inst.num_edges
    out = np.empty(1 << n)
    if inst.mode is Mode.SHORTEST_PATH:
        adj = adjacency(inst)
        s, t = inst.node_index(inst.source), inst.node_index(inst.sink)
        pen = math.nan if inst.penalty is None else inst.penalty
        for m in range(1 << n):
            d = dijkstra(adj, s, m)[t]
            out[m] = d if math.isfinite(d) and d <= inst.cutoff + VALUE_TOL else pen
    else:
        net = FlowNetwork(inst)
        for m in range(1 << n):
            out[m] = net.max_flow(m)
    out.setflags(write=False)
    return out


@functools.lru_cache(maxsize=32)
def _bits(n: int) -> np.ndarray:
    return (np.arange(1 << n)[:, None] >> np.arange(n) & 1).astype(bool)


def scenario_probabilities(q) -> np.ndarray:
    """Pr[xi] for every mask under independent survival probabilities ``q``."""
    q = np.asarray(q, dtype=float)
    if q.size == 0:
        return np.ones(1)
    return np.prod(np.where(_bits(q.size), q, 1.0 - q), axis=1)


def oracle_expected(
    inst: NetworkInstance, x, limit: int = ORACLE_EDGE_LIMIT, with_table: bool = False
) -> OracleResult:
    _guard(inst, limit)
    x = check_decision(inst, x)
    f = recourse_table(inst)
    pr = scenario_probabilities(inst.shifted_probabilities(x))
    undefined = np.isnan(f)
    if np.any(pr[undefined] > 0):
        raise RecourseUndefinedError(
            "recourse undefined: a scenario with positive probability has no "
            "source-sink path within the cutoff and no penalty is defined"
        )
    ok = ~undefined
    values, probs = f[ok], pr[ok]
    expected = float(np.dot(values, probs))
    dist: dict[float, float] = {}
    order = np.argsort(values, kind="stable")
    rep = None
    for v, w in zip(values[order].tolist(), probs[order].tolist()):
        if rep is None or v - rep > VALUE_TOL:
            rep = v
            dist[rep] = 0.0
        dist[rep] += w
    table = None
    if with_table:
        table = tuple((m, float(pr[m]), float(f[m])) for m in range(len(f)))
    return OracleResult(dist, expected, table)


def oracle_best_decision(
    inst: NetworkInstance,
    limit: int = ORACLE_EDGE_LIMIT,
    decision_limit: int = ORACLE_DECISION_LIMIT,
):
    """Exhaustive minimizer of the expected recourse; ties go to the smallest decision key."""
    _guard(inst, limit)
    if len(inst.decidable_edges) > decision_limit:
        raise SizeCapError(
            f"oracle limited to {decision_limit} decidable edges, "
            f"instance has {len(inst.decidable_edges)}"
        )
    best_x, best = None, math.inf
    for x in feasible_decisions(inst):
        v = oracle_expected(inst, x, limit).expected_value
        if better(v, x, best, best_x):
            best_x, best = x, v
    return best_x, best


def oracle_csv(inst: NetworkInstance, x) -> str:
    res = oracle_expected(inst, x, with_table=True)
    lines = ["scenario,probability,f"]
    for m, pr, f in res.table:
        lines.append(f"{mask_to_bits(m, inst.num_edges)},{pr!r},{f!r}")
    return "\n".join(lines) + "\n"
