"""Shortest-path and max-flow primitives over the surviving-edge subgraph of an instance."""

from __future__ import annotations

import heapq
import math
from collections import deque

from .instance import NetworkInstance


def adjacency(inst: NetworkInstance, reverse: bool = False):
    """``adj[u] -> [(v, edge_id, weight)]``, node ids as indices.

    Undirected edges appear in both directions. ``reverse`` flips arc
    direction (only matters for directed instances).
    """
    adj = [[] for _ in inst.nodes]
    for e in inst.edges:
        u, v = inst.node_index(e.tail), inst.node_index(e.head)
        if reverse:
            u, v = v, u
        adj[u].append((v, e.id, e.weight))
        if not inst.directed:
            adj[v].append((u, e.id, e.weight))
    return adj


def dijkstra(adj, source: int, alive: int = -1, blocked=()) -> list[float]:
    """Distances from ``source`` using only edges whose bit is set in ``alive``.

    Nodes in ``blocked`` are never entered.
    """
    dist = [math.inf] * len(adj)
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, eid, w in adj[u]:
            if not alive >> (eid - 1) & 1 or v in blocked:
                continue
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def shortest_distance(inst: NetworkInstance, alive: int = -1, adj=None) -> float:
    if adj is None:
        adj = adjacency(inst)
    dist = dijkstra(adj, inst.node_index(inst.source), alive)
    return dist[inst.node_index(inst.sink)]


class FlowNetwork:
    """Residual graph for Edmonds-Karp, rebuilt cheaply per scenario.

    Each instance edge maps to one arc pair; an undirected edge gets capacity
    in both directions.
    """

    def __init__(self, inst: NetworkInstance):
        self.n = len(inst.nodes)
        self.s = inst.node_index(inst.source)
        self.t = inst.node_index(inst.sink)
        self.head: list[int] = []
        self.arcs_of: list[list[int]] = [[] for _ in range(self.n)]
        self.edge_arcs: list[tuple[int, float, float]] = []
        for e in inst.edges:
            u, v = inst.node_index(e.tail), inst.node_index(e.head)
            a = len(self.head)
            self.head += [v, u]
            self.arcs_of[u].append(a)
            self.arcs_of[v].append(a + 1)
            back = 0.0 if inst.directed else e.weight
            self.edge_arcs.append((a, e.weight, back))

    def max_flow(self, alive: int = -1) -> float:
        cap = [0.0] * len(self.head)
        for k, (a, fwd, back) in enumerate(self.edge_arcs):
            if alive >> k & 1:
                cap[a] = fwd
                cap[a + 1] = back
        s, t, head, arcs_of = self.s, self.t, self.head, self.arcs_of
        total = 0.0
        while True:
            pred = [-1] * self.n
            pred[s] = -2
            queue = deque([s])
            while queue and pred[t] == -1:
                u = queue.popleft()
                for a in arcs_of[u]:
                    v = head[a]
                    if pred[v] == -1 and cap[a] > 1e-12:
                        pred[v] = a
                        queue.append(v)
            if pred[t] == -1:
                return total
            push = math.inf
            v = t
            while v != s:
                a = pred[v]
                push = min(push, cap[a])
                v = head[a ^ 1]
            v = t
            while v != s:
                a = pred[v]
                cap[a] -= push
                cap[a ^ 1] += push
                v = head[a ^ 1]
            total += push


def max_flow(inst: NetworkInstance, alive: int = -1) -> float:
    return FlowNetwork(inst).max_flow(alive)
