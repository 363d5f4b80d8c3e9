import math
import random

import networkx as nx
import pytest

from scenbdd.bench import bench_grid, format_table
from scenbdd.generate import random_grid, random_instance


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_grid_shape(n):
    names, coords, pairs, lengths = random_grid(n, random.Random(n))
    N = (n + 1) ** 2
    assert len(names) == N
    assert len(pairs) == round(1.2 * N)
    g = nx.Graph(pairs)
    g.add_nodes_from(range(N))
    assert nx.is_connected(g)
    assert len(set(map(frozenset, pairs))) == len(pairs)
    for (a, b), w in zip(pairs, lengths):
        assert w == pytest.approx(math.dist(coords[a], coords[b]), abs=1e-6)


def test_grid_deterministic():
    assert random_grid(3, random.Random(9)) == random_grid(3, random.Random(9))


def test_random_instances_valid():
    rng = random.Random(0)
    for _ in range(50):
        inst = random_instance(rng)
        assert inst.num_edges <= 14
        assert len(inst.decidable_edges) <= 5


def test_bench_counts_and_table():
    res = bench_grid(1, 1.5, reps=2, seed=1)
    assert res.pairs == 2 * 6 and res.arcs == 5
    q = res.quantiles()
    assert list(q) == sorted(q) and q[0] >= 1
    table = format_table([res, bench_grid(1, math.inf, reps=2, seed=1)])
    assert table.splitlines()[2].split()[0] == "inf"
    assert format_table([res]) == format_table([bench_grid(1, 1.5, reps=2, seed=1)])
