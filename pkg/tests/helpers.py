import numpy as np

from scenbdd.bdd import FALSE, TRUE


def truth_table(points, n: int) -> np.ndarray:
    """any(m <= xi) for every mask xi of n bits."""
    xi = np.arange(1 << n)
    out = np.zeros(1 << n, dtype=bool)
    for m in points:
        out |= (xi & m) == m
    return out


def bdd_table(b) -> np.ndarray:
    """Evaluate a BDD on all 2^n masks at once, bottom-up."""
    n = b.num_vars
    xi = np.arange(1 << n)
    val = {FALSE: np.zeros(1 << n, dtype=bool), TRUE: np.ones(1 << n, dtype=bool)}
    for i in range(len(b.nodes) - 1, -1, -1):
        layer, lo, hi = b.nodes[i]
        bit = (xi >> (b.order[layer - 1] - 1)) & 1
        val[i + 2] = np.where(bit == 1, val[hi], val[lo])
    return val[b.root]
