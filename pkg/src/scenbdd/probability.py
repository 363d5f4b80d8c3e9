"""Exact probabilities on BDDs under independent edge survival, and expected recourse."""

from __future__ import annotations

from dataclasses import dataclass

from .bdd import FALSE, TRUE, Bdd
from .errors import InvariantError, RecourseUndefinedError
from .instance import fmt_num, shifted
from .recourse import CriticalLadder

MONOTONE_TOL = 1e-9


def node_probabilities(b: Bdd, p) -> list[float]:
    """Probability of reaching TRUE from every node, indexed by node reference.

    ``p[e - 1]`` is the survival probability of edge ``e``. Nodes are stored
    parents-first, so one reverse sweep visits each node exactly once.
    Skipped layers need no factor: the skipped edge's two outcomes sum to 1.
    """
    val = [0.0, 1.0] + [0.0] * len(b.nodes)
    order = b.order
    for i in range(len(b.nodes) - 1, -1, -1):
        layer, lo, hi = b.nodes[i]
        q = p[order[layer - 1] - 1]
        val[i + 2] = q * val[hi] + (1.0 - q) * val[lo]
    return val


def prob(b: Bdd, p) -> float:
    if b.root in (FALSE, TRUE):
        return float(b.root)
    return node_probabilities(b, p)[b.root]


def prob_conditioned(b: Bdd, p, delta, x) -> float:
    return prob(b, shifted(p, delta, x))


@dataclass(frozen=True)
class ProbabilityReport:
    values: tuple[float, ...]
    cumulative: tuple[float, ...]
    equality: tuple[float, ...]
    penalty: float | None
    penalty_mass: float
    expected_value: float

    def to_text(self) -> str:
        rows = [
            f"{fmt_num(v)} {c!r} {q!r}"
            for v, c, q in zip(self.values, self.cumulative, self.equality)
        ]
        if self.penalty is not None:
            rows.append(f"{fmt_num(self.penalty)} 1.0 {self.penalty_mass!r}")
        rows.append(f"expected {self.expected_value!r}")
        return "\n".join(rows) + "\n"


def report(ladder: CriticalLadder, bdds, p, delta, x) -> ProbabilityReport:
    """Cumulative and point probabilities of every level, and the expectation."""
    if len(bdds) != len(ladder.levels):
        raise InvariantError("ladder/BDD mismatch: one BDD per level required")
    orders = {b.order for b in bdds}
    if len(orders) > 1:
        raise InvariantError("ladder/BDD mismatch: BDDs use different variable orders")
    q = shifted(p, delta, x)
    cumulative = [prob(b, q) for b in bdds]
    equality = []
    prev = 0.0
    for i, c in enumerate(cumulative):
        if c < prev - MONOTONE_TOL:
            raise InvariantError(
                f"ladder/BDD mismatch: P[level {i}]={c!r} below P[level {i - 1}]={prev!r}"
            )
        equality.append(c - prev)
        prev = c
    values = ladder.values
    mass = 1.0 - prev
    expected = sum(v * q for v, q in zip(values, equality))
    if ladder.penalty is not None:
        expected += ladder.penalty * mass
    elif mass > MONOTONE_TOL:
        raise RecourseUndefinedError(
            f"recourse undefined on probability mass {mass!r} (no penalty defined)"
        )
    return ProbabilityReport(
        tuple(values), tuple(cumulative), tuple(equality), ladder.penalty, mass, expected
    )
