"""End-to-end wiring: ladder, shared variable order, per-level BDDs, checks against the oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .bdd import DEFAULT_NODE_CAP, Bdd, Ordering, compile_ladder, order_edges
from .instance import NetworkInstance, feasible_decisions
from .mip import solve_by_enumeration
from .oracle import oracle_expected
from .probability import ProbabilityReport, report
from .recourse import CriticalLadder, build_ladder

CHECK_TOL = 1e-9


@dataclass(frozen=True)
class Compiled:
    instance: NetworkInstance
    ladder: CriticalLadder
    order: tuple[int, ...]
    bdds: tuple[Bdd, ...]

    def evaluate(self, x) -> ProbabilityReport:
        inst = self.instance
        return report(self.ladder, self.bdds, inst.probabilities, inst.deltas, x)


def compile_instance(
    inst: NetworkInstance,
    ladder: CriticalLadder | None = None,
    heuristic=Ordering.OCCURRENCE,
    node_cap: int = DEFAULT_NODE_CAP,
    **caps,
) -> Compiled:
    if ladder is None:
        ladder = build_ladder(inst, **caps)
    points = ladder.all_points()
    if not points and heuristic is Ordering.OCCURRENCE:
        heuristic = Ordering.IDENTITY
    order = order_edges(points, inst.num_edges, heuristic)
    return Compiled(inst, ladder, order, tuple(compile_ladder(ladder, order, node_cap)))


@dataclass
class CheckResult:
    checked: int = 0
    max_error: float = 0.0
    failures: list[tuple[tuple[int, ...], float, float]] = field(default_factory=list)
    optimum: tuple[tuple[int, ...] | None, float] = (None, math.inf)

    @property
    def passed(self) -> bool:
        return not self.failures


def check_against_oracle(compiled: Compiled, tol: float = CHECK_TOL) -> CheckResult:
    """Compare pipeline and brute-force expectations for every budget-feasible x."""
    inst = compiled.instance
    res = CheckResult()
    for x in feasible_decisions(inst):
        got = compiled.evaluate(x).expected_value
        want = oracle_expected(inst, x).expected_value
        err = abs(got - want)
        res.checked += 1
        res.max_error = max(res.max_error, err)
        if not err <= tol * max(1.0, abs(want)):
            res.failures.append((x, got, want))
    res.optimum = solve_by_enumeration(inst, compiled.ladder, list(compiled.bdds))
    return res
