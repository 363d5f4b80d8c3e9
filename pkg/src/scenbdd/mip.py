"""MILP reformulation: one probability-flow block per ladder level.

For node ``u`` testing edge ``i`` with children ``v = hi(u)``, ``w = lo(u)``
the block holds ``p(u) = q_i(x) p(v) + (1 - q_i(x)) p(w)`` with
``q_i(x) = p_i + x_i delta_i``. Because all probabilities lie in [0, 1] the
bilinear equation is exact as four rows with big-M = 1::

    p(u) <= (p_i + d_i) p(v) + (1 - p_i - d_i) p(w) + (1 - x_i)
    p(u) <=  p_i        p(v) + (1 - p_i)       p(w) + x_i
    p(u) >= (p_i + d_i) p(v) + (1 - p_i - d_i) p(w) - (1 - x_i)
    p(u) >=  p_i        p(v) + (1 - p_i)       p(w) - x_i

Terminal children are substituted as the constants 1 and 0. Level
probabilities are first differences of the root probabilities; the objective
is their value-weighted sum plus the penalty on the residual mass.

Names: ``pa<level>_n<node>``, ``x<edge>``, ``peq<level>``, ``ppen``.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .bdd import FALSE, TRUE
from .errors import InvariantError, SizeCapError
from .instance import NetworkInstance, better, feasible_decisions
from .probability import report
from .recourse import CriticalLadder

ENUMERATION_DECISION_LIMIT = 24


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str  # "continuous" | "binary"
    role: str  # "node" | "decision" | "level" | "penalty"
    level: int | None = None
    lb: float = 0.0
    ub: float = 1.0


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[str, float], ...]
    sense: str  # "<=" | ">=" | "="
    rhs: float
    role: str  # "node" | "definition" | "budget"
    level: int | None = None
    node: int | None = None


@dataclass
class MipModel:
    variables: list[Variable] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: list[tuple[str, float]] = field(default_factory=list)
    num_edges: int = 0

    def level_counts(self, level: int) -> tuple[int, int]:
        """Actual (node variables, node rows) of one level's block."""
        nv = sum(1 for v in self.variables if v.role == "node" and v.level == level)
        nr = sum(1 for c in self.constraints if c.role == "node" and c.level == level)
        return nv, nr

    def block_counts(self, level: int) -> tuple[int, int]:
        """Block size counted as if every edge carried a decision variable.

        Each node contributes one variable and four rows, every edge one
        shared decision variable, plus the single budget row.
        """
        nodes = {c.node for c in self.constraints if c.role == "node" and c.level == level}
        nv = sum(1 for v in self.variables if v.role == "node" and v.level == level)
        if nv != len(nodes):
            raise InvariantError(f"level {level}: {nv} node variables but {len(nodes)} node groups")
        return nv + self.num_edges, 4 * len(nodes) + 1

    def pattern_hash(self) -> str:
        """Digest of the row/column structure, blind to coefficients and right-hand sides."""
        h = hashlib.sha256()
        for v in self.variables:
            h.update(f"{v.name}:{v.kind};".encode())
        for c in self.constraints:
            h.update(f"{c.name}:{c.sense}:{','.join(n for n, _ in c.terms)};".encode())
        h.update(",".join(n for n, _ in self.objective).encode())
        return h.hexdigest()


def _child(level: int, ref: int):
    """(variable name or None, constant) for a child reference."""
    if ref == TRUE:
        return None, 1.0
    if ref == FALSE:
        return None, 0.0
    return f"pa{level}_n{ref - 2}", 0.0


def _mix(q, hi, lo):
    """Terms and constant of ``q * hi + (1 - q) * lo``."""
    terms, const = [], 0.0
    for (name, c), w in ((hi, q), (lo, 1.0 - q)):
        if name is None:
            const += w * c
        else:
            terms.append((name, w))
    return terms, const


def _neg(terms):
    return tuple((n, -c) for n, c in terms)


def _clamp(q):
    return min(1.0, max(0.0, q))


def emit_mip(inst: NetworkInstance, ladder: CriticalLadder, bdds) -> MipModel:
    if len(bdds) != len(ladder.levels):
        raise InvariantError("one BDD per ladder level is required")
    if len({b.order for b in bdds}) > 1:
        raise InvariantError("BDDs use mixed variable orders; the MIP needs one shared order")
    for b in bdds:
        if b.num_vars != inst.num_edges:
            raise InvariantError("BDD variable count does not match the instance")

    model = MipModel(num_edges=inst.num_edges)
    for e in inst.edges:
        if e.decidable:
            model.variables.append(Variable(f"x{e.id}", "binary", "decision"))

    roots = []
    for lvl, b in enumerate(bdds):
        for k in range(len(b.nodes)):
            model.variables.append(Variable(f"pa{lvl}_n{k}", "continuous", "node", lvl))
        for k, (layer, lo, hi) in enumerate(b.nodes):
            e = inst.edges[b.order[layer - 1] - 1]
            u = f"pa{lvl}_n{k}"
            v, w = _child(lvl, hi), _child(lvl, lo)
            base, c0 = _mix(e.p, v, w)
            head = ((u, 1.0),)
            if not e.decidable:
                model.constraints.append(
                    Constraint(f"c{lvl}_n{k}_eq", head + _neg(base), "=", c0, "node", lvl, k)
                )
                continue
            boosted, c1 = _mix(_clamp(e.p + e.delta), v, w)
            x = f"x{e.id}"
            rows = [
                ("a", _neg(boosted) + ((x, 1.0),), "<=", 1.0 + c1),
                ("b", _neg(base) + ((x, -1.0),), "<=", c0),
                ("c", _neg(boosted) + ((x, -1.0),), ">=", c1 - 1.0),
                ("d", _neg(base) + ((x, 1.0),), ">=", c0),
            ]
            for tag, terms, sense, rhs in rows:
                model.constraints.append(
                    Constraint(f"c{lvl}_n{k}_{tag}", head + terms, sense, rhs, "node", lvl, k)
                )
        roots.append(_child(lvl, b.root))

    values = ladder.values
    prev = (None, 0.0)
    for lvl, root in enumerate(roots):
        peq = f"peq{lvl}"
        model.variables.append(Variable(peq, "continuous", "level", lvl))
        terms = [(peq, 1.0)]
        rhs = 0.0
        if root[0] is None:
            rhs += root[1]
        else:
            terms.append((root[0], -1.0))
        if prev[0] is None:
            rhs -= prev[1]
        else:
            terms.append((prev[0], 1.0))
        model.constraints.append(Constraint(f"d{lvl}", tuple(terms), "=", rhs, "definition", lvl))
        model.objective.append((peq, values[lvl]))
        prev = root
    if ladder.penalty is not None:
        model.variables.append(Variable("ppen", "continuous", "penalty"))
        terms = [("ppen", 1.0)]
        rhs = 1.0
        if prev[0] is None:
            rhs -= prev[1]
        else:
            terms.append((prev[0], 1.0))
        model.constraints.append(Constraint("dpen", tuple(terms), "=", rhs, "definition"))
        model.objective.append(("ppen", ladder.penalty))

    dec = [e for e in inst.edges if e.decidable]
    if dec:
        model.constraints.append(
            Constraint(
                "budget", tuple((f"x{e.id}", e.cost) for e in dec), "<=", inst.budget, "budget"
            )
        )
    return model


def _fmt(c: float) -> str:
    return format(c + 0.0, ".17g")


def _expr(terms, per_line: int = 6) -> str:
    parts = []
    for k, (name, c) in enumerate(terms):
        if k and k % per_line == 0:
            parts.append("\n   ")
        sign = "-" if c < 0 else "+"
        mag = _fmt(abs(c))
        if k == 0:
            parts.append(f"{'- ' if c < 0 else ''}{mag} {name}")
        else:
            parts.append(f" {sign} {mag} {name}")
    return "".join(parts)


def write_lp(model: MipModel) -> str:
    """CPLEX-LP text. Deterministic: rows and columns in emission order."""
    out = ["\\ scenbdd exact reformulation", "Minimize"]
    obj = model.objective or ([(model.variables[0].name, 0.0)] if model.variables else [])
    out.append(f" obj: {_expr(obj)}")
    if model.constraints:
        out.append("Subject To")
        for c in model.constraints:
            out.append(f" {c.name}: {_expr(c.terms)} {c.sense} {_fmt(c.rhs)}")
    out.append("Bounds")
    for v in model.variables:
        out.append(f" {_fmt(v.lb)} <= {v.name} <= {_fmt(v.ub)}")
    binaries = [v.name for v in model.variables if v.kind == "binary"]
    if binaries:
        out.append("Binaries")
        out.extend(f" {b}" for b in binaries)
    out.append("End")
    return "\n".join(out) + "\n"


def as_arrays(model: MipModel):
    """Dense matrices for array-based solvers.

    Returns ``(names, c, A, lo, hi, lb, ub, integrality)`` with row bounds
    ``lo <= A z <= hi``.
    """
    names = [v.name for v in model.variables]
    col = {n: j for j, n in enumerate(names)}
    c = np.zeros(len(names))
    for n, w in model.objective:
        c[col[n]] += w
    A = np.zeros((len(model.constraints), len(names)))
    lo = np.full(len(model.constraints), -math.inf)
    hi = np.full(len(model.constraints), math.inf)
    for r, con in enumerate(model.constraints):
        for n, w in con.terms:
            A[r, col[n]] += w
        if con.sense in ("<=", "="):
            hi[r] = con.rhs
        if con.sense in (">=", "="):
            lo[r] = con.rhs
    lb = np.array([v.lb for v in model.variables])
    ub = np.array([v.ub for v in model.variables])
    integrality = np.array([1 if v.kind == "binary" else 0 for v in model.variables])
    return names, c, A, lo, hi, lb, ub, integrality


def solve_by_enumeration(
    inst: NetworkInstance,
    ladder: CriticalLadder,
    bdds,
    decision_limit: int = ENUMERATION_DECISION_LIMIT,
):
    """Reference optimizer: evaluate every budget-feasible x on the BDDs.

    Ties go to the smallest :func:`decision_key`.
    """
    k = len(inst.decidable_edges)
    if k > decision_limit:
        raise SizeCapError(
            f"{k} decidable edges exceed the enumeration limit {decision_limit}; "
            "write the LP file and use an external MIP solver"
        )
    p, delta = inst.probabilities, inst.deltas
    best_x, best = None, math.inf
    for x in feasible_decisions(inst):
        v = report(ladder, bdds, p, delta, x).expected_value
        if better(v, x, best, best_x):
            best_x, best = x, v
    return best_x, best
