import random

import pytest

from scenbdd.bdd import compile_monotone
from scenbdd.errors import InvariantError, RecourseUndefinedError
from scenbdd.generate import random_instance
from scenbdd.instance import Edge, Mode, load_instance, make_instance
from scenbdd.oracle import oracle_expected
from scenbdd.pipeline import compile_instance
from scenbdd.probability import node_probabilities, prob, prob_conditioned, report
from scenbdd.recourse import CriticalLadder, Level

TOL = 1e-12


def test_single_edge():
    assert prob(compile_monotone([0b1], (1,)), [0.9]) == pytest.approx(0.9, abs=TOL)


def test_series():
    assert prob(compile_monotone([0b11], (1, 2)), [0.9, 0.8]) == pytest.approx(0.72, abs=TOL)


def test_parallel():
    b = compile_monotone([0b01, 0b10], (1, 2))
    assert prob(b, [0.9, 0.8]) == pytest.approx(0.98, abs=TOL)


def test_conditioned():
    b = compile_monotone([0b01, 0b10], (1, 2))
    p, d = [0.9, 0.8], [0.05, -0.1]
    assert prob_conditioned(b, p, d, (1, 1)) == pytest.approx(0.985, abs=TOL)
    assert prob_conditioned(b, p, d, (0, 0)) == prob(b, p)
    assert prob_conditioned(compile_monotone([1], (1,)), [0.9], [0.05], (1,)) == pytest.approx(0.95)


def test_layer_skip_needs_no_factor():
    # edge 2 is a don't-care between layers 1 and 3
    b = compile_monotone([0b101], (1, 2, 3))
    assert prob(b, [0.5, 0.3, 0.4]) == pytest.approx(0.2, abs=TOL)


class _CountingList(list):
    reads = 0

    def __getitem__(self, i):
        type(self).reads += 1
        return super().__getitem__(i)


def test_one_visit_per_node():
    rng = random.Random(3)
    fam = [rng.getrandbits(10) | 1 for _ in range(6)]
    b = compile_monotone(fam, tuple(range(1, 11)))
    p = _CountingList([0.5] * 10)
    _CountingList.reads = 0
    node_probabilities(b, p)
    assert _CountingList.reads == b.num_internal


def test_report_one_level():
    lad = CriticalLadder(1, (Level(7.0, (1,)),), penalty=120.0)
    b = compile_monotone([1], (1,))
    r = report(lad, [b], [0.9], [0.05], (0,))
    assert r.expected_value == pytest.approx(0.9 * 7 + 0.1 * 120, abs=1e-9)
    assert r.penalty_mass == pytest.approx(0.1)
    r1 = report(lad, [b], [0.9], [0.05], (1,))
    assert r1.expected_value == pytest.approx(12.65, abs=1e-9)


def test_report_full_mass_at_top():
    lad = CriticalLadder(2, (Level(3.0, (0b01,)), Level(5.0, (0b10,))), penalty=10.0)
    bdds = [compile_monotone(lad.cumulative_family(i), (1, 2)) for i in range(2)]
    r = report(lad, bdds, [0.5, 1.0], [0, 0], (0, 0))
    assert r.penalty_mass == 0.0
    assert r.equality == (0.5, 0.5)


def test_mismatch_detected():
    lad = CriticalLadder(2, (Level(3.0, (0b01,)), Level(5.0, (0b10,))), penalty=10.0)
    # swapped BDDs make the cumulative sequence decrease
    bdds = [compile_monotone([0b01, 0b10], (1, 2)), compile_monotone([0b01], (1, 2))]
    with pytest.raises(InvariantError, match="ladder/BDD mismatch"):
        report(lad, bdds, [0.5, 0.5], [0, 0], (0, 0))
    with pytest.raises(InvariantError, match="ladder/BDD mismatch"):
        report(lad, bdds[:1], [0.5, 0.5], [0, 0], (0, 0))


def test_undefined_mass_without_penalty():
    lad = CriticalLadder(1, (Level(3.0, (1,)),))
    with pytest.raises(RecourseUndefinedError):
        report(lad, [compile_monotone([1], (1,))], [0.5], [0], (0,))


def test_triangle_against_oracle(data_dir):
    base = load_instance(data_dir / "triangle.inst")
    edges = tuple(Edge(e.id, e.tail, e.head, e.weight, 0.9, 0.0, 1.0, True) for e in base.edges)
    inst = make_instance(
        nodes=base.nodes, edges=edges, mode=base.mode, source="s", sink="t",
        directed=False, cutoff=10.0, penalty=120.0, budget=1.0,
    )
    r = compile_instance(inst).evaluate((0, 0, 0))
    assert r.cumulative == pytest.approx((0.81, 0.81 + 0.19 * 0.9))
    assert r.expected_value == pytest.approx(oracle_expected(inst, (0, 0, 0)).expected_value, abs=1e-9)


def test_to_text():
    lad = CriticalLadder(1, (Level(7.0, (1,)),), penalty=120.0)
    text = report(lad, [compile_monotone([1], (1,))], [0.5], [0], (0,)).to_text()
    assert text == "7 0.5 0.5\n120 1.0 0.5\nexpected 63.5\n"


@pytest.mark.parametrize("seed", range(15))
def test_identities_and_monotone_response(seed):
    rng = random.Random(seed)
    inst = random_instance(rng, max_edges=10)
    # force every delta to be an improvement and everything decidable
    edges = tuple(
        Edge(e.id, e.tail, e.head, e.weight, e.p, round(rng.uniform(0, 1 - e.p), 3), 1.0, True)
        for e in inst.edges
    )
    inst = make_instance(
        nodes=inst.nodes, edges=edges, mode=inst.mode, source="s", sink="t",
        directed=inst.directed, cutoff=inst.cutoff, penalty=inst.penalty, budget=0.0,
    )
    comp = compile_instance(inst)
    zero, ones = (0,) * inst.num_edges, (1,) * inst.num_edges
    r0, r1 = comp.evaluate(zero), comp.evaluate(ones)
    for r in (r0, r1):
        assert all(q >= -TOL for q in r.equality)
        assert sum(r.equality) + r.penalty_mass == pytest.approx(1.0, abs=1e-9)
        assert all(0 <= c <= 1 + 1e-12 for c in r.cumulative)
    if inst.mode is Mode.SHORTEST_PATH:
        assert r1.expected_value <= r0.expected_value + 1e-9
    else:
        # more survival means more flow
        assert r1.expected_value >= r0.expected_value - 1e-9
    assert r1.expected_value == pytest.approx(oracle_expected(inst, ones).expected_value, abs=1e-9)
