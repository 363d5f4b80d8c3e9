import pytest

from scenbdd.errors import RecourseUndefinedError, SizeCapError
from scenbdd.instance import Edge, Mode, load_instance, make_instance
from scenbdd.oracle import oracle_best_decision, oracle_csv, oracle_expected, scenario_probabilities


def _inst(edges, mode=Mode.SHORTEST_PATH, penalty=120.0, budget=1.0, nodes=("s", "t")):
    return make_instance(
        nodes=nodes, edges=tuple(edges), mode=mode, source="s", sink="t",
        directed=mode is Mode.MAX_FLOW, penalty=penalty if mode is Mode.SHORTEST_PATH else None,
        budget=budget,
    )


def test_single_edge(data_dir):
    inst = load_instance(data_dir / "single_edge.inst")
    res = oracle_expected(inst, (0,))
    assert res.expected_value == pytest.approx(18.3, abs=1e-12)
    assert res.distribution == pytest.approx({7.0: 0.9, 120.0: 0.1})
    assert oracle_expected(inst, (1,)).expected_value == pytest.approx(12.65, abs=1e-12)


def test_all_survive_is_nominal(data_dir):
    base = load_instance(data_dir / "grid5.inst")
    edges = [Edge(e.id, e.tail, e.head, e.weight, 1.0, 0.0, 1.0, False) for e in base.edges]
    inst = make_instance(**{**_fields(base), "edges": tuple(edges)})
    # s-a-b-t = 2 + 1 + 2
    assert oracle_expected(inst, (0,) * 5).expected_value == 5.0


def test_all_fail():
    sp = _inst([Edge(1, "s", "t", 3.0, 0.0)])
    assert oracle_expected(sp, (0,)).expected_value == 120.0
    mf = _inst([Edge(1, "s", "t", 3.0, 0.0)], mode=Mode.MAX_FLOW)
    assert oracle_expected(mf, (0,)).expected_value == 0.0


def test_undefined_without_penalty():
    inst = _inst([Edge(1, "s", "t", 3.0, 0.5)], penalty=None)
    with pytest.raises(RecourseUndefinedError):
        oracle_expected(inst, (0,))
    # zero-probability disconnection is fine
    sure = _inst([Edge(1, "s", "t", 3.0, 1.0, -0.5)], penalty=None)
    assert oracle_expected(sure, (0,)).expected_value == 3.0


def test_probabilities_sum_to_one():
    pr = scenario_probabilities([0.3, 0.9, 0.5, 0.0, 1.0])
    assert pr[0b00110] == 0.0  # edge 5 has p=1
    assert pr.sum() == pytest.approx(1.0, abs=1e-12)
    assert pr[0b10110] == pytest.approx(0.7 * 0.9 * 0.5)


def test_best_decision_zero_budget():
    inst = _inst([Edge(1, "s", "t", 7.0, 0.9, 0.05)], budget=0.0)
    assert oracle_best_decision(inst)[0] == (0,)


def test_best_decision_improving_edge():
    inst = _inst([Edge(1, "s", "t", 7.0, 0.9, 0.05)])
    x, v = oracle_best_decision(inst)
    assert x == (1,) and v == pytest.approx(12.65)


def test_best_decision_harmful_edge():
    inst = _inst([Edge(1, "s", "t", 7.0, 0.9, -0.5)])
    assert oracle_expected(inst, (1,)).expected_value == pytest.approx(74.8)
    assert oracle_best_decision(inst) == ((0,), pytest.approx(18.3))


def test_symmetric_tie_breaks_low_index():
    e = [Edge(1, "s", "t", 3.0, 0.5, 0.2), Edge(2, "s", "t", 3.0, 0.5, 0.2)]
    inst = _inst(e)
    x, v = oracle_best_decision(inst)
    assert x == (1, 0)
    assert v == pytest.approx(oracle_expected(inst, (0, 1)).expected_value, abs=1e-12)


def test_size_guards():
    inst = _inst([Edge(k, "s", "t", 1.0, 0.5, 0.1) for k in range(1, 5)])
    with pytest.raises(SizeCapError):
        oracle_expected(inst, (0,) * 4, limit=3)
    with pytest.raises(SizeCapError):
        oracle_best_decision(inst, decision_limit=3)


def test_csv():
    inst = _inst([Edge(1, "s", "t", 7.0, 0.9, 0.05)])
    assert oracle_csv(inst, (0,)) == "scenario,probability,f\n0,0.09999999999999998,120.0\n1,0.9,7.0\n"


def _fields(inst):
    return {f: getattr(inst, f) for f in
            ("nodes", "edges", "mode", "source", "sink", "directed", "cutoff", "penalty", "budget")}
