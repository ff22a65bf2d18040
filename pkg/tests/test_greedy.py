import math

import numpy as np
import pytest

from ksysmax.common import GAIN_TOL
from ksysmax.greedy import (
    MultiGreedyConfig,
    random_multi_greedy,
    ratio_bound,
    repeated_greedy,
    standard_greedy,
    usm_double_greedy,
)
from ksysmax.objectives import (
    CoverageDiversityObjective,
    FunctionOracle,
    GraphCutObjective,
    ModularObjective,
    similarity_from_features,
)
from ksysmax.rng import make_rng
from ksysmax.systems import CardinalitySystem, ExplicitSystem, downward_closure
from ksysmax.verify import exhaustive_max, monte_carlo_ratio_check


def test_config_validation():
    with pytest.raises(ValueError):
        MultiGreedyConfig(0, 1.0)
    with pytest.raises(ValueError):
        MultiGreedyConfig(2, 0.0)
    with pytest.raises(ValueError):
        MultiGreedyConfig(2, 1.2)
    with pytest.raises(ValueError):
        MultiGreedyConfig(2, 0.5, -0.1)


def test_empty_ground_set():
    f = ModularObjective([])
    rep = random_multi_greedy(f, CardinalitySystem(0, 2), MultiGreedyConfig(2, 1.0))
    assert rep.solution == ()
    assert rep.value == 0.0


def test_modular_hand_trace():
    f = ModularObjective([5.0, 4.0, 3.0])
    rep = random_multi_greedy(f, CardinalitySystem(3, 2), MultiGreedyConfig(2, 1.0))
    assert rep.solution == (0, 1)
    assert rep.value == pytest.approx(9.0)
    # brute-force agrees
    opt = exhaustive_max(ModularObjective([5.0, 4.0, 3.0]), CardinalitySystem(3, 2))
    assert opt.optimum_value == pytest.approx(9.0)


def test_single_element_expectation():
    # E[value] = accept_prob * w for a single positive-weight element
    w, p, trials = 3.0, 0.5, 10_000
    f = ModularObjective([w])
    sys_ = CardinalitySystem(1, 1)
    vals = np.array(
        [random_multi_greedy(f, sys_, MultiGreedyConfig(1, p), make_rng(900, s)).value for s in range(trials)]
    )
    stderr = vals.std(ddof=1) / math.sqrt(trials)
    assert abs(vals.mean() - p * w) <= 3 * stderr


def test_p1_deterministic_across_seeds(ratio_suite):
    inst = ratio_suite[2]
    reps = [
        random_multi_greedy(inst.objective, inst.system, MultiGreedyConfig(3, 1.0), make_rng(s))
        for s in (1, 2, 3)
    ]
    assert len({r.solution for r in reps}) == 1
    assert len({r.value for r in reps}) == 1
    assert len({r.steps for r in reps}) == 1


def test_solutions_disjoint_and_feasible(monkeypatch):
    monkeypatch.setenv("KSYS_DEBUG_ASSERT", "1")
    rng = make_rng(31)
    feats = rng.normal(size=(12, 3))
    f = CoverageDiversityObjective(similarity_from_features(feats, 0.2))
    sys_ = ExplicitSystem(12, downward_closure(12, [tuple(range(0, 6)), tuple(range(4, 10)), (10, 11)]))
    # debug mode re-checks feasibility at every insertion and greedy dominance
    rep = random_multi_greedy(f, sys_, MultiGreedyConfig(3, 0.7, seed=5))
    assert sys_.is_independent(rep.solution)


def test_termination_on_nonpositive_gain():
    # all-negative marginal gains after the first pick: loop must stop early
    obj = CoverageDiversityObjective([[0.0, 1.0], [1.0, 0.0]])
    rep = random_multi_greedy(obj, CardinalitySystem(2, 2), MultiGreedyConfig(1, 1.0))
    assert rep.solution in ((0,), (1,))
    assert rep.steps == 1


def test_value_matches_recomputation(ratio_suite):
    for inst in ratio_suite[:8]:
        rep = random_multi_greedy(inst.objective, inst.system, MultiGreedyConfig(2, 1.0))
        assert rep.value == pytest.approx(inst.objective.value(rep.solution), abs=1e-9)
        assert inst.system.is_independent(rep.solution)


def test_per_run_deterministic_ratio(ratio_suite):
    for inst in ratio_suite:
        k = inst.k
        ell = math.ceil(math.sqrt(k)) + 1
        rep = random_multi_greedy(inst.objective, inst.system, MultiGreedyConfig(ell, 1.0))
        bound = k + math.sqrt(k) + math.ceil(math.sqrt(k)) + 1
        assert rep.value + 1e-9 >= inst.optimum / bound, inst.name


def test_expected_ratio_one_instance(ratio_suite):
    inst = next(i for i in ratio_suite if i.k == 2)
    p = 2.0 / (1.0 + math.sqrt(inst.k))
    report = monte_carlo_ratio_check(
        lambda rng: random_multi_greedy(inst.objective, inst.system, MultiGreedyConfig(2, p), rng).value,
        inst.optimum,
        ratio_bound(2, p, inst.k),
        trials=2000,
        rng_or_seed=7,
    )
    assert report.passed, report


def test_standard_greedy_modular_topd():
    f = ModularObjective([1.0, 9.0, 4.0, 7.0])
    rep = standard_greedy(f, CardinalitySystem(4, 2))
    assert rep.solution == (1, 3)


def test_standard_greedy_monotone_ratio(monotone_suite):
    for inst in monotone_suite[:10]:
        rep = standard_greedy(inst.objective, inst.system)
        assert rep.value + 1e-9 >= inst.optimum / (inst.k + 1), inst.name


def test_standard_greedy_empty_family():
    f = ModularObjective([3.0, 1.0])
    sys_ = ExplicitSystem(2, [()])
    rep = standard_greedy(f, sys_)
    assert rep.solution == ()


def test_usm_modular_keeps_everything():
    f = ModularObjective([2.0, 3.0, 4.0])
    X = usm_double_greedy(f, {0, 1, 2}, make_rng(1))
    assert X == {0, 1, 2}


def test_usm_cut_fixture_split():
    f = GraphCutObjective(2, [(0, 1, 1.0)])
    counts = {0: 0, 1: 0}
    trials = 4000
    for s in range(trials):
        X = usm_double_greedy(f, {0, 1}, make_rng(800, s))
        assert len(X) == 1
        counts[next(iter(X))] += 1
    # each singleton with probability 1/2; 4 sigma band
    assert abs(counts[0] - trials / 2) <= 4 * math.sqrt(trials * 0.25)
    # E[f] = 1 exactly here
    assert counts[0] + counts[1] == trials


def test_usm_empty():
    f = ModularObjective([1.0])
    assert usm_double_greedy(f, set(), make_rng(0)) == set()


def test_usm_expected_half_optimum():
    rng = make_rng(77)
    f = GraphCutObjective(6, [(u, v, float(rng.uniform(0.2, 1))) for u in range(6) for v in range(u + 1, 6) if rng.random() < 0.6])
    opt = exhaustive_max(f, CardinalitySystem(6, 6))
    vals = np.array([f.value(usm_double_greedy(f, set(range(6)), make_rng(801, s))) for s in range(3000)])
    stderr = vals.std(ddof=1) / math.sqrt(len(vals))
    assert vals.mean() >= opt.optimum_value / 2 - 3 * stderr


def test_repeated_greedy_monotone_equals_standard():
    f = ModularObjective([5.0, 2.0, 8.0])
    sys_ = CardinalitySystem(3, 2)
    rep_std = standard_greedy(f, sys_)
    rep_rg = repeated_greedy(f, sys_, 1, make_rng(4))
    assert set(rep_rg.solution) == set(rep_std.solution)
    assert rep_rg.value == pytest.approx(rep_std.value)


def test_repeated_greedy_hand_trace():
    f = ModularObjective([5.0, 4.0, 3.0])
    rep = repeated_greedy(f, CardinalitySystem(3, 2), 2, make_rng(4))
    assert rep.value == pytest.approx(9.0)
    assert rep.solution == (0, 1)


def test_repeated_greedy_empty_ground():
    rep = repeated_greedy(ModularObjective([]), CardinalitySystem(0, 1), 2, make_rng(0))
    assert rep.solution == ()


def test_ratio_bound_values():
    assert ratio_bound(2, 2.0 / (1.0 + 2.0), 4) == pytest.approx(9.0)
    assert ratio_bound(1, 1.0, 7, "monotone") == pytest.approx(8.0)
    assert ratio_bound(3, 1.0, 4) == pytest.approx(9.0)  # ceil(sqrt(4))+1 solutions, p=1
    assert ratio_bound(2, 0.5, 1, "accelerated", 0.1) == pytest.approx(1.1 * ratio_bound(2, 0.5, 1))


def test_ratio_bound_errors():
    with pytest.raises(ValueError):
        ratio_bound(1, 1.0, 2)  # randomized bound needs >= 2 solutions
    with pytest.raises(ValueError):
        ratio_bound(2, 0.0, 2)
    with pytest.raises(ValueError):
        ratio_bound(2, 1.0, 2, "accelerated", 0.0)
    with pytest.raises(ValueError):
        ratio_bound(2, 1.0, 2, "nonsense")


def test_query_accounting_single_step():
    # one element, one solution: 1 feasibility + 1 gain + nothing else
    f = ModularObjective([2.0])
    sys_ = CardinalitySystem(1, 1)
    rep = random_multi_greedy(f, sys_, MultiGreedyConfig(1, 1.0))
    assert rep.value_queries == 1
    assert rep.independence_queries == 1
    assert rep.steps == 1


def test_gain_tolerance_stops_loop():
    # gains below the tolerance count as non-positive
    f = FunctionOracle(2, lambda S: len(S) * 1e-15)
    rep = random_multi_greedy(f, CardinalitySystem(2, 2), MultiGreedyConfig(1, 1.0))
    assert rep.solution == ()
    assert GAIN_TOL < 1e-9
