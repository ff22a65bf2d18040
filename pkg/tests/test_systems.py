import numpy as np
import pytest

from ksysmax.rng import make_rng
from ksysmax.systems import (
    CardinalitySystem,
    ExplicitSystem,
    MultiLabelBoundSystem,
    PartitionMatroidSystem,
    SocialSeedingSystem,
    downward_closure,
    rank_upper_bound,
)
from ksysmax.verify import down_closed_check, exhaustive_max, measured_k


def test_empty_set_always_independent():
    systems = [
        CardinalitySystem(5, 0),
        PartitionMatroidSystem([0, 0, 1, 1], [1, 1]),
        MultiLabelBoundSystem([{"a"}, {"a", "b"}], 1),
        SocialSeedingSystem(2, 2, 1, 1),
        ExplicitSystem(3, [(), (0,)]),
    ]
    for s in systems:
        assert s.is_independent(())


def test_cardinality_basics():
    s = CardinalitySystem(5, 2)
    assert s.is_independent(())
    assert s.is_independent({0, 1})
    assert not s.is_independent({0, 1, 2})
    assert s.declared_k == 1


def test_out_of_range_id_rejected():
    s = CardinalitySystem(3, 2)
    with pytest.raises(ValueError):
        s.is_independent({0, 5})
    with pytest.raises(ValueError):
        s.can_add(7, s.new_state())


def test_multilabel_genre_cap():
    # eleven movies all carrying the same label exceed a per-label cap of 10
    labels = [{"adventure"} for _ in range(12)]
    s = MultiLabelBoundSystem(labels, per_label_cap=10, global_cap=30)
    assert s.is_independent(set(range(10)))
    assert not s.is_independent(set(range(11)))
    assert s.declared_k == 1  # single label in the universe

    labels = [{"a"}, {"b"}, {"c"}, {"a", "b"}]
    s = MultiLabelBoundSystem(labels, 2)
    assert s.declared_k == 3


def test_declared_k_values():
    assert PartitionMatroidSystem([0, 1, 2], [1, 1, 1]).declared_k == 1
    assert SocialSeedingSystem(4, 3, 2, 2).declared_k == 2


def test_social_seeding_caps():
    s = SocialSeedingSystem(n_nodes=3, n_products=2, per_node_cap=1, per_product_cap=2)
    # node 0 with both products violates the per-node cap
    assert not s.is_independent({0, 1})
    # product 0 on all three nodes violates the per-product cap
    assert not s.is_independent({0, 2, 4})
    assert s.is_independent({0, 3})


def test_explicit_system_validation():
    with pytest.raises(ValueError, match="empty set"):
        ExplicitSystem(2, [(0,)])
    with pytest.raises(ValueError, match="down-closed"):
        ExplicitSystem(3, [(), (0, 1)])
    with pytest.raises(ValueError, match="outside"):
        ExplicitSystem(2, [(), (3,)])


def test_explicit_measured_k_default():
    fam = downward_closure(3, [(0,), (1, 2)])
    s = ExplicitSystem(3, fam)
    assert s.declared_k == 2
    assert measured_k(s) <= s.declared_k


def test_rank_upper_bound_cardinality():
    assert rank_upper_bound(CardinalitySystem(100, 5)) == 5
    assert rank_upper_bound(CardinalitySystem(3, 7)) == 3


def test_rank_upper_bound_explicit_bases():
    # bases {0} and {1,2}: the greedy pass finds one of them; the bound must
    # cover the largest base
    s = ExplicitSystem(3, downward_closure(3, [(0,), (1, 2)]), declared_k=2)
    bound = rank_upper_bound(s)
    largest = max(m.bit_count() for m in s.family_masks)
    assert bound >= largest
    assert bound <= s.n + 1


def test_rank_upper_bound_partition_exhaustive():
    cats = [0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2]
    s = PartitionMatroidSystem(cats, caps=5, global_cap=10)
    bound = rank_upper_bound(s)
    # exhaustive max base on the 12-element instance
    masks = [
        m
        for m in range(1 << 12)
        if s._contains({u for u in range(12) if m >> u & 1})
    ]
    true_rank = max(m.bit_count() for m in masks)
    assert true_rank == 10
    assert bound >= true_rank
    assert bound <= 12


def test_down_closedness_sampled():
    rng = make_rng(11)
    systems = [
        CardinalitySystem(10, 4),
        PartitionMatroidSystem(list(np.arange(10) % 3), [2, 2, 2], 5),
        MultiLabelBoundSystem([{"a", "b"} if u % 2 else {"a"} for u in range(10)], 3, 6),
        SocialSeedingSystem(4, 3, 2, 2),
        ExplicitSystem(8, downward_closure(8, [(0, 1, 2), (2, 3, 4), (5, 6)])),
    ]
    for s in systems:
        assert down_closed_check(s, 200, rng)


def test_query_counter_increments():
    s = CardinalitySystem(5, 2)
    c0 = s.independence_query_count
    s.is_independent({0})
    s.is_independent({0, 1})
    assert s.independence_query_count == c0 + 2
    st = s.new_state()
    s.can_add(0, st)
    assert s.independence_query_count == c0 + 3
    s.add(0, st)  # not a query
    assert s.independence_query_count == c0 + 3


def test_incremental_matches_stateless():
    rng = make_rng(5)
    labels = [{"a", "b"} if u % 3 == 0 else {"b"} if u % 3 == 1 else {"c"} for u in range(9)]
    systems = [
        PartitionMatroidSystem(list(np.arange(9) % 3), [2, 1, 2], 4),
        MultiLabelBoundSystem(labels, 2, 5),
        SocialSeedingSystem(3, 3, 2, 2),
    ]
    for s in systems:
        for _ in range(50):
            st = s.new_state()
            S = []
            for u in rng.permutation(s.n):
                u = int(u)
                ok_inc = s.can_add(u, st)
                ok_full = s.is_independent(set(S) | {u})
                assert ok_inc == ok_full
                if ok_inc and rng.random() < 0.6:
                    s.add(u, st)
                    S.append(u)


def test_explicit_state_is_bitmask():
    s = ExplicitSystem(4, downward_closure(4, [(0, 1), (2, 3)]))
    st = s.new_state()
    assert s.can_add(0, st)
    s.add(0, st)
    assert s.can_add(1, st)
    assert not s.can_add(2, st)


def test_rank_bound_dominates_algorithm_outputs(ratio_suite):
    from ksysmax.greedy import MultiGreedyConfig, random_multi_greedy

    for inst in ratio_suite[:10]:
        bound = rank_upper_bound(inst.system)
        rep = random_multi_greedy(inst.objective, inst.system, MultiGreedyConfig(2, 1.0))
        assert len(rep.solution) <= bound
