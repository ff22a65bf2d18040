"""Independence-system oracles.

Every system answers membership queries for a down-closed set family over a
dense ground set 0..n-1 and declares the k for which it is a k-system.  Two
query paths are provided: a stateless full check ``is_independent(S)`` and an
incremental path (``new_state`` / ``can_add`` / ``add``) that answers
"S + {u} feasible?" in O(|labels of u|) from cached counters, because the
greedy algorithms probe many extensions of the same S.  Both paths count one
independence query per call.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass
class GroundSet:
    """Dense element universe with optional per-element payload arrays."""

    n: int
    payload: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("ground set size must be >= 0")


class IndependenceSystem:
    """Base oracle: down-closed family containing the empty set."""

    def __init__(self, n: int, declared_k: int):
        if declared_k < 1:
            raise ValueError("declared_k must be >= 1")
        self.n = int(n)
        self.declared_k = int(declared_k)
        self.independence_query_count = 0

    def _validate(self, S):
        for u in S:
            if not 0 <= u < self.n:
                raise ValueError(f"element id {u} outside ground set of size {self.n}")

    def is_independent(self, S) -> bool:
        """Membership of S in the family; counts one query."""
        self._validate(S)
        self.independence_query_count += 1
        return self._contains(S)

    def _contains(self, S) -> bool:
        raise NotImplementedError

    # incremental path -----------------------------------------------------

    def new_state(self):
        raise NotImplementedError

    def copy_state(self, state):
        raise NotImplementedError

    def can_add(self, u, state) -> bool:
        """S + {u} feasible, for the S cached in ``state``; counts one query."""
        if not 0 <= u < self.n:
            raise ValueError(f"element id {u} outside ground set of size {self.n}")
        self.independence_query_count += 1
        return self._can_add(u, state)

    def _can_add(self, u, state) -> bool:
        raise NotImplementedError

    def add(self, u, state) -> None:
        """Commit u into the cached S. Not an oracle query."""
        raise NotImplementedError


class CardinalitySystem(IndependenceSystem):
    """|S| <= d. A matroid, so declared_k = 1."""

    def __init__(self, n: int, d: int):
        if d < 0:
            raise ValueError("cardinality cap must be >= 0")
        super().__init__(n, 1)
        self.d = int(d)

    def _contains(self, S):
        return len(set(S)) <= self.d

    def new_state(self):
        return [0]

    def copy_state(self, state):
        return [state[0]]

    def _can_add(self, u, state):
        return state[0] + 1 <= self.d

    def add(self, u, state):
        state[0] += 1


class PartitionMatroidSystem(IndependenceSystem):
    """One category per element, per-category caps, optional global cap."""

    def __init__(self, categories, caps, global_cap: Optional[int] = None):
        categories = np.asarray(categories, dtype=np.int64)
        super().__init__(len(categories), 1)
        self.categories = categories
        self.num_categories = int(categories.max()) + 1 if len(categories) else 0
        if np.isscalar(caps):
            caps = [int(caps)] * self.num_categories
        self.caps = list(map(int, caps))
        if len(self.caps) < self.num_categories:
            raise ValueError("missing cap for some category")
        self.global_cap = self.n if global_cap is None else int(global_cap)

    def _contains(self, S):
        S = set(S)
        if len(S) > self.global_cap:
            return False
        counts = [0] * self.num_categories
        for u in S:
            c = self.categories[u]
            counts[c] += 1
            if counts[c] > self.caps[c]:
                return False
        return True

    def new_state(self):
        return [[0] * self.num_categories, 0]

    def copy_state(self, state):
        return [list(state[0]), state[1]]

    def _can_add(self, u, state):
        c = self.categories[u]
        return state[1] + 1 <= self.global_cap and state[0][c] + 1 <= self.caps[c]

    def add(self, u, state):
        state[0][self.categories[u]] += 1
        state[1] += 1


class MultiLabelBoundSystem(IndependenceSystem):
    """Elements carry label subsets; each label g is capped at m_g, plus a
    global cap. A k-system with k = number of labels."""

    def __init__(self, labels, per_label_cap, global_cap: Optional[int] = None):
        self.labels = [frozenset(ls) for ls in labels]
        universe = sorted(set().union(*self.labels)) if self.labels else []
        self.label_universe = universe
        super().__init__(len(self.labels), max(1, len(universe)))
        if isinstance(per_label_cap, dict):
            self.per_label_cap = {g: int(per_label_cap[g]) for g in universe}
        else:
            self.per_label_cap = {g: int(per_label_cap) for g in universe}
        self.global_cap = self.n if global_cap is None else int(global_cap)

    def _contains(self, S):
        S = set(S)
        if len(S) > self.global_cap:
            return False
        counts = {}
        for u in S:
            for g in self.labels[u]:
                c = counts.get(g, 0) + 1
                if c > self.per_label_cap[g]:
                    return False
                counts[g] = c
        return True

    def new_state(self):
        return [{}, 0]

    def copy_state(self, state):
        return [dict(state[0]), state[1]]

    def _can_add(self, u, state):
        if state[1] + 1 > self.global_cap:
            return False
        counts = state[0]
        for g in self.labels[u]:
            if counts.get(g, 0) + 1 > self.per_label_cap[g]:
                return False
        return True

    def add(self, u, state):
        counts = state[0]
        for g in self.labels[u]:
            counts[g] = counts.get(g, 0) + 1
        state[1] += 1


class SocialSeedingSystem(IndependenceSystem):
    """Elements are (node, product) pairs, id = node * n_products + product.
    Each node seeds at most q products; each product has at most m seeds.
    A 2-system."""

    def __init__(self, n_nodes: int, n_products: int, per_node_cap: int, per_product_cap: int):
        super().__init__(n_nodes * n_products, 2)
        self.n_nodes = int(n_nodes)
        self.n_products = int(n_products)
        self.per_node_cap = int(per_node_cap)
        self.per_product_cap = int(per_product_cap)

    def pair(self, element_id):
        return divmod(int(element_id), self.n_products)

    def _contains(self, S):
        node_counts = [0] * self.n_nodes
        prod_counts = [0] * self.n_products
        for e in set(S):
            v, i = divmod(e, self.n_products)
            node_counts[v] += 1
            prod_counts[i] += 1
            if node_counts[v] > self.per_node_cap or prod_counts[i] > self.per_product_cap:
                return False
        return True

    def new_state(self):
        return [[0] * self.n_nodes, [0] * self.n_products]

    def copy_state(self, state):
        return [list(state[0]), list(state[1])]

    def _can_add(self, u, state):
        v, i = divmod(u, self.n_products)
        return state[0][v] + 1 <= self.per_node_cap and state[1][i] + 1 <= self.per_product_cap

    def add(self, u, state):
        v, i = divmod(u, self.n_products)
        state[0][v] += 1
        state[1][i] += 1


def _mask(S):
    m = 0
    for u in S:
        m |= 1 << u
    return m


class ExplicitSystem(IndependenceSystem):
    """The whole family given explicitly, for small ground sets (n <= 20).

    Construction verifies the family contains the empty set and is
    down-closed. declared_k defaults to the empirically measured k
    (exhaustive base enumeration, see ksysmax.verify.measured_k).
    Incremental states are bitmasks, so can_add is O(1).
    """

    @classmethod
    def from_masks(cls, n: int, masks, declared_k: Optional[int] = None):
        return cls(n, None, declared_k, masks=frozenset(int(m) for m in masks))

    def __init__(self, n: int, sets, declared_k: Optional[int] = None, *, masks=None):
        if masks is None:
            masks = frozenset(_mask(S) for S in sets)
        if n > 20:
            raise ValueError("explicit systems are limited to n <= 20")
        if 0 not in masks:
            raise ValueError("explicit family must contain the empty set")
        for m in masks:
            if m >> n:
                raise ValueError("explicit family references ids outside the ground set")
            mm = m
            while mm:
                bit = mm & -mm
                if (m ^ bit) not in masks:
                    raise ValueError("explicit family is not down-closed")
                mm ^= bit
        if declared_k is None:
            from .verify import measured_k_from_masks  # deferred: verify must not import systems

            declared_k = measured_k_from_masks(n, masks)
        super().__init__(n, declared_k)
        self.family_masks = masks

    @property
    def family(self):
        return [frozenset(i for i in range(self.n) if m >> i & 1) for m in self.family_masks]

    def _contains(self, S):
        return _mask(set(S)) in self.family_masks

    def new_state(self):
        return [0]

    def copy_state(self, state):
        return [state[0]]

    def _can_add(self, u, state):
        return (state[0] | (1 << u)) in self.family_masks

    def add(self, u, state):
        state[0] |= 1 << u


def downward_closure(n, generator_sets):
    """All subsets of the given sets (plus the empty set), as frozensets."""
    out = {frozenset()}
    for g in generator_sets:
        g = tuple(g)
        for m in range(1 << len(g)):
            out.add(frozenset(g[i] for i in range(len(g)) if m >> i & 1))
    return out


def rank_upper_bound(system: IndependenceSystem, n: Optional[int] = None) -> int:
    """Upper bound on the rank (size of the largest independent set).

    One greedy pass in element-id order builds a maximal independent set B;
    any two bases of the ground set differ by at most a factor declared_k,
    so min(n, declared_k * |B|) bounds the rank from above.  Cardinality
    systems short-circuit to their cap.
    """
    if n is None:
        n = system.n
    if isinstance(system, CardinalitySystem):
        return min(system.d, n)
    state = system.new_state()
    size = 0
    for u in range(n):
        if system.can_add(u, state):
            system.add(u, state)
            size += 1
    return min(n, system.declared_k * size)
