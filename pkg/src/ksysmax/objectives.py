"""Non-negative submodular value oracles.

Oracles expose two query paths that are both counted one value query per
marginal-gain evaluation:

* stateless: ``value(S)`` recomputes f(S) from scratch;
* incremental: a per-candidate-solution state caches running quantities
  (covered column sums, current per-row maxima, per-node seeded-weight sums)
  so ``gain``/``gains`` cost O(n) instead of O(n^2).

``add`` commits an element into a state; it is cache maintenance, not an
oracle query.  The stateless path exists so tests can cross-check the caches.
"""

import numpy as np

from . import kernels


def _as_cands(us):
    return np.asarray(us, dtype=np.int64)


class _GenericState:
    __slots__ = ("members", "value")

    def __init__(self, members, value):
        self.members = members
        self.value = value


class ValueOracle:
    """Base oracle over a dense ground set 0..n-1."""

    def __init__(self, n: int):
        self.n = int(n)
        self.value_query_count = 0

    def value(self, S) -> float:
        S = frozenset(S)
        for u in S:
            if not 0 <= u < self.n:
                raise ValueError(f"element id {u} outside ground set of size {self.n}")
        self.value_query_count += 1
        return self._value(S)

    def _value(self, S) -> float:
        raise NotImplementedError

    # incremental path -----------------------------------------------------

    def new_state(self):
        # generic oracles must evaluate f(empty); that is a real query
        return _GenericState(set(), self.value(()))

    def copy_state(self, state):
        return _GenericState(set(state.members), state.value)

    def state_value(self, state) -> float:
        return state.value

    def state_members(self, state):
        return state.members

    def gain(self, u, state) -> float:
        """f(u | S) for the S cached in ``state``; one value query."""
        if u in state.members:
            raise ValueError(f"element {u} already in the cached solution")
        self.value_query_count += 1
        return self._gain(u, state)

    def gains(self, us, state) -> np.ndarray:
        """Marginal gains of each candidate against the same cached S.

        Candidates must be distinct and outside S (not re-validated here).
        Counts len(us) value queries.
        """
        self.value_query_count += len(us)
        return self._gains(us, state)

    def add(self, u, state) -> None:
        self._add(u, state)

    # generic fallbacks used by black-box oracles

    def _gain(self, u, state):
        return self._value(frozenset(state.members) | {u}) - state.value

    def _gains(self, us, state):
        base = frozenset(state.members)
        return np.array([self._value(base | {u}) - state.value for u in us], dtype=np.float64)

    def _add(self, u, state):
        state.members.add(u)
        state.value = self._value(frozenset(state.members))


class FunctionOracle(ValueOracle):
    """Wraps an arbitrary set function fn(frozenset) -> float."""

    def __init__(self, n, fn):
        super().__init__(n)
        self._fn = fn

    def _value(self, S):
        return float(self._fn(S))


def marginal_gain(f: ValueOracle, u, S) -> float:
    """f(S + {u}) - f(S) without a cache: two value queries."""
    S = frozenset(S)
    if u in S:
        raise ValueError(f"element {u} already in S")
    return f.value(S | {u}) - f.value(S)


def similarity_from_features(features, decay: float) -> np.ndarray:
    """exp(-decay * euclidean distance) similarity matrix.

    Symmetric with unit diagonal; raises on ragged feature vectors or a
    non-positive decay rate.
    """
    if decay <= 0:
        raise ValueError("decay rate must be positive")
    feats = [np.asarray(t, dtype=np.float64) for t in features]
    dims = {t.shape for t in feats}
    if len(dims) > 1:
        raise ValueError(f"feature vectors have mismatched dimensions: {sorted(dims)}")
    X = np.vstack(feats) if feats else np.zeros((0, 0))
    sq = (X * X).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.clip(d2, 0.0, None, out=d2)
    M = np.exp(-decay * np.sqrt(d2))
    M = (M + M.T) / 2.0
    np.fill_diagonal(M, 1.0)
    return np.ascontiguousarray(M)


def cosine_similarity(features) -> np.ndarray:
    X = np.asarray(features, dtype=np.float64)
    norms = np.linalg.norm(X, axis=1)
    norms[norms == 0] = 1.0
    Y = X / norms[:, None]
    S = Y @ Y.T
    S = (S + S.T) / 2.0
    return np.ascontiguousarray(S)


class _ArrayState:
    __slots__ = ("members", "value", "arrays")

    def __init__(self, members, value, arrays):
        self.members = members
        self.value = value
        self.arrays = arrays


class CoverageDiversityObjective(ValueOracle):
    """sum_{u in N} sum_{v in S} M[u,v]  -  sum_{u,v in S} M[u,v].

    The first term rewards covering the whole ground set with similar picks,
    the second penalizes picking similar elements; non-monotone in general.
    M must be symmetric and non-negative (non-negativity of f follows).
    """

    def __init__(self, M):
        M = np.ascontiguousarray(np.asarray(M, dtype=np.float64))
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("similarity matrix must be square")
        if not np.allclose(M, M.T, atol=1e-12):
            raise ValueError("similarity matrix must be symmetric")
        if (M < 0).any():
            raise ValueError("similarity matrix must be non-negative")
        super().__init__(M.shape[0])
        self.M = M
        self.colsum = M.sum(axis=0)
        self.diag = np.ascontiguousarray(np.diag(M).copy())

    def _value(self, S):
        if not S:
            return 0.0
        idx = np.fromiter(S, dtype=np.int64)
        return float(self.colsum[idx].sum() - self.M[np.ix_(idx, idx)].sum())

    def new_state(self):
        return _ArrayState(set(), 0.0, [np.zeros(self.n)])

    def copy_state(self, state):
        return _ArrayState(set(state.members), state.value, [state.arrays[0].copy()])

    def _gain(self, u, state):
        simsum = state.arrays[0]
        return float(self.colsum[u] - 2.0 * simsum[u] - self.diag[u])

    def _gains(self, us, state):
        return kernels.cd_gains(self.colsum, self.diag, state.arrays[0], _as_cands(us))

    def _add(self, u, state):
        state.value += self._gain(u, state)
        state.arrays[0] += self.M[:, u]
        state.members.add(u)


class ImageSummaryObjective(ValueOracle):
    """sum_u max_{v in S} s[u,v]  -  (1/n) sum_{u,v in S} s[u,v].

    The max over an empty S is taken as 0, keeping f(empty) = 0 and f
    non-negative when s is non-negative.
    """

    _redundancy = True

    def __init__(self, sim):
        sim = np.ascontiguousarray(np.asarray(sim, dtype=np.float64))
        if sim.ndim != 2 or sim.shape[0] != sim.shape[1]:
            raise ValueError("similarity matrix must be square")
        if not np.allclose(sim, sim.T, atol=1e-12):
            raise ValueError("similarity matrix must be symmetric")
        super().__init__(sim.shape[0])
        self.sim = sim
        self.diag = np.ascontiguousarray(np.diag(sim).copy())
        self.inv_n = 1.0 / sim.shape[0] if (self._redundancy and sim.shape[0]) else 0.0
        self._dummy = np.zeros(self.n)

    def _value(self, S):
        if not S:
            return 0.0
        idx = np.fromiter(S, dtype=np.int64)
        cov = self.sim[:, idx].max(axis=1).sum()
        return float(cov - self.inv_n * self.sim[np.ix_(idx, idx)].sum())

    def new_state(self):
        # arrays: [curmax or dummy, simsum], value; covsum tracked in slot 2
        return _ArrayState(set(), 0.0, [None, np.zeros(self.n), 0.0])

    def copy_state(self, state):
        curmax = None if state.arrays[0] is None else state.arrays[0].copy()
        return _ArrayState(set(state.members), state.value, [curmax, state.arrays[1].copy(), state.arrays[2]])

    def _gain(self, u, state):
        return float(self._gains([u], state)[0])

    def _gains(self, us, state):
        curmax, simsum, covsum = state.arrays
        nonempty = curmax is not None
        return kernels.fl_gains(
            self.sim,
            curmax if nonempty else self._dummy,
            covsum,
            simsum,
            self.diag,
            self.inv_n,
            _as_cands(us),
            nonempty,
        )

    def _add(self, u, state):
        state.value += self._gain(u, state)
        curmax, simsum, _ = state.arrays
        if curmax is None:
            curmax = self.sim[:, u].copy()
        else:
            np.maximum(curmax, self.sim[:, u], out=curmax)
        simsum += self.sim[:, u]
        state.arrays[0] = curmax
        state.arrays[2] = float(curmax.sum())
        state.members.add(u)


class FacilityLocationObjective(ImageSummaryObjective):
    """Pure coverage: sum_u max_{v in S} s[u,v]. Monotone fixture."""

    _redundancy = False


class ModularObjective(ValueOracle):
    """f(S) = sum of non-negative per-element weights."""

    def __init__(self, weights):
        w = np.asarray(weights, dtype=np.float64)
        if (w < 0).any():
            raise ValueError("modular weights must be non-negative")
        super().__init__(len(w))
        self.weights = np.ascontiguousarray(w)

    def _value(self, S):
        if not S:
            return 0.0
        return float(self.weights[np.fromiter(S, dtype=np.int64)].sum())

    def new_state(self):
        return _GenericState(set(), 0.0)

    def copy_state(self, state):
        return _GenericState(set(state.members), state.value)

    def _gain(self, u, state):
        return float(self.weights[u])

    def _gains(self, us, state):
        return self.weights[_as_cands(us)].copy()

    def _add(self, u, state):
        state.members.add(u)
        state.value += self.weights[u]


class GraphCutObjective(ValueOracle):
    """Weighted cut: sum of edge weights with exactly one endpoint in S.

    Built from an undirected edge list (u, v, w) with w >= 0; self loops are
    rejected. Shares the coverage-diversity gain kernel (gain(x|S) =
    weighted_degree[x] - 2 * weight(x, S)).
    """

    def __init__(self, n, edges):
        super().__init__(n)
        W = np.zeros((n, n))
        for u, v, w in edges:
            if u == v:
                raise ValueError("self loops are not allowed in cut objectives")
            if w < 0:
                raise ValueError("edge weights must be non-negative")
            W[u, v] += w
            W[v, u] += w
        self.W = np.ascontiguousarray(W)
        self.wdeg = W.sum(axis=0)
        self._zero_diag = np.zeros(n)

    def _value(self, S):
        if not S:
            return 0.0
        idx = np.fromiter(S, dtype=np.int64)
        return float(self.wdeg[idx].sum() - self.W[np.ix_(idx, idx)].sum())

    def new_state(self):
        return _ArrayState(set(), 0.0, [np.zeros(self.n)])

    def copy_state(self, state):
        return _ArrayState(set(state.members), state.value, [state.arrays[0].copy()])

    def _gain(self, u, state):
        return float(self.wdeg[u] - 2.0 * state.arrays[0][u])

    def _gains(self, us, state):
        return kernels.cd_gains(self.wdeg, self._zero_diag, state.arrays[0], _as_cands(us))

    def _add(self, u, state):
        state.value += self._gain(u, state)
        state.arrays[0] += self.W[:, u]
        state.members.add(u)


class SocialRevenueObjective(ValueOracle):
    """Multi-product seeding revenue.

    Elements are (node, product) pairs with id = node * n_products + product.
    Seeding H_i for product i earns sum over non-seeded nodes u of
    alpha[u,i] * sqrt(total edge weight from H_i into u).  alpha draws are
    fixed at construction; the adaptive module owns stochastic alpha.
    """

    def __init__(self, n_nodes, n_products, edges, alpha, directed=False):
        super().__init__(n_nodes * n_products)
        self.n_nodes = int(n_nodes)
        self.n_products = int(n_products)
        alpha = np.ascontiguousarray(np.asarray(alpha, dtype=np.float64))
        if alpha.shape != (n_nodes, n_products):
            raise ValueError("alpha must have shape (n_nodes, n_products)")
        if (alpha < 0).any():
            raise ValueError("alpha coefficients must be non-negative")
        self.alpha = alpha
        adj = [[] for _ in range(n_nodes)]
        for u, v, w in edges:
            if w < 0:
                raise ValueError("edge weights must be non-negative")
            if u == v:
                continue  # self influence never contributes (u excluded once seeded)
            adj[u].append((v, float(w)))
            if not directed:
                adj[v].append((u, float(w)))
        indptr = np.zeros(n_nodes + 1, dtype=np.int64)
        for v in range(n_nodes):
            indptr[v + 1] = indptr[v] + len(adj[v])
        self.indptr = indptr
        self.indices = np.zeros(indptr[-1], dtype=np.int64)
        self.edge_weights = np.zeros(indptr[-1])
        pos = 0
        for v in range(n_nodes):
            for u, w in adj[v]:
                self.indices[pos] = u
                self.edge_weights[pos] = w
                pos += 1

    def pair(self, element_id):
        return divmod(int(element_id), self.n_products)

    def _influence(self, H):
        wsum = np.zeros((self.n_nodes, self.n_products))
        seeded = np.zeros((self.n_nodes, self.n_products), dtype=np.uint8)
        for e in H:
            v, i = divmod(e, self.n_products)
            seeded[v, i] = 1
            lo, hi = self.indptr[v], self.indptr[v + 1]
            np.add.at(wsum[:, i], self.indices[lo:hi], self.edge_weights[lo:hi])
        return wsum, seeded

    def _value(self, S):
        if not S:
            return 0.0
        wsum, seeded = self._influence(S)
        return float((np.sqrt(wsum) * self.alpha * (1 - seeded)).sum())

    def new_state(self):
        return _ArrayState(
            set(),
            0.0,
            [
                np.zeros((self.n_nodes, self.n_products)),
                np.zeros((self.n_nodes, self.n_products), dtype=np.uint8),
            ],
        )

    def copy_state(self, state):
        return _ArrayState(
            set(state.members), state.value, [state.arrays[0].copy(), state.arrays[1].copy()]
        )

    def _gain(self, u, state):
        return float(self._gains([u], state)[0])

    def _gains(self, us, state):
        wsum, seeded = state.arrays
        return kernels.sr_gains(
            self.indptr,
            self.indices,
            self.edge_weights,
            self.alpha,
            wsum,
            seeded,
            self.n_products,
            _as_cands(us),
        )

    def _add(self, u, state):
        state.value += self._gain(u, state)
        wsum, seeded = state.arrays
        v, i = divmod(u, self.n_products)
        lo, hi = self.indptr[v], self.indptr[v + 1]
        np.add.at(wsum[:, i], self.indices[lo:hi], self.edge_weights[lo:hi])
        seeded[v, i] = 1
        state.members.add(u)
