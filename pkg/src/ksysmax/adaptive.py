"""Adaptive (stochastic-state) maximization.

Elements carry initially-unknown random states; a policy selects elements
one at a time and observes the state of an element only after selecting it.
``adapt_random_greedy`` picks the feasible element with the best expected
marginal gain conditioned on the observations so far and accepts it with
probability ``accept_prob``; rejected elements leave the pool unobserved.

Two instance families ship: finite per-element state spaces with independent
priors and a utility that reads only selected states (exact expected gains),
and a social-seeding model where selecting a (node, product) pair reveals
the revenue coefficients of the node's neighbors (expected gains by
Monte-Carlo over the unrevealed coefficient draws, or in closed form since
revenue is linear in the coefficients).
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .common import GAIN_TOL, best_candidate
from .rng import as_rng, make_rng


@dataclass
class PolicyTrace:
    """One policy run: (element, observed state, accepted) records in
    consideration order, the selected set, and the realized value."""

    records: tuple
    selected: tuple
    value: float
    observed: dict = field(default_factory=dict)


class FiniteAdaptiveInstance:
    """Independent finite state priors; utility reads selected states only.

    state_probs[u] is the prior distribution of element u's state (indices
    0..|Z_u|-1). utility(Y, states) must be submodular in Y for every fixed
    state assignment and non-negative.
    """

    def __init__(self, state_probs, utility):
        self.state_probs = [np.asarray(p, dtype=np.float64) for p in state_probs]
        for p in self.state_probs:
            if len(p) < 1 or abs(p.sum() - 1.0) > 1e-9 or (p < 0).any():
                raise ValueError("each element needs a probability vector summing to 1")
        self.n = len(self.state_probs)
        self.utility = utility

    def draw_realization(self, rng):
        rng = as_rng(rng)
        return tuple(int(rng.choice(len(p), p=p)) for p in self.state_probs)

    def new_observation(self):
        return {}

    def delta(self, u, psi, mc_rng=None, mode="exact", samples=1000):
        return expected_marginal_gain(self, u, psi, mode=mode, samples=samples, rng=mc_rng)

    def observe_and_select(self, u, phi, psi):
        z = phi[u]
        psi[u] = z
        return z

    def realized_value(self, selected, phi):
        states = {u: phi[u] for u in selected}
        return float(self.utility(frozenset(selected), states))


def expected_marginal_gain(inst, u, psi, mode="exact", samples=1000, rng=None):
    """Expected gain of selecting u conditioned on the observations psi.

    exact: expectation over u's prior (valid because the utility only reads
    selected states, so no other unknown state matters).
    monte_carlo: average of ``samples`` draws of u's state.
    """
    if u in psi:
        raise ValueError(f"element {u} was already selected/observed")
    dom = frozenset(psi)
    base = inst.utility(dom, psi)
    probs = inst.state_probs[u]
    if mode == "exact":
        total = 0.0
        for z, pz in enumerate(probs):
            if pz == 0:
                continue
            states = dict(psi)
            states[u] = z
            total += pz * (inst.utility(dom | {u}, states) - base)
        return float(total)
    if mode == "monte_carlo":
        rng = as_rng(rng)
        draws = rng.choice(len(probs), size=samples, p=probs)
        acc = 0.0
        for z in draws:
            states = dict(psi)
            states[u] = int(z)
            acc += inst.utility(dom | {u}, states) - base
        return float(acc / samples)
    raise ValueError(f"unknown mode {mode!r}")


class SocialObservation(dict):
    """Observation record for the social model: selected pairs plus the
    revealed per-node coefficient rows."""

    def __init__(self):
        super().__init__()
        self.revealed = {}


class AdaptiveSocialInstance:
    """Multi-product seeding with random revenue coefficients.

    Coefficients alpha[node, product] follow a Pareto-II (Lomax) prior with
    shape 2 and scale 1, independent across entries; selecting (v, i)
    reveals the coefficient rows of v's neighbors.  Edge weights are known.
    """

    LOMAX_SHAPE = 2.0
    LOMAX_SCALE = 1.0

    def __init__(self, n_nodes, n_products, edges, directed=False):
        self.n_nodes = int(n_nodes)
        self.n_products = int(n_products)
        self.n = self.n_nodes * self.n_products
        adj = [[] for _ in range(n_nodes)]
        for u, v, w in edges:
            if w < 0:
                raise ValueError("edge weights must be non-negative")
            if u == v:
                continue
            adj[u].append((int(v), float(w)))
            if not directed:
                adj[v].append((int(u), float(w)))
        self.adj = [tuple(a) for a in adj]

    def pair(self, element_id):
        return divmod(int(element_id), self.n_products)

    def draw_realization(self, rng):
        rng = as_rng(rng)
        return self.LOMAX_SCALE * rng.pareto(self.LOMAX_SHAPE, size=(self.n_nodes, self.n_products))

    def new_observation(self):
        return SocialObservation()

    def _wsum(self, dom, product):
        w = {}
        for e in dom:
            x, i = divmod(e, self.n_products)
            if i != product:
                continue
            for u, wt in self.adj[x]:
                w[u] = w.get(u, 0.0) + wt
        return w

    def delta(self, element, psi, mc_rng=None, mode="monte_carlo", samples=200):
        if element in psi:
            raise ValueError(f"element {element} was already selected")
        v, i = divmod(element, self.n_products)
        seeded_i = {divmod(e, self.n_products)[0] for e in psi if e % self.n_products == i}
        wsum = self._wsum(psi, i)
        fixed = 0.0
        open_coeffs = []  # sqrt improvements whose alpha is still unrevealed
        wv = wsum.get(v, 0.0)
        if v in psi.revealed:
            fixed -= psi.revealed[v][i] * math.sqrt(wv)
        elif wv > 0.0:
            open_coeffs.append(-math.sqrt(wv))
        for u, wt in self.adj[v]:
            if u in seeded_i:
                continue
            w0 = wsum.get(u, 0.0)
            coeff = math.sqrt(w0 + wt) - math.sqrt(w0)
            if u in psi.revealed:
                fixed += psi.revealed[u][i] * coeff
            else:
                open_coeffs.append(coeff)
        if not open_coeffs:
            return fixed
        total_open = float(np.sum(open_coeffs))
        if mode == "exact":
            # revenue is linear in alpha; unrevealed coefficients have mean 1
            mean_alpha = self.LOMAX_SCALE / (self.LOMAX_SHAPE - 1.0)
            return fixed + total_open * mean_alpha
        if mode == "monte_carlo":
            rng = as_rng(mc_rng)
            draws = self.LOMAX_SCALE * rng.pareto(self.LOMAX_SHAPE, size=(samples, len(open_coeffs)))
            return fixed + float((draws @ np.asarray(open_coeffs)).mean())
        raise ValueError(f"unknown mode {mode!r}")

    def observe_and_select(self, element, phi, psi):
        v, _ = divmod(element, self.n_products)
        newly = {}
        for u, _w in self.adj[v]:
            if u not in psi.revealed:
                psi.revealed[u] = np.asarray(phi[u], dtype=np.float64)
            newly[u] = tuple(float(a) for a in phi[u])
        psi[element] = "selected"
        return newly

    def realized_value(self, selected, phi):
        alpha = np.asarray(phi, dtype=np.float64)
        total = 0.0
        for i in range(self.n_products):
            seeded = {divmod(e, self.n_products)[0] for e in selected if e % self.n_products == i}
            if not seeded:
                continue
            wsum = {}
            for x in seeded:
                for u, wt in self.adj[x]:
                    wsum[u] = wsum.get(u, 0.0) + wt
            for u, w in wsum.items():
                if u not in seeded:
                    total += alpha[u, i] * math.sqrt(w)
        return float(total)


def adapt_random_greedy(
    inst,
    system,
    accept_prob: float,
    phi,
    rng,
    delta_mode: Optional[str] = None,
    mc_samples: int = 200,
    mc_rng=None,
) -> PolicyTrace:
    """Greedy-by-expected-gain policy with probabilistic acceptance.

    phi is the (caller-drawn or environment-held) realization; the state of
    an element is observed only when the acceptance coin succeeds.
    """
    if not 0.0 < accept_prob <= 1.0:
        raise ValueError("accept_prob must be in (0, 1]")
    rng = as_rng(rng)
    mc_rng = as_rng(mc_rng) if mc_rng is not None else rng
    psi = inst.new_observation()
    pool = set(range(inst.n))
    sys_state = system.new_state()
    selected = []
    records = []
    kwargs = {} if delta_mode is None else {"mode": delta_mode}
    if delta_mode == "monte_carlo":
        kwargs["samples"] = mc_samples
    while pool:
        feasible = [u for u in sorted(pool) if system.can_add(u, sys_state)]
        if not feasible:
            break
        gains = [(inst.delta(u, psi, mc_rng=mc_rng, **kwargs), u) for u in feasible]
        d_star, u_star = best_candidate(gains)
        if d_star <= GAIN_TOL:
            break
        if rng.random() < accept_prob:
            z = inst.observe_and_select(u_star, phi, psi)
            system.add(u_star, sys_state)
            selected.append(u_star)
            records.append((u_star, z, True))
        else:
            records.append((u_star, None, False))
        pool.discard(u_star)
    chosen = tuple(sorted(selected))
    return PolicyTrace(tuple(records), chosen, inst.realized_value(chosen, phi), psi)


def policy_average_value(policy, inst, trials: int, seed=0):
    """Monte-Carlo estimate of the expected policy value.

    policy(phi, coin_rng) -> PolicyTrace.  Each trial draws a fresh
    realization and a fresh coin stream from separate sub-streams of
    ``seed``, so comparisons across acceptance probabilities share state
    randomness.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if isinstance(seed, np.random.Generator):
        seed = int(seed.integers(2**63))
    vals = np.empty(trials)
    for t in range(trials):
        phi = inst.draw_realization(make_rng(seed, "state", t))
        trace = policy(phi, make_rng(seed, "coin", t))
        vals[t] = trace.value
    mean = float(vals.mean())
    stderr = float(vals.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return mean, stderr


def adaptive_ratio_bound(accept_prob: float, k: int) -> float:
    """(p*k + 1) / (p*(1-p)); minimized at p = 1/(1+sqrt(k+1))."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0.0 < accept_prob < 1.0:
        raise ValueError("the adaptive ratio is undefined at p in {0, 1}")
    return (accept_prob * k + 1.0) / (accept_prob * (1.0 - accept_prob))


def bernoulli_element_instance():
    """Single element, two equiprobable states, value 2*state when selected."""

    def utility(Y, states):
        return 2.0 * states[0] if 0 in Y else 0.0

    return FiniteAdaptiveInstance([[0.5, 0.5]], utility)


class CoverageUtility:
    """Stochastic weighted coverage with an overlap penalty.

    Element u in state z covers item set cover[u][z]; the utility is the
    covered weight minus penalty * total pairwise overlap weight between
    selected covers.  Submodular in the selection for every realization
    (coverage plus a negated supermodular term).
    """

    def __init__(self, item_weights, cover, penalty=0.0):
        self.item_weights = np.asarray(item_weights, dtype=np.float64)
        self.cover = [[frozenset(c) for c in per_state] for per_state in cover]
        self.penalty = float(penalty)

    def __call__(self, Y, states):
        covered = frozenset()
        sets = []
        for u in Y:
            c = self.cover[u][states[u]]
            covered |= c
            sets.append(c)
        total = float(sum(self.item_weights[i] for i in covered))
        if self.penalty:
            for a in range(len(sets)):
                for b in range(a + 1, len(sets)):
                    inter = sets[a] & sets[b]
                    total -= self.penalty * float(sum(self.item_weights[i] for i in inter))
        return total


def random_coverage_instance(rng, n=4, n_states=2, n_items=5, penalty=0.0):
    """Random stochastic-coverage instance (screen it before asserting
    adaptive submodularity or non-negativity when penalty > 0)."""
    rng = as_rng(rng)
    weights = rng.uniform(0.5, 1.5, size=n_items)
    cover = [
        [frozenset(i for i in range(n_items) if rng.random() < 0.5) for _ in range(n_states)]
        for _ in range(n)
    ]
    probs = []
    for _ in range(n):
        p = rng.uniform(0.2, 1.0, size=n_states)
        probs.append(p / p.sum())
    return FiniteAdaptiveInstance(probs, CoverageUtility(weights, cover, penalty))
