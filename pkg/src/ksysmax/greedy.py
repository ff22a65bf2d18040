"""Randomized multi-solution greedy maximization.

``random_multi_greedy`` maintains ``num_solutions`` disjoint candidate
solutions; every step the feasible (element, solution) pair with the largest
marginal gain is considered, accepted with probability ``accept_prob``, and
the element leaves the pool either way.  The loop ends when no feasible pair
remains or the best gain is non-positive; the best candidate solution is
returned.

``accelerated_random_multi_greedy`` replaces the full scan with per-solution
priority lists of cached gains, re-checking only the top entries: the chosen
candidate is guaranteed within a 1/(1+epsilon) factor of the best feasible
gain for its solution.  Elements whose cached gain was refreshed more than
ceil(log_{1+eps}(num_solutions * rank_bound / eps)) times are dropped, and
the best feasible singleton is kept as a fallback answer.
"""

import heapq
import math
import time
from dataclasses import dataclass
from typing import Optional

from .common import GAIN_TOL, best_candidate, debug_asserts_enabled
from .report import CounterSnapshot, RunReport
from .rng import as_rng
from .systems import rank_upper_bound


@dataclass
class MultiGreedyConfig:
    num_solutions: int = 2
    accept_prob: float = 1.0
    epsilon: float = 0.0  # lazy-evaluation slack; used by the accelerated variant only
    seed: Optional[int] = None

    def __post_init__(self):
        if self.num_solutions < 1:
            raise ValueError("num_solutions must be >= 1")
        if not 0.0 < self.accept_prob <= 1.0:
            raise ValueError("accept_prob must be in (0, 1]")
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be >= 0")


def _debug_check_insertion(system, members, u):
    if not system._contains(set(members) | {u}):
        raise AssertionError(f"insertion of {u} violates the independence constraint")


def _debug_check_dominance(f, system, f_states, sys_states, pool, chosen_gain):
    # re-scan every feasible (element, solution) pair; none may beat the pick
    for i, (fst, sst) in enumerate(zip(f_states, sys_states)):
        for u in pool:
            if system._can_add(u, sst) and f._gain(u, fst) > chosen_gain + 1e-9:
                raise AssertionError(
                    f"greedy dominance violated: f({u}|S_{i}) beats the accepted gain"
                )


def random_multi_greedy(f, system, config: MultiGreedyConfig, rng=None) -> RunReport:
    """Plain variant: full feasibility + gain scan every step."""
    rng = as_rng(config.seed if rng is None else rng)
    debug = debug_asserts_enabled()
    snap = CounterSnapshot(f, system)
    t0 = time.perf_counter()

    L = config.num_solutions
    f_states = [f.new_state() for _ in range(L)]
    sys_states = [system.new_state() for _ in range(L)]
    solutions = [[] for _ in range(L)]
    # pool members known infeasible for solution i stay infeasible (S_i grows)
    alive = [list(range(f.n)) for _ in range(L)]
    in_pool = [True] * f.n
    pool_size = f.n
    t = 1

    while pool_size > 0:
        picks = []
        for i in range(L):
            feas = [u for u in alive[i] if in_pool[u] and system.can_add(u, sys_states[i])]
            alive[i] = feas
            if not feas:
                continue
            g = f.gains(feas, f_states[i])
            j = int(g.argmax())  # feas ascending, so ties resolve to lowest id
            picks.append((float(g[j]), feas[j], i))
        if not picks:
            break
        gain, u_t, i_t = best_candidate(picks)
        if gain <= GAIN_TOL:
            break
        if debug:
            _debug_check_dominance(
                f, system, f_states, sys_states, [u for u in range(f.n) if in_pool[u]], gain
            )
        if rng.random() < config.accept_prob:
            if debug:
                _debug_check_insertion(system, solutions[i_t], u_t)
            f.add(u_t, f_states[i_t])
            system.add(u_t, sys_states[i_t])
            solutions[i_t].append(u_t)
        in_pool[u_t] = False
        pool_size -= 1
        t += 1

    values = [f.state_value(st) for st in f_states]
    best_i = max(range(L), key=lambda i: (values[i], -i))
    report = RunReport(
        algorithm="random_multi_greedy",
        solution=tuple(sorted(solutions[best_i])),
        value=values[best_i],
        value_queries=snap.value_queries,
        independence_queries=snap.independence_queries,
        steps=t - 1,
        seed=config.seed,
        wall_ms=(time.perf_counter() - t0) * 1e3,
        params={"num_solutions": L, "accept_prob": config.accept_prob},
    )
    if debug and report.solution and not system._contains(set(report.solution)):
        raise AssertionError("returned solution is not independent")
    return report


def standard_greedy(f, system) -> RunReport:
    """Deterministic single-solution greedy (num_solutions=1, accept_prob=1)."""
    report = random_multi_greedy(f, system, MultiGreedyConfig(1, 1.0))
    report.algorithm = "standard_greedy"
    return report


class _LazyList:
    """Priority list of cached marginal gains for one candidate solution."""

    __slots__ = ("heap", "weight", "updates", "version", "alive")

    def __init__(self, elements, weights):
        self.weight = {u: float(weights[u]) for u in elements}
        self.updates = {u: 0 for u in elements}
        self.version = {u: 0 for u in elements}
        self.alive = set(elements)
        self.heap = [(-self.weight[u], u) for u in elements]
        heapq.heapify(self.heap)


def accelerated_random_multi_greedy(f, system, config: MultiGreedyConfig, rng=None) -> RunReport:
    """Lazy-evaluation variant; requires config.epsilon > 0."""
    if config.epsilon <= 0.0:
        raise ValueError("the accelerated variant requires epsilon > 0")
    rng = as_rng(config.seed if rng is None else rng)
    debug = debug_asserts_enabled()
    snap = CounterSnapshot(f, system)
    t0 = time.perf_counter()

    n = f.n
    L = config.num_solutions
    eps = config.epsilon
    r_hat = max(1, rank_upper_bound(system))
    cap = max(0, math.ceil(math.log(max(L * r_hat / eps, 1.0 + 1e-9)) / math.log(1.0 + eps)))

    f_states = [f.new_state() for _ in range(L)]
    sys_states = [system.new_state() for _ in range(L)]
    solutions = [[] for _ in range(L)]
    versions = [0] * L

    # one shared evaluation of all singletons seeds every priority list and
    # the fallback singleton answer
    empty_f = f.new_state()
    empty_sys = system.new_state()
    singleton_gain = f.gains(list(range(n)), empty_f) if n else []
    feasible_singletons = [u for u in range(n) if system.can_add(u, empty_sys)]
    base_value = f.state_value(empty_f)

    start = [u for u in feasible_singletons if singleton_gain[u] > GAIN_TOL]
    lists = [_LazyList(start, singleton_gain) for _ in range(L)]
    candidate = [None] * L

    def refill(i):
        lst = lists[i]
        while lst.heap:
            negw, u = heapq.heappop(lst.heap)
            w = -negw
            if u not in lst.alive or w != lst.weight[u]:
                continue  # stale heap entry
            if w <= GAIN_TOL:
                # weights only decrease; the whole list is exhausted
                lst.alive.clear()
                return None
            if lst.version[u] == versions[i]:
                return u  # weight already exact for the current solution
            if not system.can_add(u, sys_states[i]):
                lst.alive.discard(u)
                continue
            old = w
            lst.updates[u] += 1
            new = f.gain(u, f_states[i])
            lst.weight[u] = new
            lst.version[u] = versions[i]
            if new > GAIN_TOL and new * (1.0 + eps) >= old:
                return u
            if lst.updates[u] <= cap:
                heapq.heappush(lst.heap, (-new, u))
            else:
                lst.alive.discard(u)  # too many refreshes; dropped for good
        return None

    u_prev = None
    t = 1
    initialized = False
    while True:
        if not initialized:
            refresh = range(L)
            initialized = True
        else:
            refresh = [i for i in range(L) if candidate[i] is None or candidate[i] == u_prev]
        for i in refresh:
            candidate[i] = refill(i)
        picks = [
            (lists[i].weight[candidate[i]], candidate[i], i)
            for i in range(L)
            if candidate[i] is not None
        ]
        if not picks:
            break
        gain, u_t, i_t = best_candidate(picks)
        if debug:
            _debug_check_lazy_soundness(f, system, lists[i_t], f_states[i_t], sys_states[i_t], gain, eps)
        if rng.random() < config.accept_prob:
            if debug:
                _debug_check_insertion(system, solutions[i_t], u_t)
            f.add(u_t, f_states[i_t])
            system.add(u_t, sys_states[i_t])
            solutions[i_t].append(u_t)
            versions[i_t] += 1
        for lst in lists:
            lst.alive.discard(u_t)
        u_prev = u_t
        t += 1

    # fallback: the best feasible singleton
    best_u = None
    for u in feasible_singletons:
        if best_u is None or singleton_gain[u] > singleton_gain[best_u]:
            best_u = u
    options = []
    if best_u is not None:
        options.append((base_value + float(singleton_gain[best_u]), 0, (best_u,)))
    else:
        options.append((base_value, 0, ()))
    for i in range(L):
        options.append((f.state_value(f_states[i]), i + 1, tuple(sorted(solutions[i]))))
    best_value, _, best_solution = max(options, key=lambda o: (o[0], -o[1]))

    return RunReport(
        algorithm="accelerated_random_multi_greedy",
        solution=best_solution,
        value=best_value,
        value_queries=snap.value_queries,
        independence_queries=snap.independence_queries,
        steps=t - 1,
        seed=config.seed,
        wall_ms=(time.perf_counter() - t0) * 1e3,
        params={"num_solutions": L, "accept_prob": config.accept_prob, "epsilon": eps},
    )


def _debug_check_lazy_soundness(f, system, lst, f_state, sys_state, chosen_gain, eps):
    # every non-evicted feasible candidate must be within (1+eps) of the pick
    for u in lst.alive:
        if u in f.state_members(f_state):
            continue
        if system._can_add(u, sys_state) and f._gain(u, f_state) > (1.0 + eps) * chosen_gain + 1e-9:
            raise AssertionError("lazy-queue soundness violated")


def usm_double_greedy(f, V, rng) -> set:
    """Randomized double greedy for unconstrained maximization over V.

    Walks the elements in id order keeping a growing set X and a shrinking
    set Y; u joins X with probability max(a,0)/(max(a,0)+max(b,0)) where
    a = f(u|X) and b = f(Y-u) - f(Y), and with probability 1 when both clamp
    to zero.  E[f(X)] is at least half the unconstrained optimum over V.
    """
    rng = as_rng(rng)
    V = sorted(V)
    X = set()
    Y = set(V)
    fX = f.value(X)
    fY = f.value(Y)
    for u in V:
        a = f.value(X | {u}) - fX
        b = f.value(Y - {u}) - fY
        a_pos = max(a, 0.0)
        b_pos = max(b, 0.0)
        threshold = 1.0 if a_pos + b_pos == 0.0 else a_pos / (a_pos + b_pos)
        if rng.random() < threshold:
            X.add(u)
            fX += a
        else:
            Y.discard(u)
            fY += b
    return X


def repeated_greedy(f, system, num_solutions: int, rng=None) -> RunReport:
    """Baseline: sequential greedy passes on disjoint pools, each refined by
    unconstrained double greedy; best of all candidates wins."""
    if num_solutions < 1:
        raise ValueError("num_solutions must be >= 1")
    rng = as_rng(rng)
    snap = CounterSnapshot(f, system)
    t0 = time.perf_counter()

    pool = set(range(f.n))
    best_set, best_val = frozenset(), f.value(())
    steps = 0
    for _ in range(num_solutions):
        fst = f.new_state()
        sst = system.new_state()
        chosen = []
        alive = sorted(pool)
        while True:
            feas = [u for u in alive if system.can_add(u, sst)]
            alive = feas
            if not feas:
                break
            g = f.gains(feas, fst)
            j = int(g.argmax())
            if g[j] <= GAIN_TOL:
                break
            u = feas[j]
            f.add(u, fst)
            system.add(u, sst)
            chosen.append(u)
            alive.remove(u)
            steps += 1
        pool -= set(chosen)
        if f.state_value(fst) > best_val:
            best_val = f.state_value(fst)
            best_set = frozenset(chosen)
        refined = usm_double_greedy(f, chosen, rng)
        v = f.value(refined)
        if v > best_val:
            best_val = v
            best_set = frozenset(refined)
        if not chosen:
            break

    return RunReport(
        algorithm="repeated_greedy",
        solution=tuple(sorted(best_set)),
        value=float(best_val),
        value_queries=snap.value_queries,
        independence_queries=snap.independence_queries,
        steps=steps,
        wall_ms=(time.perf_counter() - t0) * 1e3,
        params={"num_solutions": num_solutions},
    )


def ratio_bound(num_solutions: int, accept_prob: float, k: int, variant: str = "plain", epsilon: float = 0.0) -> float:
    """Proven approximation-ratio value for the multi-greedy family.

    plain: num_solutions * (k + num_solutions/accept_prob - 1) /
    (num_solutions - accept_prob), valid for num_solutions >= 2;
    accelerated: (1+epsilon) times the plain bound; monotone: k + 1 for the
    deterministic single-solution specialization.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if variant == "monotone":
        if num_solutions != 1 or accept_prob != 1.0:
            raise ValueError("the monotone bound applies to num_solutions=1, accept_prob=1")
        return float(k + 1)
    if variant not in ("plain", "accelerated"):
        raise ValueError(f"unknown variant {variant!r}")
    if num_solutions < 2:
        raise ValueError("the randomized bound requires num_solutions >= 2")
    if not 0.0 < accept_prob <= 1.0:
        raise ValueError("accept_prob must be in (0, 1]")
    if num_solutions <= accept_prob:
        raise ValueError("num_solutions must exceed accept_prob")
    base = num_solutions * (k + num_solutions / accept_prob - 1.0) / (num_solutions - accept_prob)
    if variant == "accelerated":
        if epsilon <= 0:
            raise ValueError("the accelerated bound requires epsilon > 0")
        return (1.0 + epsilon) * base
    return base
