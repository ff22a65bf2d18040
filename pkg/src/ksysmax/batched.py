"""Low-adaptivity batched randomized greedy.

``batched_random_greedy`` keeps a single solution S and sweeps a threshold
tau geometrically down from the best singleton gain.  Per threshold it
repeatedly draws a random maximal addable sequence from the candidate set C
(``rand_seq``), binary-searches the shortest prefix whose commitment drops
at least a 1 - 1/(1+epsilon) fraction of C, marks that prefix considered,
and commits it with probability ``accept_prob``.  Oracle calls are issued in
synchronized batches of mutually independent queries and a RoundLedger
counts those batches, so the adaptivity of a run is measured even though
execution is sequential.
"""

import time
from typing import Optional

from .common import GAIN_TOL, debug_asserts_enabled
from .report import CounterSnapshot, RoundLedger, RunReport
from .rng import as_rng


def _rand_seq(system, work_state, C, rng, ledger):
    """Random maximal addable sequence from C, mutating work_state.

    Returns the ordered accepted elements.  Precondition: every element of C
    is individually addable to the cached solution.  Each permutation costs
    one independence round for the prefix walk and one for the re-filter.
    """
    A = []
    C = sorted(C)
    while C:
        perm = [C[j] for j in rng.permutation(len(C))]
        queries = 0
        prefix_len = 0
        for z in perm:
            queries += 1
            if system.can_add(z, work_state):
                system.add(z, work_state)
                A.append(z)
                prefix_len += 1
            else:
                break
        ledger.independence_round(queries)
        # drop the accepted prefix and the element whose probe just failed
        rest = perm[prefix_len + 1 :]
        C = [u for u in rest if system.can_add(u, work_state)]
        ledger.independence_round(len(rest))
    return A


def rand_seq(system, S, C, rng, ledger: Optional[RoundLedger] = None):
    """Public wrapper over a fresh state for the cached solution S."""
    rng = as_rng(rng)
    ledger = ledger if ledger is not None else RoundLedger()
    state = system.new_state()
    if debug_asserts_enabled():
        if not system._contains(S):
            raise AssertionError("rand_seq precondition: S must be independent")
        for u in C:
            if not system._contains(set(S) | {u}):
                raise AssertionError("rand_seq precondition: every candidate must be addable")
    for u in S:
        system.add(u, state)
    A = _rand_seq(system, state, set(C) - set(S), rng, ledger)
    if debug_asserts_enabled():
        base = set(S) | set(A)
        for u in set(C) - base:
            if system._contains(base | {u}):
                raise AssertionError("rand_seq postcondition: result must be maximal in C")
    return A


def survivor_count(f, system, S, prefix, C, tau, ledger: Optional[RoundLedger] = None):
    """(count, survivors): elements of C still addable after the prefix with
    gain at least tau against S + prefix.

    One independence round plus one value round when batched.  Prefix members
    never survive: their gain against a set containing them is 0, below any
    positive tau.
    """
    ledger = ledger if ledger is not None else RoundLedger()
    fst = f.new_state()
    sst = system.new_state()
    for u in list(S) + list(prefix):
        f.add(u, fst)
        system.add(u, sst)
    base = set(S) | set(prefix)
    cands = [u for u in sorted(set(C)) if u not in base]
    feas = [u for u in cands if system.can_add(u, sst)]
    ledger.independence_round(len(cands))
    g = f.gains(feas, fst)
    ledger.value_round(len(feas))
    survivors = {u for u, gu in zip(feas, g) if gu >= tau}
    return len(survivors), survivors


def batched_random_greedy(
    f,
    system,
    accept_prob: float,
    epsilon: float,
    rng=None,
    seed: Optional[int] = None,
) -> RunReport:
    if not 0.0 < accept_prob <= 1.0:
        raise ValueError("accept_prob must be in (0, 1]")
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    rng = as_rng(seed if rng is None else rng)
    debug = debug_asserts_enabled()
    snap = CounterSnapshot(f, system)
    ledger = RoundLedger()
    t0 = time.perf_counter()
    n = f.n

    def report(solution):
        value = f.value(solution)
        ledger.value_round(1)
        return RunReport(
            algorithm="batched_random_greedy",
            solution=tuple(sorted(solution)),
            value=value,
            value_queries=snap.value_queries,
            independence_queries=snap.independence_queries,
            steps=len(solution),
            seed=seed,
            wall_ms=(time.perf_counter() - t0) * 1e3,
            ledger=ledger,
            params={"accept_prob": accept_prob, "epsilon": epsilon},
        )

    # one independence batch: feasible singletons (infeasible ones stay so)
    empty_sys = system.new_state()
    feasible = [u for u in range(n) if system.can_add(u, empty_sys)]
    ledger.independence_round(n)

    # one value batch: every singleton gain; doubles as the first gain cache
    f_state = f.new_state()
    singleton_gains = f.gains(list(range(n)), f_state) if n else []
    ledger.value_round(n)
    tau_max = float(max(singleton_gains)) if n else 0.0
    if tau_max <= GAIN_TOL:
        # a descending sweep would need tau_min = eps*tau_max/r = 0
        return report(frozenset())

    # rank bound from a random maximal independent set: any base of the
    # ground set is within factor declared_k of the rank, and rand_seq finds
    # one in few independence rounds
    maximal = _rand_seq(system, system.copy_state(empty_sys), set(feasible), rng, ledger)
    r_hat = max(1, min(n, system.declared_k * len(maximal)))
    tau_min = epsilon * tau_max / r_hat

    S = []
    sys_state = system.new_state()
    considered = set()
    # cached gains are exact at cache_version and upper bounds afterwards
    # (submodularity), which lets provably-empty thresholds skip all queries
    alive = set(feasible)
    cached = {u: float(singleton_gains[u]) for u in alive}
    cache_version = 0

    tau = tau_max
    while tau >= tau_min:
        pool = alive - considered
        stale_max = max((cached[u] for u in pool), default=0.0)
        if stale_max < tau:
            C = set()
        else:
            if cache_version != len(S):
                cands = sorted(pool)
                feas = [u for u in cands if system.can_add(u, sys_state)]
                ledger.independence_round(len(cands))
                g = f.gains(feas, f_state)
                ledger.value_round(len(feas))
                alive = set(feas)  # infeasible and considered elements drop for good
                cached = {u: float(gu) for u, gu in zip(feas, g)}
                cache_version = len(S)
                pool = alive
            C = {u for u in pool if cached[u] >= tau}

        while C:
            seq = _rand_seq(system, system.copy_state(sys_state), C, rng, ledger)
            d = len(seq)
            size_c = len(C)
            # j is at most i0: prefix members leave C, so committing i0
            # elements alone already drops C below size_c/(1+eps)
            i0 = int(size_c * epsilon / (1.0 + epsilon)) + 1
            hi = min(d, i0)

            memo_states = {0: (f_state, sys_state)}
            memo_surv = {}

            def prefix_states(i, seq=seq, memo_states=memo_states):
                j = max(m for m in memo_states if m <= i)
                fst, sst = memo_states[j]
                if j < i:
                    fst = f.copy_state(fst)
                    sst = system.copy_state(sst)
                    for u in seq[j:i]:
                        f.add(u, fst)
                        system.add(u, sst)
                    memo_states[i] = (fst, sst)
                return memo_states[i]

            def survivors(i, seq=seq, C=C, tau=tau, memo_surv=memo_surv):
                if i in memo_surv:
                    return memo_surv[i]
                fst, sst = prefix_states(i)
                prefix = set(seq[:i])
                cands = [u for u in C if u not in prefix]
                feas = [u for u in cands if system.can_add(u, sst)]
                ledger.independence_round(len(cands))
                g = f.gains(feas, fst)
                ledger.value_round(len(feas))
                memo_surv[i] = {u: float(gu) for u, gu in zip(feas, g) if gu >= tau}
                return memo_surv[i]

            lo = 1
            while lo < hi:
                mid = (lo + hi) // 2
                if len(survivors(mid)) * (1.0 + epsilon) < size_c:
                    hi = mid
                else:
                    lo = mid + 1
            j = lo
            prefix = seq[:j]
            considered.update(prefix)

            if rng.random() < accept_prob:
                surv = survivors(j)
                if debug:
                    if not system._contains(set(S) | set(prefix)):
                        raise AssertionError("committed prefix is not independent")
                    if len(surv) * (1.0 + epsilon) >= size_c:
                        raise AssertionError("committed prefix does not shrink C geometrically")
                f_state, sys_state = prefix_states(j)
                S.extend(prefix)
                C = set(surv)
                cached.update(surv)  # exact at the new S, upper bounds later
            else:
                C = C - set(prefix)

        if debug:
            _debug_check_threshold_exhausted(f, system, f_state, sys_state, alive - considered, tau)
        tau /= 1.0 + epsilon

    return report(frozenset(S))


def _debug_check_threshold_exhausted(f, system, f_state, sys_state, pool, tau):
    for u in pool:
        if system._can_add(u, sys_state) and f._gain(u, f_state) >= tau:
            raise AssertionError(
                f"threshold {tau} finished but element {u} is still addable with gain >= tau"
            )
