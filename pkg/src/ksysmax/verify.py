"""Brute-force and statistical oracles.

These ground the test suite: exhaustive constrained maxima, exhaustive
optimal adaptive policies (tiny instances only), empirical measurement of
the k-system parameter, and Monte-Carlo approximation-ratio checks.  Paths
here stay independent of the algorithm implementations they judge; maxima
are always computed through the stateless value oracle.
"""

import math
from dataclasses import dataclass

import numpy as np

from .rng import as_rng


@dataclass
class ExhaustiveResult:
    optimum: frozenset
    optimum_value: float
    independent_sets: int


def exhaustive_max(f, system, limit: int = 20) -> ExhaustiveResult:
    """Exact optimum of f over the independence family, n <= limit.

    Depth-first subset enumeration; an infeasible set prunes all supersets
    (down-closedness). The empty set is always a candidate.
    """
    n = system.n
    if n > limit:
        raise ValueError(f"exhaustive search refused: n={n} exceeds limit {limit}")
    best_set = frozenset()
    best_val = f.value(())
    count = 1

    stack = [((), 0)]
    while stack:
        S, start = stack.pop()
        for u in range(start, n):
            cand = S + (u,)
            if not system.is_independent(cand):
                continue
            v = f.value(cand)
            count += 1
            if v > best_val:
                best_val = v
                best_set = frozenset(cand)
            stack.append((cand, u + 1))
    return ExhaustiveResult(best_set, float(best_val), count)


def measured_k_from_masks(n: int, family_masks) -> int:
    """Smallest integer k with |X1| <= k * |X2| over all base pairs of all Y.

    Enumerates, for every subset Y of the ground set, the maximal independent
    subsets of Y; O(3^n) submask walks, so n <= 16.
    """
    if n > 16:
        raise ValueError(f"measured_k refused: n={n} exceeds limit 16")
    family = set(int(m) for m in family_masks)
    if 0 not in family:
        raise ValueError("family must contain the empty set")
    # extension mask: elements u outside X with X + {u} still independent
    ext = {}
    for X in family:
        e = 0
        for u in range(n):
            bit = 1 << u
            if not X & bit and (X | bit) in family:
                e |= bit
        ext[X] = e

    worst = 1
    for Y in range(1 << n):
        max_b = -1
        min_b = n + 1
        # walk submasks of Y that are independent
        X = Y
        while True:
            if X in family and not (Y & ext[X]):
                size = X.bit_count()
                max_b = max(max_b, size)
                min_b = min(min_b, size)
            if X == 0:
                break
            X = (X - 1) & Y
        if max_b > 0:
            worst = max(worst, -(-max_b // min_b))
    return worst


def measured_k(system) -> int:
    """Empirical k of an explicitly-enumerated system."""
    return measured_k_from_masks(system.n, system.family_masks)


@dataclass
class RatioCheckReport:
    algorithm: str
    trials: int
    mean: float
    stderr: float
    bound: float
    target: float
    passed: bool

    def to_dict(self):
        return {
            "algorithm": self.algorithm,
            "trials": self.trials,
            "mean": self.mean,
            "stderr": self.stderr,
            "bound": self.bound,
            "target": self.target,
            "passed": self.passed,
        }


def monte_carlo_ratio_check(run, optimum_value, bound, trials, rng_or_seed, algorithm="") -> RatioCheckReport:
    """mean over fresh-seeded runs >= optimum/bound - 3*stderr.

    ``run`` maps a Generator to the objective value of one run. With 3-sigma
    acceptance the false-failure rate is below 0.3% per check.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if bound <= 0:
        raise ValueError("bound must be positive")
    rng = as_rng(rng_or_seed)
    vals = np.array([run(np.random.Generator(np.random.Philox(s))) for s in rng.bit_generator.seed_seq.spawn(trials)])
    mean = float(vals.mean())
    stderr = float(vals.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    target = float(optimum_value) / float(bound)
    return RatioCheckReport(algorithm, trials, mean, stderr, float(bound), target, mean >= target - 3 * stderr)


def submodularity_check(f, n, samples, rng_or_seed, tol=1e-9) -> bool:
    """Spot check f(X)+f(Y) >= f(X u Y)+f(X n Y) and diminishing returns."""
    rng = as_rng(rng_or_seed)
    ids = np.arange(n)
    for _ in range(samples // 2):
        X = frozenset(ids[rng.random(n) < 0.5])
        Y = frozenset(ids[rng.random(n) < 0.5])
        if f.value(X) + f.value(Y) < f.value(X | Y) + f.value(X & Y) - tol:
            return False
    for _ in range(samples - samples // 2):
        Y = frozenset(ids[rng.random(n) < 0.5])
        if len(Y) == n:
            continue
        x = int(rng.choice(list(set(ids) - Y)))
        X = frozenset(u for u in Y if rng.random() < 0.5)
        gy = f.value(Y | {x}) - f.value(Y)
        gx = f.value(X | {x}) - f.value(X)
        if gy > gx + tol:
            return False
    return True


def down_closed_check(system, samples, rng_or_seed) -> bool:
    """Sample nested pairs X subset of Y with Y independent; X must be too.

    Dependent draws of Y are shrunk element by element until independent, so
    borderline sets get exercised.  Also asserts the empty set is a member.
    """
    rng = as_rng(rng_or_seed)
    if not system.is_independent(()):
        return False
    n = system.n
    for _ in range(samples):
        Y = set(np.arange(n)[rng.random(n) < 0.5])
        while Y and not system.is_independent(Y):
            Y.discard(int(rng.choice(sorted(Y))))
        X = {u for u in Y if rng.random() < 0.5}
        if not system.is_independent(X):
            return False
    return True


def _realizations(probs):
    """All (state tuple, probability) pairs of an independent finite prior."""
    combos = [((), 1.0)]
    for p in probs:
        combos = [(s + (z,), q * pz) for s, q in combos for z, pz in enumerate(p) if pz > 0]
    return combos


def pointwise_submodular_check(inst, tol=1e-9) -> bool:
    """Exhaustive: f(., phi) submodular and non-negative for every positive-
    probability realization. Tiny instances only (O(4^n) per realization)."""
    n = inst.n
    subsets = [frozenset(u for u in range(n) if m >> u & 1) for m in range(1 << n)]
    for phi, _prob in _realizations(inst.state_probs):
        states = dict(enumerate(phi))
        val = {S: inst.utility(S, states) for S in subsets}
        if any(v < -tol for v in val.values()):
            return False
        for X in subsets:
            for Y in subsets:
                if X <= Y:
                    for x in range(n):
                        if x in Y:
                            continue
                        if val[Y | {x}] - val[Y] > val[X | {x}] - val[X] + tol:
                            return False
    return True


def _exact_delta(inst, u, psi):
    dom = frozenset(psi)
    base = inst.utility(dom, psi)
    total = 0.0
    for z, pz in enumerate(inst.state_probs[u]):
        if pz == 0:
            continue
        states = dict(psi)
        states[u] = z
        total += pz * (inst.utility(dom | {u}, states) - base)
    return total


def adaptive_submodular_check(inst, tol=1e-9) -> bool:
    """Exhaustive: the expected gain of u never increases when the partial
    realization grows. Enumerates every nested pair of partial realizations."""
    n = inst.n
    partials = [{}]
    for u in range(n):
        extended = []
        for psi in partials:
            for z, pz in enumerate(inst.state_probs[u]):
                if pz > 0:
                    psi2 = dict(psi)
                    psi2[u] = z
                    extended.append(psi2)
        partials = partials + extended
    for psi in partials:
        dom = frozenset(psi)
        for psi2 in partials:
            if not (dom <= frozenset(psi2) and all(psi2[u] == psi[u] for u in dom)):
                continue
            for u in range(n):
                if u in psi2:
                    continue
                if _exact_delta(inst, u, psi2) > _exact_delta(inst, u, psi) + tol:
                    return False
    return True


def exhaustive_optimal_policy(inst, system, n_limit: int = 5, z_limit: int = 3) -> float:
    """Expected value of the best feasible adaptive policy (exact DP).

    V(psi) = max(stop value, max over feasible unselected u of the
    state-expectation of V(psi + (u, z))).  Requires a finite-state instance
    with independent per-element priors whose utility reads only the states
    of selected elements.  Exponential: n <= n_limit, |Z| <= z_limit.
    """
    n = inst.n
    probs = inst.state_probs
    if n > n_limit:
        raise ValueError(f"policy DP refused: n={n} exceeds limit {n_limit}")
    if any(len(p) > z_limit for p in probs):
        raise ValueError(f"policy DP refused: more than {z_limit} states per element")

    memo = {}

    def value_of(psi):
        key = frozenset(psi.items())
        if key in memo:
            return memo[key]
        dom = frozenset(psi)
        best = inst.utility(dom, psi)
        for u in range(n):
            if u in dom:
                continue
            if not system.is_independent(dom | {u}):
                continue
            exp = 0.0
            for z, pz in enumerate(probs[u]):
                if pz == 0:
                    continue
                psi2 = dict(psi)
                psi2[u] = z
                exp += pz * value_of(psi2)
            best = max(best, exp)
        memo[key] = best
        return best

    return float(value_of({}))
