"""Run reports and adaptive-round accounting."""

from dataclasses import dataclass, field
from typing import Optional


@dataclass
class RoundLedger:
    """Counts synchronized batches of mutually independent oracle queries.

    A round is one such batch, counted even under sequential execution so
    the adaptivity of an algorithm is measurable without real parallelism.
    Rounds are only incremented for non-empty batches, so rounds <= queries.
    """

    value_query_rounds: int = 0
    independence_query_rounds: int = 0
    total_value_queries: int = 0
    total_independence_queries: int = 0

    def value_round(self, n_queries: int) -> None:
        if n_queries > 0:
            self.value_query_rounds += 1
            self.total_value_queries += n_queries

    def independence_round(self, n_queries: int) -> None:
        if n_queries > 0:
            self.independence_query_rounds += 1
            self.total_independence_queries += n_queries

    def to_dict(self):
        return {
            "value_query_rounds": self.value_query_rounds,
            "independence_query_rounds": self.independence_query_rounds,
            "total_value_queries": self.total_value_queries,
            "total_independence_queries": self.total_independence_queries,
        }


@dataclass
class RunReport:
    """Outcome of one algorithm run.

    value is f(solution) for the returned solution; value_queries and
    independence_queries are the oracle-call deltas attributable to the run.
    steps counts considered elements (accepted or coin-rejected).
    """

    algorithm: str
    solution: tuple
    value: float
    value_queries: int
    independence_queries: int
    steps: int
    seed: Optional[int] = None
    wall_ms: Optional[float] = None
    ledger: Optional[RoundLedger] = None
    params: dict = field(default_factory=dict)

    def to_dict(self, with_timing=False):
        d = {
            "algorithm": self.algorithm,
            "solution": sorted(int(u) for u in self.solution),
            "value": float(self.value),
            "value_queries": int(self.value_queries),
            "independence_queries": int(self.independence_queries),
            "steps": int(self.steps),
            "seed": self.seed,
            "wall_ms": self.wall_ms if with_timing else None,
        }
        if self.ledger is not None:
            d["rounds"] = self.ledger.to_dict()
        if self.params:
            d["params"] = self.params
        return d


class CounterSnapshot:
    """Delta tracker for the oracle query counters of one run."""

    def __init__(self, objective, system):
        self.objective = objective
        self.system = system
        self._v0 = objective.value_query_count
        self._i0 = system.independence_query_count

    @property
    def value_queries(self):
        return self.objective.value_query_count - self._v0

    @property
    def independence_queries(self):
        return self.system.independence_query_count - self._i0
