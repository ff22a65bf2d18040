import numpy as np
import pytest

from ksysmax.generate import random_explicit_system, random_symmetric_objective
from ksysmax.objectives import FacilityLocationObjective, ModularObjective, similarity_from_features
from ksysmax.rng import make_rng
from ksysmax.verify import exhaustive_max


class RatioInstance:
    def __init__(self, name, objective, system, optimum):
        self.name = name
        self.objective = objective
        self.system = system
        self.optimum = optimum
        self.k = system.declared_k


def _explicit_suite(count, monotone):
    out = []
    for i in range(count):
        n = 8 + i % 5
        k = i % 3 + 1
        system = random_explicit_system(make_rng(0xA11CE, i), n, k)
        if monotone:
            rng = make_rng(0xC0FEE, i)
            if i % 2 == 0:
                M = similarity_from_features(rng.normal(size=(n, 4)), 0.2)
                obj = ModularObjective(M.sum(axis=0))  # coverage term, diversity zeroed
            else:
                feats = np.abs(rng.normal(1.0, 0.7, size=(n, 5)))
                obj = FacilityLocationObjective(similarity_from_features(feats, 0.3))
        else:
            kind = "coverage-diversity" if i % 2 == 0 else "cut"
            obj = random_symmetric_objective(make_rng(0xB0B, i), n, kind)
        opt = exhaustive_max(obj, system)
        out.append(RatioInstance(f"inst{i}-n{n}-k{system.declared_k}", obj, system, opt.optimum_value))
    return out


@pytest.fixture(scope="session")
def ratio_suite():
    """50 small non-monotone instances on explicit k-systems, k in {1,2,3},
    with brute-forced optima."""
    return _explicit_suite(50, monotone=False)


@pytest.fixture(scope="session")
def monotone_suite():
    """50 monotone instances (diversity/redundancy terms zeroed)."""
    return _explicit_suite(50, monotone=True)
