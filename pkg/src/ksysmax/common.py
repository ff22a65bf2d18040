"""Shared constants and debug-mode switches."""

import os

# Gains with |g| <= GAIN_TOL are treated as non-positive so greedy loops stop
# cleanly under float noise.
GAIN_TOL = 1e-12


def debug_asserts_enabled() -> bool:
    """True when KSYS_DEBUG_ASSERT=1: algorithms re-scan their invariants."""
    return os.environ.get("KSYS_DEBUG_ASSERT", "") == "1"


def best_candidate(items):
    """Deterministic argmax over (gain, element, *rest) tuples.

    Highest gain wins; ties broken by lowest element id, then by the
    remaining tuple fields (ascending), e.g. lowest solution index.
    """
    best = None
    for it in items:
        if best is None:
            best = it
            continue
        if it[0] > best[0]:
            best = it
        elif it[0] == best[0] and it[1:] < best[1:]:
            best = it
    return best
