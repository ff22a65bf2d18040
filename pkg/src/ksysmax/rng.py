"""Counter-based random streams.

Every run derives its generator from a seed plus named stream keys, so
experiments are replayable and concurrent trials never share a stream.
Philox is counter-based: streams with distinct keys are independent.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def _key_ints(keys):
    out = []
    for k in keys:
        if isinstance(k, (tuple, list)):
            out.extend(_key_ints(k))
        elif isinstance(k, str):
            # stable 64-bit hash of stream labels (hash() is salted per process)
            h = 1469598103934665603
            for b in k.encode():
                h = ((h ^ b) * 1099511628211) & _MASK64
            out.append(h)
        elif k is None:
            out.append(0)
        else:
            out.append(int(k) & _MASK64)
    return out


def make_rng(*keys) -> np.random.Generator:
    """Generator seeded by an arbitrary tuple of ints / stream labels."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(_key_ints(keys))))


def as_rng(rng_or_seed) -> np.random.Generator:
    if isinstance(rng_or_seed, np.random.Generator):
        return rng_or_seed
    return make_rng(0 if rng_or_seed is None else rng_or_seed)
