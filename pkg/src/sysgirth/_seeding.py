from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator keyed by a 64-bit seed.

    Distinct ``stream`` values give independent generators, so work split
    into numbered pieces (tries, batches, samples) stays reproducible no
    matter how it is scheduled.
    """
    if not 0 <= seed <= _MASK:
        raise ValueError(f"seed {seed} is not a 64-bit unsigned integer")
    return np.random.Generator(np.random.Philox(key=seed | ((stream & _MASK) << 64)))
