"""Modified Bessel function of the first kind at the fixed argument 2.

The margin-of-victory likelihood only ever needs I_k(2) for integer k, where
the power series

    I_k(2) = sum_{m >= 0} 1 / (m! (m + |k|)!)

converges in a couple of dozen terms. Working with the series scaled by
``|k|!`` keeps everything in range even when ``I_k(2)`` itself underflows.
"""

from __future__ import annotations

import math
from functools import lru_cache

_REL_TOL = 1e-18
_MAX_TERMS = 200


@lru_cache(maxsize=4096)
def log_bessel_i2(k: int) -> float:
    """Natural log of I_k(2) for integer order ``k``."""
    k = abs(int(k))
    term = 1.0
    total = 1.0
    for m in range(1, _MAX_TERMS):
        term /= m * (m + k)
        total += term
        if term < _REL_TOL * total:
            break
    return math.log(total) - math.lgamma(k + 1)


def bessel_i2(k: int) -> float:
    return math.exp(log_bessel_i2(k))
