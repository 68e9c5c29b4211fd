"""Monotone geometric bisection shared by the outer norm infima."""

from __future__ import annotations

import math
from typing import Callable

from ._kernels import MAXIT, RTOL, TINY

__all__ = ["geometric_bisect"]


def geometric_bisect(feasible: Callable[[float], bool], hi: float,
                     rtol: float = RTOL, maxit: int = MAXIT) -> float:
    """inf{x > 0 : feasible(x)} for a monotone predicate (False low, True high).

    ``hi`` only seeds the bracket; growth and shrink loops repair a bad seed.
    Returns inf when no feasible point is found and 0 when every positive
    point is feasible.
    """
    if not hi > 0.0:
        raise ValueError("bracket seed must be positive")
    grow = 0
    while not feasible(hi) and grow < 400:
        hi *= 4.0
        grow += 1
    if not feasible(hi):
        return math.inf
    lo = hi / 16.0
    broke = False
    while lo >= TINY:
        if not feasible(lo):
            broke = True
            break
        hi = lo
        lo /= 16.0
    if not broke:
        return 0.0
    it = 0
    while hi - lo > rtol * hi and it < maxit:
        mid = math.sqrt(lo) * math.sqrt(hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
        it += 1
    return hi
