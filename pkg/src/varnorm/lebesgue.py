"""The modular and Luxemburg norm of a variable-exponent Lebesgue space.

The modular of f is sum_i m_i * phi_{p_i}(|f_i|) where phi_p(t) = t^p for
finite p and the 0/inf indicator of t <= 1 for p = inf.  The Luxemburg norm
is the smallest lambda scaling f into the modular unit ball; cells with
p = inf enter as the hard cap |f| <= lambda instead of as modular terms.
"""

from __future__ import annotations

import math

from . import _kernels as K
from .core import ExponentField, SampledFunction, check_same_grid

__all__ = ["phi", "modular", "luxemburg_norm"]


def phi(p: float, t: float) -> float:
    """phi_p(t): t^p for finite p, else the {0, inf} indicator of t > 1."""
    if not p > 0.0:
        raise ValueError("exponent must be positive")
    if t < 0.0:
        raise ValueError("phi takes nonnegative arguments")
    if math.isinf(p):
        return 0.0 if t <= 1.0 else math.inf
    if t == 0.0:
        return 0.0
    try:
        return t ** p
    except OverflowError:
        return math.inf


def modular(f: SampledFunction, p: ExponentField, scale: float = 1.0) -> float:
    """sum_i m_i * phi_{p_i}(|f_i| / scale); inf when an inf-cell breaches its cap."""
    check_same_grid(f, p)
    if scale <= 0.0:
        raise ValueError("scale must be positive")
    return float(K.phi_sum(f.grid.measures, p.values, f.abs_values, scale))


def luxemburg_norm(f: SampledFunction, p: ExponentField) -> float:
    """inf{lam > 0 : modular(f/lam) <= 1 and |f| <= lam on inf-cells}."""
    check_same_grid(f, p)
    return float(K.luxemburg(f.grid.measures, p.values, f.abs_values))
