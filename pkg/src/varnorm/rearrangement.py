"""Distribution function, decreasing rearrangement, classical Lorentz norm.

All three are exact on finite grids: the distribution function and the
rearrangement are step functions with finitely many plateaus, and the
q-integral of the classical Lorentz norm is summed in closed form plateau
by plateau (antiderivatives of t^{q/p-1}), so no quadrature error enters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SampledFunction

__all__ = [
    "StepFunction",
    "distribution",
    "decreasing_rearrangement",
    "classical_lorentz_norm",
    "levelset_factor",
]


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous step function on [0, inf).

    ``values[j]`` holds on [breakpoints[j], breakpoints[j+1]); the last value
    holds from the last breakpoint on.  breakpoints[0] is always 0.
    """

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.breakpoints, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if b.size != v.size or b.size == 0:
            raise ValueError("need one value per breakpoint")
        if b[0] != 0.0 or np.any(np.diff(b) <= 0.0):
            raise ValueError("breakpoints must start at 0 and increase strictly")
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "values", v)

    def __call__(self, t: float) -> float:
        if t < 0.0:
            raise ValueError("argument must be nonnegative")
        j = int(np.searchsorted(self.breakpoints, t, side="right")) - 1
        return float(self.values[j])

    def left_limit(self, t: float) -> float:
        if t <= 0.0:
            raise ValueError("left limits exist for t > 0 only")
        j = int(np.searchsorted(self.breakpoints, t, side="left")) - 1
        return float(self.values[max(j, 0)])


def _sorted_plateaus(f: SampledFunction) -> tuple[np.ndarray, np.ndarray]:
    """Distinct positive |f| values descending, with cumulative measures."""
    a = f.abs_values
    m = f.grid.measures
    pos = a > 0.0
    if not np.any(pos):
        return np.empty(0), np.empty(0)
    vals, inv = np.unique(a[pos], return_inverse=True)
    masses = np.bincount(inv, weights=m[pos], minlength=vals.size)
    vals = vals[::-1]                       # descending w_1 > w_2 > ...
    cum = np.cumsum(masses[::-1])           # M_j = mu{|f| >= w_j}
    return vals, cum


def distribution(f: SampledFunction) -> StepFunction:
    """mu_f(s) = mu{|f| > s}, exact step function with strict inequality."""
    vals, cum = _sorted_plateaus(f)
    if vals.size == 0:
        return StepFunction(np.zeros(1), np.zeros(1))
    # on [v_{j+1}, v_j) the set {|f| > s} has measure M_j; beyond v_1 it is 0
    bp = np.concatenate(([0.0], vals[::-1]))
    pv = np.concatenate((cum[::-1], [0.0]))
    return StepFunction(bp, pv)


def decreasing_rearrangement(f: SampledFunction) -> StepFunction:
    """f*(t) = inf{s > 0 : mu_f(s) <= t}; w_j on [M_{j-1}, M_j), 0 after."""
    vals, cum = _sorted_plateaus(f)
    if vals.size == 0:
        return StepFunction(np.zeros(1), np.zeros(1))
    bp = np.concatenate(([0.0], cum))
    pv = np.concatenate((vals, [0.0]))
    return StepFunction(bp, pv)


def classical_lorentz_norm(f: SampledFunction, p: float, q: float) -> float:
    """(int_0^inf (t^{1/p} f*(t))^q dt/t)^{1/q}, sup form for q = inf."""
    if not (p > 0.0 and q > 0.0):
        raise ValueError("exponents must be positive")
    vals, cum = _sorted_plateaus(f)
    if vals.size == 0:
        return 0.0
    if math.isinf(q):
        if math.isinf(p):
            return float(vals[0])
        # sup of t^{1/p} w_j over [M_{j-1}, M_j) sits at the right endpoint
        return float(np.max(cum ** (1.0 / p) * vals))
    if math.isinf(p):
        return math.inf  # dt/t diverges at 0 whenever f != 0
    r = q / p
    with np.errstate(over="ignore"):
        heads = np.concatenate(([0.0], cum[:-1])) ** r
        incs = cum ** r - heads
        incs = np.where(np.isnan(incs), np.inf, incs)  # inf - inf plateaus
        total = float(np.sum(vals ** q * incs)) * (p / q)
    return total ** (1.0 / q)


def levelset_factor(p: float, q: float) -> float:
    """p^{1/q}: ratio of the rearrangement form to the level-set form of L_{p,q}."""
    if math.isinf(q):
        return 1.0
    return p ** (1.0 / q)
