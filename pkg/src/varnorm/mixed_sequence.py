"""Modular and quasi-norm of the mixed sequence space l_{q(.)}(L_{p(.)}).

The modular of a sequence (f_k) sums, over k, the infimal lam_k with
rho_{p(.)}(f_k / lam_k^{1/q(.)}) <= 1, under the convention lam^{1/inf} = 1.
Two independent routes are kept side by side: the inner-infimum route
(``mixed_modular``, bisection per index) and the closed-expression route
(``easy_modular``, valid when q_plus < inf or q <= p pointwise); tests pit
them against each other.

Dyadic level sequences get special treatment: below their window every level
set equals the support, so the remaining sum is a geometric tail.  It is
summed adaptively (exactly, per cell, on the q = p fast path) instead of
being truncated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from ._solve import geometric_bisect
from .core import DyadicLevelSequence, ExponentField, MeasureGrid, SampledFunction

__all__ = [
    "FunctionSequence",
    "MixedModularResult",
    "mixed_modular",
    "easy_modular",
    "mixed_quasinorm",
    "quotient_field",
]

TAIL_REL = 1e-13
MAX_TAIL = 20000


@dataclass(frozen=True)
class FunctionSequence:
    """Finite family of functions on a common grid, one row per index."""

    grid: MeasureGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if not np.iscomplexobj(v):
            v = v.astype(np.float64)
        if v.ndim != 2:
            raise ValueError("values must be a 2-D array (index, cell)")
        if v.shape[1] != self.grid.n_cells:
            raise ValueError("row length must equal the cell count")
        if v.size and not np.all(np.isfinite(v)):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "values", np.ascontiguousarray(v))

    @property
    def n_terms(self) -> int:
        return int(self.values.shape[0])

    def abs_row(self, k: int) -> np.ndarray:
        return np.ascontiguousarray(np.abs(self.values[k]).astype(np.float64))

    def scaled(self, a: float) -> "FunctionSequence":
        return FunctionSequence(self.grid, self.values * a)


@dataclass(frozen=True)
class MixedModularResult:
    """Total modular value with its per-index witnesses.

    ``value`` equals sum(witnesses) + tail_value; the tail fields cover the
    geometric continuation below a level sequence's window (zero for plain
    function sequences).
    """

    value: float
    witnesses: np.ndarray
    tail_value: float = 0.0
    tail_levels: int = 0


def quotient_field(p: ExponentField, q: ExponentField) -> ExponentField:
    """Cellwise p/q with inf/inf read as 1 and inf/finite as inf."""
    pv, qv = p.values, q.values
    r = np.empty_like(pv)
    both = np.isinf(pv) & np.isinf(qv)
    r[both] = 1.0
    with np.errstate(invalid="ignore"):
        r[~both] = pv[~both] / qv[~both]
    return ExponentField(r)


def _tail_ratio_bound(q: ExponentField, supp: np.ndarray) -> float:
    # one level down multiplies each term by a factor in [2^-q+, 2^-q-]
    qs = q.values[supp]
    return 2.0 ** (-float(np.min(qs))) if qs.size else 0.0


def mixed_modular(seq, p: ExponentField, q: ExponentField) -> MixedModularResult:
    """Sum over indices of the inner infimum, computed by monotone bisection."""
    if isinstance(seq, DyadicLevelSequence):
        return _mixed_modular_levels(seq, p, q)
    m = seq.grid.measures
    if seq.n_terms == 0:
        return MixedModularResult(0.0, np.empty(0))
    wit = np.empty(seq.n_terms)
    for k in range(seq.n_terms):
        wit[k] = K.inner_term(m, p.values, q.values, seq.abs_row(k))
    return MixedModularResult(float(np.sum(wit)), wit)


def _mixed_modular_levels(levels: DyadicLevelSequence,
                          p: ExponentField, q: ExponentField) -> MixedModularResult:
    f = levels.f
    m = f.grid.measures
    fabs = f.abs_values
    if levels.is_empty:
        return MixedModularResult(0.0, np.empty(0))
    supp = fabs > 0.0
    rho = _tail_ratio_bound(q, supp)
    qf = q.values[supp & np.isfinite(q.values)]
    w_hi = rho                                        # slowest decay, 2^-q-
    w_lo = 2.0 ** (-float(np.max(qf))) if qf.size else 0.0

    wit = np.empty(len(levels.window))
    total = 0.0
    prev = -1.0
    for i, k in enumerate(reversed(levels.window)):
        sel = levels.indicator(k)
        lo_h = prev * w_lo / 4.0 if prev > 0.0 else 0.0
        hi_h = prev * w_hi * 4.0 if prev > 0.0 else 0.0
        t = K.inner_term_const(
            np.ascontiguousarray(m[sel]), np.ascontiguousarray(p.values[sel]),
            np.ascontiguousarray(q.values[sel]), math.ldexp(1.0, k), lo_h, hi_h,
        ) if np.any(sel) else 0.0
        wit[len(wit) - 1 - i] = t
        if math.isinf(t):
            return MixedModularResult(math.inf, wit)
        total += t
        prev = t

    ms = np.ascontiguousarray(m[supp])
    ps = np.ascontiguousarray(p.values[supp])
    qs = np.ascontiguousarray(q.values[supp])
    tail = 0.0
    steps = 0
    k = levels.k_min - 1
    while steps < MAX_TAIL:
        lo_h = prev * w_lo * 0.5 if prev > 0.0 else 0.0
        hi_h = prev * w_hi * 2.0 if prev > 0.0 else 0.0
        t = K.inner_term_const(ms, ps, qs, math.ldexp(1.0, k), lo_h, hi_h)
        if math.isinf(t):
            return MixedModularResult(math.inf, wit, math.inf, steps + 1)
        tail += t
        total += t
        prev = t
        steps += 1
        if t == 0.0 or (total > 0.0 and t * rho / (1.0 - rho) <= TAIL_REL * total):
            break
        k -= 1
    return MixedModularResult(total, wit, tail, steps)


def _check_easy_precondition(p: ExponentField, q: ExponentField) -> None:
    if math.isinf(q.p_plus) and np.any(q.values > p.values):
        raise ValueError("easy modular needs q_plus < inf or q <= p pointwise")


def _phi_field(q_values: np.ndarray, heights: np.ndarray) -> np.ndarray:
    """phi_{q_i}(heights_i) with log-domain powers; inf saturates."""
    out = np.zeros_like(heights)
    infq = np.isinf(q_values)
    out[infq & (heights > 1.0)] = np.inf
    fin = ~infq & (heights > 0.0)
    with np.errstate(over="ignore"):
        z = q_values[fin] * np.log(heights[fin])
        out[fin] = np.where(z >= K.LOG_HUGE, np.inf, np.exp(np.minimum(z, K.LOG_HUGE)))
    return out


def easy_modular(seq, p: ExponentField, q: ExponentField) -> float:
    """sum_k || phi_{q(.)}(|f_k|) ||_{L_{p(.)/q(.)}} (the closed expression)."""
    _check_easy_precondition(p, q)
    if isinstance(seq, DyadicLevelSequence):
        return _easy_modular_levels(seq, p, q)
    m = seq.grid.measures
    r = quotient_field(p, q).values
    total = 0.0
    for k in range(seq.n_terms):
        w = _phi_field(q.values, seq.abs_row(k))
        if np.any(np.isinf(w)):
            return math.inf
        total += float(K.luxemburg(m, r, w))
    return total


def _easy_modular_levels(levels: DyadicLevelSequence,
                         p: ExponentField, q: ExponentField) -> float:
    f = levels.f
    m = f.grid.measures
    fabs = f.abs_values
    if levels.is_empty:
        return 0.0
    supp = fabs > 0.0
    r = quotient_field(p, q).values

    if np.all(r == 1.0):
        # q = p: the L_1 norm of phi values is a plain sum, and the tail below
        # the window is geometric per cell, so it closes exactly.
        total = 0.0
        for k in levels.window:
            sel = levels.indicator(k)
            w = _phi_field(q.values[sel], np.full(int(np.sum(sel)), math.ldexp(1.0, k)))
            if np.any(np.isinf(w)):
                return math.inf
            total += float(np.dot(m[sel], w))
        ktail = levels.k_min - 1
        qs = q.values[supp]
        ms = m[supp]
        fin = np.isfinite(qs)
        if np.any(~fin) and ktail >= 1:
            return math.inf  # phi_inf(2^k) = inf for some tail level
        if np.any(fin):
            qf = qs[fin]
            with np.errstate(over="ignore"):
                head = np.exp2(ktail * qf)
                total += float(np.dot(ms[fin], head / (1.0 - np.exp2(-qf))))
        return total

    rho = _tail_ratio_bound(q, supp)
    total = 0.0
    prev = -1.0
    for k in reversed(levels.window):
        sel = levels.indicator(k)
        t = _easy_level_term(m, q, r, sel, k)
        if math.isinf(t):
            return math.inf
        total += t
        prev = t
    steps = 0
    k = levels.k_min - 1
    while steps < MAX_TAIL:
        t = _easy_level_term(m, q, r, supp, k)
        if math.isinf(t):
            return math.inf
        total += t
        prev = t
        steps += 1
        if t == 0.0 or (total > 0.0 and t * rho / (1.0 - rho) <= TAIL_REL * total):
            break
        k -= 1
    return total


def _easy_level_term(m: np.ndarray, q: ExponentField, r: np.ndarray,
                     sel: np.ndarray, k: int) -> float:
    if not np.any(sel):
        return 0.0
    w = _phi_field(q.values[sel], np.full(int(np.sum(sel)), math.ldexp(1.0, k)))
    if np.any(np.isinf(w)):
        return math.inf
    return float(K.luxemburg(np.ascontiguousarray(m[sel]),
                             np.ascontiguousarray(r[sel]),
                             np.ascontiguousarray(w)))


def mixed_quasinorm(seq, p: ExponentField, q: ExponentField) -> float:
    """inf{mu > 0 : mixed modular of (f_k/mu) <= 1} by outer bisection."""
    if isinstance(seq, DyadicLevelSequence):
        return _mixed_quasinorm_levels(seq, p, q)
    m = seq.grid.measures
    if seq.n_terms == 0 or not np.any(np.abs(seq.values) > 0):
        return 0.0
    norms = [float(K.luxemburg(m, p.values, seq.abs_row(k))) for k in range(seq.n_terms)]
    hi0 = 2.0 * sum(norms)

    def feasible(mu: float) -> bool:
        total = 0.0
        for k in range(seq.n_terms):
            total += K.inner_term(m, p.values, q.values, seq.abs_row(k) / mu)
            if total > 1.0:
                return False
        return True

    return geometric_bisect(feasible, hi0)


def _mixed_quasinorm_levels(levels: DyadicLevelSequence,
                            p: ExponentField, q: ExponentField) -> float:
    if not levels.strict:
        raise ValueError("level-sequence quasinorm is defined for strict level sets")
    f = levels.f
    fabs = f.abs_values
    if levels.is_empty or not np.any(fabs > 0.0):
        return 0.0
    m = f.grid.measures
    vmax = math.ldexp(1.0, levels.k_max)
    root = 1.0 / min(1.0, p.p_minus, q.p_minus)
    hi0 = max(vmax, 1.0) * (1.0 + f.grid.total_measure) ** root

    def feasible(mu: float) -> bool:
        val = K.dyadic_mixed_modular(m, p.values, q.values, fabs, 1.0, mu,
                                     abort_above=1.0)
        return val <= 1.0

    return geometric_bisect(feasible, hi0)
