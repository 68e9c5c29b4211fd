"""Variable-exponent Lorentz norms and their verification routines.

Two definitions coexist.  For constant secondary exponent q the norm is the
dt/t integral of lam^q * ||chi_{|f|>lam}||_{p(.)}^q, evaluated exactly on the
plateaus of the level-set norm (``lorentz_norm_qconst``).  For variable q the
quasi-norm scales f until the mixed modular of its dyadic level sequence
drops to 1 (``lorentz_quasinorm``); ``lorentz_equiv_expression`` is the
companion mixed quasi-norm of the unscaled level sequence, equivalent within
a factor of 2 because both expressions agree at dyadic scalings.
"""

from __future__ import annotations

import math

import numpy as np

from . import _kernels as K
from ._solve import geometric_bisect
from .core import (DyadicLevelSequence, ExponentField, SampledFunction,
                   build_level_sequence, check_same_grid)
from .lebesgue import luxemburg_norm, modular
from .mixed_sequence import easy_modular, mixed_modular, mixed_quasinorm
from .report import VerificationReport

__all__ = [
    "nested_level_norms",
    "lorentz_norm_qconst",
    "lorentz_quasinorm",
    "lorentz_equiv_expression",
    "identity_constant",
    "verify_identity_Lpp",
    "verify_quasi_triangle",
    "verify_embeddings",
]


def nested_level_norms(f: SampledFunction, p: ExponentField,
                       strict: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Distinct positive |f| values ascending and h_j = ||chi_{|f|>v_j}||_{p(.)}.

    With ``strict=False`` the sets are {|f| >= v_j} instead.  The level sets
    are nested, so all norms come from one descending sort of the cells.
    """
    a = f.abs_values
    m = f.grid.measures
    vals = np.unique(a[a > 0.0])
    if vals.size == 0:
        return vals, np.empty(0)
    order = np.argsort(-a, kind="stable")
    sorted_a = a[order]
    if strict:
        # |f| > v_j selects cells with |f| >= next larger distinct value
        lens = np.searchsorted(-sorted_a, -vals, side="left")
    else:
        lens = np.searchsorted(-sorted_a, -vals, side="right")
    norms = K.nested_indicator_norms(
        np.ascontiguousarray(m[order]), np.ascontiguousarray(p.values[order]),
        np.ascontiguousarray(lens.astype(np.int64)))
    return vals, norms


def lorentz_norm_qconst(f: SampledFunction, p: ExponentField, q: float) -> float:
    """(int_0^inf lam^q ||chi_{|f|>lam}||_{p(.)}^q dlam/lam)^{1/q}, exact."""
    if not q > 0.0:
        raise ValueError("q must be positive")
    check_same_grid(f, p)
    # on [v_{j-1}, v_j) the set {|f| > lam} equals {|f| >= v_j}, so the
    # plateau values are the non-strict level norms
    vals, norms = nested_level_norms(f, p, strict=False)
    if vals.size == 0:
        return 0.0
    lo = np.concatenate(([0.0], vals[:-1]))
    if math.isinf(q):
        return float(np.max(vals * norms))
    with np.errstate(over="ignore"):
        incs = vals ** q - lo ** q
        incs = np.where(np.isnan(incs), np.inf, incs)
        total = float(np.sum(norms ** q * incs)) / q
    return total ** (1.0 / q)


def lorentz_quasinorm(f: SampledFunction, p: ExponentField, q: ExponentField) -> float:
    """inf{lam > 0 : mixed modular of the level sequence of f/lam <= 1}."""
    check_same_grid(f, p, q)
    fabs = f.abs_values
    if not np.any(fabs > 0.0):
        return 0.0
    m = f.grid.measures
    root = 1.0 / min(1.0, p.p_minus, q.p_minus)
    hi0 = max(float(np.max(fabs)), 1.0) * (1.0 + f.grid.total_measure) ** root

    def feasible(lam: float) -> bool:
        val = K.dyadic_mixed_modular(m, p.values, q.values, fabs, lam, 1.0,
                                     abort_above=1.0)
        return val <= 1.0

    return geometric_bisect(feasible, hi0)


def lorentz_equiv_expression(f: SampledFunction, p: ExponentField,
                             q: ExponentField) -> float:
    """Mixed quasi-norm of the unscaled level sequence (2^k chi_{|f|>2^k})_k."""
    check_same_grid(f, p, q)
    return mixed_quasinorm(build_level_sequence(f), p, q)


def identity_constant(p_minus: float) -> float:
    """c = (1 - 2^{-p_minus})^{-1/p_minus}, the upper modular constant."""
    if not p_minus > 0.0:
        raise ValueError("p_minus must be positive")
    if math.isinf(p_minus):
        return 1.0
    return (1.0 - 2.0 ** (-p_minus)) ** (-1.0 / p_minus)


def verify_identity_Lpp(f: SampledFunction, p: ExponentField,
                        include_norm_sandwich: bool = True,
                        tol: float = 1e-9) -> VerificationReport:
    """Sandwich rho(f/2) <= mixed modular of levels <= rho(c f) with q = p.

    The mixed modular is evaluated through the closed expression (valid since
    q = p), whose below-window tail sums exactly; unit tests pin it against
    the bisection route.  With ``include_norm_sandwich`` the scaled norm
    inequality (1/2)||f|| <= ||f||_{p,p} <= c||f|| is asserted as well.
    """
    check_same_grid(f, p)
    rep = VerificationReport("identity L_{p(.),p(.)} = L_{p(.)}")
    c = identity_constant(p.p_minus)
    rep.record("c", c)
    levels = build_level_sequence(f)
    mid = easy_modular(levels, p, p)
    low = modular(f, p, scale=2.0)
    high = modular(f.scaled(c), p)
    rep.record("modular_low", low)
    rep.record("modular_mid", mid)
    rep.record("modular_high", high)
    scale = max(low, mid, high, 1e-300)
    if math.isinf(mid) and math.isinf(high):
        rep.add_check("modular lower", 0.0, tol)
        rep.add_check("modular upper", 0.0, tol)
    else:
        rep.add_check("modular lower", (mid - low) / scale, tol)
        rep.add_check("modular upper", (high - mid) / scale, tol)
    if include_norm_sandwich:
        nrm = luxemburg_norm(f, p)
        qn = lorentz_quasinorm(f, p, p)
        rep.record("norm", nrm)
        rep.record("quasinorm", qn)
        nscale = max(nrm, qn, 1e-300)
        rep.add_check("norm lower", (qn - 0.5 * nrm) / nscale, tol)
        rep.add_check("norm upper", (c * nrm - qn) / nscale, tol)
    return rep


def verify_quasi_triangle(f: SampledFunction, g: SampledFunction,
                          p: ExponentField, q: ExponentField) -> VerificationReport:
    """Levelwise chi_{|f+g|>2^k} <= chi_{|f|>2^{k-1}} + chi_{|g|>2^{k-1}}, exactly."""
    check_same_grid(f, p, q)
    check_same_grid(g, p, q)
    rep = VerificationReport("quasi-triangle inequality")
    s = SampledFunction(f.grid, f.values + g.values)
    levels = build_level_sequence(s)
    worst = 0.0
    for k in levels.window:
        lhs = s.abs_values > math.ldexp(1.0, k)
        rhs = (f.abs_values > math.ldexp(1.0, k - 1)) | (g.abs_values > math.ldexp(1.0, k - 1))
        worst = max(worst, float(np.max(lhs.astype(int) - rhs.astype(int), initial=0)))
    rep.add_check("level-set inclusion", -worst, 0.0)
    nf = lorentz_quasinorm(f, p, q)
    ng = lorentz_quasinorm(g, p, q)
    ns = lorentz_quasinorm(s, p, q)
    if nf + ng > 0.0:
        rep.record("empirical_quasi_constant", ns / (nf + ng))
    rep.record("norm_sum", ns)
    return rep


def verify_embeddings(samples, tol: float = 1e-10) -> VerificationReport:
    """Theorem-style embedding checks over a prepared sample family.

    ``samples`` is an iterable of dicts tagged by ``kind``:
      - ``indicator``: f an indicator with mass <= 1, fields p0, p1 with
        alpha = (p1/p0)^- > 1; asserts ||chi||_{p0} <= ||chi||_{p1}^alpha.
      - ``linfty``: f arbitrary, constant q; asserts the L_{inf,q} norm equals
        q^{-1/q} max|f|; variable q records two-sided ratio bounds.
      - ``q_monotone``: fields q0 <= q1; records the embedding ratio.
      - ``p_monotone``: fields p0 <= p1 on total measure <= 1; records ratio.
    """
    rep = VerificationReport("embedding suite")
    q_ratios, p_ratios, linf_ratios = [], [], []
    for s in samples:
        kind = s["kind"]
        f = s["f"]
        if kind == "indicator":
            p0, p1 = s["p0"], s["p1"]
            alpha = float(np.min(p1.values / p0.values))
            n0 = luxemburg_norm(f, p0)
            n1 = luxemburg_norm(f, p1)
            rep.add_check(f"indicator alpha={alpha:.3f}", n1 ** alpha - n0, tol)
        elif kind == "linfty":
            q = s["q"]
            pinf = ExponentField.constant(math.inf, f.grid.n_cells)
            top = float(np.max(f.abs_values))
            if q.is_constant:
                qc = float(q.values[0])
                got = lorentz_norm_qconst(f, pinf, qc)
                want = top if math.isinf(qc) else qc ** (-1.0 / qc) * top
                scale = max(want, 1e-300)
                rep.add_check(f"L_{{inf,{qc:g}}} = L_inf", -abs(got - want) / scale, tol)
            else:
                got = lorentz_quasinorm(f, pinf, q)
                if top > 0.0:
                    linf_ratios.append(got / top)
        elif kind == "q_monotone":
            p, q0, q1 = s["p"], s["q0"], s["q1"]
            n0 = lorentz_quasinorm(f, p, q0)
            n1 = lorentz_quasinorm(f, p, q1)
            if n0 > 0.0:
                q_ratios.append(n1 / n0)
        elif kind == "p_monotone":
            q, p0, p1 = s["q"], s["p0"], s["p1"]
            n0 = lorentz_quasinorm(f, p0, q)
            n1 = lorentz_quasinorm(f, p1, q)
            if n1 > 0.0:
                p_ratios.append(n0 / n1)
        else:
            raise ValueError(f"unknown sample kind {kind!r}")
    for label, ratios in (("q_embedding", q_ratios), ("p_embedding", p_ratios),
                          ("linf_variable_q", linf_ratios)):
        if ratios:
            rep.record(f"{label}_ratio_max", max(ratios))
            rep.record(f"{label}_ratio_min", min(ratios))
            rep.add_check(f"{label} bounded", 1.0 if math.isfinite(max(ratios)) else -1.0, 0.0)
    return rep
