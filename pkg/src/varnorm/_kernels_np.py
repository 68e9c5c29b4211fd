"""Pure-numpy evaluation kernels.

Reference backend: every function here has a numba twin in ``_kernels_nb``
with identical semantics.  All exponent arrays are float64 and may contain
``inf`` entries; powers are evaluated in the log domain and saturate to
0 / inf instead of raising.
"""

from __future__ import annotations

import math

import numpy as np

LOG_HUGE = 709.0  # exp() overflows just above this
TINY = 1e-300
RTOL = 1e-12
MAXIT = 200


def phi_sum(m: np.ndarray, p: np.ndarray, v: np.ndarray, scale: float) -> float:
    """sum_i m_i * phi_{p_i}(v_i / scale) with phi_inf(t) = 0 (t<=1) / inf (t>1)."""
    if v.size == 0:
        return 0.0
    t = np.abs(v) / scale
    inf_mask = np.isinf(p)
    if inf_mask.any() and (t[inf_mask] > 1.0).any():
        return math.inf
    fin = ~inf_mask & (t > 0.0)
    if not fin.any():
        return 0.0
    z = p[fin] * np.log(t[fin])
    if (z >= LOG_HUGE).any():
        return math.inf
    return float(np.dot(m[fin], np.exp(z)))


def luxemburg(m: np.ndarray, p: np.ndarray, v: np.ndarray,
              rtol: float = RTOL, maxit: int = MAXIT) -> float:
    """inf{lam > 0 : phi_sum(v/lam) <= 1}, the unit-ball gauge of the modular."""
    v = np.abs(v)
    if v.size == 0 or float(v.max()) == 0.0:
        return 0.0
    vmax = float(v.max())
    inf_mask = np.isinf(p)
    cap = float(v[inf_mask].max()) if inf_mask.any() else 0.0
    fin = ~inf_mask & (v > 0.0)
    if not fin.any():
        return cap
    mf = np.ascontiguousarray(m[fin])
    pf = np.ascontiguousarray(p[fin])
    lv = np.log(v[fin])
    pmin = float(np.min(p))
    total_m = float(np.sum(m))

    def rho(lam: float) -> float:
        z = pf * (lv - math.log(lam))
        zmax = float(z.max())
        if zmax >= LOG_HUGE:
            return math.inf
        return float(np.dot(mf, np.exp(z)))

    hi = vmax * (1.0 + total_m) ** (1.0 / min(1.0, pmin))
    grow = 0
    while rho(hi) > 1.0 and grow < 400:
        hi *= 4.0
        grow += 1
    if rho(hi) > 1.0:
        return math.inf
    lo = hi / 16.0
    while lo >= TINY:
        if rho(lo) > 1.0:
            break
        hi = lo
        lo /= 16.0
    else:
        return max(cap, hi)
    it = 0
    while hi - lo > rtol * hi and it < maxit:
        mid = math.sqrt(lo) * math.sqrt(hi)
        if rho(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
        it += 1
    return max(float(hi), cap)


def truncation_norm(m: np.ndarray, p: np.ndarray, v: np.ndarray, mu: float,
                    rtol: float = RTOL, maxit: int = MAXIT) -> float:
    """luxemburg norm of the truncation (|v| - mu)_+."""
    w = np.abs(v) - mu
    np.clip(w, 0.0, None, out=w)
    return luxemburg(m, p, w, rtol, maxit)


def inner_term(m: np.ndarray, p: np.ndarray, q: np.ndarray, g: np.ndarray,
               lo_hint: float = 0.0, hi_hint: float = 0.0,
               rtol: float = RTOL, maxit: int = MAXIT) -> float:
    """inf{lam > 0 : sum_i m_i phi_{p_i}(g_i * lam^{-1/q_i}) <= 1}.

    Convention lam^{1/inf} = 1: cells with q_i = inf contribute a
    lam-independent amount; if that fixed part alone exceeds 1 the
    constraint is infeasible and the term is inf.
    """
    g = np.abs(g)
    if g.size == 0 or float(g.max()) == 0.0:
        return 0.0
    q_inf = np.isinf(q)
    fixed = 0.0
    if q_inf.any():
        fixed = phi_sum(m[q_inf], p[q_inf], g[q_inf], 1.0)
        if math.isinf(fixed):
            return math.inf
    act = ~q_inf & (g > 0.0)
    if not act.any():
        return 0.0 if fixed <= 1.0 else math.inf
    if fixed > 1.0:
        return math.inf

    p_act = p[act]
    q_act = q[act]
    m_act = m[act]
    lg = np.log(g[act])
    p_inf = np.isinf(p_act)
    lam_cap = 0.0
    if p_inf.any():
        # phi_inf(g * lam^{-1/q}) = 0 requires lam >= g^q
        zc = q_act[p_inf] * lg[p_inf]
        zmax = float(zc.max())
        if zmax >= LOG_HUGE:
            return math.inf
        lam_cap = math.exp(zmax)
    p_fin = ~p_inf
    has_fin = bool(p_fin.any())
    if has_fin:
        mv = np.ascontiguousarray(m_act[p_fin])
        pv = np.ascontiguousarray(p_act[p_fin])
        qv = np.ascontiguousarray(q_act[p_fin])
        lgv = np.ascontiguousarray(lg[p_fin])

    def dval(lam: float) -> float:
        if lam < lam_cap:
            return math.inf
        if not has_fin:
            return fixed
        z = pv * (lgv - math.log(lam) / qv)
        zmax = float(z.max())
        if zmax >= LOG_HUGE:
            return math.inf
        return fixed + float(np.dot(mv, np.exp(z)))

    if not has_fin:
        return lam_cap
    gmax = float(np.exp(lgv.max()))
    pmin = float(pv.min())
    a = gmax * (1.0 + float(np.sum(m))) ** (1.0 / min(1.0, pmin))
    la = math.log(a)
    qb = float(qv.max()) if a >= 1.0 else float(qv.min())
    hi = math.exp(min(qb * la, LOG_HUGE - 5.0))
    hi = max(hi, lam_cap, TINY)
    if hi_hint > 0.0:
        hi = min(hi, max(hi_hint, lam_cap, TINY))
    grow = 0
    while dval(hi) > 1.0 and grow < 400:
        hi *= 16.0
        grow += 1
    if dval(hi) > 1.0:
        return math.inf
    lo = hi / 16.0
    if 0.0 < lo_hint < hi:
        lo = lo_hint
    while lo >= TINY:
        if dval(lo) > 1.0:
            break
        hi = lo
        lo /= 16.0
    else:
        return 0.0
    it = 0
    while hi - lo > rtol * hi and it < maxit:
        mid = math.sqrt(lo) * math.sqrt(hi)
        if dval(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
        it += 1
    return float(hi)


def inner_term_const(m: np.ndarray, p: np.ndarray, q: np.ndarray, height: float,
                     lo_hint: float = 0.0, hi_hint: float = 0.0,
                     rtol: float = RTOL, maxit: int = MAXIT) -> float:
    """inner_term for a constant-height function on the given cells."""
    g = np.full(m.shape, height)
    return inner_term(m, p, q, g, lo_hint, hi_hint, rtol, maxit)


def dyadic_mixed_modular(m: np.ndarray, p: np.ndarray, q: np.ndarray,
                         fabs: np.ndarray, lam: float, mu: float,
                         rtol: float = RTOL, maxit: int = MAXIT,
                         tail_rel: float = 1e-13,
                         abort_above: float = math.inf,
                         max_tail: int = 20000) -> float:
    """Mixed modular of the dyadic level family of fabs/lam, heights 2^k/mu.

    Level k uses the cell set {fabs > lam * 2^k} and the constant value
    2^k / mu.  The window covers every k where the set changes; below the
    window the set is frozen at supp(fabs) and the terms decay geometrically,
    so the lower tail is accumulated adaptively until the remainder bound
    drops under tail_rel of the running total.  If abort_above is finite the
    accumulation stops early once the total exceeds it, or once the tail
    bound certifies it never will (either way the result stays on the
    correct side of any threshold <= abort_above).
    """
    pos = fabs > 0.0
    if not pos.any():
        return 0.0
    fmax = float(fabs.max())
    fmin = float(fabs[pos].min())

    # largest k with a nonempty level set: 2^k < fmax/lam
    k_top = int(math.floor(math.log2(fmax) - math.log2(lam)))
    while fmax > math.ldexp(lam, k_top + 1):
        k_top += 1
    while fmax <= math.ldexp(lam, k_top):
        k_top -= 1
    # window floor: one guard level below floor(log2(fmin/lam))
    k_bot = int(math.floor(math.log2(fmin) - math.log2(lam)))
    while fmin > math.ldexp(lam, k_bot + 1):
        k_bot += 1
    while fmin <= math.ldexp(lam, k_bot):
        k_bot -= 1
    k_bot -= 1  # guard: level set = supp(fabs) there

    q_sup = q[pos]
    q_lo = float(q_sup.min())
    q_hi = float(q_sup.max())
    total = 0.0
    prev = -1.0
    for k in range(k_top, k_bot - 1, -1):
        thr = math.ldexp(lam, k)
        sel = fabs > thr
        height = math.ldexp(1.0, k) / mu
        lo_h = hi_h = 0.0
        if prev > 0.0:
            lo_h = prev * (2.0 ** (-q_hi)) / 4.0
            hi_h = prev * (2.0 ** (-q_lo)) * 4.0
        t = inner_term_const(m[sel], p[sel], q[sel], height, lo_h, hi_h, rtol, maxit)
        if math.isinf(t):
            return math.inf
        total += t
        prev = t
        if total > abort_above:
            return total
    # geometric lower tail on the frozen support
    m_s = np.ascontiguousarray(m[pos])
    p_s = np.ascontiguousarray(p[pos])
    q_s = np.ascontiguousarray(q_sup)
    rho_dec = 2.0 ** (-q_lo)
    k = k_bot - 1
    steps = 0
    while steps < max_tail:
        height = math.ldexp(1.0, k) / mu
        lo_h = hi_h = 0.0
        if prev > 0.0:
            lo_h = prev * (2.0 ** (-q_hi)) * 0.5
            hi_h = prev * rho_dec * 2.0
        t = inner_term_const(m_s, p_s, q_s, height, lo_h, hi_h, rtol, maxit)
        if math.isinf(t):
            return math.inf
        total += t
        prev = t
        if total > abort_above:
            return total
        if t == 0.0:
            break
        rem = t * rho_dec / (1.0 - rho_dec)
        if rem <= tail_rel * total:
            break
        if total + rem <= abort_above:
            break  # comparisons against abort_above are already decided
        k -= 1
        steps += 1
    return total


def nested_indicator_norms(m_sorted: np.ndarray, p_sorted: np.ndarray,
                           prefix_lens: np.ndarray,
                           rtol: float = RTOL, maxit: int = MAXIT) -> np.ndarray:
    """Luxemburg norms of indicator functions of nested prefixes.

    Cells are pre-sorted so that each requested set is m_sorted[:n].
    """
    out = np.empty(prefix_lens.shape[0])
    ones = np.ones(m_sorted.shape[0])
    for j, n in enumerate(prefix_lens):
        n = int(n)
        out[j] = luxemburg(m_sorted[:n], p_sorted[:n], ones[:n], rtol, maxit)
    return out


def hardy(edges: np.ndarray, fvals: np.ndarray, alpha: float) -> np.ndarray:
    """x^{-alpha-1} * integral_0^x f at cell midpoints (piecewise-constant f)."""
    left = edges[:-1]
    right = edges[1:]
    mid = 0.5 * (left + right)
    masses = fvals * (right - left)
    before = np.concatenate(([0.0], np.cumsum(masses)[:-1]))
    return (before + fvals * (mid - left)) * mid ** (-alpha - 1.0)


def maximal(edges: np.ndarray, absvals: np.ndarray) -> np.ndarray:
    """Best average of |f| over cell-aligned intervals containing each cell."""
    n = absvals.shape[0]
    widths = np.diff(edges)
    pref = np.concatenate(([0.0], np.cumsum(widths * absvals)))
    out = np.zeros(n)
    for i in range(n):
        # averages over intervals [i..j], then suffix maxima over j >= c
        avgs = (pref[i + 1:] - pref[i]) / (edges[i + 1:] - edges[i])
        suffix = np.maximum.accumulate(avgs[::-1])[::-1]
        np.maximum(out[i:], suffix, out=out[i:])
    return out
