"""Numba-accelerated evaluation kernels.

Semantics mirror ``_kernels_np`` exactly; loops replace vector ops so the
bisections run entirely inside compiled code.  Keep fastmath off: the
inf-exponent conventions rely on IEEE comparisons with inf.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

LOG_HUGE = 709.0
TINY = 1e-300
RTOL = 1e-12
MAXIT = 200

JIT_OPTIONS = {"cache": True, "nogil": True}


@njit(**JIT_OPTIONS)
def phi_sum(m, p, v, scale):
    s = 0.0
    for i in range(m.shape[0]):
        t = abs(v[i]) / scale
        pi = p[i]
        if math.isinf(pi):
            if t > 1.0:
                return math.inf
        elif t > 0.0:
            z = pi * math.log(t)
            if z >= LOG_HUGE:
                return math.inf
            s += m[i] * math.exp(z)
    return s


@njit(**JIT_OPTIONS)
def _rho_compact(mf, pf, lvf, n, lam):
    llam = math.log(lam)
    s = 0.0
    for i in range(n):
        z = pf[i] * (lvf[i] - llam)
        if z >= LOG_HUGE:
            return math.inf
        s += mf[i] * math.exp(z)
    return s


@njit(**JIT_OPTIONS)
def luxemburg(m, p, v, rtol=RTOL, maxit=MAXIT):
    n = m.shape[0]
    vmax = 0.0
    for i in range(n):
        a = abs(v[i])
        if a > vmax:
            vmax = a
    if vmax == 0.0:
        return 0.0
    cap = 0.0
    pmin = math.inf
    total_m = 0.0
    k = 0
    mf = np.empty(n)
    pf = np.empty(n)
    lvf = np.empty(n)
    for i in range(n):
        a = abs(v[i])
        pi = p[i]
        total_m += m[i]
        if pi < pmin:
            pmin = pi
        if math.isinf(pi):
            if a > cap:
                cap = a
        elif a > 0.0:
            mf[k] = m[i]
            pf[k] = pi
            lvf[k] = math.log(a)
            k += 1
    if k == 0:
        return cap
    hi = vmax * (1.0 + total_m) ** (1.0 / min(1.0, pmin))
    grow = 0
    while _rho_compact(mf, pf, lvf, k, hi) > 1.0 and grow < 400:
        hi *= 4.0
        grow += 1
    if _rho_compact(mf, pf, lvf, k, hi) > 1.0:
        return math.inf
    lo = hi / 16.0
    broke = False
    while lo >= TINY:
        if _rho_compact(mf, pf, lvf, k, lo) > 1.0:
            broke = True
            break
        hi = lo
        lo /= 16.0
    if not broke:
        return max(cap, hi)
    it = 0
    while hi - lo > rtol * hi and it < maxit:
        mid = math.sqrt(lo) * math.sqrt(hi)
        if _rho_compact(mf, pf, lvf, k, mid) <= 1.0:
            hi = mid
        else:
            lo = mid
        it += 1
    if cap > hi:
        return cap
    return hi


@njit(**JIT_OPTIONS)
def truncation_norm(m, p, v, mu, rtol=RTOL, maxit=MAXIT):
    n = m.shape[0]
    w = np.empty(n)
    for i in range(n):
        a = abs(v[i]) - mu
        w[i] = a if a > 0.0 else 0.0
    return luxemburg(m, p, w, rtol, maxit)


@njit(**JIT_OPTIONS)
def _level_dval(m, p, q, fabs, thr, lheight, llam):
    """D(lam) for the constant-height function on cells {fabs > thr}."""
    s = 0.0
    for i in range(m.shape[0]):
        if fabs[i] <= thr:
            continue
        pi = p[i]
        qi = q[i]
        if math.isinf(qi):
            if math.isinf(pi):
                if lheight > 0.0:
                    return math.inf
            else:
                z = pi * lheight
                if z >= LOG_HUGE:
                    return math.inf
                s += m[i] * math.exp(z)
        else:
            if math.isinf(pi):
                if qi * lheight > llam:
                    return math.inf
            else:
                z = pi * (lheight - llam / qi)
                if z >= LOG_HUGE:
                    return math.inf
                s += m[i] * math.exp(z)
    return s


@njit(**JIT_OPTIONS)
def _level_term(m, p, q, fabs, thr, height, lo_hint, hi_hint, rtol, maxit):
    """inf{lam : D(lam) <= 1} for the constant-height level set {fabs > thr}."""
    if height <= 0.0:
        return 0.0
    lheight = math.log(height)
    n_act = 0
    fixed = 0.0
    lc_log = -math.inf
    n_fin = 0
    pmin = math.inf
    qmin = math.inf
    qmax = 0.0
    total_m = 0.0
    for i in range(m.shape[0]):
        total_m += m[i]
        if fabs[i] <= thr:
            continue
        n_act += 1
        pi = p[i]
        qi = q[i]
        if math.isinf(qi):
            if math.isinf(pi):
                if lheight > 0.0:
                    return math.inf
            else:
                z = pi * lheight
                if z >= LOG_HUGE:
                    return math.inf
                fixed += m[i] * math.exp(z)
        else:
            if math.isinf(pi):
                zc = qi * lheight
                if zc >= LOG_HUGE:
                    return math.inf
                if zc > lc_log:
                    lc_log = zc
            else:
                n_fin += 1
                if pi < pmin:
                    pmin = pi
                if qi < qmin:
                    qmin = qi
                if qi > qmax:
                    qmax = qi
    if n_act == 0:
        return 0.0
    if fixed > 1.0:
        return math.inf
    if n_fin == 0:
        if lc_log == -math.inf:
            return 0.0
        return math.exp(lc_log)
    la = lheight + math.log(1.0 + total_m) / min(1.0, pmin)
    hb = qmax * la if la >= 0.0 else qmin * la
    if hb > LOG_HUGE - 5.0:
        hb = LOG_HUGE - 5.0
    hi = math.exp(hb)
    if lc_log > -math.inf:
        capv = math.exp(lc_log)
        if capv > hi:
            hi = capv
    if hi < TINY:
        hi = TINY
    if hi_hint > 0.0 and hi_hint < hi:
        cand = hi_hint
        if lc_log > -math.inf:
            capv = math.exp(lc_log)
            if cand < capv:
                cand = capv
        if cand < TINY:
            cand = TINY
        hi = cand
    grow = 0
    while _level_dval(m, p, q, fabs, thr, lheight, math.log(hi)) > 1.0 and grow < 400:
        hi *= 16.0
        grow += 1
    if _level_dval(m, p, q, fabs, thr, lheight, math.log(hi)) > 1.0:
        return math.inf
    lo = hi / 16.0
    if 0.0 < lo_hint < hi:
        lo = lo_hint
    broke = False
    while lo >= TINY:
        if _level_dval(m, p, q, fabs, thr, lheight, math.log(lo)) > 1.0:
            broke = True
            break
        hi = lo
        lo /= 16.0
    if not broke:
        return 0.0
    it = 0
    while hi - lo > rtol * hi and it < maxit:
        mid = math.sqrt(lo) * math.sqrt(hi)
        if _level_dval(m, p, q, fabs, thr, lheight, math.log(mid)) <= 1.0:
            hi = mid
        else:
            lo = mid
        it += 1
    return hi


@njit(**JIT_OPTIONS)
def inner_term(m, p, q, g, lo_hint=0.0, hi_hint=0.0, rtol=RTOL, maxit=MAXIT):
    """inf{lam > 0 : sum_i m_i phi_{p_i}(|g_i| * lam^{-1/q_i}) <= 1}."""
    n = m.shape[0]
    gmax = 0.0
    for i in range(n):
        a = abs(g[i])
        if a > gmax:
            gmax = a
    if gmax == 0.0:
        return 0.0
    fixed = 0.0
    lc_log = -math.inf
    n_fin = 0
    pmin = math.inf
    qmin = math.inf
    qmax = 0.0
    total_m = 0.0
    for i in range(n):
        total_m += m[i]
        a = abs(g[i])
        if a == 0.0:
            continue
        pi = p[i]
        qi = q[i]
        lg = math.log(a)
        if math.isinf(qi):
            if math.isinf(pi):
                if lg > 0.0:
                    return math.inf
            else:
                z = pi * lg
                if z >= LOG_HUGE:
                    return math.inf
                fixed += m[i] * math.exp(z)
        else:
            if math.isinf(pi):
                zc = qi * lg
                if zc >= LOG_HUGE:
                    return math.inf
                if zc > lc_log:
                    lc_log = zc
            else:
                n_fin += 1
                if pi < pmin:
                    pmin = pi
                if qi < qmin:
                    qmin = qi
                if qi > qmax:
                    qmax = qi
    if fixed > 1.0:
        return math.inf
    if n_fin == 0:
        if lc_log == -math.inf:
            return 0.0
        return math.exp(lc_log)
    la = math.log(gmax) + math.log(1.0 + total_m) / min(1.0, pmin)
    hb = qmax * la if la >= 0.0 else qmin * la
    if hb > LOG_HUGE - 5.0:
        hb = LOG_HUGE - 5.0
    hi = math.exp(hb)
    if lc_log > -math.inf:
        capv = math.exp(lc_log)
        if capv > hi:
            hi = capv
    if hi < TINY:
        hi = TINY
    if hi_hint > 0.0 and hi_hint < hi:
        cand = hi_hint
        if lc_log > -math.inf:
            capv = math.exp(lc_log)
            if cand < capv:
                cand = capv
        if cand < TINY:
            cand = TINY
        hi = cand
    grow = 0
    while _inner_dval(m, p, q, g, hi) > 1.0 and grow < 400:
        hi *= 16.0
        grow += 1
    if _inner_dval(m, p, q, g, hi) > 1.0:
        return math.inf
    lo = hi / 16.0
    if 0.0 < lo_hint < hi:
        lo = lo_hint
    broke = False
    while lo >= TINY:
        if _inner_dval(m, p, q, g, lo) > 1.0:
            broke = True
            break
        hi = lo
        lo /= 16.0
    if not broke:
        return 0.0
    it = 0
    while hi - lo > rtol * hi and it < maxit:
        mid = math.sqrt(lo) * math.sqrt(hi)
        if _inner_dval(m, p, q, g, mid) <= 1.0:
            hi = mid
        else:
            lo = mid
        it += 1
    return hi


@njit(**JIT_OPTIONS)
def _inner_dval(m, p, q, g, lam):
    llam = math.log(lam)
    s = 0.0
    for i in range(m.shape[0]):
        a = abs(g[i])
        if a == 0.0:
            continue
        pi = p[i]
        qi = q[i]
        lg = math.log(a)
        if math.isinf(qi):
            if math.isinf(pi):
                if lg > 0.0:
                    return math.inf
            else:
                z = pi * lg
                if z >= LOG_HUGE:
                    return math.inf
                s += m[i] * math.exp(z)
        else:
            if math.isinf(pi):
                if qi * lg > llam:
                    return math.inf
            else:
                z = pi * (lg - llam / qi)
                if z >= LOG_HUGE:
                    return math.inf
                s += m[i] * math.exp(z)
    return s


@njit(**JIT_OPTIONS)
def inner_term_const(m, p, q, height, lo_hint=0.0, hi_hint=0.0, rtol=RTOL, maxit=MAXIT):
    # thr = -1 activates every cell regardless of the dummy fabs array
    return _level_term(m, p, q, m, -1.0, height, lo_hint, hi_hint, rtol, maxit)


@njit(**JIT_OPTIONS)
def dyadic_mixed_modular(m, p, q, fabs, lam, mu,
                         rtol=RTOL, maxit=MAXIT, tail_rel=1e-13,
                         abort_above=math.inf, max_tail=20000):
    n = m.shape[0]
    fmax = 0.0
    fmin = math.inf
    q_lo = math.inf
    q_hi = 0.0
    for i in range(n):
        a = fabs[i]
        if a > 0.0:
            if a > fmax:
                fmax = a
            if a < fmin:
                fmin = a
            if q[i] < q_lo:
                q_lo = q[i]
            if math.isfinite(q[i]) and q[i] > q_hi:
                q_hi = q[i]
    if fmax == 0.0:
        return 0.0
    if q_hi == 0.0:
        q_hi = q_lo
    k_top = int(math.floor(math.log2(fmax) - math.log2(lam)))
    while fmax > math.ldexp(lam, k_top + 1):
        k_top += 1
    while fmax <= math.ldexp(lam, k_top):
        k_top -= 1
    k_bot = int(math.floor(math.log2(fmin) - math.log2(lam)))
    while fmin > math.ldexp(lam, k_bot + 1):
        k_bot += 1
    while fmin <= math.ldexp(lam, k_bot):
        k_bot -= 1
    k_bot -= 1

    total = 0.0
    prev = -1.0
    w_hi = 2.0 ** (-q_lo)
    w_lo = 2.0 ** (-q_hi) if math.isfinite(q_hi) else 0.0
    for k in range(k_top, k_bot - 1, -1):
        thr = math.ldexp(lam, k)
        height = math.ldexp(1.0, k) / mu
        lo_h = 0.0
        hi_h = 0.0
        if prev > 0.0:
            lo_h = prev * w_lo / 4.0
            hi_h = prev * w_hi * 4.0
        t = _level_term(m, p, q, fabs, thr, height, lo_h, hi_h, rtol, maxit)
        if math.isinf(t):
            return math.inf
        total += t
        prev = t
        if total > abort_above:
            return total
    rho_dec = w_hi
    k = k_bot - 1
    steps = 0
    while steps < max_tail:
        height = math.ldexp(1.0, k) / mu
        lo_h = 0.0
        hi_h = 0.0
        if prev > 0.0:
            lo_h = prev * w_lo * 0.5
            hi_h = prev * w_hi * 2.0
        t = _level_term(m, p, q, fabs, 0.0, height, lo_h, hi_h, rtol, maxit)
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


@njit(**JIT_OPTIONS)
def nested_indicator_norms(m_sorted, p_sorted, prefix_lens, rtol=RTOL, maxit=MAXIT):
    out = np.empty(prefix_lens.shape[0])
    ones = np.ones(m_sorted.shape[0])
    for j in range(prefix_lens.shape[0]):
        nj = int(prefix_lens[j])
        out[j] = luxemburg(m_sorted[:nj], p_sorted[:nj], ones[:nj], rtol, maxit)
    return out


@njit(**JIT_OPTIONS)
def hardy(edges, fvals, alpha):
    n = fvals.shape[0]
    out = np.empty(n)
    acc = 0.0
    for i in range(n):
        left = edges[i]
        right = edges[i + 1]
        mid = 0.5 * (left + right)
        part = acc + fvals[i] * (mid - left)
        out[i] = part * mid ** (-alpha - 1.0)
        acc += fvals[i] * (right - left)
    return out


@njit(**JIT_OPTIONS)
def maximal(edges, absvals):
    n = absvals.shape[0]
    pref = np.empty(n + 1)
    pref[0] = 0.0
    for i in range(n):
        pref[i + 1] = pref[i] + (edges[i + 1] - edges[i]) * absvals[i]
    out = np.zeros(n)
    suffix = np.empty(n)
    for i in range(n):
        run = -math.inf
        for j in range(n - 1, i - 1, -1):
            avg = (pref[j + 1] - pref[i]) / (edges[j + 1] - edges[i])
            if avg > run:
                run = avg
            suffix[j] = run
        for c in range(i, n):
            if suffix[c] > out[c]:
                out[c] = suffix[c]
    return out
