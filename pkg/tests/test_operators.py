"""Operators and the glued-exponent sweep against quadrature oracles."""

import math

import numpy as np
import pytest
from scipy import integrate

from varnorm.core import ExponentField, MeasureGrid, SampledFunction
from varnorm.operators import (counterexample_sweep, geometric_grid,
                               glued_function, glued_operator, hardy_op,
                               make_glued_pair, marcinkiewicz_predicate,
                               maximal_op_1d, question28_experiment,
                               singular_sample, weak_type_ratio)


# ---------------------------------------------------------------- oracles
def hardy_slow(edges, values, alpha):
    """O(n^2) reimplementation: midpoint values of x^{-alpha-1} int_0^x f."""
    mids = 0.5 * (edges[:-1] + edges[1:])
    out = np.empty_like(mids)
    for i, x in enumerate(mids):
        mass = sum(values[j] * (edges[j + 1] - edges[j]) for j in range(i))
        mass += values[i] * (x - edges[i])
        out[i] = x ** (-alpha - 1.0) * mass
    return out


def maximal_slow(edges, absvals):
    """Max of window averages over all cell-aligned windows containing i."""
    n = absvals.size
    m = np.diff(edges)
    out = np.zeros(n)
    for a in range(n):
        for b in range(a, n):
            avg = float(np.dot(m[a:b + 1], absvals[a:b + 1]) / m[a:b + 1].sum())
            for i in range(a, b + 1):
                out[i] = max(out[i], avg)
    return out


def f_eps(t, eps):
    return t ** -0.25 * math.log(1.0 / t) ** (-0.25 - eps) if t <= 0.5 else 0.0


def f_norm_closed(delta, eps):
    """||f_eps||_{L_4(delta, 1)} from the exact antiderivative in u = ln(1/t)."""
    lo, hi = math.log(2.0), math.log(1.0 / delta)
    return ((lo ** (-4.0 * eps) - hi ** (-4.0 * eps)) / (4.0 * eps)) ** 0.25


def tf_norm_quad(delta, eps):
    """||T_{1/2} f_eps||_{L_{4/3}(delta, 1)} by nested adaptive quadrature."""
    half = integrate.quad(f_eps, delta, 0.5, args=(eps,), limit=200)[0]

    def inner(x):
        return integrate.quad(f_eps, delta, x, args=(eps,), limit=200)[0]

    def outer(x):
        return (x ** -1.5 * inner(x)) ** (4.0 / 3.0)

    body = integrate.quad(outer, delta, 0.5, limit=200)[0]
    # above the cutoff the inner integral is frozen: int_{1/2}^1 x^{-2} dx = 1
    tail = half ** (4.0 / 3.0)
    return (body + tail) ** 0.75


def _grid(edges):
    return MeasureGrid.from_edges(np.asarray(edges, float))


# ------------------------------------------------------------- pointwise ops
def test_hardy_matches_slow_reference():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 30))
        edges = np.cumsum(rng.uniform(0.05, 1.0, n + 1))
        edges -= edges[0]
        vals = rng.normal(0.0, 2.0, n)
        alpha = float(rng.uniform(0.1, 2.0))
        f = SampledFunction(_grid(edges), vals)
        got = hardy_op(f, alpha).values
        want = hardy_slow(edges, vals, alpha)
        assert np.allclose(got, want, rtol=1e-12, atol=1e-14)


def test_hardy_constant_input_closed_form():
    # f = c on [0, b]: int_0^x f = c x, so (Tf)(x) = c x^{-alpha} exactly
    g = _grid(np.linspace(0.0, 2.0, 9))
    f = SampledFunction(g, np.full(8, 3.0))
    got = hardy_op(f, 0.5).values
    want = 3.0 * g.midpoints ** -0.5
    assert np.allclose(got, want, rtol=1e-13)


def test_hardy_input_validation():
    g = _grid([0.0, 1.0, 2.0])
    f = SampledFunction(g, np.ones(2))
    with pytest.raises(ValueError):
        hardy_op(f, 0.0)
    with pytest.raises(ValueError):
        hardy_op(SampledFunction(_grid([-1.0, 0.5, 2.0]), np.ones(2)), 1.0)
    with pytest.raises(ValueError):
        hardy_op(SampledFunction(MeasureGrid(np.ones(2)), np.ones(2)), 1.0)


def test_maximal_matches_window_scan():
    for seed in range(8):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 16))
        edges = np.cumsum(rng.uniform(0.05, 1.0, n + 1))
        vals = rng.normal(0.0, 3.0, n)
        f = SampledFunction(_grid(edges), vals)
        got = maximal_op_1d(f).values
        want = maximal_slow(edges, np.abs(vals))
        assert np.allclose(got, want, rtol=1e-13)


def test_maximal_bridges_a_gap():
    f = SampledFunction(_grid([0.0, 1.0, 2.0, 3.0]), np.array([10.0, 0.0, 10.0]))
    got = maximal_op_1d(f).values
    assert got.tolist() == [10.0, pytest.approx(20.0 / 3.0), 10.0]


def test_weak_type_ratio_indicator_is_one():
    g = MeasureGrid(np.array([0.3, 0.5, 0.2]))
    f = SampledFunction(g, np.array([1.0, 1.0, 0.0]))
    p2 = ExponentField.constant(2.0, 3)
    assert weak_type_ratio(f, f, p2, p2) == pytest.approx(1.0, rel=1e-11)
    zero = SampledFunction(g, np.zeros(3))
    with pytest.raises(ValueError):
        weak_type_ratio(f, zero, p2, p2)


# ------------------------------------------------------------- glued grids
def test_glued_pair_structure():
    left = geometric_grid(0.25, 1.0, cells_per_decade=10)
    pair = make_glued_pair(left, 2.0, math.inf, 1.0, 2.0, 0.5)
    n = left.n_cells
    assert pair.grid.n_cells == 2 * n
    assert pair.grid.edges is None
    assert np.array_equal(pair.grid.measures[:n], pair.grid.measures[n:])
    assert pair.pi_theta.values[0] == 4.0
    assert pair.pi_theta.values[-1] == pytest.approx(4.0 / 3.0, rel=0)
    assert pair.pi0.values[0] == 2.0 and math.isinf(pair.pi1.values[0])
    with pytest.raises(ValueError):
        make_glued_pair(left, 2.0, math.inf, 1.0, 2.0, 1.0)


def test_glued_function_and_operator():
    left = geometric_grid(0.25, 1.0, cells_per_decade=10)
    pair = make_glued_pair(left, 2.0, math.inf, 1.0, 2.0, 0.5)
    n = left.n_cells
    f_left = SampledFunction(left, np.linspace(1.0, 2.0, n))
    fg = glued_function(pair, f_left)
    assert np.array_equal(fg.values[:n], f_left.values)
    assert not np.any(fg.values[n:])
    tg = glued_operator(pair, fg, lambda h: hardy_op(h, 0.5))
    assert not np.any(tg.values[:n])
    assert np.array_equal(tg.values[n:], hardy_op(f_left, 0.5).values)
    with pytest.raises(ValueError):
        glued_function(pair, SampledFunction(MeasureGrid(np.ones(n + 1)),
                                             np.ones(n + 1)))
    with pytest.raises(ValueError):
        glued_operator(pair, f_left, lambda h: h)


def test_geometric_grid_breakpoints_and_density():
    g = geometric_grid(2.0 ** -8, 1.0, cells_per_decade=40, breakpoints=(0.5,))
    edges = g.edges
    assert edges[0] == 2.0 ** -8 and edges[-1] == 1.0
    assert 0.5 in edges.tolist()
    ratios = edges[1:] / edges[:-1]
    assert ratios.max() <= 10.0 ** (1.0 / 40.0) * (1.0 + 1e-12)
    with pytest.raises(ValueError):
        geometric_grid(1.0, 0.5)
    with pytest.raises(ValueError):
        geometric_grid(0.0, 1.0)


def test_singular_sample_cutoff():
    g = geometric_grid(2.0 ** -4, 1.0, cells_per_decade=20, breakpoints=(0.5,))
    f = singular_sample(g, 0.25)
    x = g.midpoints
    assert not np.any(f.values[x > 0.5])
    below = x <= 0.5
    want = x[below] ** -0.25 * np.abs(np.log(x[below])) ** -0.5
    assert np.allclose(f.values[below], want, rtol=1e-13)


# ------------------------------------------------------------- the sweep
def test_sweep_norms_match_continuum_quadrature():
    eps, delta = 0.25, 2.0 ** -8
    row = counterexample_sweep(eps, deltas=(delta,))[0]
    assert row.f_norm == pytest.approx(f_norm_closed(delta, eps), rel=5e-4)
    assert row.tf_norm == pytest.approx(tf_norm_quad(delta, eps), rel=1e-3)
    # refining the grid shrinks the gap to the continuum value
    fine = counterexample_sweep(eps, deltas=(delta,), cells_per_decade=160)[0]
    assert fine.f_norm == pytest.approx(f_norm_closed(delta, eps), rel=1e-4)


def test_sweep_weak_ratios_stay_bounded():
    row = counterexample_sweep(0.25, deltas=(2.0 ** -8,))[0]
    assert 0.2 < row.weak_pi0 <= 1.1
    assert 0.2 < row.weak_pi1 <= 1.1


def test_sweep_input_validation():
    with pytest.raises(ValueError):
        counterexample_sweep(0.0)
    with pytest.raises(ValueError):
        counterexample_sweep(0.25, deltas=(0.3,))


def test_marcinkiewicz_predicate_values():
    p, q, ok = marcinkiewicz_predicate(2.0, math.inf, 1.0, 2.0, 0.5)
    assert p == 4.0 and q == pytest.approx(4.0 / 3.0, rel=0)
    assert ok is False
    p, q, ok = marcinkiewicz_predicate(1.0, 3.0, 2.0, 6.0, 0.5)
    assert (p, q, ok) == (1.5, 3.0, True)
    with pytest.raises(ValueError):
        marcinkiewicz_predicate(2.0, 2.0, 1.0, 2.0, 0.5)
    with pytest.raises(ValueError):
        marcinkiewicz_predicate(2.0, math.inf, 1.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        marcinkiewicz_predicate(2.0, math.inf, 1.0, 2.0, 0.0)


def test_experiment_report_shape():
    rep = question28_experiment(deltas=(2.0 ** -8, 2.0 ** -16))
    assert rep.constants["pi_theta_left"] == 4.0
    assert rep.constants["pi_theta_right"] == pytest.approx(4.0 / 3.0, rel=0)
    assert rep.constants["weak_ratio_max"] <= 1.1
    assert rep.constants["strong_ratio_1"] > rep.constants["strong_ratio_0"]
    assert "loglog_slope" in rep.constants
    by_name = {c.name: c.passed for c in rep.checks}
    assert by_name["weak ratios bounded"]
    assert by_name["strong ratio strictly increasing"]
