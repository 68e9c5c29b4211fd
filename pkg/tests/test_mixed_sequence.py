"""Mixed sequence-space modulars: inner infima, easy route, quasinorm."""

import math

import numpy as np
import pytest

from varnorm.core import (ExponentField, MeasureGrid, SampledFunction,
                          build_level_sequence)
from varnorm.lebesgue import luxemburg_norm, modular
from varnorm.mixed_sequence import (FunctionSequence, easy_modular,
                                    mixed_modular, mixed_quasinorm,
                                    quotient_field)


def _grid(n):
    return MeasureGrid(np.ones(n))


def _const(n, x):
    return ExponentField.constant(x, n)


def test_quotient_conventions():
    p = ExponentField(np.array([2.0, math.inf, math.inf, 3.0]))
    q = ExponentField(np.array([2.0, math.inf, 4.0, 1.5]))
    r = quotient_field(p, q).values
    assert r.tolist() == [1.0, 1.0, math.inf, 2.0]


def test_inner_term_constant_q_is_norm_power():
    # for constant q the infimum solves ||f_k||_p^q exactly
    rng = np.random.default_rng(8)
    g = _grid(6)
    p = ExponentField(rng.uniform(0.5, 6.0, 6))
    rows = np.exp(rng.normal(0, 1, (3, 6)))
    seq = FunctionSequence(g, rows)
    for qc in (0.7, 1.0, 2.0, 5.0):
        got = mixed_modular(seq, p, _const(6, qc))
        want = sum(luxemburg_norm(SampledFunction(g, r), p) ** qc for r in rows)
        assert got.value == pytest.approx(want, rel=1e-10)
        assert len(got.witnesses) == 3
        assert got.value == pytest.approx(sum(got.witnesses), rel=1e-12)


def test_easy_equals_infimum_when_q_constant():
    rng = np.random.default_rng(9)
    g = _grid(5)
    p = ExponentField(rng.uniform(0.6, 5.0, 5))
    seq = FunctionSequence(g, np.exp(rng.normal(0, 1.2, (4, 5))))
    for qc in (0.8, 2.0, 4.0):
        q = _const(5, qc)
        assert easy_modular(seq, p, q) == pytest.approx(
            mixed_modular(seq, p, q).value, rel=1e-10)


def test_easy_equals_infimum_when_q_is_p():
    # with q = p the inner infimum collapses to the plain modular of the row
    rng = np.random.default_rng(10)
    g = MeasureGrid(np.exp(rng.normal(0, 1, 7)))
    pv = rng.uniform(0.6, 5.0, 7)
    p = ExponentField(pv)
    rows = np.exp(rng.normal(0, 1.2, (3, 7)))
    rows[0, :3] = 0.0
    seq = FunctionSequence(g, rows)
    easy = easy_modular(seq, p, p)
    inf_route = mixed_modular(seq, p, p).value
    direct = sum(modular(SampledFunction(g, r), p) for r in rows)
    assert easy == pytest.approx(direct, rel=1e-12)
    assert inf_route == pytest.approx(direct, rel=1e-10)


def test_easy_precondition_guard():
    g = _grid(2)
    p = ExponentField(np.array([1.0, 2.0]))
    q_bad = ExponentField(np.array([1.0, math.inf]))   # q > p on cell 1
    q_ok = ExponentField(np.array([1.0, math.inf]))
    seq = FunctionSequence(g, np.ones((1, 2)))
    with pytest.raises(ValueError):
        easy_modular(seq, p, q_bad)
    # q <= p pointwise keeps the expression legal even with q_plus = inf
    easy_modular(seq, ExponentField(np.array([1.0, math.inf])), q_ok)


def test_q_infinity_rows():
    g = _grid(2)
    p = _const(2, 2.0)
    q = _const(2, math.inf)
    below = FunctionSequence(g, np.array([[0.5, 0.7]]))
    above = FunctionSequence(g, np.array([[0.5, 1.4]]))
    # fixed part within the unit ball: any lam > 0 is feasible, infimum 0
    assert mixed_modular(below, p, q).value == 0.0
    assert mixed_modular(above, p, q).value == math.inf


def test_identity_example_value_four():
    # f = 3 on a unit cell, p = q = 1: window levels give 1 + 2, tail gives 1
    g = _grid(1)
    f = SampledFunction(g, np.array([3.0]))
    p = _const(1, 1.0)
    levels = build_level_sequence(f)
    res = mixed_modular(levels, p, p)
    assert res.value == pytest.approx(4.0, rel=1e-11)
    assert easy_modular(levels, p, p) == pytest.approx(4.0, rel=1e-13)
    assert res.tail_levels > 0
    assert res.value == pytest.approx(sum(res.witnesses) + res.tail_value, rel=1e-12)


def test_level_route_agreement_easy_vs_bisection():
    rng = np.random.default_rng(12)
    for _ in range(15):
        n = int(rng.integers(2, 24))
        g = MeasureGrid(np.exp(rng.normal(0, 1, n)))
        v = np.exp(rng.normal(0, 1.2, n))
        v[rng.random(n) < 0.2] = 0.0
        f = SampledFunction(g, v)
        pv = rng.uniform(0.6, 5.0, n)
        p = ExponentField(pv)
        levels = build_level_sequence(f)
        a = easy_modular(levels, p, p)
        b = mixed_modular(levels, p, p).value
        assert a == pytest.approx(b, rel=1e-9, abs=1e-250)


def test_geometric_tail_closed_form():
    # constant field: per-cell tail sum_{k<=K} 2^{kq} = 2^{Kq} / (1 - 2^{-q})
    g = _grid(1)
    f = SampledFunction(g, np.array([1.0]))   # levels k <= -1 all full
    for qc in (1.0, 2.0, 3.5):
        p = _const(1, qc)
        got = easy_modular(build_level_sequence(f), p, p)
        want = 2.0 ** -qc / (1.0 - 2.0 ** -qc)   # K = -1
        assert got == pytest.approx(want, rel=1e-13)


def test_mixed_quasinorm_characterizes_unit_modular():
    rng = np.random.default_rng(14)
    g = MeasureGrid(np.exp(rng.normal(0, 1, 9)))
    p = ExponentField(rng.uniform(0.7, 4.0, 9))
    q = ExponentField(rng.uniform(0.7, 4.0, 9))
    rows = np.exp(rng.normal(0, 1.3, (4, 9)))
    mu = mixed_quasinorm(FunctionSequence(g, rows), p, q)
    assert mu > 0.0
    hi = mixed_modular(FunctionSequence(g, rows / (mu * (1 + 1e-6))), p, q).value
    lo = mixed_modular(FunctionSequence(g, rows / (mu * (1 - 1e-6))), p, q).value
    assert hi <= 1.0 + 1e-9
    assert lo >= 1.0 - 1e-9  # feasibility flips across the gauge


def test_level_quasinorm_dyadic_homogeneity():
    # doubling f shifts the level family one slot, scaling the infimum exactly
    rng = np.random.default_rng(16)
    g = MeasureGrid(np.exp(rng.normal(0, 1, 8)))
    p = ExponentField(rng.uniform(0.7, 4.0, 8))
    q = ExponentField(rng.uniform(0.7, 4.0, 8))
    f = SampledFunction(g, np.exp(rng.normal(0, 1.3, 8)))
    base = mixed_quasinorm(build_level_sequence(f), p, q)
    doubled = mixed_quasinorm(build_level_sequence(f.scaled(2.0)), p, q)
    assert doubled == pytest.approx(2.0 * base, rel=1e-10)


def test_mixed_quasinorm_rejects_nonstrict_levels():
    g = _grid(1)
    f = SampledFunction(g, np.array([2.0]))
    p = _const(1, 1.0)
    with pytest.raises(ValueError):
        mixed_quasinorm(build_level_sequence(f, strict=False), p, p)


def test_function_sequence_quasinorm_homogeneity():
    rng = np.random.default_rng(15)
    g = _grid(4)
    p = ExponentField(rng.uniform(0.7, 4.0, 4))
    q = ExponentField(rng.uniform(0.7, 4.0, 4))
    rows = np.exp(rng.normal(0, 1, (3, 4)))
    seq = FunctionSequence(g, rows)
    base = mixed_quasinorm(seq, p, q)
    scaled = mixed_quasinorm(FunctionSequence(g, 2.5 * rows), p, q)
    assert scaled == pytest.approx(2.5 * base, rel=1e-10)
