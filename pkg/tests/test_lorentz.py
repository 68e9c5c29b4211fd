"""Level-set Lorentz norms, the identity theorem, and the lemma routes."""

import math

import numpy as np
import pytest

from varnorm.core import ExponentField, MeasureGrid, SampledFunction
from varnorm.families import lemma_samples, pair_samples
from varnorm.lebesgue import luxemburg_norm
from varnorm.lorentz import (identity_constant, lorentz_equiv_expression,
                             lorentz_norm_qconst, lorentz_quasinorm,
                             verify_identity_Lpp, verify_quasi_triangle)
from varnorm.rearrangement import classical_lorentz_norm, levelset_factor


def _f(measures, values):
    return SampledFunction(MeasureGrid(np.asarray(measures, float)),
                           np.asarray(values, float))


def test_identity_constants():
    assert identity_constant(1.0) == pytest.approx(2.0, rel=1e-15)
    assert identity_constant(2.0) == pytest.approx(2.0 / math.sqrt(3.0), rel=1e-14)
    assert identity_constant(math.inf) == 1.0


@pytest.mark.parametrize("p", [1.0, 2.0, 4.0])
@pytest.mark.parametrize("q", [1.0, 2.0, 4.0])
def test_classical_factor_identity(p, q):
    # classical norm = p^{1/q} * level-set norm, exactly, for constant fields
    rng = np.random.default_rng(int(p * 10 + q))
    for _ in range(10):
        n = int(rng.integers(1, 20))
        f = _f(np.exp(rng.normal(0, 1, n)), np.exp(rng.normal(0, 1.5, n)))
        pf = ExponentField.constant(p, n)
        lhs = classical_lorentz_norm(f, p, q)
        rhs = levelset_factor(p, q) * lorentz_norm_qconst(f, pf, q)
        assert lhs == pytest.approx(rhs, rel=1e-11)


def test_classical_factor_identity_weak():
    rng = np.random.default_rng(77)
    f = _f(np.exp(rng.normal(0, 1, 9)), np.exp(rng.normal(0, 1.5, 9)))
    for p in (1.0, 2.5, 4.0):
        pf = ExponentField.constant(p, 9)
        assert classical_lorentz_norm(f, p, math.inf) == pytest.approx(
            lorentz_norm_qconst(f, pf, math.inf), rel=1e-11)


def test_indicator_gets_full_first_plateau():
    # h is the non-strict level norm on [v_{j-1}, v_j); an indicator must
    # integrate its own norm, not zero
    f = _f([0.25, 0.25], [1.0, 1.0])
    p = ExponentField(np.array([2.0, 4.0]))
    na = luxemburg_norm(f, p)
    for q in (1.0, 2.0, 5.0):
        assert lorentz_norm_qconst(f, p, q) == pytest.approx(
            q ** (-1.0 / q) * na, rel=1e-10)


def test_p_infinity_telescopes_to_sup():
    f = _f([0.5, 1.0, 2.0], [0.3, 2.2, 1.1])
    pinf = ExponentField.constant(math.inf, 3)
    for q in (0.7, 1.0, 3.0):
        assert lorentz_norm_qconst(f, pinf, q) == pytest.approx(
            q ** (-1.0 / q) * 2.2, rel=1e-12)
    assert lorentz_norm_qconst(f, pinf, math.inf) == pytest.approx(2.2)


def test_zero_function_everywhere():
    f = _f([1.0, 1.0], [0.0, 0.0])
    p = ExponentField(np.array([1.0, 2.0]))
    assert lorentz_norm_qconst(f, p, 2.0) == 0.0
    assert lorentz_quasinorm(f, p, ExponentField.constant(2.0, 2)) == 0.0
    assert lorentz_equiv_expression(f, p, ExponentField.constant(2.0, 2)) == 0.0


def test_identity_p1_example():
    rep = verify_identity_Lpp(_f([1.0], [3.0]), ExponentField.constant(1.0, 1))
    assert rep.passed
    assert rep.constants["c"] == pytest.approx(2.0)
    assert rep.constants["modular_mid"] == pytest.approx(4.0, rel=1e-11)
    assert rep.constants["modular_low"] == pytest.approx(1.5)
    assert rep.constants["modular_high"] == pytest.approx(6.0, rel=1e-12)


def test_identity_p2_constant():
    rep = verify_identity_Lpp(_f([0.5, 1.5], [1.0, 0.25]),
                              ExponentField.constant(2.0, 2))
    assert rep.passed
    assert rep.constants["c"] == pytest.approx(2.0 / math.sqrt(3.0), rel=1e-13)


def test_identity_random_fields_with_norm_sandwich():
    rng = np.random.default_rng(21)
    for _ in range(25):
        n = int(rng.integers(1, 40))
        f = _f(np.exp(rng.normal(0, 1, n)), np.exp(rng.normal(0, 1.5, n)))
        p = ExponentField(rng.uniform(0.5, 8.0, n))
        rep = verify_identity_Lpp(f, p, include_norm_sandwich=True)
        assert rep.passed, rep.summary()


def test_quasi_triangle_exact_inclusion():
    rng = np.random.default_rng(31)
    for f, g, p, q in pair_samples(rng, 25):
        rep = verify_quasi_triangle(f, g, p, q)
        assert rep.passed, rep.summary()


def test_lemma_ratio_within_dyadic_band():
    # G and H agree on powers of two, so the infima differ by at most 2
    rng = np.random.default_rng(41)
    lo, hi = math.inf, 0.0
    for f, p, q in lemma_samples(rng, 40):
        qn = lorentz_quasinorm(f, p, q)
        ex = lorentz_equiv_expression(f, p, q)
        if qn == 0.0:
            assert ex == 0.0
            continue
        r = ex / qn
        lo, hi = min(lo, r), max(hi, r)
        assert 0.5 * (1 - 1e-9) <= r <= 2.0 * (1 + 1e-9)
    assert hi / lo > 1.0  # the family actually exercises both directions


def test_quasinorm_homogeneity():
    rng = np.random.default_rng(51)
    f = _f(np.exp(rng.normal(0, 1, 12)), np.exp(rng.normal(0, 1.4, 12)))
    p = ExponentField(rng.uniform(0.6, 6.0, 12))
    q = ExponentField(rng.uniform(0.6, 6.0, 12))
    base = lorentz_quasinorm(f, p, q)
    for c in (3.7, 0.23, 2.0):
        got = lorentz_quasinorm(SampledFunction(f.grid, c * f.values), p, q)
        assert got == pytest.approx(c * base, rel=1e-9)


def test_quasinorm_matches_levelset_norm_for_constant_q():
    # both definitions hit the same dyadic family; constant q admits the
    # closed plateau form, the quasinorm must stay within the lemma band
    rng = np.random.default_rng(61)
    for _ in range(10):
        n = int(rng.integers(2, 24))
        f = _f(np.exp(rng.normal(0, 1, n)), np.exp(rng.normal(0, 1.3, n)))
        p = ExponentField(rng.uniform(0.6, 6.0, n))
        qc = float(rng.uniform(0.7, 5.0))
        qn = lorentz_quasinorm(f, p, ExponentField.constant(qc, n))
        ls = lorentz_norm_qconst(f, p, qc)
        assert ls > 0.0
        band = 2.0 ** (1.0 / min(qc, 1.0)) * 2.0  # dyadic + plateau-vs-level slack
        assert qn / ls < band and ls / qn < band
