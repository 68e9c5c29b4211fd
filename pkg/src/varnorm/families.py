"""Seeded sample families for the verification suites.

Every generator draws from a caller-supplied numpy Generator, so a whole
battery is reproducible from one seed.
"""

from __future__ import annotations

import math
from typing import Callable, Iterator

import numpy as np

from .core import ExponentField, MeasureGrid, SampledFunction


def _measures(rng: np.random.Generator, n: int, total: float | None = None) -> np.ndarray:
    m = np.exp(rng.normal(0.0, 1.0, n))
    if total is not None:
        m *= total / m.sum()
    return m


def _step_values(rng: np.random.Generator, n: int, spread: float = 1.5,
                 zero_frac: float = 0.2) -> np.ndarray:
    # few distinct levels -> genuine plateaus in the rearrangement
    k = int(rng.integers(1, 7))
    levels = np.exp(rng.normal(0.0, spread, k))
    v = levels[rng.integers(0, k, n)]
    v[rng.random(n) < zero_frac] = 0.0
    if not v.any():
        v[int(rng.integers(0, n))] = levels[0]
    return v


def _smooth_values(rng: np.random.Generator, n: int, spread: float = 1.5,
                   zero_frac: float = 0.15) -> np.ndarray:
    v = np.exp(rng.normal(0.0, spread, n))
    v[rng.random(n) < zero_frac] = 0.0
    if not v.any():
        v[int(rng.integers(0, n))] = 1.0
    return v


def random_exponents(rng: np.random.Generator, n: int, lo: float = 0.5,
                     hi: float = 8.0, const_frac: float = 0.5) -> ExponentField:
    """Constant or per-cell field in [lo, hi], mixed by const_frac."""
    if rng.random() < const_frac:
        return ExponentField.constant(float(rng.uniform(lo, hi)), n)
    return ExponentField(rng.uniform(lo, hi, n))


def identity_samples(rng: np.random.Generator, count: int = 200
                     ) -> Iterator[tuple[SampledFunction, ExponentField]]:
    """(f, p) pairs for the modular sandwich, grids of 8..256 cells."""
    for i in range(count):
        n = int(rng.integers(8, 257))
        grid = MeasureGrid(_measures(rng, n))
        maker = _step_values if i % 3 == 0 else _smooth_values
        f = SampledFunction(grid, maker(rng, n))
        yield f, random_exponents(rng, n, 0.5, 8.0)


def step_function_samples(rng: np.random.Generator, count: int = 100,
                          n_lo: int = 8, n_hi: int = 64
                          ) -> Iterator[SampledFunction]:
    """Nonnegative step functions for the constant-exponent consistency run."""
    for _ in range(count):
        n = int(rng.integers(n_lo, n_hi + 1))
        grid = MeasureGrid(_measures(rng, n))
        yield SampledFunction(grid, _step_values(rng, n))


def lemma_samples(rng: np.random.Generator, count: int = 200,
                  n_lo: int = 8, n_hi: int = 48
                  ) -> Iterator[tuple[SampledFunction, ExponentField, ExponentField]]:
    """(f, p, q) with variable exponents for the quasinorm equivalence."""
    for _ in range(count):
        n = int(rng.integers(n_lo, n_hi + 1))
        grid = MeasureGrid(_measures(rng, n))
        f = SampledFunction(grid, _smooth_values(rng, n, spread=1.2))
        p = random_exponents(rng, n, 0.6, 6.0, const_frac=0.25)
        q = random_exponents(rng, n, 0.6, 6.0, const_frac=0.25)
        yield f, p, q


def pair_samples(rng: np.random.Generator, count: int = 100,
                 n_lo: int = 8, n_hi: int = 48
                 ) -> Iterator[tuple[SampledFunction, SampledFunction,
                                     ExponentField, ExponentField]]:
    """(f, g, p, q) on a shared grid for the quasi-triangle check."""
    for _ in range(count):
        n = int(rng.integers(n_lo, n_hi + 1))
        grid = MeasureGrid(_measures(rng, n))
        f = SampledFunction(grid, _smooth_values(rng, n, spread=1.2))
        g = SampledFunction(grid, _smooth_values(rng, n, spread=1.2))
        p = random_exponents(rng, n, 0.6, 6.0, const_frac=0.25)
        q = random_exponents(rng, n, 0.6, 6.0, const_frac=0.25)
        yield f, g, p, q


def embedding_samples(rng: np.random.Generator, indicators: int = 100) -> list[dict]:
    """Sample dicts for verify_embeddings, indicator-heavy by design."""
    out: list[dict] = []
    for _ in range(indicators):
        n = int(rng.integers(8, 64))
        # normalized total keeps every subset at mass <= 1
        grid = MeasureGrid(_measures(rng, n, total=float(rng.uniform(0.05, 0.95))))
        mask = rng.random(n) < rng.uniform(0.1, 0.9)
        if not mask.any():
            mask[int(rng.integers(0, n))] = True
        p0 = np.asarray(random_exponents(rng, n, 0.5, 4.0, const_frac=0.3).values)
        out.append({
            "kind": "indicator",
            "f": SampledFunction(grid, mask.astype(float)),
            "p0": ExponentField(p0),
            "p1": ExponentField(p0 * rng.uniform(1.05, 3.0, n)),
        })
    for i in range(10):
        n = int(rng.integers(8, 48))
        grid = MeasureGrid(_measures(rng, n))
        f = SampledFunction(grid, _smooth_values(rng, n, spread=1.0))
        qc = (0.7, 1.0, 2.0, 4.0, math.inf)[i % 5]
        out.append({"kind": "linfty", "f": f, "q": ExponentField.constant(qc, n)})
    for _ in range(6):
        n = int(rng.integers(8, 32))
        grid = MeasureGrid(_measures(rng, n))
        f = SampledFunction(grid, _smooth_values(rng, n, spread=1.0, zero_frac=0.0))
        out.append({"kind": "linfty", "f": f,
                    "q": ExponentField(rng.uniform(0.7, 5.0, n))})
    for _ in range(8):
        n = int(rng.integers(8, 32))
        grid = MeasureGrid(_measures(rng, n))
        f = SampledFunction(grid, _smooth_values(rng, n, spread=1.0, zero_frac=0.0))
        q0 = rng.uniform(0.6, 3.0, n)
        out.append({
            "kind": "q_monotone",
            "f": f,
            "p": random_exponents(rng, n, 0.7, 6.0, const_frac=0.25),
            "q0": ExponentField(q0),
            "q1": ExponentField(q0 + rng.uniform(0.0, 3.0, n)),
        })
    for _ in range(8):
        n = int(rng.integers(8, 32))
        grid = MeasureGrid(_measures(rng, n, total=float(rng.uniform(0.1, 0.9))))
        f = SampledFunction(grid, _smooth_values(rng, n, spread=1.0, zero_frac=0.0))
        p0 = rng.uniform(0.6, 3.0, n)
        out.append({
            "kind": "p_monotone",
            "f": f,
            "q": random_exponents(rng, n, 0.7, 4.0, const_frac=0.25),
            "p0": ExponentField(p0),
            "p1": ExponentField(p0 + rng.uniform(0.0, 3.0, n)),
        })
    return out


def k_functional_samples(rng: np.random.Generator, count: int = 50,
                         n_t: int = 20
                         ) -> Iterator[tuple[SampledFunction, np.ndarray]]:
    """(f, t-values) pairs; exponent p = 1 is fixed by the caller."""
    for _ in range(count):
        n = int(rng.integers(8, 33))
        grid = MeasureGrid(_measures(rng, n))
        f = SampledFunction(grid, _step_values(rng, n))
        # log-uniform t reaching past mu(supp f), where K saturates at ||f||_1
        hi = 2.0 * grid.total_measure
        t = np.exp(rng.uniform(math.log(1e-3), math.log(hi), n_t))
        yield f, np.sort(t)


def interpolation_cases(rng: np.random.Generator, count: int = 50,
                        decades: float = 6.0
                        ) -> Iterator[tuple[Callable, Callable]]:
    """(factory, p_builder) pairs sampling one analytic profile per level.

    factory(level) resamples f on a grid refined ``level`` times; each
    profile swings through the requested number of decades so the level
    windows stay deep.
    """
    amp = 0.5 * decades * math.log(10.0)
    for _ in range(count):
        base_n = int(rng.integers(24, 49))
        length = float(rng.uniform(0.8, 1.2))
        # full oscillation inside the domain fixes the value range exactly
        om = float(rng.uniform(2.0 * math.pi / length, 2.0 * math.pi / length + 6.0))
        ph = float(rng.uniform(0.0, 2.0 * math.pi))
        c0 = float(np.exp(rng.normal(0.0, 1.0)))
        p_lo = float(rng.uniform(1.0, 2.5))
        p_hi = float(rng.uniform(3.0, 8.0))
        om_p = float(rng.uniform(1.0, 5.0))
        ph_p = float(rng.uniform(0.0, 2.0 * math.pi))

        def factory(level: int, base_n=base_n, length=length, om=om, ph=ph,
                    c0=c0, amp=amp) -> SampledFunction:
            n = base_n * (2 ** level)
            grid = MeasureGrid.from_edges(np.linspace(0.0, length, n + 1))
            x = grid.midpoints
            return SampledFunction(grid, c0 * np.exp(amp * np.cos(om * x + ph)))

        def p_builder(grid: MeasureGrid, p_lo=p_lo, p_hi=p_hi, om_p=om_p,
                      ph_p=ph_p) -> ExponentField:
            x = grid.midpoints
            band = 0.5 * (1.0 + np.sin(om_p * x + ph_p))
            return ExponentField(p_lo + (p_hi - p_lo) * band)

        yield factory, p_builder
