"""Discrete measure grids, exponent fields, sampled functions, level sequences.

Everything downstream consumes these types.  All of them are immutable after
construction and validate their invariants eagerly; ``validate`` provides the
same checks as a non-raising report for raw arrays (used by the CLI).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "MeasureGrid",
    "ExponentField",
    "SampledFunction",
    "DyadicLevelSequence",
    "Diagnostic",
    "build_level_sequence",
    "validate",
]


def _as_float_array(values: Iterable, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return np.ascontiguousarray(arr)


@dataclass(frozen=True)
class MeasureGrid:
    """Finite family of cells with strictly positive measures.

    ``edges`` optionally carries a 1-D partition x_0 < ... < x_N; measures are
    then the interval lengths (derived, never passed separately).
    """

    measures: np.ndarray
    edges: np.ndarray | None = None

    def __post_init__(self):
        m = _as_float_array(self.measures, "measures")
        object.__setattr__(self, "measures", m)
        if m.size < 1:
            raise ValueError("grid needs at least one cell")
        if not np.all(np.isfinite(m)) or np.any(m <= 0.0):
            bad = int(np.argmin(np.where(np.isfinite(m), m, -np.inf)))
            raise ValueError(f"cell {bad}: measure must be positive and finite")
        if self.edges is not None:
            e = _as_float_array(self.edges, "edges")
            object.__setattr__(self, "edges", e)
            if e.size != m.size + 1:
                raise ValueError("edges must have one more entry than cells")
            if np.any(np.diff(e) <= 0.0):
                raise ValueError("edges must be strictly increasing")
            if not np.array_equal(np.diff(e), m):
                raise ValueError("measures must equal edge differences exactly")

    @classmethod
    def from_edges(cls, edges: Iterable) -> "MeasureGrid":
        e = _as_float_array(edges, "edges")
        return cls(measures=np.diff(e), edges=e)

    @property
    def n_cells(self) -> int:
        return int(self.measures.size)

    @property
    def total_measure(self) -> float:
        return float(np.sum(self.measures))

    @property
    def midpoints(self) -> np.ndarray:
        if self.edges is None:
            raise ValueError("grid has no 1-D geometry")
        return 0.5 * (self.edges[:-1] + self.edges[1:])


@dataclass(frozen=True)
class ExponentField:
    """Per-cell exponent in (0, inf]; p_minus must stay away from zero."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.size < 1:
            raise ValueError("exponent values must be a non-empty 1-D array")
        object.__setattr__(self, "values", np.ascontiguousarray(v))
        if np.any(np.isnan(v)) or np.any(v <= 0.0):
            bad = int(np.argmax(np.isnan(v) | (v <= 0.0)))
            raise ValueError(f"cell {bad}: exponent must satisfy p_minus > 0")

    @classmethod
    def constant(cls, p: float, n_cells: int) -> "ExponentField":
        return cls(np.full(n_cells, float(p)))

    @property
    def n_cells(self) -> int:
        return int(self.values.size)

    @property
    def p_minus(self) -> float:
        return float(np.min(self.values))

    @property
    def p_plus(self) -> float:
        return float(np.max(self.values))

    @property
    def infinity_mask(self) -> np.ndarray:
        return np.isinf(self.values)

    @property
    def is_constant(self) -> bool:
        return bool(np.all(self.values == self.values[0]))


@dataclass(frozen=True)
class SampledFunction:
    """Cell samples of a function; norms only ever see the modulus."""

    grid: MeasureGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if not np.iscomplexobj(v):
            v = v.astype(np.float64)
        if v.ndim != 1:
            raise ValueError("values must be one-dimensional")
        if v.size != self.grid.n_cells:
            raise ValueError("values length must equal the cell count")
        if not np.all(np.isfinite(v)):
            bad = int(np.argmax(~np.isfinite(v)))
            raise ValueError(f"cell {bad}: sample must be finite")
        object.__setattr__(self, "values", np.ascontiguousarray(v))

    @property
    def abs_values(self) -> np.ndarray:
        return np.ascontiguousarray(np.abs(self.values).astype(np.float64))

    def scaled(self, a: float) -> "SampledFunction":
        return SampledFunction(self.grid, self.values * a)


def _floor_log2(x: float) -> int:
    # exact: frexp writes x = m * 2^e with m in [0.5, 1)
    m, e = math.frexp(x)
    return e - 1


def _ceil_log2(x: float) -> int:
    m, e = math.frexp(x)
    return e - 1 if m == 0.5 else e


@dataclass(frozen=True)
class DyadicLevelSequence:
    """The family 2^k * chi_{|f| > 2^k} over a finite window [k_min, k_max].

    Terms outside the window are determined: above k_max all level sets are
    empty; below k_min they all equal the support, so the remaining sum is a
    geometric tail handled analytically by the modular routines.
    """

    f: SampledFunction
    k_min: int
    k_max: int
    strict: bool = True

    @property
    def is_empty(self) -> bool:
        return self.k_max < self.k_min

    @property
    def window(self) -> range:
        return range(self.k_min, self.k_max + 1)

    def indicator(self, k: int) -> np.ndarray:
        thr = math.ldexp(1.0, k)
        a = self.f.abs_values
        return a > thr if self.strict else a >= thr

    def level_values(self, k: int) -> np.ndarray:
        return math.ldexp(1.0, k) * self.indicator(k).astype(np.float64)


def build_level_sequence(f: SampledFunction, strict: bool = True) -> DyadicLevelSequence:
    a = f.abs_values
    pos = a[a > 0.0]
    if pos.size == 0:
        return DyadicLevelSequence(f, 0, -1, strict)
    fmin = float(np.min(pos))
    fmax = float(np.max(pos))
    k_min = _floor_log2(fmin) - 1
    # guard level on top: strict sets are empty at ceil(log2 max), non-strict
    # ones one level higher when max|f| is an exact power of two
    k_max = _ceil_log2(fmax) if strict else _floor_log2(fmax) + 1
    return DyadicLevelSequence(f, k_min, k_max, strict)


@dataclass(frozen=True)
class Diagnostic:
    field_name: str
    cell: int | None
    message: str

    def __str__(self) -> str:
        where = "" if self.cell is None else f" [cell {self.cell}]"
        return f"{self.field_name}{where}: {self.message}"


def validate(measures: Iterable,
             exponents: Sequence[Iterable] = (),
             functions: Sequence[Iterable] = (),
             edges: Iterable | None = None) -> list[Diagnostic]:
    """Report every invariant violation in raw arrays without raising."""
    out: list[Diagnostic] = []
    m = np.asarray(measures, dtype=np.float64).ravel()
    if m.size < 1:
        out.append(Diagnostic("measures", None, "grid needs at least one cell"))
    for i in np.nonzero(~np.isfinite(m) | (m <= 0.0))[0]:
        out.append(Diagnostic("measures", int(i), "measure must be positive and finite"))
    if edges is not None:
        e = np.asarray(edges, dtype=np.float64).ravel()
        if e.size != m.size + 1:
            out.append(Diagnostic("edges", None, "edges must have one more entry than cells"))
        else:
            for i in np.nonzero(np.diff(e) <= 0.0)[0]:
                out.append(Diagnostic("edges", int(i), "edges must be strictly increasing"))
            if not np.array_equal(np.diff(e), m):
                out.append(Diagnostic("edges", None, "measures must equal edge differences exactly"))
    for j, ex in enumerate(exponents):
        v = np.asarray(ex, dtype=np.float64).ravel()
        label = f"exponents[{j}]"
        if v.size != m.size:
            out.append(Diagnostic(label, None, "length must equal the cell count"))
        for i in np.nonzero(np.isnan(v) | (v <= 0.0))[0]:
            out.append(Diagnostic(label, int(i), "p_minus > 0 violated"))
    for j, fn in enumerate(functions):
        v = np.asarray(fn)
        label = f"functions[{j}]"
        if v.size != m.size:
            out.append(Diagnostic(label, None, "length must equal the cell count"))
        for i in np.nonzero(~np.isfinite(v).ravel())[0]:
            out.append(Diagnostic(label, int(i), "sample must be finite"))
    return out


def check_same_grid(f: SampledFunction, *fields: ExponentField) -> None:
    n = f.grid.n_cells
    for fld in fields:
        if fld.n_cells != n:
            raise ValueError("exponent field and function live on different grids")
