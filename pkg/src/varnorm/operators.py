"""Hardy and maximal operators, weak-type ratios, glued-exponent sweeps.

The sweep machinery reproduces a failure of exponent interpolation: the
family f_eps(t) = t^{-1/4} |ln t|^{-1/4-eps} chi_{(0,1/2]} keeps a finite
L_4 norm while ||T_{1/2} f_eps||_{4/3} diverges like (ln 1/delta)^{1/4} as
the grid is extended toward 0, even though the glued endpoint weak-type
bounds both hold.  Exponents above 1/2 (the control case) make the image
norm converge instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .core import ExponentField, MeasureGrid, SampledFunction, check_same_grid
from .lebesgue import luxemburg_norm
from .lorentz import lorentz_norm_qconst
from .report import VerificationReport

__all__ = [
    "hardy_op",
    "maximal_op_1d",
    "weak_type_ratio",
    "GluedExponentPair",
    "make_glued_pair",
    "glued_function",
    "glued_operator",
    "geometric_grid",
    "singular_sample",
    "SweepRow",
    "counterexample_sweep",
    "marcinkiewicz_predicate",
    "question28_experiment",
]

DEFAULT_DELTAS = (2.0 ** -8, 2.0 ** -16, 2.0 ** -32, 2.0 ** -64)


def _require_geometry(f: SampledFunction) -> np.ndarray:
    if f.grid.edges is None:
        raise ValueError("operator needs a 1-D grid with geometry")
    return f.grid.edges


def hardy_op(f: SampledFunction, alpha: float) -> SampledFunction:
    """(T_alpha f)(x) = x^{-alpha-1} int_0^x f, exact for piecewise-constant f.

    Values are taken at cell midpoints; mass left of the first edge is zero.
    """
    edges = _require_geometry(f)
    if not alpha > 0.0:
        raise ValueError("alpha must be positive")
    if edges[0] < 0.0:
        raise ValueError("hardy operator needs a grid in [0, inf)")
    vals = K.hardy(edges, np.asarray(f.values, dtype=np.float64), alpha)
    return SampledFunction(f.grid, vals)


def maximal_op_1d(f: SampledFunction) -> SampledFunction:
    """Sup of interval averages of |f| over cell-aligned intervals, exact."""
    edges = _require_geometry(f)
    return SampledFunction(f.grid, K.maximal(edges, f.abs_values))


def weak_type_ratio(tf: SampledFunction, f: SampledFunction,
                    pi_in: ExponentField, pi_out: ExponentField) -> float:
    """sup_lam lam * ||chi_{|Tf|>lam}||_{pi_out} divided by ||f||_{pi_in}.

    The sup over continuous lam is attained at left limits of the breakpoints
    of |Tf|, which is exactly the q = inf level-set norm.
    """
    check_same_grid(f, pi_in)
    check_same_grid(tf, pi_out)
    denom = luxemburg_norm(f, pi_in)
    if denom == 0.0:
        raise ValueError("weak-type ratio needs a nonzero input norm")
    return lorentz_norm_qconst(tf, pi_out, math.inf) / denom


@dataclass(frozen=True)
class GluedExponentPair:
    """Piecewise-constant exponent pairs on a grid glued from two halves.

    Cells [0, n) sit in [0, 1) and carry the p-constants; cells [n, 2n)
    mirror them shifted into [1, 2] and carry the q-constants.  The glued
    grid keeps measures only: offsets below delta next to x = 1 are not
    representable in floating point, and no norm looks at the geometry.
    """

    left_grid: MeasureGrid
    grid: MeasureGrid
    pi0: ExponentField
    pi1: ExponentField
    pi_theta: ExponentField
    p0: float
    p1: float
    q0: float
    q1: float
    theta: float


def _harmonic(theta: float, a: float, b: float) -> float:
    inv = (1.0 - theta) * (0.0 if math.isinf(a) else 1.0 / a)
    inv += theta * (0.0 if math.isinf(b) else 1.0 / b)
    return math.inf if inv == 0.0 else 1.0 / inv


def make_glued_pair(left_grid: MeasureGrid, p0: float, p1: float,
                    q0: float, q1: float, theta: float) -> GluedExponentPair:
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie strictly inside (0, 1)")
    n = left_grid.n_cells
    grid = MeasureGrid(np.concatenate((left_grid.measures, left_grid.measures)))
    pi0 = ExponentField(np.concatenate((np.full(n, p0), np.full(n, q0))))
    pi1 = ExponentField(np.concatenate((np.full(n, p1), np.full(n, q1))))
    pt_left = _harmonic(theta, p0, p1)
    pt_right = _harmonic(theta, q0, q1)
    pi_theta = ExponentField(np.concatenate((np.full(n, pt_left), np.full(n, pt_right))))
    return GluedExponentPair(left_grid, grid, pi0, pi1, pi_theta,
                             p0, p1, q0, q1, theta)


def glued_function(pair: GluedExponentPair, f_left: SampledFunction) -> SampledFunction:
    """Extend a function on the left half by zero onto the glued grid."""
    if f_left.grid.n_cells != pair.left_grid.n_cells:
        raise ValueError("function does not match the left half of the glued grid")
    vals = np.concatenate((f_left.values, np.zeros(pair.left_grid.n_cells)))
    return SampledFunction(pair.grid, vals)


def glued_operator(pair: GluedExponentPair, f: SampledFunction, base) -> SampledFunction:
    """T~f: zero on [0,1), (base applied to f|_{[0,1)}) shifted onto [1,2]."""
    n = pair.left_grid.n_cells
    if f.grid.n_cells != 2 * n:
        raise ValueError("grid does not split into mirrored halves")
    left = SampledFunction(pair.left_grid, f.values[:n])
    image = base(left)
    vals = np.concatenate((np.zeros(n), image.values))
    return SampledFunction(pair.grid, vals)


def geometric_grid(a: float, b: float, cells_per_decade: int = 40,
                   breakpoints: tuple[float, ...] = ()) -> MeasureGrid:
    """Geometric partition of [a, b] with at least the requested density.

    ``breakpoints`` forces exact edges (each section is geometric on its own).
    """
    if not 0.0 < a < b:
        raise ValueError("need 0 < a < b")
    pts = [a] + [x for x in sorted(breakpoints) if a < x < b] + [b]
    edges = [a]
    for lo, hi in zip(pts[:-1], pts[1:]):
        n = max(1, int(math.ceil(math.log10(hi / lo) * cells_per_decade)))
        seg = np.geomspace(lo, hi, n + 1)[1:]
        seg[-1] = hi
        edges.extend(seg.tolist())
    return MeasureGrid.from_edges(np.array(edges))


def singular_sample(grid: MeasureGrid, epsilon: float, cutoff: float = 0.5) -> SampledFunction:
    """f_eps(t) = t^{-1/4} |ln t|^{-1/4-eps} on (0, cutoff], zero beyond."""
    x = grid.midpoints
    with np.errstate(divide="ignore"):
        vals = np.where(
            x <= cutoff,
            x ** -0.25 * np.abs(np.log(x)) ** (-0.25 - epsilon),
            0.0,
        )
    return SampledFunction(grid, vals)


@dataclass(frozen=True)
class SweepRow:
    delta: float
    f_norm: float
    tf_norm: float
    weak_pi0: float
    weak_pi1: float


def counterexample_sweep(epsilon: float, deltas=DEFAULT_DELTAS,
                         cells_per_decade: int = 40,
                         theta: float = 0.5) -> list[SweepRow]:
    """Per delta: ||f_eps||_4 and ||T_{1/2} f_eps||_{4/3} on [delta, 1],
    plus glued weak-type ratios for (pi0, pi0) and (pi1, pi1).
    """
    if not 0.0 < epsilon:
        raise ValueError("epsilon must be positive")
    rows = []
    for delta in deltas:
        if not 0.0 < delta < 0.25:
            raise ValueError("deltas must lie in (0, 1/4)")
        grid = geometric_grid(delta, 1.0, cells_per_decade, breakpoints=(0.5,))
        f = singular_sample(grid, epsilon)
        tf = hardy_op(f, 0.5)
        n4 = ExponentField.constant(4.0, grid.n_cells)
        n43 = ExponentField.constant(4.0 / 3.0, grid.n_cells)
        pair = make_glued_pair(grid, 2.0, math.inf, 1.0, 2.0, theta)
        fg = glued_function(pair, f)
        tg = glued_operator(pair, fg, lambda h: hardy_op(h, 0.5))
        rows.append(SweepRow(
            delta=delta,
            f_norm=luxemburg_norm(f, n4),
            tf_norm=luxemburg_norm(tf, n43),
            weak_pi0=weak_type_ratio(tg, fg, pair.pi0, pair.pi0),
            weak_pi1=weak_type_ratio(tg, fg, pair.pi1, pair.pi1),
        ))
    return rows


def marcinkiewicz_predicate(p0: float, p1: float, q0: float, q1: float,
                            theta: float) -> tuple[float, float, bool]:
    """Interpolated (p, q) from 1/p = (1-theta)/p0 + theta/p1, and p <= q."""
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie strictly inside (0, 1)")
    if p0 == p1 or q0 == q1:
        raise ValueError("endpoint exponent pairs must be distinct")
    p = _harmonic(theta, p0, p1)
    q = _harmonic(theta, q0, q1)
    return p, q, p <= q


def question28_experiment(theta: float = 0.5, epsilon: float = 0.25,
                          deltas=DEFAULT_DELTAS,
                          cells_per_decade: int = 40,
                          weak_bound: float = 1.1) -> VerificationReport:
    """Glued-exponent experiment: endpoint weak types hold, strong type fails.

    With (p0,q0) = (2,1) and (p1,q1) = (inf,2) the interpolated exponent is
    pi_theta = 4 on the left half and 4/3 on the right, so the strong ratio
    ||T~f||_{pi_theta} / ||f||_{pi_theta} reduces to ||Tf||_{4/3} / ||f||_4;
    the sweep shows it climbing without bound while both weak ratios stay
    near or below 1.
    """
    rep = VerificationReport(f"glued operator experiment (theta={theta}, eps={epsilon})")
    rows = counterexample_sweep(epsilon, deltas, cells_per_decade, theta)
    pair = make_glued_pair(geometric_grid(0.25, 1.0), 2.0, math.inf, 1.0, 2.0, theta)
    rep.record("pi_theta_left", pair.pi_theta.values[0])
    rep.record("pi_theta_right", pair.pi_theta.values[-1])
    weak_max = max(max(r.weak_pi0, r.weak_pi1) for r in rows)
    rep.record("weak_ratio_max", weak_max)
    rep.add_check("weak ratios bounded", weak_bound - weak_max, 0.0)
    strong = [r.tf_norm / r.f_norm for r in rows]
    for i, (r, s) in enumerate(zip(rows, strong)):
        rep.record(f"strong_ratio_{i}", s)
        rep.record(f"delta_{i}", r.delta)
    inc = min(b - a for a, b in zip(strong[:-1], strong[1:])) if len(strong) > 1 else 0.0
    rep.add_check("strong ratio strictly increasing", inc, 0.0)
    if len(rows) > 1:
        num = math.log(strong[-1] / strong[0])
        den = math.log(math.log(1.0 / rows[-1].delta) / math.log(1.0 / rows[0].delta))
        rep.record("loglog_slope", num / den)
    return rep
