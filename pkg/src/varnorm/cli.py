"""Command-line front end: problem files, norms, verifications, sweeps.

Problem files are JSON with a ``format: 1`` marker; exponent arrays accept
the token ``"inf"``.  CSV output is versioned the same way and formatted
with 12 significant digits so runs diff byte-for-byte.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import families
from .core import (Diagnostic, ExponentField, MeasureGrid, SampledFunction,
                   validate)
from .interpolation import (InterpolationParams, k_functional,
                            real_interp_norm, verify_interpolation_theorem)
from .lebesgue import luxemburg_norm
from .lorentz import (identity_constant, lorentz_norm_qconst,
                      lorentz_quasinorm, lorentz_equiv_expression,
                      verify_embeddings, verify_identity_Lpp,
                      verify_quasi_triangle)
from .operators import (DEFAULT_DELTAS, counterexample_sweep,
                        marcinkiewicz_predicate, question28_experiment)
from .rearrangement import classical_lorentz_norm
from .report import VerificationReport

FORMAT_VERSION = 1


class ProblemError(Exception):
    """Carries the cell-level diagnostics for a rejected problem file."""

    def __init__(self, diagnostics):
        super().__init__("invalid problem file")
        self.diagnostics = list(diagnostics)


@dataclass
class ProblemFile:
    grid: MeasureGrid
    f: SampledFunction
    p: ExponentField
    q: ExponentField | None = None
    params: dict = field(default_factory=dict)


def _parse_exponents(raw, name: str, diags: list) -> np.ndarray | None:
    vals = []
    for i, x in enumerate(raw):
        if x == "inf":
            vals.append(math.inf)
        elif isinstance(x, (int, float)) and not isinstance(x, bool):
            vals.append(float(x))
        else:
            diags.append(Diagnostic(name, i, f"expected number or \"inf\", got {x!r}"))
            return None
    return np.asarray(vals, dtype=np.float64)


def _parse_numbers(raw, name: str, diags: list) -> np.ndarray | None:
    for i, x in enumerate(raw):
        if not isinstance(x, (int, float)) or isinstance(x, bool):
            diags.append(Diagnostic(name, i, f"expected number, got {x!r}"))
            return None
    return np.asarray(raw, dtype=np.float64)


def load_problem(path: str) -> ProblemFile:
    """Parse and validate a problem file; raises ProblemError on any defect."""
    diags: list = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ProblemError([Diagnostic("file", None, str(exc))]) from exc
    if not isinstance(doc, dict):
        raise ProblemError([Diagnostic("file", None, "top level must be an object")])
    if doc.get("format") != FORMAT_VERSION:
        diags.append(Diagnostic("format", None,
                                f"expected format {FORMAT_VERSION}, got {doc.get('format')!r}"))
    grid_doc = doc.get("grid")
    if not isinstance(grid_doc, dict) or not ("measures" in grid_doc or "edges" in grid_doc):
        diags.append(Diagnostic("grid", None, "need an object with measures or edges"))
        raise ProblemError(diags)
    edges = None
    if "edges" in grid_doc:
        edges = _parse_numbers(grid_doc["edges"], "grid.edges", diags)
        measures = np.diff(edges) if edges is not None else None
    else:
        measures = _parse_numbers(grid_doc["measures"], "grid.measures", diags)
    fvals = _parse_numbers(doc.get("f", []), "f", diags)
    pvals = _parse_exponents(doc.get("p", []), "p", diags)
    qvals = None
    q_failed = False
    if "q" in doc:
        qvals = _parse_exponents(doc["q"], "q", diags)
        q_failed = qvals is None
    exps = [pvals] if pvals is not None else []
    if qvals is not None:
        exps.append(qvals)
    labels = {"measures": "grid.measures", "exponents[0]": "p" if pvals is not None else "q",
              "exponents[1]": "q", "functions[0]": "f"}
    if measures is not None:
        for d in validate(measures, exponents=exps,
                          functions=[fvals] if fvals is not None else (),
                          edges=edges):
            diags.append(Diagnostic(labels.get(d.field_name, d.field_name),
                                    d.cell, d.message))
    if diags or fvals is None or pvals is None or measures is None or q_failed:
        raise ProblemError(diags)
    grid = MeasureGrid(measures, edges=edges)
    pf = ProblemFile(grid=grid,
                     f=SampledFunction(grid, fvals),
                     p=ExponentField(pvals),
                     q=ExponentField(qvals) if qvals is not None else None,
                     params=doc.get("params", {}) or {})
    return pf


def _exp_tokens(p: ExponentField) -> list:
    return ["inf" if math.isinf(x) else x for x in p.values.tolist()]


def dump_problem(pf: ProblemFile) -> str:
    """Serialize back to the on-disk format; floats round-trip exactly."""
    doc: dict = {"format": FORMAT_VERSION}
    if pf.grid.edges is not None:
        doc["grid"] = {"edges": pf.grid.edges.tolist()}
    else:
        doc["grid"] = {"measures": pf.grid.measures.tolist()}
    doc["f"] = np.real(pf.f.values).tolist()
    doc["p"] = _exp_tokens(pf.p)
    if pf.q is not None:
        doc["q"] = _exp_tokens(pf.q)
    if pf.params:
        doc["params"] = pf.params
    return json.dumps(doc, indent=2)


def _write_csv(path: str, columns, rows, comments=()) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# format: {FORMAT_VERSION}\n")
        for line in comments:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)


def _g12(x: float) -> str:
    return f"{x:.12g}"


def _report_rows(rep: VerificationReport):
    rows = [("check", c.name, _g12(c.slack), _g12(c.tol), int(c.passed))
            for c in rep.checks]
    rows += [("constant", k, _g12(v), "", "") for k, v in rep.constants.items()]
    return rows


def _emit_report(rep: VerificationReport, csv_path: str | None) -> int:
    print(rep.summary())
    if csv_path:
        _write_csv(csv_path, ("kind", "name", "value", "tol", "passed"),
                   _report_rows(rep), comments=(rep.name,))
    return 0 if rep.passed else 1


def _seed(args) -> int:
    env = os.environ.get("VARNORM_SEED")
    return int(env) if env is not None else args.seed


def _cmd_norm(args) -> int:
    pf = load_problem(args.file)
    space = args.space
    if space == "lebesgue":
        value = luxemburg_norm(pf.f, pf.p)
    elif space in ("classical", "lorentz-qconst"):
        if pf.q is None or not pf.q.is_constant:
            raise ProblemError([Diagnostic("q", None, f"{space} needs a constant q field")])
        qc = float(pf.q.values[0])
        if space == "classical":
            if not pf.p.is_constant:
                raise ProblemError([Diagnostic("p", None, "classical needs a constant p field")])
            value = classical_lorentz_norm(pf.f, float(pf.p.values[0]), qc)
        else:
            value = lorentz_norm_qconst(pf.f, pf.p, qc)
    else:  # lorentz-var
        if pf.q is None:
            raise ProblemError([Diagnostic("q", None, "lorentz-var needs a q field")])
        value = lorentz_quasinorm(pf.f, pf.p, pf.q)
    print(f"{value:.7g}")
    if args.csv:
        _write_csv(args.csv, ("space", "value"), [(space, _g12(value))])
    return 0


def _cmd_kfun(args) -> int:
    pf = load_problem(args.file)
    params = InterpolationParams(args.theta, args.q)
    if args.t_grid:
        ts = np.asarray([float(t) for t in args.t_grid.split(",")])
    elif "t_grid" in pf.params:
        ts = np.asarray(pf.params["t_grid"], dtype=np.float64)
    else:
        total = pf.grid.total_measure
        ts = np.geomspace(max(total * 1e-3, 1e-9), 2.0 * total, 20)
    if np.any(ts <= 0.0):
        raise ProblemError([Diagnostic("t-grid", None, "t values must be positive")])
    ks = [k_functional(pf.f, float(t), pf.p, endpoint=args.endpoint) for t in ts]
    norm = real_interp_norm(pf.f, params, pf.p, endpoint=args.endpoint)
    for t, k in zip(ts, ks):
        print(f"t={t:.7g}  K={k:.7g}")
    print(f"interpolation norm (theta={args.theta:g}, q={args.q:g}): {norm:.7g}")
    if args.csv:
        _write_csv(args.csv, ("t", "k"),
                   [(_g12(float(t)), _g12(k)) for t, k in zip(ts, ks)],
                   comments=(f"interp_norm = {_g12(norm)}",))
    return 0


def _merge_worst(rep: VerificationReport, name: str, subs, tol: float) -> None:
    worst = min((c.slack for sub in subs for c in sub.checks), default=math.inf)
    rep.add_check(name, worst, tol)


def _cmd_verify(args) -> int:
    rng = np.random.default_rng(_seed(args))
    what = args.what
    if what == "identity":
        rep = VerificationReport("identity: mixed modular sandwich")
        subs = []
        p_bounds = [math.inf, 0.0]
        for f, p in families.identity_samples(rng, args.count):
            if args.p_const is not None:
                p = ExponentField.constant(args.p_const, f.grid.n_cells)
            p_bounds = [min(p_bounds[0], p.p_minus), max(p_bounds[1], p.p_plus)]
            subs.append(verify_identity_Lpp(f, p, include_norm_sandwich=False))
        _merge_worst(rep, f"sandwich over {args.count} samples", subs, 1e-9)
        if args.p_const is not None:
            rep.record("c", identity_constant(args.p_const))
        else:
            rep.record("c_max", identity_constant(p_bounds[0]))
        return _emit_report(rep, args.csv)
    if what == "quasi-triangle":
        rep = VerificationReport("quasi-triangle levelwise inclusion")
        subs = [verify_quasi_triangle(f, g, p, q)
                for f, g, p, q in families.pair_samples(rng, args.count)]
        _merge_worst(rep, f"inclusion over {args.count} pairs", subs, 0.0)
        rep.record("quasi_const_max",
                   max(s.constants.get("empirical_quasi_constant", 0.0) for s in subs))
        return _emit_report(rep, args.csv)
    if what == "embeddings":
        samples = families.embedding_samples(rng, indicators=args.count)
        return _emit_report(verify_embeddings(samples), args.csv)
    if what == "lemma-equiv":
        rep = VerificationReport("quasinorm vs level-sequence expression")
        ratios = []
        for f, p, q in families.lemma_samples(rng, args.count):
            qn = lorentz_quasinorm(f, p, q)
            ex = lorentz_equiv_expression(f, p, q)
            if qn > 0.0 and math.isfinite(qn) and math.isfinite(ex):
                ratios.append(ex / qn)
        rep.record("ratio_max", max(ratios))
        rep.record("ratio_min", min(ratios))
        rep.add_check("ratio within [1/8, 8]",
                      min(min(ratios) - 0.125, 8.0 - max(ratios)), 0.0)
        return _emit_report(rep, args.csv)
    # interpolation
    cases = families.interpolation_cases(rng, args.count)
    rep = verify_interpolation_theorem(cases, theta=args.theta, q=args.q)
    return _emit_report(rep, args.csv)


def _cmd_counterexample(args) -> int:
    deltas = tuple(d for d in DEFAULT_DELTAS if d >= args.delta_min)
    if not deltas:
        raise ProblemError([Diagnostic("delta-min", None,
                                       "no sweep deltas at or above the requested minimum")])
    rows = counterexample_sweep(args.epsilon, deltas=deltas)
    print(f"epsilon = {args.epsilon:g}")
    for r in rows:
        print(f"delta=2^{math.log2(r.delta):.0f}  |f|_4={r.f_norm:.7g}  "
              f"|Tf|_4/3={r.tf_norm:.7g}  weak0={r.weak_pi0:.7g}  weak1={r.weak_pi1:.7g}")
    if args.csv:
        _write_csv(args.csv,
                   ("delta", "f_norm", "tf_norm", "weak_pi0", "weak_pi1"),
                   [(_g12(r.delta), _g12(r.f_norm), _g12(r.tf_norm),
                     _g12(r.weak_pi0), _g12(r.weak_pi1)) for r in rows])
    return 0


def _cmd_question28(args) -> int:
    p, q, ok = marcinkiewicz_predicate(2.0, math.inf, 1.0, 2.0, theta=args.theta)
    print(f"marcinkiewicz predicate: (p, q) = ({p:.7g}, {q:.7g}), p <= q is {ok}")
    rep = question28_experiment(theta=args.theta, epsilon=args.epsilon)
    return _emit_report(rep, args.csv)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="varnorm",
        description="Variable-exponent Lebesgue/Lorentz norms, interpolation, "
                    "and the Hardy-operator sweep.")
    sub = ap.add_subparsers(dest="command", required=True)

    p_norm = sub.add_parser("norm", help="norm of the function in a problem file")
    p_norm.add_argument("file")
    p_norm.add_argument("--space", required=True,
                        choices=("lebesgue", "classical", "lorentz-qconst", "lorentz-var"))
    p_norm.add_argument("--csv")
    p_norm.set_defaults(func=_cmd_norm)

    p_kfun = sub.add_parser("kfun", help="K-functional profile and interpolation norm")
    p_kfun.add_argument("file")
    p_kfun.add_argument("--theta", type=float, required=True)
    p_kfun.add_argument("--q", type=float, required=True)
    p_kfun.add_argument("--t-grid", dest="t_grid",
                        help="comma-separated t values (default: geometric)")
    p_kfun.add_argument("--endpoint", default="lebesgue",
                        choices=("lebesgue", "weak-lorentz"))
    p_kfun.add_argument("--csv")
    p_kfun.set_defaults(func=_cmd_kfun)

    p_ver = sub.add_parser("verify", help="run a seeded verification family")
    p_ver.add_argument("what", choices=("identity", "quasi-triangle", "embeddings",
                                        "interpolation", "lemma-equiv"))
    p_ver.add_argument("--seed", type=int, default=0,
                       help="family seed (VARNORM_SEED overrides)")
    p_ver.add_argument("--count", type=int, default=50)
    p_ver.add_argument("--p-const", dest="p_const", type=float,
                       help="identity only: force a constant exponent field")
    p_ver.add_argument("--theta", type=float, default=0.5)
    p_ver.add_argument("--q", type=float, default=2.0)
    p_ver.add_argument("--csv")
    p_ver.set_defaults(func=_cmd_verify)

    p_ctr = sub.add_parser("counterexample", help="Hardy-operator norm sweep")
    p_ctr.add_argument("--epsilon", type=float, required=True)
    p_ctr.add_argument("--delta-min", dest="delta_min", type=float, default=0.0)
    p_ctr.add_argument("--csv")
    p_ctr.set_defaults(func=_cmd_counterexample)

    p_q28 = sub.add_parser("question28",
                           help="glued-exponent experiment with the predicate verdict")
    p_q28.add_argument("--theta", type=float, default=0.5)
    p_q28.add_argument("--epsilon", type=float, default=0.25)
    p_q28.add_argument("--csv")
    p_q28.set_defaults(func=_cmd_question28)

    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ProblemError as exc:
        for d in exc.diagnostics:
            print(str(d), file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
