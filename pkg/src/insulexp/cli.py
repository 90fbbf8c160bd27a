"""Command-line front end.

Subcommands mirror the library surface: `exponent` (single-matrix report),
`sweep` (anisotropy-ratio table), `pde-rate` (disk decay experiment),
`perturb` (series-versus-direct table), `reduce` (coefficient normal
form), and `verify` (invariant suites).  Tables are CSV with '.' decimal,
',' separator, a header row, and LF endings; single results are JSON with
shortest round-trip floats.  Identical invocations produce identical
bytes.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 numerical failure.

Report-style paths (`sweep`, `pde-rate`, `perturb`) optionally render a
matplotlib figure next to the delimited output via --figure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

import numpy as np

from .anisotropy import alpha_of_lambda, normalize
from .circle import eigenfunction_on_circle, lambda1_lambda2_circle
from .disk import PolarGrid, measure_decay, solve_weighted_disk
from .errors import InputError, NumericalError
from .perturbation import (
    perturbation_setup,
    series_coefficients,
)
from .reduction import fixed_point_x0, load_field
from .report import build_exponent_report, report_to_dict
from .sphere import solve_lambda1_sphere
from .verify import run_suite

__all__ = ["main"]


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(float(v))  # plain repr even for numpy scalars
    return str(v)


def _csv(header: List[str], rows: List[List]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _float_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise InputError(f"cannot parse number list {text!r}: {exc}") from exc


def _tol_or_none(text: str) -> Optional[float]:
    if text.lower() in ("none", "off"):
        return None
    try:
        return float(text)
    except ValueError as exc:
        raise InputError(f"bad tolerance {text!r}") from exc


def _grid_spec(text: str) -> PolarGrid:
    try:
        nr, nt = (int(x) for x in text.lower().split("x"))
    except ValueError as exc:
        raise InputError(f"grid must look like 256x512, got {text!r}") from exc
    return PolarGrid(nr, nt)


def cmd_exponent(args) -> int:
    m = normalize(_float_list(args.diag), args.n)
    rep = build_exponent_report(
        m,
        circle_grid=args.grid_size,
        sphere_level=args.level,
        convergence_tol=_tol_or_none(args.convergence_tol),
    )
    _emit(_json_text(report_to_dict(m, rep)), args.out)
    return 0


def cmd_sweep(args) -> int:
    ratios = _float_list(args.ratios)
    if not ratios:
        raise InputError("ratio grid is empty")
    if any(r < 1.0 for r in ratios):
        raise InputError(f"ratios must be >= 1 (canonical ordering), got {ratios}")

    def solve(ratio: float) -> dict:
        m = normalize([ratio, 1.0], 3)
        pair = lambda1_lambda2_circle(m, grid_size=args.grid_size)
        a1, a2 = m.a
        return {
            "ratio": ratio,
            "beta": (ratio - 1.0) / (ratio + 1.0),
            "lambda1": pair.lambda1,
            "lambda2": pair.lambda2,
            "alpha": alpha_of_lambda(pair.lambda1, 3),
            "rational_bound": (a1 + 3.0 * a2) / (3.0 * a1 + a2),
        }

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as ex:
            rows = list(ex.map(solve, ratios))
    else:
        rows = [solve(r) for r in ratios]

    table = []
    for i, row in enumerate(rows):
        status = "ok"
        if i > 0 and rows[i]["ratio"] > rows[i - 1]["ratio"] \
                and not row["lambda1"] < rows[i - 1]["lambda1"]:
            status = "violation"
        table.append([
            row["ratio"], row["beta"], row["lambda1"], row["lambda2"],
            row["alpha"], row["rational_bound"], status,
        ])
    _emit(_csv(
        ["ratio", "beta", "lambda1", "lambda2", "alpha", "rational_bound", "status"],
        table,
    ), args.out)

    if args.figure:
        from .figures import sweep_figure

        sweep_figure(rows, args.figure)
    return 0


def _boundary_samples(mode: str, m, n_theta: int) -> np.ndarray:
    if mode == "cos":
        return np.cos(2.0 * np.pi * np.arange(n_theta) / n_theta)
    if mode == "const":
        return np.ones(n_theta)
    if mode == "eig1":
        return eigenfunction_on_circle(m, n_theta, which=1)
    if mode == "eig2":
        return eigenfunction_on_circle(m, n_theta, which=2)
    raise InputError(f"unknown boundary mode {mode!r}")


def cmd_pde_rate(args) -> int:
    m = normalize(_float_list(args.diag), 3)
    coarse = _grid_spec(args.grid)
    grids = [coarse]
    for _ in range(args.levels - 1):
        prev = grids[-1]
        grids.append(PolarGrid(2 * prev.n_r, 2 * prev.n_theta))

    pair = lambda1_lambda2_circle(m)
    lam = pair.lambda2 if args.boundary == "eig2" else pair.lambda1
    alpha_pred = alpha_of_lambda(lam, 3)

    fits = []
    for grid in grids:
        g = _boundary_samples(args.boundary, m, grid.n_theta)
        field = solve_weighted_disk(m, args.eps, g, grid=grid)
        fits.append(measure_decay(field))

    if len(fits) >= 2:
        # second-order Richardson over the last doubling
        fitted = (4.0 * fits[-1].fitted_exponent - fits[-2].fitted_exponent) / 3.0
    else:
        fitted = fits[-1].fitted_exponent

    fine = fits[-1]
    doc = {
        "diag": list(m.a),
        "boundary": args.boundary,
        "eps": args.eps,
        "fitted_exponent": fitted,
        "alpha_predicted": alpha_pred,
        "relative_gap": abs(fitted - alpha_pred) / alpha_pred,
        "rings": {
            "radii": list(fine.radii),
            "omega": list(fine.omega),
            "window": list(fine.window),
        },
        "levels": [
            {
                "grid": f"{g.n_r}x{g.n_theta}",
                "fitted_exponent": fit.fitted_exponent,
            }
            for g, fit in zip(grids, fits)
        ],
    }
    _emit(_json_text(doc), args.out)

    if args.figure:
        from .figures import decay_figure

        decay_figure(fine.radii, fine.omega, fitted, alpha_pred, args.figure)
    return 0


def cmd_perturb(args) -> int:
    b = _float_list(args.b_diag)
    setup = perturbation_setup(args.n, b, level=args.level)
    series = [
        series_coefficients(setup, j) for j in range(1, setup.branch_count + 1)
    ]
    lam0 = setup.base_eigenvalue
    eps_list = _float_list(args.eps_list)

    def direct(eps: float) -> float:
        diag = [1.0 + eps * bk for bk in b]
        m = normalize(diag, args.n)
        if args.n == 3:
            return lambda1_lambda2_circle(m).lambda1
        return solve_lambda1_sphere(m, level=args.level).lambda1

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as ex:
            direct_vals = list(ex.map(direct, eps_list))
    else:
        direct_vals = [direct(e) for e in eps_list]

    rows = []
    for eps, lam_direct in zip(eps_list, direct_vals):
        p1 = min(lam0 + eps * s.c1 for s in series)
        p2 = min(lam0 + eps * s.c1 + eps * eps * s.c2 for s in series)
        rows.append({
            "eps": eps,
            "lambda1_direct": lam_direct,
            "first_order": p1,
            "second_order": p2,
            "err_first": abs(lam_direct - p1),
            "err_second": abs(lam_direct - p2),
        })
    _emit(_csv(
        ["eps", "lambda1_direct", "first_order", "second_order",
         "err_first", "err_second"],
        [[r["eps"], r["lambda1_direct"], r["first_order"], r["second_order"],
          r["err_first"], r["err_second"]] for r in rows],
    ), args.out)

    if args.figure:
        from .figures import perturb_figure

        perturb_figure(rows, args.figure)
    return 0


def cmd_reduce(args) -> int:
    field, eps_file = load_field(args.file)
    eps = args.eps if args.eps is not None else eps_file
    if eps is None:
        raise InputError("eps missing: provide --eps or an 'eps' entry in the file")
    res = fixed_point_x0(field, eps, tol=args.tol, max_iter=args.max_iter)
    doc = {
        "x0": [float(x) for x in res.x0],
        "transform": [[float(x) for x in row] for row in res.transform],
        "residual": res.residual,
        "iterations": res.iterations,
        "collinearity_residual": res.collinearity_residual,
        "r_bound": res.r_bound,
        "eps": res.eps,
    }
    _emit(_json_text(doc), args.out)
    return 0


def cmd_verify(args) -> int:
    records = run_suite(args.suite, args.seed)
    lines = [rec.line() for rec in records]
    failed = sum(1 for rec in records if not rec.passed)
    lines.append(f"{len(records)} checks, {failed} failed")
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="insulexp",
        description="Weighted spherical eigenvalues, gradient blow-up "
                    "exponents, and the degenerate model equation.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, figure=False):
        sp.add_argument("--out", help="write output to this path instead of stdout")
        sp.add_argument("--jobs", type=int, default=1,
                        help="worker threads for sweep-style evaluation")
        if figure:
            sp.add_argument("--figure",
                            help="also render a figure (png/pdf by extension)")

    sp = sub.add_parser("exponent", help="lambda_1 and exponent report for one matrix")
    sp.add_argument("--n", type=int, required=True, choices=(3, 4))
    sp.add_argument("--diag", required=True,
                    help="comma list of n-1 curvature eigenvalues")
    sp.add_argument("--grid-size", type=int, default=512)
    sp.add_argument("--level", type=int, default=16)
    sp.add_argument("--convergence-tol", default="1e-7",
                    help="spectral truncation gate for n=4, or 'none'")
    add_common(sp)
    sp.set_defaults(func=cmd_exponent)

    sp = sub.add_parser("sweep", help="n=3 table over anisotropy ratios")
    sp.add_argument("--ratios", required=True, help="comma list, each >= 1")
    sp.add_argument("--grid-size", type=int, default=512)
    add_common(sp, figure=True)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("pde-rate", help="disk decay-rate experiment (n=3)")
    sp.add_argument("--diag", required=True)
    sp.add_argument("--eps", type=float, default=0.0)
    sp.add_argument("--boundary", default="eig1",
                    choices=("cos", "const", "eig1", "eig2"))
    sp.add_argument("--grid", default="256x512")
    sp.add_argument("--levels", type=int, default=2,
                    help="number of doubled grids (>= 1)")
    add_common(sp, figure=True)
    sp.set_defaults(func=cmd_pde_rate)

    sp = sub.add_parser("perturb", help="series vs direct eigenvalue table")
    sp.add_argument("--n", type=int, required=True, choices=(3, 4))
    sp.add_argument("--b-diag", required=True,
                    help="comma list of n-1 quadratic-form coefficients")
    sp.add_argument("--eps-list", default="0.04,0.02,0.01")
    sp.add_argument("--level", type=int, default=16)
    add_common(sp, figure=True)
    sp.set_defaults(func=cmd_perturb)

    sp = sub.add_parser("reduce", help="coefficient normal form at the gap midpoint")
    sp.add_argument("--file", required=True,
                    help="JSON document: dim_n, sigma, A0, slopes, "
                         "optional eps and domain_radius")
    sp.add_argument("--eps", type=float, default=None,
                    help="overrides the file's eps")
    sp.add_argument("--tol", type=float, default=1e-13)
    sp.add_argument("--max-iter", type=int, default=10_000)
    add_common(sp)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("verify", help="run invariant suites")
    sp.add_argument("--suite", default="all",
                    choices=("anisotropy", "circle", "sphere", "perturb",
                             "pde", "reduce", "all"))
    sp.add_argument("--seed", type=int, default=None,
                    help="seed for randomized property sweeps")
    add_common(sp)
    sp.set_defaults(func=cmd_verify)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
