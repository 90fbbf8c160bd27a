"""Exponent reports: route a curvature matrix to the right spectral solver."""

from __future__ import annotations

from typing import Optional

from .anisotropy import (
    AnisotropyMatrix,
    ExponentReport,
    SolverMeta,
    alpha_of_lambda,
    analytic_bounds,
)
from .circle import lambda1_lambda2_circle
from .errors import UnsupportedDimension
from .sphere import solve_lambda1_sphere

__all__ = ["build_exponent_report", "report_to_dict"]


def build_exponent_report(
    m: AnisotropyMatrix,
    circle_grid: int = 512,
    sphere_level: int = 16,
    convergence_tol: Optional[float] = 1e-7,
) -> ExponentReport:
    """lambda_1, its exponent alpha, and the analytic bounds for one matrix.

    n=3 goes through the Dirichlet circle reduction (Richardson
    extrapolated), n=4 through the harmonic Galerkin solver; other
    dimensions have no solver.
    """
    if m.dim_n == 3:
        pair = lambda1_lambda2_circle(m, grid_size=circle_grid)
        lam1, mult = pair.lambda1, pair.multiplicity
        meta = SolverMeta(
            method="dirichlet-flux-richardson",
            resolution=circle_grid,
            extrapolated=True,
        )
    elif m.dim_n == 4:
        res = solve_lambda1_sphere(
            m, level=sphere_level, convergence_tol=convergence_tol
        )
        lam1, mult = res.lambda1, res.multiplicity
        meta = SolverMeta(
            method="harmonic-galerkin",
            resolution=sphere_level,
            extrapolated=False,
        )
    else:
        raise UnsupportedDimension(
            f"no spectral solver for n={m.dim_n} (supported: 3, 4)"
        )
    return ExponentReport(
        lambda1=float(lam1),
        alpha=alpha_of_lambda(float(lam1), m.dim_n),
        multiplicity=int(mult),
        bounds=analytic_bounds(m),
        solver_meta=meta,
        dim_n=m.dim_n,
    )


def report_to_dict(m: AnisotropyMatrix, rep: ExponentReport) -> dict:
    """JSON-ready view of a report (plain Python scalars only)."""
    b = rep.bounds
    bounds = {
        "upper_n_minus_2": b.upper_n_minus_2,
        "mu_upper_rational": b.mu_upper_rational,
        "sqrt_envelope": (
            None
            if b.sqrt_envelope is None
            else {"beta_tilde": b.sqrt_envelope[0], "power_value": b.sqrt_envelope[1]}
        ),
    }
    return {
        "dim_n": rep.dim_n,
        "diag": list(m.a),
        "lambda1": rep.lambda1,
        "alpha": rep.alpha,
        "blowup_exponent": rep.blowup_exponent,
        "gap_exponent": rep.gap_exponent,
        "multiplicity": rep.multiplicity,
        "bounds": bounds,
        "solver": {
            "method": rep.solver_meta.method,
            "resolution": rep.solver_meta.resolution,
            "extrapolated": rep.solver_meta.extrapolated,
        },
    }
