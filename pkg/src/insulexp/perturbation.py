"""Eigenvalue perturbation series about a base weight on the sphere or circle.

For the weighted pencil with weight w = 1 + mu*b, b(xi) = sum_j b_j xi_j^2
even in every coordinate, the first eigenvalue branch through each base
eigenfunction f_j (odd in xi_j, even in the others) expands as

    lambda_j(mu0 + eps) = lambda_base + eps*c1 + eps^2*c2 + O(eps^3),

and the perturbed first eigenvalue is the minimum over branches.  Because b
is even, parity decouples the branches and no general degenerate
perturbation machinery is needed: each branch is handled inside its own
parity class.

Coefficients are evaluated by nodal quadrature (uniform trapezoid with
2048 circle nodes for n=3, the harmonic Galerkin grid for n=4); the
first-order corrector v1 comes from the deflated resolvent system in
coefficient space.  At the isotropic base point (mu0 = 0, the only case
the validation suite exercises) the base eigenpairs are the normalized
coordinate functions with eigenvalue n - 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from . import sphere as _sphere
from .errors import (
    DegenerateWeight,
    DimensionMismatch,
    QuadratureFailure,
    SingularResolvent,
)

__all__ = [
    "PerturbationSetup",
    "SeriesCoefficients",
    "Lambda1Prediction",
    "perturbation_setup",
    "first_order_coefficient",
    "second_order_coefficient",
    "series_coefficients",
    "predict_lambda1",
]

_CIRCLE_NODES = 2048
_CIRCLE_KMAX = 32
_COND_LIMIT = 1e12
_DENOM_FLOOR = 1e-12


@dataclass(eq=False)
class PerturbationSetup:
    """Base point and direction of the eigenvalue series.

    b_diag are the quadratic-form coefficients of the perturbation
    b(xi) = sum_j b_j xi_j^2 (signs unrestricted); mu0 is the base
    parameter, with weight 1 + mu0*b required positive.  base_eigenpairs
    holds one coefficient vector per branch, normalized to
    average((1+mu0*b) f^2) = 1; odd_axes records the coordinate each
    branch is odd in (0-based).
    """

    dim_n: int
    b_diag: Tuple[float, ...]
    mu0: float
    base_eigenvalue: float
    base_eigenpairs: List[np.ndarray]
    odd_axes: Tuple[int, ...]
    # tabulated workspace (shared by all branch computations)
    values: np.ndarray          # basis at quadrature nodes
    grads: Tuple[np.ndarray, ...]  # metric-corrected gradient components
    quad_w: np.ndarray          # quadrature weights, sum = |S^{n-2}|
    b_vals: np.ndarray
    w0_vals: np.ndarray
    parity_class: np.ndarray
    area: float

    @property
    def branch_count(self) -> int:
        return len(self.base_eigenpairs)

    def _avg(self, node_values: np.ndarray) -> float:
        return float(np.dot(self.quad_w, node_values) / self.area)

    def _mat(self, weight_vals: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(mass, stiffness) for a nodal weight, normalized-average convention."""
        wv = (self.quad_w * weight_vals)[:, None] / self.area
        M = self.values.T @ (wv * self.values)
        K = sum(G.T @ (wv * G) for G in self.grads)
        return M, K


def _circle_tables(nq: int, kmax: int):
    theta = 2.0 * np.pi * np.arange(nq) / nq
    cols = [(0, "c")] + [(k, t) for k in range(1, kmax + 1) for t in ("c", "s")]
    nc = len(cols)
    B = np.empty((nq, nc))
    G = np.empty((nq, nc))
    parity = np.empty(nc, dtype=np.int8)  # class in {0,1,2,3}
    r2 = np.sqrt(2.0)
    for j, (k, t) in enumerate(cols):
        if k == 0:
            B[:, j] = 1.0
            G[:, j] = 0.0
            sx, sy = 1, 1
        elif t == "c":
            B[:, j] = r2 * np.cos(k * theta)
            G[:, j] = -r2 * k * np.sin(k * theta)
            sx, sy = (-1) ** k, 1
        else:
            B[:, j] = r2 * np.sin(k * theta)
            G[:, j] = r2 * k * np.cos(k * theta)
            sx, sy = (-1) ** (k + 1), -1
        parity[j] = (sx > 0) * 2 + (sy > 0)
    w = np.full(nq, 2.0 * np.pi / nq)
    coords = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    return cols, B, G, w, coords, parity


def perturbation_setup(
    dim_n: int,
    b_diag,
    mu0: float = 0.0,
    level: int = 16,
) -> PerturbationSetup:
    """Tabulate the workspace and base eigenpairs for a perturbation direction.

    At mu0 = 0 the base eigenpairs are written down exactly (normalized
    coordinate functions, eigenvalue n-2); at mu0 != 0 each odd-coordinate
    parity class is solved for its lowest pencil eigenvalue and only the
    branches tied (1e-9 relative) with the overall minimum are kept.
    """
    if dim_n not in (3, 4):
        raise DimensionMismatch(f"perturbation series covers n in {{3, 4}}, got {dim_n}")
    b = tuple(float(x) for x in np.atleast_1d(np.asarray(b_diag, dtype=float)))
    if len(b) != dim_n - 1:
        raise DimensionMismatch(
            f"need {dim_n - 1} quadratic-form coefficients for n={dim_n}, got {len(b)}"
        )

    if dim_n == 3:
        _, B, G, w, coords, pclass = _circle_tables(_CIRCLE_NODES, _CIRCLE_KMAX)
        grads = (G,)
        area = 2.0 * np.pi
        odd_classes = [int(pclass[1]), int(pclass[2])]  # cos(theta), sin(theta) columns
    else:
        basis = _sphere.build_basis(level)
        B = basis.values
        grads = (basis.grad_theta, basis.grad_phi)
        w = basis.weights
        coords = basis.coords
        pclass = basis.parity_class.astype(int)
        area = 4.0 * np.pi
        odd_classes = []
        for ax in range(3):
            j = basis.col_index(1, *([(1, "c"), (1, "s"), (0, "c")][ax]))
            odd_classes.append(int(pclass[j]))

    b_vals = (coords ** 2) @ np.asarray(b)
    w0_vals = 1.0 + mu0 * b_vals
    if w0_vals.min() <= 0.0:
        raise DegenerateWeight(
            f"base weight 1 + mu0*b is not positive (min {w0_vals.min():.3e})"
        )

    setup = PerturbationSetup(
        dim_n=dim_n,
        b_diag=b,
        mu0=mu0,
        base_eigenvalue=float(dim_n - 2),
        base_eigenpairs=[],
        odd_axes=tuple(range(dim_n - 1)),
        values=B,
        grads=grads,
        quad_w=w,
        b_vals=b_vals,
        w0_vals=w0_vals,
        parity_class=np.asarray(pclass),
        area=area,
    )

    if mu0 == 0.0:
        # exact base eigenpairs: normalized coordinate functions, expanded
        # against the plain mass matrix (covers either basis normalization)
        pairs = []
        scale = np.sqrt(float(dim_n - 1))
        M0, _ = setup._mat(np.ones_like(b_vals))
        for ax in range(dim_n - 1):
            node_vals = scale * coords[:, ax]
            coef = np.linalg.solve(M0, B.T @ (w * node_vals) / area)
            coef[np.abs(coef) < 1e-12 * np.max(np.abs(coef))] = 0.0
            pairs.append(coef)
        setup.base_eigenpairs = pairs
        setup.odd_axes = tuple(range(dim_n - 1))
        return setup

    # anisotropic base point: lowest eigenpair per odd-coordinate class
    from scipy.linalg import eigh

    M0, K0 = setup._mat(w0_vals)
    branch = []
    for ax, cls in enumerate(odd_classes):
        idx = np.where(setup.parity_class == cls)[0]
        vals, vecs = eigh(K0[np.ix_(idx, idx)], M0[np.ix_(idx, idx)])
        lam = float(vals[0])
        full = np.zeros(B.shape[1])
        full[idx] = vecs[:, 0]
        full /= np.sqrt(full @ M0 @ full)
        if np.dot(w * w0_vals, (B @ full) * coords[:, ax]) < 0:
            full = -full
        branch.append((lam, ax, full))
    lam_min = min(t[0] for t in branch)
    kept = [t for t in branch if t[0] - lam_min <= 1e-9 * max(lam_min, 1.0)]
    setup.base_eigenvalue = lam_min
    setup.base_eigenpairs = [t[2] for t in kept]
    setup.odd_axes = tuple(t[1] for t in kept)
    return setup


def _branch_arrays(setup: PerturbationSetup, j: int):
    if not 1 <= j <= setup.branch_count:
        raise DimensionMismatch(
            f"branch index must satisfy 1 <= j <= {setup.branch_count}, got {j}"
        )
    f = setup.base_eigenpairs[j - 1]
    fv = setup.values @ f
    gv = [G @ f for G in setup.grads]
    return f, fv, gv


def first_order_coefficient(setup: PerturbationSetup, j: int) -> float:
    """First eigenvalue derivative along the branch of f_j, by nodal quadrature."""
    _, fv, gv = _branch_arrays(setup, j)
    lam = setup.base_eigenvalue
    grad2 = sum(g * g for g in gv)
    den = setup._avg(setup.w0_vals * fv * fv)
    if abs(den) < _DENOM_FLOOR:
        raise QuadratureFailure(f"normalization integral degenerate ({den:.3e})")
    return setup._avg(setup.b_vals * (grad2 - lam * fv * fv)) / den


@dataclass(eq=False)
class SeriesCoefficients:
    """Both series coefficients of one branch plus the corrector diagnostics.

    v1 is returned in the representation natural to the dimension: grid
    samples on the circle quadrature nodes (n=3) or coefficients in the
    harmonic basis (n=4).  v1_coeffs always holds the coefficient form.
    resolvent_norm is the operator norm of the deflated discrete resolvent,
    the quantity controlling the series' convergence radius.
    """

    j: int
    c1: float
    c2: float
    v1: np.ndarray
    v1_coeffs: np.ndarray
    resolvent_norm: float
    rhs_orthogonality: float


def series_coefficients(setup: PerturbationSetup, j: int) -> SeriesCoefficients:
    """c1, c2, and the first-order corrector v1 for branch j.

    v1 solves the deflated resolvent system inside f_j's parity class and
    is gauged orthogonal to f_j in the weighted inner product at mu0.
    Raises SingularResolvent when the deflated system's condition number
    passes 1e12 (spectral gap too small for the series to make sense).
    """
    f, fv, gv = _branch_arrays(setup, j)
    lam = setup.base_eigenvalue
    c1 = first_order_coefficient(setup, j)

    Mw, Kw = setup._mat(setup.w0_vals)
    Mb, Kb = setup._mat(setup.b_vals)
    r_full = Kb @ f - lam * (Mb @ f) - c1 * (Mw @ f)
    rnorm = np.linalg.norm(r_full)
    orth = abs(f @ r_full) / rnorm if rnorm > 0 else 0.0
    if orth > 1e-9:
        raise QuadratureFailure(
            f"resolvent right-hand side not orthogonal to the base branch "
            f"(relative defect {orth:.3e})"
        )

    cls = int(setup.parity_class[int(np.argmax(np.abs(f)))])
    idx = np.where(setup.parity_class == cls)[0]
    A = (Kw - lam * Mw)[np.ix_(idx, idx)]
    fc = f[idx]
    r = r_full[idx]

    shift = abs(lam) + 1.0
    B_defl = A + shift * np.outer(fc, fc)
    cond = np.linalg.cond(B_defl)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise SingularResolvent(
            f"deflated resolvent condition number {cond:.3e} exceeds {_COND_LIMIT:.1e}"
        )
    x = np.linalg.solve(B_defl, -r)

    Mw_c = Mw[np.ix_(idx, idx)]
    x -= fc * (fc @ Mw_c @ x) / (fc @ Mw_c @ fc)
    v = np.zeros_like(f)
    v[idx] = x

    ev = np.linalg.eigvalsh(A)
    ev_abs = np.sort(np.abs(ev))
    res_norm = float(1.0 / ev_abs[1]) if ev_abs.size > 1 and ev_abs[1] > 0 else np.inf

    v1v = setup.values @ v
    gv1 = [G @ v for G in setup.grads]
    den = setup._avg(setup.w0_vals * fv * fv)
    if abs(den) < _DENOM_FLOOR:
        raise QuadratureFailure(f"normalization integral degenerate ({den:.3e})")
    num = setup._avg(
        setup.b_vals * sum(g1 * g2 for g1, g2 in zip(gv1, gv))
        - (lam * setup.b_vals + c1 * setup.w0_vals) * v1v * fv
        - c1 * setup.b_vals * fv * fv
    )
    c2 = num / den

    return SeriesCoefficients(
        j=j,
        c1=c1,
        c2=c2,
        v1=v1v if setup.dim_n == 3 else v,
        v1_coeffs=v,
        resolvent_norm=res_norm,
        rhs_orthogonality=orth,
    )


def second_order_coefficient(
    setup: PerturbationSetup, j: int
) -> Tuple[float, np.ndarray]:
    """(c2, v1) for branch j; see series_coefficients for the full record."""
    sc = series_coefficients(setup, j)
    return sc.c2, sc.v1


@dataclass(frozen=True)
class Lambda1Prediction:
    eps: float
    per_branch: Tuple[float, ...]
    minimum: float
    min_axis: int                     # odd coordinate of the minimizing branch
    base_eigenvalue: float
    c1: Tuple[float, ...]
    c2: Tuple[float, ...]


def predict_lambda1(setup: PerturbationSetup, eps: float) -> Lambda1Prediction:
    """Second-order prediction of lambda_1 at mu0 + eps, per branch and minimized."""
    if np.min(1.0 + (setup.mu0 + eps) * setup.b_vals) <= 0.0:
        raise DegenerateWeight(
            f"weight 1 + (mu0+eps)*b loses positivity at eps={eps}"
        )
    series = [series_coefficients(setup, j) for j in range(1, setup.branch_count + 1)]
    vals = tuple(
        setup.base_eigenvalue + eps * s.c1 + eps * eps * s.c2 for s in series
    )
    kmin = int(np.argmin(vals))
    return Lambda1Prediction(
        eps=eps,
        per_branch=vals,
        minimum=float(vals[kmin]),
        min_axis=setup.odd_axes[kmin],
        base_eigenvalue=setup.base_eigenvalue,
        c1=tuple(s.c1 for s in series),
        c2=tuple(s.c2 for s in series),
    )
