"""Weighted eigenvalues on the 2-sphere (n = 4) by a spherical-harmonic Galerkin method.

The weight a(xi) = a1 x1^2 + a2 x2^2 + a3 x3^2 enters both sides of

    -div_S(a grad_S u) = lambda a u   on S^2,

and the problem is discretized in the real orthonormal harmonics up to
degree L.  Both pencil matrices are assembled by quadrature that is exact
for the integrands at hand (Gauss-Legendre in cos(theta), uniform
trapezoid in phi), so the only approximation is the basis truncation.

Because the weight is even in every coordinate, the pencil is block
diagonal over the eight parity classes (sx, sy, sz); each class is solved
independently, which keeps degenerate eigenspaces parity-pure without any
post-hoc symmetry adaptation.  A quadratic weight couples harmonics only
with |dl| <= 2 and |dm| <= 2; entries outside that band are structurally
zeroed after assembly.

Truncation control: the solve is repeated at a checking level L_check and
the relative shift of lambda_1 is recorded; it is an error (NotConverged)
only when a tolerance is requested and missed.  Strongly anisotropic
weights (ratios around 100) concentrate the first eigenfunction and need
either a higher L or a loosened tolerance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.special

from .anisotropy import AnisotropyMatrix
from .errors import (
    NotConverged,
    QuadratureFailure,
    SizeMismatch,
    UnsupportedDimension,
)

__all__ = [
    "GalerkinBasis",
    "SphereSpectralResult",
    "build_basis",
    "weight_at_nodes",
    "assemble_pencil",
    "solve_lambda1_sphere",
    "weighted_inner_product",
    "project_onto_basis",
]

_GRAM_TOL = 1e-12


def _legendre_table(l_max: int, x: float):
    """P_l^m(x) and d/dx P_l^m(x) for all 0 <= m <= l <= l_max."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DeprecationWarning)
        p, pd = scipy.special.lpmn(l_max, l_max, x)
    return p, pd  # indexed [m, l]


@dataclass(eq=False)
class GalerkinBasis:
    """Real orthonormal spherical harmonics tabulated on a product quadrature grid.

    Columns are ordered (l, m, kind) with kind "c" (cos m phi) or "s"
    (sin m phi, m >= 1).  values/grad_theta/grad_phi have one row per
    quadrature node; grad_phi already carries the 1/sin(theta) metric
    factor.  weights sum to 4 pi.
    """

    level: int
    cols: List[Tuple[int, int, str]]
    values: np.ndarray        # (n_nodes, n_cols)
    grad_theta: np.ndarray
    grad_phi: np.ndarray
    weights: np.ndarray       # (n_nodes,)
    coords: np.ndarray        # (n_nodes, 3) ambient coordinates of the nodes
    parity: np.ndarray        # (n_cols, 3) signs under x_k -> -x_k
    parity_class: np.ndarray  # (n_cols,) 0..7
    gram_deviation: float
    _col_index: Dict[Tuple[int, int, str], int] = field(default_factory=dict)

    @property
    def n_cols(self) -> int:
        return len(self.cols)

    def col_index(self, l: int, m: int, kind: str) -> int:
        return self._col_index[(l, m, kind)]


_BASIS_CACHE: Dict[int, GalerkinBasis] = {}


def build_basis(level: int, cache: bool = True) -> GalerkinBasis:
    """Tabulate the harmonic basis up to degree `level` on its quadrature grid.

    The grid (level+4 Gauss-Legendre nodes in cos theta, 2*level+8 uniform
    phi nodes) integrates products of two basis functions against any
    quadratic even weight exactly, which is checked by reproducing the Gram
    identity to 1e-12 (QuadratureFailure otherwise).
    """
    if cache and level in _BASIS_CACHE:
        return _BASIS_CACHE[level]
    if level < 2:
        raise SizeMismatch(f"basis level must be >= 2, got {level}")

    nq_t = level + 4
    nq_p = 2 * level + 8
    xs, wt = np.polynomial.legendre.leggauss(nq_t)
    phi = 2.0 * np.pi * np.arange(nq_p) / nq_p
    wp = 2.0 * np.pi / nq_p

    cols: List[Tuple[int, int, str]] = []
    for l in range(level + 1):
        for m in range(l + 1):
            cols.append((l, m, "c"))
            if m > 0:
                cols.append((l, m, "s"))
    nc = len(cols)

    # normalization constants, log-safe in the factorial ratio
    norm = np.zeros((level + 1, level + 1))
    for l in range(level + 1):
        for m in range(l + 1):
            ln = 0.5 * (
                math.log(2 * l + 1)
                - math.log(4.0 * math.pi)
                + math.lgamma(l - m + 1)
                - math.lgamma(l + m + 1)
            )
            norm[m, l] = math.exp(ln) * (math.sqrt(2.0) if m > 0 else 1.0)

    p_tab = np.zeros((nq_t, level + 1, level + 1))   # [node, m, l]
    pd_tab = np.zeros_like(p_tab)
    for q, x in enumerate(xs):
        p, pd = _legendre_table(level, x)
        p_tab[q] = p
        pd_tab[q] = pd

    sin_t = np.sqrt(1.0 - xs * xs)
    cos_mphi = np.cos(np.outer(np.arange(level + 1), phi))  # [m, phi]
    sin_mphi = np.sin(np.outer(np.arange(level + 1), phi))

    n_nodes = nq_t * nq_p
    B = np.zeros((n_nodes, nc))
    Gt = np.zeros((n_nodes, nc))
    Gp = np.zeros((n_nodes, nc))
    parity = np.zeros((nc, 3), dtype=np.int8)

    for j, (l, m, kind) in enumerate(cols):
        rad = norm[m, l] * p_tab[:, m, l]                  # (nq_t,)
        drad = norm[m, l] * pd_tab[:, m, l] * (-sin_t)     # d/dtheta
        if kind == "c":
            az, azd = cos_mphi[m], -m * sin_mphi[m]
            parity[j] = ((-1) ** m, 1, (-1) ** (l + m))
        else:
            az, azd = sin_mphi[m], m * cos_mphi[m]
            parity[j] = ((-1) ** (m + 1), -1, (-1) ** (l + m))
        B[:, j] = np.outer(rad, az).ravel()
        Gt[:, j] = np.outer(drad, az).ravel()
        # 1/sin(theta) is finite here: azd vanishes identically for m=0
        Gp[:, j] = np.outer(rad / sin_t, azd).ravel() if m > 0 else 0.0

    w = np.outer(wt * wp, np.ones(nq_p)).ravel()
    coords = np.empty((n_nodes, 3))
    coords[:, 0] = np.outer(sin_t, np.cos(phi)).ravel()
    coords[:, 1] = np.outer(sin_t, np.sin(phi)).ravel()
    coords[:, 2] = np.outer(xs, np.ones(nq_p)).ravel()

    gram = B.T @ (w[:, None] * B)
    dev = float(np.max(np.abs(gram - np.eye(nc))))
    if dev > _GRAM_TOL:
        raise QuadratureFailure(
            f"Gram identity violated at level {level}: deviation {dev:.3e}"
        )

    pc = ((parity[:, 0] > 0).astype(int) * 4
          + (parity[:, 1] > 0).astype(int) * 2
          + (parity[:, 2] > 0).astype(int))

    basis = GalerkinBasis(
        level=level,
        cols=cols,
        values=B,
        grad_theta=Gt,
        grad_phi=Gp,
        weights=w,
        coords=coords,
        parity=parity,
        parity_class=pc,
        gram_deviation=dev,
        _col_index={c: i for i, c in enumerate(cols)},
    )
    if cache:
        _BASIS_CACHE[level] = basis
    return basis


def weight_at_nodes(basis: GalerkinBasis, diag: Sequence[float]) -> np.ndarray:
    """Evaluate sum_k d_k x_k^2 at the quadrature nodes."""
    d = np.asarray(diag, dtype=float)
    if d.shape != (3,):
        raise SizeMismatch(f"need 3 diagonal entries, got shape {d.shape}")
    return (basis.coords ** 2) @ d


def assemble_pencil(
    basis: GalerkinBasis,
    weight_values: np.ndarray,
    quadratic_even: bool = True,
) -> Tuple[np.ndarray, np.ndarray]:
    """Mass and stiffness matrices for a pointwise weight on the quadrature grid.

    Returns (M, K) with M_ij = int a Y_i Y_j and K_ij = int a grad Y_i . grad Y_j
    over the sphere (unnormalized measure).  With quadratic_even=True
    (anything of the form sum d_k x_k^2) assembly runs per parity class and
    entries outside the |dl| <= 2, |dm| <= 2 band are zeroed exactly.
    """
    a = np.asarray(weight_values, dtype=float)
    if a.shape != basis.weights.shape:
        raise SizeMismatch(
            f"weight values must be given on the {basis.weights.size} quadrature nodes"
        )
    nc = basis.n_cols
    wa = (basis.weights * a)[:, None]
    M = np.zeros((nc, nc))
    K = np.zeros((nc, nc))

    if not quadratic_even:
        M[:] = basis.values.T @ (wa * basis.values)
        K[:] = (basis.grad_theta.T @ (wa * basis.grad_theta)
                + basis.grad_phi.T @ (wa * basis.grad_phi))
        return M, K

    ls = np.array([c[0] for c in basis.cols])
    ms = np.array([c[1] for c in basis.cols])
    for c in range(8):
        idx = np.where(basis.parity_class == c)[0]
        if idx.size == 0:
            continue
        band = ((np.abs(ls[idx][:, None] - ls[idx][None, :]) <= 2)
                & (np.abs(ms[idx][:, None] - ms[idx][None, :]) <= 2))
        Bc = basis.values[:, idx]
        Mc = Bc.T @ (wa * Bc)
        Gtc = basis.grad_theta[:, idx]
        Gpc = basis.grad_phi[:, idx]
        Kc = Gtc.T @ (wa * Gtc) + Gpc.T @ (wa * Gpc)
        Mc[~band] = 0.0
        Kc[~band] = 0.0
        M[np.ix_(idx, idx)] = Mc
        K[np.ix_(idx, idx)] = Kc
    return M, K


@dataclass(eq=False)
class SphereSpectralResult:
    """First nonzero eigenvalue of the weighted sphere pencil with its cluster.

    eigenvectors holds one coefficient column per cluster member, scaled so
    that the normalized average of a*u^2 over the sphere equals 1, with the
    largest coefficient positive.  parities gives the (sx, sy, sz) signs of
    each member; convergence_gap is the relative lambda_1 shift between the
    solve level and the checking level.
    """

    lambda1: float
    multiplicity: int
    eigenvectors: np.ndarray          # (n_cols, multiplicity)
    parities: List[Tuple[int, int, int]]
    convergence_gap: float
    level: int
    check_level: int
    basis: GalerkinBasis


def _all_eigs(basis: GalerkinBasis, diag: Sequence[float]):
    from scipy.linalg import eigh

    a_vals = weight_at_nodes(basis, diag)
    M, K = assemble_pencil(basis, a_vals)
    out = []  # (eigenvalue, class id, full coefficient vector)
    for c in range(8):
        idx = np.where(basis.parity_class == c)[0]
        if idx.size == 0:
            continue
        vals, vecs = eigh(K[np.ix_(idx, idx)], M[np.ix_(idx, idx)])
        for k in range(vals.size):
            full = np.zeros(basis.n_cols)
            full[idx] = vecs[:, k]
            out.append((float(vals[k]), c, full))
    out.sort(key=lambda t: t[0])
    return out, M


def solve_lambda1_sphere(
    m: AnisotropyMatrix,
    level: int = 16,
    check_level: Optional[int] = None,
    convergence_tol: Optional[float] = 1e-7,
    gap_tol: float = 1e-7,
) -> SphereSpectralResult:
    """lambda_1 of the weighted sphere problem for an n=4 curvature matrix.

    The eigenvalue cluster within relative gap_tol of lambda_1 determines
    the reported multiplicity.  convergence_tol=None records the truncation
    gap without enforcing it (useful for sweeps that only consume bounds).
    """
    if m.dim_n != 4:
        raise UnsupportedDimension(
            f"harmonic solver covers n=4 only, got n={m.dim_n}"
        )
    if check_level is None:
        check_level = level + 4
    if check_level <= level:
        raise SizeMismatch(
            f"check_level ({check_level}) must exceed level ({level})"
        )

    basis = build_basis(level)
    eigs, M = _all_eigs(basis, m.a)
    positive = [(v, c, vec) for v, c, vec in eigs if v > 1e-9]
    lam1 = positive[0][0]
    cluster = [t for t in positive if (t[0] - lam1) <= gap_tol * lam1]

    basis_chk = build_basis(check_level)
    eigs_chk, _ = _all_eigs(basis_chk, m.a)
    lam1_chk = next(v for v, _, _ in eigs_chk if v > 1e-9)
    gap = abs(lam1 - lam1_chk) / lam1
    if convergence_tol is not None and gap > convergence_tol:
        raise NotConverged(
            f"lambda_1 truncation gap {gap:.3e} exceeds {convergence_tol:.1e} "
            f"between levels {level} and {check_level}; raise the level or "
            f"loosen the tolerance"
        )

    vecs = np.empty((basis.n_cols, len(cluster)))
    pars = []
    for j, (_, c, vec) in enumerate(cluster):
        # normalized-average scaling: (1/4pi) int a u^2 = 1
        scale = math.sqrt(4.0 * math.pi) / math.sqrt(vec @ M @ vec)
        v = vec * scale
        if v[np.argmax(np.abs(v))] < 0:
            v = -v
        vecs[:, j] = v
        sx = 1 if (c & 4) else -1
        sy = 1 if (c & 2) else -1
        sz = 1 if (c & 1) else -1
        pars.append((sx, sy, sz))

    return SphereSpectralResult(
        lambda1=lam1,
        multiplicity=len(cluster),
        eigenvectors=vecs,
        parities=pars,
        convergence_gap=gap,
        level=level,
        check_level=check_level,
        basis=basis,
    )


def weighted_inner_product(
    basis: GalerkinBasis,
    weight_values: np.ndarray,
    f_coeffs: np.ndarray,
    g_coeffs: np.ndarray,
) -> float:
    """Normalized average (1/4pi) int a f g over the sphere, in coefficient space."""
    f = np.asarray(f_coeffs, dtype=float)
    g = np.asarray(g_coeffs, dtype=float)
    if f.shape != (basis.n_cols,) or g.shape != (basis.n_cols,):
        raise SizeMismatch(
            f"coefficient vectors must have length {basis.n_cols}"
        )
    fv = basis.values @ f
    gv = basis.values @ g
    return float(np.dot(basis.weights * weight_values, fv * gv) / (4.0 * np.pi))


def project_onto_basis(basis: GalerkinBasis, node_values: np.ndarray) -> np.ndarray:
    """Coefficients of a function given by its quadrature-node values."""
    v = np.asarray(node_values, dtype=float)
    if v.shape != basis.weights.shape:
        raise SizeMismatch(
            f"node values must be given on the {basis.weights.size} quadrature nodes"
        )
    return basis.values.T @ (basis.weights * v)
