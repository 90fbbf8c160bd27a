"""Reduction of variable coefficients to identity-at-a-point normal form.

For a symmetric uniformly elliptic coefficient field A(x) and a gap
parameter eps > 0, the distinguished point x0 = (y*, 0) solves the fixed
point equation of

    T(y) = -(eps/2) * (A_n(y, 0))' / A^nn(y, 0),

where A_n is the last column of A and the prime keeps its first n-1
components.  At the fixed point, x0 - e_n eps/2 is parallel to A_n(x0);
the linear map l = C(x0)^{-1} with C = sqrt(A(x0)) then normalizes the
coefficient to the identity at the mapped point.  Existence of x0 inside
the ball of radius R = sqrt(n-1) eps / (2 sigma^2) follows from a
topological argument; the plain iteration used here converges for the
affine fields in scope (Lipschitz constant O(eps)) and reports honestly
when it does not.

Only affine fields A(x) = A0 + sum_k x_k Ak are supported: they make the
validated-region check and the closed-form references tractable while
exercising the whole construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DimensionMismatch,
    EllipticityViolation,
    InputError,
    NoConvergence,
    NonPositiveEntry,
    NotPositiveDefinite,
)

__all__ = [
    "AffineCoefficientField",
    "ReductionResult",
    "SelfMapReport",
    "matrix_sqrt_spd",
    "fixed_point_x0",
    "self_map_check",
    "transformed_field",
    "field_from_dict",
    "field_to_dict",
    "load_field",
]

_SAMPLE_SEED = 739419
_SYM_TOL = 1e-10


def _ball_points(dim: int, count: int, radius: float) -> np.ndarray:
    """Deterministic quasi-random points of the closed ball (boundary included)."""
    rng = np.random.default_rng(_SAMPLE_SEED)
    dirs = rng.standard_normal((count, dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    # half the points on the boundary sphere (affine fields attain their
    # eigenvalue extremes there), half strictly inside
    radii = np.ones(count)
    radii[1::2] = rng.random(count // 2) ** (1.0 / dim)
    return radius * dirs * radii[:, None]


@dataclass(eq=False)
class AffineCoefficientField:
    """Affine symmetric coefficient field A(x) = A0 + sum_k x_k * Ak.

    sigma is the claimed two-sided ellipticity constant
    (sigma I <= A(x) <= I/sigma) on the ball |x| <= domain_radius;
    construction verifies it by eigenvalue bounds at deterministic sample
    points of that ball and rejects the field otherwise.
    """

    dim_n: int
    A0: np.ndarray
    slopes: List[np.ndarray]
    sigma: float
    domain_radius: float = 1.0

    def __post_init__(self):
        n = self.dim_n
        if n < 2:
            raise DimensionMismatch(f"dim_n must be >= 2, got {n}")
        self.A0 = np.asarray(self.A0, dtype=float)
        self.slopes = [np.asarray(s, dtype=float) for s in self.slopes]
        if self.A0.shape != (n, n):
            raise DimensionMismatch(f"A0 must be {n}x{n}, got {self.A0.shape}")
        if len(self.slopes) != n:
            raise DimensionMismatch(
                f"need {n} slope matrices (one per coordinate), got {len(self.slopes)}"
            )
        for k, s in enumerate(self.slopes):
            if s.shape != (n, n):
                raise DimensionMismatch(f"slope {k} must be {n}x{n}, got {s.shape}")
        for name, mat in [("A0", self.A0)] + [
            (f"slope {k}", s) for k, s in enumerate(self.slopes)
        ]:
            if np.max(np.abs(mat - mat.T)) > _SYM_TOL * max(1.0, np.max(np.abs(mat))):
                raise InputError(f"{name} is not symmetric")
        if not (0.0 < self.sigma <= 1.0):
            raise NonPositiveEntry(
                f"sigma must lie in (0, 1], got {self.sigma}"
            )
        if self.domain_radius <= 0.0:
            raise NonPositiveEntry(
                f"domain_radius must be positive, got {self.domain_radius}"
            )

        pts = np.vstack([np.zeros(n), _ball_points(n, 128, self.domain_radius)])
        slack = 1e-12
        for x in pts:
            ev = np.linalg.eigvalsh(self.evaluate(x))
            if ev[0] < self.sigma - slack or ev[-1] > 1.0 / self.sigma + slack:
                raise EllipticityViolation(
                    f"eigenvalues [{ev[0]:.6g}, {ev[-1]:.6g}] at |x|={np.linalg.norm(x):.3g} "
                    f"escape [{self.sigma:.6g}, {1.0 / self.sigma:.6g}]"
                )

    def evaluate(self, x: Sequence[float]) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim_n,):
            raise DimensionMismatch(
                f"evaluation point must have {self.dim_n} coordinates, got {x.shape}"
            )
        A = self.A0.copy()
        for xk, Sk in zip(x, self.slopes):
            if xk != 0.0:
                A += xk * Sk
        return A


def matrix_sqrt_spd(A: np.ndarray) -> np.ndarray:
    """Unique SPD square root by symmetric eigendecomposition."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"need a square matrix, got shape {A.shape}")
    if np.max(np.abs(A - A.T)) > _SYM_TOL * max(1.0, np.max(np.abs(A))):
        raise NotPositiveDefinite("matrix is not symmetric")
    vals, vecs = np.linalg.eigh(A)
    if vals[0] <= 0.0:
        raise NotPositiveDefinite(f"smallest eigenvalue {vals[0]:.6g} is not positive")
    C = (vecs * np.sqrt(vals)) @ vecs.T
    err = np.linalg.norm(C @ C - A) / np.linalg.norm(A)
    if err > 1e-12:
        raise NotPositiveDefinite(f"square-root backcheck failed at {err:.3e}")
    return C


@dataclass(eq=False)
class ReductionResult:
    """Fixed point, normalizing transform, and residual diagnostics.

    x0 lies in the slice {x_n = 0}; transform is C(x0)^{-1} with
    C = sqrt(A(x0)); collinearity_residual measures the component of
    x0 - e_n eps/2 orthogonal to the last column A_n(x0), which vanishes
    at an exact fixed point.  r_bound is R = sqrt(n-1) eps / (2 sigma^2).
    """

    x0: np.ndarray
    transform: np.ndarray
    residual: float
    iterations: int
    collinearity_residual: float
    r_bound: float
    eps: float


def _t_map(field: AffineCoefficientField, eps: float, y: np.ndarray) -> np.ndarray:
    x = np.append(y, 0.0)
    A = field.evaluate(x)
    col = A[:, -1]
    return -(eps / 2.0) * col[:-1] / col[-1]


def fixed_point_x0(
    field: AffineCoefficientField,
    eps: float,
    tol: float = 1e-13,
    max_iter: int = 10_000,
) -> ReductionResult:
    """Iterate y <- T(y) from 0 and assemble the normalizing transform.

    Raises NoConvergence when the iteration budget runs out (existence is
    guaranteed, convergence of plain iteration is not) and
    EllipticityViolation if an iterate leaves the field's validated ball.
    """
    if eps <= 0.0:
        raise NonPositiveEntry(f"eps must be positive, got {eps}")
    n = field.dim_n
    r_bound = np.sqrt(n - 1) * eps / (2.0 * field.sigma ** 2)

    y = np.zeros(n - 1)
    delta = np.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        y_next = _t_map(field, eps, y)
        if np.linalg.norm(y_next) > field.domain_radius:
            raise EllipticityViolation(
                f"iterate left the validated ball (|y|={np.linalg.norm(y_next):.3g} "
                f"> {field.domain_radius})"
            )
        delta = float(np.linalg.norm(y_next - y))
        y = y_next
        if delta < tol:
            break
    else:
        raise NoConvergence(
            f"fixed-point iteration stalled at step size {delta:.3e} "
            f"after {max_iter} iterations (tol {tol:.1e})"
        )

    x0 = np.append(y, 0.0)
    A_x0 = field.evaluate(x0)
    C = matrix_sqrt_spd(A_x0)
    transform = np.linalg.inv(C)

    residual = float(np.linalg.norm(_t_map(field, eps, y) - y))
    w = x0 - np.eye(n)[-1] * (eps / 2.0)
    a_n = A_x0[:, -1]
    a_hat = a_n / np.linalg.norm(a_n)
    collin = float(np.linalg.norm(w - np.dot(w, a_hat) * a_hat))

    return ReductionResult(
        x0=x0,
        transform=transform,
        residual=residual,
        iterations=iterations,
        collinearity_residual=collin,
        r_bound=float(r_bound),
        eps=eps,
    )


@dataclass(frozen=True)
class SelfMapReport:
    """Sampled check that T maps the ball of radius R into itself."""

    ok: bool
    samples: int
    r_bound: float
    max_ratio: float                        # max |T(y)| / R over samples
    first_violation: Optional[Tuple[float, ...]]

    def __bool__(self) -> bool:
        return self.ok


def self_map_check(
    field: AffineCoefficientField, eps: float, samples: int = 256
) -> SelfMapReport:
    """Evaluate |T(y)| <= R at quasi-random points of the closed R-ball."""
    if eps <= 0.0:
        raise NonPositiveEntry(f"eps must be positive, got {eps}")
    n = field.dim_n
    r_bound = float(np.sqrt(n - 1) * eps / (2.0 * field.sigma ** 2))
    pts = np.vstack([np.zeros(n - 1), _ball_points(n - 1, samples - 1, r_bound)])
    max_ratio = 0.0
    for y in pts:
        ratio = float(np.linalg.norm(_t_map(field, eps, y)) / r_bound)
        if ratio > max_ratio:
            max_ratio = ratio
        if ratio > 1.0 + 1e-12:
            return SelfMapReport(False, samples, r_bound, max_ratio, tuple(y))
    return SelfMapReport(True, samples, r_bound, max_ratio, None)


def transformed_field(
    field: AffineCoefficientField, result: ReductionResult
) -> AffineCoefficientField:
    """The field in normalized coordinates z, where A becomes I at z = 0.

    With l = transform and C = l^{-1}, the substitution x = x0 + C z gives
    B(z) = l A(x0 + C z) l^T, again affine with B(0) = I.  The new sigma and
    domain radius are re-derived conservatively from samples and from the
    shrunken preimage of the original ball.
    """
    l = result.transform
    C = np.linalg.inv(l)
    B0 = l @ field.evaluate(result.x0) @ l.T
    B0 = (B0 + B0.T) / 2.0
    new_slopes = []
    for k in range(field.dim_n):
        Sk = sum(C[j, k] * field.slopes[j] for j in range(field.dim_n))
        Bk = l @ Sk @ l.T
        new_slopes.append((Bk + Bk.T) / 2.0)

    reach = (field.domain_radius - np.linalg.norm(result.x0)) / np.linalg.norm(C, 2)
    radius = max(reach * (1.0 - 1e-12), 1e-12)

    lo, hi = np.inf, 0.0
    for z in np.vstack([np.zeros(field.dim_n),
                        _ball_points(field.dim_n, 128, radius)]):
        A = B0 + sum(zk * Sk for zk, Sk in zip(z, new_slopes))
        ev = np.linalg.eigvalsh(A)
        lo, hi = min(lo, ev[0]), max(hi, ev[-1])
    sigma_new = min(lo, 1.0 / hi) * (1.0 - 1e-9)
    if sigma_new <= 0.0:
        raise EllipticityViolation(
            "transformed field loses ellipticity on its validated ball"
        )

    return AffineCoefficientField(
        dim_n=field.dim_n,
        A0=B0,
        slopes=new_slopes,
        sigma=min(sigma_new, 1.0),
        domain_radius=radius,
    )


def field_from_dict(doc: dict) -> Tuple[AffineCoefficientField, Optional[float]]:
    """Build a field from the structured input document; returns (field, eps).

    Schema: {"dim_n": int, "sigma": float, "A0": n x n rows,
    "slopes": [n matrices], "eps": optional float,
    "domain_radius": optional float}.
    """
    try:
        n = int(doc["dim_n"])
        sigma = float(doc["sigma"])
        A0 = np.asarray(doc["A0"], dtype=float)
        slopes = [np.asarray(s, dtype=float) for s in doc["slopes"]]
        radius = float(doc.get("domain_radius", 1.0))
        eps = float(doc["eps"]) if "eps" in doc else None
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed coefficient document: {exc}") from exc
    field = AffineCoefficientField(
        dim_n=n, A0=A0, slopes=slopes, sigma=sigma, domain_radius=radius
    )
    return field, eps


def field_to_dict(field: AffineCoefficientField, eps: Optional[float] = None) -> dict:
    doc = {
        "dim_n": field.dim_n,
        "sigma": field.sigma,
        "A0": field.A0.tolist(),
        "slopes": [s.tolist() for s in field.slopes],
        "domain_radius": field.domain_radius,
    }
    if eps is not None:
        doc["eps"] = eps
    return doc


def load_field(path: str) -> Tuple[AffineCoefficientField, Optional[float]]:
    """Read a coefficient document (JSON) from disk."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read coefficient file {path!r}: {exc}") from exc
    return field_from_dict(doc)
