"""Curvature data, the spherical weight, and the exponent map.

The input to everything downstream is a diagonalized relative-curvature
matrix with eigenvalues a_1 >= ... >= a_{n-1} > 0.  It induces the weight
a(xi) = sum_j a_j xi_j^2 on the unit sphere S^{n-2}, whose first nonzero
weighted Laplace-Beltrami eigenvalue lambda_1 sets the gradient blow-up
rate through the exponent map

    alpha(lambda) = positive root of  alpha^2 + (n-1) alpha - lambda.

Solutions of the reduced degenerate equation scale like r^alpha, so the
gradient grows like r^(alpha-1) as the distance r to the touching axis
shrinks, and like eps^((alpha-1)/2) in terms of the inclusion gap eps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DimensionMismatch,
    NegativeLambda,
    NonPositiveEntry,
)

__all__ = [
    "AnisotropyMatrix",
    "WeightFunction",
    "BoundsRecord",
    "SolverMeta",
    "ExponentReport",
    "normalize",
    "alpha_of_lambda",
    "analytic_bounds",
]


@dataclass(frozen=True)
class AnisotropyMatrix:
    """Diagonalized curvature matrix: dimension n and eigenvalues a_1 >= ... >= a_{n-1} > 0.

    Construct through :func:`normalize`, which sorts and validates.
    """

    dim_n: int
    a: Tuple[float, ...]

    def __post_init__(self):
        if self.dim_n < 3:
            raise DimensionMismatch(f"need n >= 3, got n={self.dim_n}")
        if len(self.a) != self.dim_n - 1:
            raise DimensionMismatch(
                f"need {self.dim_n - 1} eigenvalues for n={self.dim_n}, got {len(self.a)}"
            )
        if any(not (x > 0.0) for x in self.a):
            raise NonPositiveEntry(f"curvature eigenvalues must be > 0, got {self.a}")
        if any(x < y for x, y in zip(self.a, self.a[1:])):
            raise NonPositiveEntry(
                f"eigenvalues must be sorted non-increasing, got {self.a}; use normalize()"
            )

    @property
    def ratio(self) -> float:
        """Anisotropy ratio a_1 / a_{n-1}."""
        return self.a[0] / self.a[-1]

    def scaled(self, c: float) -> "AnisotropyMatrix":
        return normalize([c * x for x in self.a], self.dim_n)


def normalize(raw_diag: Sequence[float], n: int) -> AnisotropyMatrix:
    """Sort raw curvature eigenvalues into canonical (non-increasing) order.

    Parameters
    ----------
    raw_diag : sequence of n-1 positive reals
    n : ambient dimension, >= 3

    Raises
    ------
    NonPositiveEntry
        Any entry <= 0.
    DimensionMismatch
        len(raw_diag) != n - 1 or n < 3.
    """
    if n < 3:
        raise DimensionMismatch(f"need n >= 3, got n={n}")
    if len(raw_diag) != n - 1:
        raise DimensionMismatch(f"need {n - 1} entries for n={n}, got {len(raw_diag)}")
    vals = [float(x) for x in raw_diag]
    if any(not (x > 0.0) for x in vals):
        raise NonPositiveEntry(f"all entries must be > 0, got {raw_diag}")
    return AnisotropyMatrix(dim_n=n, a=tuple(sorted(vals, reverse=True)))


@dataclass(frozen=True)
class WeightFunction:
    """The quadratic-form weight a(xi) = sum_j a_j xi_j^2 on unit vectors xi."""

    source: AnisotropyMatrix

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        """Evaluate at unit vectors; xi has shape (..., n-1)."""
        xi = np.asarray(xi, dtype=float)
        a = np.asarray(self.source.a)
        if xi.shape[-1] != a.shape[0]:
            raise DimensionMismatch(
                f"xi has {xi.shape[-1]} components, weight expects {a.shape[0]}"
            )
        return np.einsum("...j,j->...", xi * xi, a)

    def on_circle(self, theta: np.ndarray) -> np.ndarray:
        """n=3 shortcut: a(theta) = a1 cos^2(theta) + a2 sin^2(theta)."""
        a1, a2 = self.source.a
        theta = np.asarray(theta, dtype=float)
        # (a1+a2)/2 + (a1-a2)/2 cos 2theta, written to keep positivity exact
        return a1 * np.cos(theta) ** 2 + a2 * np.sin(theta) ** 2

    @property
    def range(self) -> Tuple[float, float]:
        return (self.source.a[-1], self.source.a[0])


def alpha_of_lambda(lam: float, n: int) -> float:
    """Positive root of alpha^2 + (n-1) alpha - lambda = 0.

    Evaluated in the rationalized form 2*lambda / ((n-1) + sqrt((n-1)^2 + 4 lambda))
    so that small lambda keeps full relative accuracy (no subtraction of
    nearly equal terms).

    Raises NegativeLambda for lam < 0.
    """
    if n < 3:
        raise DimensionMismatch(f"need n >= 3, got n={n}")
    if lam < 0.0:
        raise NegativeLambda(f"lambda must be >= 0, got {lam}")
    q = float(n - 1)
    return 2.0 * lam / (q + math.sqrt(q * q + 4.0 * lam))


@dataclass(frozen=True)
class BoundsRecord:
    """Analytic eigenvalue bounds evaluated for one curvature matrix.

    upper_n_minus_2 : the universal bound lambda_1 <= n-2, equality iff the
        weight is constant.
    mu_upper_rational : n=3 only; the bound (a1 + 3 a2) / (3 a1 + a2).
    sqrt_envelope : n=3 only; pair (beta_tilde, (1+beta_tilde)^(1/2)) with
        beta_tilde = -(a1-a2)/(a1+a2), the envelope power relevant to
        lambda_1 = mu_1(beta_tilde).  The matching proportionality constants
        are not pinned down analytically, so only the bare power is reported.
    """

    upper_n_minus_2: float
    mu_upper_rational: Optional[float] = None
    sqrt_envelope: Optional[Tuple[float, float]] = None


def analytic_bounds(m: AnisotropyMatrix) -> BoundsRecord:
    """Evaluate the closed-form bounds available for this matrix."""
    upper = float(m.dim_n - 2)
    if m.dim_n != 3:
        return BoundsRecord(upper_n_minus_2=upper)
    a1, a2 = m.a
    rational = (a1 + 3.0 * a2) / (3.0 * a1 + a2)
    beta_tilde = -(a1 - a2) / (a1 + a2)
    return BoundsRecord(
        upper_n_minus_2=upper,
        mu_upper_rational=rational,
        sqrt_envelope=(beta_tilde, math.sqrt(1.0 + beta_tilde)),
    )


@dataclass(frozen=True)
class SolverMeta:
    method: str
    resolution: int
    extrapolated: bool


@dataclass(frozen=True)
class ExponentReport:
    """Computed lambda_1 with its exponent and the analytic bounds beside it."""

    lambda1: float
    alpha: float
    multiplicity: int
    bounds: BoundsRecord
    solver_meta: SolverMeta
    dim_n: int = field(default=3)

    @property
    def blowup_exponent(self) -> float:
        """alpha - 1 < 0: gradient growth power in the distance to the axis."""
        return self.alpha - 1.0

    @property
    def gap_exponent(self) -> float:
        """(alpha - 1)/2: gradient growth power in the inclusion gap eps."""
        return (self.alpha - 1.0) / 2.0

    def residual(self) -> float:
        """|alpha^2 + (n-1) alpha - lambda1|, should be ~ machine epsilon."""
        q = float(self.dim_n - 1)
        return abs(self.alpha * self.alpha + q * self.alpha - self.lambda1)
