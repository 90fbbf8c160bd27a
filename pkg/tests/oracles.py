"""Independent reference computations used to cross-check the library.

Nothing here imports from insulexp's solver internals: the periodic circle
solver discretizes the full circle (no half-interval reduction), the
exponent oracle is plain bisection, and the sphere pencil is assembled by
direct dense quadrature without any banding or parity blocking.
"""

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh


def periodic_circle_eigs(beta: float, n_nodes: int, k: int = 5) -> np.ndarray:
    """Lowest k eigenvalues of -(p u')' = lam p u on [0, 2pi), p = 1 + beta cos 2t."""
    h = 2.0 * np.pi / n_nodes
    t = h * np.arange(n_nodes)
    p_node = 1.0 + beta * np.cos(2.0 * t)
    p_face = 1.0 + beta * np.cos(2.0 * (t + 0.5 * h))  # face between i and i+1
    main = (p_face + np.roll(p_face, 1)) / h**2
    side = -p_face[:-1] / h**2
    corner = -p_face[-1] / h**2
    K = sp.diags(
        [main, side, side, [corner], [corner]],
        [0, 1, -1, n_nodes - 1, -(n_nodes - 1)],
        format="csc",
    )
    W = sp.diags([p_node], [0], format="csc")
    vals = eigsh(
        K, k=k, M=W, sigma=-0.05, which="LM",
        v0=np.ones(n_nodes), return_eigenvectors=False,
    )
    return np.sort(vals)


def periodic_circle_pair(beta: float, n_nodes: int = 1024):
    """(lambda_1, lambda_2) by Richardson over (n, 2n); the grid ratio is exact."""
    lo = periodic_circle_eigs(beta, n_nodes)
    hi = periodic_circle_eigs(beta, 2 * n_nodes)
    lam1 = (4.0 * hi[1] - lo[1]) / 3.0
    lam2 = (4.0 * hi[2] - lo[2]) / 3.0
    return lam1, lam2


def exponent_bisect(lam: float, dim_n: int, iters: int = 100) -> float:
    """Positive root of s^2 + (n-1) s = lam by bisection."""
    if lam == 0.0:
        return 0.0
    lo, hi = 0.0, max(lam, 1.0)
    while hi**2 + (dim_n - 1) * hi < lam:
        hi *= 2.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid**2 + (dim_n - 1) * mid <= lam:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def dense_sphere_pencil(basis, a_nodes: np.ndarray):
    """Mass and stiffness by direct quadrature, no banding or blocking."""
    wa = (basis.weights * a_nodes)[:, None]
    M = basis.values.T @ (wa * basis.values)
    K = (basis.grad_theta.T @ (wa * basis.grad_theta)
         + basis.grad_phi.T @ (wa * basis.grad_phi))
    return M, K
