"""Runnable invariant suites with measured-versus-required records.

Each check produces a CheckRecord holding the measured number, the limit
it is held to, and the comparison direction, so the CLI can print one
line per check and exit nonzero if anything fails.  The suites cover the
load-bearing identities of every module at tolerances matching the
package's accuracy contracts; they are meant to run in seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from . import circle as _circle
from . import disk as _disk
from . import perturbation as _perturb
from . import reduction as _reduce
from . import sphere as _sphere
from .anisotropy import alpha_of_lambda, analytic_bounds, normalize

__all__ = ["CheckRecord", "run_suite", "SUITES"]


@dataclass(frozen=True)
class CheckRecord:
    suite: str
    name: str
    measured: float
    limit: float
    relation: str       # "<=" or ">="
    passed: bool

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return (
            f"[{tag}] {self.suite}: {self.name}: "
            f"measured {self.measured:.6e} {self.relation} {self.limit:.6e}"
        )


def _le(suite: str, name: str, measured: float, limit: float) -> CheckRecord:
    m = float(measured)
    return CheckRecord(suite, name, m, float(limit), "<=", m <= limit)


def _ge(suite: str, name: str, measured: float, limit: float) -> CheckRecord:
    m = float(measured)
    return CheckRecord(suite, name, m, float(limit), ">=", m >= limit)


def anisotropy_suite(seed: int = 0) -> List[CheckRecord]:
    s = "anisotropy"
    out = []
    out.append(_le(s, "alpha(1; n=3) hits sqrt(2)-1",
                   abs(alpha_of_lambda(1.0, 3) - (math.sqrt(2.0) - 1.0)), 1e-14))
    out.append(_le(s, "alpha(2; n=4) hits (sqrt(17)-3)/2",
                   abs(alpha_of_lambda(2.0, 4) - (math.sqrt(17.0) - 3.0) / 2.0), 1e-14))
    out.append(_le(s, "alpha(0) = 0 exactly", abs(alpha_of_lambda(0.0, 3)), 0.0))
    lams = np.linspace(0.0, 5.0, 41)
    vals = [alpha_of_lambda(x, 3) for x in lams]
    out.append(_ge(s, "alpha strictly increasing in lambda",
                   float(np.min(np.diff(vals))), 1e-12))
    resid = max(
        abs(a * a + 2.0 * a - l) for l, a in zip(lams, vals)
    )
    out.append(_le(s, "alpha solves its quadratic", resid, 1e-13))
    m = normalize([3.0, 1.0], 3)
    b = analytic_bounds(m)
    out.append(_le(s, "rational bound below n-2",
                   b.mu_upper_rational - b.upper_n_minus_2, 0.0))
    return out


def circle_suite(seed: int = 0) -> List[CheckRecord]:
    s = "circle"
    out = []
    res1 = _circle.solve_dirichlet_mu1(_circle.DirichletSLProblem(1.0))
    out.append(_le(s, "mu1(beta=1) anchor 3", abs(res1.mu1 - 3.0), 1e-8))
    res0 = _circle.solve_dirichlet_mu1(_circle.DirichletSLProblem(0.0))
    out.append(_le(s, "mu1(beta=0) anchor 1", abs(res0.mu1 - 1.0), 1e-10))
    out.append(_le(s, "observed order near 2",
                   abs(res0.estimated_order - 2.0), 0.2))
    v = res1.eigenfunction
    out.append(_le(s, "eigenfunction symmetric about pi/2",
                   float(np.max(np.abs(v - v[::-1]))), 1e-9))
    out.append(_ge(s, "eigenfunction positive", float(np.min(v)), 0.0))

    worst = -np.inf
    gap_min = np.inf
    for bt in np.linspace(0.05, 1.0, 39):
        mu = _circle.solve_dirichlet_mu1(
            _circle.DirichletSLProblem(float(bt), 256)
        ).mu1
        worst = max(worst, mu - (2.0 + bt) / (2.0 - bt))
        pair = _circle.lambda1_lambda2_circle(
            normalize([1.0 + bt, 1.0 - bt + 1e-12], 3), grid_size=128
        )
        gap_min = min(gap_min, pair.lambda2 - pair.lambda1)
    out.append(_le(s, "rational upper bound on 39-point grid", worst, 1e-8))
    out.append(_ge(s, "lambda1 < lambda2 for beta > 0", gap_min, 0.0))
    return out


def sphere_suite(seed: int = 20250815) -> List[CheckRecord]:
    s = "sphere"
    out = []
    basis = _sphere.build_basis(16)
    out.append(_le(s, "Gram identity at L=16", basis.gram_deviation, 1e-12))

    iso = _sphere.solve_lambda1_sphere(normalize([1.0, 1.0, 1.0], 4))
    out.append(_le(s, "isotropic lambda1 = 2", abs(iso.lambda1 - 2.0), 1e-6))
    out.append(_le(s, "isotropic multiplicity 3", abs(iso.multiplicity - 3), 0.0))

    a_vals = _sphere.weight_at_nodes(basis, (3.0, 1.0, 1.0))
    M, K = _sphere.assemble_pencil(basis, a_vals)
    i00 = basis.col_index(0, 0, "c")
    i20 = basis.col_index(2, 0, "c")
    out.append(_ge(s, "mass couples degree 0 and 2 under anisotropy",
                   abs(M[i00, i20]), 0.05))
    out.append(_le(s, "no stiffness row for the constant mode",
                   float(np.max(np.abs(K[i00]))), 1e-12))

    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(12):
        d = np.exp(rng.uniform(np.log(0.1), np.log(10.0), size=3))
        r = _sphere.solve_lambda1_sphere(
            normalize(d, 4), convergence_tol=None
        )
        worst = max(worst, r.lambda1 - 2.0)
    out.append(_le(s, "lambda1 <= n-2 random sweep", worst, 1e-6))

    r = _sphere.solve_lambda1_sphere(normalize([1.3, 1.0, 0.8], 4))
    pure = all(p.count(-1) == 1 for p in r.parities)
    out.append(_ge(s, "cluster vectors odd in exactly one coordinate",
                   1.0 if pure else 0.0, 1.0))

    unit = np.ones_like(basis.weights)
    f = _sphere.project_onto_basis(basis, basis.coords[:, 0])
    ip = _sphere.weighted_inner_product(basis, unit, f, f)
    out.append(_le(s, "normalized average of x1^2 is 1/3",
                   abs(ip - 1.0 / 3.0), 1e-12))
    return out


def perturb_suite(seed: int = 0) -> List[CheckRecord]:
    s = "perturb"
    out = []
    # circle direction cos(2 theta) = xi1^2 - xi2^2
    setup3 = _perturb.perturbation_setup(3, (1.0, -1.0))
    c1_a = _perturb.first_order_coefficient(setup3, 1)
    c1_b = _perturb.first_order_coefficient(setup3, 2)
    out.append(_le(s, "n=3 first-order coefficients are -1 and +1",
                   max(abs(c1_a + 1.0), abs(c1_b - 1.0)), 1e-12))
    sc = _perturb.series_coefficients(setup3, 2)
    out.append(_le(s, "n=3 second-order coefficient is 3/8",
                   abs(sc.c2 - 0.375), 1e-10))
    out.append(_le(s, "corrector orthogonal to its branch",
                   sc.rhs_orthogonality, 1e-10))
    pred = _perturb.predict_lambda1(setup3, -0.3)
    direct = _circle.lambda1_lambda2_circle(normalize([0.7, 1.3], 3)).lambda1
    out.append(_le(s, "n=3 prediction at eps=-0.3 within 0.01",
                   abs(pred.minimum - direct), 0.01))

    setup4 = _perturb.perturbation_setup(4, (1.0, 0.0, 0.0))
    c1 = [_perturb.first_order_coefficient(setup4, j) for j in (1, 2, 3)]
    out.append(_le(s, "n=4 first-order coefficients (-4/5, 2/5, 2/5)",
                   max(abs(c1[0] + 0.8), abs(c1[1] - 0.4), abs(c1[2] - 0.4)),
                   1e-10))
    sc4 = _perturb.series_coefficients(setup4, 1)
    out.append(_le(s, "n=4 second-order coefficient is 396/875",
                   abs(sc4.c2 - 396.0 / 875.0), 1e-8))

    # dual route: nodal quadrature versus pencil quadratic form
    basis = _sphere.build_basis(16)
    b_vals = _sphere.weight_at_nodes(basis, (1.0, 0.0, 0.0))
    Mb, Kb = _sphere.assemble_pencil(basis, b_vals)
    unit_M, _ = _sphere.assemble_pencil(basis, np.ones_like(b_vals))
    f = setup4.base_eigenpairs[0]
    ray = (f @ (Kb - 2.0 * Mb) @ f) / (f @ unit_M @ f)
    out.append(_le(s, "n=4 c1 equals Rayleigh directional derivative",
                   abs(c1[0] - ray), 1e-10))
    return out


def pde_suite(seed: int = 0) -> List[CheckRecord]:
    s = "pde"
    out = []
    small = _disk.PolarGrid(128, 256)      # pointwise checks
    grid = _disk.PolarGrid(256, 512)       # decay fits need >= 5 dyadic annuli
    m41 = normalize([4.0, 1.0], 3)

    ones = np.ones(small.n_theta)
    const = _disk.solve_weighted_disk(m41, 0.1, ones, grid=small)
    out.append(_le(s, "constant boundary reproduced",
                   float(np.max(np.abs(const.values - 1.0))), 1e-10))

    # exact separable samples: fitted slope must recover sqrt(2)-1
    iso = normalize([1.0, 1.0], 3)
    alpha = math.sqrt(2.0) - 1.0
    r = grid.radii[:, None]
    th = grid.thetas[None, :]
    exact = _disk.PolarField(
        grid=grid,
        values=r ** alpha * np.cos(th),
        weight=_disk.WeightFunction(iso),
        weight_nodes=np.ones(grid.n_theta),
        eps=0.0,
        solver_residual=0.0,
    )
    fit = _disk.measure_decay(exact)
    out.append(_le(s, "exact power-law slope recovered",
                   abs(fit.fitted_exponent - alpha), 0.005))

    y1s = _circle.eigenfunction_on_circle(m41, small.n_theta, which=1)
    hom = _disk.solve_weighted_disk(m41, 0.0, 1.0 + y1s, grid=small)
    rings = [2 ** -k for k in range(1, 5)]
    avgs = [
        _disk.weighted_circle_average(hom, int(small.n_r * rho) - 1)
        for rho in rings
    ]
    out.append(_le(s, "mean value constant across rings",
                   float(np.max(np.abs(np.diff(avgs)))), 1e-6))
    out.append(_le(s, "maximum principle",
                   max(float(np.max(hom.values)) - float(np.max(1.0 + y1s)),
                       float(np.min(1.0 + y1s)) - float(np.min(hom.values))),
                   1e-12))

    y1 = _circle.eigenfunction_on_circle(m41, grid.n_theta, which=1)
    reg0 = _disk.solve_weighted_disk(m41, 0.0, y1, grid=grid)
    reg = _disk.solve_weighted_disk(m41, 1e-4, y1, grid=grid)
    f0, fe = _disk.measure_decay(reg0), _disk.measure_decay(reg)
    cutoff = 10.0 * math.sqrt(1e-4)
    devs = [
        abs(we / w0 - 1.0)
        for rho, w0, we in zip(f0.radii, f0.omega, fe.omega)
        if rho / 2.0 > cutoff
    ]
    out.append(_le(s, "eps-term localized below 10 sqrt(eps)",
                   max(devs), 0.05))
    return out


def reduce_suite(seed: int = 0) -> List[CheckRecord]:
    s = "reduce"
    out = []
    n = 3
    zero = [np.zeros((n, n))] * n
    diag_field = _reduce.AffineCoefficientField(
        dim_n=n, A0=np.diag([2.0, 3.0, 4.0]), slopes=zero, sigma=0.25
    )
    r = _reduce.fixed_point_x0(diag_field, 0.01)
    out.append(_le(s, "constant field fixes the origin",
                   float(np.linalg.norm(r.x0)), 0.0))
    want = np.diag([2.0 ** -0.5, 3.0 ** -0.5, 4.0 ** -0.5])
    out.append(_le(s, "constant field diagonal transform",
                   float(np.max(np.abs(r.transform - want))), 1e-14))

    e13 = np.zeros((n, n))
    e13[0, 2] = e13[2, 0] = 1.0
    field = _reduce.AffineCoefficientField(
        dim_n=n,
        A0=np.eye(n) + 0.05 * e13,
        slopes=[0.1 * e13, np.zeros((n, n)), np.zeros((n, n))],
        sigma=0.8,
    )
    res = _reduce.fixed_point_x0(field, 0.01)
    out.append(_le(s, "fixed-point residual", res.residual, 1e-12))
    out.append(_le(s, "fixed point inside its ball",
                   float(np.linalg.norm(res.x0[:-1])) - res.r_bound, 1e-14))
    out.append(_le(s, "collinearity residual", res.collinearity_residual, 1e-10))
    B = res.transform @ field.evaluate(res.x0) @ res.transform.T
    out.append(_le(s, "normal form at the mapped point",
                   float(np.max(np.abs(B - np.eye(n)))), 1e-11))
    out.append(_ge(s, "self-map confined to the R-ball",
                   1.0 if _reduce.self_map_check(field, 0.01).ok else 0.0, 1.0))
    res2 = _reduce.fixed_point_x0(_reduce.transformed_field(field, res), 0.01)
    out.append(_le(s, "idempotence after normalization",
                   float(np.linalg.norm(res2.x0)), 1e-12))
    return out


SUITES: Dict[str, Callable[[int], List[CheckRecord]]] = {
    "anisotropy": anisotropy_suite,
    "circle": circle_suite,
    "sphere": sphere_suite,
    "perturb": perturb_suite,
    "pde": pde_suite,
    "reduce": reduce_suite,
}


def run_suite(name: str, seed: Optional[int] = None) -> List[CheckRecord]:
    """Run one named suite, or all of them in a fixed order."""
    if name == "all":
        records: List[CheckRecord] = []
        for key in ("anisotropy", "circle", "sphere", "perturb", "pde", "reduce"):
            records.extend(run_suite(key, seed))
        return records
    if name not in SUITES:
        from .errors import InputError

        raise InputError(
            f"unknown suite {name!r}; choose from "
            f"{', '.join([*SUITES, 'all'])}"
        )
    fn = SUITES[name]
    return fn(seed) if seed is not None else fn()
