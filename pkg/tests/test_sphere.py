import numpy as np
import pytest

from insulexp import (
    NotConverged,
    SizeMismatch,
    UnsupportedDimension,
    assemble_pencil,
    build_basis,
    normalize,
    project_onto_basis,
    solve_lambda1_sphere,
    weight_at_nodes,
    weighted_inner_product,
)

from .oracles import dense_sphere_pencil


def test_basis_gram_identity():
    basis = build_basis(10)
    assert basis.gram_deviation < 1e-12
    assert np.sum(basis.weights) == pytest.approx(4.0 * np.pi, rel=1e-14)


def test_banded_assembly_matches_dense_quadrature():
    basis = build_basis(8)
    rng = np.random.default_rng(11)
    for _ in range(3):
        diag = 10.0 ** rng.uniform(-1.0, 1.0, size=3)
        a_vals = weight_at_nodes(basis, diag)
        M, K = assemble_pencil(basis, a_vals)
        Md, Kd = dense_sphere_pencil(basis, a_vals)
        scale = np.max(np.abs(Kd))
        assert np.max(np.abs(M - Md)) < 1e-12 * scale
        assert np.max(np.abs(K - Kd)) < 1e-12 * scale


def test_plain_assembly_path_matches_dense_quadrature():
    basis = build_basis(6)
    a_vals = weight_at_nodes(basis, (1.3, 1.0, 0.8))
    M, K = assemble_pencil(basis, a_vals, quadratic_even=False)
    Md, Kd = dense_sphere_pencil(basis, a_vals)
    assert np.max(np.abs(M - Md)) == 0.0
    assert np.max(np.abs(K - Kd)) == 0.0


def test_assembly_rejects_wrong_node_count():
    basis = build_basis(6)
    with pytest.raises(SizeMismatch):
        assemble_pencil(basis, np.ones(7))


def test_isotropic_eigenvalue_and_multiplicity():
    res = solve_lambda1_sphere(normalize([1.0, 1.0, 1.0], 4))
    assert res.lambda1 == pytest.approx(2.0, abs=1e-10)
    assert res.multiplicity == 3
    # one odd coordinate per cluster member
    seen = set()
    for sx, sy, sz in res.parities:
        assert (sx, sy, sz).count(-1) == 1
        seen.add((sx, sy, sz).index(-1))
    assert seen == {0, 1, 2}


def test_eigenvector_normalization_convention():
    m = normalize([1.3, 1.0, 0.8], 4)
    res = solve_lambda1_sphere(m)
    a_vals = weight_at_nodes(res.basis, m.a)
    v = res.eigenvectors[:, 0]
    assert weighted_inner_product(res.basis, a_vals, v, v) == pytest.approx(1.0, abs=1e-11)


def test_solver_rejects_other_dimensions():
    with pytest.raises(UnsupportedDimension):
        solve_lambda1_sphere(normalize([1.0, 1.0], 3))
    with pytest.raises(SizeMismatch):
        solve_lambda1_sphere(normalize([1.0, 1.0, 1.0], 4), level=16, check_level=16)


def test_truncation_gate_raises_then_clears():
    m = normalize([3.0, 1.0, 0.5], 4)
    with pytest.raises(NotConverged):
        solve_lambda1_sphere(m, level=16)
    res = solve_lambda1_sphere(m, level=20)
    assert res.convergence_gap < 1e-7
    assert res.lambda1 == pytest.approx(1.0573667462169516, abs=1e-8)
    assert res.multiplicity == 1


def test_tolerance_none_records_gap_without_raising():
    m = normalize([3.0, 1.0, 0.5], 4)
    res = solve_lambda1_sphere(m, level=16, convergence_tol=None)
    assert res.convergence_gap > 1e-7


def test_upper_bound_random_sweep():
    rng = np.random.default_rng(20250815)
    for _ in range(10):
        diag = 10.0 ** rng.uniform(-0.5, 0.5, size=3)
        res = solve_lambda1_sphere(normalize(diag, 4), level=12, convergence_tol=None)
        assert res.lambda1 <= 2.0 + 1e-6


def test_lambda1_decreasing_in_leading_eigenvalue():
    vals = [
        solve_lambda1_sphere(normalize([a1, 1.0, 1.0], 4), convergence_tol=None).lambda1
        for a1 in (1.0, 10.0, 100.0)
    ]
    assert vals[0] > vals[1] > vals[2]


def test_projection_recovers_coefficients():
    basis = build_basis(8)
    rng = np.random.default_rng(5)
    coef = rng.normal(size=basis.n_cols)
    nodes = basis.values @ coef
    assert np.max(np.abs(project_onto_basis(basis, nodes) - coef)) < 1e-12


def test_coordinate_second_moment():
    basis = build_basis(8)
    ones = np.ones_like(basis.weights)
    for k in range(3):
        c = project_onto_basis(basis, basis.coords[:, k])
        assert weighted_inner_product(basis, ones, c, c) == pytest.approx(1.0 / 3.0, abs=1e-13)
