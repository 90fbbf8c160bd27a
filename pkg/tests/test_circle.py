import numpy as np
import pytest

from insulexp import (
    DegenerateWeight,
    DimensionMismatch,
    DirichletSLProblem,
    WrongDimension,
    eigenfunction_on_circle,
    lambda1_lambda2_circle,
    normalize,
    solve_dirichlet_mu1,
)

from .oracles import periodic_circle_pair


def test_isotropic_anchor():
    res = solve_dirichlet_mu1(DirichletSLProblem(0.0))
    assert res.mu1 == pytest.approx(1.0, abs=1e-10)
    assert res.extrapolated


def test_degenerate_anchor():
    res = solve_dirichlet_mu1(DirichletSLProblem(1.0))
    assert res.mu1 == pytest.approx(3.0, abs=1e-8)


def test_observed_order_is_quadratic():
    res = solve_dirichlet_mu1(DirichletSLProblem(0.4, grid_size=128))
    assert res.estimated_order == pytest.approx(2.0, abs=0.1)


def test_eigenfunction_shape_and_sign():
    res = solve_dirichlet_mu1(DirichletSLProblem(0.6, grid_size=128))
    v = res.eigenfunction
    assert v.shape == res.theta.shape
    assert np.max(np.abs(v)) == pytest.approx(1.0)
    assert np.min(v) > 0.0
    # weight is even about pi/2, so the ground state is too
    assert np.max(np.abs(v - v[::-1])) < 1e-9


def test_problem_validation():
    with pytest.raises(DegenerateWeight):
        DirichletSLProblem(1.2)
    with pytest.raises(DegenerateWeight):
        DirichletSLProblem(-1.0)
    with pytest.raises(DimensionMismatch):
        DirichletSLProblem(0.5, grid_size=8)


def test_rational_upper_bound_sweep():
    # grid 256 keeps the extrapolation error below the slack at the
    # equality endpoint beta_tilde = 1
    for bt in np.linspace(0.05, 1.0, 20):
        mu = solve_dirichlet_mu1(DirichletSLProblem(float(bt), 256)).mu1
        assert mu <= (2.0 + bt) / (2.0 - bt) + 1e-8


def test_pair_ordering_and_odd_axis():
    pair = lambda1_lambda2_circle(normalize([4.0, 1.0], 3))
    assert pair.lambda1 < pair.lambda2
    assert pair.odd_axis == 0  # first mode vanishes across the stiff axis
    assert pair.multiplicity == 1
    assert pair.spectral_gap == pytest.approx(pair.lambda2 - pair.lambda1)
    assert not pair.spectral_gap_small


def test_pair_isotropic_degeneracy():
    pair = lambda1_lambda2_circle(normalize([1.0, 1.0], 3))
    assert pair.lambda1 == pytest.approx(1.0, abs=1e-10)
    assert pair.lambda2 == pytest.approx(pair.lambda1, abs=1e-12)
    assert pair.multiplicity == 2
    assert pair.odd_axis is None
    # the flag marks unexpected near-degeneracy, not the exact a1 = a2 case
    assert not pair.spectral_gap_small


def test_pair_rejects_other_dimensions():
    with pytest.raises(WrongDimension):
        lambda1_lambda2_circle(normalize([1.0, 1.0, 1.0], 4))


def test_pair_scale_invariance():
    m = normalize([5.0, 2.0], 3)
    a = lambda1_lambda2_circle(m)
    b = lambda1_lambda2_circle(m.scaled(3.0))
    assert b.lambda1 == pytest.approx(a.lambda1, rel=1e-12)
    assert b.lambda2 == pytest.approx(a.lambda2, rel=1e-12)


def test_pair_matches_independent_periodic_solver():
    for beta in (0.0, 0.3, 0.7):
        pair = lambda1_lambda2_circle(normalize([1.0 + beta, 1.0 - beta], 3))
        lam1, lam2 = periodic_circle_pair(beta)
        assert pair.lambda1 == pytest.approx(lam1, abs=1e-8)
        assert pair.lambda2 == pytest.approx(lam2, abs=1e-8)


def test_eigenfunction_on_circle_parity():
    m = normalize([4.0, 1.0], 3)
    u1 = eigenfunction_on_circle(m, 256, which=1)
    u2 = eigenfunction_on_circle(m, 256, which=2)
    th = 2.0 * np.pi * np.arange(256) / 256

    assert np.max(np.abs(u1)) == pytest.approx(1.0)
    assert np.max(np.abs(u2)) == pytest.approx(1.0)

    # mode 1 is odd across the stiff axis (theta -> pi - theta),
    # mode 2 across the soft one (theta -> -theta)
    flip1 = (np.pi - th) % (2.0 * np.pi)
    idx1 = np.rint(flip1 / (2.0 * np.pi / 256)).astype(int) % 256
    assert np.max(np.abs(u1 + u1[idx1])) < 1e-9

    idx2 = (256 - np.arange(256)) % 256
    assert np.max(np.abs(u2 + u2[idx2])) < 1e-9


def test_eigenfunction_grid_validation():
    m = normalize([2.0, 1.0], 3)
    with pytest.raises(DimensionMismatch):
        eigenfunction_on_circle(m, 250, which=1)  # not a multiple of 4
    with pytest.raises(DimensionMismatch):
        eigenfunction_on_circle(m, 256, which=3)
