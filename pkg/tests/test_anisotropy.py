import numpy as np
import pytest

from insulexp import (
    DimensionMismatch,
    NegativeLambda,
    NonPositiveEntry,
    WeightFunction,
    alpha_of_lambda,
    analytic_bounds,
    normalize,
)

from .oracles import exponent_bisect


def test_normalize_sorts_non_increasing():
    m = normalize([1.0, 4.0], 3)
    assert m.a == (4.0, 1.0)
    assert m.ratio == pytest.approx(4.0)
    assert m.dim_n == 3


def test_normalize_three_entries_for_n4():
    m = normalize([2.0, 8.0, 4.0], 4)
    assert m.a == (8.0, 4.0, 2.0)
    assert m.scaled(0.125).a == (1.0, 0.5, 0.25)


def test_normalize_rejects_nonpositive():
    with pytest.raises(NonPositiveEntry):
        normalize([0.0, 1.0], 3)
    with pytest.raises(NonPositiveEntry):
        normalize([1.0, -2.0, 1.0], 4)


def test_normalize_rejects_wrong_length():
    with pytest.raises(DimensionMismatch):
        normalize([1.0, 1.0, 1.0], 3)
    with pytest.raises(DimensionMismatch):
        normalize([1.0, 1.0], 4)


def test_weight_function_matches_quadratic_form():
    rng = np.random.default_rng(7)
    m = normalize([3.0, 1.0, 0.5], 4)
    w = WeightFunction(m)
    for _ in range(20):
        xi = rng.normal(size=3)
        xi /= np.linalg.norm(xi)
        direct = sum(ai * xii**2 for ai, xii in zip(m.a, xi))
        assert w(xi) == pytest.approx(direct, abs=1e-15)
    lo, hi = w.range
    assert lo == 0.5
    assert hi == 3.0


def test_weight_on_circle_agrees_with_quadratic_form():
    m = normalize([4.0, 1.0], 3)
    w = WeightFunction(m)
    theta = np.linspace(0.0, 2.0 * np.pi, 17)
    xi = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    assert np.allclose(w.on_circle(theta), w(xi), atol=1e-15)
    assert w.on_circle(theta).min() >= 1.0  # stays between the eigenvalues


def test_alpha_against_bisection_oracle():
    rng = np.random.default_rng(101)
    for n in (3, 4):
        for lam in np.concatenate(([0.0, 1.0, float(n - 2)], rng.uniform(0.0, 3.0, 40))):
            assert alpha_of_lambda(float(lam), n) == pytest.approx(
                exponent_bisect(float(lam), n), abs=1e-13
            )


def test_alpha_closed_form_anchors():
    assert alpha_of_lambda(1.0, 3) == pytest.approx(np.sqrt(2.0) - 1.0, abs=1e-15)
    assert alpha_of_lambda(2.0, 4) == pytest.approx((np.sqrt(17.0) - 3.0) / 2.0, abs=1e-15)
    assert alpha_of_lambda(0.0, 3) == 0.0


def test_alpha_monotone_and_rejects_negative():
    lams = np.linspace(0.0, 2.0, 50)
    vals = [alpha_of_lambda(float(x), 3) for x in lams]
    assert np.all(np.diff(vals) > 0)
    with pytest.raises(NegativeLambda):
        alpha_of_lambda(-0.1, 3)


def test_analytic_bounds_hand_values():
    b = analytic_bounds(normalize([3.0, 1.0], 3))
    assert b.upper_n_minus_2 == 1.0
    assert b.mu_upper_rational == pytest.approx(0.6, abs=1e-15)
    bt, env = b.sqrt_envelope
    assert bt == pytest.approx(-0.5)
    assert env == pytest.approx(np.sqrt(0.5), abs=1e-15)


def test_analytic_bounds_n4_has_no_circle_extras():
    b = analytic_bounds(normalize([1.0, 1.0, 1.0], 4))
    assert b.upper_n_minus_2 == 2.0
    assert b.mu_upper_rational is None
    assert b.sqrt_envelope is None


def test_bounds_ordering_sweep():
    rng = np.random.default_rng(33)
    for _ in range(50):
        ratio = float(10.0 ** rng.uniform(0.0, 2.0))
        b = analytic_bounds(normalize([ratio, 1.0], 3))
        assert b.mu_upper_rational <= b.upper_n_minus_2 + 1e-15
