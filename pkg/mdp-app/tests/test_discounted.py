"""
Finite-horizon and discounted solvers
"""
import numpy as np
import pytest

from catalog.examples import constant_cost, example_dirichlet, random_finite, split_absorbing, zero_cost
from core.errors import ModelError, SolverError
from core.model import MdpModel, Policy
from solvers.discounted import (
    OPTIMAL,
    bellman_operator,
    delta_coefficient,
    discounted_value_iteration,
    finite_horizon_value,
    policy_discounted_value,
    relative_value,
)
from tests.conftest import path_enumeration_value, policy_enumeration_discounted

INDICATOR_ALPHAS = [0.5, 0.9, 0.999]


class TestFiniteHorizon:
    def test_single_stage_is_policy_cost(self, small_random):
        policy = Policy((2, 0, 1, 1))
        v = finite_horizon_value(small_random, policy, 1, 0.9)
        np.testing.assert_array_equal(v.values, small_random.cost[np.arange(4), [2, 0, 1, 1]])

    @pytest.mark.parametrize("N", [2, 5, 50])
    def test_indicator_undiscounted(self, indicator, N):
        v = finite_horizon_value(indicator, OPTIMAL, N, 1.0)
        np.testing.assert_array_equal(v.values, (np.arange(101) != 0).astype(float))

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_matches_path_enumeration(self, seed):
        model = random_finite(3, 2, seed=seed)
        v = finite_horizon_value(model, OPTIMAL, 4, 0.9)
        expected = [path_enumeration_value(model, x, 4, 0.9) for x in range(3)]
        np.testing.assert_allclose(v.values, expected, rtol=0, atol=1e-12)

    def test_policy_matches_path_enumeration(self):
        model = random_finite(3, 2, seed=5)
        policy = Policy((1, 0, 1))
        v = finite_horizon_value(model, policy, 4, 1.0)
        expected = [path_enumeration_value(model, x, 4, 1.0, policy) for x in range(3)]
        np.testing.assert_allclose(v.values, expected, rtol=0, atol=1e-12)

    def test_zero_horizon_rejected(self, indicator):
        with pytest.raises(ModelError):
            finite_horizon_value(indicator, OPTIMAL, 0, 0.5)

    def test_removing_an_action_never_lowers_value(self, small_random):
        cost = small_random.cost.copy()
        cost[:, 2] = np.inf
        restricted = MdpModel(small_random.states, small_random.actions, cost, small_random.kernel)
        full = finite_horizon_value(small_random, OPTIMAL, 6, 0.95).values
        fewer = finite_horizon_value(restricted, OPTIMAL, 6, 0.95).values
        assert (fewer >= full - 1e-15).all()

    def test_converges_to_discounted_value(self, small_random):
        v50 = finite_horizon_value(small_random, OPTIMAL, 50, 0.9).values
        v = discounted_value_iteration(small_random, 0.9).values
        bound = 0.9 ** 50 * small_random.cost.max() / (1 - 0.9)
        assert np.abs(v - v50).max() <= bound


class TestDiscountedValueIteration:
    @pytest.mark.parametrize("alpha", [0.0, 0.3, 0.9, 0.999])
    def test_constant_cost(self, alpha):
        v = discounted_value_iteration(constant_cost(4), alpha)
        np.testing.assert_allclose(v.values, 1 / (1 - alpha), rtol=1e-12)

    @pytest.mark.parametrize("alpha", INDICATOR_ALPHAS)
    def test_indicator_exact(self, indicator, alpha):
        v = discounted_value_iteration(indicator, alpha)
        np.testing.assert_allclose(v.values, (np.arange(101) != 0).astype(float), rtol=0, atol=1e-9)

    @pytest.mark.parametrize("seed", range(6))
    @pytest.mark.parametrize("alpha", [0.5, 0.9, 0.99])
    def test_matches_policy_enumeration(self, seed, alpha):
        model = random_finite(4, 3, seed=seed)
        v = discounted_value_iteration(model, alpha, tol=1e-12).values
        np.testing.assert_allclose(v, policy_enumeration_discounted(model, alpha), rtol=0, atol=1e-8)

    def test_fixed_point(self, small_random):
        v = discounted_value_iteration(small_random, 0.95).values
        assert np.abs(bellman_operator(small_random, v, 0.95) - v).max() <= 1e-8

    def test_contraction(self, small_random):
        rng = np.random.default_rng(3)
        for _ in range(20):
            v, w = rng.normal(size=(2, 4)) * 10
            lhs = np.abs(bellman_operator(small_random, v, 0.8) - bellman_operator(small_random, w, 0.8)).max()
            assert lhs <= 0.8 * np.abs(v - w).max() + 1e-12

    def test_monotone_in_costs(self, small_random):
        cost = small_random.cost.copy()
        cost[1, 0] += 0.5
        raised = MdpModel(small_random.states, small_random.actions, cost, small_random.kernel)
        assert (discounted_value_iteration(raised, 0.9).values >= discounted_value_iteration(small_random, 0.9).values - 1e-8).all()

    def test_alpha_outside_range(self, indicator):
        with pytest.raises(ModelError):
            discounted_value_iteration(indicator, 1.0)

    def test_iteration_cap(self, monkeypatch):
        monkeypatch.setattr("solvers.discounted.MDP_MAX_ITERATIONS", 10)
        with pytest.raises(SolverError) as excinfo:
            relative_value(split_absorbing(), 0.999)
        assert excinfo.value.alpha == 0.999
        assert excinfo.value.residual > 0


class TestPolicyDiscountedValue:
    def test_zero_cost(self):
        v = policy_discounted_value(zero_cost(3), Policy((0, 0, 0)), 0.9)
        np.testing.assert_array_equal(v.values, np.zeros(3))

    @pytest.mark.parametrize("alpha", [0.5, 0.99])
    def test_dirichlet_is_label_cost(self, alpha):
        model = example_dirichlet(5)
        v = policy_discounted_value(model, Policy((0,) * 11), alpha)
        np.testing.assert_allclose(v.values, model.cost[:, 0], rtol=0, atol=1e-12)

    def test_two_state_closed_form(self, two_state):
        policy = Policy((1, 0))
        # (I - 0.5 P) v = c with P = [[0.9, 0.1], [0.6, 0.4]], c = (0.4, 0)
        a, b, c, d = 1 - 0.45, -0.05, -0.3, 1 - 0.2
        det = a * d - b * c
        expected = [(d * 0.4 - b * 0.0) / det, (-c * 0.4 + a * 0.0) / det]
        v = policy_discounted_value(two_state, policy, 0.5)
        np.testing.assert_allclose(v.values, expected, rtol=1e-12)


class TestRelativeValue:
    @pytest.mark.parametrize("alpha", [0.2, 0.9, 0.9999])
    def test_constant_cost(self, alpha):
        rv = relative_value(constant_cost(3), alpha)
        assert rv.m == pytest.approx(1 / (1 - alpha), rel=1e-12)
        np.testing.assert_array_equal(rv.u.values, np.zeros(3))

    @pytest.mark.parametrize("alpha", INDICATOR_ALPHAS)
    def test_indicator(self, indicator, alpha):
        rv = relative_value(indicator, alpha)
        assert rv.m == 0.0
        np.testing.assert_array_equal(rv.u.values, (np.arange(101) != 0).astype(float))

    @pytest.mark.parametrize("seed", range(4))
    def test_invariants_and_oracle(self, seed):
        model = random_finite(5, 3, seed=seed)
        rv = relative_value(model, 0.95)
        oracle = policy_enumeration_discounted(model, 0.95)
        assert rv.u.values.min() == 0.0
        assert (rv.u.values >= 0).all()
        np.testing.assert_allclose(rv.v.values, rv.u.values + rv.m, rtol=0, atol=1e-12)
        np.testing.assert_allclose(rv.u.values, oracle - oracle.min(), rtol=0, atol=1e-8)

    def test_gain_accurate_near_one(self, small_random):
        alpha = 1 - 1e-9
        rv = relative_value(small_random, alpha)
        reference = relative_value(small_random, 1 - 1e-6)
        # (1 - alpha) m_alpha moves by O(1 - alpha) between the two
        assert abs(rv.gain - reference.gain) <= 1e-5
        assert rv.u.values.min() == 0.0

    def test_delta_coefficient(self, indicator, small_random):
        assert delta_coefficient(indicator) == 0.0
        assert 0 < delta_coefficient(small_random) < 1
        assert delta_coefficient(split_absorbing()) == 1.0

    def test_delta_coefficient_cached_on_model(self):
        model = random_finite(4, 3, seed=11)
        assert "delta_coefficient" not in model.__dict__
        tau = delta_coefficient(model)
        assert "delta_coefficient" in model.__dict__
        assert model.delta_coefficient == tau
        # a second model with the same kernel gets its own value
        assert delta_coefficient(random_finite(4, 3, seed=11)) == tau

    def test_floored_threshold_warns(self, small_random, monkeypatch):
        warnings = []
        monkeypatch.setattr("solvers.discounted.logger.warning", lambda msg, *args, **kwargs: warnings.append(msg))
        result = relative_value(small_random, 0.9, 1e-20)
        assert any("floored" in msg for msg in warnings)
        assert result.u.values.min() == 0.0
