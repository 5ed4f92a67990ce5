"""
Schedules, sequence diagnostics, limit constructions, A*(x), extraction, pipeline
"""
import math

import numpy as np
import pytest

from catalog.examples import constant_cost, example_dirichlet, example_indicator, random_finite, zero_cost
from core.errors import ExtractionError, ModelError
from core.model import Policy
from sim.simulate import simulate_average_cost
from solvers.average import average_cost_oracle, policy_average_cost
from vanish.diagnostics import (
    default_radius_schedule,
    limit_relative_value_pointwise,
    limit_relative_value_weak,
    load_diagnostics,
    lsc_envelope,
    save_diagnostics,
    sequence_diagnostics,
)
from vanish.pipeline import vanish_pipeline
from vanish.policy import extract_policy, optimal_action_set
from vanish.schedule import DiscountSchedule
from tests.conftest import grid_model, make_diag

DEFAULT = DiscountSchedule.parse("geometric:0.5:30")


class TestSchedule:
    def test_geometric(self):
        s = DiscountSchedule.parse("geometric:0.5:30")
        assert s.n_max == 30
        assert len(s.values) == 31
        assert s.values[0] == 0.5
        assert s.values[-1] == 1 - 0.5 ** 31
        assert s.spec() == "geometric:0.5:30"

    def test_harmonic(self):
        s = DiscountSchedule.parse("harmonic:4")
        assert s.values == pytest.approx((1 / 2, 2 / 3, 3 / 4, 4 / 5, 5 / 6))
        assert s.spec() == "harmonic:4"

    def test_list(self):
        s = DiscountSchedule.parse("list:0.1,0.5,0.9")
        assert s.values == (0.1, 0.5, 0.9)
        assert DiscountSchedule.parse(s.spec()) == s

    def test_tail_window(self):
        assert DEFAULT.tail_window == 10
        assert list(DEFAULT.tail_indices()) == list(range(21, 31))
        assert DiscountSchedule.parse("harmonic:4").tail_window == math.ceil(4 / 3)

    @pytest.mark.parametrize("text", [
        "geometric:1.5:10", "geometric:0.5", "harmonic:x", "list:0.5,0.4", "list:0.2,1.0", "cubic:3",
    ])
    def test_rejects(self, text):
        with pytest.raises(ModelError):
            DiscountSchedule.parse(text)


class TestSequenceDiagnostics:
    def test_constant_cost(self):
        diag = sequence_diagnostics(constant_cost(3), DEFAULT)
        np.testing.assert_array_equal(diag.gains, np.ones(31))
        assert diag.w_lower_seq == diag.w_upper_seq == 1.0

    def test_indicator(self, indicator):
        diag = sequence_diagnostics(indicator, DEFAULT)
        np.testing.assert_array_equal(diag.gains, np.zeros(31))
        assert diag.w_lower_seq == diag.w_upper_seq == 0.0

    def test_two_state_matches_oracle(self, two_state):
        w_star, _, _ = average_cost_oracle(two_state)
        diag = sequence_diagnostics(two_state, DEFAULT)
        assert diag.w_lower_seq == pytest.approx(w_star, abs=1e-6)
        assert diag.w_upper_seq == pytest.approx(w_star, abs=1e-6)
        assert 0 <= diag.w_lower_seq <= diag.w_upper_seq

    def test_short_schedule_rejected(self, indicator):
        with pytest.raises(ModelError):
            sequence_diagnostics(indicator, DiscountSchedule.parse("list:0.5,0.9"))

    def test_parallel_equals_serial(self, small_random):
        serial = sequence_diagnostics(small_random, DEFAULT, workers=1)
        parallel = sequence_diagnostics(small_random, DEFAULT, workers=4)
        np.testing.assert_array_equal(serial.family, parallel.family)
        np.testing.assert_array_equal(serial.gains, parallel.gains)
        _, policy_s = vanish_pipeline(small_random, DEFAULT, workers=1)
        _, policy_p = vanish_pipeline(small_random, DEFAULT, workers=4)
        assert policy_s == policy_p

    def test_save_and_load(self, tmp_path, small_random):
        diag, _ = vanish_pipeline(small_random, DEFAULT, construction="weak")
        path = tmp_path / "diag.json"
        save_diagnostics(diag, path)
        loaded = load_diagnostics(path)
        np.testing.assert_array_equal(loaded.family, diag.family)
        np.testing.assert_array_equal(loaded.u.values, diag.u.values)
        np.testing.assert_array_equal(loaded.U_m, diag.U_m)
        assert loaded.a_star == diag.a_star
        assert loaded.schedule == diag.schedule
        assert loaded.w_star_estimate == diag.w_star_estimate


class TestPointwiseConstruction:
    def test_constant_family(self):
        g = np.array([0.0, 0.3, 2.0])
        u = limit_relative_value_pointwise(make_diag([g] * 6))
        np.testing.assert_array_equal(u.values, g)
        assert u.params["tag"] == "setwise construction"

    def test_dirichlet_is_label_cost(self):
        model = example_dirichlet(10)
        u = limit_relative_value_pointwise(sequence_diagnostics(model, DEFAULT))
        np.testing.assert_array_equal(u.values, model.cost[:, 0])

    def test_alternating_family(self):
        g = np.array([0.0, 1.0, 3.0])
        family = [(1 + (-1) ** n) * g for n in range(9)]
        u = limit_relative_value_pointwise(make_diag(family))
        np.testing.assert_array_equal(u.values, np.zeros(3))


class TestWeakConstruction:
    def test_single_state_matches_pointwise(self):
        model = grid_model(1)
        diag = make_diag([[3.0], [1.0], [2.0], [1.5], [4.0], [2.5]])
        u, _, _ = limit_relative_value_weak(diag, model)
        np.testing.assert_array_equal(u.values, limit_relative_value_pointwise(diag).values)

    def test_indicator(self, indicator):
        diag = sequence_diagnostics(indicator, DEFAULT)
        u, _, _ = limit_relative_value_weak(diag, indicator)
        np.testing.assert_array_equal(u.values, (np.arange(101) != 0).astype(float))
        assert u.params["tag"] == "weak construction"

    def test_dirichlet_lower_envelope(self):
        model = example_dirichlet(10)
        diag = sequence_diagnostics(model, DEFAULT)
        u, _, _ = limit_relative_value_weak(diag, model)
        np.testing.assert_array_equal(u.values, np.zeros(21))

    def test_matches_brute_force_envelope(self):
        model = grid_model(9)
        f = np.array([3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0])
        diag = make_diag([f] * 6)
        floor = 0.3
        radii = default_radius_schedule(model, floor)
        u, U_m, u_lower_m = limit_relative_value_weak(diag, model, radii)

        D = model.distance_matrix
        expected = np.empty(9)
        for x in range(9):
            best = -np.inf
            for m in range(len(U_m)):
                for R in radii:
                    best = max(best, min(U_m[m][y] for y in range(9) if D[x, y] < R))
            expected[x] = best
        np.testing.assert_array_equal(u.values, expected)
        # the smallest kept radius is 3 grid steps: B covers two neighbours each side
        np.testing.assert_array_equal(u.values[4], min(f[2:7]))

    def test_monotone_in_m_and_below_U(self, small_random):
        diag = sequence_diagnostics(small_random, DEFAULT)
        _, U_m, u_lower_m = limit_relative_value_weak(diag, small_random)
        assert (np.diff(U_m, axis=0) >= 0).all()
        assert (np.diff(u_lower_m, axis=0) >= 0).all()
        assert (u_lower_m <= U_m).all()

    def test_last_U_is_tail_minimum(self, small_random):
        diag = sequence_diagnostics(small_random, DEFAULT)
        _, U_m, _ = limit_relative_value_weak(diag, small_random)
        np.testing.assert_array_equal(U_m[-1], limit_relative_value_pointwise(diag).values)

    def test_envelope_is_idempotent(self):
        model = example_dirichlet(6)
        f = np.random.default_rng(0).random(model.n_states)
        once = lsc_envelope(model, f)
        np.testing.assert_array_equal(lsc_envelope(model, once), once)

    @pytest.mark.parametrize("factory", [
        lambda: example_indicator(21),
        lambda: example_dirichlet(5),
        lambda: random_finite(5, 2, seed=3),
        lambda: constant_cost(4),
    ])
    @pytest.mark.parametrize("text", ["geometric:0.5:30", "harmonic:20", "geometric:0.7:12"])
    def test_weak_below_pointwise(self, factory, text):
        model = factory()
        diag = sequence_diagnostics(model, DiscountSchedule.parse(text))
        weak, _, _ = limit_relative_value_weak(diag, model)
        assert (weak.values <= limit_relative_value_pointwise(diag).values).all()


class TestActionSets:
    def test_indicator(self, indicator):
        u = (np.arange(101) != 0).astype(float)
        a_star = optimal_action_set(indicator, u, 0.0)
        assert a_star.sets == ((0,),) * 101
        assert a_star.empty_states == ()

    def test_everything_admitted_at_zero(self):
        model = random_finite(3, 3, seed=1)
        flat = type(model)(model.states, model.actions, np.zeros((3, 3)), model.kernel)
        a_star = optimal_action_set(flat, np.zeros(3), 0.0)
        assert a_star.sets == ((0, 1, 2),) * 3

    @pytest.mark.parametrize("seed", range(5))
    def test_contains_oracle_action(self, seed):
        model = random_finite(4, 3, seed=seed)
        w_star, policy, bias = average_cost_oracle(model)
        a_star = optimal_action_set(model, bias, w_star)
        assert not a_star.empty_states
        assert all(policy(x) in a_star[x] for x in range(4))

    def test_empty_state_reported(self):
        model = example_dirichlet(2)
        a_star = optimal_action_set(model, np.zeros(5), 0.0)
        assert a_star.empty_states == (1, 3)

    def test_nonfinite_rejected(self, indicator):
        with pytest.raises(ModelError):
            optimal_action_set(indicator, np.full(101, np.inf), 0.0)


class TestExtractPolicy:
    def test_singletons(self):
        assert extract_policy([(2,), (0,), (1,)]) == Policy((2, 0, 1))

    def test_lowest_index(self):
        assert extract_policy([(0, 1, 2)] * 4) == Policy((0, 0, 0, 0))

    def test_dirichlet(self):
        model = example_dirichlet(4)
        a_star = optimal_action_set(model, model.cost[:, 0], 0.0)
        assert extract_policy(a_star) == Policy((0,) * 9)

    def test_empty_set_names_state(self):
        with pytest.raises(ExtractionError) as excinfo:
            extract_policy([(0,), (), (1,)])
        assert excinfo.value.state == 1


class TestPipeline:
    def test_indicator(self, indicator):
        diag, policy = vanish_pipeline(indicator, DEFAULT, construction="weak")
        assert abs(diag.w_upper_seq) <= 1e-9
        np.testing.assert_array_equal(diag.u.values, (np.arange(101) != 0).astype(float))
        assert policy == Policy((0,) * 101)
        assert diag.w_star_estimate == pytest.approx(0.0, abs=1e-12)

    def test_zero_cost(self):
        diag, policy = vanish_pipeline(zero_cost(1), DEFAULT)
        assert diag.w_upper_seq == 0.0
        assert policy == Policy((0,))

    def test_dirichlet_weak_construction_fails_extraction(self):
        diag, policy = vanish_pipeline(example_dirichlet(3), DEFAULT, construction="weak")
        assert policy is None
        assert diag.empty_states == [1, 3, 5]

    def test_unknown_construction(self, indicator):
        with pytest.raises(ModelError):
            vanish_pipeline(indicator, DEFAULT, construction="upper")

    def test_refine_orders_bounds(self, two_state):
        diag, _ = vanish_pipeline(two_state, DEFAULT, refine=True)
        assert diag.w_lower <= diag.w_lower_seq <= diag.w_upper_seq <= diag.w_upper


@pytest.mark.parametrize("seed", range(20))
def test_random_models_match_oracle(seed):
    rng = np.random.default_rng(seed)
    model = random_finite(int(rng.integers(2, 7)), int(rng.integers(1, 5)), seed=seed)
    w_star, _, _ = average_cost_oracle(model)
    diag, policy = vanish_pipeline(model, DEFAULT)
    assert policy is not None
    assert diag.w_upper_seq == pytest.approx(w_star, abs=1e-5)

    gain, _ = policy_average_cost(model, policy)
    assert gain == pytest.approx(w_star, abs=1e-5)
    horizon = 2000
    estimate = simulate_average_cost(model, policy, 0, horizon, replications=64, seed=seed)
    # 3 standard errors plus the O(1/N) start-up bias of a Cesaro average
    assert abs(estimate.mean - gain) <= 3 * estimate.std_error + 2 / horizon
