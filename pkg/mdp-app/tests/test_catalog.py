"""
Catalog models
"""
import numpy as np
import pytest

from catalog.examples import (
    CATALOG,
    IRRATIONAL,
    RATIONAL,
    build_model,
    example_dirichlet,
    example_indicator,
    random_finite,
    split_absorbing,
)
from core.errors import ModelError
from core.io import dumps, model_to_dict
from core.validation import validate_model
from solvers.average import average_cost_oracle
from solvers.discounted import relative_value
from vanish.pipeline import vanish_pipeline
from vanish.schedule import DiscountSchedule


class TestIndicator:
    @pytest.mark.parametrize("grid_size", [2, 5, 101])
    def test_structure(self, grid_size):
        model = example_indicator(grid_size)
        assert validate_model(model).ok
        assert model.n_actions == 1
        assert model.cost[0, 0] == 0.0
        assert (model.cost[1:, 0] == 1.0).all()
        assert (model.kernel[:, 0, 0] == 1.0).all()
        assert model.continuity_class == "W*"

    def test_too_small(self):
        with pytest.raises(ModelError):
            example_indicator(1)


class TestDirichlet:
    def test_single_pair(self):
        model = example_dirichlet(1)
        assert model.n_states == 3
        assert model.labels() == (RATIONAL, IRRATIONAL, RATIONAL)
        assert model.cost[:, 0].tolist() == [0.0, 1.0, 0.0]

    def test_irrational_states_have_a_rational_twin(self, dirichlet):
        D = dirichlet.distance_matrix
        labels = dirichlet.labels()
        for x, label in enumerate(labels):
            if label == IRRATIONAL:
                twins = [y for y in np.flatnonzero(D[x] == 0) if y != x]
                assert twins and all(labels[y] == RATIONAL for y in twins)

    def test_pseudometric(self, dirichlet):
        assert validate_model(dirichlet).ok
        D = dirichlet.distance_matrix
        assert np.allclose(D, D.T)
        assert (np.diag(D) == 0).all()


class TestRandom:
    def test_reproducible(self):
        assert dumps(model_to_dict(random_finite(5, 3, seed=4))) == dumps(model_to_dict(random_finite(5, 3, seed=4)))
        assert dumps(model_to_dict(random_finite(5, 3, seed=4))) != dumps(model_to_dict(random_finite(5, 3, seed=5)))

    def test_sparsity_keeps_first_action(self):
        model = random_finite(8, 4, seed=1, sparsity=0.9)
        assert validate_model(model).ok
        assert model.admissible[:, 0].all()
        assert not model.admissible.all()

    def test_single_state(self):
        model = random_finite(1, 3, seed=2)
        diag, _ = vanish_pipeline(model, DiscountSchedule.parse("geometric:0.5:30"))
        assert diag.w_star_estimate == pytest.approx(model.cost.min(), abs=1e-9)

    def test_pipeline_matches_oracle(self, small_random):
        w_star, _, _ = average_cost_oracle(small_random)
        diag, _ = vanish_pipeline(small_random, DiscountSchedule.parse("geometric:0.5:30"))
        assert diag.w_star_estimate == pytest.approx(w_star, abs=1e-6)

    def test_bad_arguments(self):
        with pytest.raises(ModelError):
            random_finite(0, 2)
        with pytest.raises(ModelError):
            random_finite(2, 2, sparsity=1.0)


class TestCatalog:
    @pytest.mark.parametrize("name", sorted(CATALOG))
    def test_every_model_validates(self, name):
        assert validate_model(build_model(name)).ok

    def test_split_absorbing_grows(self):
        rv = relative_value(split_absorbing(), 0.9)
        assert rv.u.values[1] == pytest.approx(10.0, rel=1e-8)
        assert rv.m == pytest.approx(0.0, abs=1e-12)

    def test_string_parameters_are_cast(self):
        model = build_model("random", {"n_states": "3", "n_actions": "2", "seed": "9", "sparsity": "0.5"})
        assert (model.n_states, model.n_actions) == (3, 2)
        assert model.name == "random-3x2-seed9"

    def test_unknown_name(self):
        with pytest.raises(ModelError, match="unknown catalog model"):
            build_model("nope")

    def test_unknown_parameter(self):
        with pytest.raises(ModelError, match="no parameter"):
            build_model("indicator", {"size": "3"})

    def test_uncastable_parameter(self):
        with pytest.raises(ModelError):
            build_model("indicator", {"grid_size": "many"})
