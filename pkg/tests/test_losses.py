import numpy as np
import pytest

from fdalign.config import LossWeightsConfig
from fdalign.entities import RegionPartition
from fdalign.losses import (
    ObjectiveRegistry,
    TotalObjective,
    WarmObjective,
    loss_drop,
    loss_norm,
    loss_sim,
    partition_by_norm,
    partition_by_similarity,
    partition_by_similarity_finegrained,
    stage_for_epoch,
    total_loss,
    warm_loss,
)
from fdalign.cam import similarity_map
from fdalign.errors import InvalidArgumentError
from fdalign.model import Model
from fdalign.tensor import Tape, Tensor, grad_check
from fdalign.types import DropLossReductionType, RegionSourceType, StageType


def _partition(fg, bg):
    return RegionPartition(
        fg=np.array([fg], dtype=bool),
        bg=np.array([bg], dtype=bool),
        source=RegionSourceType.NORM_BASED,
    )


class TestPartitions:
    def test_by_norm(self):
        part = partition_by_norm(np.array([[0.7, 0.3, 0.05]]), 0.6, 0.1)
        np.testing.assert_array_equal(part.fg, [[True, False, False]])
        np.testing.assert_array_equal(part.bg, [[False, False, True]])
        np.testing.assert_array_equal(part.unknown, [[False, True, False]])

    def test_by_norm_all_unknown(self):
        part = partition_by_norm(np.full((2, 2), 0.3), 0.6, 0.1)
        assert not part.fg.any() and not part.bg.any()

    def test_by_norm_strict_threshold(self):
        part = partition_by_norm(np.array([[0.6]]), 0.6, 0.1)
        assert not part.fg.any()

    def test_by_norm_bad_thresholds(self):
        with pytest.raises(InvalidArgumentError):
            partition_by_norm(np.zeros((2, 2)), 0.1, 0.6)

    def test_by_similarity(self):
        part = partition_by_similarity(np.array([[0.2, -0.1, 0.0]]))
        np.testing.assert_array_equal(part.fg, [[True, False, False]])
        np.testing.assert_array_equal(part.bg, [[False, True, False]])

    def test_by_similarity_degenerate(self):
        assert not partition_by_similarity(np.full((2, 2), 0.4)).bg.any()
        zeros = partition_by_similarity(np.zeros((2, 2)))
        assert not zeros.fg.any() and not zeros.bg.any()

    def test_finegrained(self):
        sims = np.array([[0.3, -0.1, 0.0], [-0.2, -0.05, -0.3]]).reshape(2, 1, 3)
        part = partition_by_similarity_finegrained(sims)
        np.testing.assert_array_equal(part.fg, [[True, False, False]])
        np.testing.assert_array_equal(part.bg, [[False, True, True]])

    def test_partitions_are_disjoint(self, rng):
        values = rng.uniform(size=(6, 6))
        part = partition_by_norm(values, 0.6, 0.1)
        assert not (part.fg & part.bg).any()

    def test_finegrained_covers_every_location(self, rng):
        sims = rng.uniform(-1, 1, size=(4, 5, 5))
        sims[:, 0, 0] = 0.0
        part = partition_by_similarity_finegrained(sims)
        assert (part.fg | part.bg).all()
        assert not (part.fg & part.bg).any()
        assert part.bg[0, 0]

    def test_single_class_background_is_contained(self, rng):
        sims = rng.uniform(-1, 1, size=(1, 6, 6)).round(1)
        sims[0, :2, :2] = 0.0
        general = partition_by_similarity(sims[0])
        finegrained = partition_by_similarity_finegrained(sims)
        assert not (general.bg & ~finegrained.bg).any()
        # exact zeros land only in the fine-grained background
        assert finegrained.bg[:2, :2].all() and not general.bg[:2, :2].any()


class TestLossSim:
    def test_value(self):
        part = _partition([True, True, False], [False, False, True])
        assert loss_sim(Tensor([[0.5, 0.7, -0.2]]), part).item() == pytest.approx(-0.8)

    def test_empty_regions(self):
        part = _partition([False, False], [False, False])
        assert loss_sim(Tensor([[0.5, 0.7]]), part).item() == 0.0

    def test_gradient(self, rng):
        values = rng.uniform(-1, 1, size=(4, 4))
        part = partition_by_norm(rng.uniform(size=(4, 4)), 0.6, 0.1)
        report = grad_check(lambda p: loss_sim(p[0], part), [Tensor(values)])
        assert report.passed

    def test_bounded(self, rng):
        for _ in range(50):
            values = rng.uniform(-1, 1, size=(5, 5))
            part = partition_by_norm(rng.uniform(size=(5, 5)), 0.6, 0.1)
            assert -2.0 <= loss_sim(Tensor(values), part).item() <= 2.0

    def test_gradient_descent_on_frozen_partition(self, rng):
        weight = Tensor(rng.normal(size=4))
        features = rng.normal(size=(4, 1, 6))
        features *= 1.5 / np.linalg.norm(features, axis=0, keepdims=True)
        part = _partition([True] * 3 + [False] * 3, [False] * 3 + [True] * 3)

        history, sims = [], []
        for _ in range(40):
            f = Tensor(features, requires_grad=True)
            with Tape() as tape:
                sim = similarity_map(f, weight)
                loss = loss_sim(sim, part)
            tape.backward(loss)
            history.append(loss.item())
            sims.append(sim.numpy()[0])
            features = features - f.grad

        assert all(later <= earlier + 1e-12 for earlier, later in zip(history, history[1:]))
        assert history[-1] < history[0]
        assert (sims[-1][:3] > sims[0][:3]).all()
        assert (sims[-1][3:] < sims[0][3:]).all()


class TestLossNorm:
    def test_value(self):
        part = _partition([True, True, False], [False, False, True])
        assert loss_norm(Tensor([[1.0, 0.8, 0.1]]), part).item() == pytest.approx(-0.8)

    def test_zero_map(self):
        part = partition_by_similarity(np.array([[0.3, -0.2]]))
        assert loss_norm(Tensor([[0.0, 0.0]]), part).item() == 0.0


class TestLossDrop:
    def test_value(self):
        f = Tensor(np.array([1.0, 2.0]).reshape(2, 1, 1))
        f_drop = Tensor(np.array([0.0, 2.0]).reshape(2, 1, 1))
        assert loss_drop(f, f_drop).item() == pytest.approx(0.5)
        assert loss_drop(f, f_drop, DropLossReductionType.SUM).item() == pytest.approx(1.0)

    def test_identical(self, rng):
        f = Tensor(rng.normal(size=(2, 3, 3)))
        assert loss_drop(f, f).item() == 0.0

    def test_both_branches_get_gradient(self):
        f = Tensor(np.array([1.0, 2.0]).reshape(2, 1, 1), requires_grad=True)
        f_drop = Tensor(np.array([0.0, 3.0]).reshape(2, 1, 1), requires_grad=True)
        with Tape() as tape:
            loss = loss_drop(f, f_drop)
        tape.backward(loss)
        np.testing.assert_allclose(f.grad.ravel(), [0.5, -0.5])
        np.testing.assert_allclose(f_drop.grad.ravel(), [-0.5, 0.5])


class TestCombinations:
    def test_total_loss(self):
        w = LossWeightsConfig(lambda_drop=3.0, lambda_sim=0.5, lambda_norm=0.15)
        total = total_loss(Tensor(1.0), 0.1, -0.8, -0.5, w)
        assert total.item() == pytest.approx(0.825)

    def test_total_loss_without_weights(self):
        w = LossWeightsConfig(lambda_drop=0.0, lambda_sim=0.0, lambda_norm=0.0)
        assert total_loss(Tensor(1.3), 0.1, -0.8, -0.5, w).item() == pytest.approx(1.3)

    def test_lambda_sim_partial_derivative(self):
        low = LossWeightsConfig(lambda_sim=0.5)
        high = LossWeightsConfig(lambda_sim=0.5 + 1e-3)
        delta = total_loss(Tensor(1.0), 0.1, -0.8, -0.5, high).item() - total_loss(
            Tensor(1.0), 0.1, -0.8, -0.5, low
        ).item()
        assert delta / 1e-3 == pytest.approx(-0.8)

    def test_warm_loss(self):
        assert warm_loss(Tensor(1.0), 0.2, LossWeightsConfig(lambda_drop=3.0)).item() == pytest.approx(1.6)
        assert warm_loss(Tensor(1.0), 0.2, LossWeightsConfig(lambda_drop=0.0)).item() == 1.0

    def test_stage_schedule(self):
        assert [stage_for_epoch(e, 2) for e in range(4)] == [
            StageType.WARM,
            StageType.WARM,
            StageType.TOTAL,
            StageType.TOTAL,
        ]
        assert ObjectiveRegistry.get_class(StageType.WARM) is WarmObjective
        assert ObjectiveRegistry.get_class(StageType.TOTAL) is TotalObjective


class TestObjectives:
    def test_replaying_frozen_state(self, tiny_model_config, rng):
        model = Model.initialize(tiny_model_config, seed=0)
        images = rng.uniform(size=(2, 3, 16, 16))
        objective = TotalObjective(LossWeightsConfig(p=1.0))
        first = objective.compute(model, images, [0, 2], rng=np.random.default_rng(1))
        again = objective.compute(model, images, [0, 2], frozen=first.frozen)
        assert first.values() == again.values()
        assert first.frozen.norm_partition is not None
        assert first.frozen.sim_partition is not None

    def test_warm_objective_has_no_alignment_terms(self, tiny_model_config, rng):
        model = Model.initialize(tiny_model_config, seed=0)
        losses = WarmObjective(LossWeightsConfig()).compute(
            model, rng.uniform(size=(2, 3, 16, 16)), [1, 1], rng=rng
        )
        assert losses.sim == 0.0 and losses.norm == 0.0
        assert losses.values()["total"] == pytest.approx(
            losses.values()["L_CE"] + 3.0 * losses.values()["L_drop"]
        )

    def test_dropout_needs_a_generator(self, tiny_model_config, rng):
        model = Model.initialize(tiny_model_config, seed=0)
        with pytest.raises(InvalidArgumentError):
            WarmObjective(LossWeightsConfig()).compute(model, rng.uniform(size=(3, 16, 16)), 0)

    def test_finegrained_background(self, tiny_model_config, rng):
        model = Model.initialize(tiny_model_config, seed=0)
        losses = TotalObjective(LossWeightsConfig(finegrained=True)).compute(
            model, rng.uniform(size=(2, 3, 16, 16)), [0, 1], rng=rng
        )
        assert losses.frozen.sim_partition.source == RegionSourceType.SIMILARITY_FINEGRAINED
