from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from fdalign.cam import compute_cam, minmax_extrema, minmax_normalize, norm_map, similarity_map
from fdalign.config import GradCheckConfig, LossWeightsConfig, ModelConfig
from fdalign.dropout import apply_mask, channel_mean, make_mask
from fdalign.errors import GradCheckFailedError
from fdalign.logger import init_logger
from fdalign.losses import TotalObjective, WarmObjective
from fdalign.model import Model
from fdalign.tensor import (
    GradCheckReport,
    Tensor,
    add_channel_bias,
    conv2d,
    cross_entropy,
    global_average_pool,
    grad_check,
    linear_no_bias,
    relu,
)
from fdalign.types import RngStreamType
from fdalign.utils.random import make_rng

logger = init_logger(__name__)

BUG_SCALE = 1.01

LossFn = Callable[[List[Tensor]], Tensor]


def tiny_model_config() -> ModelConfig:
    """Two conv blocks on 3x8x8 inputs giving 6x4x4 features and 3 classes."""
    return ModelConfig(
        input_channels=3,
        input_size=8,
        conv_blocks=[[4, 3, 1], [6, 3, 2]],
        drop_layer_index=0,
        num_classes=3,
        feature_dim=6,
    )


@dataclass
class GradientSuiteReport:
    checks: Dict[str, GradCheckReport] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.checks.values())

    @property
    def failed(self) -> List[str]:
        return [name for name, report in self.checks.items() if not report.passed]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "max_rel_error": {
                name: float(report.max_rel_error) for name, report in self.checks.items()
            },
            "checks": {name: report.to_dict() for name, report in self.checks.items()},
        }

    def raise_on_failure(self) -> None:
        if not self.passed:
            details = ", ".join(
                f"{name} ({self.checks[name].max_rel_error:.3e})" for name in self.failed
            )
            raise GradCheckFailedError(f"gradient checks failed: {details}")


class GradientSuite:
    """Finite-difference checks of every layer op and every loss term.

    Losses are checked with respect to all parameters of a tiny model, with the
    dropout mask, region partitions and normalization extrema of the
    unperturbed pass frozen.
    """

    def __init__(self, config: GradCheckConfig, seed: int = 0) -> None:
        self._config = config
        self._seed = seed

    def _rng(self, *keys: int) -> np.random.Generator:
        return make_rng(self._seed, RngStreamType.GRADCHECK, *keys)

    def _check(self, name: str, loss_fn: LossFn, params: Sequence[Tensor], names=None) -> GradCheckReport:
        grad_transform = None
        if self._config.inject_gradient_bug:
            grad_transform = lambda grad: grad * BUG_SCALE  # noqa: E731
        report = grad_check(
            loss_fn,
            params,
            eps=self._config.eps,
            tol=self._config.tol,
            names=names,
            denominator_floor=self._config.denominator_floor,
            grad_transform=grad_transform,
        )
        status = "ok" if report.passed else "FAILED"
        logger.info(f"gradcheck {name}: max rel err {report.max_rel_error:.3e} {status}")
        return report

    def _layer_checks(self) -> Dict[str, GradCheckReport]:
        rng = self._rng(0)

        def normal(*shape):
            return Tensor(rng.normal(size=shape))

        def weighted(out: Tensor, weights: np.ndarray) -> Tensor:
            return (out * Tensor(weights)).sum()

        checks = {}
        x, k = normal(2, 2, 6, 6), normal(3, 2, 3, 3)
        r_conv = rng.normal(size=(2, 3, 3, 3))
        checks["conv2d"] = self._check(
            "conv2d",
            lambda t: weighted(conv2d(t[0], t[1], stride=2, padding=1), r_conv),
            [x, k],
            ["input", "kernel"],
        )

        x, b = normal(2, 3, 4, 4), normal(3)
        r_map = rng.normal(size=(2, 3, 4, 4))
        checks["add_channel_bias"] = self._check(
            "add_channel_bias",
            lambda t: weighted(add_channel_bias(t[0], t[1]), r_map),
            [x, b],
            ["input", "bias"],
        )
        checks["relu"] = self._check(
            "relu", lambda t: weighted(relu(t[0]), r_map), [x], ["input"]
        )

        r_pooled = rng.normal(size=(2, 3))
        checks["global_average_pool"] = self._check(
            "global_average_pool",
            lambda t: weighted(global_average_pool(t[0]), r_pooled),
            [x],
            ["input"],
        )

        v, w = normal(2, 5), normal(3, 5)
        r_logits = rng.normal(size=(2, 3))
        checks["linear_no_bias"] = self._check(
            "linear_no_bias",
            lambda t: weighted(linear_no_bias(t[0], t[1]), r_logits),
            [v, w],
            ["input", "weights"],
        )
        checks["cross_entropy"] = self._check(
            "cross_entropy",
            lambda t: cross_entropy(t[0], [0, 2]).sum(),
            [normal(2, 3)],
            ["logits"],
        )

        f, w_rows = normal(2, 3, 4, 4), normal(2, 3)
        r_spatial = rng.normal(size=(2, 4, 4))
        checks["norm_map"] = self._check(
            "norm_map", lambda t: weighted(norm_map(t[0]), r_spatial), [f], ["f_map"]
        )
        checks["similarity_map"] = self._check(
            "similarity_map",
            lambda t: weighted(similarity_map(t[0], t[1]), r_spatial),
            [f, w_rows],
            ["f_map", "w_c"],
        )
        checks["compute_cam"] = self._check(
            "compute_cam",
            lambda t: weighted(compute_cam(t[0], t[1]), r_spatial),
            [f, w_rows],
            ["f_map", "w_c"],
        )

        values = normal(2, 4, 4)
        extrema = minmax_extrema(values)
        checks["minmax_normalize"] = self._check(
            "minmax_normalize",
            lambda t: weighted(minmax_normalize(t[0], extrema), r_spatial),
            [values],
            ["values"],
        )

        mask = make_mask(channel_mean(x), 0.8, 0.5, rng)
        checks["apply_mask"] = self._check(
            "apply_mask",
            lambda t: weighted(apply_mask(t[0], mask), r_map),
            [x],
            ["f_prime"],
        )
        return checks

    def _loss_checks(self) -> Dict[str, GradCheckReport]:
        rng = self._rng(1)
        model_config = tiny_model_config()
        model = Model.initialize(model_config, self._seed)
        images = rng.uniform(size=(2, 3, model_config.input_size, model_config.input_size))
        labels = np.array([0, 2])
        # p = 1 drops the whole attentive set so the drop branch is never empty
        weights = LossWeightsConfig(p=1.0)
        total_objective = TotalObjective(weights)
        warm_objective = WarmObjective(weights)

        frozen = total_objective.compute(model, images, labels, rng=self._rng(2)).frozen
        names = model.parameter_names
        params = [model.parameters[name] for name in names]

        def loss_of(objective, term: str) -> LossFn:
            def loss_fn(tensors: List[Tensor]) -> Tensor:
                candidate = model.with_parameters(dict(zip(names, tensors)))
                losses = objective.compute(candidate, images, labels, frozen=frozen)
                return getattr(losses, term)

            return loss_fn

        terms = {
            "L_CE": (total_objective, "ce"),
            "L_sim": (total_objective, "sim"),
            "L_norm": (total_objective, "norm"),
            "L_drop": (total_objective, "drop"),
            "total": (total_objective, "total"),
            "warm": (warm_objective, "total"),
        }
        return {
            name: self._check(name, loss_of(objective, term), params, names)
            for name, (objective, term) in terms.items()
        }

    def run(self, include_layers: bool = True) -> GradientSuiteReport:
        report = GradientSuiteReport()
        if include_layers:
            report.checks.update(self._layer_checks())
        report.checks.update(self._loss_checks())
        return report


def run_gradient_suite(
    config: Optional[GradCheckConfig] = None, seed: int = 0
) -> GradientSuiteReport:
    return GradientSuite(config or GradCheckConfig(), seed).run()
