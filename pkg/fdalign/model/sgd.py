from typing import Dict, Optional

import numpy as np

from fdalign.config import OptimizerConfig
from fdalign.errors import MissingGradientError
from fdalign.model.model import FORMER_GROUP, LATTER_GROUP, Model
from fdalign.tensor import Tensor


class SGD:
    """SGD with momentum and weight decay coupled into the gradient.

    g' = g + weight_decay * theta; v = momentum * v + g'; theta -= lr(group) * v
    """

    def __init__(
        self,
        model: Model,
        lr_per_group: Dict[str, float],
        momentum: float = 0.9,
        weight_decay: float = 5e-4,
    ) -> None:
        self._model = model
        self._lr_per_group = dict(lr_per_group)
        self._momentum = momentum
        self._weight_decay = weight_decay
        self._velocity: Dict[str, np.ndarray] = {}

    @classmethod
    def from_config(cls, model: Model, config: OptimizerConfig) -> "SGD":
        return cls(
            model,
            {FORMER_GROUP: config.lr_former, LATTER_GROUP: config.lr_latter},
            momentum=config.momentum,
            weight_decay=config.weight_decay,
        )

    @property
    def lr_per_group(self) -> Dict[str, float]:
        return dict(self._lr_per_group)

    def step(self, lr_per_group: Optional[Dict[str, float]] = None) -> None:
        lr_per_group = lr_per_group or self._lr_per_group
        parameters = self._model.parameters
        missing = [name for name, p in parameters.items() if p.grad is None]
        if missing:
            raise MissingGradientError(f"no gradient for parameters {missing}")

        groups = self._model.param_groups
        for name, param in parameters.items():
            grad = param.grad + self._weight_decay * param.data
            velocity = self._velocity.get(name)
            velocity = grad if velocity is None else self._momentum * velocity + grad
            self._velocity[name] = velocity
            updated = param.data - lr_per_group[groups[name]] * velocity
            # fresh leaf, so gradients start cleared
            self._model.set_parameter(
                name, Tensor(updated, requires_grad=True, name=name)
            )


def sgd_step(
    model: Model,
    lr_per_group: Dict[str, float],
    momentum: float,
    weight_decay: float,
) -> None:
    """One stateless step; momentum starts from a zero velocity."""
    SGD(model, lr_per_group, momentum, weight_decay).step()
