from typing import Dict, List, Optional, Union

import numpy as np

from fdalign.config import ModelConfig
from fdalign.dropout import apply_mask
from fdalign.entities import DropMask, ForwardBundle
from fdalign.errors import ShapeMismatchError
from fdalign.logger import init_logger
from fdalign.tensor import (
    Tensor,
    add_channel_bias,
    conv2d,
    global_average_pool,
    linear_no_bias,
    relu,
)
from fdalign.types import RngStreamType
from fdalign.utils.random import make_rng

logger = init_logger(__name__)

FORMER_GROUP = "former"
LATTER_GROUP = "latter"
HEAD_WEIGHT = "head.weight"

ImageLike = Union[Tensor, np.ndarray]


def conv_weight_name(block: int) -> str:
    return f"conv{block}.weight"


def conv_bias_name(block: int) -> str:
    return f"conv{block}.bias"


class Model:
    """Conv stack -> F -> GAP -> bias-free linear head.

    Blocks up to and including `drop_layer_index` form the "former" parameter
    group; the remaining blocks and the head form the "latter" group.
    """

    def __init__(
        self,
        config: ModelConfig,
        parameters: Dict[str, Tensor],
        groups: Dict[str, str],
    ) -> None:
        if set(parameters) != set(groups):
            raise ValueError("every parameter needs exactly one group")
        self._config = config
        self._parameters = dict(parameters)
        self._groups = dict(groups)

    @classmethod
    def initialize(cls, config: ModelConfig, seed: int) -> "Model":
        rng = make_rng(seed, RngStreamType.INIT)
        parameters, groups = {}, {}
        in_channels = config.input_channels
        for block, (out_channels, kernel, _) in enumerate(config.conv_blocks):
            bound = np.sqrt(1.0 / (in_channels * kernel * kernel))
            group = FORMER_GROUP if block <= config.drop_layer_index else LATTER_GROUP
            weight = rng.uniform(-bound, bound, (out_channels, in_channels, kernel, kernel))
            parameters[conv_weight_name(block)] = weight
            parameters[conv_bias_name(block)] = np.zeros(out_channels)
            groups[conv_weight_name(block)] = group
            groups[conv_bias_name(block)] = group
            in_channels = out_channels

        bound = np.sqrt(1.0 / config.feature_dim)
        head = rng.uniform(-bound, bound, (config.num_classes, config.feature_dim))
        if config.zero_init_head:
            head = np.zeros_like(head)
        parameters[HEAD_WEIGHT] = head
        groups[HEAD_WEIGHT] = LATTER_GROUP

        tensors = {
            name: Tensor(value, requires_grad=True, name=name)
            for name, value in parameters.items()
        }
        logger.debug(
            f"Initialized model with {sum(t.size for t in tensors.values())} parameters"
        )
        return cls(config, tensors, groups)

    @property
    def config(self) -> ModelConfig:
        return self._config

    @property
    def parameters(self) -> Dict[str, Tensor]:
        return dict(self._parameters)

    @property
    def param_groups(self) -> Dict[str, str]:
        return dict(self._groups)

    @property
    def parameter_names(self) -> List[str]:
        return list(self._parameters)

    @property
    def head_weight(self) -> Tensor:
        return self._parameters[HEAD_WEIGHT]

    def set_parameter(self, name: str, value: Tensor) -> None:
        if name not in self._parameters:
            raise KeyError(f"unknown parameter {name}")
        if value.shape != self._parameters[name].shape:
            raise ShapeMismatchError(name, self._parameters[name].shape, value.shape)
        self._parameters[name] = value

    def with_parameters(self, parameters: Dict[str, Tensor]) -> "Model":
        merged = dict(self._parameters)
        merged.update(parameters)
        return Model(self._config, merged, self._groups)

    def _check_image(self, image: ImageLike) -> Tensor:
        if not isinstance(image, Tensor):
            image = Tensor(image)
        expected = (
            self._config.input_channels,
            self._config.input_size,
            self._config.input_size,
        )
        if image.data.ndim not in (3, 4) or image.shape[-3:] != expected:
            raise ShapeMismatchError("forward", image.shape, expected)
        return image

    def _run_blocks(self, x: Tensor, start: int, stop: int) -> Tensor:
        for block in range(start, stop):
            _, kernel, stride = self._config.conv_blocks[block]
            x = conv2d(
                x,
                self._parameters[conv_weight_name(block)],
                stride=stride,
                padding=kernel // 2,
            )
            x = add_channel_bias(x, self._parameters[conv_bias_name(block)])
            x = relu(x)
        return x

    def forward(self, image: ImageLike) -> ForwardBundle:
        image = self._check_image(image)
        split = self._config.drop_layer_index + 1
        f_prime = self._run_blocks(image, 0, split)
        f_map = self._run_blocks(f_prime, split, len(self._config.conv_blocks))
        pooled = global_average_pool(f_map)
        logits = linear_no_bias(pooled, self.head_weight)
        return ForwardBundle(f_prime=f_prime, f_map=f_map, pooled=pooled, logits=logits)

    def forward_with_drop(
        self,
        image: ImageLike,
        mask: DropMask,
        f_prime: Optional[Tensor] = None,
    ) -> Tensor:
        """F_drop: the network tail applied to the masked F'.

        Pass the F' of a previous `forward` to share the head of the network
        between the clean and the dropped path on one tape.
        """
        split = self._config.drop_layer_index + 1
        if f_prime is None:
            f_prime = self._run_blocks(self._check_image(image), 0, split)
        dropped = apply_mask(f_prime, mask)
        return self._run_blocks(dropped, split, len(self._config.conv_blocks))
