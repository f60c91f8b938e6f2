from typing import Union

import numpy as np

from fdalign.config import LossWeightsConfig
from fdalign.entities import RegionPartition
from fdalign.errors import ShapeMismatchError
from fdalign.tensor import Tensor, apply_op
from fdalign.tensor.tensor import note_branches
from fdalign.types import DropLossReductionType, StageType


def region_mean(values: Tensor, region: np.ndarray) -> Tensor:
    """Mean of each [H, W] map over its region; an empty region gives 0."""
    region = np.asarray(region, dtype=bool)
    if region.shape != values.shape:
        raise ShapeMismatchError("region_mean", values.shape, region.shape)
    counts = region.sum(axis=(-2, -1))
    weights = region / np.maximum(counts, 1)[..., None, None]
    out = (values.data * weights).sum(axis=(-2, -1))
    return apply_op(
        out, (values,), lambda g: (np.asarray(g)[..., None, None] * weights,), "region_mean"
    )


def loss_sim(sim_map: Tensor, part: RegionPartition) -> Tensor:
    """-mean(S over fg) + mean(S over bg)."""
    return region_mean(sim_map, part.bg) - region_mean(sim_map, part.fg)


def loss_norm(norm_hat: Tensor, part: RegionPartition) -> Tensor:
    """-mean(F_hat over fg) + mean(F_hat over bg) for a similarity partition."""
    return region_mean(norm_hat, part.bg) - region_mean(norm_hat, part.fg)


def loss_drop(
    f_map: Tensor,
    f_drop: Tensor,
    reduction: DropLossReductionType = DropLossReductionType.MEAN,
) -> Tensor:
    """Absolute difference between F and F_drop per map, averaged or summed.

    Both branches receive gradient; the subgradient of |0| is 0.
    """
    if f_map.shape != f_drop.shape or f_map.data.ndim not in (3, 4):
        raise ShapeMismatchError("loss_drop", f_map.shape, f_drop.shape)
    diff = f_map.data - f_drop.data
    sign = np.sign(diff)
    note_branches(sign)
    scale = 1.0
    if reduction == DropLossReductionType.MEAN:
        scale = 1.0 / np.prod(f_map.shape[-3:])
    out = np.abs(diff).sum(axis=(-3, -2, -1)) * scale

    def backward(grad):
        local = np.asarray(grad)[..., None, None, None] * sign * scale
        return local, -local

    return apply_op(out, (f_map, f_drop), backward, "loss_drop")


Scalar = Union[Tensor, float]


def total_loss(
    ce: Tensor, l_drop: Scalar, l_sim: Scalar, l_norm: Scalar, w: LossWeightsConfig
) -> Tensor:
    return (
        ce
        + w.lambda_drop * l_drop
        + w.lambda_sim * l_sim
        + w.lambda_norm * l_norm
    )


def warm_loss(ce: Tensor, l_drop: Scalar, w: LossWeightsConfig) -> Tensor:
    return ce + w.lambda_drop * l_drop


def stage_for_epoch(epoch: int, warm_epochs: int) -> StageType:
    return StageType.WARM if epoch < warm_epochs else StageType.TOTAL
