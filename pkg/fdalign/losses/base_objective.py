from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from fdalign.cam import (
    minmax_extrema,
    minmax_normalize,
    norm_map,
    similarity_all_classes,
    similarity_map,
)
from fdalign.config import LossWeightsConfig
from fdalign.dropout import channel_mean, make_mask
from fdalign.entities import DropMask, ForwardBundle, RegionPartition
from fdalign.errors import InvalidArgumentError
from fdalign.losses.alignment_losses import (
    loss_drop,
    loss_norm,
    loss_sim,
    total_loss,
    warm_loss,
)
from fdalign.losses.partitions import (
    partition_by_norm,
    partition_by_similarity,
    partition_by_similarity_finegrained,
)
from fdalign.model import Model
from fdalign.tensor import Tensor, cross_entropy, detach, select_row
from fdalign.tensor.ops import select_rows
from fdalign.types import StageType

Labels = Union[int, Sequence[int], np.ndarray]


@dataclass(frozen=True)
class FrozenLossState:
    """Everything a loss evaluation treats as a constant.

    Replaying a state makes the objective a deterministic function of the
    parameters, which is what gradient checking needs.
    """

    drop_mask: Optional[DropMask] = None
    norm_extrema: Optional[Tuple[np.ndarray, np.ndarray]] = None
    norm_partition: Optional[RegionPartition] = None
    sim_partition: Optional[RegionPartition] = None


@dataclass(frozen=True)
class BatchLosses:
    """Batch-mean loss terms; disabled terms are the float 0.0."""

    ce: Tensor
    drop: Union[Tensor, float]
    sim: Union[Tensor, float]
    norm: Union[Tensor, float]
    total: Tensor
    logits: np.ndarray
    frozen: FrozenLossState

    def values(self) -> dict:
        def scalar(term):
            return term.item() if isinstance(term, Tensor) else float(term)

        return {
            "L_CE": scalar(self.ce),
            "L_sim": scalar(self.sim),
            "L_norm": scalar(self.norm),
            "L_drop": scalar(self.drop),
            "total": scalar(self.total),
        }


class BaseObjective(ABC):
    def __init__(self, weights: LossWeightsConfig) -> None:
        self._weights = weights

    @staticmethod
    @abstractmethod
    def get_type() -> StageType:
        pass

    @property
    def weights(self) -> LossWeightsConfig:
        return self._weights

    def compute(
        self,
        model: Model,
        images,
        labels: Labels,
        rng: Optional[np.random.Generator] = None,
        frozen: Optional[FrozenLossState] = None,
    ) -> BatchLosses:
        frozen = frozen or FrozenLossState()
        bundle = model.forward(images)
        ce = cross_entropy(bundle.logits, labels).mean()
        drop, drop_mask = self._drop_term(model, images, bundle, rng, frozen)
        return self._combine(
            model, bundle, labels, ce, drop, FrozenLossState(drop_mask=drop_mask), frozen
        )

    @abstractmethod
    def _combine(
        self,
        model: Model,
        bundle: ForwardBundle,
        labels: Labels,
        ce: Tensor,
        drop: Union[Tensor, float],
        state: FrozenLossState,
        frozen: FrozenLossState,
    ) -> BatchLosses:
        pass

    def _drop_term(self, model, images, bundle, rng, frozen):
        if self._weights.lambda_drop == 0:
            return 0.0, None
        mask = frozen.drop_mask
        if mask is None:
            if rng is None:
                raise InvalidArgumentError("attentive dropout needs a random generator")
            attn = channel_mean(detach(bundle.f_prime))
            mask = make_mask(attn, self._weights.gamma, self._weights.p, rng)
        f_drop = model.forward_with_drop(images, mask, f_prime=bundle.f_prime)
        reduction = self._weights.drop_loss_reduction_type
        return loss_drop(bundle.f_map, f_drop, reduction).mean(), mask


def class_rows(weights: Tensor, labels: Labels) -> Tensor:
    if np.ndim(labels) == 0:
        return select_row(weights, int(labels))
    return select_rows(weights, labels)


class WarmObjective(BaseObjective):
    """L_CE + lambda_drop * L_drop."""

    @staticmethod
    def get_type() -> StageType:
        return StageType.WARM

    def _combine(self, model, bundle, labels, ce, drop, state, frozen):
        total = warm_loss(ce, drop, self._weights)
        return BatchLosses(
            ce=ce,
            drop=drop,
            sim=0.0,
            norm=0.0,
            total=total,
            logits=bundle.logits.numpy(),
            frozen=state,
        )


class TotalObjective(BaseObjective):
    """L_CE + lambda_drop * L_drop + lambda_sim * L_sim + lambda_norm * L_norm."""

    @staticmethod
    def get_type() -> StageType:
        return StageType.TOTAL

    def _combine(self, model, bundle, labels, ce, drop, state, frozen):
        weights = self._weights
        f_map = bundle.f_map
        sim_term, norm_term = 0.0, 0.0
        norm_extrema = norm_partition = sim_partition = None

        if weights.lambda_sim > 0 or weights.lambda_norm > 0:
            sim = similarity_map(
                f_map, class_rows(model.head_weight, labels), allow_zero_weight=True
            )
            norms = norm_map(f_map)
            norm_extrema = frozen.norm_extrema or minmax_extrema(norms)
            norm_hat = minmax_normalize(norms, norm_extrema)

            if weights.lambda_sim > 0:
                norm_partition = frozen.norm_partition or partition_by_norm(
                    norm_hat, weights.tau_fg, weights.tau_bg
                )
                sim_term = loss_sim(sim, norm_partition).mean()

            if weights.lambda_norm > 0:
                sim_partition = frozen.sim_partition
                if sim_partition is None and weights.finegrained:
                    sim_partition = partition_by_similarity_finegrained(
                        similarity_all_classes(f_map, model.head_weight)
                    )
                elif sim_partition is None:
                    sim_partition = partition_by_similarity(sim)
                norm_term = loss_norm(norm_hat, sim_partition).mean()

        total = total_loss(ce, drop, sim_term, norm_term, weights)
        return BatchLosses(
            ce=ce,
            drop=drop,
            sim=sim_term,
            norm=norm_term,
            total=total,
            logits=bundle.logits.numpy(),
            frozen=FrozenLossState(
                drop_mask=state.drop_mask,
                norm_extrema=norm_extrema,
                norm_partition=norm_partition,
                sim_partition=sim_partition,
            ),
        )
