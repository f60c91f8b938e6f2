from fdalign.losses.alignment_losses import (
    loss_drop,
    loss_norm,
    loss_sim,
    region_mean,
    stage_for_epoch,
    total_loss,
    warm_loss,
)
from fdalign.losses.base_objective import (
    BaseObjective,
    BatchLosses,
    FrozenLossState,
    TotalObjective,
    WarmObjective,
)
from fdalign.losses.objective_registry import ObjectiveRegistry
from fdalign.losses.partitions import (
    partition_by_norm,
    partition_by_similarity,
    partition_by_similarity_finegrained,
)

__all__ = [
    BaseObjective,
    BatchLosses,
    FrozenLossState,
    ObjectiveRegistry,
    TotalObjective,
    WarmObjective,
    loss_drop,
    loss_norm,
    loss_sim,
    partition_by_norm,
    partition_by_similarity,
    partition_by_similarity_finegrained,
    region_mean,
    stage_for_epoch,
    total_loss,
    warm_loss,
]
