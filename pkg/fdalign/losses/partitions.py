import numpy as np

from fdalign.entities import RegionPartition
from fdalign.errors import InvalidArgumentError
from fdalign.tensor import Tensor
from fdalign.types import RegionSourceType


def _values(values) -> np.ndarray:
    # partitions are built from constants, never from the tape
    return values.data if isinstance(values, Tensor) else np.asarray(values, dtype=float)


def partition_by_norm(norm_hat, tau_fg: float, tau_bg: float) -> RegionPartition:
    if not 0 <= tau_bg < tau_fg <= 1:
        raise InvalidArgumentError(
            f"partition_by_norm: need 0 <= tau_bg < tau_fg <= 1,"
            f" got tau_bg={tau_bg}, tau_fg={tau_fg}"
        )
    values = _values(norm_hat)
    return RegionPartition(
        fg=values > tau_fg,
        bg=values < tau_bg,
        source=RegionSourceType.NORM_BASED,
    )


def partition_by_similarity(sim_map) -> RegionPartition:
    values = _values(sim_map)
    return RegionPartition(
        fg=values > 0,
        bg=values < 0,
        source=RegionSourceType.SIMILARITY_BASED,
    )


def partition_by_similarity_finegrained(sim_all) -> RegionPartition:
    """Background = non-positive similarity with every class ([..., C, H, W])."""
    values = _values(sim_all)
    background = values.max(axis=-3) <= 0
    return RegionPartition(
        fg=~background,
        bg=background,
        source=RegionSourceType.SIMILARITY_FINEGRAINED,
    )
