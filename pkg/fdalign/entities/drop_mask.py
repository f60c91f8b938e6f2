from dataclasses import dataclass
from typing import Any, Dict

import numpy as np


@dataclass(frozen=True)
class DropMask:
    """Spatial keep mask over F'; `keep` is [..., H', W'] with True = keep."""

    keep: np.ndarray
    gamma: float
    p: float
    seed_state: Dict[str, Any]

    @property
    def dropped(self) -> np.ndarray:
        return ~self.keep

    @classmethod
    def keep_all(cls, shape) -> "DropMask":
        return cls(np.ones(shape, dtype=bool), gamma=1.0, p=0.0, seed_state={})
