from dataclasses import dataclass

import numpy as np

from fdalign.types import RegionSourceType


@dataclass(frozen=True)
class RegionPartition:
    """Disjoint foreground/background masks over [..., H, W]; the rest is unknown."""

    fg: np.ndarray
    bg: np.ndarray
    source: RegionSourceType

    @property
    def unknown(self) -> np.ndarray:
        return ~(self.fg | self.bg)
