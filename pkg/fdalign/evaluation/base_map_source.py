from abc import ABC, abstractmethod

import numpy as np

from fdalign.entities import DecompositionMaps
from fdalign.types import MapSourceType, NormalizationType


class BaseMapSource(ABC):
    """Picks the feature-resolution localization map out of a decomposition."""

    normalization: NormalizationType = NormalizationType.MINMAX

    @staticmethod
    @abstractmethod
    def get_type() -> MapSourceType:
        pass

    @abstractmethod
    def score_map(self, decomp: DecompositionMaps) -> np.ndarray:
        pass
