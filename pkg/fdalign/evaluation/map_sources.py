import numpy as np

from fdalign.entities import DecompositionMaps
from fdalign.evaluation.base_map_source import BaseMapSource
from fdalign.types import MapSourceType, NormalizationType


class CamMapSource(BaseMapSource):
    @staticmethod
    def get_type() -> MapSourceType:
        return MapSourceType.CAM

    def score_map(self, decomp: DecompositionMaps) -> np.ndarray:
        return decomp.cam


class NormMapSource(BaseMapSource):
    @staticmethod
    def get_type() -> MapSourceType:
        return MapSourceType.NORM

    def score_map(self, decomp: DecompositionMaps) -> np.ndarray:
        return decomp.norm_map


class SimMapSource(BaseMapSource):
    # similarity keeps its sign; only the positive peak is scaled to 1
    normalization = NormalizationType.MAX

    @staticmethod
    def get_type() -> MapSourceType:
        return MapSourceType.SIM

    def score_map(self, decomp: DecompositionMaps) -> np.ndarray:
        return decomp.sim_map
