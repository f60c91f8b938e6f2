from fdalign.evaluation.map_sources import CamMapSource, NormMapSource, SimMapSource
from fdalign.types import MapSourceType
from fdalign.utils.base_registry import BaseRegistry


class MapSourceRegistry(BaseRegistry):
    _key_class = MapSourceType


MapSourceRegistry.register(MapSourceType.CAM, CamMapSource)
MapSourceRegistry.register(MapSourceType.NORM, NormMapSource)
MapSourceRegistry.register(MapSourceType.SIM, SimMapSource)
