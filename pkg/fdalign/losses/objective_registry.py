from fdalign.losses.base_objective import TotalObjective, WarmObjective
from fdalign.types import StageType
from fdalign.utils.base_registry import BaseRegistry


class ObjectiveRegistry(BaseRegistry):
    _key_class = StageType


ObjectiveRegistry.register(StageType.WARM, WarmObjective)
ObjectiveRegistry.register(StageType.TOTAL, TotalObjective)
