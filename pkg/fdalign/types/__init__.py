from fdalign.types.base_int_enum import BaseIntEnum
from fdalign.types.body_shape_type import BodyShapeType
from fdalign.types.command_type import CommandType
from fdalign.types.drop_loss_reduction_type import DropLossReductionType
from fdalign.types.map_source_type import MapSourceType
from fdalign.types.normalization_type import NormalizationType
from fdalign.types.region_source_type import RegionSourceType
from fdalign.types.rng_stream_type import RngStreamType
from fdalign.types.split_type import SplitType
from fdalign.types.stage_type import StageType
from fdalign.types.training_mode_type import TrainingModeType

__all__ = [
    BaseIntEnum,
    BodyShapeType,
    CommandType,
    DropLossReductionType,
    MapSourceType,
    NormalizationType,
    RegionSourceType,
    RngStreamType,
    SplitType,
    StageType,
    TrainingModeType,
]
