from fdalign.types.base_int_enum import BaseIntEnum


class RegionSourceType(BaseIntEnum):
    NORM_BASED = 1
    SIMILARITY_BASED = 2
    SIMILARITY_FINEGRAINED = 3
